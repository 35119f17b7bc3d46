//! Variable occurrence, freedom, and freshness.
//!
//! Deciders answer with witness trees rather than booleans: the kernel
//! and the renaming machinery consume the witnesses structurally. A `No`
//! answer carries the path to an offending occurrence, for diagnostics.
//! Freedom is defined positively (a witness shows a variable is *not*
//! free) because every consumer downstream wants exactly that direction.

use crate::syntax::{Decision, Formula, Path, PathStep, Term, Variable};

/// Witness that a variable does not occur anywhere in a term.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum NotInTermWitness {
    /// The term is a variable distinct from the queried one.
    Var { other: Variable },
    /// The term is an application and the variable is in no argument.
    Func(Vec<NotInTermWitness>),
}

/// Witness that a variable has no free occurrence in a formula.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum NotFreeWitness {
    Atom(Vec<NotInTermWitness>),
    Implies(Box<NotFreeWitness>, Box<NotFreeWitness>),
    And(Box<NotFreeWitness>, Box<NotFreeWitness>),
    Or(Box<NotFreeWitness>, Box<NotFreeWitness>),
    /// The binder is the queried variable itself, shadowing the body.
    ForallSelf,
    ExistsSelf,
    /// The binder differs and the variable is not free in the body.
    Forall(Box<NotFreeWitness>),
    Exists(Box<NotFreeWitness>),
}

/// Witness that a variable appears nowhere in a formula, free or bound.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FreshWitness {
    Atom(Vec<NotInTermWitness>),
    Implies(Box<FreshWitness>, Box<FreshWitness>),
    And(Box<FreshWitness>, Box<FreshWitness>),
    Or(Box<FreshWitness>, Box<FreshWitness>),
    /// Records the binder, which must differ from the queried variable.
    Forall {
        binder: Variable,
        body: Box<FreshWitness>,
    },
    Exists {
        binder: Variable,
        body: Box<FreshWitness>,
    },
}

/// An upper bound on the variables occurring in a term vector or formula.
/// Every variable with a strictly greater index is fresh in the subject.
/// The bound is not necessarily least.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct VariableBound {
    pub bound: Variable,
}

/// Decides whether `x` occurs in `t`.
pub fn not_in_term(x: Variable, t: &Term) -> Decision<NotInTermWitness, Path> {
    match not_in_term_at(x, t, &mut Vec::new()) {
        Ok(w) => Decision::Yes(w),
        Err(p) => Decision::No(p),
    }
}

fn not_in_term_at(x: Variable, t: &Term, path: &mut Path) -> Result<NotInTermWitness, Path> {
    match t {
        Term::Var(y) => {
            if x == *y {
                Err(path.clone())
            } else {
                Ok(NotInTermWitness::Var { other: *y })
            }
        }
        Term::Func(app) => {
            let mut ws = Vec::with_capacity(app.args().len());
            for (i, arg) in app.args().iter().enumerate() {
                path.push(PathStep::Arg(i));
                ws.push(not_in_term_at(x, arg, path)?);
                path.pop();
            }
            Ok(NotInTermWitness::Func(ws))
        }
    }
}

/// Decides whether `x` occurs in any term of `ts`. Yes carries one
/// witness per term; the empty vector yields the empty witness list.
pub fn not_in_terms(x: Variable, ts: &[Term]) -> Decision<Vec<NotInTermWitness>, Path> {
    let mut ws = Vec::with_capacity(ts.len());
    for (i, t) in ts.iter().enumerate() {
        let mut path = vec![PathStep::Arg(i)];
        match not_in_term_at(x, t, &mut path) {
            Ok(w) => ws.push(w),
            Err(_) => return Decision::No(path),
        }
    }
    Decision::Yes(ws)
}

/// Decides whether `x` is free in `a`. The quantifier case short-circuits
/// when the binder equals `x`.
pub fn not_free_in(x: Variable, a: &Formula) -> Decision<NotFreeWitness, Path> {
    match not_free_at(x, a, &mut Vec::new()) {
        Ok(w) => Decision::Yes(w),
        Err(p) => Decision::No(p),
    }
}

fn not_free_at(x: Variable, a: &Formula, path: &mut Path) -> Result<NotFreeWitness, Path> {
    match a {
        Formula::Atom(atom) => {
            let mut ws = Vec::with_capacity(atom.args().len());
            for (i, t) in atom.args().iter().enumerate() {
                path.push(PathStep::Arg(i));
                ws.push(not_in_term_at(x, t, path)?);
                path.pop();
            }
            Ok(NotFreeWitness::Atom(ws))
        }
        Formula::Implies(a1, a2) => Ok(NotFreeWitness::Implies(
            branch(x, a1, path, PathStep::Left, not_free_at)?,
            branch(x, a2, path, PathStep::Right, not_free_at)?,
        )),
        Formula::And(a1, a2) => Ok(NotFreeWitness::And(
            branch(x, a1, path, PathStep::Left, not_free_at)?,
            branch(x, a2, path, PathStep::Right, not_free_at)?,
        )),
        Formula::Or(a1, a2) => Ok(NotFreeWitness::Or(
            branch(x, a1, path, PathStep::Left, not_free_at)?,
            branch(x, a2, path, PathStep::Right, not_free_at)?,
        )),
        Formula::Forall(y, body) => {
            if x == *y {
                Ok(NotFreeWitness::ForallSelf)
            } else {
                Ok(NotFreeWitness::Forall(branch(
                    x,
                    body,
                    path,
                    PathStep::Body,
                    not_free_at,
                )?))
            }
        }
        Formula::Exists(y, body) => {
            if x == *y {
                Ok(NotFreeWitness::ExistsSelf)
            } else {
                Ok(NotFreeWitness::Exists(branch(
                    x,
                    body,
                    path,
                    PathStep::Body,
                    not_free_at,
                )?))
            }
        }
    }
}

fn branch<W>(
    x: Variable,
    a: &Formula,
    path: &mut Path,
    step: PathStep,
    rec: fn(Variable, &Formula, &mut Path) -> Result<W, Path>,
) -> Result<Box<W>, Path> {
    path.push(step);
    let w = rec(x, a, path)?;
    path.pop();
    Ok(Box::new(w))
}

/// Decides whether `x` is fresh in `a`: neither free, nor a binder, nor
/// inside any term.
pub fn fresh_in(x: Variable, a: &Formula) -> Decision<FreshWitness, Path> {
    match fresh_at(x, a, &mut Vec::new()) {
        Ok(w) => Decision::Yes(w),
        Err(p) => Decision::No(p),
    }
}

fn fresh_at(x: Variable, a: &Formula, path: &mut Path) -> Result<FreshWitness, Path> {
    match a {
        Formula::Atom(atom) => {
            let mut ws = Vec::with_capacity(atom.args().len());
            for (i, t) in atom.args().iter().enumerate() {
                path.push(PathStep::Arg(i));
                ws.push(not_in_term_at(x, t, path)?);
                path.pop();
            }
            Ok(FreshWitness::Atom(ws))
        }
        Formula::Implies(a1, a2) => Ok(FreshWitness::Implies(
            branch(x, a1, path, PathStep::Left, fresh_at)?,
            branch(x, a2, path, PathStep::Right, fresh_at)?,
        )),
        Formula::And(a1, a2) => Ok(FreshWitness::And(
            branch(x, a1, path, PathStep::Left, fresh_at)?,
            branch(x, a2, path, PathStep::Right, fresh_at)?,
        )),
        Formula::Or(a1, a2) => Ok(FreshWitness::Or(
            branch(x, a1, path, PathStep::Left, fresh_at)?,
            branch(x, a2, path, PathStep::Right, fresh_at)?,
        )),
        Formula::Forall(y, body) => {
            if x == *y {
                path.push(PathStep::Binder);
                let p = path.clone();
                path.pop();
                Err(p)
            } else {
                Ok(FreshWitness::Forall {
                    binder: *y,
                    body: branch(x, body, path, PathStep::Body, fresh_at)?,
                })
            }
        }
        Formula::Exists(y, body) => {
            if x == *y {
                path.push(PathStep::Binder);
                let p = path.clone();
                path.pop();
                Err(p)
            } else {
                Ok(FreshWitness::Exists {
                    binder: *y,
                    body: branch(x, body, path, PathStep::Body, fresh_at)?,
                })
            }
        }
    }
}

/// Checks a [`NotInTermWitness`] against the pair it claims to cover.
pub fn validate_not_in_term(w: &NotInTermWitness, x: Variable, t: &Term) -> bool {
    match (w, t) {
        (NotInTermWitness::Var { other }, Term::Var(y)) => other == y && x != *y,
        (NotInTermWitness::Func(ws), Term::Func(app)) => {
            ws.len() == app.args().len()
                && ws
                    .iter()
                    .zip(app.args())
                    .all(|(w, arg)| validate_not_in_term(w, x, arg))
        }
        _ => false,
    }
}

pub fn validate_not_in_terms(ws: &[NotInTermWitness], x: Variable, ts: &[Term]) -> bool {
    ws.len() == ts.len()
        && ws
            .iter()
            .zip(ts)
            .all(|(w, t)| validate_not_in_term(w, x, t))
}

/// Checks a [`NotFreeWitness`] against the pair it claims to cover.
pub fn validate_not_free(w: &NotFreeWitness, x: Variable, a: &Formula) -> bool {
    match (w, a) {
        (NotFreeWitness::Atom(ws), Formula::Atom(atom)) => {
            validate_not_in_terms(ws, x, atom.args())
        }
        (NotFreeWitness::Implies(w1, w2), Formula::Implies(a1, a2))
        | (NotFreeWitness::And(w1, w2), Formula::And(a1, a2))
        | (NotFreeWitness::Or(w1, w2), Formula::Or(a1, a2)) => {
            validate_not_free(w1, x, a1) && validate_not_free(w2, x, a2)
        }
        (NotFreeWitness::ForallSelf, Formula::Forall(y, _))
        | (NotFreeWitness::ExistsSelf, Formula::Exists(y, _)) => x == *y,
        (NotFreeWitness::Forall(w0), Formula::Forall(_, body))
        | (NotFreeWitness::Exists(w0), Formula::Exists(_, body)) => validate_not_free(w0, x, body),
        _ => false,
    }
}

/// Checks a [`FreshWitness`] against the pair it claims to cover.
pub fn validate_fresh(w: &FreshWitness, x: Variable, a: &Formula) -> bool {
    match (w, a) {
        (FreshWitness::Atom(ws), Formula::Atom(atom)) => validate_not_in_terms(ws, x, atom.args()),
        (FreshWitness::Implies(w1, w2), Formula::Implies(a1, a2))
        | (FreshWitness::And(w1, w2), Formula::And(a1, a2))
        | (FreshWitness::Or(w1, w2), Formula::Or(a1, a2)) => {
            validate_fresh(w1, x, a1) && validate_fresh(w2, x, a2)
        }
        (FreshWitness::Forall { binder, body }, Formula::Forall(y, inner))
        | (FreshWitness::Exists { binder, body }, Formula::Exists(y, inner)) => {
            binder == y && *y != x && validate_fresh(body, x, inner)
        }
        _ => false,
    }
}

/// Freshness implies absence of free occurrences; the witness converts
/// structurally.
pub fn not_free_from_fresh(w: &FreshWitness) -> NotFreeWitness {
    match w {
        FreshWitness::Atom(ws) => NotFreeWitness::Atom(ws.clone()),
        FreshWitness::Implies(w1, w2) => NotFreeWitness::Implies(
            Box::new(not_free_from_fresh(w1)),
            Box::new(not_free_from_fresh(w2)),
        ),
        FreshWitness::And(w1, w2) => NotFreeWitness::And(
            Box::new(not_free_from_fresh(w1)),
            Box::new(not_free_from_fresh(w2)),
        ),
        FreshWitness::Or(w1, w2) => NotFreeWitness::Or(
            Box::new(not_free_from_fresh(w1)),
            Box::new(not_free_from_fresh(w2)),
        ),
        FreshWitness::Forall { body, .. } => {
            NotFreeWitness::Forall(Box::new(not_free_from_fresh(body)))
        }
        FreshWitness::Exists { body, .. } => {
            NotFreeWitness::Exists(Box::new(not_free_from_fresh(body)))
        }
    }
}

// The max computation keeps the second argument on ties. Ties mean equal
// indices, so the choice is semantically irrelevant, but fixing it keeps
// the computation deterministic.
fn max_prefer_second(first: Variable, second: Variable) -> Variable {
    if second.index() >= first.index() {
        second
    } else {
        first
    }
}

/// Upper bound on the variables occurring in a vector of terms. The empty
/// vector is bounded by variable 0.
pub fn max_var_terms(ts: &[Term]) -> VariableBound {
    let mut bound = Variable(0);
    for t in ts {
        bound = max_prefer_second(max_var_term(t), bound);
    }
    VariableBound { bound }
}

fn max_var_term(t: &Term) -> Variable {
    match t {
        Term::Var(x) => *x,
        Term::Func(app) => max_var_terms(app.args()).bound,
    }
}

/// Upper bound on the variables occurring in a formula, binders included.
/// For a quantified formula this takes the greater of the body bound and
/// the binder.
pub fn max_var(a: &Formula) -> VariableBound {
    let bound = match a {
        Formula::Atom(atom) => max_var_terms(atom.args()).bound,
        Formula::Implies(a1, a2) | Formula::And(a1, a2) | Formula::Or(a1, a2) => {
            max_prefer_second(max_var(a1).bound, max_var(a2).bound)
        }
        Formula::Forall(x, body) | Formula::Exists(x, body) => {
            max_prefer_second(*x, max_var(body).bound)
        }
    };
    VariableBound { bound }
}

/// A variable fresh in `a`: the successor of the upper bound, together
/// with its freshness witness.
pub fn fresh(a: &Formula) -> (Variable, FreshWitness) {
    let candidate = Variable(max_var(a).bound.index() + 1);
    match fresh_in(candidate, a) {
        Decision::Yes(w) => (candidate, w),
        Decision::No(_) => unreachable!("successor of the variable bound must be fresh"),
    }
}
