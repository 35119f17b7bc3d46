//! Capture-avoiding substitution as checkable evidence.
//!
//! A substitution is not a bare function here: `apply_substitution`
//! returns the substituted formula together with a derivation tree
//! relating source and result node by node. The derivation can be
//! re-verified independently of how it was produced (`verify_evidence`),
//! which is what the kernel does instead of trusting prover-supplied
//! certificates. Substituting `t` for `x` is possible exactly when `t`
//! is *free for* `x`: no variable of `t` may be captured by a binder.

use crate::binding::{
    not_free_in, not_in_term, validate_not_free, validate_not_in_term, NotFreeWitness,
    NotInTermWitness,
};
use crate::syntax::{Decision, Formula, Path, PathStep, Term, Variable};
use thiserror::Error;

/// Witness that a term can be substituted for a variable without capture.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FreeForWitness {
    /// The variable is not free at all, so any term can go in.
    NotFree(NotFreeWitness),
    Atom,
    Implies(Box<FreeForWitness>, Box<FreeForWitness>),
    And(Box<FreeForWitness>, Box<FreeForWitness>),
    Or(Box<FreeForWitness>, Box<FreeForWitness>),
    /// The binder is the substituted variable; nothing happens below it.
    ForallSelf,
    ExistsSelf,
    /// The binder does not occur in the term, so descending is safe.
    Forall {
        binder_not_in_term: NotInTermWitness,
        body: Box<FreeForWitness>,
    },
    Exists {
        binder_not_in_term: NotInTermWitness,
        body: Box<FreeForWitness>,
    },
}

/// Where a substitution would capture: the path to the offending
/// quantifier and the binder that occurs in the substituted term.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Capture {
    pub path: Path,
    pub binder: Variable,
}

/// Term-level substitution evidence, one node per source term.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TermSubEvidence {
    /// The source term is exactly the substituted variable.
    VarHit,
    /// The source term is a different variable, left unchanged.
    VarMiss(Variable),
    Func(Vec<TermSubEvidence>),
}

/// The quadruple a piece of substitution evidence claims to relate:
/// `source [ var / term ] == result`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SubstitutionClaim {
    pub source: Formula,
    pub var: Variable,
    pub term: Term,
    pub result: Formula,
}

/// One node of a substitution derivation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SubEvidenceNode {
    /// Replacing a variable with itself leaves the formula unchanged.
    Ident,
    /// The variable is not free, so the formula is unchanged.
    NotFree(NotFreeWitness),
    Atom(Vec<TermSubEvidence>),
    Implies(Box<SubEvidenceNode>, Box<SubEvidenceNode>),
    And(Box<SubEvidenceNode>, Box<SubEvidenceNode>),
    Or(Box<SubEvidenceNode>, Box<SubEvidenceNode>),
    /// The binder equals the substituted variable; the quantified
    /// formula is unchanged.
    ForallSelf,
    ExistsSelf,
    /// Substitution descends under a binder that does not occur in the
    /// substituted term.
    Forall {
        binder_not_in_term: NotInTermWitness,
        body: Box<SubEvidenceNode>,
    },
    Exists {
        binder_not_in_term: NotInTermWitness,
        body: Box<SubEvidenceNode>,
    },
}

/// A full substitution derivation: the claim plus the node tree backing it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SubstitutionEvidence {
    pub claim: SubstitutionClaim,
    pub node: SubEvidenceNode,
}

/// A computed substitution: the result formula and its derivation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SubstitutionResult {
    pub result: Formula,
    pub evidence: SubstitutionEvidence,
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum SubstitutionError {
    #[error("free-for witness is malformed for this substitution at {0:?}")]
    InvalidWitness(Path),
    #[error("{0}")]
    Evidence(#[from] EvidenceError),
    #[error("replacement term is not a variable")]
    ReplacementNotVariable,
    #[error("not-in-term witness does not cover the substituted variable and term")]
    OccurrenceWitnessMismatch,
    #[error("not-free witness does not cover the inverted variable and source")]
    NotFreeWitnessMismatch,
    #[error("evidences do not share a source, variable, and term")]
    ClaimMismatch,
    #[error("evidences for the same substitution disagree: `{left}` vs `{right}`")]
    Disagreement { left: String, right: String },
    #[error("evidence combinators require matching variable and term")]
    CombinatorMismatch,
}

/// First node of a substitution derivation that fails re-verification.
#[derive(Clone, PartialEq, Eq, Debug, Error)]
#[error("substitution evidence rejected at {path:?}: {fault}")]
pub struct EvidenceError {
    pub path: Path,
    pub fault: EvidenceFault,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Error)]
pub enum EvidenceFault {
    #[error("node does not match the shape of the claimed formulas")]
    Shape,
    #[error("ident requires replacing a variable with itself and an unchanged result")]
    Ident,
    #[error("not-free witness does not validate")]
    NotFree,
    #[error("claimed result changed where the evidence says it must not")]
    Unchanged,
    #[error("binder occurs in the substituted term")]
    BinderInTerm,
    #[error("binder must equal the substituted variable")]
    BinderNotSelf,
    #[error("binder must differ from the substituted variable")]
    BinderSelf,
    #[error("term-level evidence does not match the terms")]
    TermEvidence,
}

fn fault(path: &Path, fault: EvidenceFault) -> EvidenceError {
    EvidenceError {
        path: path.clone(),
        fault,
    }
}

/// Decides whether `t` is free for `x` in `a`.
pub fn free_for(t: &Term, x: Variable, a: &Formula) -> Decision<FreeForWitness, Capture> {
    match free_for_at(t, x, a, &mut Vec::new()) {
        Ok(w) => Decision::Yes(w),
        Err(c) => Decision::No(c),
    }
}

fn free_for_at(
    t: &Term,
    x: Variable,
    a: &Formula,
    path: &mut Path,
) -> Result<FreeForWitness, Capture> {
    if let Decision::Yes(w) = not_free_in(x, a) {
        return Ok(FreeForWitness::NotFree(w));
    }
    match a {
        Formula::Atom(_) => Ok(FreeForWitness::Atom),
        Formula::Implies(a1, a2) => {
            path.push(PathStep::Left);
            let w1 = free_for_at(t, x, a1, path)?;
            path.pop();
            path.push(PathStep::Right);
            let w2 = free_for_at(t, x, a2, path)?;
            path.pop();
            Ok(FreeForWitness::Implies(Box::new(w1), Box::new(w2)))
        }
        Formula::And(a1, a2) => {
            path.push(PathStep::Left);
            let w1 = free_for_at(t, x, a1, path)?;
            path.pop();
            path.push(PathStep::Right);
            let w2 = free_for_at(t, x, a2, path)?;
            path.pop();
            Ok(FreeForWitness::And(Box::new(w1), Box::new(w2)))
        }
        Formula::Or(a1, a2) => {
            path.push(PathStep::Left);
            let w1 = free_for_at(t, x, a1, path)?;
            path.pop();
            path.push(PathStep::Right);
            let w2 = free_for_at(t, x, a2, path)?;
            path.pop();
            Ok(FreeForWitness::Or(Box::new(w1), Box::new(w2)))
        }
        Formula::Forall(y, body) => {
            if *y == x {
                return Ok(FreeForWitness::ForallSelf);
            }
            match not_in_term(*y, t) {
                Decision::Yes(niw) => {
                    path.push(PathStep::Body);
                    let wb = free_for_at(t, x, body, path)?;
                    path.pop();
                    Ok(FreeForWitness::Forall {
                        binder_not_in_term: niw,
                        body: Box::new(wb),
                    })
                }
                Decision::No(_) => Err(Capture {
                    path: path.clone(),
                    binder: *y,
                }),
            }
        }
        Formula::Exists(y, body) => {
            if *y == x {
                return Ok(FreeForWitness::ExistsSelf);
            }
            match not_in_term(*y, t) {
                Decision::Yes(niw) => {
                    path.push(PathStep::Body);
                    let wb = free_for_at(t, x, body, path)?;
                    path.pop();
                    Ok(FreeForWitness::Exists {
                        binder_not_in_term: niw,
                        body: Box::new(wb),
                    })
                }
                Decision::No(_) => Err(Capture {
                    path: path.clone(),
                    binder: *y,
                }),
            }
        }
    }
}

/// Checks a [`FreeForWitness`] against the triple it claims to cover.
pub fn validate_free_for(w: &FreeForWitness, t: &Term, x: Variable, a: &Formula) -> bool {
    match (w, a) {
        (FreeForWitness::NotFree(nf), _) => validate_not_free(nf, x, a),
        (FreeForWitness::Atom, Formula::Atom(_)) => true,
        (FreeForWitness::Implies(w1, w2), Formula::Implies(a1, a2))
        | (FreeForWitness::And(w1, w2), Formula::And(a1, a2))
        | (FreeForWitness::Or(w1, w2), Formula::Or(a1, a2)) => {
            validate_free_for(w1, t, x, a1) && validate_free_for(w2, t, x, a2)
        }
        (FreeForWitness::ForallSelf, Formula::Forall(y, _))
        | (FreeForWitness::ExistsSelf, Formula::Exists(y, _)) => *y == x,
        (
            FreeForWitness::Forall {
                binder_not_in_term,
                body,
            },
            Formula::Forall(y, inner),
        )
        | (
            FreeForWitness::Exists {
                binder_not_in_term,
                body,
            },
            Formula::Exists(y, inner),
        ) => {
            validate_not_in_term(binder_not_in_term, *y, t) && validate_free_for(body, t, x, inner)
        }
        _ => false,
    }
}

// Term-level substitution is total: replace every occurrence of x by t.
fn substitute_term(u: &Term, x: Variable, t: &Term) -> (Term, TermSubEvidence) {
    match u {
        Term::Var(y) if *y == x => (t.clone(), TermSubEvidence::VarHit),
        Term::Var(y) => (u.clone(), TermSubEvidence::VarMiss(*y)),
        Term::Func(app) => {
            let mut out = Vec::with_capacity(app.args().len());
            let mut evs = Vec::with_capacity(app.args().len());
            for arg in app.args() {
                let (v, e) = substitute_term(arg, x, t);
                out.push(v);
                evs.push(e);
            }
            let rebuilt = Term::func(app.symbol(), out).expect("arity preserved");
            (rebuilt, TermSubEvidence::Func(evs))
        }
    }
}

fn substitute_terms(us: &[Term], x: Variable, t: &Term) -> (Vec<Term>, Vec<TermSubEvidence>) {
    let mut vs = Vec::with_capacity(us.len());
    let mut evs = Vec::with_capacity(us.len());
    for u in us {
        let (v, e) = substitute_term(u, x, t);
        vs.push(v);
        evs.push(e);
    }
    (vs, evs)
}

/// Computes `a [ x / t ]` under a capture-avoidance witness.
///
/// The witness is validated first; a malformed witness for this triple is
/// rejected. Evidence choice is deterministic: `ident` when the term is
/// the substituted variable itself, the shadowed-binder node when a
/// quantifier binds `x`, and the `not-free` node exactly when the caller
/// passed a not-free witness.
pub fn apply_substitution(
    a: &Formula,
    x: Variable,
    t: &Term,
    w: &FreeForWitness,
) -> Result<SubstitutionResult, SubstitutionError> {
    if !validate_free_for(w, t, x, a) {
        return Err(SubstitutionError::InvalidWitness(Vec::new()));
    }
    if *t == Term::Var(x) {
        return Ok(SubstitutionResult {
            result: a.clone(),
            evidence: SubstitutionEvidence::identity(a, x),
        });
    }
    let (result, node) = apply_at(a, x, t, w);
    Ok(SubstitutionResult {
        result: result.clone(),
        evidence: SubstitutionEvidence {
            claim: SubstitutionClaim {
                source: a.clone(),
                var: x,
                term: t.clone(),
                result,
            },
            node,
        },
    })
}

fn apply_at(a: &Formula, x: Variable, t: &Term, w: &FreeForWitness) -> (Formula, SubEvidenceNode) {
    // A quantifier binding x shadows the substitution no matter which
    // witness constructor was supplied.
    match a {
        Formula::Forall(y, _) if *y == x => return (a.clone(), SubEvidenceNode::ForallSelf),
        Formula::Exists(y, _) if *y == x => return (a.clone(), SubEvidenceNode::ExistsSelf),
        _ => {}
    }
    match (w, a) {
        (FreeForWitness::NotFree(nf), _) => (a.clone(), SubEvidenceNode::NotFree(nf.clone())),
        (FreeForWitness::Atom, Formula::Atom(atom)) => {
            let (vs, evs) = substitute_terms(atom.args(), x, t);
            let rebuilt = Formula::atom(atom.relation(), vs).expect("arity preserved");
            (rebuilt, SubEvidenceNode::Atom(evs))
        }
        (FreeForWitness::Implies(w1, w2), Formula::Implies(a1, a2)) => {
            let (b1, e1) = apply_at(a1, x, t, w1);
            let (b2, e2) = apply_at(a2, x, t, w2);
            (
                Formula::implies(b1, b2),
                SubEvidenceNode::Implies(Box::new(e1), Box::new(e2)),
            )
        }
        (FreeForWitness::And(w1, w2), Formula::And(a1, a2)) => {
            let (b1, e1) = apply_at(a1, x, t, w1);
            let (b2, e2) = apply_at(a2, x, t, w2);
            (
                Formula::and(b1, b2),
                SubEvidenceNode::And(Box::new(e1), Box::new(e2)),
            )
        }
        (FreeForWitness::Or(w1, w2), Formula::Or(a1, a2)) => {
            let (b1, e1) = apply_at(a1, x, t, w1);
            let (b2, e2) = apply_at(a2, x, t, w2);
            (
                Formula::or(b1, b2),
                SubEvidenceNode::Or(Box::new(e1), Box::new(e2)),
            )
        }
        (
            FreeForWitness::Forall {
                binder_not_in_term,
                body,
            },
            Formula::Forall(y, inner),
        ) => {
            let (b, e) = apply_at(inner, x, t, body);
            (
                Formula::forall(*y, b),
                SubEvidenceNode::Forall {
                    binder_not_in_term: binder_not_in_term.clone(),
                    body: Box::new(e),
                },
            )
        }
        (
            FreeForWitness::Exists {
                binder_not_in_term,
                body,
            },
            Formula::Exists(y, inner),
        ) => {
            let (b, e) = apply_at(inner, x, t, body);
            (
                Formula::exists(*y, b),
                SubEvidenceNode::Exists {
                    binder_not_in_term: binder_not_in_term.clone(),
                    body: Box::new(e),
                },
            )
        }
        // validate_free_for already ruled these out
        _ => unreachable!("witness shape was validated"),
    }
}

/// Re-verifies a substitution derivation against its claim, node by node.
pub fn verify_evidence(e: &SubstitutionEvidence) -> Result<(), EvidenceError> {
    verify_node(
        &e.claim.source,
        e.claim.var,
        &e.claim.term,
        &e.claim.result,
        &e.node,
        &mut Vec::new(),
    )
}

fn verify_node(
    source: &Formula,
    var: Variable,
    term: &Term,
    result: &Formula,
    node: &SubEvidenceNode,
    path: &mut Path,
) -> Result<(), EvidenceError> {
    match node {
        SubEvidenceNode::Ident => {
            if *term != Term::Var(var) || source != result {
                return Err(fault(path, EvidenceFault::Ident));
            }
            Ok(())
        }
        SubEvidenceNode::NotFree(nf) => {
            if !validate_not_free(nf, var, source) {
                return Err(fault(path, EvidenceFault::NotFree));
            }
            if source != result {
                return Err(fault(path, EvidenceFault::Unchanged));
            }
            Ok(())
        }
        SubEvidenceNode::Atom(evs) => match (source, result) {
            (Formula::Atom(s), Formula::Atom(r)) if s.relation() == r.relation() => {
                if evs.len() != s.args().len() {
                    return Err(fault(path, EvidenceFault::TermEvidence));
                }
                for (i, ((u, v), te)) in s.args().iter().zip(r.args()).zip(evs).enumerate() {
                    path.push(PathStep::Arg(i));
                    verify_term_node(u, var, term, v, te, path)?;
                    path.pop();
                }
                Ok(())
            }
            _ => Err(fault(path, EvidenceFault::Shape)),
        },
        SubEvidenceNode::Implies(e1, e2) => match (source, result) {
            (Formula::Implies(s1, s2), Formula::Implies(r1, r2)) => {
                descend(s1, var, term, r1, e1, path, PathStep::Left)?;
                descend(s2, var, term, r2, e2, path, PathStep::Right)
            }
            _ => Err(fault(path, EvidenceFault::Shape)),
        },
        SubEvidenceNode::And(e1, e2) => match (source, result) {
            (Formula::And(s1, s2), Formula::And(r1, r2)) => {
                descend(s1, var, term, r1, e1, path, PathStep::Left)?;
                descend(s2, var, term, r2, e2, path, PathStep::Right)
            }
            _ => Err(fault(path, EvidenceFault::Shape)),
        },
        SubEvidenceNode::Or(e1, e2) => match (source, result) {
            (Formula::Or(s1, s2), Formula::Or(r1, r2)) => {
                descend(s1, var, term, r1, e1, path, PathStep::Left)?;
                descend(s2, var, term, r2, e2, path, PathStep::Right)
            }
            _ => Err(fault(path, EvidenceFault::Shape)),
        },
        SubEvidenceNode::ForallSelf => match source {
            Formula::Forall(y, _) if *y == var => {
                if source != result {
                    return Err(fault(path, EvidenceFault::Unchanged));
                }
                Ok(())
            }
            Formula::Forall(..) => Err(fault(path, EvidenceFault::BinderNotSelf)),
            _ => Err(fault(path, EvidenceFault::Shape)),
        },
        SubEvidenceNode::ExistsSelf => match source {
            Formula::Exists(y, _) if *y == var => {
                if source != result {
                    return Err(fault(path, EvidenceFault::Unchanged));
                }
                Ok(())
            }
            Formula::Exists(..) => Err(fault(path, EvidenceFault::BinderNotSelf)),
            _ => Err(fault(path, EvidenceFault::Shape)),
        },
        SubEvidenceNode::Forall {
            binder_not_in_term,
            body,
        } => match (source, result) {
            (Formula::Forall(y, s0), Formula::Forall(z, r0)) if y == z => {
                if *y == var {
                    return Err(fault(path, EvidenceFault::BinderSelf));
                }
                if !validate_not_in_term(binder_not_in_term, *y, term) {
                    return Err(fault(path, EvidenceFault::BinderInTerm));
                }
                descend(s0, var, term, r0, body, path, PathStep::Body)
            }
            _ => Err(fault(path, EvidenceFault::Shape)),
        },
        SubEvidenceNode::Exists {
            binder_not_in_term,
            body,
        } => match (source, result) {
            (Formula::Exists(y, s0), Formula::Exists(z, r0)) if y == z => {
                if *y == var {
                    return Err(fault(path, EvidenceFault::BinderSelf));
                }
                if !validate_not_in_term(binder_not_in_term, *y, term) {
                    return Err(fault(path, EvidenceFault::BinderInTerm));
                }
                descend(s0, var, term, r0, body, path, PathStep::Body)
            }
            _ => Err(fault(path, EvidenceFault::Shape)),
        },
    }
}

#[allow(clippy::too_many_arguments)]
fn descend(
    source: &Formula,
    var: Variable,
    term: &Term,
    result: &Formula,
    node: &SubEvidenceNode,
    path: &mut Path,
    step: PathStep,
) -> Result<(), EvidenceError> {
    path.push(step);
    let out = verify_node(source, var, term, result, node, path);
    path.pop();
    out
}

fn verify_term_node(
    u: &Term,
    var: Variable,
    term: &Term,
    v: &Term,
    node: &TermSubEvidence,
    path: &mut Path,
) -> Result<(), EvidenceError> {
    match node {
        TermSubEvidence::VarHit => {
            if *u == Term::Var(var) && v == term {
                Ok(())
            } else {
                Err(fault(path, EvidenceFault::TermEvidence))
            }
        }
        TermSubEvidence::VarMiss(other) => {
            if *u == Term::Var(*other) && *other != var && v == u {
                Ok(())
            } else {
                Err(fault(path, EvidenceFault::TermEvidence))
            }
        }
        TermSubEvidence::Func(evs) => match (u, v) {
            (Term::Func(ua), Term::Func(va))
                if ua.symbol() == va.symbol() && evs.len() == ua.args().len() =>
            {
                for (i, ((s, r), te)) in ua.args().iter().zip(va.args()).zip(evs).enumerate() {
                    path.push(PathStep::Arg(i));
                    verify_term_node(s, var, term, r, te, path)?;
                    path.pop();
                }
                Ok(())
            }
            _ => Err(fault(path, EvidenceFault::TermEvidence)),
        },
    }
}

impl SubstitutionEvidence {
    /// Evidence that replacing `x` with itself leaves `a` unchanged.
    pub fn identity(a: &Formula, x: Variable) -> SubstitutionEvidence {
        SubstitutionEvidence {
            claim: SubstitutionClaim {
                source: a.clone(),
                var: x,
                term: Term::Var(x),
                result: a.clone(),
            },
            node: SubEvidenceNode::Ident,
        }
    }

    /// Evidence that substituting into a formula where `x` is not free
    /// changes nothing. The witness must cover `(x, a)`.
    pub fn unchanged(
        a: &Formula,
        x: Variable,
        t: &Term,
        w: NotFreeWitness,
    ) -> Result<SubstitutionEvidence, SubstitutionError> {
        if !validate_not_free(&w, x, a) {
            return Err(SubstitutionError::NotFreeWitnessMismatch);
        }
        Ok(SubstitutionEvidence {
            claim: SubstitutionClaim {
                source: a.clone(),
                var: x,
                term: t.clone(),
                result: a.clone(),
            },
            node: SubEvidenceNode::NotFree(w),
        })
    }

    /// Combines evidence for the two sides of an implication.
    pub fn implies(
        e1: SubstitutionEvidence,
        e2: SubstitutionEvidence,
    ) -> Result<SubstitutionEvidence, SubstitutionError> {
        Self::binary(e1, e2, Formula::implies, SubEvidenceNode::Implies)
    }

    /// Combines evidence for the two sides of a conjunction.
    pub fn and(
        e1: SubstitutionEvidence,
        e2: SubstitutionEvidence,
    ) -> Result<SubstitutionEvidence, SubstitutionError> {
        Self::binary(e1, e2, Formula::and, SubEvidenceNode::And)
    }

    /// Combines evidence for the two sides of a disjunction.
    pub fn or(
        e1: SubstitutionEvidence,
        e2: SubstitutionEvidence,
    ) -> Result<SubstitutionEvidence, SubstitutionError> {
        Self::binary(e1, e2, Formula::or, SubEvidenceNode::Or)
    }

    fn binary(
        e1: SubstitutionEvidence,
        e2: SubstitutionEvidence,
        connect: fn(Formula, Formula) -> Formula,
        node: fn(Box<SubEvidenceNode>, Box<SubEvidenceNode>) -> SubEvidenceNode,
    ) -> Result<SubstitutionEvidence, SubstitutionError> {
        if e1.claim.var != e2.claim.var || e1.claim.term != e2.claim.term {
            return Err(SubstitutionError::CombinatorMismatch);
        }
        Ok(SubstitutionEvidence {
            claim: SubstitutionClaim {
                source: connect(e1.claim.source, e2.claim.source),
                var: e1.claim.var,
                term: e1.claim.term,
                result: connect(e1.claim.result, e2.claim.result),
            },
            node: node(Box::new(e1.node), Box::new(e2.node)),
        })
    }
}

/// Substitution is functional: two valid derivations that share a source,
/// variable, and term must produce structurally equal results.
pub fn check_functional(
    e1: &SubstitutionEvidence,
    e2: &SubstitutionEvidence,
) -> Result<(), SubstitutionError> {
    verify_evidence(e1)?;
    verify_evidence(e2)?;
    if e1.claim.source != e2.claim.source
        || e1.claim.var != e2.claim.var
        || e1.claim.term != e2.claim.term
    {
        return Err(SubstitutionError::ClaimMismatch);
    }
    if crate::syntax::formula_eq(&e1.claim.result, &e2.claim.result).is_no() {
        return Err(SubstitutionError::Disagreement {
            left: e1.claim.result.to_string(),
            right: e2.claim.result.to_string(),
        });
    }
    Ok(())
}

/// If the substituted variable does not occur in the replacement term,
/// it is not free in the result (and here is the witness).
pub fn not_free_after_substitution(
    x_not_in_term: &NotInTermWitness,
    e: &SubstitutionEvidence,
) -> Result<NotFreeWitness, SubstitutionError> {
    verify_evidence(e)?;
    if !validate_not_in_term(x_not_in_term, e.claim.var, &e.claim.term) {
        // covers the absurd ident case: x cannot be absent from the term x
        return Err(SubstitutionError::OccurrenceWitnessMismatch);
    }
    not_free_walk(&e.claim.source, &e.claim.result, &e.node, x_not_in_term)
}

fn not_free_walk(
    source: &Formula,
    result: &Formula,
    node: &SubEvidenceNode,
    xnit: &NotInTermWitness,
) -> Result<NotFreeWitness, SubstitutionError> {
    match (node, source, result) {
        (SubEvidenceNode::Ident, _, _) => Err(SubstitutionError::OccurrenceWitnessMismatch),
        (SubEvidenceNode::NotFree(nf), _, _) => Ok(nf.clone()),
        (SubEvidenceNode::Atom(evs), Formula::Atom(_), Formula::Atom(r)) => {
            let mut ws = Vec::with_capacity(evs.len());
            for (te, v) in evs.iter().zip(r.args()) {
                ws.push(not_in_result_term(te, v, xnit));
            }
            Ok(NotFreeWitness::Atom(ws))
        }
        (SubEvidenceNode::Implies(e1, e2), Formula::Implies(s1, s2), Formula::Implies(r1, r2)) => {
            Ok(NotFreeWitness::Implies(
                Box::new(not_free_walk(s1, r1, e1, xnit)?),
                Box::new(not_free_walk(s2, r2, e2, xnit)?),
            ))
        }
        (SubEvidenceNode::And(e1, e2), Formula::And(s1, s2), Formula::And(r1, r2)) => {
            Ok(NotFreeWitness::And(
                Box::new(not_free_walk(s1, r1, e1, xnit)?),
                Box::new(not_free_walk(s2, r2, e2, xnit)?),
            ))
        }
        (SubEvidenceNode::Or(e1, e2), Formula::Or(s1, s2), Formula::Or(r1, r2)) => {
            Ok(NotFreeWitness::Or(
                Box::new(not_free_walk(s1, r1, e1, xnit)?),
                Box::new(not_free_walk(s2, r2, e2, xnit)?),
            ))
        }
        (SubEvidenceNode::ForallSelf, _, _) => Ok(NotFreeWitness::ForallSelf),
        (SubEvidenceNode::ExistsSelf, _, _) => Ok(NotFreeWitness::ExistsSelf),
        (SubEvidenceNode::Forall { body, .. }, Formula::Forall(_, s0), Formula::Forall(_, r0)) => {
            Ok(NotFreeWitness::Forall(Box::new(not_free_walk(
                s0, r0, body, xnit,
            )?)))
        }
        (SubEvidenceNode::Exists { body, .. }, Formula::Exists(_, s0), Formula::Exists(_, r0)) => {
            Ok(NotFreeWitness::Exists(Box::new(not_free_walk(
                s0, r0, body, xnit,
            )?)))
        }
        _ => unreachable!("evidence was verified"),
    }
}

// Every variable position in the result either received the replacement
// term (covered by xnit) or kept a variable distinct from the substituted
// one.
fn not_in_result_term(te: &TermSubEvidence, v: &Term, xnit: &NotInTermWitness) -> NotInTermWitness {
    match (te, v) {
        (TermSubEvidence::VarHit, _) => xnit.clone(),
        (TermSubEvidence::VarMiss(other), _) => NotInTermWitness::Var { other: *other },
        (TermSubEvidence::Func(evs), Term::Func(va)) => NotInTermWitness::Func(
            evs.iter()
                .zip(va.args())
                .map(|(te, v)| not_in_result_term(te, v, xnit))
                .collect(),
        ),
        _ => unreachable!("evidence was verified"),
    }
}

/// Transports a not-free witness across a substitution: if `z` is not
/// free in the source and does not occur in the replacement term, it is
/// not free in the result.
pub fn not_free_transport(
    z: Variable,
    z_not_free: &NotFreeWitness,
    z_not_in_term: &NotInTermWitness,
    e: &SubstitutionEvidence,
) -> Result<NotFreeWitness, SubstitutionError> {
    verify_evidence(e)?;
    if !validate_not_free(z_not_free, z, &e.claim.source)
        || !validate_not_in_term(z_not_in_term, z, &e.claim.term)
    {
        return Err(SubstitutionError::NotFreeWitnessMismatch);
    }
    Ok(transport_walk(
        &e.claim.source,
        &e.claim.result,
        &e.node,
        z_not_free,
        z_not_in_term,
    ))
}

fn transport_walk(
    source: &Formula,
    result: &Formula,
    node: &SubEvidenceNode,
    nf: &NotFreeWitness,
    znit: &NotInTermWitness,
) -> NotFreeWitness {
    match (node, source, result) {
        (SubEvidenceNode::Ident, _, _) | (SubEvidenceNode::NotFree(_), _, _) => nf.clone(),
        (SubEvidenceNode::ForallSelf, _, _) | (SubEvidenceNode::ExistsSelf, _, _) => nf.clone(),
        (SubEvidenceNode::Atom(evs), Formula::Atom(_), Formula::Atom(r)) => {
            let NotFreeWitness::Atom(nws) = nf else {
                unreachable!("witness was validated");
            };
            NotFreeWitness::Atom(
                evs.iter()
                    .zip(r.args())
                    .zip(nws)
                    .map(|((te, v), nw)| transport_term(te, v, nw, znit))
                    .collect(),
            )
        }
        (SubEvidenceNode::Implies(e1, e2), Formula::Implies(s1, s2), Formula::Implies(r1, r2)) => {
            let NotFreeWitness::Implies(n1, n2) = nf else {
                unreachable!("witness was validated");
            };
            NotFreeWitness::Implies(
                Box::new(transport_walk(s1, r1, e1, n1, znit)),
                Box::new(transport_walk(s2, r2, e2, n2, znit)),
            )
        }
        (SubEvidenceNode::And(e1, e2), Formula::And(s1, s2), Formula::And(r1, r2)) => {
            let NotFreeWitness::And(n1, n2) = nf else {
                unreachable!("witness was validated");
            };
            NotFreeWitness::And(
                Box::new(transport_walk(s1, r1, e1, n1, znit)),
                Box::new(transport_walk(s2, r2, e2, n2, znit)),
            )
        }
        (SubEvidenceNode::Or(e1, e2), Formula::Or(s1, s2), Formula::Or(r1, r2)) => {
            let NotFreeWitness::Or(n1, n2) = nf else {
                unreachable!("witness was validated");
            };
            NotFreeWitness::Or(
                Box::new(transport_walk(s1, r1, e1, n1, znit)),
                Box::new(transport_walk(s2, r2, e2, n2, znit)),
            )
        }
        (SubEvidenceNode::Forall { body, .. }, Formula::Forall(_, s0), Formula::Forall(_, r0)) => {
            match nf {
                NotFreeWitness::ForallSelf => NotFreeWitness::ForallSelf,
                NotFreeWitness::Forall(n0) => {
                    NotFreeWitness::Forall(Box::new(transport_walk(s0, r0, body, n0, znit)))
                }
                _ => unreachable!("witness was validated"),
            }
        }
        (SubEvidenceNode::Exists { body, .. }, Formula::Exists(_, s0), Formula::Exists(_, r0)) => {
            match nf {
                NotFreeWitness::ExistsSelf => NotFreeWitness::ExistsSelf,
                NotFreeWitness::Exists(n0) => {
                    NotFreeWitness::Exists(Box::new(transport_walk(s0, r0, body, n0, znit)))
                }
                _ => unreachable!("witness was validated"),
            }
        }
        _ => unreachable!("evidence was verified"),
    }
}

fn transport_term(
    te: &TermSubEvidence,
    v: &Term,
    nw: &NotInTermWitness,
    znit: &NotInTermWitness,
) -> NotInTermWitness {
    match (te, v) {
        (TermSubEvidence::VarHit, _) => znit.clone(),
        (TermSubEvidence::VarMiss(_), _) => nw.clone(),
        (TermSubEvidence::Func(evs), Term::Func(va)) => {
            let NotInTermWitness::Func(nws) = nw else {
                unreachable!("witness was validated");
            };
            NotInTermWitness::Func(
                evs.iter()
                    .zip(va.args())
                    .zip(nws)
                    .map(|((te, v), nw)| transport_term(te, v, nw, znit))
                    .collect(),
            )
        }
        _ => unreachable!("evidence was verified"),
    }
}

/// Inverts a substitution by a variable that was not free in the source:
/// from `a [ x / w ] == b` derive `b [ w / x ] == a`.
pub fn invert_substitution(
    omega_not_free: &NotFreeWitness,
    e: &SubstitutionEvidence,
) -> Result<SubstitutionEvidence, SubstitutionError> {
    verify_evidence(e)?;
    let Term::Var(omega) = e.claim.term else {
        return Err(SubstitutionError::ReplacementNotVariable);
    };
    if !validate_not_free(omega_not_free, omega, &e.claim.source) {
        return Err(SubstitutionError::NotFreeWitnessMismatch);
    }
    let node = invert_walk(
        &e.claim.source,
        e.claim.var,
        omega,
        &e.claim.result,
        &e.node,
        omega_not_free,
    )?;
    Ok(SubstitutionEvidence {
        claim: SubstitutionClaim {
            source: e.claim.result.clone(),
            var: omega,
            term: Term::Var(e.claim.var),
            result: e.claim.source.clone(),
        },
        node,
    })
}

fn invert_walk(
    source: &Formula,
    var: Variable,
    omega: Variable,
    result: &Formula,
    node: &SubEvidenceNode,
    nf: &NotFreeWitness,
) -> Result<SubEvidenceNode, SubstitutionError> {
    match (node, source, result) {
        (SubEvidenceNode::Ident, _, _) => Ok(SubEvidenceNode::Ident),
        (SubEvidenceNode::NotFree(_), _, _) => Ok(SubEvidenceNode::NotFree(nf.clone())),
        // a shadowed binder left the formula unchanged, so the inverse
        // substitutes into a formula where omega is not free
        (SubEvidenceNode::ForallSelf, _, _) | (SubEvidenceNode::ExistsSelf, _, _) => {
            Ok(SubEvidenceNode::NotFree(nf.clone()))
        }
        (SubEvidenceNode::Atom(evs), Formula::Atom(s), Formula::Atom(_)) => {
            let NotFreeWitness::Atom(nws) = nf else {
                return Err(SubstitutionError::NotFreeWitnessMismatch);
            };
            let mut out = Vec::with_capacity(evs.len());
            for ((te, u), nw) in evs.iter().zip(s.args()).zip(nws) {
                out.push(invert_term(te, u, omega, nw)?);
            }
            Ok(SubEvidenceNode::Atom(out))
        }
        (SubEvidenceNode::Implies(e1, e2), Formula::Implies(s1, s2), Formula::Implies(r1, r2)) => {
            let NotFreeWitness::Implies(n1, n2) = nf else {
                return Err(SubstitutionError::NotFreeWitnessMismatch);
            };
            Ok(SubEvidenceNode::Implies(
                Box::new(invert_walk(s1, var, omega, r1, e1, n1)?),
                Box::new(invert_walk(s2, var, omega, r2, e2, n2)?),
            ))
        }
        (SubEvidenceNode::And(e1, e2), Formula::And(s1, s2), Formula::And(r1, r2)) => {
            let NotFreeWitness::And(n1, n2) = nf else {
                return Err(SubstitutionError::NotFreeWitnessMismatch);
            };
            Ok(SubEvidenceNode::And(
                Box::new(invert_walk(s1, var, omega, r1, e1, n1)?),
                Box::new(invert_walk(s2, var, omega, r2, e2, n2)?),
            ))
        }
        (SubEvidenceNode::Or(e1, e2), Formula::Or(s1, s2), Formula::Or(r1, r2)) => {
            let NotFreeWitness::Or(n1, n2) = nf else {
                return Err(SubstitutionError::NotFreeWitnessMismatch);
            };
            Ok(SubEvidenceNode::Or(
                Box::new(invert_walk(s1, var, omega, r1, e1, n1)?),
                Box::new(invert_walk(s2, var, omega, r2, e2, n2)?),
            ))
        }
        (SubEvidenceNode::Forall { body, .. }, Formula::Forall(y, s0), Formula::Forall(_, r0)) => {
            // omega cannot be the binder: the evidence requires the binder
            // not to occur in the replacement term, which is omega itself
            let n0 = match nf {
                NotFreeWitness::Forall(n0) => n0,
                _ => return Err(SubstitutionError::NotFreeWitnessMismatch),
            };
            if *y == omega {
                return Err(SubstitutionError::NotFreeWitnessMismatch);
            }
            Ok(SubEvidenceNode::Forall {
                binder_not_in_term: NotInTermWitness::Var { other: var },
                body: Box::new(invert_walk(s0, var, omega, r0, body, n0)?),
            })
        }
        (SubEvidenceNode::Exists { body, .. }, Formula::Exists(y, s0), Formula::Exists(_, r0)) => {
            let n0 = match nf {
                NotFreeWitness::Exists(n0) => n0,
                _ => return Err(SubstitutionError::NotFreeWitnessMismatch),
            };
            if *y == omega {
                return Err(SubstitutionError::NotFreeWitnessMismatch);
            }
            Ok(SubEvidenceNode::Exists {
                binder_not_in_term: NotInTermWitness::Var { other: var },
                body: Box::new(invert_walk(s0, var, omega, r0, body, n0)?),
            })
        }
        _ => unreachable!("evidence was verified"),
    }
}

fn invert_term(
    te: &TermSubEvidence,
    u: &Term,
    omega: Variable,
    nw: &NotInTermWitness,
) -> Result<TermSubEvidence, SubstitutionError> {
    match (te, u) {
        (TermSubEvidence::VarHit, _) => Ok(TermSubEvidence::VarHit),
        (TermSubEvidence::VarMiss(other), _) => {
            // the untouched variable must differ from omega, which the
            // not-free witness for the source guarantees
            match nw {
                NotInTermWitness::Var { other: o } if o == other && *other != omega => {
                    Ok(TermSubEvidence::VarMiss(*other))
                }
                _ => Err(SubstitutionError::NotFreeWitnessMismatch),
            }
        }
        (TermSubEvidence::Func(evs), Term::Func(ua)) => {
            let NotInTermWitness::Func(nws) = nw else {
                return Err(SubstitutionError::NotFreeWitnessMismatch);
            };
            let mut out = Vec::with_capacity(evs.len());
            for ((te, u), nw) in evs.iter().zip(ua.args()).zip(nws) {
                out.push(invert_term(te, u, omega, nw)?);
            }
            Ok(TermSubEvidence::Func(out))
        }
        _ => unreachable!("evidence was verified"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binding::fresh;
    use crate::syntax::RelationSymbol;

    fn x() -> Variable {
        Variable(0)
    }

    fn y() -> Variable {
        Variable(1)
    }

    fn p(t: Term) -> Formula {
        Formula::atom(RelationSymbol::new(5, 1), vec![t]).unwrap()
    }

    fn a() -> Formula {
        Formula::atom(RelationSymbol::new(1, 0), vec![]).unwrap()
    }

    #[test]
    fn capture_is_detected() {
        // y is not free for x in forall y (P x)
        let f = Formula::forall(y(), p(Term::var(x())));
        let cap = free_for(&Term::var(y()), x(), &f).no().unwrap();
        assert_eq!(cap.binder, y());
        // any term is free for x in an atom
        assert!(free_for(&Term::var(y()), x(), &p(Term::var(x()))).is_yes());
    }

    #[test]
    fn self_substitution_always_possible() {
        let cases = vec![
            p(Term::var(x())),
            Formula::forall(y(), p(Term::var(x()))),
            Formula::implies(p(Term::var(x())), a()),
        ];
        for f in cases {
            let w = free_for(&Term::var(x()), x(), &f).yes().unwrap();
            let r = apply_substitution(&f, x(), &Term::var(x()), &w).unwrap();
            assert_eq!(r.result, f);
            assert_eq!(r.evidence.node, SubEvidenceNode::Ident);
            verify_evidence(&r.evidence).unwrap();
        }
    }

    #[test]
    fn not_free_evidence_for_vacuous_substitution() {
        // (forall y A)[x/y] leaves the formula unchanged via not-free
        let f = Formula::forall(y(), a());
        let w = free_for(&Term::var(y()), x(), &f).yes().unwrap();
        let r = apply_substitution(&f, x(), &Term::var(y()), &w).unwrap();
        assert_eq!(r.result, f);
        assert!(matches!(r.evidence.node, SubEvidenceNode::NotFree(_)));
        verify_evidence(&r.evidence).unwrap();
    }

    #[test]
    fn atom_substitution() {
        // P(x)[x/f(y)] = P(f(y))
        let fy = Term::func(
            crate::syntax::FunctionSymbol::new(0, 1),
            vec![Term::var(y())],
        )
        .unwrap();
        let w = free_for(&fy, x(), &p(Term::var(x()))).yes().unwrap();
        let r = apply_substitution(&p(Term::var(x())), x(), &fy, &w).unwrap();
        assert_eq!(r.result, p(fy));
        verify_evidence(&r.evidence).unwrap();
    }

    #[test]
    fn shadowed_binder_prefers_self_node() {
        // (forall x (P x))[x/t] is unchanged via the shadowed-binder node
        let f = Formula::forall(x(), p(Term::var(x())));
        let t = Term::var(y());
        let w = free_for(&t, x(), &f).yes().unwrap();
        let r = apply_substitution(&f, x(), &t, &w).unwrap();
        assert_eq!(r.result, f);
        assert_eq!(r.evidence.node, SubEvidenceNode::ForallSelf);
        verify_evidence(&r.evidence).unwrap();
    }

    #[test]
    fn verify_rejects_false_ident() {
        let e = SubstitutionEvidence {
            claim: SubstitutionClaim {
                source: p(Term::var(x())),
                var: x(),
                term: Term::Var(x()),
                result: p(Term::var(y())),
            },
            node: SubEvidenceNode::Ident,
        };
        let err = verify_evidence(&e).unwrap_err();
        assert_eq!(err.fault, EvidenceFault::Ident);
    }

    #[test]
    fn verify_rejects_binder_in_term() {
        // descend-under-binder node whose binder occurs in the term
        let f = Formula::forall(y(), p(Term::var(x())));
        let e = SubstitutionEvidence {
            claim: SubstitutionClaim {
                source: f.clone(),
                var: x(),
                term: Term::var(y()),
                result: Formula::forall(y(), p(Term::var(y()))),
            },
            node: SubEvidenceNode::Forall {
                binder_not_in_term: NotInTermWitness::Var { other: y() },
                body: Box::new(SubEvidenceNode::Atom(vec![TermSubEvidence::VarHit])),
            },
        };
        let err = verify_evidence(&e).unwrap_err();
        assert_eq!(err.fault, EvidenceFault::BinderInTerm);
    }

    #[test]
    fn functionality_on_ident_and_not_free() {
        // both routes for (forall x A)[x/x] give the same formula
        let f = Formula::forall(x(), a());
        let e1 = SubstitutionEvidence::identity(&f, x());
        let nf = not_free_in(x(), &f).yes().unwrap();
        let e2 = SubstitutionEvidence::unchanged(&f, x(), &Term::var(x()), nf).unwrap();
        check_functional(&e1, &e2).unwrap();
    }

    #[test]
    fn substituted_variable_not_free_in_result() {
        // P(x)[x/y]: x is not free in P(y)
        let w = free_for(&Term::var(y()), x(), &p(Term::var(x())))
            .yes()
            .unwrap();
        let r = apply_substitution(&p(Term::var(x())), x(), &Term::var(y()), &w).unwrap();
        let xnit = NotInTermWitness::Var { other: y() };
        let nf = not_free_after_substitution(&xnit, &r.evidence).unwrap();
        assert!(validate_not_free(&nf, x(), &r.result));
        assert!(not_free_in(x(), &r.result).is_yes());
    }

    #[test]
    fn inversion_round_trip() {
        let cases = vec![
            p(Term::var(x())),
            Formula::implies(p(Term::var(x())), p(Term::var(y()))),
            Formula::forall(y(), p(Term::var(x()))),
            Formula::exists(x(), Formula::and(p(Term::var(x())), a())),
        ];
        for f in cases {
            let (omega, fw) = fresh(&f);
            let omega_nf = crate::binding::not_free_from_fresh(&fw);
            let w = free_for(&Term::var(omega), x(), &f).yes().unwrap();
            let r = apply_substitution(&f, x(), &Term::var(omega), &w).unwrap();
            let inv = invert_substitution(&omega_nf, &r.evidence).unwrap();
            verify_evidence(&inv).unwrap();
            assert_eq!(inv.claim.source, r.result);
            assert_eq!(inv.claim.result, f);
        }
    }

    #[test]
    fn ident_inverts_to_ident() {
        // inverting needs the substituted variable not free in the
        // source, so shadow it with its own binder
        let g = Formula::forall(x(), p(Term::var(x())));
        let nf = crate::binding::not_free_in(x(), &g).yes().unwrap();
        let e = SubstitutionEvidence::identity(&g, x());
        let inv = invert_substitution(&nf, &e).unwrap();
        assert_eq!(inv.node, SubEvidenceNode::Ident);
        verify_evidence(&inv).unwrap();
    }
}
