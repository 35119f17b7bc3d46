//! Assembled contexts for natural deduction.
//!
//! A context is a finite tree built from the empty context, singletons,
//! unions, and single-formula removals. The tree structure is what makes
//! membership, subset, and for-all-members checks decidable without any
//! reasoning about list computations. Removal shadows earlier insertions:
//! the denotation of `Remove(G, a)` never contains `a`.

use crate::syntax::{Decision, Formula};
use std::collections::HashSet;
use thiserror::Error;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Context {
    Empty,
    Singleton(Formula),
    Union(Box<Context>, Box<Context>),
    Remove(Box<Context>, Formula),
}

impl Context {
    pub fn singleton(a: Formula) -> Context {
        Context::Singleton(a)
    }

    pub fn union(left: Context, right: Context) -> Context {
        Context::Union(Box::new(left), Box::new(right))
    }

    pub fn remove(self, a: Formula) -> Context {
        Context::Remove(Box::new(self), a)
    }

    /// Builds `Union(...(Union(s1, s2), ...), sn)` from a member list;
    /// the empty list gives the empty context.
    pub fn from_members(members: Vec<Formula>) -> Context {
        let mut it = members.into_iter();
        let Some(first) = it.next() else {
            return Context::Empty;
        };
        let mut ctx = Context::Singleton(first);
        for m in it {
            ctx = Context::union(ctx, Context::Singleton(m));
        }
        ctx
    }

    /// The member formulas, computed structurally. This is the naive
    /// set evaluation used as the oracle for the structural deciders.
    pub fn denotation(&self) -> HashSet<Formula> {
        match self {
            Context::Empty => HashSet::new(),
            Context::Singleton(a) => {
                let mut s = HashSet::new();
                s.insert(a.clone());
                s
            }
            Context::Union(l, r) => {
                let mut s = l.denotation();
                s.extend(r.denotation());
                s
            }
            Context::Remove(inner, a) => {
                let mut s = inner.denotation();
                s.remove(a);
                s
            }
        }
    }

    /// Every formula appearing in a singleton node. The denotation can
    /// only contain formulas syntactically present in the tree, so this
    /// is the candidate universe for the subset decision.
    pub fn singleton_formulas(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        self.collect_singletons(&mut out);
        out
    }

    fn collect_singletons<'a>(&'a self, out: &mut Vec<&'a Formula>) {
        match self {
            Context::Empty => {}
            Context::Singleton(a) => out.push(a),
            Context::Union(l, r) => {
                l.collect_singletons(out);
                r.collect_singletons(out);
            }
            Context::Remove(inner, _) => inner.collect_singletons(out),
        }
    }
}

/// One step through a context tree towards a singleton node.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ContextStep {
    Left,
    Right,
    Inner,
}

pub type MembershipPath = Vec<ContextStep>;

/// Decides membership in the denotation. Yes carries the path to a
/// singleton holding the formula, with no removal of it on the way.
pub fn member_of(a: &Formula, ctx: &Context) -> Decision<MembershipPath, ()> {
    match member_at(a, ctx, &mut Vec::new()) {
        Some(p) => Decision::Yes(p),
        None => Decision::No(()),
    }
}

fn member_at(a: &Formula, ctx: &Context, path: &mut MembershipPath) -> Option<MembershipPath> {
    match ctx {
        Context::Empty => None,
        Context::Singleton(b) => {
            if a == b {
                Some(path.clone())
            } else {
                None
            }
        }
        Context::Union(l, r) => {
            path.push(ContextStep::Left);
            if let Some(p) = member_at(a, l, path) {
                return Some(p);
            }
            path.pop();
            path.push(ContextStep::Right);
            let out = member_at(a, r, path);
            path.pop();
            out
        }
        Context::Remove(inner, b) => {
            if a == b {
                return None;
            }
            path.push(ContextStep::Inner);
            let out = member_at(a, inner, path);
            path.pop();
            out
        }
    }
}

/// Inclusion witness: each member of the smaller context paired with its
/// membership path in the larger one.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SubsetWitness {
    pub members: Vec<(Formula, MembershipPath)>,
}

/// Decides whether every member of `g` is a member of `d`. No carries a
/// counterexample formula.
pub fn subset_of(g: &Context, d: &Context) -> Decision<SubsetWitness, Formula> {
    let mut members = Vec::new();
    let mut seen: HashSet<&Formula> = HashSet::new();
    for cand in g.singleton_formulas() {
        if !seen.insert(cand) {
            continue;
        }
        if member_of(cand, g).is_yes() {
            match member_of(cand, d) {
                Decision::Yes(p) => members.push((cand.clone(), p)),
                Decision::No(()) => return Decision::No(cand.clone()),
            }
        }
    }
    Decision::Yes(SubsetWitness { members })
}

/// Witness that a predicate holds on all members, produced by the
/// removed-list algorithm. Quantified over the removed list in effect at
/// each node; validation threads the list from the root.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AllWitness {
    Empty,
    /// The predicate held on the singleton's formula.
    Singleton,
    /// The singleton's formula was already removed; the index points
    /// into the removed list in effect at this node.
    SingletonRemoved(usize),
    Union(Box<AllWitness>, Box<AllWitness>),
    /// The removed formula is pushed onto the list for the child.
    Removed(Box<AllWitness>),
}

/// Runs the removed-list algorithm: the predicate must hold on each
/// singleton not yet removed. No carries the failing formula.
pub fn all_satisfy<P>(mut pred: P, ctx: &Context) -> Decision<AllWitness, Formula>
where
    P: FnMut(&Formula) -> bool,
{
    let mut removed: Vec<&Formula> = Vec::new();
    match all_at(&mut pred, ctx, &mut removed) {
        Ok(w) => Decision::Yes(w),
        Err(a) => Decision::No(a),
    }
}

fn all_at<'a, P>(
    pred: &mut P,
    ctx: &'a Context,
    removed: &mut Vec<&'a Formula>,
) -> Result<AllWitness, Formula>
where
    P: FnMut(&Formula) -> bool,
{
    match ctx {
        Context::Empty => Ok(AllWitness::Empty),
        Context::Singleton(a) => {
            // consult the removed list before deciding the predicate
            if let Some(i) = removed.iter().position(|r| *r == a) {
                Ok(AllWitness::SingletonRemoved(i))
            } else if pred(a) {
                Ok(AllWitness::Singleton)
            } else {
                Err(a.clone())
            }
        }
        Context::Union(l, r) => {
            let wl = all_at(pred, l, removed)?;
            let wr = all_at(pred, r, removed)?;
            Ok(AllWitness::Union(Box::new(wl), Box::new(wr)))
        }
        Context::Remove(inner, a) => {
            removed.push(a);
            let w = all_at(pred, inner, removed);
            removed.pop();
            Ok(AllWitness::Removed(Box::new(w?)))
        }
    }
}

/// Checks an [`AllWitness`] against the context and predicate it claims
/// to cover, threading the removed list exactly as the algorithm does.
pub fn validate_all_witness<P>(w: &AllWitness, mut pred: P, ctx: &Context) -> bool
where
    P: FnMut(&Formula) -> bool,
{
    let mut removed: Vec<&Formula> = Vec::new();
    validate_all_at(w, &mut pred, ctx, &mut removed)
}

fn validate_all_at<'a, P>(
    w: &AllWitness,
    pred: &mut P,
    ctx: &'a Context,
    removed: &mut Vec<&'a Formula>,
) -> bool
where
    P: FnMut(&Formula) -> bool,
{
    match (w, ctx) {
        (AllWitness::Empty, Context::Empty) => true,
        (AllWitness::Singleton, Context::Singleton(a)) => pred(a),
        (AllWitness::SingletonRemoved(i), Context::Singleton(a)) => {
            removed.get(*i).is_some_and(|r| *r == a)
        }
        (AllWitness::Union(wl, wr), Context::Union(l, r)) => {
            validate_all_at(wl, pred, l, removed) && validate_all_at(wr, pred, r, removed)
        }
        (AllWitness::Removed(inner), Context::Remove(c, a)) => {
            removed.push(a);
            let ok = validate_all_at(inner, pred, c, removed);
            removed.pop();
            ok
        }
        _ => false,
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum AllCoverageError {
    #[error("witness does not validate for this context")]
    InvalidWitness,
    #[error("denotation member fails the predicate: {0}")]
    MemberFails(Formula),
}

/// Soundness check for the removed-list algorithm: a witness implies the
/// predicate holds on every member of the naive denotation.
pub fn all_implies_members<P>(
    w: &AllWitness,
    mut pred: P,
    ctx: &Context,
) -> Result<(), AllCoverageError>
where
    P: FnMut(&Formula) -> bool,
{
    if !validate_all_witness(w, &mut pred, ctx) {
        return Err(AllCoverageError::InvalidWitness);
    }
    for member in ctx.denotation() {
        if !pred(&member) {
            return Err(AllCoverageError::MemberFails(member));
        }
    }
    Ok(())
}
