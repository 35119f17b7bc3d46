//! Equality of formulas up to renaming of bound variables, and the
//! derived rename rule on proofs.
//!
//! Renaming a binder means substituting the bound variable by one that is
//! not free in the body, so the meaning does not change. The relation has
//! four renaming constructors: the plain forms carry the substitution at
//! the head and continue with a further equivalence, the dual forms carry
//! the equivalence first. The duals are kept primitive so that symmetry
//! is a structural recursion.
//!
//! `rename` turns a proof of a formula into a proof of any equivalent
//! formula by extending the deduction tree. It is built as a pair of
//! mutually recursive directions: the implication case needs the reverse
//! direction on the antecedent, and obtaining that by flipping the
//! witness would not be structurally recursive.

use crate::binding::{validate_not_free, NotFreeWitness, NotInTermWitness};
use crate::context::Context;
use crate::kernel::{check_proof, CheckError, Library, LogicMode, Proof};
use crate::substitution::{
    invert_substitution, not_free_after_substitution, verify_evidence, SubstitutionError,
    SubstitutionEvidence,
};
use crate::syntax::{formula_eq, Formula, Path, PathStep, Term, Variable};
use thiserror::Error;

/// Derivation that two formulas are equal up to bound-variable renaming.
#[derive(Clone, PartialEq, Debug)]
pub enum EquivWitness {
    Atom,
    Implies(Box<EquivWitness>, Box<EquivWitness>),
    And(Box<EquivWitness>, Box<EquivWitness>),
    Or(Box<EquivWitness>, Box<EquivWitness>),
    Forall(Box<EquivWitness>),
    Exists(Box<EquivWitness>),
    /// Rename the binder first, then continue with an equivalence of the
    /// renamed body: `y` not free in the body, evidence for the renaming
    /// substitution, and the tail equivalence.
    ForallRename {
        not_free: NotFreeWitness,
        evidence: SubstitutionEvidence,
        tail: Box<EquivWitness>,
    },
    ExistsRename {
        not_free: NotFreeWitness,
        evidence: SubstitutionEvidence,
        tail: Box<EquivWitness>,
    },
    /// Dual form: an equivalence of the body first, then the renaming
    /// substitution applied to the equivalent body.
    ForallRenameDual {
        head: Box<EquivWitness>,
        not_free: NotFreeWitness,
        evidence: SubstitutionEvidence,
    },
    ExistsRenameDual {
        head: Box<EquivWitness>,
        not_free: NotFreeWitness,
        evidence: SubstitutionEvidence,
    },
}

#[derive(Clone, PartialEq, Debug, Error)]
#[error("equivalence witness rejected at {path:?}: {fault}")]
pub struct EquivError {
    pub path: Path,
    pub fault: EquivFault,
}

#[derive(Clone, PartialEq, Debug, Error)]
pub enum EquivFault {
    #[error("node does not match the shape of the formula")]
    Shape,
    #[error("not-free witness does not validate")]
    NotFree,
    #[error("substitution evidence rejected: {0}")]
    Evidence(crate::substitution::EvidenceError),
    #[error("substitution evidence does not connect this node")]
    EvidenceClaim,
    #[error("renaming term must be a variable")]
    NotVariable,
    #[error("witness relates `{found}`, not the claimed formula")]
    TargetMismatch { found: String },
}

fn equiv_fault(path: &Path, fault: EquivFault) -> EquivError {
    EquivError {
        path: path.clone(),
        fault,
    }
}

/// The reflexivity witness, built from the trivial constructors only.
pub fn equiv_refl(a: &Formula) -> EquivWitness {
    match a {
        Formula::Atom(_) => EquivWitness::Atom,
        Formula::Implies(a1, a2) => {
            EquivWitness::Implies(Box::new(equiv_refl(a1)), Box::new(equiv_refl(a2)))
        }
        Formula::And(a1, a2) => {
            EquivWitness::And(Box::new(equiv_refl(a1)), Box::new(equiv_refl(a2)))
        }
        Formula::Or(a1, a2) => EquivWitness::Or(Box::new(equiv_refl(a1)), Box::new(equiv_refl(a2))),
        Formula::Forall(_, body) => EquivWitness::Forall(Box::new(equiv_refl(body))),
        Formula::Exists(_, body) => EquivWitness::Exists(Box::new(equiv_refl(body))),
    }
}

/// Computes the formula a witness relates `a` to, validating every node
/// on the way.
pub fn equiv_target(w: &EquivWitness, a: &Formula) -> Result<Formula, EquivError> {
    target_at(w, a, &mut Vec::new())
}

// Decomposes a rename node: checks the evidence against the source body
// and binder and extracts the new binder.
fn rename_parts<'a>(
    not_free: &NotFreeWitness,
    evidence: &'a SubstitutionEvidence,
    binder: Variable,
    body: &Formula,
    path: &Path,
) -> Result<(Variable, &'a Formula), EquivError> {
    verify_evidence(evidence).map_err(|e| equiv_fault(path, EquivFault::Evidence(e)))?;
    if evidence.claim.source != *body || evidence.claim.var != binder {
        return Err(equiv_fault(path, EquivFault::EvidenceClaim));
    }
    let Term::Var(new_binder) = evidence.claim.term else {
        return Err(equiv_fault(path, EquivFault::NotVariable));
    };
    if !validate_not_free(not_free, new_binder, body) {
        return Err(equiv_fault(path, EquivFault::NotFree));
    }
    Ok((new_binder, &evidence.claim.result))
}

fn target_at(w: &EquivWitness, a: &Formula, path: &mut Path) -> Result<Formula, EquivError> {
    match (w, a) {
        (EquivWitness::Atom, Formula::Atom(_)) => Ok(a.clone()),
        (EquivWitness::Implies(w1, w2), Formula::Implies(a1, a2)) => {
            let b1 = step(w1, a1, path, PathStep::Left)?;
            let b2 = step(w2, a2, path, PathStep::Right)?;
            Ok(Formula::implies(b1, b2))
        }
        (EquivWitness::And(w1, w2), Formula::And(a1, a2)) => {
            let b1 = step(w1, a1, path, PathStep::Left)?;
            let b2 = step(w2, a2, path, PathStep::Right)?;
            Ok(Formula::and(b1, b2))
        }
        (EquivWitness::Or(w1, w2), Formula::Or(a1, a2)) => {
            let b1 = step(w1, a1, path, PathStep::Left)?;
            let b2 = step(w2, a2, path, PathStep::Right)?;
            Ok(Formula::or(b1, b2))
        }
        (EquivWitness::Forall(w0), Formula::Forall(x, body)) => {
            Ok(Formula::forall(*x, step(w0, body, path, PathStep::Body)?))
        }
        (EquivWitness::Exists(w0), Formula::Exists(x, body)) => {
            Ok(Formula::exists(*x, step(w0, body, path, PathStep::Body)?))
        }
        (
            EquivWitness::ForallRename {
                not_free,
                evidence,
                tail,
            },
            Formula::Forall(x, body),
        ) => {
            let (y, renamed) = rename_parts(not_free, evidence, *x, body, path)?;
            let b = step(tail, renamed, path, PathStep::Body)?;
            Ok(Formula::forall(y, b))
        }
        (
            EquivWitness::ExistsRename {
                not_free,
                evidence,
                tail,
            },
            Formula::Exists(x, body),
        ) => {
            let (y, renamed) = rename_parts(not_free, evidence, *x, body, path)?;
            let b = step(tail, renamed, path, PathStep::Body)?;
            Ok(Formula::exists(y, b))
        }
        (
            EquivWitness::ForallRenameDual {
                head,
                not_free,
                evidence,
            },
            Formula::Forall(x, body),
        ) => {
            let equivalent = step(head, body, path, PathStep::Body)?;
            let (y, renamed) = rename_parts(not_free, evidence, *x, &equivalent, path)?;
            Ok(Formula::forall(y, renamed.clone()))
        }
        (
            EquivWitness::ExistsRenameDual {
                head,
                not_free,
                evidence,
            },
            Formula::Exists(x, body),
        ) => {
            let equivalent = step(head, body, path, PathStep::Body)?;
            let (y, renamed) = rename_parts(not_free, evidence, *x, &equivalent, path)?;
            Ok(Formula::exists(y, renamed.clone()))
        }
        _ => Err(equiv_fault(path, EquivFault::Shape)),
    }
}

fn step(
    w: &EquivWitness,
    a: &Formula,
    path: &mut Path,
    s: PathStep,
) -> Result<Formula, EquivError> {
    path.push(s);
    let out = target_at(w, a, path);
    path.pop();
    out
}

/// Checks that a witness is a well-formed derivation relating `a` and `b`.
pub fn verify_equiv(w: &EquivWitness, a: &Formula, b: &Formula) -> Result<(), EquivError> {
    let found = equiv_target(w, a)?;
    if formula_eq(&found, b).is_no() {
        return Err(EquivError {
            path: Vec::new(),
            fault: EquivFault::TargetMismatch {
                found: found.to_string(),
            },
        });
    }
    Ok(())
}

#[derive(Clone, PartialEq, Debug, Error)]
pub enum EquivOpError {
    #[error("{0}")]
    Witness(#[from] EquivError),
    #[error("{0}")]
    Substitution(#[from] SubstitutionError),
    #[error("not-free witness does not cover the queried pair")]
    NotFreeMismatch,
}

/// Flips a witness: from `a ~ b` derive `b ~ a`. Rename nodes become
/// their duals via freedom preservation and substitution inversion; a
/// binder renamed to itself collapses to the trivial constructor.
pub fn equiv_sym(w: &EquivWitness) -> Result<EquivWitness, EquivOpError> {
    match w {
        EquivWitness::Atom => Ok(EquivWitness::Atom),
        EquivWitness::Implies(w1, w2) => Ok(EquivWitness::Implies(
            Box::new(equiv_sym(w1)?),
            Box::new(equiv_sym(w2)?),
        )),
        EquivWitness::And(w1, w2) => Ok(EquivWitness::And(
            Box::new(equiv_sym(w1)?),
            Box::new(equiv_sym(w2)?),
        )),
        EquivWitness::Or(w1, w2) => Ok(EquivWitness::Or(
            Box::new(equiv_sym(w1)?),
            Box::new(equiv_sym(w2)?),
        )),
        EquivWitness::Forall(w0) => Ok(EquivWitness::Forall(Box::new(equiv_sym(w0)?))),
        EquivWitness::Exists(w0) => Ok(EquivWitness::Exists(Box::new(equiv_sym(w0)?))),
        EquivWitness::ForallRename {
            not_free,
            evidence,
            tail,
        } => sym_rename(not_free, evidence, tail, true),
        EquivWitness::ExistsRename {
            not_free,
            evidence,
            tail,
        } => sym_rename(not_free, evidence, tail, false),
        EquivWitness::ForallRenameDual {
            head,
            not_free,
            evidence,
        } => sym_rename_dual(head, not_free, evidence, true),
        EquivWitness::ExistsRenameDual {
            head,
            not_free,
            evidence,
        } => sym_rename_dual(head, not_free, evidence, false),
    }
}

fn renamed_variable(evidence: &SubstitutionEvidence) -> Result<Variable, EquivOpError> {
    match evidence.claim.term {
        Term::Var(y) => Ok(y),
        _ => Err(EquivOpError::Witness(EquivError {
            path: Vec::new(),
            fault: EquivFault::NotVariable,
        })),
    }
}

fn sym_rename(
    not_free: &NotFreeWitness,
    evidence: &SubstitutionEvidence,
    tail: &EquivWitness,
    universal: bool,
) -> Result<EquivWitness, EquivOpError> {
    let x = evidence.claim.var;
    let y = renamed_variable(evidence)?;
    let flipped = Box::new(equiv_sym(tail)?);
    if x == y {
        // renaming by itself: the substitution changed nothing, so the
        // trivial constructor suffices
        return Ok(if universal {
            EquivWitness::Forall(flipped)
        } else {
            EquivWitness::Exists(flipped)
        });
    }
    let x_not_in_y = NotInTermWitness::Var { other: y };
    let x_not_free = not_free_after_substitution(&x_not_in_y, evidence)?;
    let inverted = invert_substitution(not_free, evidence)?;
    Ok(if universal {
        EquivWitness::ForallRenameDual {
            head: flipped,
            not_free: x_not_free,
            evidence: inverted,
        }
    } else {
        EquivWitness::ExistsRenameDual {
            head: flipped,
            not_free: x_not_free,
            evidence: inverted,
        }
    })
}

fn sym_rename_dual(
    head: &EquivWitness,
    not_free: &NotFreeWitness,
    evidence: &SubstitutionEvidence,
    universal: bool,
) -> Result<EquivWitness, EquivOpError> {
    let x = evidence.claim.var;
    let y = renamed_variable(evidence)?;
    let flipped = Box::new(equiv_sym(head)?);
    if x == y {
        return Ok(if universal {
            EquivWitness::Forall(flipped)
        } else {
            EquivWitness::Exists(flipped)
        });
    }
    let x_not_in_y = NotInTermWitness::Var { other: y };
    let x_not_free = not_free_after_substitution(&x_not_in_y, evidence)?;
    let inverted = invert_substitution(not_free, evidence)?;
    Ok(if universal {
        EquivWitness::ForallRename {
            not_free: x_not_free,
            evidence: inverted,
            tail: flipped,
        }
    } else {
        EquivWitness::ExistsRename {
            not_free: x_not_free,
            evidence: inverted,
            tail: flipped,
        }
    })
}

/// Transports a not-free witness along an equivalence: if `z` is not free
/// in `a` and `a ~ b`, then `z` is not free in `b`.
pub fn transport_not_free(
    w: &EquivWitness,
    a: &Formula,
    z: Variable,
    nf: &NotFreeWitness,
) -> Result<NotFreeWitness, EquivOpError> {
    equiv_target(w, a)?;
    if !validate_not_free(nf, z, a) {
        return Err(EquivOpError::NotFreeMismatch);
    }
    transport_at(w, a, z, nf)
}

fn transport_at(
    w: &EquivWitness,
    a: &Formula,
    z: Variable,
    nf: &NotFreeWitness,
) -> Result<NotFreeWitness, EquivOpError> {
    match (w, a) {
        (EquivWitness::Atom, _) => Ok(nf.clone()),
        (EquivWitness::Implies(w1, w2), Formula::Implies(a1, a2)) => {
            let NotFreeWitness::Implies(n1, n2) = nf else {
                return Err(EquivOpError::NotFreeMismatch);
            };
            Ok(NotFreeWitness::Implies(
                Box::new(transport_at(w1, a1, z, n1)?),
                Box::new(transport_at(w2, a2, z, n2)?),
            ))
        }
        (EquivWitness::And(w1, w2), Formula::And(a1, a2)) => {
            let NotFreeWitness::And(n1, n2) = nf else {
                return Err(EquivOpError::NotFreeMismatch);
            };
            Ok(NotFreeWitness::And(
                Box::new(transport_at(w1, a1, z, n1)?),
                Box::new(transport_at(w2, a2, z, n2)?),
            ))
        }
        (EquivWitness::Or(w1, w2), Formula::Or(a1, a2)) => {
            let NotFreeWitness::Or(n1, n2) = nf else {
                return Err(EquivOpError::NotFreeMismatch);
            };
            Ok(NotFreeWitness::Or(
                Box::new(transport_at(w1, a1, z, n1)?),
                Box::new(transport_at(w2, a2, z, n2)?),
            ))
        }
        (EquivWitness::Forall(w0), Formula::Forall(_, body)) => match nf {
            NotFreeWitness::ForallSelf => Ok(NotFreeWitness::ForallSelf),
            NotFreeWitness::Forall(n0) => Ok(NotFreeWitness::Forall(Box::new(transport_at(
                w0, body, z, n0,
            )?))),
            _ => Err(EquivOpError::NotFreeMismatch),
        },
        (EquivWitness::Exists(w0), Formula::Exists(_, body)) => match nf {
            NotFreeWitness::ExistsSelf => Ok(NotFreeWitness::ExistsSelf),
            NotFreeWitness::Exists(n0) => Ok(NotFreeWitness::Exists(Box::new(transport_at(
                w0, body, z, n0,
            )?))),
            _ => Err(EquivOpError::NotFreeMismatch),
        },
        (EquivWitness::ForallRename { evidence, tail, .. }, Formula::Forall(x, _))
        | (EquivWitness::ExistsRename { evidence, tail, .. }, Formula::Exists(x, _)) => {
            let universal = matches!(a, Formula::Forall(..));
            let y = renamed_variable(evidence)?;
            if z == y {
                // z became the binder of the target
                return Ok(self_witness(universal));
            }
            let z_not_in_y = NotInTermWitness::Var { other: y };
            let renamed = &evidence.claim.result;
            let z_in_renamed = if z == *x {
                // z was substituted out of the body
                not_free_after_substitution(&z_not_in_y, evidence)?
            } else {
                let n0 = inner_not_free(nf, universal)?;
                crate::substitution::not_free_transport(z, n0, &z_not_in_y, evidence)?
            };
            let out = transport_at(tail, renamed, z, &z_in_renamed)?;
            Ok(wrap_witness(universal, out))
        }
        (EquivWitness::ForallRenameDual { head, evidence, .. }, Formula::Forall(x, body))
        | (EquivWitness::ExistsRenameDual { head, evidence, .. }, Formula::Exists(x, body)) => {
            let universal = matches!(a, Formula::Forall(..));
            let y = renamed_variable(evidence)?;
            if z == y {
                return Ok(self_witness(universal));
            }
            let z_not_in_y = NotInTermWitness::Var { other: y };
            let z_in_target = if z == *x {
                not_free_after_substitution(&z_not_in_y, evidence)?
            } else {
                let n0 = inner_not_free(nf, universal)?;
                let z_in_equivalent = transport_at(head, body, z, n0)?;
                crate::substitution::not_free_transport(z, &z_in_equivalent, &z_not_in_y, evidence)?
            };
            Ok(wrap_witness(universal, z_in_target))
        }
        _ => Err(EquivOpError::NotFreeMismatch),
    }
}

fn self_witness(universal: bool) -> NotFreeWitness {
    if universal {
        NotFreeWitness::ForallSelf
    } else {
        NotFreeWitness::ExistsSelf
    }
}

fn wrap_witness(universal: bool, inner: NotFreeWitness) -> NotFreeWitness {
    if universal {
        NotFreeWitness::Forall(Box::new(inner))
    } else {
        NotFreeWitness::Exists(Box::new(inner))
    }
}

// Extracts the body witness under a quantifier; the shadowing form only
// occurs when z is the binder, which callers rule out first.
fn inner_not_free(nf: &NotFreeWitness, universal: bool) -> Result<&NotFreeWitness, EquivOpError> {
    match (nf, universal) {
        (NotFreeWitness::Forall(n0), true) | (NotFreeWitness::Exists(n0), false) => Ok(n0),
        _ => Err(EquivOpError::NotFreeMismatch),
    }
}

#[derive(Clone, PartialEq, Debug, Error)]
pub enum RenameError {
    #[error("input proof does not check: {0}")]
    Proof(#[from] CheckError),
    #[error("{0}")]
    Witness(#[from] EquivError),
    #[error("{0}")]
    Operation(#[from] EquivOpError),
    #[error("{0}")]
    Substitution(#[from] SubstitutionError),
}

/// Extends a checked proof of `G |- a` into a proof of `G |- b` for any
/// `b` equivalent to `a`. The result closes back to the original context.
pub fn rename(
    w: &EquivWitness,
    p: &Proof,
    mode: LogicMode,
    library: &Library,
) -> Result<Proof, RenameError> {
    let judgement = check_proof(p, mode, library)?;
    let target = equiv_target(w, judgement.conclusion())?;
    forward(
        w,
        judgement.conclusion(),
        &target,
        p.clone(),
        judgement.context().clone(),
    )
}

// forward: from a proof of `ctx |- a` build a proof of `ctx |- b`.
// backward: from a proof of `ctx |- b` build a proof of `ctx |- a`.
// Both close each extension back to the context of the proof they extend.

fn forward(
    w: &EquivWitness,
    a: &Formula,
    b: &Formula,
    p: Proof,
    ctx: Context,
) -> Result<Proof, RenameError> {
    match (w, a, b) {
        (EquivWitness::Atom, _, _) => Ok(p),
        (EquivWitness::Implies(w1, w2), Formula::Implies(a1, a2), Formula::Implies(b1, b2)) => {
            let arg = backward(
                w1,
                a1,
                b1,
                Proof::assume((**b1).clone()),
                Context::singleton((**b1).clone()),
            )?;
            let inner_ctx = Context::union(ctx.clone(), Context::singleton((**b1).clone()));
            let elim = Proof::arrow_elim(p, arg);
            let body = forward(w2, a2, b2, elim, inner_ctx)?;
            Ok(Proof::close(ctx, Proof::arrow_intro((**b1).clone(), body)))
        }
        (EquivWitness::And(w1, w2), Formula::And(a1, a2), Formula::And(b1, b2)) => {
            let left = forward(
                w1,
                a1,
                b1,
                Proof::assume((**a1).clone()),
                Context::singleton((**a1).clone()),
            )?;
            let right = forward(
                w2,
                a2,
                b2,
                Proof::assume((**a2).clone()),
                Context::singleton((**a2).clone()),
            )?;
            Ok(Proof::close(
                ctx,
                Proof::conj_elim(p, Proof::conj_intro(left, right)),
            ))
        }
        (EquivWitness::Or(w1, w2), Formula::Or(a1, a2), Formula::Or(b1, b2)) => {
            let left = Proof::disj_intro1(
                (**b2).clone(),
                forward(
                    w1,
                    a1,
                    b1,
                    Proof::assume((**a1).clone()),
                    Context::singleton((**a1).clone()),
                )?,
            );
            let right = Proof::disj_intro2(
                (**b1).clone(),
                forward(
                    w2,
                    a2,
                    b2,
                    Proof::assume((**a2).clone()),
                    Context::singleton((**a2).clone()),
                )?,
            );
            Ok(Proof::close(ctx, Proof::disj_elim(p, left, right)))
        }
        (EquivWitness::Forall(w0), Formula::Forall(x, a0), Formula::Forall(_, b0)) => {
            let assumption = Context::singleton(a.clone());
            let instantiated = Proof::univ_elim(
                Term::Var(*x),
                SubstitutionEvidence::identity(a0, *x),
                Proof::assume(a.clone()),
            );
            let renamed = forward(w0, a0, b0, instantiated, assumption)?;
            Ok(reintroduce_universal(a, *x, renamed, p, ctx))
        }
        (
            EquivWitness::ForallRename { evidence, tail, .. },
            Formula::Forall(_, _),
            Formula::Forall(y, b0),
        ) => {
            let assumption = Context::singleton(a.clone());
            let renamed_body = &evidence.claim.result;
            let instantiated =
                Proof::univ_elim(Term::Var(*y), evidence.clone(), Proof::assume(a.clone()));
            let renamed = forward(tail, renamed_body, b0, instantiated, assumption)?;
            Ok(reintroduce_universal(a, *y, renamed, p, ctx))
        }
        (
            EquivWitness::ForallRenameDual { head, evidence, .. },
            Formula::Forall(x, a0),
            Formula::Forall(y, _),
        ) => {
            let assumption = Context::singleton(a.clone());
            let equivalent = &evidence.claim.source;
            let instantiated = Proof::univ_elim(
                Term::Var(*x),
                SubstitutionEvidence::identity(a0, *x),
                Proof::assume(a.clone()),
            );
            let body = forward(head, a0, equivalent, instantiated, assumption)?;
            let generalised = Proof::univ_intro(*x, body);
            let renamed = Proof::univ_elim(Term::Var(*y), evidence.clone(), generalised);
            Ok(reintroduce_universal(a, *y, renamed, p, ctx))
        }
        (EquivWitness::Exists(w0), Formula::Exists(x, a0), Formula::Exists(_, b0)) => {
            let body = forward(
                w0,
                a0,
                b0,
                Proof::assume((**a0).clone()),
                Context::singleton((**a0).clone()),
            )?;
            let intro = Proof::exist_intro(
                Term::Var(*x),
                *x,
                SubstitutionEvidence::identity(b0, *x),
                body,
            );
            Ok(Proof::close(ctx, Proof::exist_elim(*x, p, intro)))
        }
        (
            EquivWitness::ExistsRename {
                not_free,
                evidence,
                tail,
            },
            Formula::Exists(x, a0),
            Formula::Exists(y, b0),
        ) => {
            let renamed_body = &evidence.claim.result;
            if x == y {
                // degenerate renaming: the body is unchanged
                let body = forward(
                    tail,
                    renamed_body,
                    b0,
                    Proof::assume((**a0).clone()),
                    Context::singleton((**a0).clone()),
                )?;
                let intro = Proof::exist_intro(
                    Term::Var(*x),
                    *x,
                    SubstitutionEvidence::identity(b0, *x),
                    body,
                );
                return Ok(Proof::close(ctx, Proof::exist_elim(*x, p, intro)));
            }
            let inverted = invert_substitution(not_free, evidence)?;
            let reintro =
                Proof::exist_intro(Term::Var(*x), *y, inverted, Proof::assume((**a0).clone()));
            let body = forward(
                tail,
                renamed_body,
                b0,
                Proof::assume(renamed_body.clone()),
                Context::singleton(renamed_body.clone()),
            )?;
            let outro = Proof::exist_intro(
                Term::Var(*y),
                *y,
                SubstitutionEvidence::identity(b0, *y),
                body,
            );
            let chained = Proof::exist_elim(*y, reintro, outro);
            Ok(Proof::close(ctx, Proof::exist_elim(*x, p, chained)))
        }
        (
            EquivWitness::ExistsRenameDual {
                head,
                not_free,
                evidence,
            },
            Formula::Exists(x, a0),
            Formula::Exists(y, b0),
        ) => {
            let equivalent = &evidence.claim.source;
            let body = forward(
                head,
                a0,
                equivalent,
                Proof::assume((**a0).clone()),
                Context::singleton((**a0).clone()),
            )?;
            let intro = if x == y {
                Proof::exist_intro(
                    Term::Var(*x),
                    *x,
                    SubstitutionEvidence::identity(b0, *x),
                    body,
                )
            } else {
                let inverted = invert_substitution(not_free, evidence)?;
                Proof::exist_intro(Term::Var(*x), *y, inverted, body)
            };
            Ok(Proof::close(ctx, Proof::exist_elim(*x, p, intro)))
        }
        _ => Err(RenameError::Witness(EquivError {
            path: Vec::new(),
            fault: EquivFault::Shape,
        })),
    }
}

fn backward(
    w: &EquivWitness,
    a: &Formula,
    b: &Formula,
    p: Proof,
    ctx: Context,
) -> Result<Proof, RenameError> {
    match (w, a, b) {
        (EquivWitness::Atom, _, _) => Ok(p),
        (EquivWitness::Implies(w1, w2), Formula::Implies(a1, a2), Formula::Implies(b1, b2)) => {
            let arg = forward(
                w1,
                a1,
                b1,
                Proof::assume((**a1).clone()),
                Context::singleton((**a1).clone()),
            )?;
            let inner_ctx = Context::union(ctx.clone(), Context::singleton((**a1).clone()));
            let elim = Proof::arrow_elim(p, arg);
            let body = backward(w2, a2, b2, elim, inner_ctx)?;
            Ok(Proof::close(ctx, Proof::arrow_intro((**a1).clone(), body)))
        }
        (EquivWitness::And(w1, w2), Formula::And(a1, a2), Formula::And(b1, b2)) => {
            let left = backward(
                w1,
                a1,
                b1,
                Proof::assume((**b1).clone()),
                Context::singleton((**b1).clone()),
            )?;
            let right = backward(
                w2,
                a2,
                b2,
                Proof::assume((**b2).clone()),
                Context::singleton((**b2).clone()),
            )?;
            Ok(Proof::close(
                ctx,
                Proof::conj_elim(p, Proof::conj_intro(left, right)),
            ))
        }
        (EquivWitness::Or(w1, w2), Formula::Or(a1, a2), Formula::Or(b1, b2)) => {
            let left = Proof::disj_intro1(
                (**a2).clone(),
                backward(
                    w1,
                    a1,
                    b1,
                    Proof::assume((**b1).clone()),
                    Context::singleton((**b1).clone()),
                )?,
            );
            let right = Proof::disj_intro2(
                (**a1).clone(),
                backward(
                    w2,
                    a2,
                    b2,
                    Proof::assume((**b2).clone()),
                    Context::singleton((**b2).clone()),
                )?,
            );
            Ok(Proof::close(ctx, Proof::disj_elim(p, left, right)))
        }
        (EquivWitness::Forall(w0), Formula::Forall(x, a0), Formula::Forall(_, b0)) => {
            let assumption = Context::singleton(b.clone());
            let instantiated = Proof::univ_elim(
                Term::Var(*x),
                SubstitutionEvidence::identity(b0, *x),
                Proof::assume(b.clone()),
            );
            let renamed = backward(w0, a0, b0, instantiated, assumption)?;
            Ok(reintroduce_universal(b, *x, renamed, p, ctx))
        }
        (
            EquivWitness::ForallRename {
                not_free,
                evidence,
                tail,
            },
            Formula::Forall(x, _),
            Formula::Forall(y, b0),
        ) => {
            let assumption = Context::singleton(b.clone());
            let renamed_body = &evidence.claim.result;
            let instantiated = Proof::univ_elim(
                Term::Var(*y),
                SubstitutionEvidence::identity(b0, *y),
                Proof::assume(b.clone()),
            );
            let body = backward(tail, renamed_body, b0, instantiated, assumption)?;
            if x == y {
                // degenerate: the renamed body is the original body
                return Ok(reintroduce_universal(b, *x, body, p, ctx));
            }
            let regeneralised = Proof::univ_intro(*y, body);
            let inverted = invert_substitution(not_free, evidence)?;
            let original = Proof::univ_elim(Term::Var(*x), inverted, regeneralised);
            Ok(reintroduce_universal(b, *x, original, p, ctx))
        }
        (
            EquivWitness::ForallRenameDual {
                head,
                not_free,
                evidence,
            },
            Formula::Forall(x, a0),
            Formula::Forall(y, b0),
        ) => {
            let assumption = Context::singleton(b.clone());
            let equivalent = &evidence.claim.source;
            let instantiated = if x == y {
                Proof::univ_elim(
                    Term::Var(*x),
                    SubstitutionEvidence::identity(b0, *x),
                    Proof::assume(b.clone()),
                )
            } else {
                let inverted = invert_substitution(not_free, evidence)?;
                Proof::univ_elim(Term::Var(*x), inverted, Proof::assume(b.clone()))
            };
            let body = backward(head, a0, equivalent, instantiated, assumption)?;
            Ok(reintroduce_universal(b, *x, body, p, ctx))
        }
        (EquivWitness::Exists(w0), Formula::Exists(x, a0), Formula::Exists(_, b0)) => {
            let body = backward(
                w0,
                a0,
                b0,
                Proof::assume((**b0).clone()),
                Context::singleton((**b0).clone()),
            )?;
            let intro = Proof::exist_intro(
                Term::Var(*x),
                *x,
                SubstitutionEvidence::identity(a0, *x),
                body,
            );
            Ok(Proof::close(ctx, Proof::exist_elim(*x, p, intro)))
        }
        (
            EquivWitness::ExistsRename { evidence, tail, .. },
            Formula::Exists(x, _),
            Formula::Exists(y, b0),
        ) => {
            let renamed_body = &evidence.claim.result;
            let body = backward(
                tail,
                renamed_body,
                b0,
                Proof::assume((**b0).clone()),
                Context::singleton((**b0).clone()),
            )?;
            let intro = Proof::exist_intro(Term::Var(*y), *x, evidence.clone(), body);
            Ok(Proof::close(ctx, Proof::exist_elim(*y, p, intro)))
        }
        (
            EquivWitness::ExistsRenameDual { head, evidence, .. },
            Formula::Exists(x, a0),
            Formula::Exists(y, b0),
        ) => {
            let equivalent = &evidence.claim.source;
            let reintro = Proof::exist_intro(
                Term::Var(*y),
                *x,
                evidence.clone(),
                Proof::assume((**b0).clone()),
            );
            let body = backward(
                head,
                a0,
                equivalent,
                Proof::assume(equivalent.clone()),
                Context::singleton(equivalent.clone()),
            )?;
            let outro = Proof::exist_intro(
                Term::Var(*x),
                *x,
                SubstitutionEvidence::identity(a0, *x),
                body,
            );
            let chained = Proof::exist_elim(*x, reintro, outro);
            Ok(Proof::close(ctx, Proof::exist_elim(*y, p, chained)))
        }
        _ => Err(RenameError::Witness(EquivError {
            path: Vec::new(),
            fault: EquivFault::Shape,
        })),
    }
}

// The universal cases re-introduce the generalisation behind an
// implication so that the context is not assumed when the quantifier
// comes back: from `<q> |- body` build
// `close ctx (arrowelim (arrowintro q (univintro v body)) p)`.
fn reintroduce_universal(
    assumed: &Formula,
    variable: Variable,
    body: Proof,
    p: Proof,
    ctx: Context,
) -> Proof {
    Proof::close(
        ctx,
        Proof::arrow_elim(
            Proof::arrow_intro(assumed.clone(), Proof::univ_intro(variable, body)),
            p,
        ),
    )
}
