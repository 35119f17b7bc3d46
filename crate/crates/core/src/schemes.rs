//! Axiom schemes, scheme derivability, and the executable proof corpus:
//! the bottom-rule equivalences, the drinker paradox from double negation
//! elimination, and excluded middle without loss of generality.
//!
//! A scheme is derivable when every instance is provable. Universal
//! quantification over all formulas is not finitely checkable, so
//! reductions are spot-checked on a sampled set of instances; hypothesis
//! instances are resolved through `Cite` against a per-run library, which
//! makes every check conditional on exactly the cited instances and
//! nothing else.

use crate::binding::{fresh, not_free_from_fresh, FreshWitness, NotFreeWitness, NotInTermWitness};
use crate::context::Context;
use crate::kernel::{check_proof, CheckError, Judgement, Library, LogicMode, Proof};
use crate::substitution::{
    apply_substitution, free_for, invert_substitution, not_free_after_substitution,
    SubstitutionError, SubstitutionEvidence,
};
use crate::syntax::{formula_eq, Decision, Formula, Term, Variable};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// The fixed quantifier variable of the corpus schemes.
pub fn xvar() -> Variable {
    Variable(0)
}

pub fn yvar() -> Variable {
    Variable(1)
}

/// Double negation elimination: `~~a => a`.
pub fn dne(a: Formula) -> Formula {
    Formula::implies(a.clone().negate().negate(), a)
}

/// Ex falso quodlibet: `bot => a`.
pub fn efq(a: Formula) -> Formula {
    Formula::implies(Formula::bottom(), a)
}

/// The drinker paradox: `exists x (a => forall x a)`.
pub fn dp(a: Formula) -> Formula {
    let x = xvar();
    Formula::exists(x, Formula::implies(a.clone(), Formula::forall(x, a)))
}

/// The dual of the drinker paradox: `exists x (exists x a => a)`.
pub fn he(a: Formula) -> Formula {
    let x = xvar();
    Formula::exists(x, Formula::implies(Formula::exists(x, a.clone()), a))
}

/// Excluded middle: `a | ~a`.
pub fn lem(a: Formula) -> Formula {
    Formula::or(a.clone(), a.negate())
}

type InstantiateFn = dyn Fn(&[Formula]) -> Formula + Send + Sync;

/// A named function from formula vectors to formulas.
#[derive(Clone)]
pub struct Scheme {
    name: String,
    arity: usize,
    instantiate: Arc<InstantiateFn>,
}

impl fmt::Debug for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Scheme")
            .field("name", &self.name)
            .field("arity", &self.arity)
            .finish()
    }
}

#[derive(Clone, PartialEq, Debug, Error)]
pub enum SchemeError {
    #[error("scheme {scheme} expects {expected} argument(s), got {found}")]
    Arity {
        scheme: String,
        expected: usize,
        found: usize,
    },
    #[error("reduction has no hypothesis #{0}")]
    UnknownHypothesis(usize),
    #[error("{0}")]
    Substitution(#[from] SubstitutionError),
    #[error("{0}")]
    Check(#[from] CheckError),
    #[error("oracle failed: {0}")]
    Oracle(String),
    #[error("internal: a fresh variable must be free for the substituted variable")]
    FreshNotFreeFor,
}

impl Scheme {
    pub fn new<F>(name: &str, arity: usize, instantiate: F) -> Scheme
    where
        F: Fn(&[Formula]) -> Formula + Send + Sync + 'static,
    {
        Scheme {
            name: name.to_string(),
            arity,
            instantiate: Arc::new(instantiate),
        }
    }

    pub fn nullary(name: &str, formula: Formula) -> Scheme {
        Scheme::new(name, 0, move |_| formula.clone())
    }

    pub fn unary<F>(name: &str, f: F) -> Scheme
    where
        F: Fn(Formula) -> Formula + Send + Sync + 'static,
    {
        Scheme::new(name, 1, move |args| f(args[0].clone()))
    }

    pub fn binary<F>(name: &str, f: F) -> Scheme
    where
        F: Fn(Formula, Formula) -> Formula + Send + Sync + 'static,
    {
        Scheme::new(name, 2, move |args| f(args[0].clone(), args[1].clone()))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn instantiate(&self, args: &[Formula]) -> Result<Formula, SchemeError> {
        if args.len() != self.arity {
            return Err(SchemeError::Arity {
                scheme: self.name.clone(),
                expected: self.arity,
                found: args.len(),
            });
        }
        Ok((self.instantiate)(args))
    }
}

pub fn dne_scheme() -> Scheme {
    Scheme::unary("DNE", dne)
}

pub fn efq_scheme() -> Scheme {
    Scheme::unary("EFQ", efq)
}

pub fn dp_scheme() -> Scheme {
    Scheme::unary("DP", dp)
}

pub fn he_scheme() -> Scheme {
    Scheme::unary("He", he)
}

pub fn lem_scheme() -> Scheme {
    Scheme::unary("LEM", lem)
}

/// Hypothesis-instance access for reduction witnesses: each `cite` call
/// registers the instance in the run's library and returns the citing
/// proof node.
pub struct Citations<'a> {
    hypotheses: &'a [Scheme],
    library: Library,
}

impl Citations<'_> {
    pub fn cite(&mut self, hypothesis: usize, args: &[Formula]) -> Result<Proof, SchemeError> {
        let scheme = self
            .hypotheses
            .get(hypothesis)
            .ok_or(SchemeError::UnknownHypothesis(hypothesis))?;
        let instance = scheme.instantiate(args)?;
        self.library.assume(scheme.name(), instance.clone());
        Ok(Proof::cite(scheme.name(), instance))
    }
}

type WitnessFn = dyn Fn(&[Formula], &mut Citations<'_>) -> Result<Proof, SchemeError> + Send + Sync;

/// A derivability reduction: every instance of the target is provable
/// from finitely many instances of the hypothesis schemes.
#[derive(Clone)]
pub struct Reduction {
    pub hypotheses: Vec<Scheme>,
    pub target: Scheme,
    witness: Arc<WitnessFn>,
}

impl fmt::Debug for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Reduction")
            .field("hypotheses", &self.hypotheses)
            .field("target", &self.target)
            .finish()
    }
}

#[derive(Clone, PartialEq, Debug, Error)]
#[error("reduction fails on sample {sample_index}: {error}")]
pub struct ReductionFailure {
    pub sample_index: usize,
    pub error: SchemeError,
}

impl Reduction {
    pub fn new<F>(hypotheses: Vec<Scheme>, target: Scheme, witness: F) -> Reduction
    where
        F: Fn(&[Formula], &mut Citations<'_>) -> Result<Proof, SchemeError> + Send + Sync + 'static,
    {
        Reduction {
            hypotheses,
            target,
            witness: Arc::new(witness),
        }
    }

    /// Runs the witness on one argument vector, returning the proof and
    /// the library of hypothesis instances it cited.
    pub fn instantiate_proof(&self, args: &[Formula]) -> Result<(Proof, Library), SchemeError> {
        let mut citations = Citations {
            hypotheses: &self.hypotheses,
            library: Library::new(),
        };
        let proof = (self.witness)(args, &mut citations)?;
        Ok((proof, citations.library))
    }

    /// Checks one instance end to end: the witness proof must check to
    /// the target instance from no open assumptions.
    pub fn check_instance(
        &self,
        args: &[Formula],
        mode: LogicMode,
    ) -> Result<Judgement, SchemeError> {
        let expected = self.target.instantiate(args)?;
        let (proof, library) = self.instantiate_proof(args)?;
        let judgement = check_proof(&proof, mode, &library)?;
        if formula_eq(judgement.conclusion(), &expected).is_no() {
            return Err(SchemeError::Check(CheckError::ConclusionMismatch {
                rule: "reduction",
                expected: expected.to_string(),
                found: judgement.conclusion().to_string(),
            }));
        }
        if !judgement.context().denotation().is_empty() {
            return Err(SchemeError::Check(CheckError::NotSubset {
                counterexample: judgement
                    .context()
                    .denotation()
                    .into_iter()
                    .next()
                    .expect("non-empty"),
            }));
        }
        Ok(judgement)
    }
}

/// Verifies a reduction on a sampled set of instance argument vectors.
pub fn check_reduction(
    r: &Reduction,
    samples: &[Vec<Formula>],
    mode: LogicMode,
) -> Result<(), ReductionFailure> {
    for (sample_index, args) in samples.iter().enumerate() {
        r.check_instance(args, mode)
            .map_err(|error| ReductionFailure {
                sample_index,
                error,
            })?;
    }
    Ok(())
}

/// `|- ~~a => a` using one classical bottom node. Checks in Classical
/// mode only.
pub fn dne_from_botc(a: &Formula) -> Proof {
    let nna = a.clone().negate().negate();
    Proof::close(
        Context::Empty,
        Proof::arrow_intro(
            nna.clone(),
            Proof::bot_c(
                a.clone(),
                Proof::arrow_elim(Proof::assume(nna), Proof::assume(a.clone().negate())),
            ),
        ),
    )
}

/// Simulates the classical bottom rule from a cited DNE instance: given a
/// checked proof of falsum, concludes `a` with `~a` discharged. The
/// result checks in the same mode as the premiss, given a library entry
/// `DNE |- ~~a => a`.
pub fn botc_from_dne(
    a: &Formula,
    bottom_proof: Proof,
    mode: LogicMode,
    library: &Library,
) -> Result<Proof, SchemeError> {
    let premiss = check_proof(&bottom_proof, mode, library)?;
    let target = premiss.context().clone().remove(a.clone().negate());
    Ok(Proof::close(
        target,
        Proof::arrow_elim(
            Proof::cite("DNE", dne(a.clone())),
            Proof::arrow_intro(a.clone().negate(), bottom_proof),
        ),
    ))
}

/// `|- bot => a` using one intuitionistic bottom node. Checks in
/// Intuitionistic mode only.
pub fn efq_from_boti(a: &Formula) -> Proof {
    Proof::close(
        Context::Empty,
        Proof::arrow_intro(
            Formula::bottom(),
            Proof::bot_i(a.clone(), Proof::assume(Formula::bottom())),
        ),
    )
}

/// Simulates the intuitionistic bottom rule from a cited EFQ instance.
pub fn boti_from_efq(
    a: &Formula,
    bottom_proof: Proof,
    mode: LogicMode,
    library: &Library,
) -> Result<Proof, SchemeError> {
    let premiss = check_proof(&bottom_proof, mode, library)?;
    let target = premiss.context().clone();
    Ok(Proof::close(
        target,
        Proof::arrow_elim(Proof::cite("EFQ", efq(a.clone())), bottom_proof),
    ))
}

/// The drinker paradox from double negation elimination, with the
/// hypothesis cited at the instance, the inner formula, and its closure.
pub fn dne_implies_dp() -> Reduction {
    Reduction::new(vec![dne_scheme()], dp_scheme(), |args, citations| {
        let a = args[0].clone();
        let x = xvar();
        let dp_a = dp(a.clone());
        let not_dp_a = dp_a.clone().negate();
        let all_a = Formula::forall(x, a.clone());
        let a_implies_all = Formula::implies(a.clone(), all_a.clone());

        let contradiction =
            Proof::arrow_elim(Proof::assume(a.clone().negate()), Proof::assume(a.clone()));
        let doubly_negated_all = Proof::arrow_intro(all_a.clone().negate(), contradiction);
        let all_from_dne = Proof::arrow_elim(
            citations.cite(0, std::slice::from_ref(&all_a))?,
            doubly_negated_all,
        );
        let first_witness = Proof::exist_intro(
            Term::var(x),
            x,
            SubstitutionEvidence::identity(&a_implies_all, x),
            Proof::arrow_intro(a.clone(), all_from_dne),
        );
        let first_bottom = Proof::arrow_elim(Proof::assume(not_dp_a.clone()), first_witness);
        let a_from_dne = Proof::arrow_elim(
            citations.cite(0, std::slice::from_ref(&a))?,
            Proof::arrow_intro(a.clone().negate(), first_bottom),
        );
        let generalised = Proof::univ_intro(x, a_from_dne);
        let second_witness = Proof::exist_intro(
            Term::var(x),
            x,
            SubstitutionEvidence::identity(&a_implies_all, x),
            Proof::arrow_intro(a.clone(), generalised),
        );
        let second_bottom = Proof::arrow_elim(Proof::assume(not_dp_a.clone()), second_witness);
        let dp_from_dne = Proof::arrow_elim(
            citations.cite(0, std::slice::from_ref(&dp_a))?,
            Proof::arrow_intro(not_dp_a, second_bottom),
        );
        Ok(Proof::close(Context::Empty, dp_from_dne))
    })
}

// Splits the freshness witness for `forall x a` into its parts: the
// binder inequality and freshness in the body.
fn split_quantified_freshness(w: &FreshWitness) -> (&FreshWitness, NotFreeWitness) {
    match w {
        FreshWitness::Forall { body, .. } => (body, not_free_from_fresh(body)),
        _ => unreachable!("fresh variable witness for a universally quantified formula"),
    }
}

/// Derives excluded middle for an arbitrary formula from excluded middle
/// for formulas in which `x` is not free.
///
/// The oracle receives the formula with `x` substituted away and a
/// witness that `x` is not free in it, and must return a proof of the
/// corresponding excluded-middle instance from no assumptions (a `Cite`
/// in the usual setup).
pub fn wlog_lem<F>(a: &Formula, mut oracle: F) -> Result<Proof, SchemeError>
where
    F: FnMut(&Formula, &NotFreeWitness) -> Result<Proof, SchemeError>,
{
    let x = xvar();
    // fresh for the quantified formula, so distinct from x and fresh in a
    let (omega, freshness) = fresh(&Formula::forall(x, a.clone()));
    let (_, omega_not_free_in_a) = split_quantified_freshness(&freshness);

    let Decision::Yes(capture_free) = free_for(&Term::var(omega), x, a) else {
        return Err(SchemeError::FreshNotFreeFor);
    };
    let substituted = apply_substitution(a, x, &Term::var(omega), &capture_free)?;
    let a_omega = substituted.result.clone();

    let x_not_free = not_free_after_substitution(
        &NotInTermWitness::Var { other: omega },
        &substituted.evidence,
    )?;
    let oracle_proof = oracle(&a_omega, &x_not_free)?;

    // evidence that (lem a)[x/omega] == (lem a_omega), assembled from the
    // body substitution and the untouched falsum
    let bottom_unchanged = SubstitutionEvidence::unchanged(
        &Formula::bottom(),
        x,
        &Term::var(omega),
        NotFreeWitness::Atom(vec![]),
    )?;
    let negated = SubstitutionEvidence::implies(substituted.evidence.clone(), bottom_unchanged)?;
    let lem_evidence = SubstitutionEvidence::or(substituted.evidence, negated)?;

    // omega is not free in (lem a), so the substitution inverts
    let omega_not_free_in_lem = NotFreeWitness::Or(
        Box::new(omega_not_free_in_a.clone()),
        Box::new(NotFreeWitness::Implies(
            Box::new(omega_not_free_in_a),
            Box::new(NotFreeWitness::Atom(vec![])),
        )),
    );
    let inverted = invert_substitution(&omega_not_free_in_lem, &lem_evidence)?;

    Ok(Proof::close(
        Context::Empty,
        Proof::univ_elim(
            Term::var(x),
            inverted,
            Proof::univ_intro(omega, oracle_proof),
        ),
    ))
}
