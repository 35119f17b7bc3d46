//! The trusted checker for natural deduction proof trees.
//!
//! This is the part of the system a result ultimately rests on. Proof
//! objects are plain data; `check_proof` computes each node's context and
//! conclusion bottom-up and re-verifies every side condition with the
//! decision procedures, treating embedded witnesses as untrusted input.

use crate::binding::not_free_in;
use crate::context::{all_satisfy, subset_of, Context};
use crate::substitution::{verify_evidence, EvidenceError, SubstitutionEvidence};
use crate::syntax::{formula_eq, Formula, Term, Variable};
use std::collections::HashMap;
use thiserror::Error;

/// Which bottom rules are available. Minimal logic has neither; the
/// intuitionistic and classical rules are independent toggles.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LogicMode {
    Minimal,
    Intuitionistic,
    Classical,
}

impl LogicMode {
    fn allows_bot_i(self) -> bool {
        self == LogicMode::Intuitionistic
    }

    fn allows_bot_c(self) -> bool {
        self == LogicMode::Classical
    }
}

/// A natural deduction proof tree. Substitution evidence carried by the
/// quantifier nodes is validated by the checker, never trusted.
#[derive(Clone, PartialEq, Debug)]
pub enum Proof {
    /// An assumption of the formula, with itself as the whole context.
    Assume(Formula),
    /// Reference to a previously checked closed proof under `name`.
    Cite {
        name: String,
        conclusion: Formula,
    },
    /// Context normalisation and weakening: re-checks the context into
    /// any superset.
    Close {
        target: Context,
        body: Box<Proof>,
    },
    ArrowIntro {
        assumption: Formula,
        body: Box<Proof>,
    },
    ArrowElim {
        function: Box<Proof>,
        argument: Box<Proof>,
    },
    ConjIntro {
        left: Box<Proof>,
        right: Box<Proof>,
    },
    ConjElim {
        pair: Box<Proof>,
        body: Box<Proof>,
    },
    DisjIntro1 {
        right: Formula,
        body: Box<Proof>,
    },
    DisjIntro2 {
        left: Formula,
        body: Box<Proof>,
    },
    DisjElim {
        disj: Box<Proof>,
        left_case: Box<Proof>,
        right_case: Box<Proof>,
    },
    UnivIntro {
        variable: Variable,
        body: Box<Proof>,
    },
    UnivElim {
        term: Term,
        evidence: SubstitutionEvidence,
        body: Box<Proof>,
    },
    ExistIntro {
        term: Term,
        variable: Variable,
        evidence: SubstitutionEvidence,
        body: Box<Proof>,
    },
    ExistElim {
        variable: Variable,
        exists: Box<Proof>,
        body: Box<Proof>,
    },
    /// Classical bottom rule: from falsum conclude `a`, discharging `~a`.
    BotC {
        conclusion: Formula,
        body: Box<Proof>,
    },
    /// Intuitionistic bottom rule: from falsum conclude anything.
    BotI {
        conclusion: Formula,
        body: Box<Proof>,
    },
}

/// A checked judgement `context |- conclusion`. Only the checker builds
/// these.
#[derive(Clone, PartialEq, Debug)]
pub struct Judgement {
    context: Context,
    conclusion: Formula,
}

impl Judgement {
    pub fn context(&self) -> &Context {
        &self.context
    }

    pub fn conclusion(&self) -> &Formula {
        &self.conclusion
    }

    pub fn into_parts(self) -> (Context, Formula) {
        (self.context, self.conclusion)
    }
}

/// Named closed conclusions available to `Cite`. The same name may carry
/// several instances; a citation matches when both name and conclusion do.
#[derive(Clone, Default, Debug)]
pub struct Library {
    entries: HashMap<String, Vec<Formula>>,
}

#[derive(Clone, PartialEq, Debug, Error)]
pub enum LibraryError {
    #[error("proof for `{0}` has a non-empty context and cannot be cited")]
    OpenContext(String),
}

impl Library {
    pub fn new() -> Library {
        Library::default()
    }

    /// Registers a checked judgement; its context must denote the empty
    /// set.
    pub fn insert_checked(&mut self, name: &str, j: &Judgement) -> Result<(), LibraryError> {
        if !j.context.denotation().is_empty() {
            return Err(LibraryError::OpenContext(name.to_string()));
        }
        self.assume(name, j.conclusion.clone());
        Ok(())
    }

    /// Registers a conclusion without a proof. Used to model hypothesis
    /// schemes in derivability reductions and fixtures in tests; anything
    /// checked against such a library is conditional on these entries.
    pub fn assume(&mut self, name: &str, conclusion: Formula) {
        self.entries
            .entry(name.to_string())
            .or_default()
            .push(conclusion);
    }

    pub fn contains(&self, name: &str, conclusion: &Formula) -> bool {
        self.entries
            .get(name)
            .is_some_and(|cs| cs.iter().any(|c| c == conclusion))
    }

    pub fn knows_name(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }
}

#[derive(Clone, PartialEq, Debug, Error)]
pub enum CheckError {
    #[error("{rule}: expected `{expected}`, found `{found}`")]
    ConclusionMismatch {
        rule: &'static str,
        expected: String,
        found: String,
    },
    #[error("{rule}: conclusion `{found}` does not have the required shape")]
    ShapeMismatch { rule: &'static str, found: String },
    #[error(
        "freedom side condition failed: `{variable}` is free in open assumption `{assumption}`"
    )]
    FreedomViolation {
        variable: Variable,
        assumption: Formula,
    },
    #[error("invalid substitution evidence: {0}")]
    InvalidEvidence(#[from] EvidenceError),
    #[error("{rule}: evidence does not connect the premiss to the conclusion")]
    EvidenceMismatch { rule: &'static str },
    #[error("close: `{counterexample}` is not a member of the target context")]
    NotSubset { counterexample: Formula },
    #[error("{rule} is not available in {mode:?} mode")]
    ModeViolation { rule: &'static str, mode: LogicMode },
    #[error("unknown cite name `{0}`")]
    UnknownCite(String),
    #[error("cite `{name}` does not prove `{claimed}`")]
    CiteMismatch { name: String, claimed: String },
}

/// Checks a proof tree, computing its judgement bottom-up.
pub fn check_proof(
    proof: &Proof,
    mode: LogicMode,
    library: &Library,
) -> Result<Judgement, CheckError> {
    match proof {
        Proof::Assume(a) => Ok(Judgement {
            context: Context::singleton(a.clone()),
            conclusion: a.clone(),
        }),

        Proof::Cite { name, conclusion } => {
            if !library.knows_name(name) {
                return Err(CheckError::UnknownCite(name.clone()));
            }
            if !library.contains(name, conclusion) {
                return Err(CheckError::CiteMismatch {
                    name: name.clone(),
                    claimed: conclusion.to_string(),
                });
            }
            Ok(Judgement {
                context: Context::Empty,
                conclusion: conclusion.clone(),
            })
        }

        Proof::Close { target, body } => {
            let j = check_proof(body, mode, library)?;
            match subset_of(&j.context, target) {
                crate::syntax::Decision::Yes(_) => Ok(Judgement {
                    context: target.clone(),
                    conclusion: j.conclusion,
                }),
                crate::syntax::Decision::No(counterexample) => {
                    Err(CheckError::NotSubset { counterexample })
                }
            }
        }

        Proof::ArrowIntro { assumption, body } => {
            let j = check_proof(body, mode, library)?;
            Ok(Judgement {
                context: j.context.remove(assumption.clone()),
                conclusion: Formula::implies(assumption.clone(), j.conclusion),
            })
        }

        Proof::ArrowElim { function, argument } => {
            let jf = check_proof(function, mode, library)?;
            let ja = check_proof(argument, mode, library)?;
            let Formula::Implies(antecedent, consequent) = &jf.conclusion else {
                return Err(CheckError::ShapeMismatch {
                    rule: "arrowelim",
                    found: jf.conclusion.to_string(),
                });
            };
            if formula_eq(antecedent, &ja.conclusion).is_no() {
                return Err(CheckError::ConclusionMismatch {
                    rule: "arrowelim",
                    expected: antecedent.to_string(),
                    found: ja.conclusion.to_string(),
                });
            }
            Ok(Judgement {
                context: Context::union(jf.context, ja.context),
                conclusion: (**consequent).clone(),
            })
        }

        Proof::ConjIntro { left, right } => {
            let jl = check_proof(left, mode, library)?;
            let jr = check_proof(right, mode, library)?;
            Ok(Judgement {
                context: Context::union(jl.context, jr.context),
                conclusion: Formula::and(jl.conclusion, jr.conclusion),
            })
        }

        Proof::ConjElim { pair, body } => {
            let jp = check_proof(pair, mode, library)?;
            let jb = check_proof(body, mode, library)?;
            let Formula::And(a, b) = &jp.conclusion else {
                return Err(CheckError::ShapeMismatch {
                    rule: "conjelim",
                    found: jp.conclusion.to_string(),
                });
            };
            Ok(Judgement {
                context: Context::union(
                    jp.context,
                    jb.context.remove((**a).clone()).remove((**b).clone()),
                ),
                conclusion: jb.conclusion,
            })
        }

        Proof::DisjIntro1 { right, body } => {
            let j = check_proof(body, mode, library)?;
            Ok(Judgement {
                context: j.context,
                conclusion: Formula::or(j.conclusion, right.clone()),
            })
        }

        Proof::DisjIntro2 { left, body } => {
            let j = check_proof(body, mode, library)?;
            Ok(Judgement {
                context: j.context,
                conclusion: Formula::or(left.clone(), j.conclusion),
            })
        }

        Proof::DisjElim {
            disj,
            left_case,
            right_case,
        } => {
            let jd = check_proof(disj, mode, library)?;
            let jl = check_proof(left_case, mode, library)?;
            let jr = check_proof(right_case, mode, library)?;
            let Formula::Or(a, b) = &jd.conclusion else {
                return Err(CheckError::ShapeMismatch {
                    rule: "disjelim",
                    found: jd.conclusion.to_string(),
                });
            };
            if formula_eq(&jl.conclusion, &jr.conclusion).is_no() {
                return Err(CheckError::ConclusionMismatch {
                    rule: "disjelim",
                    expected: jl.conclusion.to_string(),
                    found: jr.conclusion.to_string(),
                });
            }
            Ok(Judgement {
                context: Context::union(
                    jd.context,
                    Context::union(
                        jl.context.remove((**a).clone()),
                        jr.context.remove((**b).clone()),
                    ),
                ),
                conclusion: jl.conclusion,
            })
        }

        Proof::UnivIntro { variable, body } => {
            let j = check_proof(body, mode, library)?;
            require_not_free_in_all(*variable, &j.context)?;
            Ok(Judgement {
                context: j.context,
                conclusion: Formula::forall(*variable, j.conclusion),
            })
        }

        Proof::UnivElim {
            term,
            evidence,
            body,
        } => {
            let j = check_proof(body, mode, library)?;
            let Formula::Forall(x, inner) = &j.conclusion else {
                return Err(CheckError::ShapeMismatch {
                    rule: "univelim",
                    found: j.conclusion.to_string(),
                });
            };
            verify_evidence(evidence)?;
            if evidence.claim.source != **inner
                || evidence.claim.var != *x
                || evidence.claim.term != *term
            {
                return Err(CheckError::EvidenceMismatch { rule: "univelim" });
            }
            Ok(Judgement {
                context: j.context,
                conclusion: evidence.claim.result.clone(),
            })
        }

        Proof::ExistIntro {
            term,
            variable,
            evidence,
            body,
        } => {
            let j = check_proof(body, mode, library)?;
            verify_evidence(evidence)?;
            if evidence.claim.var != *variable
                || evidence.claim.term != *term
                || evidence.claim.result != j.conclusion
            {
                return Err(CheckError::EvidenceMismatch { rule: "existintro" });
            }
            Ok(Judgement {
                context: j.context,
                conclusion: Formula::exists(*variable, evidence.claim.source.clone()),
            })
        }

        Proof::ExistElim {
            variable,
            exists,
            body,
        } => {
            let je = check_proof(exists, mode, library)?;
            let jb = check_proof(body, mode, library)?;
            let Formula::Exists(x, inner) = &je.conclusion else {
                return Err(CheckError::ShapeMismatch {
                    rule: "existelim",
                    found: je.conclusion.to_string(),
                });
            };
            if x != variable {
                return Err(CheckError::ConclusionMismatch {
                    rule: "existelim",
                    expected: Formula::exists(*variable, (**inner).clone()).to_string(),
                    found: je.conclusion.to_string(),
                });
            }
            let reduced = jb.context.clone().remove((**inner).clone());
            // the eliminated variable may be free neither in the
            // conclusion nor in any remaining assumption of the case
            let condition =
                Context::union(Context::singleton(jb.conclusion.clone()), reduced.clone());
            require_not_free_in_all(*variable, &condition)?;
            Ok(Judgement {
                context: Context::union(je.context, reduced),
                conclusion: jb.conclusion,
            })
        }

        Proof::BotC { conclusion, body } => {
            if !mode.allows_bot_c() {
                return Err(CheckError::ModeViolation { rule: "botc", mode });
            }
            let j = check_proof(body, mode, library)?;
            if !j.conclusion.is_bottom() {
                return Err(CheckError::ShapeMismatch {
                    rule: "botc",
                    found: j.conclusion.to_string(),
                });
            }
            Ok(Judgement {
                context: j.context.remove(conclusion.clone().negate()),
                conclusion: conclusion.clone(),
            })
        }

        Proof::BotI { conclusion, body } => {
            if !mode.allows_bot_i() {
                return Err(CheckError::ModeViolation { rule: "boti", mode });
            }
            let j = check_proof(body, mode, library)?;
            if !j.conclusion.is_bottom() {
                return Err(CheckError::ShapeMismatch {
                    rule: "boti",
                    found: j.conclusion.to_string(),
                });
            }
            Ok(Judgement {
                context: j.context,
                conclusion: conclusion.clone(),
            })
        }
    }
}

fn require_not_free_in_all(x: Variable, ctx: &Context) -> Result<(), CheckError> {
    match all_satisfy(|f| not_free_in(x, f).is_yes(), ctx) {
        crate::syntax::Decision::Yes(_) => Ok(()),
        crate::syntax::Decision::No(assumption) => Err(CheckError::FreedomViolation {
            variable: x,
            assumption,
        }),
    }
}

impl Proof {
    /// Checks the proof and projects the conclusion.
    pub fn conclusion(&self, mode: LogicMode, library: &Library) -> Result<Formula, CheckError> {
        check_proof(self, mode, library).map(|j| j.conclusion)
    }

    /// Checks the proof and projects the context.
    pub fn context(&self, mode: LogicMode, library: &Library) -> Result<Context, CheckError> {
        check_proof(self, mode, library).map(|j| j.context)
    }

    pub fn assume(a: Formula) -> Proof {
        Proof::Assume(a)
    }

    pub fn cite(name: &str, conclusion: Formula) -> Proof {
        Proof::Cite {
            name: name.to_string(),
            conclusion,
        }
    }

    pub fn close(target: Context, body: Proof) -> Proof {
        Proof::Close {
            target,
            body: Box::new(body),
        }
    }

    pub fn arrow_intro(assumption: Formula, body: Proof) -> Proof {
        Proof::ArrowIntro {
            assumption,
            body: Box::new(body),
        }
    }

    pub fn arrow_elim(function: Proof, argument: Proof) -> Proof {
        Proof::ArrowElim {
            function: Box::new(function),
            argument: Box::new(argument),
        }
    }

    pub fn conj_intro(left: Proof, right: Proof) -> Proof {
        Proof::ConjIntro {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn conj_elim(pair: Proof, body: Proof) -> Proof {
        Proof::ConjElim {
            pair: Box::new(pair),
            body: Box::new(body),
        }
    }

    pub fn disj_intro1(right: Formula, body: Proof) -> Proof {
        Proof::DisjIntro1 {
            right,
            body: Box::new(body),
        }
    }

    pub fn disj_intro2(left: Formula, body: Proof) -> Proof {
        Proof::DisjIntro2 {
            left,
            body: Box::new(body),
        }
    }

    pub fn disj_elim(disj: Proof, left_case: Proof, right_case: Proof) -> Proof {
        Proof::DisjElim {
            disj: Box::new(disj),
            left_case: Box::new(left_case),
            right_case: Box::new(right_case),
        }
    }

    pub fn univ_intro(variable: Variable, body: Proof) -> Proof {
        Proof::UnivIntro {
            variable,
            body: Box::new(body),
        }
    }

    pub fn univ_elim(term: Term, evidence: SubstitutionEvidence, body: Proof) -> Proof {
        Proof::UnivElim {
            term,
            evidence,
            body: Box::new(body),
        }
    }

    pub fn exist_intro(
        term: Term,
        variable: Variable,
        evidence: SubstitutionEvidence,
        body: Proof,
    ) -> Proof {
        Proof::ExistIntro {
            term,
            variable,
            evidence,
            body: Box::new(body),
        }
    }

    pub fn exist_elim(variable: Variable, exists: Proof, body: Proof) -> Proof {
        Proof::ExistElim {
            variable,
            exists: Box::new(exists),
            body: Box::new(body),
        }
    }

    pub fn bot_c(conclusion: Formula, body: Proof) -> Proof {
        Proof::BotC {
            conclusion,
            body: Box::new(body),
        }
    }

    pub fn bot_i(conclusion: Formula, body: Proof) -> Proof {
        Proof::BotI {
            conclusion,
            body: Box::new(body),
        }
    }
}
