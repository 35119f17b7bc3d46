//! Script-level syntax trees. Formulas inside scheme bodies and
//! reduction bodies may contain metavariables and scheme applications;
//! everything else resolves to kernel formulas already at parse time.

use crate::lexer::Pos;
use natded_core::syntax::{Formula, Term, Variable};
use std::collections::HashMap;

#[derive(Clone, PartialEq, Debug)]
pub enum FormulaExpr {
    Done(Formula),
    Metavar(String),
    SchemeApp {
        name: String,
        args: Vec<FormulaExpr>,
    },
    Implies(Box<FormulaExpr>, Box<FormulaExpr>),
    And(Box<FormulaExpr>, Box<FormulaExpr>),
    Or(Box<FormulaExpr>, Box<FormulaExpr>),
    Forall(Variable, Box<FormulaExpr>),
    Exists(Variable, Box<FormulaExpr>),
}

impl FormulaExpr {
    pub fn implies(a: FormulaExpr, b: FormulaExpr) -> FormulaExpr {
        match (a, b) {
            (FormulaExpr::Done(x), FormulaExpr::Done(y)) => {
                FormulaExpr::Done(Formula::implies(x, y))
            }
            (a, b) => FormulaExpr::Implies(Box::new(a), Box::new(b)),
        }
    }

    pub fn and(a: FormulaExpr, b: FormulaExpr) -> FormulaExpr {
        match (a, b) {
            (FormulaExpr::Done(x), FormulaExpr::Done(y)) => FormulaExpr::Done(Formula::and(x, y)),
            (a, b) => FormulaExpr::And(Box::new(a), Box::new(b)),
        }
    }

    pub fn or(a: FormulaExpr, b: FormulaExpr) -> FormulaExpr {
        match (a, b) {
            (FormulaExpr::Done(x), FormulaExpr::Done(y)) => FormulaExpr::Done(Formula::or(x, y)),
            (a, b) => FormulaExpr::Or(Box::new(a), Box::new(b)),
        }
    }

    pub fn negate(a: FormulaExpr) -> FormulaExpr {
        FormulaExpr::implies(a, FormulaExpr::Done(Formula::bottom()))
    }

    pub fn forall(v: Variable, body: FormulaExpr) -> FormulaExpr {
        match body {
            FormulaExpr::Done(b) => FormulaExpr::Done(Formula::forall(v, b)),
            body => FormulaExpr::Forall(v, Box::new(body)),
        }
    }

    pub fn exists(v: Variable, body: FormulaExpr) -> FormulaExpr {
        match body {
            FormulaExpr::Done(b) => FormulaExpr::Done(Formula::exists(v, b)),
            body => FormulaExpr::Exists(v, Box::new(body)),
        }
    }

    /// Instantiates metavariables and scheme applications.
    pub fn resolve(
        &self,
        bindings: &HashMap<String, Formula>,
        schemes: &HashMap<String, SchemeTemplate>,
    ) -> Result<Formula, String> {
        match self {
            FormulaExpr::Done(f) => Ok(f.clone()),
            FormulaExpr::Metavar(name) => bindings
                .get(name)
                .cloned()
                .ok_or_else(|| format!("unbound formula variable `{name}`")),
            FormulaExpr::SchemeApp { name, args } => {
                let template = schemes
                    .get(name)
                    .ok_or_else(|| format!("unknown scheme `{name}`"))?;
                let resolved: Vec<Formula> = args
                    .iter()
                    .map(|a| a.resolve(bindings, schemes))
                    .collect::<Result<_, _>>()?;
                template.instantiate(&resolved)
            }
            FormulaExpr::Implies(a, b) => Ok(Formula::implies(
                a.resolve(bindings, schemes)?,
                b.resolve(bindings, schemes)?,
            )),
            FormulaExpr::And(a, b) => Ok(Formula::and(
                a.resolve(bindings, schemes)?,
                b.resolve(bindings, schemes)?,
            )),
            FormulaExpr::Or(a, b) => Ok(Formula::or(
                a.resolve(bindings, schemes)?,
                b.resolve(bindings, schemes)?,
            )),
            FormulaExpr::Forall(v, body) => {
                Ok(Formula::forall(*v, body.resolve(bindings, schemes)?))
            }
            FormulaExpr::Exists(v, body) => {
                Ok(Formula::exists(*v, body.resolve(bindings, schemes)?))
            }
        }
    }
}

/// A named formula template over formula parameters.
#[derive(Clone, Debug)]
pub struct SchemeTemplate {
    pub name: String,
    pub params: Vec<String>,
    pub body: FormulaExpr,
}

impl SchemeTemplate {
    pub fn instantiate(&self, args: &[Formula]) -> Result<Formula, String> {
        if args.len() != self.params.len() {
            return Err(format!(
                "scheme `{}` expects {} argument(s), got {}",
                self.name,
                self.params.len(),
                args.len()
            ));
        }
        let bindings: HashMap<String, Formula> = self
            .params
            .iter()
            .cloned()
            .zip(args.iter().cloned())
            .collect();
        self.body.resolve(&bindings, &HashMap::new())
    }
}

#[derive(Clone, PartialEq, Debug)]
pub enum ProofExpr {
    Assume(FormulaExpr),
    ArrowIntro(FormulaExpr, Box<ProofExpr>),
    ArrowElim(Box<ProofExpr>, Box<ProofExpr>),
    ConjIntro(Box<ProofExpr>, Box<ProofExpr>),
    ConjElim(Box<ProofExpr>, Box<ProofExpr>),
    DisjIntro1(FormulaExpr, Box<ProofExpr>),
    DisjIntro2(FormulaExpr, Box<ProofExpr>),
    DisjElim(Box<ProofExpr>, Box<ProofExpr>, Box<ProofExpr>),
    UnivIntro(Variable, Box<ProofExpr>),
    UnivElim(Term, Box<ProofExpr>),
    ExistIntro(FormulaExpr, Term, Box<ProofExpr>),
    ExistElim(Variable, Box<ProofExpr>, Box<ProofExpr>),
    Close(Vec<FormulaExpr>, Box<ProofExpr>),
    Cite {
        name: String,
        scheme_args: Option<Vec<FormulaExpr>>,
    },
    BotC(FormulaExpr, Box<ProofExpr>),
    BotI(FormulaExpr, Box<ProofExpr>),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ModeName {
    Minimal,
    Int,
    Classical,
}

#[derive(Clone, Debug)]
pub struct ProofItem {
    pub name: String,
    pub mode: Option<ModeName>,
    pub context: Vec<FormulaExpr>,
    pub conclusion: FormulaExpr,
    pub body: ProofExpr,
    pub pos: Pos,
}

#[derive(Clone, Debug)]
pub struct ReductionItem {
    pub name: String,
    pub mode: Option<ModeName>,
    pub hypotheses: Vec<String>,
    pub target: String,
    pub params: Vec<String>,
    pub samples: Vec<Vec<FormulaExpr>>,
    pub body: ProofExpr,
    pub pos: Pos,
}

#[derive(Clone, Debug)]
pub enum Item {
    Scheme(SchemeTemplate),
    Proof(ProofItem),
    Reduction(ReductionItem),
}

/// A parsed script: declarations are folded into the symbol table during
/// parsing, so only schemes, proofs, and reductions remain as items.
#[derive(Clone, Debug, Default)]
pub struct Script {
    pub items: Vec<Item>,
}
