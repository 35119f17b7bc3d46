//! Lowers parsed scripts onto the kernel and reports per-item verdicts.
//!
//! Substitution evidence is never written in scripts; the quantifier
//! rules request it from the substitution machinery here, and the kernel
//! re-validates it during checking. Proofs that check with no open
//! assumptions become citable by later proofs; reduction bodies may
//! additionally cite instances of their hypothesis schemes, which are
//! assumed for exactly that run.

use crate::ast::{
    FormulaExpr, Item, ModeName, ProofExpr, ProofItem, ReductionItem, SchemeTemplate, Script,
};
use crate::symbols::{print_formula, SymbolTable};
use natded_core::context::{subset_of, Context};
use natded_core::kernel::{check_proof, Judgement, Library, LogicMode, Proof};
use natded_core::substitution::{apply_substitution, free_for};
use natded_core::syntax::{formula_eq, Decision, Formula};
use serde::Serialize;
use std::collections::HashMap;
use std::time::{Duration, Instant};

#[derive(Clone, Serialize, Debug)]
pub struct ReportEntry {
    pub name: String,
    pub verdict: String,
    pub conclusion: Option<String>,
    pub context_members: Option<Vec<String>>,
    pub diagnostic: Option<String>,
}

#[derive(Clone, Serialize, Debug)]
pub struct Report {
    pub entries: Vec<ReportEntry>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(|e| e.verdict == "pass")
    }
}

/// A successfully checked item, kept for LaTeX emission.
pub enum CheckedItem {
    Proof {
        name: String,
        proof: Proof,
        mode: LogicMode,
        library: Library,
    },
    Reduction {
        name: String,
        hypotheses: Vec<String>,
        target: String,
        first_instance: Proof,
        mode: LogicMode,
        library: Library,
    },
}

pub struct RunOutcome {
    pub report: Report,
    pub checked: Vec<CheckedItem>,
}

fn mode_of(annotation: Option<ModeName>, default: LogicMode) -> LogicMode {
    match annotation {
        None => default,
        Some(ModeName::Minimal) => LogicMode::Minimal,
        Some(ModeName::Int) => LogicMode::Intuitionistic,
        Some(ModeName::Classical) => LogicMode::Classical,
    }
}

struct Runner<'a> {
    table: &'a SymbolTable,
    schemes: HashMap<String, SchemeTemplate>,
    /// conclusions of previously checked closed proofs, by name
    proved: HashMap<String, Formula>,
    library: Library,
}

struct LowerScope<'a> {
    bindings: HashMap<String, Formula>,
    /// hypothesis schemes citable with bracket arguments, none outside
    /// reduction bodies
    hypotheses: &'a [String],
    /// instances assumed for the current run
    run_library: Library,
    mode: LogicMode,
}

impl Runner<'_> {
    fn resolve(
        &self,
        expr: &FormulaExpr,
        bindings: &HashMap<String, Formula>,
    ) -> Result<Formula, String> {
        expr.resolve(bindings, &self.schemes)
    }

    fn lower(&self, expr: &ProofExpr, scope: &mut LowerScope<'_>) -> Result<Proof, String> {
        match expr {
            ProofExpr::Assume(f) => Ok(Proof::assume(self.resolve(f, &scope.bindings)?)),
            ProofExpr::ArrowIntro(f, body) => Ok(Proof::arrow_intro(
                self.resolve(f, &scope.bindings)?,
                self.lower(body, scope)?,
            )),
            ProofExpr::ArrowElim(f, a) => Ok(Proof::arrow_elim(
                self.lower(f, scope)?,
                self.lower(a, scope)?,
            )),
            ProofExpr::ConjIntro(l, r) => Ok(Proof::conj_intro(
                self.lower(l, scope)?,
                self.lower(r, scope)?,
            )),
            ProofExpr::ConjElim(p, b) => Ok(Proof::conj_elim(
                self.lower(p, scope)?,
                self.lower(b, scope)?,
            )),
            ProofExpr::DisjIntro1(f, body) => Ok(Proof::disj_intro1(
                self.resolve(f, &scope.bindings)?,
                self.lower(body, scope)?,
            )),
            ProofExpr::DisjIntro2(f, body) => Ok(Proof::disj_intro2(
                self.resolve(f, &scope.bindings)?,
                self.lower(body, scope)?,
            )),
            ProofExpr::DisjElim(d, l, r) => Ok(Proof::disj_elim(
                self.lower(d, scope)?,
                self.lower(l, scope)?,
                self.lower(r, scope)?,
            )),
            ProofExpr::UnivIntro(v, body) => Ok(Proof::univ_intro(*v, self.lower(body, scope)?)),
            ProofExpr::UnivElim(term, body) => {
                let sub = self.lower(body, scope)?;
                let judgement = self.check(&sub, scope)?;
                let Formula::Forall(v, inner) = judgement.conclusion() else {
                    return Err(format!(
                        "univelim needs a universal premiss, got `{}`",
                        print_formula(self.table, judgement.conclusion())
                    ));
                };
                let witness = match free_for(term, *v, inner) {
                    Decision::Yes(w) => w,
                    Decision::No(capture) => {
                        return Err(format!(
                            "term `{}` is not substitutable: binder `{}` would capture it",
                            crate::symbols::print_term(self.table, term),
                            crate::symbols::variable_name(capture.binder)
                        ));
                    }
                };
                let sub_result =
                    apply_substitution(inner, *v, term, &witness).map_err(|e| e.to_string())?;
                Ok(Proof::univ_elim(term.clone(), sub_result.evidence, sub))
            }
            ProofExpr::ExistIntro(target, term, body) => {
                let target = self.resolve(target, &scope.bindings)?;
                let Formula::Exists(v, inner) = &target else {
                    return Err(format!(
                        "existintro target must be existential, got `{}`",
                        print_formula(self.table, &target)
                    ));
                };
                let sub = self.lower(body, scope)?;
                let judgement = self.check(&sub, scope)?;
                let witness = match free_for(term, *v, inner) {
                    Decision::Yes(w) => w,
                    Decision::No(capture) => {
                        return Err(format!(
                            "term `{}` is not substitutable: binder `{}` would capture it",
                            crate::symbols::print_term(self.table, term),
                            crate::symbols::variable_name(capture.binder)
                        ));
                    }
                };
                let sub_result =
                    apply_substitution(inner, *v, term, &witness).map_err(|e| e.to_string())?;
                if formula_eq(&sub_result.result, judgement.conclusion()).is_no() {
                    return Err(format!(
                        "existintro premiss is `{}`, but instantiating the target gives `{}`",
                        print_formula(self.table, judgement.conclusion()),
                        print_formula(self.table, &sub_result.result)
                    ));
                }
                Ok(Proof::exist_intro(
                    term.clone(),
                    *v,
                    sub_result.evidence,
                    sub,
                ))
            }
            ProofExpr::ExistElim(v, exists, body) => Ok(Proof::exist_elim(
                *v,
                self.lower(exists, scope)?,
                self.lower(body, scope)?,
            )),
            ProofExpr::Close(members, body) => {
                let resolved: Vec<Formula> = members
                    .iter()
                    .map(|f| self.resolve(f, &scope.bindings))
                    .collect::<Result<_, _>>()?;
                Ok(Proof::close(
                    Context::from_members(resolved),
                    self.lower(body, scope)?,
                ))
            }
            ProofExpr::Cite { name, scheme_args } => match scheme_args {
                Some(args) => {
                    if !scope.hypotheses.contains(name) {
                        return Err(format!(
                            "`{name}` is not a hypothesis scheme of this reduction"
                        ));
                    }
                    let template = self
                        .schemes
                        .get(name)
                        .ok_or_else(|| format!("unknown scheme `{name}`"))?;
                    let resolved: Vec<Formula> = args
                        .iter()
                        .map(|a| self.resolve(a, &scope.bindings))
                        .collect::<Result<_, _>>()?;
                    let instance = template.instantiate(&resolved)?;
                    scope.run_library.assume(name, instance.clone());
                    Ok(Proof::cite(name, instance))
                }
                None => {
                    let conclusion = self
                        .proved
                        .get(name)
                        .ok_or_else(|| format!("`{name}` does not name an earlier closed proof"))?;
                    Ok(Proof::cite(name, conclusion.clone()))
                }
            },
            ProofExpr::BotC(f, body) => Ok(Proof::bot_c(
                self.resolve(f, &scope.bindings)?,
                self.lower(body, scope)?,
            )),
            ProofExpr::BotI(f, body) => Ok(Proof::bot_i(
                self.resolve(f, &scope.bindings)?,
                self.lower(body, scope)?,
            )),
        }
    }

    // The quantifier rules need the premiss's conclusion to compute the
    // substitution evidence, so lowering checks subtrees in the item's
    // declared mode as it goes.
    fn check(&self, proof: &Proof, scope: &LowerScope<'_>) -> Result<Judgement, String> {
        check_proof(proof, scope.mode, &scope.run_library).map_err(|e| e.to_string())
    }
}

fn entry_pass(name: &str, table: &SymbolTable, judgement: &Judgement) -> ReportEntry {
    let mut members: Vec<String> = judgement
        .context()
        .denotation()
        .iter()
        .map(|f| print_formula(table, f))
        .collect();
    members.sort();
    ReportEntry {
        name: name.to_string(),
        verdict: "pass".to_string(),
        conclusion: Some(print_formula(table, judgement.conclusion())),
        context_members: Some(members),
        diagnostic: None,
    }
}

fn entry_fail(name: &str, diagnostic: String) -> ReportEntry {
    ReportEntry {
        name: name.to_string(),
        verdict: "fail".to_string(),
        conclusion: None,
        context_members: None,
        diagnostic: Some(diagnostic),
    }
}

/// Checks every item in order. Proofs must match their claimed
/// judgements; reductions must prove their target instance from no open
/// assumptions on every sample.
pub fn run_check(
    script: &Script,
    table: &SymbolTable,
    default_mode: LogicMode,
    timeout: Option<Duration>,
) -> RunOutcome {
    let start = Instant::now();
    let mut runner = Runner {
        table,
        schemes: HashMap::new(),
        proved: HashMap::new(),
        library: Library::new(),
    };
    let mut report = Report {
        entries: Vec::new(),
    };
    let mut checked = Vec::new();

    for item in &script.items {
        let name = match item {
            Item::Scheme(template) => {
                runner
                    .schemes
                    .insert(template.name.clone(), template.clone());
                continue;
            }
            Item::Proof(p) => &p.name,
            Item::Reduction(r) => &r.name,
        };
        if let Some(limit) = timeout {
            if start.elapsed() > limit {
                report
                    .entries
                    .push(entry_fail(name, "timeout exceeded".to_string()));
                continue;
            }
        }
        match item {
            Item::Scheme(_) => unreachable!(),
            Item::Proof(p) => match runner.run_proof(p, default_mode) {
                Ok((proof, judgement, mode, library)) => {
                    report.entries.push(entry_pass(&p.name, table, &judgement));
                    checked.push(CheckedItem::Proof {
                        name: p.name.clone(),
                        proof,
                        mode,
                        library,
                    });
                }
                Err(diagnostic) => report
                    .entries
                    .push(entry_fail(&p.name, format!("{}: {diagnostic}", p.pos))),
            },
            Item::Reduction(r) => match runner.run_reduction(r, default_mode) {
                Ok((first_instance, mode, library)) => {
                    let template = runner.schemes.get(&r.target).cloned();
                    let conclusion = template.and_then(|t| {
                        let bindings: HashMap<String, Formula> = HashMap::new();
                        let args: Result<Vec<Formula>, _> = r.samples[0]
                            .iter()
                            .map(|f| f.resolve(&bindings, &runner.schemes))
                            .collect();
                        args.ok().and_then(|a| t.instantiate(&a).ok())
                    });
                    report.entries.push(ReportEntry {
                        name: r.name.clone(),
                        verdict: "pass".to_string(),
                        conclusion: conclusion.map(|f| print_formula(table, &f)),
                        context_members: Some(Vec::new()),
                        diagnostic: None,
                    });
                    checked.push(CheckedItem::Reduction {
                        name: r.name.clone(),
                        hypotheses: r.hypotheses.clone(),
                        target: r.target.clone(),
                        first_instance,
                        mode,
                        library,
                    });
                }
                Err(diagnostic) => report
                    .entries
                    .push(entry_fail(&r.name, format!("{}: {diagnostic}", r.pos))),
            },
        }
    }
    RunOutcome { report, checked }
}

impl Runner<'_> {
    #[allow(clippy::type_complexity)]
    fn run_proof(
        &mut self,
        item: &ProofItem,
        default_mode: LogicMode,
    ) -> Result<(Proof, Judgement, LogicMode, Library), String> {
        let mode = mode_of(item.mode, default_mode);
        let no_bindings = HashMap::new();
        let claimed_conclusion = self.resolve(&item.conclusion, &no_bindings)?;
        let claimed_members: Vec<Formula> = item
            .context
            .iter()
            .map(|f| self.resolve(f, &no_bindings))
            .collect::<Result<_, _>>()?;
        let claimed_context = Context::from_members(claimed_members);

        let mut scope = LowerScope {
            bindings: HashMap::new(),
            hypotheses: &[],
            run_library: self.library.clone(),
            mode,
        };
        let proof = self.lower(&item.body, &mut scope)?;
        let judgement = check_proof(&proof, mode, &scope.run_library).map_err(|e| e.to_string())?;

        if formula_eq(judgement.conclusion(), &claimed_conclusion).is_no() {
            return Err(format!(
                "proves `{}`, claimed `{}`",
                print_formula(self.table, judgement.conclusion()),
                print_formula(self.table, &claimed_conclusion)
            ));
        }
        if let Decision::No(extra) = subset_of(judgement.context(), &claimed_context) {
            return Err(format!(
                "open assumption `{}` is not part of the claimed context",
                print_formula(self.table, &extra)
            ));
        }
        if let Decision::No(missing) = subset_of(&claimed_context, judgement.context()) {
            return Err(format!(
                "claimed assumption `{}` is not actually open",
                print_formula(self.table, &missing)
            ));
        }

        if judgement.context().denotation().is_empty() {
            self.proved
                .insert(item.name.clone(), judgement.conclusion().clone());
            self.library
                .assume(&item.name, judgement.conclusion().clone());
        }
        Ok((proof, judgement, mode, scope.run_library))
    }

    fn run_reduction(
        &mut self,
        item: &ReductionItem,
        default_mode: LogicMode,
    ) -> Result<(Proof, LogicMode, Library), String> {
        let mode = mode_of(item.mode, default_mode);
        let target = self
            .schemes
            .get(&item.target)
            .cloned()
            .ok_or_else(|| format!("unknown scheme `{}`", item.target))?;
        let no_bindings = HashMap::new();
        let mut first: Option<(Proof, Library)> = None;

        for (index, sample) in item.samples.iter().enumerate() {
            let args: Vec<Formula> = sample
                .iter()
                .map(|f| self.resolve(f, &no_bindings))
                .collect::<Result<_, _>>()
                .map_err(|e| format!("sample {index}: {e}"))?;
            let expected = target
                .instantiate(&args)
                .map_err(|e| format!("sample {index}: {e}"))?;
            let bindings: HashMap<String, Formula> = item
                .params
                .iter()
                .cloned()
                .zip(args.iter().cloned())
                .collect();
            let mut scope = LowerScope {
                bindings,
                hypotheses: &item.hypotheses,
                run_library: self.library.clone(),
                mode,
            };
            let proof = self
                .lower(&item.body, &mut scope)
                .map_err(|e| format!("sample {index}: {e}"))?;
            let judgement = check_proof(&proof, mode, &scope.run_library)
                .map_err(|e| format!("sample {index}: {e}"))?;
            if formula_eq(judgement.conclusion(), &expected).is_no() {
                return Err(format!(
                    "sample {index}: proves `{}`, target instance is `{}`",
                    print_formula(self.table, judgement.conclusion()),
                    print_formula(self.table, &expected)
                ));
            }
            if let Some(open) = judgement.context().denotation().into_iter().next() {
                return Err(format!(
                    "sample {index}: open assumption `{}` remains",
                    print_formula(self.table, &open)
                ));
            }
            if first.is_none() {
                first = Some((proof, scope.run_library));
            }
        }
        let (proof, library) = first.ok_or("reduction has no samples")?;
        Ok((proof, mode, library))
    }
}
