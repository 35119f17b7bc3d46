//! Acceptance suite: one test per criterion, each printing a PASS line.
//! Expected values come from independent oracles in `common` (occurrence
//! scanner, naive set denotation, naive substitution) or are checked
//! against the library's own deciders from both sides.

mod common;

use common::*;
use natded_core::binding::{
    fresh, fresh_in, max_var, not_free_from_fresh, not_free_in, validate_not_free,
};
use natded_core::context::{all_implies_members, all_satisfy, member_of, subset_of, Context};
use natded_core::equivalence::{equiv_sym, rename, verify_equiv};
use natded_core::kernel::{check_proof, CheckError, Library, LogicMode, Proof};
use natded_core::schemes::{
    botc_from_dne, boti_from_efq, check_reduction, dne, dne_from_botc, dne_implies_dp, efq,
    efq_from_boti, lem, wlog_lem,
};
use natded_core::substitution::{
    apply_substitution, free_for, invert_substitution, not_free_after_substitution,
    verify_evidence, SubstitutionEvidence,
};
use natded_core::syntax::{formula_eq, Decision, Formula, Term, Variable};
use std::time::Instant;

fn sample_instances() -> Vec<Formula> {
    vec![
        atom_a(),
        p(Term::var(var(0))),
        Formula::forall(var(1), p(Term::var(var(1)))),
        Formula::and(p(Term::var(var(0))), atom_a()),
        Formula::implies(Formula::exists(var(2), p(Term::var(var(2)))), atom_a()),
    ]
}

#[test]
fn criterion_1_corpus_reproduction() {
    let start = Instant::now();
    let samples = sample_instances();

    // DNE entails DP, checked in Minimal mode on every sample
    let reduction = dne_implies_dp();
    let vectors: Vec<Vec<Formula>> = samples.iter().cloned().map(|s| vec![s]).collect();
    check_reduction(&reduction, &vectors, LogicMode::Minimal).unwrap();

    for s in &samples {
        // classical bottom rule from DNE and back
        let from_botc = dne_from_botc(s);
        let j = check_proof(&from_botc, LogicMode::Classical, &Library::new()).unwrap();
        assert_eq!(*j.context(), Context::Empty);
        assert_eq!(*j.conclusion(), dne(s.clone()));
        assert!(matches!(
            check_proof(&from_botc, LogicMode::Minimal, &Library::new()),
            Err(CheckError::ModeViolation { .. })
        ));

        let mut lib = Library::new();
        lib.assume("DNE", dne(s.clone()));
        let simulated = botc_from_dne(
            s,
            Proof::assume(Formula::bottom()),
            LogicMode::Minimal,
            &lib,
        )
        .unwrap();
        let j = check_proof(&simulated, LogicMode::Minimal, &lib).unwrap();
        assert_eq!(
            *j.context(),
            Context::singleton(Formula::bottom()).remove(s.clone().negate())
        );
        assert_eq!(*j.conclusion(), *s);

        // intuitionistic bottom rule from EFQ and back
        let from_boti = efq_from_boti(s);
        let j = check_proof(&from_boti, LogicMode::Intuitionistic, &Library::new()).unwrap();
        assert_eq!(*j.conclusion(), efq(s.clone()));
        assert!(check_proof(&from_boti, LogicMode::Minimal, &Library::new()).is_err());

        let mut lib = Library::new();
        lib.assume("EFQ", efq(s.clone()));
        let simulated = boti_from_efq(
            s,
            Proof::assume(Formula::bottom()),
            LogicMode::Minimal,
            &lib,
        )
        .unwrap();
        let j = check_proof(&simulated, LogicMode::Minimal, &lib).unwrap();
        assert_eq!(*j.context(), Context::singleton(Formula::bottom()));
        assert_eq!(*j.conclusion(), *s);

        // excluded middle without loss of generality
        let mut lib = Library::new();
        let proof = wlog_lem(s, |reduced, not_free| {
            assert!(validate_not_free(not_free, var(0), reduced));
            let instance = lem(reduced.clone());
            lib.assume("LEM", instance.clone());
            Ok(Proof::cite("LEM", instance))
        })
        .unwrap();
        let j = check_proof(&proof, LogicMode::Minimal, &lib).unwrap();
        assert_eq!(*j.context(), Context::Empty);
        assert_eq!(*j.conclusion(), lem(s.clone()));
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    println!("acceptance criterion 1: PASS: bottom-rule equivalences, DNE>DP, wlog-LEM on 5 samples ({elapsed:?})");
}

#[test]
fn criterion_2_substitution_metatheory() {
    let start = Instant::now();
    let formulas = enumerate_formulas(3, &[var(0), var(1)]);
    assert!(formulas.len() > 10_000, "enumeration too small");
    let vars = [var(0), var(1)];
    let mut cases = 0usize;

    for a in &formulas {
        for x in vars {
            for t in [Term::var(var(0)), Term::var(var(1))] {
                cases += 1;
                let derivations = enumerate_evidence(a, x, &t);
                let possible = free_for(&t, x, a);

                // the free-for decider answers yes exactly when some
                // derivation of the substitution exists
                assert_eq!(derivations.is_empty(), possible.is_no());

                let Decision::Yes(witness) = possible else {
                    continue;
                };
                let applied = apply_substitution(a, x, &t, &witness).unwrap();

                // functionality: every derivation names the same result
                for (result, node) in &derivations {
                    let e = evidence_for(a, x, &t, result.clone(), node.clone());
                    verify_evidence(&e).unwrap();
                    assert!(formula_eq(result, &applied.result).is_yes());
                }

                // a variable substituted by a term not involving it is
                // not free afterwards
                if t != Term::var(x) {
                    let xnit = natded_core::binding::NotInTermWitness::Var {
                        other: if t == Term::var(var(0)) {
                            var(0)
                        } else {
                            var(1)
                        },
                    };
                    let nf = not_free_after_substitution(&xnit, &applied.evidence).unwrap();
                    assert!(validate_not_free(&nf, x, &applied.result));
                    assert!(not_free_in(x, &applied.result).is_yes());
                }
            }
        }

        // fresh-variable round trip
        for x in vars {
            let (omega, freshness) = fresh(a);
            let omega_not_free = not_free_from_fresh(&freshness);
            let w = free_for(&Term::var(omega), x, a).yes().unwrap();
            let out = apply_substitution(a, x, &Term::var(omega), &w).unwrap();
            let inverted = invert_substitution(&omega_not_free, &out.evidence).unwrap();
            verify_evidence(&inverted).unwrap();
            assert!(formula_eq(&inverted.claim.result, a).is_yes());
            // second route: actually substitute back
            let back_w = free_for(&Term::var(x), omega, &out.result).yes().unwrap();
            let back = apply_substitution(&out.result, omega, &Term::var(x), &back_w).unwrap();
            assert!(formula_eq(&back.result, a).is_yes());
        }
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 20.0, "took {elapsed:?}");
    println!(
        "acceptance criterion 2: PASS: substitution metatheory on {} formulas, {} evidence cases ({elapsed:?})",
        formulas.len(),
        cases
    );
}

#[test]
fn criterion_3_freshness_bound() {
    let formulas = enumerate_formulas(3, &[var(0), var(1)]);
    for a in &formulas {
        let bound = max_var(a).bound.index();
        let occurrences = scan(a);
        for k in 1..=5 {
            let candidate = Variable(bound + k);
            assert!(fresh_in(candidate, a).is_yes(), "decider fails on {a}");
            assert!(
                !occurrences.all.contains(&candidate.index()),
                "oracle finds {candidate} in {a}"
            );
        }
    }
    // exact successor-of-bound example
    let disj = Formula::or(p(Term::var(var(0))), p(Term::var(var(2))));
    assert_eq!(fresh(&disj).0, Variable(3));
    println!(
        "acceptance criterion 3: PASS: freshness bound on {} formulas, offsets 1..5",
        formulas.len()
    );
}

#[test]
fn criterion_4_context_suite() {
    let yv = var(1);
    let xv = var(0);
    let alphabet = vec![
        Formula::forall(yv, q(Term::var(yv))),
        Formula::bottom(),
        p(Term::var(yv)),
    ];
    let contexts = enumerate_contexts(5, &alphabet);
    let denotations: Vec<std::collections::HashSet<Formula>> =
        contexts.iter().map(|c| c.denotation()).collect();

    // membership agrees with the naive denotation, and removal shadows
    // whatever came before it
    for (ctx, denotation) in contexts.iter().zip(&denotations) {
        for f in &alphabet {
            assert_eq!(member_of(f, ctx).is_yes(), denotation.contains(f));
            assert!(member_of(f, &ctx.clone().remove(f.clone())).is_no());
        }
    }

    // subset agrees with the naive denotation on all pairs
    let mut pairs = 0usize;
    for (g, dg) in contexts.iter().zip(&denotations) {
        for (d, dd) in contexts.iter().zip(&denotations) {
            pairs += 1;
            assert_eq!(subset_of(g, d).is_yes(), dg.is_subset(dd));
        }
    }

    // the removed-list algorithm against the functional reading
    let mut all_cases = 0usize;
    for (ctx, denotation) in contexts.iter().zip(&denotations) {
        for v in [xv, yv] {
            all_cases += 1;
            let pred = |f: &Formula| not_free_in(v, f).is_yes();
            let oracle_holds = denotation.iter().all(pred);
            match all_satisfy(pred, ctx) {
                Decision::Yes(w) => {
                    all_implies_members(&w, pred, ctx).unwrap();
                }
                Decision::No(failing) => {
                    assert!(!pred(&failing));
                    assert!(
                        !oracle_holds,
                        "algorithm refused {ctx:?} but oracle accepts"
                    );
                }
            }
            if oracle_holds {
                assert!(all_satisfy(pred, ctx).is_yes());
            }
        }
    }
    assert!(all_cases >= 500);

    // the worked example: y not free in all of { forall y (Q y) } u { bot }
    let worked = Context::union(
        Context::singleton(Formula::forall(yv, q(Term::var(yv)))),
        Context::singleton(Formula::bottom()),
    );
    let w = all_satisfy(|f| not_free_in(yv, f).is_yes(), &worked)
        .yes()
        .unwrap();
    all_implies_members(&w, |f| not_free_in(yv, f).is_yes(), &worked).unwrap();

    println!(
        "acceptance criterion 4: PASS: {} contexts, {} subset pairs, {} removed-list cases",
        contexts.len(),
        pairs,
        all_cases
    );
}

// ---- criterion 5: rename soundness -----------------------------------

fn proof_of(rng: &mut Rng, a: &Formula) -> Proof {
    match rng.below(3) {
        0 => Proof::assume(a.clone()),
        1 => Proof::arrow_elim(
            Proof::assume(Formula::implies(atom_c(), a.clone())),
            Proof::assume(atom_c()),
        ),
        _ => Proof::close(
            Context::union(Context::singleton(a.clone()), Context::singleton(atom_a())),
            Proof::assume(a.clone()),
        ),
    }
}

#[test]
fn criterion_5_rename_soundness() {
    let start = Instant::now();
    let mut rng = Rng::new(0x5eed);
    let mut coverage = Coverage::default();
    let lib = Library::new();

    for _ in 0..200 {
        let mut case = quantifier_case(&mut rng, &mut coverage);
        for _ in 0..rng.below(3) {
            case = wrap_case(&mut rng, case);
        }
        verify_equiv(&case.w, &case.a, &case.b).unwrap();

        let proof = proof_of(&mut rng, &case.a);
        let expected_context = check_proof(&proof, LogicMode::Minimal, &lib)
            .unwrap()
            .context()
            .clone();

        let renamed = rename(&case.w, &proof, LogicMode::Minimal, &lib).unwrap();
        let j = check_proof(&renamed, LogicMode::Minimal, &lib).unwrap();
        assert_eq!(*j.conclusion(), case.b);
        assert_eq!(*j.context(), expected_context);

        // symmetry re-validates and the round trip restores the original
        let flipped = equiv_sym(&case.w).unwrap();
        verify_equiv(&flipped, &case.b, &case.a).unwrap();
        let back = rename(&flipped, &renamed, LogicMode::Minimal, &lib).unwrap();
        let j2 = check_proof(&back, LogicMode::Minimal, &lib).unwrap();
        assert_eq!(*j2.conclusion(), case.a);
        assert_eq!(*j2.context(), expected_context);
    }

    assert!(coverage.rename_forall > 0, "{coverage:?}");
    assert!(coverage.rename_exists > 0, "{coverage:?}");
    assert!(coverage.dual_forall > 0, "{coverage:?}");
    assert!(coverage.dual_exists > 0, "{coverage:?}");
    assert!(coverage.degenerate_rename > 0, "{coverage:?}");
    assert!(coverage.degenerate_dual > 0, "{coverage:?}");

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!(
        "acceptance criterion 5: PASS: 200 rename round trips, coverage {coverage:?} ({elapsed:?})"
    );
}

#[test]
fn criterion_6_kernel_rejections() {
    let lib = Library::new();
    let xv = var(0);

    // generalising over a variable free in an open assumption
    let bad = Proof::univ_intro(xv, Proof::assume(q(Term::var(xv))));
    let err = check_proof(&bad, LogicMode::Minimal, &lib).unwrap_err();
    assert_eq!(
        err,
        CheckError::FreedomViolation {
            variable: xv,
            assumption: q(Term::var(xv)),
        }
    );

    // the same deduction is fine when the variable occurs only bound:
    // from forall x (forall x A -> Q x) and forall x A, conclude
    // forall x (Q x) by instantiating, applying, and re-generalising
    let all_a = Formula::forall(xv, atom_a());
    let hypothesis = Formula::forall(xv, Formula::implies(all_a.clone(), q(Term::var(xv))));
    let inner = Formula::implies(all_a.clone(), q(Term::var(xv)));
    let good = Proof::univ_intro(
        xv,
        Proof::arrow_elim(
            Proof::univ_elim(
                Term::var(xv),
                SubstitutionEvidence::identity(&inner, xv),
                Proof::assume(hypothesis.clone()),
            ),
            Proof::assume(all_a.clone()),
        ),
    );
    let j = check_proof(&good, LogicMode::Minimal, &lib).unwrap();
    assert_eq!(*j.conclusion(), Formula::forall(xv, q(Term::var(xv))));

    // closing into a non-superset reports the counterexample
    let stray = Proof::close(
        Context::singleton(atom_a()),
        Proof::assume(q(Term::var(xv))),
    );
    assert_eq!(
        check_proof(&stray, LogicMode::Minimal, &lib).unwrap_err(),
        CheckError::NotSubset {
            counterexample: q(Term::var(xv)),
        }
    );

    // (forall y (P x))[x/y] is impossible: the free-for decider refuses,
    // so no witness exists to hand to the substitution
    let yv = var(1);
    let captured = Formula::forall(yv, p(Term::var(xv)));
    let capture = free_for(&Term::var(yv), xv, &captured).no().unwrap();
    assert_eq!(capture.binder, yv);
    assert!(enumerate_evidence(&captured, xv, &Term::var(yv)).is_empty());

    println!("acceptance criterion 6: PASS: freedom, subset, and capture rejections");
}

fn balanced(s: &str) -> bool {
    let mut depth = 0i64;
    for c in s.chars() {
        match c {
            '{' => depth += 1,
            '}' => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return false;
        }
    }
    depth == 0 && s.matches("\\begin{").count() == s.matches("\\end{").count()
}

#[test]
fn criterion_7_latex_golden_files() {
    use natded_core::texify::{render_proof, render_reduction};
    let lib = Library::new();
    let a = atom_a();
    let b = atom_b();
    let c = atom_c();

    let identity = Proof::close(
        Context::Empty,
        Proof::arrow_intro(a.clone(), Proof::assume(a.clone())),
    );
    let identity_tex = render_proof(&identity, LogicMode::Minimal, &lib).unwrap();
    assert_eq!(identity_tex, include_str!("golden/identity.tex"));
    assert!(balanced(&identity_tex));

    let abc = Formula::implies(a.clone(), Formula::implies(b.clone(), c.clone()));
    let reorder = Proof::close(
        Context::singleton(abc.clone()),
        Proof::arrow_intro(
            b.clone(),
            Proof::arrow_intro(
                a.clone(),
                Proof::arrow_elim(
                    Proof::arrow_elim(Proof::assume(abc.clone()), Proof::assume(a.clone())),
                    Proof::assume(b.clone()),
                ),
            ),
        ),
    );
    let reorder_tex = render_proof(&reorder, LogicMode::Minimal, &lib).unwrap();
    assert_eq!(reorder_tex, include_str!("golden/reorder.tex"));
    assert!(balanced(&reorder_tex));

    let dp_tex = render_reduction(
        &dne_implies_dp(),
        &[p(Term::var(var(0)))],
        LogicMode::Minimal,
    )
    .unwrap();
    assert_eq!(dp_tex, include_str!("golden/dne_dp.tex"));
    assert!(balanced(&dp_tex));

    println!("acceptance criterion 7: PASS: three golden files match byte for byte");
}
