//! Property suites for the per-module invariants: deciders against
//! independent oracles, kernel re-validation hooks, and structural
//! properties under randomly generated inputs.

mod common;

use common::*;
use natded_core::binding::{
    fresh, fresh_in, max_var, not_free_from_fresh, not_free_in, validate_fresh, validate_not_free,
};
use natded_core::context::{subset_of, Context};
use natded_core::equivalence::transport_not_free;
use natded_core::kernel::{check_proof, Library, LogicMode, Proof};
use natded_core::schemes::{dne_implies_dp, lem, wlog_lem};
use natded_core::substitution::{free_for, verify_evidence};
use natded_core::syntax::{
    formula_eq, term_eq, Decision, Formula, FunctionSymbol, RelationSymbol, Term, Variable,
};
use proptest::prelude::*;

// ---- equality deciders against the derived-equality oracle -----------

/// All terms of bounded depth over two variables and two function symbols.
fn enumerate_terms(max_depth: usize) -> Vec<Term> {
    let f = FunctionSymbol::new(0, 1);
    let g = FunctionSymbol::new(1, 2);
    let mut layers: Vec<Vec<Term>> = vec![vec![Term::var(var(0)), Term::var(var(1))]];
    for _ in 1..max_depth {
        let below: Vec<Term> = layers.iter().flatten().cloned().collect();
        let mut next = Vec::new();
        for t in &below {
            next.push(Term::func(f, vec![t.clone()]).unwrap());
        }
        for t in &below {
            for u in &below {
                next.push(Term::func(g, vec![t.clone(), u.clone()]).unwrap());
            }
        }
        layers.push(next);
    }
    layers.into_iter().flatten().collect()
}

#[test]
fn term_equality_agrees_with_structural_oracle() {
    let terms = enumerate_terms(3);
    for s in &terms {
        assert!(term_eq(s, s).is_yes());
        for t in &terms {
            assert_eq!(term_eq(s, t).is_yes(), s == t);
            assert_eq!(term_eq(s, t).is_yes(), term_eq(t, s).is_yes());
        }
    }
}

#[test]
fn formula_equality_agrees_on_enumerated_formulas() {
    let formulas = enumerate_formulas(3, &[var(0), var(1)]);
    // reflexivity across the whole enumeration
    for f in &formulas {
        assert!(formula_eq(f, f).is_yes());
    }
    // pairwise agreement on a stratified slice
    let stride: Vec<&Formula> = formulas.iter().step_by(37).collect();
    for a in &stride {
        for b in &stride {
            assert_eq!(formula_eq(a, b).is_yes(), a == b);
            assert_eq!(formula_eq(a, b).is_yes(), formula_eq(b, a).is_yes());
        }
    }
}

fn arb_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        (0..3usize).prop_map(|i| Term::var(Variable(i))),
        Just(Term::constant(0)),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner
                .clone()
                .prop_map(|t| Term::func(FunctionSymbol::new(0, 1), vec![t]).unwrap()),
            (inner.clone(), inner).prop_map(|(a, b)| Term::func(
                FunctionSymbol::new(1, 2),
                vec![a, b]
            )
            .unwrap()),
        ]
    })
}

fn arb_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        arb_term().prop_map(|t| Formula::atom(RelationSymbol::new(5, 1), vec![t]).unwrap()),
        Just(atom_a()),
        Just(Formula::bottom()),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (0..3usize, inner.clone()).prop_map(|(v, f)| Formula::forall(Variable(v), f)),
            (0..3usize, inner).prop_map(|(v, f)| Formula::exists(Variable(v), f)),
        ]
    })
}

proptest! {
    #[test]
    fn formula_equality_agrees_with_structural_oracle(a in arb_formula(), b in arb_formula()) {
        prop_assert!(formula_eq(&a, &a).is_yes());
        prop_assert_eq!(formula_eq(&a, &b).is_yes(), a == b);
        prop_assert_eq!(formula_eq(&a, &b).is_yes(), formula_eq(&b, &a).is_yes());
    }

    #[test]
    fn freedom_deciders_agree_with_scanner(a in arb_formula()) {
        let occurrences = scan(&a);
        for v in 0..4usize {
            let q = Variable(v);
            prop_assert_eq!(not_free_in(q, &a).is_yes(), !occurrences.free.contains(&v));
            prop_assert_eq!(fresh_in(q, &a).is_yes(), !occurrences.all.contains(&v));
        }
    }

    #[test]
    fn fresh_variable_is_fresh_by_both_routes(a in arb_formula()) {
        let (omega, witness) = fresh(&a);
        prop_assert!(validate_fresh(&witness, omega, &a));
        let occurrences = scan(&a);
        prop_assert!(!occurrences.all.contains(&omega.index()));
        prop_assert!(!occurrences.free.contains(&omega.index()));
        // the bound really bounds: five successors are fresh too
        let bound = max_var(&a).bound.index();
        for k in 1..=5 {
            prop_assert!(fresh_in(Variable(bound + k), &a).is_yes());
        }
    }

    #[test]
    fn any_term_is_free_for_anything_via_a_fresh_variable(a in arb_formula()) {
        // the fresh variable is substitutable for every variable
        let (omega, _) = fresh(&a);
        for v in 0..4usize {
            prop_assert!(free_for(&Term::var(omega), Variable(v), &a).is_yes());
        }
    }
}

// ---- binding deciders, exhaustively over a three-variable alphabet ---

#[test]
fn deciders_sound_and_complete_on_small_formulas() {
    let formulas = enumerate_formulas(3, &[var(0), var(1), var(2)]);
    for a in &formulas {
        let occurrences = scan(a);
        for v in [var(0), var(1), var(2), var(3)] {
            match not_free_in(v, a) {
                Decision::Yes(w) => {
                    assert!(validate_not_free(&w, v, a));
                    assert!(!occurrences.free.contains(&v.index()));
                }
                Decision::No(_) => assert!(occurrences.free.contains(&v.index())),
            }
            match fresh_in(v, a) {
                Decision::Yes(w) => {
                    assert!(validate_fresh(&w, v, a));
                    assert!(!occurrences.all.contains(&v.index()));
                    let nf = not_free_from_fresh(&w);
                    assert!(validate_not_free(&nf, v, a));
                    assert!(not_free_in(v, a).is_yes());
                }
                Decision::No(_) => assert!(occurrences.all.contains(&v.index())),
            }
        }
    }
}

// ---- kernel invariants ------------------------------------------------

#[test]
fn weakening_determinism_and_mode_monotonicity() {
    let lib = Library::new();
    let mut rng = common::Rng::new(0xacce);
    let mut coverage = Coverage::default();
    for _ in 0..100 {
        let case = quantifier_case(&mut rng, &mut coverage);
        let proof = Proof::assume(case.a.clone());
        let j = check_proof(&proof, LogicMode::Minimal, &lib).unwrap();

        // weakening via close into any superset
        let superset = Context::union(j.context().clone(), Context::singleton(atom_b()));
        let weakened = Proof::close(superset.clone(), proof.clone());
        let jw = check_proof(&weakened, LogicMode::Minimal, &lib).unwrap();
        assert_eq!(*jw.context(), superset);
        assert_eq!(jw.conclusion(), j.conclusion());

        // determinism
        let again = check_proof(&proof, LogicMode::Minimal, &lib).unwrap();
        assert_eq!(again, j);

        // a proof accepted in minimal mode is accepted in both extensions
        for mode in [LogicMode::Intuitionistic, LogicMode::Classical] {
            let jm = check_proof(&proof, mode, &lib).unwrap();
            assert_eq!(jm, j);
        }
    }
}

// Re-validates an accepted proof's side conditions with independent
// oracles: denotation members at generalisations, denotation subsets at
// closes, and full evidence re-verification at the quantifier nodes.
fn audit(proof: &Proof, mode: LogicMode, lib: &Library) {
    match proof {
        Proof::Assume(_) | Proof::Cite { .. } => {}
        Proof::Close { target, body } => {
            let j = check_proof(body, mode, lib).unwrap();
            let inner = j.context().denotation();
            let outer = target.denotation();
            assert!(inner.is_subset(&outer));
            assert!(subset_of(j.context(), target).is_yes());
            audit(body, mode, lib);
        }
        Proof::UnivIntro { variable, body } => {
            let j = check_proof(body, mode, lib).unwrap();
            for member in j.context().denotation() {
                assert!(!scan(&member).free.contains(&variable.index()));
            }
            audit(body, mode, lib);
        }
        Proof::ExistElim {
            variable,
            exists,
            body,
        } => {
            let je = check_proof(exists, mode, lib).unwrap();
            let jb = check_proof(body, mode, lib).unwrap();
            let Formula::Exists(_, inner) = je.conclusion() else {
                panic!("checked exist-elim premiss must be existential");
            };
            assert!(!scan(jb.conclusion()).free.contains(&variable.index()));
            let mut remaining = jb.context().denotation();
            remaining.remove(&**inner);
            for member in remaining {
                assert!(!scan(&member).free.contains(&variable.index()));
            }
            audit(exists, mode, lib);
            audit(body, mode, lib);
        }
        Proof::UnivElim { evidence, body, .. } | Proof::ExistIntro { evidence, body, .. } => {
            verify_evidence(evidence).unwrap();
            audit(body, mode, lib);
        }
        Proof::ArrowIntro { body, .. }
        | Proof::DisjIntro1 { body, .. }
        | Proof::DisjIntro2 { body, .. }
        | Proof::BotC { body, .. }
        | Proof::BotI { body, .. } => audit(body, mode, lib),
        Proof::ArrowElim {
            function: a,
            argument: b,
        }
        | Proof::ConjIntro { left: a, right: b }
        | Proof::ConjElim { pair: a, body: b } => {
            audit(a, mode, lib);
            audit(b, mode, lib);
        }
        Proof::DisjElim {
            disj,
            left_case,
            right_case,
        } => {
            audit(disj, mode, lib);
            audit(left_case, mode, lib);
            audit(right_case, mode, lib);
        }
    }
}

#[test]
fn accepted_corpus_proofs_survive_an_independent_audit() {
    // the drinker-paradox reduction instance
    let reduction = dne_implies_dp();
    let args = vec![p(Term::var(var(0)))];
    let (proof, lib) = reduction.instantiate_proof(&args).unwrap();
    check_proof(&proof, LogicMode::Minimal, &lib).unwrap();
    audit(&proof, LogicMode::Minimal, &lib);

    // excluded middle without loss of generality
    let mut lib = Library::new();
    let alpha = Formula::and(p(Term::var(var(0))), q(Term::var(var(1))));
    let proof = wlog_lem(&alpha, |reduced, _| {
        let instance = lem(reduced.clone());
        lib.assume("LEM", instance.clone());
        Ok(Proof::cite("LEM", instance))
    })
    .unwrap();
    check_proof(&proof, LogicMode::Minimal, &lib).unwrap();
    audit(&proof, LogicMode::Minimal, &lib);
}

// ---- freedom transport along equivalences ------------------------------

#[test]
fn transported_freedom_witnesses_revalidate() {
    let mut rng = common::Rng::new(0xf00d);
    let mut coverage = Coverage::default();
    let mut transported = 0usize;
    for _ in 0..300 {
        let mut case = quantifier_case(&mut rng, &mut coverage);
        if rng.chance(50) {
            case = wrap_case(&mut rng, case);
        }
        for v in [var(0), var(1), var(2), var(4)] {
            if let Decision::Yes(nf) = not_free_in(v, &case.a) {
                let out = transport_not_free(&case.w, &case.a, v, &nf).unwrap();
                assert!(validate_not_free(&out, v, &case.b));
                assert!(not_free_in(v, &case.b).is_yes());
                transported += 1;
            }
        }
    }
    assert!(transported > 300, "only {transported} transports exercised");
}

// ---- concurrency contracts ---------------------------------------------

#[test]
fn values_are_shareable_across_threads() {
    fn assert_send_sync<T: Send + Sync>() {}
    assert_send_sync::<Formula>();
    assert_send_sync::<Term>();
    assert_send_sync::<Context>();
    assert_send_sync::<Proof>();
    assert_send_sync::<Library>();
    assert_send_sync::<natded_core::kernel::Judgement>();
    assert_send_sync::<natded_core::substitution::SubstitutionEvidence>();
    assert_send_sync::<natded_core::equivalence::EquivWitness>();
    assert_send_sync::<natded_core::schemes::Scheme>();
    assert_send_sync::<natded_core::schemes::Reduction>();

    // independent checks really can run concurrently
    let reduction = dne_implies_dp();
    let handles: Vec<_> = (0..4)
        .map(|i| {
            let r = reduction.clone();
            std::thread::spawn(move || {
                let arg = if i % 2 == 0 {
                    p(Term::var(var(0)))
                } else {
                    atom_a()
                };
                r.check_instance(&[arg], LogicMode::Minimal).unwrap();
            })
        })
        .collect();
    for h in handles {
        h.join().unwrap();
    }
}
