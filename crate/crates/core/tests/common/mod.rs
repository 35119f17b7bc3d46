//! Shared oracles and enumerators for the integration suites. Everything
//! here is deliberately independent of the library's witness machinery:
//! plain recursive scans and naive set evaluation.

#![allow(dead_code)]

use natded_core::binding::not_free_in;
use natded_core::context::Context;
use natded_core::equivalence::EquivWitness;
use natded_core::substitution::{
    SubEvidenceNode, SubstitutionClaim, SubstitutionEvidence, TermSubEvidence,
};
use natded_core::syntax::{Formula, RelationSymbol, Term, Variable};
use std::collections::HashSet;

pub fn var(n: usize) -> Variable {
    Variable(n)
}

pub fn p_rel() -> RelationSymbol {
    RelationSymbol::new(5, 1)
}

pub fn q_rel() -> RelationSymbol {
    RelationSymbol::new(6, 1)
}

pub fn p(t: Term) -> Formula {
    Formula::atom(p_rel(), vec![t]).unwrap()
}

pub fn q(t: Term) -> Formula {
    Formula::atom(q_rel(), vec![t]).unwrap()
}

pub fn atom_a() -> Formula {
    Formula::atom(RelationSymbol::new(1, 0), vec![]).unwrap()
}

pub fn atom_b() -> Formula {
    Formula::atom(RelationSymbol::new(2, 0), vec![]).unwrap()
}

pub fn atom_c() -> Formula {
    Formula::atom(RelationSymbol::new(3, 0), vec![]).unwrap()
}

/// Every formula of the given depth bound over the alphabet
/// `{P/1, A/0, bot}` and the given variables. Atoms have depth 1.
pub fn enumerate_formulas(max_depth: usize, vars: &[Variable]) -> Vec<Formula> {
    let mut layers: Vec<Vec<Formula>> = Vec::new();
    let mut atoms: Vec<Formula> = vars.iter().map(|v| p(Term::var(*v))).collect();
    atoms.push(atom_a());
    atoms.push(Formula::bottom());
    layers.push(atoms);
    for depth in 1..max_depth {
        let below: Vec<Formula> = layers.iter().flatten().cloned().collect();
        let mut next = Vec::new();
        for a in &below {
            for b in &below {
                next.push(Formula::implies(a.clone(), b.clone()));
                next.push(Formula::and(a.clone(), b.clone()));
                next.push(Formula::or(a.clone(), b.clone()));
            }
        }
        for a in &below {
            for v in vars {
                next.push(Formula::forall(*v, a.clone()));
                next.push(Formula::exists(*v, a.clone()));
            }
        }
        let _ = depth;
        layers.push(next);
    }
    layers.into_iter().flatten().collect()
}

/// Independent occurrence scanner: collects free occurrences and all
/// occurrences (free, bound, and binders) by plain recursion.
#[derive(Default, Debug)]
pub struct Occurrences {
    pub free: HashSet<usize>,
    pub all: HashSet<usize>,
}

pub fn scan(formula: &Formula) -> Occurrences {
    let mut occ = Occurrences::default();
    scan_at(formula, &mut Vec::new(), &mut occ);
    occ
}

fn scan_term(t: &Term, bound: &[usize], occ: &mut Occurrences) {
    match t {
        Term::Var(v) => {
            occ.all.insert(v.index());
            if !bound.contains(&v.index()) {
                occ.free.insert(v.index());
            }
        }
        Term::Func(app) => {
            for arg in app.args() {
                scan_term(arg, bound, occ);
            }
        }
    }
}

fn scan_at(f: &Formula, bound: &mut Vec<usize>, occ: &mut Occurrences) {
    match f {
        Formula::Atom(atom) => {
            for t in atom.args() {
                scan_term(t, bound, occ);
            }
        }
        Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
            scan_at(a, bound, occ);
            scan_at(b, bound, occ);
        }
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            occ.all.insert(v.index());
            bound.push(v.index());
            scan_at(body, bound, occ);
            bound.pop();
        }
    }
}

/// All context trees with at most `max_nodes` nodes over the alphabet.
pub fn enumerate_contexts(max_nodes: usize, alphabet: &[Formula]) -> Vec<Context> {
    let mut by_size: Vec<Vec<Context>> = vec![Vec::new(); max_nodes + 1];
    if max_nodes >= 1 {
        by_size[1].push(Context::Empty);
        for f in alphabet {
            by_size[1].push(Context::Singleton(f.clone()));
        }
    }
    for size in 2..=max_nodes {
        let mut out = Vec::new();
        for inner in &by_size[size - 1] {
            for f in alphabet {
                out.push(inner.clone().remove(f.clone()));
            }
        }
        for left_size in 1..size - 1 {
            let right_size = size - 1 - left_size;
            for l in &by_size[left_size] {
                for r in &by_size[right_size] {
                    out.push(Context::union(l.clone(), r.clone()));
                }
            }
        }
        by_size[size] = out;
    }
    by_size.into_iter().flatten().collect()
}

/// Naive substitution on terms, used as the oracle for the evidence
/// machinery.
pub fn naive_subst_term(u: &Term, x: Variable, t: &Term) -> Term {
    match u {
        Term::Var(v) if *v == x => t.clone(),
        Term::Var(_) => u.clone(),
        Term::Func(app) => Term::func(
            app.symbol(),
            app.args()
                .iter()
                .map(|arg| naive_subst_term(arg, x, t))
                .collect(),
        )
        .unwrap(),
    }
}

fn term_evidence(u: &Term, x: Variable) -> TermSubEvidence {
    match u {
        Term::Var(v) if *v == x => TermSubEvidence::VarHit,
        Term::Var(v) => TermSubEvidence::VarMiss(*v),
        Term::Func(app) => {
            TermSubEvidence::Func(app.args().iter().map(|arg| term_evidence(arg, x)).collect())
        }
    }
}

/// Enumerates every derivation of `a [ x / t ] == ?` the evidence grammar
/// admits, paired with the result formula each one claims. Empty exactly
/// when the substitution is impossible.
pub fn enumerate_evidence(a: &Formula, x: Variable, t: &Term) -> Vec<(Formula, SubEvidenceNode)> {
    let mut out = Vec::new();
    if *t == Term::Var(x) {
        out.push((a.clone(), SubEvidenceNode::Ident));
    }
    if let natded_core::syntax::Decision::Yes(w) = not_free_in(x, a) {
        out.push((a.clone(), SubEvidenceNode::NotFree(w)));
    }
    match a {
        Formula::Atom(atom) => {
            let results: Vec<Term> = atom
                .args()
                .iter()
                .map(|u| naive_subst_term(u, x, t))
                .collect();
            let evs: Vec<TermSubEvidence> =
                atom.args().iter().map(|u| term_evidence(u, x)).collect();
            out.push((
                Formula::atom(atom.relation(), results).unwrap(),
                SubEvidenceNode::Atom(evs),
            ));
        }
        Formula::Implies(a1, a2) | Formula::And(a1, a2) | Formula::Or(a1, a2) => {
            let lefts = enumerate_evidence(a1, x, t);
            let rights = enumerate_evidence(a2, x, t);
            for (lf, le) in &lefts {
                for (rf, re) in &rights {
                    let (combined, node) = match a {
                        Formula::Implies(..) => (
                            Formula::implies(lf.clone(), rf.clone()),
                            SubEvidenceNode::Implies(Box::new(le.clone()), Box::new(re.clone())),
                        ),
                        Formula::And(..) => (
                            Formula::and(lf.clone(), rf.clone()),
                            SubEvidenceNode::And(Box::new(le.clone()), Box::new(re.clone())),
                        ),
                        _ => (
                            Formula::or(lf.clone(), rf.clone()),
                            SubEvidenceNode::Or(Box::new(le.clone()), Box::new(re.clone())),
                        ),
                    };
                    out.push((combined, node));
                }
            }
        }
        Formula::Forall(y, body) | Formula::Exists(y, body) => {
            let universal = matches!(a, Formula::Forall(..));
            if *y == x {
                out.push((
                    a.clone(),
                    if universal {
                        SubEvidenceNode::ForallSelf
                    } else {
                        SubEvidenceNode::ExistsSelf
                    },
                ));
            } else if let natded_core::syntax::Decision::Yes(niw) =
                natded_core::binding::not_in_term(*y, t)
            {
                for (bf, be) in enumerate_evidence(body, x, t) {
                    let node = if universal {
                        SubEvidenceNode::Forall {
                            binder_not_in_term: niw.clone(),
                            body: Box::new(be),
                        }
                    } else {
                        SubEvidenceNode::Exists {
                            binder_not_in_term: niw.clone(),
                            body: Box::new(be),
                        }
                    };
                    let wrapped = if universal {
                        Formula::forall(*y, bf)
                    } else {
                        Formula::exists(*y, bf)
                    };
                    out.push((wrapped, node));
                }
            }
        }
    }
    out
}

pub fn evidence_for(
    a: &Formula,
    x: Variable,
    t: &Term,
    result: Formula,
    node: SubEvidenceNode,
) -> SubstitutionEvidence {
    SubstitutionEvidence {
        claim: SubstitutionClaim {
            source: a.clone(),
            var: x,
            term: t.clone(),
            result,
        },
        node,
    }
}

/// A generated equivalence with the pair of formulas it relates.
pub struct WitnessCase {
    pub a: Formula,
    pub b: Formula,
    pub w: EquivWitness,
}

#[derive(Default, Debug)]
pub struct Coverage {
    pub rename_forall: usize,
    pub rename_exists: usize,
    pub dual_forall: usize,
    pub dual_exists: usize,
    pub degenerate_rename: usize,
    pub degenerate_dual: usize,
}

fn open_body(rng: &mut Rng) -> Formula {
    let x = Term::var(var(0));
    match rng.below(4) {
        0 => p(x),
        1 => Formula::and(q(x.clone()), atom_a()),
        2 => Formula::implies(q(x.clone()), p(x)),
        _ => Formula::forall(var(2), Formula::and(q(Term::var(var(2))), p(x))),
    }
}

fn closed_body(rng: &mut Rng) -> Formula {
    match rng.below(3) {
        0 => atom_a(),
        1 => Formula::bottom(),
        _ => Formula::forall(var(0), p(Term::var(var(0)))),
    }
}

fn quantify(universal: bool, v: Variable, body: Formula) -> Formula {
    if universal {
        Formula::forall(v, body)
    } else {
        Formula::exists(v, body)
    }
}

/// One random quantifier-renaming equivalence, drawn from all four
/// renaming constructors and both degenerate rename-by-itself branches.
pub fn quantifier_case(rng: &mut Rng, coverage: &mut Coverage) -> WitnessCase {
    use natded_core::equivalence::equiv_refl;
    use natded_core::substitution::{apply_substitution, free_for};

    let universal = rng.chance(50);
    let dual = rng.chance(50);
    let degenerate = rng.chance(25);
    let x = var(0);
    if degenerate {
        let body = closed_body(rng);
        let not_free = not_free_in(x, &body).yes().unwrap();
        let evidence = SubstitutionEvidence::identity(&body, x);
        let w = if dual {
            coverage.degenerate_dual += 1;
            if universal {
                coverage.dual_forall += 1;
                EquivWitness::ForallRenameDual {
                    head: Box::new(equiv_refl(&body)),
                    not_free,
                    evidence,
                }
            } else {
                coverage.dual_exists += 1;
                EquivWitness::ExistsRenameDual {
                    head: Box::new(equiv_refl(&body)),
                    not_free,
                    evidence,
                }
            }
        } else {
            coverage.degenerate_rename += 1;
            if universal {
                coverage.rename_forall += 1;
                EquivWitness::ForallRename {
                    not_free,
                    evidence,
                    tail: Box::new(equiv_refl(&body)),
                }
            } else {
                coverage.rename_exists += 1;
                EquivWitness::ExistsRename {
                    not_free,
                    evidence,
                    tail: Box::new(equiv_refl(&body)),
                }
            }
        };
        let a = quantify(universal, x, body);
        WitnessCase {
            a: a.clone(),
            b: a,
            w,
        }
    } else {
        let y = var(1);
        let body = open_body(rng);
        let capture_free = free_for(&Term::var(y), x, &body).yes().unwrap();
        let substituted = apply_substitution(&body, x, &Term::var(y), &capture_free).unwrap();
        let not_free = not_free_in(y, &body).yes().unwrap();
        let (w, b) = if dual {
            if universal {
                coverage.dual_forall += 1;
            } else {
                coverage.dual_exists += 1;
            }
            let w = if universal {
                EquivWitness::ForallRenameDual {
                    head: Box::new(equiv_refl(&body)),
                    not_free,
                    evidence: substituted.evidence.clone(),
                }
            } else {
                EquivWitness::ExistsRenameDual {
                    head: Box::new(equiv_refl(&body)),
                    not_free,
                    evidence: substituted.evidence.clone(),
                }
            };
            (w, quantify(universal, y, substituted.result.clone()))
        } else {
            if universal {
                coverage.rename_forall += 1;
            } else {
                coverage.rename_exists += 1;
            }
            let w = if universal {
                EquivWitness::ForallRename {
                    not_free,
                    evidence: substituted.evidence.clone(),
                    tail: Box::new(equiv_refl(&substituted.result)),
                }
            } else {
                EquivWitness::ExistsRename {
                    not_free,
                    evidence: substituted.evidence.clone(),
                    tail: Box::new(equiv_refl(&substituted.result)),
                }
            };
            (w, quantify(universal, y, substituted.result.clone()))
        };
        WitnessCase {
            a: quantify(universal, x, body),
            b,
            w,
        }
    }
}

/// Wraps a case under a connective or an unrelated quantifier, so rename
/// exercises both recursion directions.
pub fn wrap_case(rng: &mut Rng, inner: WitnessCase) -> WitnessCase {
    use natded_core::equivalence::equiv_refl;
    let c = atom_c();
    match rng.below(5) {
        0 => WitnessCase {
            a: Formula::implies(c.clone(), inner.a),
            b: Formula::implies(c.clone(), inner.b),
            w: EquivWitness::Implies(Box::new(equiv_refl(&c)), Box::new(inner.w)),
        },
        1 => WitnessCase {
            a: Formula::implies(inner.a, c.clone()),
            b: Formula::implies(inner.b, c.clone()),
            w: EquivWitness::Implies(Box::new(inner.w), Box::new(equiv_refl(&c))),
        },
        2 => WitnessCase {
            a: Formula::and(inner.a, c.clone()),
            b: Formula::and(inner.b, c.clone()),
            w: EquivWitness::And(Box::new(inner.w), Box::new(equiv_refl(&c))),
        },
        3 => WitnessCase {
            a: Formula::or(c.clone(), inner.a),
            b: Formula::or(c.clone(), inner.b),
            w: EquivWitness::Or(Box::new(equiv_refl(&c)), Box::new(inner.w)),
        },
        _ => {
            let z = var(3);
            WitnessCase {
                a: Formula::forall(z, inner.a),
                b: Formula::forall(z, inner.b),
                w: EquivWitness::Forall(Box::new(inner.w)),
            }
        }
    }
}

/// Small deterministic generator so the sampled suites are reproducible.
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Rng {
        Rng(seed.max(1))
    }

    pub fn next(&mut self) -> u64 {
        let mut s = self.0;
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        self.0 = s;
        s
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next() % n as u64) as usize
    }

    pub fn chance(&mut self, percent: u64) -> bool {
        self.next() % 100 < percent
    }
}
