// Regenerates the LaTeX golden outputs checked by the acceptance suite.
// Run with `cargo run -p natded-core --example golden_gen` and split the
// sections into crates/core/tests/golden/ after reviewing the diff.

use natded_core::context::Context;
use natded_core::kernel::{Library, LogicMode, Proof};
use natded_core::schemes::dne_implies_dp;
use natded_core::syntax::{Formula, RelationSymbol, Term, Variable};
use natded_core::texify::{render_proof, render_reduction};

fn main() {
    let a = Formula::atom(RelationSymbol::new(1, 0), vec![]).unwrap();
    let b = Formula::atom(RelationSymbol::new(2, 0), vec![]).unwrap();
    let c = Formula::atom(RelationSymbol::new(3, 0), vec![]).unwrap();
    let lib = Library::new();

    let id = Proof::close(
        Context::Empty,
        Proof::arrow_intro(a.clone(), Proof::assume(a.clone())),
    );
    println!("==== identity.tex ====");
    print!("{}", render_proof(&id, LogicMode::Minimal, &lib).unwrap());

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
    println!("==== reorder.tex ====");
    print!(
        "{}",
        render_proof(&reorder, LogicMode::Minimal, &lib).unwrap()
    );

    let px = Formula::atom(RelationSymbol::new(5, 1), vec![Term::var(Variable(0))]).unwrap();
    println!("==== dne_dp.tex ====");
    print!(
        "{}",
        render_reduction(&dne_implies_dp(), &[px], LogicMode::Minimal).unwrap()
    );
}
