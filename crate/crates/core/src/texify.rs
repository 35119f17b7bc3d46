//! Renders checked proofs as LaTeX proof trees for the bussproofs
//! package, and derivability reductions as proposition/proof blocks.
//!
//! Rendering is a pure function of the checked proof; equal proofs give
//! byte-identical output. Close nodes are transparent, citations become
//! labelled axioms, and assumptions render discharged (bracketed) unless
//! they are members of the final context.

use crate::context::{member_of, Context};
use crate::kernel::{check_proof, CheckError, Library, LogicMode, Proof};
use crate::schemes::{Reduction, SchemeError};
use crate::syntax::{Formula, FunctionSymbol, RelationSymbol, Term, Variable};

const ARROW_INTRO: &str = "$\\rightarrow^+$";
const ARROW_ELIM: &str = "$\\rightarrow^{-}$";
const CONJ_INTRO: &str = "$\\land^+$";
const CONJ_ELIM: &str = "$\\land^{-}$";
const DISJ_INTRO: &str = "$\\lor^+$";
const DISJ_ELIM: &str = "$\\lor^{-}$";
const UNIV_INTRO: &str = "$\\forall^+$";
const UNIV_ELIM: &str = "$\\forall^{-}$";
const EXIST_INTRO: &str = "$\\exists^+$";
const EXIST_ELIM: &str = "$\\exists^{-}$";
const BOT_C: &str = "$\\bot_c$";
const BOT_I: &str = "$\\bot_i$";

fn wrap(s: &str) -> String {
    format!("{{{s}}}")
}

fn variable_name(v: Variable) -> String {
    match v.index() {
        0 => "x".to_string(),
        1 => "y".to_string(),
        2 => "z".to_string(),
        n => format!("v_{n}"),
    }
}

fn relation_name(r: RelationSymbol) -> String {
    match r.index {
        0 => "\\bot".to_string(),
        1 => "A".to_string(),
        2 => "B".to_string(),
        3 => "C".to_string(),
        4 => "D".to_string(),
        5 => "P".to_string(),
        6 => "Q".to_string(),
        n => format!("R_{}", n - 5),
    }
}

fn function_name(f: FunctionSymbol) -> String {
    format!("f_{}", f.index)
}

fn tex_term(t: &Term) -> String {
    match t {
        Term::Var(v) => wrap(&variable_name(*v)),
        Term::Func(app) => {
            let f = app.symbol();
            if f.arity == 0 {
                // constants with small indices print as numerals
                if f.index <= 5 {
                    wrap(&f.index.to_string())
                } else {
                    wrap(&function_name(f))
                }
            } else {
                wrap(&format!(
                    "{}\\left({}\\right)",
                    function_name(f),
                    tex_terms(app.args())
                ))
            }
        }
    }
}

fn tex_terms(ts: &[Term]) -> String {
    ts.iter().map(tex_term).collect::<Vec<_>>().join(", ")
}

/// Renders a formula in the fixed-name LaTeX syntax: negations print with
/// `\lnot`, unary atoms juxtapose, binary atoms print infix.
pub fn tex_formula(a: &Formula) -> String {
    if a.is_bottom() {
        return "\\bot".to_string();
    }
    match a {
        Formula::Atom(atom) => {
            let r = atom.relation();
            match r.arity {
                0 => relation_name(r),
                1 => format!("{}{}", relation_name(r), tex_terms(atom.args())),
                2 => format!(
                    "{}{}{}",
                    tex_term(&atom.args()[0]),
                    relation_name(r),
                    tex_term(&atom.args()[1])
                ),
                _ => format!(
                    "{}\\left({}\\right)",
                    relation_name(r),
                    tex_terms(atom.args())
                ),
            }
        }
        Formula::Implies(a1, b) if b.is_bottom() => {
            format!("\\lnot {}", wrap(&paren_formula(a1)))
        }
        Formula::Implies(a1, a2) => {
            format!("{} \\rightarrow {}", paren_formula(a1), paren_formula(a2))
        }
        Formula::And(a1, a2) => format!("{} \\land {}", paren_formula(a1), paren_formula(a2)),
        Formula::Or(a1, a2) => format!("{} \\lor {}", paren_formula(a1), paren_formula(a2)),
        Formula::Forall(v, body) => format!(
            "\\forall{}{}",
            wrap(&variable_name(*v)),
            paren_formula(body)
        ),
        Formula::Exists(v, body) => format!(
            "\\exists{}{}",
            wrap(&variable_name(*v)),
            paren_formula(body)
        ),
    }
}

// Negations and quantifications bind visibly, so they go bare; other
// connectives are parenthesised when nested.
fn paren_formula(a: &Formula) -> String {
    match a {
        Formula::Atom(_) => tex_formula(a),
        Formula::Implies(_, b) if b.is_bottom() => tex_formula(a),
        Formula::Implies(..) | Formula::And(..) | Formula::Or(..) => {
            format!("\\left({}\\right)", tex_formula(a))
        }
        Formula::Forall(..) | Formula::Exists(..) => tex_formula(a),
    }
}

/// A bussproofs-ready proof tree: formulas at inference nodes, rule
/// labels, and axiom leaves split into scheme / open / discharged.
#[derive(Clone, PartialEq, Debug)]
pub enum TexTree {
    SchemeAxiom {
        formula: Formula,
        label: String,
    },
    OpenAxiom(Formula),
    ClosedAxiom(Formula),
    Unary {
        formula: Formula,
        label: String,
        child: Box<TexTree>,
    },
    Binary {
        formula: Formula,
        label: String,
        children: [Box<TexTree>; 2],
    },
    Trinary {
        formula: Formula,
        label: String,
        children: [Box<TexTree>; 3],
    },
}

/// Lowers a checked proof to a [`TexTree`]. Assumptions that are members
/// of the final context render open; all others render discharged. Close
/// nodes are transparent.
pub fn proof_to_tex_tree(
    proof: &Proof,
    final_context: &Context,
    mode: LogicMode,
    library: &Library,
) -> Result<TexTree, CheckError> {
    let conclusion = check_proof(proof, mode, library)?.into_parts().1;
    let unary = |label: &str, body: &Proof| -> Result<TexTree, CheckError> {
        Ok(TexTree::Unary {
            formula: conclusion.clone(),
            label: label.to_string(),
            child: Box::new(proof_to_tex_tree(body, final_context, mode, library)?),
        })
    };
    match proof {
        Proof::Assume(a) => {
            if member_of(a, final_context).is_yes() {
                Ok(TexTree::OpenAxiom(a.clone()))
            } else {
                Ok(TexTree::ClosedAxiom(a.clone()))
            }
        }
        Proof::Cite { name, conclusion } => Ok(TexTree::SchemeAxiom {
            formula: conclusion.clone(),
            label: name.clone(),
        }),
        Proof::Close { body, .. } => proof_to_tex_tree(body, final_context, mode, library),
        Proof::ArrowIntro { body, .. } => unary(ARROW_INTRO, body),
        Proof::ArrowElim { function, argument } => Ok(TexTree::Binary {
            formula: conclusion,
            label: ARROW_ELIM.to_string(),
            children: [
                Box::new(proof_to_tex_tree(function, final_context, mode, library)?),
                Box::new(proof_to_tex_tree(argument, final_context, mode, library)?),
            ],
        }),
        Proof::ConjIntro { left, right } => Ok(TexTree::Binary {
            formula: conclusion,
            label: CONJ_INTRO.to_string(),
            children: [
                Box::new(proof_to_tex_tree(left, final_context, mode, library)?),
                Box::new(proof_to_tex_tree(right, final_context, mode, library)?),
            ],
        }),
        Proof::ConjElim { pair, body } => Ok(TexTree::Binary {
            formula: conclusion,
            label: CONJ_ELIM.to_string(),
            children: [
                Box::new(proof_to_tex_tree(pair, final_context, mode, library)?),
                Box::new(proof_to_tex_tree(body, final_context, mode, library)?),
            ],
        }),
        Proof::DisjIntro1 { body, .. } | Proof::DisjIntro2 { body, .. } => unary(DISJ_INTRO, body),
        Proof::DisjElim {
            disj,
            left_case,
            right_case,
        } => Ok(TexTree::Trinary {
            formula: conclusion,
            label: DISJ_ELIM.to_string(),
            children: [
                Box::new(proof_to_tex_tree(disj, final_context, mode, library)?),
                Box::new(proof_to_tex_tree(left_case, final_context, mode, library)?),
                Box::new(proof_to_tex_tree(right_case, final_context, mode, library)?),
            ],
        }),
        Proof::UnivIntro { body, .. } => unary(UNIV_INTRO, body),
        Proof::UnivElim { body, .. } => unary(UNIV_ELIM, body),
        Proof::ExistIntro { body, .. } => unary(EXIST_INTRO, body),
        Proof::ExistElim { exists, body, .. } => Ok(TexTree::Binary {
            formula: conclusion,
            label: EXIST_ELIM.to_string(),
            children: [
                Box::new(proof_to_tex_tree(exists, final_context, mode, library)?),
                Box::new(proof_to_tex_tree(body, final_context, mode, library)?),
            ],
        }),
        Proof::BotC { body, .. } => unary(BOT_C, body),
        Proof::BotI { body, .. } => unary(BOT_I, body),
    }
}

fn line(indent: usize, s: &str) -> String {
    format!("{}{}\n", "\t".repeat(indent), s)
}

fn tag(command: &str, content: &str) -> String {
    format!("\\{command}{{{content}}}")
}

fn label_line(indent: usize, label: &str) -> String {
    line(indent, &tag("RightLabel", label))
}

fn inference_line(indent: usize, command: &str, formula: &Formula) -> String {
    line(
        indent,
        &tag(command, &format!("${}$", tex_formula(formula))),
    )
}

fn discharged_line(indent: usize, command: &str, formula: &Formula) -> String {
    line(
        indent,
        &tag(
            command,
            &format!("$\\left[{}\\right]$", tex_formula(formula)),
        ),
    )
}

fn render_at(indent: usize, tree: &TexTree) -> String {
    match tree {
        TexTree::SchemeAxiom { formula, label } => {
            line(indent, "\\AxiomC{}")
                + &label_line(indent, label)
                + &inference_line(indent, "UnaryInfC", formula)
        }
        TexTree::OpenAxiom(formula) => inference_line(indent, "AxiomC", formula),
        TexTree::ClosedAxiom(formula) => discharged_line(indent, "AxiomC", formula),
        TexTree::Unary {
            formula,
            label,
            child,
        } => {
            render_at(indent, child)
                + &label_line(indent, label)
                + &inference_line(indent, "UnaryInfC", formula)
        }
        TexTree::Binary {
            formula,
            label,
            children,
        } => {
            render_at(indent, &children[0])
                + &render_at(indent + 1, &children[1])
                + &label_line(indent, label)
                + &inference_line(indent, "BinaryInfC", formula)
        }
        TexTree::Trinary {
            formula,
            label,
            children,
        } => {
            render_at(indent, &children[0])
                + &render_at(indent + 1, &children[1])
                + &render_at(indent + 2, &children[2])
                + &label_line(indent, label)
                + &inference_line(indent, "TrinaryInfC", formula)
        }
    }
}

/// Renders a [`TexTree`] as one bussproofs prooftree environment.
pub fn render_tree(tree: &TexTree) -> String {
    format!(
        "\\begin{{prooftree}}\n{}\\end{{prooftree}}\n",
        render_at(0, tree)
    )
}

/// Checks a proof and renders it as a prooftree environment.
pub fn render_proof(
    proof: &Proof,
    mode: LogicMode,
    library: &Library,
) -> Result<String, CheckError> {
    let judgement = check_proof(proof, mode, library)?;
    let tree = proof_to_tex_tree(proof, judgement.context(), mode, library)?;
    Ok(render_tree(&tree))
}

/// Renders a checked instance proof as a proposition/proof block naming
/// the hypothesis schemes and the target.
pub fn render_reduction_block(
    hypotheses: &[&str],
    target: &str,
    proof: &Proof,
    mode: LogicMode,
    library: &Library,
) -> Result<String, CheckError> {
    let judgement = check_proof(proof, mode, library)?;
    let tree = proof_to_tex_tree(proof, judgement.context(), mode, library)?;
    Ok(format!(
        "\\begin{{proposition}}\n$\\text{{{}}} \\supset \\text{{{}}}$\n\\end{{proposition}}\n\
         \\begin{{proof}}\n$ $\n\\vspace{{-\\baselineskip}}\n{}\
         \\vspace{{-\\baselineskip}}\n\\end{{proof}}\n",
        hypotheses.join(", "),
        target,
        render_tree(&tree)
    ))
}

/// Renders one instance of a reduction as a proposition/proof block. The
/// instance proof is checked before rendering; hypothesis citations are
/// the labelled axioms of the tree.
pub fn render_reduction(
    reduction: &Reduction,
    args: &[Formula],
    mode: LogicMode,
) -> Result<String, SchemeError> {
    reduction.check_instance(args, mode)?;
    let (proof, library) = reduction.instantiate_proof(args)?;
    let hypotheses: Vec<&str> = reduction.hypotheses.iter().map(|s| s.name()).collect();
    Ok(render_reduction_block(
        &hypotheses,
        reduction.target.name(),
        &proof,
        mode,
        &library,
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::{dne_implies_dp, xvar};

    fn a0() -> Formula {
        Formula::atom(RelationSymbol::new(1, 0), vec![]).unwrap()
    }

    fn p_of_x() -> Formula {
        Formula::atom(RelationSymbol::new(5, 1), vec![Term::var(xvar())]).unwrap()
    }

    pub(crate) fn balanced(s: &str) -> bool {
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
    fn formula_rendering() {
        assert_eq!(tex_formula(&Formula::bottom()), "\\bot");
        assert_eq!(tex_formula(&p_of_x()), "P{x}");
        assert_eq!(
            tex_formula(&Formula::forall(xvar(), p_of_x())),
            "\\forall{x}P{x}"
        );
        assert_eq!(tex_formula(&a0().negate()), "\\lnot {A}");
        assert_eq!(
            tex_formula(&Formula::implies(a0(), a0())),
            "A \\rightarrow A"
        );
        // negated implications keep their parentheses under the negation
        let neg_imp = Formula::implies(a0(), a0()).negate();
        assert_eq!(
            tex_formula(&neg_imp),
            "\\lnot {\\left(A \\rightarrow A\\right)}"
        );
    }

    #[test]
    fn identity_proof_renders_discharged_axiom() {
        let a = a0();
        let proof = Proof::close(
            Context::Empty,
            Proof::arrow_intro(a.clone(), Proof::assume(a)),
        );
        let lib = Library::new();
        let out = render_proof(&proof, LogicMode::Minimal, &lib).unwrap();
        assert!(out.contains("\\AxiomC{$\\left[A\\right]$}"));
        assert!(out.contains("\\RightLabel{$\\rightarrow^+$}"));
        assert!(out.contains("\\UnaryInfC{$A \\rightarrow A$}"));
        assert!(balanced(&out));
    }

    #[test]
    fn open_assumptions_render_open() {
        let a = a0();
        let proof = Proof::assume(a.clone());
        let lib = Library::new();
        let out = render_proof(&proof, LogicMode::Minimal, &lib).unwrap();
        assert!(out.contains("\\AxiomC{$A$}"));
        assert!(balanced(&out));
    }

    #[test]
    fn reduction_block_renders() {
        let out = render_reduction(&dne_implies_dp(), &[p_of_x()], LogicMode::Minimal).unwrap();
        assert!(out.starts_with("\\begin{proposition}\n$\\text{DNE} \\supset \\text{DP}$"));
        assert!(out.contains("\\begin{prooftree}"));
        assert!(out.contains("\\RightLabel{DNE}"));
        assert!(balanced(&out));
    }

    #[test]
    fn rendering_is_deterministic() {
        let out1 = render_reduction(&dne_implies_dp(), &[p_of_x()], LogicMode::Minimal).unwrap();
        let out2 = render_reduction(&dne_implies_dp(), &[p_of_x()], LogicMode::Minimal).unwrap();
        assert_eq!(out1, out2);
    }
}
