//! First-order terms and formulas with structural decidable equality.
//!
//! Variables and symbols are indexed by natural numbers rather than
//! strings; the concrete-syntax layers map a fixed table of names onto
//! indices. Function and relation symbols carry their arity, and symbols
//! with equal index but different arity are distinct. Argument counts are
//! enforced by the only public constructors, so ill-formed applications
//! cannot be built.

use std::fmt;
use thiserror::Error;

/// An object variable, identified by its index alone.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Variable(pub usize);

impl Variable {
    pub fn index(self) -> usize {
        self.0
    }
}

/// A function symbol. Arity zero makes a constant.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct FunctionSymbol {
    pub index: usize,
    pub arity: usize,
}

impl FunctionSymbol {
    pub fn new(index: usize, arity: usize) -> Self {
        FunctionSymbol { index, arity }
    }
}

/// A relation symbol.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct RelationSymbol {
    pub index: usize,
    pub arity: usize,
}

impl RelationSymbol {
    pub fn new(index: usize, arity: usize) -> Self {
        RelationSymbol { index, arity }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum ArityError {
    #[error("function symbol {} expects {expected} argument(s), got {found}", .symbol.index)]
    Function {
        symbol: FunctionSymbol,
        expected: usize,
        found: usize,
    },
    #[error("relation symbol {} expects {expected} argument(s), got {found}", .symbol.index)]
    Relation {
        symbol: RelationSymbol,
        expected: usize,
        found: usize,
    },
}

/// A function symbol applied to exactly `arity` arguments. Fields are
/// private; go through [`Term::func`] so the arity invariant is total.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FuncApp {
    symbol: FunctionSymbol,
    args: Vec<Term>,
}

impl FuncApp {
    pub fn symbol(&self) -> FunctionSymbol {
        self.symbol
    }

    pub fn args(&self) -> &[Term] {
        &self.args
    }
}

/// A term: a variable, or a function applied to the appropriate number
/// of arguments (zero for constants).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Term {
    Var(Variable),
    Func(FuncApp),
}

impl Term {
    pub fn var(x: Variable) -> Term {
        Term::Var(x)
    }

    pub fn func(symbol: FunctionSymbol, args: Vec<Term>) -> Result<Term, ArityError> {
        if args.len() != symbol.arity {
            return Err(ArityError::Function {
                symbol,
                expected: symbol.arity,
                found: args.len(),
            });
        }
        Ok(Term::Func(FuncApp { symbol, args }))
    }

    /// A constant (arity-zero function application).
    pub fn constant(index: usize) -> Term {
        Term::func(FunctionSymbol::new(index, 0), Vec::new()).unwrap()
    }
}

/// An atomic formula. Fields are private; [`Formula::atom`] checks the
/// arity at construction.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Atom {
    relation: RelationSymbol,
    args: Vec<Term>,
}

impl Atom {
    pub fn relation(&self) -> RelationSymbol {
        self.relation
    }

    pub fn args(&self) -> &[Term] {
        &self.args
    }
}

/// A first-order formula. Connectives are right-associative in the
/// concrete syntax, with precedence `&` over `|` over `=>`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Formula {
    Atom(Atom),
    Implies(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Forall(Variable, Box<Formula>),
    Exists(Variable, Box<Formula>),
}

impl Formula {
    pub fn atom(relation: RelationSymbol, args: Vec<Term>) -> Result<Formula, ArityError> {
        if args.len() != relation.arity {
            return Err(ArityError::Relation {
                symbol: relation,
                expected: relation.arity,
                found: args.len(),
            });
        }
        Ok(Formula::Atom(Atom { relation, args }))
    }

    pub fn implies(antecedent: Formula, consequent: Formula) -> Formula {
        Formula::Implies(Box::new(antecedent), Box::new(consequent))
    }

    pub fn and(left: Formula, right: Formula) -> Formula {
        Formula::And(Box::new(left), Box::new(right))
    }

    pub fn or(left: Formula, right: Formula) -> Formula {
        Formula::Or(Box::new(left), Box::new(right))
    }

    pub fn forall(x: Variable, body: Formula) -> Formula {
        Formula::Forall(x, Box::new(body))
    }

    pub fn exists(x: Variable, body: Formula) -> Formula {
        Formula::Exists(x, Box::new(body))
    }

    /// The fixed falsum atom: relation index 0, arity 0.
    pub fn bottom() -> Formula {
        Formula::atom(RelationSymbol::new(0, 0), Vec::new()).unwrap()
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, Formula::Atom(a) if a.relation == RelationSymbol::new(0, 0))
    }

    /// Negation is definitional: `~a` abbreviates `a => bot`.
    pub fn negate(self) -> Formula {
        Formula::implies(self, Formula::bottom())
    }
}

/// Outcome of a decision procedure: a positive witness, or a refutation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Decision<W, R> {
    Yes(W),
    No(R),
}

impl<W, R> Decision<W, R> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Decision::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Decision::No(_))
    }

    pub fn yes(self) -> Option<W> {
        match self {
            Decision::Yes(w) => Some(w),
            Decision::No(_) => None,
        }
    }

    pub fn no(self) -> Option<R> {
        match self {
            Decision::Yes(_) => None,
            Decision::No(r) => Some(r),
        }
    }
}

/// One step into a term or formula, used to report where a decision
/// procedure found its answer.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PathStep {
    /// Left operand of a binary connective.
    Left,
    /// Right operand of a binary connective.
    Right,
    /// Body of a quantifier.
    Body,
    /// The quantifier's own binder position.
    Binder,
    /// The n-th argument of an application or atom.
    Arg(usize),
}

pub type Path = Vec<PathStep>;

/// Structured refutation for the equality deciders: the path to the first
/// mismatch plus renderings of the differing pieces.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mismatch {
    pub path: Path,
    pub left: String,
    pub right: String,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}` vs `{}` at {:?}", self.left, self.right, self.path)
    }
}

fn mismatch(path: Path, left: impl fmt::Display, right: impl fmt::Display) -> Mismatch {
    Mismatch {
        path,
        left: left.to_string(),
        right: right.to_string(),
    }
}

/// Decides equality of variables. Yes exactly when the indices coincide.
pub fn var_eq(a: Variable, b: Variable) -> Decision<(), Mismatch> {
    if a == b {
        Decision::Yes(())
    } else {
        Decision::No(mismatch(Vec::new(), a, b))
    }
}

/// Decides structural equality of terms.
pub fn term_eq(s: &Term, t: &Term) -> Decision<(), Mismatch> {
    match term_eq_at(s, t, &mut Vec::new()) {
        None => Decision::Yes(()),
        Some(m) => Decision::No(m),
    }
}

fn term_eq_at(s: &Term, t: &Term, path: &mut Path) -> Option<Mismatch> {
    match (s, t) {
        (Term::Var(a), Term::Var(b)) if a == b => None,
        (Term::Func(a), Term::Func(b)) if a.symbol == b.symbol => {
            for (i, (u, v)) in a.args.iter().zip(&b.args).enumerate() {
                path.push(PathStep::Arg(i));
                if let Some(m) = term_eq_at(u, v, path) {
                    return Some(m);
                }
                path.pop();
            }
            None
        }
        _ => Some(mismatch(path.clone(), s, t)),
    }
}

/// Decides structural equality of formulas. Bound-variable names matter:
/// `forall x (P x)` and `forall y (P y)` are unequal here.
pub fn formula_eq(a: &Formula, b: &Formula) -> Decision<(), Mismatch> {
    match formula_eq_at(a, b, &mut Vec::new()) {
        None => Decision::Yes(()),
        Some(m) => Decision::No(m),
    }
}

fn formula_eq_at(a: &Formula, b: &Formula, path: &mut Path) -> Option<Mismatch> {
    use Formula::*;
    match (a, b) {
        (Atom(p), Atom(q)) if p.relation == q.relation => {
            for (i, (u, v)) in p.args.iter().zip(&q.args).enumerate() {
                path.push(PathStep::Arg(i));
                if let Some(m) = term_eq_at(u, v, path) {
                    return Some(m);
                }
                path.pop();
            }
            None
        }
        (Implies(a1, a2), Implies(b1, b2))
        | (And(a1, a2), And(b1, b2))
        | (Or(a1, a2), Or(b1, b2))
            if std::mem::discriminant(a) == std::mem::discriminant(b) =>
        {
            path.push(PathStep::Left);
            if let Some(m) = formula_eq_at(a1, b1, path) {
                return Some(m);
            }
            path.pop();
            path.push(PathStep::Right);
            if let Some(m) = formula_eq_at(a2, b2, path) {
                return Some(m);
            }
            path.pop();
            None
        }
        (Forall(x, a0), Forall(y, b0)) | (Exists(x, a0), Exists(y, b0))
            if std::mem::discriminant(a) == std::mem::discriminant(b) =>
        {
            if x != y {
                path.push(PathStep::Binder);
                let m = mismatch(path.clone(), x, y);
                path.pop();
                return Some(m);
            }
            path.push(PathStep::Body);
            if let Some(m) = formula_eq_at(a0, b0, path) {
                return Some(m);
            }
            path.pop();
            None
        }
        _ => Some(mismatch(path.clone(), a, b)),
    }
}

// --- canonical ASCII rendering, used by diagnostics -----------------------
//
// Variables print as x, y, z, v<n>; relations by the fixed index table
// (bot, A, B, C, D, P, Q, R<n>); functions as f, g, h, f<n>. `a => bot`
// prints as `~a`.

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            0 => write!(f, "x"),
            1 => write!(f, "y"),
            2 => write!(f, "z"),
            n => write!(f, "v{n}"),
        }
    }
}

fn function_name(s: FunctionSymbol) -> String {
    match s.index {
        0 => "f".to_string(),
        1 => "g".to_string(),
        2 => "h".to_string(),
        n => format!("f{n}"),
    }
}

fn relation_name(s: RelationSymbol) -> String {
    match s.index {
        0 if s.arity == 0 => "bot".to_string(),
        1 => "A".to_string(),
        2 => "B".to_string(),
        3 => "C".to_string(),
        4 => "D".to_string(),
        5 => "P".to_string(),
        6 => "Q".to_string(),
        n => format!("R{n}"),
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => write!(f, "{x}"),
            Term::Func(app) => {
                write!(f, "{}", function_name(app.symbol))?;
                for arg in &app.args {
                    match arg {
                        Term::Var(x) => write!(f, " {x}")?,
                        Term::Func(inner) if inner.args.is_empty() => {
                            write!(f, " {}", function_name(inner.symbol))?
                        }
                        _ => write!(f, " ({arg})")?,
                    }
                }
                Ok(())
            }
        }
    }
}

// Precedence levels: => is 1, | is 2, & is 3, everything else 4.
fn fmt_formula(a: &Formula, level: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let prec = match a {
        Formula::Implies(_, b) if b.is_bottom() => 4,
        Formula::Implies(..) => 1,
        Formula::Or(..) => 2,
        Formula::And(..) => 3,
        _ => 4,
    };
    if prec < level {
        write!(f, "(")?;
        fmt_formula(a, 0, f)?;
        return write!(f, ")");
    }
    match a {
        Formula::Atom(atom) => {
            write!(f, "{}", relation_name(atom.relation))?;
            for arg in &atom.args {
                match arg {
                    Term::Var(x) => write!(f, " {x}")?,
                    Term::Func(app) if app.args().is_empty() => {
                        write!(f, " {}", function_name(app.symbol()))?
                    }
                    _ => write!(f, " ({arg})")?,
                }
            }
            Ok(())
        }
        Formula::Implies(a1, b) if b.is_bottom() => {
            write!(f, "~")?;
            fmt_formula(a1, 4, f)
        }
        Formula::Implies(a1, a2) => {
            fmt_formula(a1, 2, f)?;
            write!(f, " => ")?;
            fmt_formula(a2, 1, f)
        }
        Formula::Or(a1, a2) => {
            fmt_formula(a1, 3, f)?;
            write!(f, " | ")?;
            fmt_formula(a2, 2, f)
        }
        Formula::And(a1, a2) => {
            fmt_formula(a1, 4, f)?;
            write!(f, " & ")?;
            fmt_formula(a2, 3, f)
        }
        Formula::Forall(x, body) => {
            write!(f, "forall {x} ")?;
            fmt_formula(body, 4, f)
        }
        Formula::Exists(x, body) => {
            write!(f, "exists {x} ")?;
            fmt_formula(body, 4, f)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_formula(self, 0, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(t: Term) -> Formula {
        Formula::atom(RelationSymbol::new(5, 1), vec![t]).unwrap()
    }

    fn x() -> Variable {
        Variable(0)
    }

    fn y() -> Variable {
        Variable(1)
    }

    #[test]
    fn var_eq_reflexive_and_distinct() {
        assert!(var_eq(Variable(3), Variable(3)).is_yes());
        assert!(var_eq(Variable(0), Variable(1)).is_no());
        for n in 0..=100 {
            assert!(var_eq(Variable(n), Variable(n)).is_yes());
        }
    }

    #[test]
    fn term_eq_basic() {
        let f1 = FunctionSymbol::new(0, 1);
        assert!(term_eq(&Term::var(x()), &Term::var(x())).is_yes());
        let fx = Term::func(f1, vec![Term::var(x())]).unwrap();
        let fy = Term::func(f1, vec![Term::var(y())]).unwrap();
        let no = term_eq(&fx, &fy).no().unwrap();
        assert_eq!(no.path, vec![PathStep::Arg(0)]);
    }

    #[test]
    fn symbols_with_same_index_different_arity_are_distinct() {
        let f0_2 = FunctionSymbol::new(0, 2);
        let f0_1 = FunctionSymbol::new(0, 1);
        let s = Term::func(f0_2, vec![Term::var(x()), Term::var(y())]).unwrap();
        let t = Term::func(f0_1, vec![Term::var(x())]).unwrap();
        assert!(term_eq(&s, &t).is_no());
        assert_ne!(f0_2, f0_1);
    }

    #[test]
    fn arity_is_enforced_at_construction() {
        let f2 = FunctionSymbol::new(0, 2);
        assert!(Term::func(f2, vec![Term::var(x())]).is_err());
        let r1 = RelationSymbol::new(5, 1);
        assert!(Formula::atom(r1, vec![]).is_err());
        assert!(Formula::atom(r1, vec![Term::var(x())]).is_ok());
    }

    #[test]
    fn formula_eq_basic() {
        assert!(formula_eq(&p(Term::var(x())), &p(Term::var(x()))).is_yes());
        let all = Formula::forall(x(), p(Term::var(x())));
        let ex = Formula::exists(x(), p(Term::var(x())));
        assert!(formula_eq(&all, &ex).is_no());
        // structural equality distinguishes bound-variable names
        let all_y = Formula::forall(y(), p(Term::var(y())));
        assert!(formula_eq(&all, &all_y).is_no());
    }

    #[test]
    fn display_round_names() {
        let a = Formula::atom(RelationSymbol::new(1, 0), vec![]).unwrap();
        let f = Formula::implies(
            Formula::and(a.clone(), p(Term::var(x()))),
            Formula::or(a.clone(), a.clone().negate()),
        );
        assert_eq!(f.to_string(), "A & P x => A | ~A");
        let q = Formula::forall(x(), Formula::and(p(Term::var(x())), a.clone()));
        assert_eq!(q.to_string(), "forall x (P x & A)");
        assert_eq!(Formula::bottom().to_string(), "bot");
    }
}
