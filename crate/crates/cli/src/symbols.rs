//! The script signature: names for relations and functions mapped onto
//! the kernel's indexed symbols, plus the concrete-syntax printer.
//!
//! A fixed table of canonical names is always available: A, B, C, D are
//! nullary relations on indices 1..4, P and Q are unary relations on 5
//! and 6, and `bot` is the falsum relation on index 0. Declarations may
//! override the arity of a canonical name or add new names, which are
//! assigned indices after the canonical block. Variables are fixed:
//! x, y, z are indices 0..2 and `v<n>` is index n.

use natded_core::syntax::{Formula, FunctionSymbol, RelationSymbol, Term, Variable};
use std::collections::HashMap;
use std::fmt::Write;

#[derive(Clone, Debug)]
pub struct SymbolTable {
    relations: HashMap<String, RelationSymbol>,
    relation_names: HashMap<usize, String>,
    functions: HashMap<String, FunctionSymbol>,
    function_names: HashMap<usize, String>,
    next_relation: usize,
    next_function: usize,
}

impl Default for SymbolTable {
    fn default() -> Self {
        SymbolTable {
            relations: HashMap::new(),
            relation_names: HashMap::new(),
            functions: HashMap::new(),
            function_names: HashMap::new(),
            next_relation: 7,
            next_function: 3,
        }
    }
}

fn canonical_relation(name: &str) -> Option<(usize, usize)> {
    match name {
        "A" => Some((1, 0)),
        "B" => Some((2, 0)),
        "C" => Some((3, 0)),
        "D" => Some((4, 0)),
        "P" => Some((5, 1)),
        "Q" => Some((6, 1)),
        _ => None,
    }
}

fn canonical_function(name: &str) -> Option<usize> {
    match name {
        "f" => Some(0),
        "g" => Some(1),
        "h" => Some(2),
        _ => None,
    }
}

impl SymbolTable {
    pub fn new() -> SymbolTable {
        SymbolTable::default()
    }

    pub fn declare_relation(&mut self, name: &str, arity: usize) -> Result<(), String> {
        if name == "bot" {
            return Err("`bot` is reserved for falsum".to_string());
        }
        if self.relations.contains_key(name) {
            return Err(format!("relation `{name}` is already declared"));
        }
        let index = match canonical_relation(name) {
            Some((index, _)) => index,
            None => {
                let index = self.next_relation;
                self.next_relation += 1;
                index
            }
        };
        let symbol = RelationSymbol::new(index, arity);
        self.relations.insert(name.to_string(), symbol);
        self.relation_names.insert(index, name.to_string());
        Ok(())
    }

    pub fn declare_function(&mut self, name: &str, arity: usize) -> Result<(), String> {
        if self.functions.contains_key(name) {
            return Err(format!("function `{name}` is already declared"));
        }
        let index = match canonical_function(name) {
            Some(index) => index,
            None => {
                let index = self.next_function;
                self.next_function += 1;
                index
            }
        };
        let symbol = FunctionSymbol::new(index, arity);
        self.functions.insert(name.to_string(), symbol);
        self.function_names.insert(index, name.to_string());
        Ok(())
    }

    /// Looks up a relation name, lazily registering a canonical name at
    /// its default arity.
    pub fn relation(&mut self, name: &str) -> Option<RelationSymbol> {
        if let Some(s) = self.relations.get(name) {
            return Some(*s);
        }
        let (index, arity) = canonical_relation(name)?;
        let symbol = RelationSymbol::new(index, arity);
        self.relations.insert(name.to_string(), symbol);
        self.relation_names.insert(index, name.to_string());
        Some(symbol)
    }

    pub fn function(&self, name: &str) -> Option<FunctionSymbol> {
        self.functions.get(name).copied()
    }

    pub fn relation_name(&self, symbol: RelationSymbol) -> String {
        if symbol == RelationSymbol::new(0, 0) {
            return "bot".to_string();
        }
        if let Some(name) = self.relation_names.get(&symbol.index) {
            return name.clone();
        }
        match symbol.index {
            1 => "A".to_string(),
            2 => "B".to_string(),
            3 => "C".to_string(),
            4 => "D".to_string(),
            5 => "P".to_string(),
            6 => "Q".to_string(),
            n => format!("R{n}"),
        }
    }

    pub fn function_name(&self, symbol: FunctionSymbol) -> String {
        if let Some(name) = self.function_names.get(&symbol.index) {
            return name.clone();
        }
        match symbol.index {
            0 => "f".to_string(),
            1 => "g".to_string(),
            2 => "h".to_string(),
            n => format!("f{n}"),
        }
    }
}

/// Parses a variable name against the fixed table; `None` when the name
/// is not a variable.
pub fn variable_of_name(name: &str) -> Option<Variable> {
    match name {
        "x" => Some(Variable(0)),
        "y" => Some(Variable(1)),
        "z" => Some(Variable(2)),
        _ => {
            let rest = name.strip_prefix('v')?;
            if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            rest.parse().ok().map(Variable)
        }
    }
}

pub fn variable_name(v: Variable) -> String {
    match v.index() {
        0 => "x".to_string(),
        1 => "y".to_string(),
        2 => "z".to_string(),
        n => format!("v{n}"),
    }
}

pub fn print_term(table: &SymbolTable, t: &Term) -> String {
    let mut out = String::new();
    write_term(table, t, &mut out);
    out
}

fn write_term(table: &SymbolTable, t: &Term, out: &mut String) {
    match t {
        Term::Var(v) => out.push_str(&variable_name(*v)),
        Term::Func(app) => {
            out.push_str(&table.function_name(app.symbol()));
            for arg in app.args() {
                out.push(' ');
                write_term_arg(table, arg, out);
            }
        }
    }
}

fn write_term_arg(table: &SymbolTable, t: &Term, out: &mut String) {
    match t {
        Term::Var(_) => write_term(table, t, out),
        Term::Func(app) if app.args().is_empty() => write_term(table, t, out),
        Term::Func(_) => {
            out.push('(');
            write_term(table, t, out);
            out.push(')');
        }
    }
}

/// Prints a formula in the script grammar with minimal parentheses. The
/// result re-parses to a structurally equal formula.
pub fn print_formula(table: &SymbolTable, f: &Formula) -> String {
    let mut out = String::new();
    write_formula(table, f, 0, &mut out);
    out
}

/// Prints a formula at argument position inside a proof term: anything
/// below unary level gets parentheses.
pub fn print_formula_arg(table: &SymbolTable, f: &Formula) -> String {
    let mut out = String::new();
    write_formula(table, f, 4, &mut out);
    out
}

// precedence: `=>` 1, `|` 2, `&` 3, everything else 4
fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Implies(_, b) if b.is_bottom() => 4,
        Formula::Implies(..) => 1,
        Formula::Or(..) => 2,
        Formula::And(..) => 3,
        _ => 4,
    }
}

fn write_formula(table: &SymbolTable, f: &Formula, level: u8, out: &mut String) {
    if precedence(f) < level {
        out.push('(');
        write_formula(table, f, 0, out);
        out.push(')');
        return;
    }
    match f {
        Formula::Atom(atom) => {
            if f.is_bottom() {
                out.push_str("bot");
                return;
            }
            out.push_str(&table.relation_name(atom.relation()));
            for arg in atom.args() {
                out.push(' ');
                write_term_arg(table, arg, out);
            }
        }
        Formula::Implies(a, b) if b.is_bottom() => {
            out.push('~');
            write_formula(table, a, 4, out);
        }
        Formula::Implies(a, b) => {
            write_formula(table, a, 2, out);
            out.push_str(" => ");
            write_formula(table, b, 1, out);
        }
        Formula::Or(a, b) => {
            write_formula(table, a, 3, out);
            out.push_str(" | ");
            write_formula(table, b, 2, out);
        }
        Formula::And(a, b) => {
            write_formula(table, a, 4, out);
            out.push_str(" & ");
            write_formula(table, b, 3, out);
        }
        Formula::Forall(v, body) => {
            let _ = write!(out, "forall {} ", variable_name(*v));
            write_formula(table, body, 4, out);
        }
        Formula::Exists(v, body) => {
            let _ = write!(out, "exists {} ", variable_name(*v));
            write_formula(table, body, 4, out);
        }
    }
}

use crate::ast::{FormulaExpr, ProofExpr};

fn formula_expr_arg(table: &SymbolTable, f: &FormulaExpr) -> String {
    match f {
        FormulaExpr::Done(f) => print_formula_arg(table, f),
        // metavariables and scheme applications only appear in scheme
        // and reduction bodies, which are not printed back
        _ => "<template>".to_string(),
    }
}

/// Prints a proof term in the script grammar. Printing a parsed body and
/// re-parsing it yields a structurally equal tree.
pub fn print_proof(table: &SymbolTable, p: &ProofExpr) -> String {
    match p {
        ProofExpr::Assume(f) => format!("assume {}", formula_expr_arg(table, f)),
        ProofExpr::ArrowIntro(f, body) => format!(
            "arrowintro {} ({})",
            formula_expr_arg(table, f),
            print_proof(table, body)
        ),
        ProofExpr::ArrowElim(f, a) => format!(
            "arrowelim ({}) ({})",
            print_proof(table, f),
            print_proof(table, a)
        ),
        ProofExpr::ConjIntro(l, r) => format!(
            "conjintro ({}) ({})",
            print_proof(table, l),
            print_proof(table, r)
        ),
        ProofExpr::ConjElim(p1, p2) => format!(
            "conjelim ({}) ({})",
            print_proof(table, p1),
            print_proof(table, p2)
        ),
        ProofExpr::DisjIntro1(f, body) => format!(
            "disjintro1 {} ({})",
            formula_expr_arg(table, f),
            print_proof(table, body)
        ),
        ProofExpr::DisjIntro2(f, body) => format!(
            "disjintro2 {} ({})",
            formula_expr_arg(table, f),
            print_proof(table, body)
        ),
        ProofExpr::DisjElim(d, l, r) => format!(
            "disjelim ({}) ({}) ({})",
            print_proof(table, d),
            print_proof(table, l),
            print_proof(table, r)
        ),
        ProofExpr::UnivIntro(v, body) => format!(
            "univintro {} ({})",
            variable_name(*v),
            print_proof(table, body)
        ),
        ProofExpr::UnivElim(t, body) => {
            let mut term = String::new();
            write_term_arg(table, t, &mut term);
            format!("univelim {} ({})", term, print_proof(table, body))
        }
        ProofExpr::ExistIntro(f, t, body) => {
            let mut term = String::new();
            write_term_arg(table, t, &mut term);
            format!(
                "existintro {} {} ({})",
                formula_expr_arg(table, f),
                term,
                print_proof(table, body)
            )
        }
        ProofExpr::ExistElim(v, ex, body) => format!(
            "existelim {} ({}) ({})",
            variable_name(*v),
            print_proof(table, ex),
            print_proof(table, body)
        ),
        ProofExpr::Close(members, body) => {
            let inner: Vec<String> = members
                .iter()
                .map(|f| match f {
                    FormulaExpr::Done(f) => print_formula(table, f),
                    _ => "<template>".to_string(),
                })
                .collect();
            format!(
                "close {{{}}} ({})",
                inner.join(", "),
                print_proof(table, body)
            )
        }
        ProofExpr::Cite { name, scheme_args } => match scheme_args {
            None => format!("cite {name}"),
            Some(args) => {
                let inner: Vec<String> = args
                    .iter()
                    .map(|f| match f {
                        FormulaExpr::Done(f) => print_formula(table, f),
                        _ => "<template>".to_string(),
                    })
                    .collect();
                format!("cite {name}[{}]", inner.join(", "))
            }
        },
        ProofExpr::BotC(f, body) => format!(
            "botc {} ({})",
            formula_expr_arg(table, f),
            print_proof(table, body)
        ),
        ProofExpr::BotI(f, body) => format!(
            "boti {} ({})",
            formula_expr_arg(table, f),
            print_proof(table, body)
        ),
    }
}
