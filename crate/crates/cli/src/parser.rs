//! Recursive-descent parser for proof scripts.
//!
//! Parsing is arity-directed: relation and function applications consume
//! exactly as many juxtaposed arguments as the declared arity, so no
//! application parentheses are needed and arity violations surface as
//! parse errors. Declarations take effect immediately, and every name
//! must be declared (or canonical) before use.

use crate::ast::{
    FormulaExpr, Item, ModeName, ProofExpr, ProofItem, ReductionItem, SchemeTemplate, Script,
};
use crate::lexer::{lex, LexError, Pos, Tok, Token};
use crate::symbols::{variable_of_name, SymbolTable};
use natded_core::syntax::{Formula, Term, Variable};
use std::collections::HashMap;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.pos, self.message)
    }
}

impl From<LexError> for ParseError {
    fn from(e: LexError) -> Self {
        ParseError {
            pos: e.pos,
            message: e.message,
        }
    }
}

#[derive(Debug)]
pub struct Parser {
    tokens: Vec<Token>,
    index: usize,
    end: Pos,
    pub table: SymbolTable,
    pub schemes: HashMap<String, SchemeTemplate>,
    metavars: Vec<String>,
    item_names: std::collections::HashSet<String>,
}

const RULE_NAMES: &[&str] = &[
    "assume",
    "arrowintro",
    "arrowelim",
    "conjintro",
    "conjelim",
    "disjintro1",
    "disjintro2",
    "disjelim",
    "univintro",
    "univelim",
    "existintro",
    "existelim",
    "close",
    "cite",
    "botc",
    "boti",
];

pub fn parse_script(input: &str) -> Result<(Script, Parser), ParseError> {
    let tokens = lex(input)?;
    let end = tokens
        .last()
        .map(|t| t.pos)
        .unwrap_or(Pos { line: 1, col: 1 });
    let mut parser = Parser {
        tokens,
        index: 0,
        end,
        table: SymbolTable::new(),
        schemes: HashMap::new(),
        metavars: Vec::new(),
        item_names: std::collections::HashSet::new(),
    };
    let script = parser.script()?;
    Ok((script, parser))
}

/// Parses one formula against a fresh symbol table (canonical names
/// only). Used by the round-trip tests and ad-hoc tools.
pub fn parse_formula_str(input: &str, table: &mut SymbolTable) -> Result<Formula, ParseError> {
    let tokens = lex(input)?;
    let end = tokens
        .last()
        .map(|t| t.pos)
        .unwrap_or(Pos { line: 1, col: 1 });
    let mut parser = Parser {
        tokens,
        index: 0,
        end,
        table: std::mem::take(table),
        schemes: HashMap::new(),
        metavars: Vec::new(),
        item_names: std::collections::HashSet::new(),
    };
    let out = parser.formula();
    let trailing = if parser.index != parser.tokens.len() {
        Some(parser.error_here("end of input"))
    } else {
        None
    };
    *table = parser.table;
    let expr = out?;
    if let Some(err) = trailing {
        return Err(err);
    }
    match expr {
        FormulaExpr::Done(f) => Ok(f),
        _ => Err(ParseError {
            pos: Pos { line: 1, col: 1 },
            message: "formula contains unbound names".to_string(),
        }),
    }
}

/// Parses one standalone proof term; used by the round-trip tests.
pub fn parse_proof_str(
    input: &str,
    table: &mut SymbolTable,
) -> Result<crate::ast::ProofExpr, ParseError> {
    let tokens = lex(input)?;
    let end = tokens
        .last()
        .map(|t| t.pos)
        .unwrap_or(Pos { line: 1, col: 1 });
    let mut parser = Parser {
        tokens,
        index: 0,
        end,
        table: std::mem::take(table),
        schemes: HashMap::new(),
        metavars: Vec::new(),
        item_names: std::collections::HashSet::new(),
    };
    let out = parser.proof_term();
    let trailing = if parser.index != parser.tokens.len() {
        Some(parser.error_here("end of input"))
    } else {
        None
    };
    *table = parser.table;
    let expr = out?;
    if let Some(err) = trailing {
        return Err(err);
    }
    Ok(expr)
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.index).map(|t| &t.tok)
    }

    fn pos(&self) -> Pos {
        self.tokens
            .get(self.index)
            .map(|t| t.pos)
            .unwrap_or(self.end)
    }

    fn advance(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.index).cloned();
        if t.is_some() {
            self.index += 1;
        }
        t
    }

    fn error_here(&self, expected: &str) -> ParseError {
        let found = match self.peek() {
            Some(t) => t.to_string(),
            None => "end of input".to_string(),
        };
        ParseError {
            pos: self.pos(),
            message: format!("expected {expected}, found {found}"),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<Pos, ParseError> {
        if self.peek() == Some(&tok) {
            Ok(self.advance().unwrap().pos)
        } else {
            Err(self.error_here(expected))
        }
    }

    fn ident(&mut self, expected: &str) -> Result<(String, Pos), ParseError> {
        match self.peek() {
            Some(Tok::Ident(_)) => {
                let Token { tok, pos } = self.advance().unwrap();
                let Tok::Ident(name) = tok else {
                    unreachable!()
                };
                Ok((name, pos))
            }
            _ => Err(self.error_here(expected)),
        }
    }

    fn nat(&mut self, expected: &str) -> Result<usize, ParseError> {
        match self.peek() {
            Some(Tok::Nat(_)) => {
                let Token { tok, .. } = self.advance().unwrap();
                let Tok::Nat(n) = tok else { unreachable!() };
                Ok(n)
            }
            _ => Err(self.error_here(expected)),
        }
    }

    fn script(&mut self) -> Result<Script, ParseError> {
        let mut script = Script::default();
        while self.peek().is_some() {
            let (keyword, pos) =
                self.ident("`relation`, `function`, `scheme`, `proof`, or `reduction`")?;
            match keyword.as_str() {
                "relation" => {
                    let (name, npos) = self.ident("a relation name")?;
                    self.check_fresh_name(&name, npos)?;
                    let arity = self.nat("an arity")?;
                    self.table
                        .declare_relation(&name, arity)
                        .map_err(|message| ParseError { pos: npos, message })?;
                }
                "function" => {
                    let (name, npos) = self.ident("a function name")?;
                    self.check_fresh_name(&name, npos)?;
                    let arity = self.nat("an arity")?;
                    self.table
                        .declare_function(&name, arity)
                        .map_err(|message| ParseError { pos: npos, message })?;
                }
                "scheme" => {
                    let template = self.scheme_item()?;
                    script.items.push(Item::Scheme(template));
                }
                "proof" => {
                    let item = self.proof_item(pos)?;
                    script.items.push(Item::Proof(item));
                }
                "reduction" => {
                    let item = self.reduction_item(pos)?;
                    script.items.push(Item::Reduction(item));
                }
                other => {
                    return Err(ParseError {
                        pos,
                        message: format!(
                            "expected `relation`, `function`, `scheme`, `proof`, or `reduction`, found `{other}`"
                        ),
                    });
                }
            }
        }
        Ok(script)
    }

    // variable names and rule names cannot be re-used for symbols
    fn check_fresh_name(&self, name: &str, pos: Pos) -> Result<(), ParseError> {
        if variable_of_name(name).is_some() || name == "bot" || RULE_NAMES.contains(&name) {
            return Err(ParseError {
                pos,
                message: format!("`{name}` is reserved"),
            });
        }
        if self.schemes.contains_key(name) {
            return Err(ParseError {
                pos,
                message: format!("`{name}` already names a scheme"),
            });
        }
        Ok(())
    }

    fn claim_item_name(&mut self, name: &str, pos: Pos) -> Result<(), ParseError> {
        if !self.item_names.insert(name.to_string()) {
            return Err(ParseError {
                pos,
                message: format!("`{name}` is already the name of an earlier item"),
            });
        }
        Ok(())
    }

    fn scheme_item(&mut self) -> Result<SchemeTemplate, ParseError> {
        let (name, npos) = self.ident("a scheme name")?;
        self.check_fresh_name(&name, npos)?;
        let mut params = Vec::new();
        if self.peek() == Some(&Tok::LParen) {
            self.advance();
            loop {
                let (param, ppos) = self.ident("a parameter name")?;
                if variable_of_name(&param).is_some() {
                    return Err(ParseError {
                        pos: ppos,
                        message: format!("parameter `{param}` collides with a variable name"),
                    });
                }
                params.push(param);
                match self.peek() {
                    Some(Tok::Comma) => {
                        self.advance();
                    }
                    Some(Tok::RParen) => {
                        self.advance();
                        break;
                    }
                    _ => return Err(self.error_here("`,` or `)`")),
                }
            }
        }
        self.expect(Tok::Define, "`:=`")?;
        self.metavars = params.clone();
        let body = self.formula();
        self.metavars.clear();
        let template = SchemeTemplate {
            name: name.clone(),
            params,
            body: body?,
        };
        self.schemes.insert(name, template.clone());
        Ok(template)
    }

    fn mode_annotation(&mut self) -> Result<Option<ModeName>, ParseError> {
        if self.peek() == Some(&Tok::Ident("in".to_string())) {
            self.advance();
            let (mode, pos) = self.ident("`minimal`, `int`, or `classical`")?;
            let mode = match mode.as_str() {
                "minimal" => ModeName::Minimal,
                "int" => ModeName::Int,
                "classical" => ModeName::Classical,
                other => {
                    return Err(ParseError {
                        pos,
                        message: format!(
                            "expected `minimal`, `int`, or `classical`, found `{other}`"
                        ),
                    });
                }
            };
            Ok(Some(mode))
        } else {
            Ok(None)
        }
    }

    fn proof_item(&mut self, pos: Pos) -> Result<ProofItem, ParseError> {
        let (name, npos) = self.ident("a proof name")?;
        self.claim_item_name(&name, npos)?;
        let mode = self.mode_annotation()?;
        self.expect(Tok::Colon, "`:`")?;
        let mut context = Vec::new();
        if self.peek() != Some(&Tok::Turnstile) {
            loop {
                context.push(self.formula()?);
                match self.peek() {
                    Some(Tok::Comma) => {
                        self.advance();
                    }
                    _ => break,
                }
            }
        }
        self.expect(Tok::Turnstile, "`|-`")?;
        let conclusion = self.formula()?;
        self.expect(Tok::Define, "`:=`")?;
        let body = self.proof_term()?;
        Ok(ProofItem {
            name,
            mode,
            context,
            conclusion,
            body,
            pos,
        })
    }

    fn reduction_item(&mut self, pos: Pos) -> Result<ReductionItem, ParseError> {
        let (name, npos) = self.ident("a reduction name")?;
        self.claim_item_name(&name, npos)?;
        let mode = self.mode_annotation()?;
        self.expect(Tok::Colon, "`:`")?;
        let mut hypotheses = Vec::new();
        loop {
            let (hyp, hpos) = self.ident("a hypothesis scheme name")?;
            if !self.schemes.contains_key(&hyp) {
                return Err(ParseError {
                    pos: hpos,
                    message: format!("unknown scheme `{hyp}`"),
                });
            }
            hypotheses.push(hyp);
            match self.peek() {
                Some(Tok::Comma) => {
                    self.advance();
                }
                _ => break,
            }
        }
        self.expect(Tok::Reduces, "`|>`")?;
        let (target, tpos) = self.ident("a target scheme name")?;
        let target_template = self.schemes.get(&target).cloned().ok_or(ParseError {
            pos: tpos,
            message: format!("unknown scheme `{target}`"),
        })?;
        self.expect(Tok::LParen, "`(`")?;
        let mut params = Vec::new();
        loop {
            let (param, _) = self.ident("a parameter name")?;
            params.push(param);
            match self.peek() {
                Some(Tok::Comma) => {
                    self.advance();
                }
                Some(Tok::RParen) => {
                    self.advance();
                    break;
                }
                _ => return Err(self.error_here("`,` or `)`")),
            }
        }
        if params.len() != target_template.params.len() {
            return Err(ParseError {
                pos: tpos,
                message: format!(
                    "scheme `{target}` has arity {}, reduction binds {} parameter(s)",
                    target_template.params.len(),
                    params.len()
                ),
            });
        }
        let (samples_kw, spos) = self.ident("`samples`")?;
        if samples_kw != "samples" {
            return Err(ParseError {
                pos: spos,
                message: format!("expected `samples`, found `{samples_kw}`"),
            });
        }
        let mut samples = Vec::new();
        loop {
            self.expect(Tok::LParen, "`(`")?;
            let mut vector = Vec::new();
            loop {
                vector.push(self.formula()?);
                match self.peek() {
                    Some(Tok::Comma) => {
                        self.advance();
                    }
                    Some(Tok::RParen) => {
                        self.advance();
                        break;
                    }
                    _ => return Err(self.error_here("`,` or `)`")),
                }
            }
            if vector.len() != params.len() {
                return Err(ParseError {
                    pos: spos,
                    message: format!(
                        "sample has {} formula(s), reduction binds {} parameter(s)",
                        vector.len(),
                        params.len()
                    ),
                });
            }
            samples.push(vector);
            match self.peek() {
                Some(Tok::Comma) => {
                    self.advance();
                }
                _ => break,
            }
        }
        self.expect(Tok::Define, "`:=`")?;
        self.metavars = params.clone();
        let body = self.proof_term();
        self.metavars.clear();
        Ok(ReductionItem {
            name,
            mode,
            hypotheses,
            target,
            params,
            samples,
            body: body?,
            pos,
        })
    }

    // ---- formulas ------------------------------------------------------

    pub fn formula(&mut self) -> Result<FormulaExpr, ParseError> {
        let left = self.or_level()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.advance();
            let right = self.formula()?;
            Ok(FormulaExpr::implies(left, right))
        } else {
            Ok(left)
        }
    }

    fn or_level(&mut self) -> Result<FormulaExpr, ParseError> {
        let left = self.and_level()?;
        if self.peek() == Some(&Tok::Or) {
            self.advance();
            let right = self.or_level()?;
            Ok(FormulaExpr::or(left, right))
        } else {
            Ok(left)
        }
    }

    fn and_level(&mut self) -> Result<FormulaExpr, ParseError> {
        let left = self.unary_formula()?;
        if self.peek() == Some(&Tok::And) {
            self.advance();
            let right = self.and_level()?;
            Ok(FormulaExpr::and(left, right))
        } else {
            Ok(left)
        }
    }

    fn unary_formula(&mut self) -> Result<FormulaExpr, ParseError> {
        match self.peek() {
            Some(Tok::Tilde) => {
                self.advance();
                let inner = self.unary_formula()?;
                Ok(FormulaExpr::negate(inner))
            }
            Some(Tok::Ident(name)) if name == "forall" || name == "exists" => {
                let universal = name == "forall";
                self.advance();
                let v = self.variable()?;
                let body = self.unary_formula()?;
                Ok(if universal {
                    FormulaExpr::forall(v, body)
                } else {
                    FormulaExpr::exists(v, body)
                })
            }
            _ => self.primary_formula(),
        }
    }

    fn primary_formula(&mut self) -> Result<FormulaExpr, ParseError> {
        match self.peek() {
            Some(Tok::LParen) => {
                self.advance();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Some(Tok::Ident(_)) => {
                let (name, pos) = self.ident("a formula")?;
                if name == "bot" {
                    return Ok(FormulaExpr::Done(Formula::bottom()));
                }
                if self.metavars.contains(&name) {
                    return Ok(FormulaExpr::Metavar(name));
                }
                if let Some(template) = self.schemes.get(&name).cloned() {
                    self.expect(Tok::LBracket, "`[`")?;
                    let mut args = Vec::new();
                    loop {
                        args.push(self.formula()?);
                        match self.peek() {
                            Some(Tok::Comma) => {
                                self.advance();
                            }
                            Some(Tok::RBracket) => {
                                self.advance();
                                break;
                            }
                            _ => return Err(self.error_here("`,` or `]`")),
                        }
                    }
                    if args.len() != template.params.len() {
                        return Err(ParseError {
                            pos,
                            message: format!(
                                "scheme `{name}` expects {} argument(s), got {}",
                                template.params.len(),
                                args.len()
                            ),
                        });
                    }
                    // collapse when fully concrete
                    if args.iter().all(|a| matches!(a, FormulaExpr::Done(_))) {
                        let concrete: Vec<Formula> = args
                            .iter()
                            .map(|a| match a {
                                FormulaExpr::Done(f) => f.clone(),
                                _ => unreachable!(),
                            })
                            .collect();
                        let f = template
                            .instantiate(&concrete)
                            .map_err(|message| ParseError { pos, message })?;
                        return Ok(FormulaExpr::Done(f));
                    }
                    return Ok(FormulaExpr::SchemeApp { name, args });
                }
                let Some(symbol) = self.table.relation(&name) else {
                    return Err(ParseError {
                        pos,
                        message: format!("unknown relation `{name}`"),
                    });
                };
                let mut args = Vec::new();
                for _ in 0..symbol.arity {
                    args.push(self.term()?);
                }
                let f = Formula::atom(symbol, args).map_err(|e| ParseError {
                    pos,
                    message: e.to_string(),
                })?;
                Ok(FormulaExpr::Done(f))
            }
            _ => Err(self.error_here("a formula")),
        }
    }

    fn variable(&mut self) -> Result<Variable, ParseError> {
        let (name, pos) = self.ident("a variable")?;
        variable_of_name(&name).ok_or(ParseError {
            pos,
            message: format!("`{name}` is not a variable (use x, y, z, or v<n>)"),
        })
    }

    pub fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some(Tok::LParen) => {
                self.advance();
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Some(Tok::Ident(_)) => {
                let (name, pos) = self.ident("a term")?;
                if let Some(v) = variable_of_name(&name) {
                    return Ok(Term::var(v));
                }
                let Some(symbol) = self.table.function(&name) else {
                    return Err(ParseError {
                        pos,
                        message: format!("unknown function `{name}`"),
                    });
                };
                let mut args = Vec::new();
                for _ in 0..symbol.arity {
                    args.push(self.term()?);
                }
                Term::func(symbol, args).map_err(|e| ParseError {
                    pos,
                    message: e.to_string(),
                })
            }
            _ => Err(self.error_here("a term")),
        }
    }

    // ---- proof terms ----------------------------------------------------

    fn proof_term(&mut self) -> Result<ProofExpr, ParseError> {
        if self.peek() == Some(&Tok::LParen) {
            self.advance();
            let p = self.proof_term()?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(p);
        }
        let (rule, pos) = self.ident("a deduction rule")?;
        match rule.as_str() {
            "assume" => Ok(ProofExpr::Assume(self.unary_formula()?)),
            "arrowintro" => Ok(ProofExpr::ArrowIntro(
                self.unary_formula()?,
                Box::new(self.proof_term()?),
            )),
            "arrowelim" => Ok(ProofExpr::ArrowElim(
                Box::new(self.proof_term()?),
                Box::new(self.proof_term()?),
            )),
            "conjintro" => Ok(ProofExpr::ConjIntro(
                Box::new(self.proof_term()?),
                Box::new(self.proof_term()?),
            )),
            "conjelim" => Ok(ProofExpr::ConjElim(
                Box::new(self.proof_term()?),
                Box::new(self.proof_term()?),
            )),
            "disjintro1" => Ok(ProofExpr::DisjIntro1(
                self.unary_formula()?,
                Box::new(self.proof_term()?),
            )),
            "disjintro2" => Ok(ProofExpr::DisjIntro2(
                self.unary_formula()?,
                Box::new(self.proof_term()?),
            )),
            "disjelim" => Ok(ProofExpr::DisjElim(
                Box::new(self.proof_term()?),
                Box::new(self.proof_term()?),
                Box::new(self.proof_term()?),
            )),
            "univintro" => Ok(ProofExpr::UnivIntro(
                self.variable()?,
                Box::new(self.proof_term()?),
            )),
            "univelim" => Ok(ProofExpr::UnivElim(
                self.term()?,
                Box::new(self.proof_term()?),
            )),
            "existintro" => Ok(ProofExpr::ExistIntro(
                self.unary_formula()?,
                self.term()?,
                Box::new(self.proof_term()?),
            )),
            "existelim" => Ok(ProofExpr::ExistElim(
                self.variable()?,
                Box::new(self.proof_term()?),
                Box::new(self.proof_term()?),
            )),
            "close" => {
                self.expect(Tok::LBrace, "`{`")?;
                let mut members = Vec::new();
                if self.peek() != Some(&Tok::RBrace) {
                    loop {
                        members.push(self.formula()?);
                        match self.peek() {
                            Some(Tok::Comma) => {
                                self.advance();
                            }
                            Some(Tok::RBrace) => break,
                            _ => return Err(self.error_here("`,` or `}`")),
                        }
                    }
                }
                self.expect(Tok::RBrace, "`}`")?;
                Ok(ProofExpr::Close(members, Box::new(self.proof_term()?)))
            }
            "cite" => {
                let (name, _) = self.ident("a proof or scheme name")?;
                let scheme_args = if self.peek() == Some(&Tok::LBracket) {
                    self.advance();
                    let mut args = Vec::new();
                    loop {
                        args.push(self.formula()?);
                        match self.peek() {
                            Some(Tok::Comma) => {
                                self.advance();
                            }
                            Some(Tok::RBracket) => {
                                self.advance();
                                break;
                            }
                            _ => return Err(self.error_here("`,` or `]`")),
                        }
                    }
                    Some(args)
                } else {
                    None
                };
                Ok(ProofExpr::Cite { name, scheme_args })
            }
            "botc" => Ok(ProofExpr::BotC(
                self.unary_formula()?,
                Box::new(self.proof_term()?),
            )),
            "boti" => Ok(ProofExpr::BotI(
                self.unary_formula()?,
                Box::new(self.proof_term()?),
            )),
            other => Err(ParseError {
                pos,
                message: format!("expected a deduction rule, found `{other}`"),
            }),
        }
    }
}
