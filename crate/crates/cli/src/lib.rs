//! Proof-script front end: concrete syntax, parser, and batch runner
//! around the deduction kernel.

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod runner;
pub mod symbols;
