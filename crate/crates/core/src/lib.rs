//! A proof-object library and trusted checker for first-order natural
//! deduction over minimal, intuitionistic, and classical logic.
//!
//! Proofs are explicit trees ([`kernel::Proof`]). The checker recomputes
//! every side condition (variable freedom, capture-avoidance, context
//! inclusion) with decision procedures, so witnesses carried inside proof
//! objects are hints for serialization, never trust roots. On top of the
//! kernel sit axiom schemes with derivability reductions ([`schemes`]),
//! bound-variable renaming as a derived transformation ([`equivalence`]),
//! and LaTeX rendering of checked proofs ([`texify`]).

pub mod binding;
pub mod context;
pub mod equivalence;
pub mod kernel;
pub mod schemes;
pub mod substitution;
pub mod syntax;
pub mod texify;
