//! Combinatorics-on-words toolkit: abelian and subword complexity, letter
//! frequencies, abelian induction, decoloring substitutions and rotation codings.

pub mod complexity;
pub mod decoloring;
pub mod exact;
pub mod frequency;
pub mod harness;
pub mod induction;
pub mod linalg;
pub mod rotation;
pub mod words;
