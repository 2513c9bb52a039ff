//! Core calculus, type checker, erasure to λ□ and the λ□ evaluator.

pub mod ast;
pub mod boxir;
pub mod check;
pub mod dearg;
pub mod erasure;
pub mod eval;
pub mod surface;
pub mod transforms;
