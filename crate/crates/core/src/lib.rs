//! Exact and multi-precision experiments with reversible birational maps that
//! are chaotic (positive algebraic entropy) and yet explicitly solvable.

pub mod arithmetic;
pub mod degree_growth;
pub mod elliptic;
pub mod finite_field_stats;
pub mod maps;
pub mod solvability;
