//! Exact invariant calculus for cyclic Kähler orbifolds and Seifert bundles.

#![allow(clippy::needless_range_loop)]

pub mod arith;
pub mod constructions;
pub mod dynkin;
pub mod group;
pub mod hj;
pub mod lattice;
pub mod obstruction;
pub mod orbifold;
pub mod scenario;
pub mod seifert;
pub mod smale_barden;
pub mod surface;
