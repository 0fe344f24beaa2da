//! Column generation and branch-and-price for graph coloring.
//!
//! The master problem is the set-covering LP over maximal independent sets;
//! columns are priced by a learned sampling heuristic, greedy search, an ant
//! colony, or an exact branch-and-bound for the maximum weight independent
//! set problem.

mod bitset;
pub mod cli;
pub mod error;
pub mod graph;
pub mod lp;
pub mod mlmodel;
pub mod pricing;
pub mod colgen;
pub mod bnp;

pub use error::{Error, Result};
pub use graph::{Graph, VertexSet};
pub use lp::{Column, DualSolution, RmpState};
