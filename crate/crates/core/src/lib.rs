//! Certified bipartitioning of C4-free graphs under minimum-degree demands.
//!
//! Given a C4-free graph `G` and demands `a, b ≥ 2` with
//! `d_G(x) ≥ a(x) + b(x) - 1`, [`solver::solve`] returns a partition `(A, B)`
//! where every vertex of `A` has at least `a(x)` neighbors in `A` and every
//! vertex of `B` at least `b(x)` in `B`. Inputs that break the hypotheses get
//! a checkable certificate instead: the violating vertex or a 4-cycle.

pub mod cli;
pub mod constructions;
pub mod degeneracy;
pub mod error;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod solver;

pub use degeneracy::DemandFn;
pub use error::{Error, Result};
pub use graph::{FourCycle, Graph, VertexSet};
pub use solver::{solve, Certificate};
