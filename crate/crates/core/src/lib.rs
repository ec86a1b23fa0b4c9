//! Solvency cones for markets with proportional transaction costs.
//!
//! A price matrix `Π` (entry `π_ij` = units of asset `i` paid for one unit of
//! asset `j`) induces the solvency cone `K_d = cone{π_ij e^i − e^j}` and its
//! dual `K_d^+ = {y : π_ij y_i ≥ y_j}`. The extreme directions of the dual are
//! exactly the vectors generated by a spanning tree of a complete bipartite
//! digraph `G(P, N)` that stay feasible on every arc of `P × N`. This crate
//! enumerates them, extracts individual ones for a prescribed tree degree
//! vector, and cross-checks everything with independent exact oracles.
//!
//! All arithmetic is exact ([`num_rational::BigRational`]). Indices are
//! 0-based in the API and 1-based in every external file format.

pub mod algorithm;
pub mod bipartite;
pub mod dual_cone;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod prices;
pub mod rational;
pub mod special_case;

pub use error::{Error, Result};
pub use num_rational::BigRational;
