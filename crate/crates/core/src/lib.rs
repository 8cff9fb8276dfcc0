//! Hausdorff metric on finite sets and their hyperspaces, contraction gauges
//! and their checkers, and a constructive fixed-point solver for set-valued
//! maps `T: X -> CB(X)` satisfying `H(Tx, Ty) <= alpha(d(x, y)) d(x, y)`.
//!
//! All computations run in one of two numeric modes: [`Exact`] (exact real
//! arithmetic) or `f64`. See [`numeric`].

pub mod cli;
pub mod corpus;
pub mod error;
pub mod exact;
pub mod gauge;
pub mod hausdorff;
mod kdtree;
pub mod map;
pub mod metric;
pub mod numeric;
pub mod problem;
pub mod set;
pub mod solver;

pub use error::{Error, Result};
pub use exact::Exact;
pub use gauge::{Gauge, GaugeRule};
pub use hausdorff::{directed_hausdorff, hausdorff, hausdorff_accelerated, hyperspace_distance};
pub use map::SetValuedMap;
pub use metric::{distance, point_to_set_distance, Coords, DistanceTable, Metric, Point};
pub use numeric::{NumericMode, Scalar};
pub use set::FiniteSet;
pub use solver::{iterate, IterationTrace, Outcome};
