//! Exact-arithmetic workbench for Tverberg partitions, their combinatorial
//! types, stair-convexity and the stretched grid.

pub mod cli;
pub mod combin;
pub mod convex;
pub mod error;
pub mod kernel;
pub mod predicate;
pub mod sequence;
pub mod stair;
pub mod stretched;
pub mod types;

pub use error::{Error, Result};
pub use kernel::{Point, Rational, Sign};
pub use sequence::PointSequence;
pub use types::{t_param, TverbergType, TypeEncoding};
