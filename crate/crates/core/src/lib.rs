//! Exact partition functions of the inhomogeneous rational six-vertex model
//! with rank-1 boundary twists.

pub mod boundary;
pub mod error;
pub mod izergin;
pub mod lattice;
pub mod linalg;
pub mod linsys;
pub mod oracles;
pub mod partition;
pub mod scalar;

pub use error::{Error, Result};
pub use linalg::Matrix;
pub use scalar::{Field, ParamSet, Scalar, Vec2};
