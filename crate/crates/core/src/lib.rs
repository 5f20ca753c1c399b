//! Invariant Riemannian and Randers geometry on Lie groups described by
//! structure constants.
//!
//! A left-invariant metric is an inner product on the Lie algebra, and every
//! left-invariant quantity (connection, curvature, parallel fields, Randers
//! fundamental tensor, flag curvature) reduces to finite-dimensional linear
//! algebra on that inner product and the bracket. Computations run either in
//! exact rational arithmetic or in `f64`, chosen by the [`Engine`].

pub mod algebra;
pub mod catalog;
pub mod error;
pub mod geometry;
pub mod hypercomplex;
pub mod linalg;
pub mod randers;
pub mod report;
pub mod sample;
pub mod scalar;

pub use algebra::{LieAlgebra, Vector};
pub use error::{Error, Result};
pub use geometry::{Connection, CurvatureOperator, InnerProduct};
pub use randers::{Flag, RandersMetric};
pub use report::ValidationReport;
pub use scalar::{Engine, Mode, Scalar};
