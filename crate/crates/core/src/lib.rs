#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod brownian_sim;
pub mod entropy_bound;
pub mod error;
pub mod funcs;
pub mod grid;
pub mod grw;
pub mod model_manifold;
pub mod parabolicity;
pub mod quadrature;
pub mod rng;

pub use error::{Error, Result};
pub use funcs::{hubble, log_second_derivative, Interval, Jet2, ScalarFunction};
pub use model_manifold::{BallGeometry, ModelManifold, RicciRange};
