//! Low-rank tensor completion and tensor robust PCA under the t-SVD, with
//! SCAD/MCP non-convex surrogates solved by majorization-minimization.

pub mod algebra;
pub mod error;
pub mod experiment;
pub mod io;
pub mod metrics;
pub mod operators;
pub mod penalties;
pub mod random;
pub mod solvers;
pub mod spectral;
pub mod synth;
pub mod tensor;
pub mod tsvd;

pub use error::{Error, Result};
pub use tensor::{DenseTensor3, ObservationMask};
