//! Monte Carlo laboratory for singular-value statistics of random matrices:
//! entry laws and lazy transforms, matrix ensembles, dense spectral kernels,
//! essential-LCD arithmetic, small-ball estimators, integer boxes, and the
//! named reproducible experiments tying them together.

pub mod anticoncentration;
pub mod arithmetic;
pub mod distributions;
pub mod ensembles;
pub mod experiments;
pub mod linalg;
pub mod mat;
pub mod nets;
pub mod report;
pub mod rng;
pub mod scalar;
pub mod spectral;
pub mod stats;

pub use scalar::Real;

/// Concrete aliases for the default instantiation used by the experiments.
pub type Mat64 = mat::Mat<f64>;
pub type Mat32 = mat::Mat<f32>;
pub type CMat64 = mat::Mat<num_complex::Complex<f64>>;
pub type CMat32 = mat::Mat<num_complex::Complex<f32>>;
