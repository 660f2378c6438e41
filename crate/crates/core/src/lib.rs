//! Numerical kernels for the Donaldson geometric flow of symplectic forms on
//! the flat four-torus.
//!
//! * [`exterior4`]: pointwise exterior algebra and the metrics `g^rho`.
//! * [`lattice`]: periodic form fields, discrete exterior derivative,
//!   quadrature and the gauge-fixed potential solver.
//! * [`flow`]: energy, gradient, Donaldson metric, Hessian and the time
//!   integrator.
//! * [`hyperkahler`]: the flat hyperKähler structure and the alternative
//!   formulas used as independent cross-checks.
//! * [`checks`]: randomized identity suites with JSON reports.
//!
//! Everything numerical is generic over [`Real`] (`f32`/`f64`); the
//! metric-free algebra also works over exact [`Ring`] types. The aliases
//! below fix the scalar to `f64`.

// Index loops mirror the component formulas; negated comparisons reject NaN.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod checks;
pub mod error;
pub mod exterior4;
pub mod flow;
pub mod hyperkahler;
pub mod lattice;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Real, Ring};

pub type Vector4f = exterior4::Vector4<f64>;
pub type Form1f = exterior4::Form1<f64>;
pub type Form2f = exterior4::Form2<f64>;
pub type Form3f = exterior4::Form3<f64>;
pub type Form4f = exterior4::Form4<f64>;
pub type LinMap4f = exterior4::LinMap4<f64>;
pub type Metric4f = exterior4::Metric4<f64>;
pub type Grid = lattice::Grid;
pub type Field0f = lattice::Field<f64>;
pub type Field1f = lattice::Field<exterior4::Form1<f64>>;
pub type Field2f = lattice::Field<exterior4::Form2<f64>>;
pub type Field3f = lattice::Field<exterior4::Form3<f64>>;
pub type Field4f = lattice::Field<exterior4::Form4<f64>>;
pub type VectorFieldf = lattice::Field<exterior4::Vector4<f64>>;
pub type FlowStatef = flow::FlowState<f64>;
