//! Periodic fields on the unit four-torus `R^4 / Z^4`: the discrete exterior
//! derivative, quadrature, cohomology coordinates, gauge-fixed potentials
//! and snapshot files.

pub mod derivative;
pub mod field;
pub mod grid;
pub mod potential;
pub mod reduce;
pub mod snapshot;
pub mod spectral;

pub use derivative::{
    cohomology, d, integrate, integrate_scalar, CohomologyClass2, ExteriorDerivative,
};
pub use field::Field;
pub use grid::{Grid, Scheme};
pub use potential::{
    coexact_potential, exactness_residual, least_norm_potential, solve_least_norm, solve_weighted,
    LeastNormSolution, CG_TOL, EXACTNESS_TOL,
};
pub use snapshot::{read_snapshot, write_snapshot, SnapshotHeader};
pub use spectral::dealias;

use crate::exterior4::Form2;
use crate::scalar::Real;

/// Applies the 2/3-rule truncation to every component of a 2-form field.
pub fn dealias_form2<T: Real>(rho: &Field<Form2<T>>) -> Field<Form2<T>> {
    let grid = rho.grid();
    let comps: Vec<Vec<T>> = rho.components().iter().map(|c| dealias(grid, c)).collect();
    Field::from_components(grid, &comps)
}
