//! Probing the Hessian quadratic form of a state along random exact
//! directions.

use serde::{Deserialize, Serialize};

use super::functional::{check_field_admissible, hessian_form, Field1, Field2};
use super::initial::random_potential;
use crate::error::Result;
use crate::lattice::{d, integrate_scalar, Field, Scheme};
use crate::scalar::Real;

/// The Hessian along one direction `rho_hat = d mu`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HessianSample {
    pub index: usize,
    pub hessian: f64,
    /// `int |rho_hat|^2 dvol` for the flat metric.
    pub l2_sq: f64,
    /// `hessian / l2_sq`; equal to 1 at the flat minimum.
    pub quotient: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HessianProbe {
    pub n: usize,
    pub scheme: Scheme,
    pub seed: u64,
    pub kmax: usize,
    pub samples: Vec<HessianSample>,
    pub min_quotient: f64,
    pub max_quotient: f64,
}

/// `int |rho_hat|^2 dvol` for the flat metric.
pub fn flat_l2_sq<T: Real>(rho_hat: &Field2<T>) -> T {
    integrate_scalar(&rho_hat.map(|h| h.norm_sq()))
}

/// Evaluates the Hessian at `rho` along `directions` random exact forms
/// `d mu`, with `mu` the normalized random potential of seed `seed + i`
/// and band limit `kmax`. Fails with `DegenerateForm` unless `rho` is
/// admissible everywhere.
pub fn hessian_probe(
    rho: &Field2<f64>,
    seed: u64,
    directions: usize,
    kmax: usize,
) -> Result<HessianProbe> {
    check_field_admissible(rho)?;
    let grid = rho.grid();
    let samples = (0..directions)
        .map(|index| {
            let mu: Field1<f64> = random_potential(grid, seed.wrapping_add(index as u64), kmax);
            let hat: Field<_> = d(&mu);
            let hessian = hessian_form(rho, &hat)?;
            let l2_sq = flat_l2_sq(&hat);
            Ok(HessianSample {
                index,
                hessian,
                l2_sq,
                quotient: hessian / l2_sq,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let min_quotient = samples
        .iter()
        .map(|s| s.quotient)
        .fold(f64::INFINITY, f64::min);
    let max_quotient = samples
        .iter()
        .map(|s| s.quotient)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(HessianProbe {
        n: grid.n(),
        scheme: grid.scheme(),
        seed,
        kmax,
        samples,
        min_quotient,
        max_quotient,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::omega1;
    use crate::lattice::Grid;

    #[test]
    fn quotients_are_one_at_the_minimum() {
        let g = Grid::spectral(8).unwrap();
        let w1 = Field::constant(g, omega1::<f64>());
        let probe = hessian_probe(&w1, 3, 5, 2).unwrap();
        assert_eq!(probe.samples.len(), 5);
        for s in &probe.samples {
            assert!((s.quotient - 1.0).abs() < 1e-10, "{s:?}");
        }
    }

    #[test]
    fn degenerate_state_is_rejected() {
        let g = Grid::spectral(4).unwrap();
        let zero = Field::constant(g, crate::exterior4::Form2::<f64>::zero());
        assert!(matches!(
            hessian_probe(&zero, 0, 1, 1),
            Err(crate::Error::DegenerateForm { .. })
        ));
    }
}
