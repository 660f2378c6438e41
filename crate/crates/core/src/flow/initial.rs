//! Initial data `rho0 = omega1 + eps d lambda` in the class of `omega1`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::functional::{u_min, Field1, Field2};
use crate::error::{Error, Result};
use crate::exterior4::{Form1, Form2};
use crate::lattice::{d, Field, Grid};
use crate::scalar::Real;

/// Initial data is accepted once `u_min` exceeds this value.
pub const U_MIN_INITIAL: f64 = 0.5;

/// Largest number of amplitude halvings before giving up.
const MAX_HALVINGS: usize = 60;

/// The standard symplectic form `omega1 = e0^e1 + e2^e3`.
pub fn omega1<T: Real>() -> Form2<T> {
    Form2([
        T::one(),
        T::zero(),
        T::zero(),
        T::one(),
        T::zero(),
        T::zero(),
    ])
}

/// Random real trigonometric polynomial 1-form with all frequencies
/// `0 < |k|_inf <= kmax`, coefficients uniform in `[-1, 1]` drawn from a
/// ChaCha8 stream seeded by `seed`, scaled to sup norm 1.
pub fn random_potential<T: Real>(grid: Grid, seed: u64, kmax: usize) -> Field1<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = kmax as i64;
    let mut modes: Vec<([f64; 4], [f64; 4], [f64; 4])> = Vec::new();
    for k0 in -k..=k {
        for k1 in -k..=k {
            for k2 in -k..=k {
                for k3 in -k..=k {
                    let kv = [k0, k1, k2, k3];
                    // one representative of each pair +-k
                    match kv.iter().find(|&&c| c != 0) {
                        Some(&c) if c > 0 => {}
                        _ => continue,
                    }
                    let a = std::array::from_fn(|_| rng.random_range(-1.0..=1.0));
                    let b = std::array::from_fn(|_| rng.random_range(-1.0..=1.0));
                    modes.push((kv.map(|c| c as f64 * std::f64::consts::TAU), a, b));
                }
            }
        }
    }
    let raw: Field1<f64> = Field::from_fn(grid, |site| {
        let x = grid.point::<f64>(site);
        let mut l = [0.0; 4];
        for (kv, a, b) in &modes {
            let phase = kv[0] * x[0] + kv[1] * x[1] + kv[2] * x[2] + kv[3] * x[3];
            let (s, c) = phase.sin_cos();
            for j in 0..4 {
                l[j] += a[j] * c + b[j] * s;
            }
        }
        Form1(l)
    });
    let sup = raw.sup_norm();
    let scale = if sup > 0.0 { 1.0 / sup } else { 0.0 };
    raw.map(|l| Form1(l.0.map(|c| T::lit(c * scale))))
}

/// `omega1 + eps d lambda` with `lambda` from [`random_potential`]. The
/// amplitude is halved until `u_min > 0.5`; returns the field and the
/// amplitude used.
pub fn initial_rho<T: Real>(
    grid: Grid,
    seed: u64,
    epsilon: f64,
    kmax: usize,
) -> Result<(Field2<T>, f64)> {
    let base = Field::constant(grid, omega1::<T>());
    if epsilon == 0.0 {
        return Ok((base, 0.0));
    }
    let d_lambda = d(&random_potential::<T>(grid, seed, kmax));
    let mut eps = epsilon;
    for _ in 0..MAX_HALVINGS {
        let rho = base.axpy(T::lit(eps), &d_lambda);
        if u_min(&rho) > T::lit(U_MIN_INITIAL) {
            return Ok((rho, eps));
        }
        eps *= 0.5;
    }
    Err(Error::Config(format!(
        "no admissible amplitude found starting from epsilon = {epsilon}"
    )))
}
