//! Gauge-fixed potentials of exact 2-form fields.
//!
//! Given an exact `rho_hat` and a metric field `g`, find the 1-form `lambda`
//! with `d lambda = rho_hat` of least `int lambda ^ *_g lambda`. Every
//! solution of `d lambda = rho_hat` has the form
//!
//! ```text
//! lambda = lambda0 + d phi + E z
//! ```
//!
//! where `lambda0` is the flat coexact potential (computed in Fourier
//! space), `phi` is a scalar field and `E z` spans the closed 1-forms that
//! are not exact on the lattice: constant 1-forms and the sign patterns
//! `(-1)^(i_a)` along axes whose derivative symbol vanishes at the Nyquist
//! frequency. Minimizing over `(phi, z)` is a symmetric positive
//! semidefinite problem, solved by preconditioned conjugate gradients. The
//! preconditioner inverts the problem for a constant multiple of the flat
//! metric, so near the flat case only a handful of iterations are needed.
//!
//! At the minimum `*_g lambda` is orthogonal to every closed 1-form, which
//! is the lattice form of "`*_g lambda` is exact".

use rayon::prelude::*;
use rustfft::num_complex::Complex;

use super::derivative::d;
use super::field::Field;
use super::grid::Grid;
use super::reduce::pairwise_sum_by;
use super::spectral::{fft4, ifft4_real};
use crate::error::{Error, Result};
use crate::exterior4::{Form1, Form2, LinMap4, Metric4, Vector4};
use crate::scalar::Real;

/// Relative CG residual at which the solve stops.
pub const CG_TOL: f64 = 1e-10;

/// Relative size of the non-exact part of `rho_hat` that is tolerated.
pub const EXACTNESS_TOL: f64 = 1e-10;

/// Potential with solver statistics.
#[derive(Clone, Debug)]
pub struct LeastNormSolution<T> {
    pub lambda: Field<Form1<T>>,
    pub iterations: usize,
    /// Final relative residual of the normal equations.
    pub residual: T,
}

/// Largest CG iteration count for grid `n`.
pub fn max_iterations(grid: Grid) -> usize {
    50 * grid.n()
}

fn wave_vector<T: Real>(grid: Grid, symbols: &[T], site: usize) -> [T; 4] {
    grid.coords(site).map(|m| symbols[m])
}

/// Relative size of the part of `rho_hat` outside the image of `d`.
pub fn exactness_residual<T: Real>(rho_hat: &Field<Form2<T>>) -> T {
    split_exact(rho_hat).1
}

/// The flat coexact potential `lambda0` (`d lambda0 = rho_hat`,
/// `d *lambda0 = 0`, zero means) and the relative non-exact residual.
fn split_exact<T: Real>(rho_hat: &Field<Form2<T>>) -> (Field<Form1<T>>, T) {
    let grid = rho_hat.grid();
    let symbols: Vec<T> = grid.symbols();
    let spectra: Vec<Vec<Complex<T>>> =
        rho_hat.components().iter().map(|c| fft4(grid, c)).collect();
    let zero = Complex::new(T::zero(), T::zero());
    let minus_i = Complex::new(T::zero(), -T::one());

    let per_site: Vec<(Form1<Complex<T>>, T, T)> = (0..grid.len())
        .into_par_iter()
        .map(|site| {
            let b = Form2(std::array::from_fn(|c| spectra[c][site]));
            let total = b.0.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr());
            let k = wave_vector(grid, &symbols, site);
            let k2 = k.iter().fold(T::zero(), |acc, &x| acc + x * x);
            if k2 == T::zero() {
                return (Form1([zero; 4]), total, total);
            }
            let kv = Vector4(k.map(|x| Complex::new(x, T::zero())));
            let kf = Form1(kv.0);
            let contracted = b
                .interior(&kv)
                .scale(Complex::new(T::one() / k2, T::zero()));
            let projected = kf.wedge1(&contracted);
            let miss = (b - projected)
                .0
                .iter()
                .fold(T::zero(), |acc, z| acc + z.norm_sqr());
            (contracted.scale(minus_i), total, miss)
        })
        .collect();

    let total = pairwise_sum_by(per_site.len(), |s| per_site[s].1);
    let miss = pairwise_sum_by(per_site.len(), |s| per_site[s].2);
    let residual = if total > T::zero() {
        (miss / total).sqrt()
    } else {
        T::zero()
    };
    let comps: Vec<Vec<T>> = (0..4)
        .map(|j| ifft4_real(grid, per_site.iter().map(|p| p.0 .0[j]).collect()))
        .collect();
    (Field::from_components(grid, &comps), residual)
}

/// Flat coexact potential of an exact field; `NotExact` otherwise.
pub fn coexact_potential<T: Real>(rho_hat: &Field<Form2<T>>) -> Result<Field<Form1<T>>> {
    let (lambda0, residual) = split_exact(rho_hat);
    if !(residual <= T::lit(EXACTNESS_TOL)) {
        return Err(Error::NotExact {
            residual: residual.as_f64(),
        });
    }
    Ok(lambda0)
}

/// The least-norm potential of an exact `rho_hat` for the metric field `g`.
pub fn least_norm_potential<T: Real>(
    rho_hat: &Field<Form2<T>>,
    metric: &Field<Metric4<T>>,
) -> Result<Field<Form1<T>>> {
    Ok(solve_least_norm(rho_hat, metric, T::lit(CG_TOL))?.lambda)
}

/// [`least_norm_potential`] with an explicit CG tolerance and statistics.
pub fn solve_least_norm<T: Real>(
    rho_hat: &Field<Form2<T>>,
    metric: &Field<Metric4<T>>,
    tol: T,
) -> Result<LeastNormSolution<T>> {
    let weights = metric.map(|g| g.inverse_matrix().scale(g.volume()));
    solve_weighted(rho_hat, &weights, tol)
}

/// Least-norm potential for the pointwise quadratic form `lambda^T W lambda`
/// on 1-forms (`W = vol_g g^{-1}` for a metric `g`).
pub fn solve_weighted<T: Real>(
    rho_hat: &Field<Form2<T>>,
    weights: &Field<LinMap4<T>>,
    tol: T,
) -> Result<LeastNormSolution<T>> {
    let grid = rho_hat.grid();
    let lambda0 = coexact_potential(rho_hat)?;
    let problem = GaugeProblem::new(grid, weights);

    // normal equations A x = b with b = -(D^T W lambda0, E^T W lambda0)
    let b = problem.adjoint(&problem.weight(&lambda0)).scale(-T::one());
    let b_norm = b.norm();
    if b_norm == T::zero() {
        return Ok(LeastNormSolution {
            lambda: lambda0,
            iterations: 0,
            residual: T::zero(),
        });
    }
    // Round-off floor: the operator cannot resolve residuals below a few
    // ulps of |A| |lambda0|.
    let floor = T::epsilon() * T::lit(64.0) * problem.operator_scale() * lambda0.l2_norm()
        / grid.cell_volume::<T>().sqrt();

    let max_iter = max_iterations(grid);
    let mut x = Unknown::zeros(grid.len());
    let mut r = b.clone();
    let mut z = problem.precondition(&r);
    let mut p = z.clone();
    let mut rz = r.dot(&z);
    let mut iterations = 0;
    let mut r_norm = r.norm();
    while r_norm > tol * b_norm && r_norm > floor {
        if iterations >= max_iter {
            return Err(Error::NoConvergence {
                iterations,
                residual: (r_norm / b_norm).as_f64(),
            });
        }
        iterations += 1;
        let ap = problem.apply(&p);
        let pap = p.dot(&ap);
        if !(pap > T::zero()) {
            // p lies in the null space: nothing left to minimize
            break;
        }
        let alpha = rz / pap;
        x.axpy(alpha, &p);
        r.axpy(-alpha, &ap);
        r_norm = r.norm();
        z = problem.precondition(&r);
        let rz_next = r.dot(&z);
        let beta = rz_next / rz;
        rz = rz_next;
        p = z.clone().axpy_into(beta, &p);
    }
    let lambda = lambda0.add(&problem.expand(&x));
    Ok(LeastNormSolution {
        lambda,
        iterations,
        residual: r_norm / b_norm,
    })
}

/// Coefficients of the gauge freedom: a scalar field and the 64 closed,
/// non-exact lattice 1-forms.
#[derive(Clone, Debug)]
struct Unknown<T> {
    phi: Vec<T>,
    z: Vec<T>,
}

const HARMONIC_DIM: usize = 64;

impl<T: Real> Unknown<T> {
    fn zeros(len: usize) -> Self {
        Unknown {
            phi: vec![T::zero(); len],
            z: vec![T::zero(); HARMONIC_DIM],
        }
    }

    fn dot(&self, other: &Self) -> T {
        pairwise_sum_by(self.phi.len(), |i| self.phi[i] * other.phi[i])
            + pairwise_sum_by(HARMONIC_DIM, |i| self.z[i] * other.z[i])
    }

    fn norm(&self) -> T {
        self.dot(self).sqrt()
    }

    fn scale(mut self, a: T) -> Self {
        self.phi.par_iter_mut().for_each(|v| *v *= a);
        self.z.iter_mut().for_each(|v| *v *= a);
        self
    }

    /// `self += a * other`.
    fn axpy(&mut self, a: T, other: &Self) {
        self.phi
            .par_iter_mut()
            .zip(&other.phi)
            .for_each(|(v, w)| *v += a * *w);
        self.z
            .iter_mut()
            .zip(&other.z)
            .for_each(|(v, w)| *v += a * *w);
    }

    /// `self + a * other`, consuming `self`.
    fn axpy_into(mut self, a: T, other: &Self) -> Self {
        self.axpy(a, other);
        self
    }
}

struct GaugeProblem<'a, T> {
    grid: Grid,
    weights: &'a Field<LinMap4<T>>,
    /// `chi_s(x) / sqrt(N)` for the 16 sign patterns `s`.
    patterns: Vec<Vec<T>>,
    /// Mean of `tr W / 4`, the flat metric the preconditioner inverts.
    mean_weight: T,
    /// `1 / (mean_weight |k|^2)` or zero on the null space of `d`.
    inverse_laplacian: Vec<T>,
}

impl<'a, T: Real> GaugeProblem<'a, T> {
    fn new(grid: Grid, weights: &'a Field<LinMap4<T>>) -> Self {
        let n = grid.n();
        let norm = T::one() / T::from_usize(grid.len()).expect("site count").sqrt();
        let patterns = (0..16usize)
            .map(|s| {
                (0..grid.len())
                    .map(|site| {
                        let i = grid.coords(site);
                        let odd = (0..4)
                            .filter(|&a| s >> a & 1 == 1)
                            .map(|a| i[a])
                            .sum::<usize>()
                            % 2;
                        if odd == 1 {
                            -norm
                        } else {
                            norm
                        }
                    })
                    .collect()
            })
            .collect();
        let w = weights.values();
        let quarter = T::lit(0.25);
        let mean_weight = pairwise_sum_by(w.len(), |s| {
            (0..4).fold(T::zero(), |acc, i| acc + w[s].0[i][i]) * quarter
        }) / T::from_usize(w.len()).expect("site count");
        let symbols: Vec<T> = grid.symbols();
        let inverse_laplacian = (0..grid.len())
            .map(|site| {
                let k2 = wave_vector(grid, &symbols, site)
                    .iter()
                    .fold(T::zero(), |acc, &x| acc + x * x);
                if k2 > T::zero() {
                    T::one() / (mean_weight * k2)
                } else {
                    T::zero()
                }
            })
            .collect();
        debug_assert!(n >= 4);
        GaugeProblem {
            grid,
            weights,
            patterns,
            mean_weight,
            inverse_laplacian,
        }
    }

    /// Upper bound for the operator norm, used for the round-off floor.
    fn operator_scale(&self) -> T {
        let w = self.weights.values();
        let wmax = (0..w.len()).fold(T::zero(), |m, s| m.max(w[s].max_abs()));
        let kmax = self
            .grid
            .symbols::<T>()
            .iter()
            .fold(T::zero(), |m, k| m.max(k.abs()));
        wmax * T::lit(4.0) * (kmax * kmax + T::one())
    }

    fn weight(&self, lambda: &Field<Form1<T>>) -> Field<Form1<T>> {
        lambda.zip_map(self.weights, |l, w| Form1(w.apply(&Vector4(l.0)).0))
    }

    /// `(phi, z) -> d phi + E z`.
    fn expand(&self, x: &Unknown<T>) -> Field<Form1<T>> {
        let phi = Field::new(self.grid, x.phi.clone()).expect("grid length");
        let dphi = d(&phi);
        Field::from_fn(self.grid, |site| {
            let mut l = dphi.at(site);
            for (s, pat) in self.patterns.iter().enumerate() {
                for j in 0..4 {
                    l.0[j] += x.z[4 * s + j] * pat[site];
                }
            }
            l
        })
    }

    /// Adjoint of [`Self::expand`] for the Euclidean sums.
    fn adjoint(&self, w: &Field<Form1<T>>) -> Unknown<T> {
        let comps = w.components();
        let mut phi = vec![T::zero(); self.grid.len()];
        for (axis, comp) in comps.iter().enumerate() {
            let p = super::spectral::partial(self.grid, comp, axis);
            phi.par_iter_mut().zip(&p).for_each(|(v, q)| *v -= *q);
        }
        let z = (0..HARMONIC_DIM)
            .map(|idx| {
                let (s, j) = (idx / 4, idx % 4);
                let pat = &self.patterns[s];
                pairwise_sum_by(self.grid.len(), |site| pat[site] * comps[j][site])
            })
            .collect();
        Unknown { phi, z }
    }

    fn apply(&self, x: &Unknown<T>) -> Unknown<T> {
        self.adjoint(&self.weight(&self.expand(x)))
    }

    fn precondition(&self, r: &Unknown<T>) -> Unknown<T> {
        let mut spectrum = fft4(self.grid, &r.phi);
        spectrum
            .par_iter_mut()
            .zip(&self.inverse_laplacian)
            .for_each(|(c, &w)| *c *= w);
        let phi = ifft4_real(self.grid, spectrum);
        let z = r.z.iter().map(|&v| v / self.mean_weight).collect();
        Unknown { phi, z }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sin_e1(grid: Grid) -> Field<Form1<f64>> {
        let tau = std::f64::consts::TAU;
        Field::from_fn(grid, |s| {
            Form1([0.0, (tau * grid.point::<f64>(s)[0]).sin(), 0.0, 0.0])
        })
    }

    #[test]
    fn zero_field_has_zero_potential() {
        let g = Grid::spectral(4).unwrap();
        let metric = Field::constant(g, Metric4::euclid());
        let lambda = least_norm_potential(&Field::<Form2<f64>>::zeros(g), &metric).unwrap();
        assert_eq!(lambda.sup_norm(), 0.0);
    }

    #[test]
    fn coexact_potential_is_recovered() {
        let g = Grid::spectral(8).unwrap();
        let metric = Field::constant(g, Metric4::euclid());
        let lambda = sin_e1(g);
        let sol = solve_least_norm(&d(&lambda), &metric, 1e-10).unwrap();
        assert!(sol.lambda.max_abs_diff(&lambda) < 1e-12);
        assert!(sol.iterations <= 1);
    }

    #[test]
    fn closed_but_constant_parts_are_not_exact() {
        let g = Grid::spectral(4).unwrap();
        let metric = Field::constant(g, Metric4::euclid());
        let w1 = Field::constant(g, Form2([1.0, 0.0, 0.0, 1.0, 0.0, 0.0]));
        assert!(matches!(
            least_norm_potential(&w1, &metric),
            Err(Error::NotExact { .. })
        ));
    }
}
