//! The energy functional on closed 2-form fields in a fixed class, its
//! gradient for the Donaldson metric, and its Hessian.
//!
//! The background metric is the flat metric of the unit torus, so
//! `dvol = e0^e1^e2^e3` and `Vol(M) = 1`.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exterior4::{
    check_admissible, g_rho, sd_split, star_rho_1, theta_dot_point, theta_point, u_of, Form1,
    Form2, Form4, Metric4,
};
use crate::lattice::{d, integrate, least_norm_potential, reduce, Field};
use crate::scalar::Real;

/// Volume of the unit four-torus.
pub const VOLUME: f64 = 1.0;

pub type Field1<T> = Field<Form1<T>>;
pub type Field2<T> = Field<Form2<T>>;

/// Volume ratio `u = rho^rho / (2 dvol)` at every site.
pub fn u_field<T: Real>(rho: &Field2<T>) -> Field<T> {
    let g = Metric4::euclid();
    rho.map(|r| u_of(r, &g))
}

/// Smallest volume ratio over the grid (NaN if any site is NaN).
pub fn u_min<T: Real>(rho: &Field2<T>) -> T {
    let g = Metric4::euclid();
    let v = rho.values();
    reduce::min_by(v.len(), |s| u_of(&v[s], &g))
}

/// Fails with `DegenerateForm` at the first site with `u <= U_FLOOR`.
pub fn check_field_admissible<T: Real>(rho: &Field2<T>) -> Result<()> {
    let g = Metric4::euclid();
    rho.try_map(|r| check_admissible(u_of(r, &g))).map(|_| ())
}

/// The pointwise excess `|rho^-|^2 / u` of the energy density over `2 dvol`;
/// by `|rho^+|^2 - |rho^-|^2 = 2u` the density `|rho^+|^2 / u` equals
/// `2 + |rho^-|^2 / u`.
fn excess_density<T: Real>(rho: &Form2<T>, g: &Metric4<T>) -> Result<T> {
    let u = u_of(rho, g);
    check_admissible(u)?;
    let (_, minus) = sd_split(rho, g);
    Ok(minus.norm_sq() / u)
}

/// `E(rho) - 2 Vol(M) = int |rho^-|^2 / u dvol`, computed without
/// cancellation.
pub fn energy_excess<T: Real>(rho: &Field2<T>) -> Result<T> {
    let g = Metric4::euclid();
    let density = rho.try_map(|r| excess_density(r, &g))?;
    Ok(crate::lattice::integrate_scalar(&density))
}

/// `E(rho) = int 2 |rho^+|^2 / (|rho^+|^2 - |rho^-|^2) dvol`.
pub fn energy<T: Real>(rho: &Field2<T>) -> Result<T> {
    Ok(T::lit(2.0 * VOLUME) + energy_excess(rho)?)
}

/// `Theta^rho` at every site.
pub fn theta_field<T: Real>(rho: &Field2<T>) -> Result<Field2<T>> {
    let g = Metric4::euclid();
    rho.try_map(|r| theta_point(r, &g))
}

/// The metric `g^rho` at every site.
pub fn rho_metric_field<T: Real>(rho: &Field2<T>) -> Result<Field<Metric4<T>>> {
    let g = Metric4::euclid();
    rho.try_map(|r| g_rho(r, &g))
}

/// Right-hand side of the flow, `d *^rho d Theta^rho`; minus the gradient of
/// the energy for the Donaldson metric. Always exact.
pub fn rhs<T: Real>(rho: &Field2<T>) -> Result<Field2<T>> {
    let d_theta = d(&theta_field(rho)?);
    let g = Metric4::euclid();
    let starred = rho.try_zip_map(&d_theta, |r, gamma| Ok(g_rho(r, &g)?.hodge(gamma)))?;
    Ok(d(&starred))
}

/// `grad E(rho) = -d *^rho d Theta^rho`.
pub fn gradient<T: Real>(rho: &Field2<T>) -> Result<Field2<T>> {
    Ok(rhs(rho)?.scale(-T::one()))
}

/// `int_M a ^ b` for two 2-form fields.
pub fn integrate_wedge<T: Real>(a: &Field2<T>, b: &Field2<T>) -> T {
    integrate(&a.zip_map(b, |x, y| x.wedge(y)))
}

/// `dE(rho) rho_hat = int Theta^rho ^ rho_hat`.
pub fn first_variation<T: Real>(rho: &Field2<T>, rho_hat: &Field2<T>) -> Result<T> {
    Ok(integrate_wedge(&theta_field(rho)?, rho_hat))
}

/// `int lambda1 ^ *^rho lambda2` for 1-form fields.
pub fn potential_inner<T: Real>(rho: &Field2<T>, l1: &Field1<T>, l2: &Field1<T>) -> Result<T> {
    let g = Metric4::euclid();
    let density = rho.try_zip_map(&l1.zip_map(l2, |a, b| (*a, *b)), |r, (a, b)| {
        let star = star_rho_1(b, r, &g)?;
        Ok::<Form4<T>, _>(a.wedge3(&star))
    })?;
    Ok(integrate(&density))
}

/// Donaldson inner product of exact fields: `int lambda1 ^ *^rho lambda2`
/// with the gauge-fixed potentials `d lambda_i = rho_hat_i`.
pub fn donaldson_inner<T: Real>(rho: &Field2<T>, a: &Field2<T>, b: &Field2<T>) -> Result<T> {
    let metric = rho_metric_field(rho)?;
    let la = least_norm_potential(a, &metric)?;
    let lb = least_norm_potential(b, &metric)?;
    potential_inner(rho, &la, &lb)
}

/// Donaldson norm squared of an exact field `rho_hat` at `rho`.
pub fn donaldson_norm_sq<T: Real>(rho_hat: &Field2<T>, rho: &Field2<T>) -> Result<T> {
    let metric = rho_metric_field(rho)?;
    let l = least_norm_potential(rho_hat, &metric)?;
    potential_inner(rho, &l, &l)
}

/// `Theta-hat`, the derivative of `Theta` at `rho` in direction `rho_hat`.
pub fn theta_dot_field<T: Real>(rho: &Field2<T>, rho_hat: &Field2<T>) -> Result<Field2<T>> {
    let g = Metric4::euclid();
    rho.try_zip_map(rho_hat, |r, h| theta_dot_point(r, h, &g))
}

/// Hessian quadratic form `H_rho(rho_hat) = int Theta-hat ^ rho_hat`.
pub fn hessian_form<T: Real>(rho: &Field2<T>, rho_hat: &Field2<T>) -> Result<T> {
    Ok(integrate_wedge(&theta_dot_field(rho, rho_hat)?, rho_hat))
}

/// The bilinear form `int Theta-hat(a) ^ b` behind [`hessian_form`].
pub fn hessian_bilinear<T: Real>(rho: &Field2<T>, a: &Field2<T>, b: &Field2<T>) -> Result<T> {
    Ok(integrate_wedge(&theta_dot_field(rho, a)?, b))
}

/// Energy together with the `L^1` bound `|rho|_{L^1} <= sqrt(c (E - Vol))`,
/// `c = int rho ^ rho`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport<T> {
    pub energy: T,
    /// `E - 2 Vol(M)`, computed without cancellation.
    pub excess: T,
    pub l1_norm: T,
    pub l1_bound: T,
    /// `int rho ^ rho`.
    pub c: T,
}

impl<T: Real> EnergyReport<T> {
    /// Whether the `L^1` bound holds up to round-off (`1e-10` relative).
    pub fn bound_holds(&self) -> bool {
        self.l1_norm <= self.l1_bound + T::lit(1e-10) * self.l1_bound.max(T::one())
    }
}

pub fn l1_report<T: Real>(rho: &Field2<T>) -> Result<EnergyReport<T>> {
    let excess = energy_excess(rho)?;
    let energy = T::lit(2.0 * VOLUME) + excess;
    let l1_norm = crate::lattice::integrate_scalar(&rho.map(|r| r.norm_sq().sqrt()));
    let c = integrate(&rho.map(|r| r.wedge(r)));
    // E - Vol = Vol + excess
    let l1_bound = (c * (T::lit(VOLUME) + excess)).max(T::zero()).sqrt();
    Ok(EnergyReport {
        energy,
        excess,
        l1_norm,
        l1_bound,
        c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Grid;

    fn w1() -> Form2<f64> {
        Form2([1.0, 0.0, 0.0, 1.0, 0.0, 0.0])
    }

    #[test]
    fn energy_examples() {
        let g = Grid::spectral(4).unwrap();
        assert_eq!(energy(&Field::constant(g, w1())).unwrap(), 2.0);
        assert_eq!(energy(&Field::constant(g, w1().scale(3.0))).unwrap(), 2.0);
        let rho = Field::constant(g, Form2([1.5, 0.0, 0.0, 0.5, 0.0, 0.0]));
        assert!((energy(&rho).unwrap() - 8.0f64 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn degenerate_site_is_reported() {
        let g = Grid::spectral(4).unwrap();
        let mut rho = Field::constant(g, w1());
        rho.values_mut()[37] = Form2([1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        match energy(&rho) {
            Err(crate::Error::DegenerateForm { site, .. }) => assert_eq!(site, Some(37)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn constant_fields_are_stationary() {
        let g = Grid::spectral(4).unwrap();
        assert_eq!(rhs(&Field::constant(g, w1())).unwrap().sup_norm(), 0.0);
        let rho = Field::constant(g, Form2([1.5, 0.2, 0.0, 0.5, 0.1, 0.0]));
        assert_eq!(rhs(&rho).unwrap().sup_norm(), 0.0);
    }

    #[test]
    fn l1_report_examples() {
        let g = Grid::spectral(4).unwrap();
        let r = l1_report(&Field::constant(g, w1())).unwrap();
        assert!((r.l1_norm - 2f64.sqrt()).abs() < 1e-14);
        assert!((r.l1_bound - 2f64.sqrt()).abs() < 1e-14);
        assert!(r.bound_holds());
        let r = l1_report(&Field::constant(g, Form2([1.5, 0.0, 0.0, 0.5, 0.0, 0.0]))).unwrap();
        assert!((r.l1_norm - 2.5f64.sqrt()).abs() < 1e-14);
        // c = 1.5; Cauchy-Schwarz is an equality for every constant field
        assert!((r.c - 1.5).abs() < 1e-15);
        assert!((r.l1_bound - 2.5f64.sqrt()).abs() < 1e-14);
        assert!(r.bound_holds());
    }
}
