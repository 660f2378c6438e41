//! Constructions attached to a nondegenerate 2-form `rho` and a background
//! metric `g`: the volume ratio `u`, the endomorphism `A` with
//! `g(A., .) = rho`, the metric `g^rho`, the wedge reflection `R^rho`, the
//! Hodge stars of `g^rho`, and the pointwise `Theta` map with its derivative.

use super::forms::{Form1, Form2, Form3, LinMap4, Vector4};
use super::metric::Metric4;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Smallest admissible volume ratio `u`; forms with `u <= U_FLOOR` are
/// rejected as degenerate.
pub const U_FLOOR: f64 = 1e-10;

#[inline]
fn half<T: Real>() -> T {
    T::lit(0.5)
}

/// Fails with `DegenerateForm` unless `u > U_FLOOR` (NaN fails too).
#[inline]
pub fn check_admissible<T: Real>(u: T) -> Result<()> {
    if u > T::lit(U_FLOOR) {
        Ok(())
    } else {
        Err(Error::degenerate(u.as_f64()))
    }
}

/// `u = (rho ^ rho) / (2 dvol_g)`. May be `<= 0`.
#[inline]
pub fn u_of<T: Real>(rho: &Form2<T>, g: &Metric4<T>) -> T {
    rho.wedge(rho).0 * half() / g.volume()
}

/// The endomorphism `A` with `g(A v, w) = rho(v, w)`, i.e. `A = -G^{-1} P`
/// on column vectors where `P[i][j] = rho(e_i, e_j)`. Its determinant is `u^2`.
pub fn a_of<T: Real>(rho: &Form2<T>, g: &Metric4<T>) -> LinMap4<T> {
    g.inverse_matrix().mul(&rho.to_matrix()).scale(-T::one())
}

/// The metric `g^rho(v, w) = u^{-1} g(A v, A w)`; same volume form as `g`.
pub fn g_rho<T: Real>(rho: &Form2<T>, g: &Metric4<T>) -> Result<Metric4<T>> {
    let u = u_of(rho, g);
    check_admissible(u)?;
    let p = rho.to_matrix();
    // A^T G A = -P G^{-1} P
    let m = p.mul(&g.inverse_matrix()).mul(&p).scale(-T::one() / u);
    Metric4::new(m)
}

/// `R^rho omega = omega - (omega ^ rho / dvol_rho) rho` with `dvol_rho = rho^rho/2`.
pub fn r_rho<T: Real>(omega: &Form2<T>, rho: &Form2<T>) -> Result<Form2<T>> {
    let vol_rho = rho.wedge(rho).0 * half();
    if !(vol_rho.abs() > T::lit(U_FLOOR)) {
        return Err(Error::degenerate(vol_rho.as_f64()));
    }
    Ok(*omega - rho.scale(omega.wedge(rho).0 / vol_rho))
}

/// Hodge star of `g^rho` on 1-forms: `rho ^ *_g(rho ^ lambda) / u`.
pub fn star_rho_1<T: Real>(lambda: &Form1<T>, rho: &Form2<T>, g: &Metric4<T>) -> Result<Form3<T>> {
    let u = u_of(rho, g);
    check_admissible(u)?;
    let inner = g.hodge(&rho.wedge1(lambda));
    Ok(rho.wedge1(&inner).scale(T::one() / u))
}

/// Hodge star of `g^rho` on 2-forms: `R *_g R omega`.
pub fn star_rho_2<T: Real>(omega: &Form2<T>, rho: &Form2<T>, g: &Metric4<T>) -> Result<Form2<T>> {
    check_admissible(u_of(rho, g))?;
    let r = r_rho(omega, rho)?;
    r_rho(&g.hodge(&r), rho)
}

/// Hodge star of `g^rho` on 3-forms.
pub fn star_rho_3<T: Real>(gamma: &Form3<T>, rho: &Form2<T>, g: &Metric4<T>) -> Result<Form1<T>> {
    Ok(g_rho(rho, g)?.hodge(gamma))
}

/// Self-dual and anti-self-dual parts `((w + *w)/2, (w - *w)/2)`.
pub fn sd_split<T: Real>(omega: &Form2<T>, g: &Metric4<T>) -> (Form2<T>, Form2<T>) {
    let s = g.hodge(omega);
    ((*omega + s).scale(half()), (*omega - s).scale(half()))
}

/// `Theta^rho = *(rho/u) - |rho/u|^2 rho / 2`.
pub fn theta_point<T: Real>(rho: &Form2<T>, g: &Metric4<T>) -> Result<Form2<T>> {
    let star = g.hodge_star();
    let vol = star.volume();
    let u = rho.wedge(rho).0 * half() / vol;
    check_admissible(u)?;
    let s = star.apply2(rho);
    let norm_sq = rho.wedge(&s).0 / vol;
    let inv_u = T::one() / u;
    Ok(s.scale(inv_u) - rho.scale(half::<T>() * norm_sq * inv_u * inv_u))
}

/// Derivative of `theta_point` at `rho` in direction `rho_hat`:
/// `(rho_hat + *^rho rho_hat)/u - |rho^+/u|^2 rho_hat`.
pub fn theta_dot_point<T: Real>(
    rho: &Form2<T>,
    rho_hat: &Form2<T>,
    g: &Metric4<T>,
) -> Result<Form2<T>> {
    let star = g.hodge_star();
    let vol = star.volume();
    let vol_rho = rho.wedge(rho).0 * half();
    let u = vol_rho / vol;
    check_admissible(u)?;
    let plus = (*rho + star.apply2(rho)).scale(half());
    let plus_sq = plus.wedge(&plus).0 / vol;
    // *^rho rho_hat = R * R rho_hat
    let reflect = |w: &Form2<T>| *w - rho.scale(w.wedge(rho).0 / vol_rho);
    let star_rho = reflect(&star.apply2(&reflect(rho_hat)));
    let inv_u = T::one() / u;
    Ok((*rho_hat + star_rho).scale(inv_u) - rho_hat.scale(plus_sq * inv_u * inv_u))
}

/// `J^rho` defined by `rho(J^rho v, w) = rho(v, J w)`, i.e. `P^{-1} J^T P`.
pub fn j_rho<T: Real>(j: &LinMap4<T>, rho: &Form2<T>) -> Result<LinMap4<T>> {
    let pf = rho.wedge(rho).0 * half();
    if !(pf.abs() > T::lit(U_FLOOR)) {
        return Err(Error::degenerate(pf.as_f64()));
    }
    let p = rho.to_matrix();
    let p_inv = p.inverse().ok_or_else(|| Error::degenerate(pf.as_f64()))?;
    Ok(p_inv.mul(&j.transpose()).mul(&p))
}

/// The vector `X` with `iota(X) rho = lambda` (Hamiltonian vector field when
/// `lambda = dF`).
pub fn vector_from_interior<T: Real>(rho: &Form2<T>, lambda: &Form1<T>) -> Result<Vector4<T>> {
    let pf = rho.wedge(rho).0 * half();
    if !(pf.abs() > T::lit(U_FLOOR)) {
        return Err(Error::degenerate(pf.as_f64()));
    }
    // iota(X) rho = P^T X = -P X
    let p_inv = rho
        .to_matrix()
        .inverse()
        .ok_or_else(|| Error::degenerate(pf.as_f64()))?;
    Ok(p_inv.apply(&Vector4(lambda.0)).scale(-T::one()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w1() -> Form2<f64> {
        Form2([1.0, 0.0, 0.0, 1.0, 0.0, 0.0])
    }
    fn w2() -> Form2<f64> {
        Form2([0.0, 1.0, 0.0, 0.0, 1.0, 0.0])
    }
    fn close(a: &Form2<f64>, b: &Form2<f64>, tol: f64) -> bool {
        (*a - *b).max_abs() <= tol
    }

    #[test]
    fn u_and_a_for_standard_form() {
        let g = Metric4::euclid();
        assert_eq!(u_of(&w1(), &g), 1.0);
        let a = a_of(&w1(), &g);
        // A e0 = e1, A e1 = -e0, A e2 = e3, A e3 = -e2
        assert_eq!(a.apply(&Vector4::basis(0)), Vector4::basis(1));
        assert_eq!(a.apply(&Vector4::basis(1)), Vector4::basis(0).scale(-1.0));
        assert_eq!(a.apply(&Vector4::basis(2)), Vector4::basis(3));
        assert_eq!(a.det(), 1.0);
    }

    #[test]
    fn g_rho_examples() {
        let g = Metric4::euclid();
        assert!(g_rho(&w1(), &g).unwrap().max_diff(&g) == 0.0);
        let scaled = g_rho(&w1().scale(3.7), &g).unwrap();
        assert!(scaled.max_diff(&g) < 1e-15);
        let rho = Form2([1.0, 0.0, 0.0, 2.0, 0.0, 0.0]);
        let a = a_of(&rho, &g);
        assert_eq!(a.apply(&Vector4::basis(2)), Vector4::basis(3).scale(2.0));
        let gr = g_rho(&rho, &g).unwrap();
        assert!(gr.max_diff(&Metric4::diag([0.5, 0.5, 2.0, 2.0]).unwrap()) < 1e-15);
        assert!((gr.volume() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_forms_are_rejected() {
        let g = Metric4::euclid();
        let flat = Form2([1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(matches!(
            g_rho(&flat, &g),
            Err(Error::DegenerateForm { .. })
        ));
        assert!(matches!(
            r_rho(&w1(), &flat),
            Err(Error::DegenerateForm { .. })
        ));
        assert!(matches!(
            theta_point(&flat, &g),
            Err(Error::DegenerateForm { .. })
        ));
        let negative = Form2([1.0, 0.0, 0.0, -1.0, 0.0, 0.0]);
        assert!(matches!(
            theta_point(&negative, &g),
            Err(Error::DegenerateForm { .. })
        ));
    }

    #[test]
    fn reflection_examples() {
        assert_eq!(r_rho(&w1(), &w1()).unwrap(), -w1());
        assert_eq!(r_rho(&w2(), &w1()).unwrap(), w2());
        let rho = Form2([1.5, 0.0, 0.0, 0.5, 0.0, 0.0]);
        let om = Form2([0.3, -0.7, 1.1, 0.2, 0.9, -0.4]);
        let twice = r_rho(&r_rho(&om, &rho).unwrap(), &rho).unwrap();
        assert!(close(&twice, &om, 1e-13));
    }

    #[test]
    fn star_rho_at_compatible_form_is_euclidean() {
        let g = Metric4::euclid();
        let om = Form2([0.3, -0.7, 1.1, 0.2, 0.9, -0.4]);
        assert!(close(
            &star_rho_2(&om, &w1(), &g).unwrap(),
            &om.euclid_star(),
            1e-15
        ));
    }

    #[test]
    fn self_dual_split_examples() {
        let g = Metric4::euclid();
        let (p, m) = sd_split(&w1(), &g);
        assert_eq!((p, m), (w1(), Form2::zero()));
        let rho = Form2([1.5, 0.0, 0.0, 0.5, 0.0, 0.0]);
        let (p, m) = sd_split(&rho, &g);
        assert_eq!(p, w1());
        assert_eq!(m, Form2([0.5, 0.0, 0.0, -0.5, 0.0, 0.0]));
        assert_eq!(p.norm_sq() - m.norm_sq(), 2.0 * u_of(&rho, &g));
    }

    #[test]
    fn theta_examples() {
        let g = Metric4::euclid();
        assert_eq!(theta_point(&w1(), &g).unwrap(), Form2::zero());
        let rho = Form2([1.5, 0.0, 0.0, 0.5, 0.0, 0.0]);
        let th = theta_point(&rho, &g).unwrap();
        // -(|rho-|^2 rho+ + |rho+|^2 rho-)/u^2 with rho+ = w1, rho- = (w1 - *w1)/4
        let expect = Form2([-8.0 / 3.0, 0.0, 0.0, 8.0 / 9.0, 0.0, 0.0]);
        assert!(close(&th, &expect, 1e-14), "{th:?}");
        assert!(th.wedge(&rho).0.abs() < 1e-14);
        assert!((th.wedge(&th).0 + 128.0 / 27.0).abs() < 1e-13);
    }

    #[test]
    fn theta_dot_at_standard_form() {
        let g = Metric4::euclid();
        let hat = Form2([0.3, -0.7, 1.1, 0.2, 0.9, -0.4]);
        let td = theta_dot_point(&w1(), &hat, &g).unwrap();
        let (_, minus) = sd_split(&hat, &g);
        assert!(close(&td, &minus.scale(-2.0), 1e-15));
        assert_eq!(theta_dot_point(&w1(), &w2(), &g).unwrap(), Form2::zero());
    }
}
