//! The Hessian of the energy in terms of the hyperKähler functions, and the
//! five-term ledger `A + B + C + D = 2E` relating its two expressions.
//!
//! A perturbation is given by a potential `mu`, `rho_hat = d mu`, and moves
//! along the vector field `X` with `iota(X) rho = -mu`, so that
//! `-d iota(X) rho = rho_hat`. The connection is the flat one: covariant
//! derivatives are coordinate derivatives of vector components.
//!
//! Brackets follow the sign convention `[Y, X] = -L_Y X = nabla_X Y -
//! nabla_Y X`, so that `omega(X, [Y, X]) dvol_rho =
//! -(iota(X) omega) ^ iota(L_Y X) dvol_rho`.

use serde::{Deserialize, Serialize};

use super::structure::{u_and_k, HKTriple, KFunctions};
use crate::error::Result;
use crate::exterior4::{vector_from_interior, Form1, Form2, LinMap4, Vector4};
use crate::flow::{Field1, Field2};
use crate::lattice::{d, integrate_scalar, spectral::partial, Field};
use crate::scalar::Real;

pub type VectorField<T> = Field<Vector4<T>>;

/// Jacobian `m[a][b] = d X^a / d x_b` of a vector field, so that the flat
/// covariant derivative is `nabla_Y X = m Y`.
pub fn jacobian<T: Real>(x: &VectorField<T>) -> Field<LinMap4<T>> {
    let grid = x.grid();
    let partials: Vec<[Vec<T>; 4]> = (0..4)
        .map(|a| std::array::from_fn(|b| partial(grid, &x.component(a), b)))
        .collect();
    Field::from_fn(grid, |s| {
        LinMap4(std::array::from_fn(|a| {
            std::array::from_fn(|b| partials[a][b][s])
        }))
    })
}

/// `nabla_Y X` for the flat connection.
pub fn covariant_derivative<T: Real>(y: &VectorField<T>, x: &VectorField<T>) -> VectorField<T> {
    jacobian(x).zip_map(y, |m, y| m.apply(y))
}

/// The vector field `X` with `iota(X) rho = lambda` at every site.
pub fn vector_field<T: Real>(rho: &Field2<T>, lambda: &Field1<T>) -> Result<VectorField<T>> {
    rho.try_zip_map(lambda, vector_from_interior)
}

/// Every field entering the Hessian identities for `rho` and
/// `rho_hat = d mu`.
#[derive(Clone, Debug)]
pub struct HessianFields<T> {
    pub rho_hat: Field2<T>,
    /// `X` with `iota(X) rho = -mu`.
    pub x: VectorField<T>,
    pub u: Field<T>,
    pub k: KFunctions<T>,
    /// Hamiltonian vector fields `iota(X_{K_i}) rho = dK_i`.
    pub x_k: [VectorField<T>; 3],
    /// `K-hat_i = (omega_i - K_i rho) ^ rho_hat / dvol_rho`.
    pub k_hat: [Field<T>; 3],
    /// `H-hat_i = (d iota(X) omega_i) ^ rho / dvol_rho`.
    pub h_hat: [Field<T>; 3],
    /// `L_X K_i = dK_i(X)`.
    pub lie_x_k: [Field<T>; 3],
}

/// `K-hat_i` for a given `rho_hat` (no potential needed).
pub fn k_hat<T: Real>(rho: &Field2<T>, rho_hat: &Field2<T>) -> Result<[Field<T>; 3]> {
    let hk = HKTriple::<T>::standard();
    let (u, k) = u_and_k(rho)?;
    Ok(std::array::from_fn(|i| {
        let omega = hk.omegas[i];
        let om_rho = rho.zip_map(&k.k[i], |r, ki| omega - r.scale(*ki));
        om_rho
            .zip_map(rho_hat, |w, h| w.wedge(h).0)
            .zip_map(&u, |c, u| *c / *u)
    }))
}

/// Computes `K-hat`, `H-hat`, `X`, `X_{K_i}` and `L_X K_i` for
/// `rho_hat = d mu`.
pub fn khat_hhat<T: Real>(rho: &Field2<T>, mu: &Field1<T>) -> Result<HessianFields<T>> {
    let hk = HKTriple::<T>::standard();
    let rho_hat = d(mu);
    let (u, k) = u_and_k(rho)?;
    let x = vector_field(rho, &mu.scale(-T::one()))?;
    let dk: [Field1<T>; 3] = std::array::from_fn(|i| d(&k.k[i]));
    let x_k = [
        vector_field(rho, &dk[0])?,
        vector_field(rho, &dk[1])?,
        vector_field(rho, &dk[2])?,
    ];
    let k_hat = k_hat(rho, &rho_hat)?;
    let h_hat = std::array::from_fn(|i| {
        let omega = hk.omegas[i];
        let d_iota = d(&x.map(|v| omega.interior(v)));
        d_iota
            .zip_map(rho, |a, r| a.wedge(r).0)
            .zip_map(&u, |c, u| *c / *u)
    });
    let lie_x_k = std::array::from_fn(|i| dk[i].zip_map(&x, |l, v| l.eval(v)));
    Ok(HessianFields {
        rho_hat,
        x,
        u,
        k,
        x_k,
        k_hat,
        h_hat,
        lie_x_k,
    })
}

/// `H_rho(rho_hat) = int sum_i (K-hat_i^2 dvol_rho - K_i^2 rho_hat ^ rho_hat / 2)`.
pub fn hessian_hk<T: Real>(rho: &Field2<T>, rho_hat: &Field2<T>) -> Result<T> {
    let (u, k) = u_and_k(rho)?;
    let k_hat = k_hat(rho, rho_hat)?;
    let hat_sq = rho_hat.map(|h| h.wedge(h).0);
    let mut total = T::zero();
    for i in 0..3 {
        let density = k_hat[i].zip_map(&u, |kh, u| *kh * *kh * *u).zip_map(
            &k.k[i].zip_map(&hat_sq, |ki, q| T::lit(0.5) * *ki * *ki * *q),
            |a, b| *a - *b,
        );
        total += integrate_scalar(&density);
    }
    Ok(total)
}

/// `int sum_i omega_i(X, Y_i) dvol_rho` for vector fields `Y_i`.
fn omega_pairing<T: Real>(f: &HessianFields<T>, y: &[VectorField<T>; 3]) -> T {
    let hk = HKTriple::<T>::standard();
    let mut total = T::zero();
    for i in 0..3 {
        let omega = hk.omegas[i];
        let density =
            f.x.zip_map(&y[i], |x, y| omega.eval(x, y))
                .zip_map(&f.u, |p, u| *p * *u);
        total += integrate_scalar(&density);
    }
    total
}

fn sum_integral<T: Real>(u: &Field<T>, a: &[Field<T>; 3], b: &[Field<T>; 3]) -> T {
    (0..3).fold(T::zero(), |acc, i| {
        acc + integrate_scalar(
            &a[i]
                .zip_map(&b[i], |p, q| *p * *q)
                .zip_map(u, |v, u| *v * *u),
        )
    })
}

/// The critical-point form of the Hessian,
/// `int sum_i (H-hat_i^2 + omega_i(X, nabla_{X_{K_i}} X)) dvol_rho`.
pub fn hessian_hk3<T: Real>(rho: &Field2<T>, mu: &Field1<T>) -> Result<T> {
    let f = khat_hhat(rho, mu)?;
    let nabla: [VectorField<T>; 3] = std::array::from_fn(|i| covariant_derivative(&f.x_k[i], &f.x));
    Ok(sum_integral(&f.u, &f.h_hat, &f.h_hat) + omega_pairing(&f, &nabla))
}

/// The terms of the ledger `A + B + C + D = 2E` and both sides of the
/// covariant Hessian identity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HessianLedger<T> {
    /// `-(1/2) int sum K_i^2 rho_hat ^ rho_hat`.
    pub a: T,
    /// `int sum (iota(X_{K_i}) omega_i) ^ (iota(X) rho) ^ rho_hat`.
    pub b: T,
    /// `int sum omega_i(X, [X_{K_i}, X]) dvol_rho` with
    /// `[X_{K_i}, X] = nabla_X X_{K_i} - nabla_{X_{K_i}} X`.
    pub c: T,
    /// `int sum (L_X K_i)^2 dvol_rho`.
    pub d: T,
    /// `int sum H-hat_i L_X K_i dvol_rho`.
    pub e: T,
    /// `|A + B + C + D - 2E|`.
    pub residual: T,
    /// `residual / (|A| + |B| + |C| + |D| + 2|E|)`, zero when all terms vanish.
    pub rel_residual: T,
    /// `int sum (H-hat_i^2 + omega_i(X, nabla_{X_{K_i}} X)) dvol_rho`.
    pub lhs: T,
    /// `int sum (K-hat_i^2 dvol_rho - K_i^2 rho_hat^2 / 2) + B
    ///  + int sum omega_i(X, nabla_X X_{K_i}) dvol_rho`.
    pub rhs: T,
}

/// Evaluates the ledger for `rho` and `rho_hat = d mu` by quadrature, with
/// brackets and covariant derivatives from the grid's derivative scheme.
pub fn hessiancov_check<T: Real>(rho: &Field2<T>, mu: &Field1<T>) -> Result<HessianLedger<T>> {
    let hk = HKTriple::<T>::standard();
    let f = khat_hhat(rho, mu)?;
    let half = T::lit(0.5);

    let hat_sq = f.rho_hat.map(|h| h.wedge(h).0);
    let k_sq = f.k.sum_sq();
    let a = -half * integrate_scalar(&k_sq.zip_map(&hat_sq, |k, q| *k * *q));

    let iota_x_rho: Field1<T> = f.x.zip_map(rho, |x, r| r.interior(x));
    let mut b = T::zero();
    for i in 0..3 {
        let omega = hk.omegas[i];
        let one = f.x_k[i].map(|v| omega.interior(v));
        let two: Field2<T> = one.zip_map(&iota_x_rho, |p: &Form1<T>, q| p.wedge1(q));
        b += integrate_scalar(&two.zip_map(&f.rho_hat, |p: &Form2<T>, h| p.wedge(h).0));
    }

    let jx = jacobian(&f.x);
    let nabla_xk_x: [VectorField<T>; 3] =
        std::array::from_fn(|i| jx.zip_map(&f.x_k[i], |m, y| m.apply(y)));
    let nabla_x_xk: [VectorField<T>; 3] =
        std::array::from_fn(|i| covariant_derivative(&f.x, &f.x_k[i]));
    let bracket: [VectorField<T>; 3] =
        std::array::from_fn(|i| nabla_x_xk[i].zip_map(&nabla_xk_x[i], |p, q| *p - *q));
    let c = omega_pairing(&f, &bracket);
    let d_term = sum_integral(&f.u, &f.lie_x_k, &f.lie_x_k);
    let e = sum_integral(&f.u, &f.h_hat, &f.lie_x_k);

    let two = T::lit(2.0);
    let residual = (a + b + c + d_term - two * e).abs();
    let scale = a.abs() + b.abs() + c.abs() + d_term.abs() + two * e.abs();
    let rel_residual = if scale > T::zero() {
        residual / scale
    } else {
        T::zero()
    };

    let lhs = sum_integral(&f.u, &f.h_hat, &f.h_hat) + omega_pairing(&f, &nabla_xk_x);
    let rhs = sum_integral(&f.u, &f.k_hat, &f.k_hat) + a + b + omega_pairing(&f, &nabla_x_xk);
    Ok(HessianLedger {
        a,
        b,
        c,
        d: d_term,
        e,
        residual,
        rel_residual,
        lhs,
        rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::hessian_form;
    use crate::lattice::Grid;

    fn sin_potential(g: Grid) -> Field1<f64> {
        Field::from_fn(g, |s| {
            let x = g.point::<f64>(s);
            Form1([0.0, (std::f64::consts::TAU * x[0]).sin(), 0.0, 0.0])
        })
    }

    #[test]
    fn minimum_examples() {
        let g = Grid::spectral(8).unwrap();
        let w1 = Field::constant(g, HKTriple::<f64>::standard().omegas[0]);
        let mu = sin_potential(g);
        let rho_hat = d(&mu);
        let two_pi_sq = 2.0 * std::f64::consts::PI.powi(2);
        assert!((hessian_hk(&w1, &rho_hat).unwrap() - two_pi_sq).abs() < 1e-12);
        assert!((hessian_form(&w1, &rho_hat).unwrap() - two_pi_sq).abs() < 1e-12);
        assert!((hessian_hk3(&w1, &mu).unwrap() - two_pi_sq).abs() < 1e-12);
        assert_eq!(hessian_hk(&w1, &Field::zeros(g)).unwrap(), 0.0);

        let f = khat_hhat(&w1, &mu).unwrap();
        for i in 0..3 {
            assert!(f.k_hat[i].max_abs_diff(&f.h_hat[i]) < 1e-12);
        }
        let ledger = hessiancov_check(&w1, &mu).unwrap();
        assert!(ledger.residual < 1e-10);
        assert_eq!((ledger.c, ledger.d, ledger.e), (0.0, 0.0, 0.0));
        let zero = hessiancov_check(&w1, &Field::zeros(g)).unwrap();
        assert_eq!([zero.a, zero.b, zero.c, zero.d, zero.e], [0.0; 5]);
    }
}
