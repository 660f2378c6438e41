//! The flat hyperKähler triple on the torus, the functions
//! `K_i = omega_i ^ rho / dvol_rho`, and the energy, `Theta` and gradient
//! expressed through them.

use crate::error::Result;
use crate::exterior4::{check_admissible, j_rho, standard_triple, Form1, Form2, LinMap4, Metric4};
use crate::flow::Field2;
use crate::lattice::{d, integrate_scalar, reduce, Field};
use crate::scalar::{Real, Ring};

/// Constant symplectic forms `omega_1, omega_2, omega_3` and complex
/// structures `J_1, J_2, J_3` of the flat metric; `J_i` is left
/// multiplication by `i, j, k` on `H = R^4`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HKTriple<T> {
    pub omegas: [Form2<T>; 3],
    pub js: [LinMap4<T>; 3],
}

impl<T: Ring> HKTriple<T> {
    /// `omega_i = e0^e_i + e_j^e_k` for cyclic `(i, j, k)`.
    pub fn standard() -> Self {
        let (omegas, js) = standard_triple();
        HKTriple { omegas, js }
    }

    /// The coefficients of `omega_i ^ omega_j`; equal to `2 delta_ij`.
    pub fn wedge_gram(&self) -> [[T; 3]; 3] {
        std::array::from_fn(|i| std::array::from_fn(|j| self.omegas[i].wedge(&self.omegas[j]).0))
    }

    /// Whether the triple is a hyperKähler structure of the Euclidean metric
    /// with the standard volume form, checked exactly: `omega_i ^ omega_j =
    /// 2 delta_ij dvol`, each `omega_i` self-dual, `J_i^2 = -1`,
    /// `J_1 J_2 = J_3` (and cyclic), `omega_i(., J_i .) = <., .>`.
    pub fn is_exact_hyperkahler(&self) -> bool
    where
        T: PartialEq,
    {
        let two = T::one() + T::one();
        let gram_ok = (0..3).all(|i| {
            (0..3).all(|j| self.wedge_gram()[i][j] == if i == j { two } else { T::zero() })
        });
        let sd_ok = self.omegas.iter().all(|w| w.euclid_star() == *w);
        let minus_one = LinMap4::identity().scale(-T::one());
        let square_ok = self.js.iter().all(|j| j.mul(j) == minus_one);
        let cyclic_ok =
            (0..3).all(|i| self.js[i].mul(&self.js[(i + 1) % 3]) == self.js[(i + 2) % 3]);
        // omega_i(v, J_i w) = v^T P_i J_i w
        let compatible =
            (0..3).all(|i| self.omegas[i].to_matrix().mul(&self.js[i]) == LinMap4::identity());
        gram_ok && sd_ok && square_ok && cyclic_ok && compatible
    }
}

/// The three functions `K_i` on the grid.
#[derive(Clone, Debug, PartialEq)]
pub struct KFunctions<T> {
    pub k: [Field<T>; 3],
}

impl<T: Real> KFunctions<T> {
    /// `max - min` of each `K_i` over the grid.
    pub fn variation(&self) -> [T; 3] {
        std::array::from_fn(|i| {
            let v = self.k[i].values();
            reduce::max_by(v.len(), |s| v[s]) - reduce::min_by(v.len(), |s| v[s])
        })
    }

    /// `sum_i K_i^2` at every site.
    pub fn sum_sq(&self) -> Field<T> {
        let [a, b, c] = &self.k;
        a.zip_map(b, |x, y| *x * *x + *y * *y)
            .zip_map(c, |s, z| *s + *z * *z)
    }
}

/// `(u, K_1, K_2, K_3)` at one point, `K_i = (omega_i ^ rho) / (u dvol)`.
pub fn k_point<T: Real>(rho: &Form2<T>) -> Result<(T, [T; 3])> {
    let hk = HKTriple::<T>::standard();
    let u = rho.wedge(rho).0 * T::lit(0.5);
    check_admissible(u)?;
    Ok((u, std::array::from_fn(|i| hk.omegas[i].wedge(rho).0 / u)))
}

/// `Theta^rho = sum_i (K_i omega_i - K_i^2 rho / 2)` at one point.
pub fn theta_hk_point<T: Real>(rho: &Form2<T>) -> Result<Form2<T>> {
    let hk = HKTriple::<T>::standard();
    let (_, k) = k_point(rho)?;
    let mut out = Form2::zero();
    for i in 0..3 {
        out = out + hk.omegas[i].scale(k[i]) - rho.scale(T::lit(0.5) * k[i] * k[i]);
    }
    Ok(out)
}

fn split<T: Real>(f: &Field<(T, [T; 3])>) -> (Field<T>, KFunctions<T>) {
    let u = f.map(|p| p.0);
    let k = std::array::from_fn(|i| f.map(|p| p.1[i]));
    (u, KFunctions { k })
}

/// The volume ratio `u` and the functions `K_i` of a field.
pub fn u_and_k<T: Real>(rho: &Field2<T>) -> Result<(Field<T>, KFunctions<T>)> {
    Ok(split(&rho.try_map(k_point)?))
}

pub fn k_functions<T: Real>(rho: &Field2<T>) -> Result<KFunctions<T>> {
    Ok(u_and_k(rho)?.1)
}

/// `E(rho) = (1/2) int sum_i K_i^2 dvol_rho`.
pub fn energy_hk<T: Real>(rho: &Field2<T>) -> Result<T> {
    let (u, k) = u_and_k(rho)?;
    let density = k.sum_sq().zip_map(&u, |s, u| T::lit(0.5) * *s * *u);
    Ok(integrate_scalar(&density))
}

pub fn theta_hk<T: Real>(rho: &Field2<T>) -> Result<Field2<T>> {
    rho.try_map(theta_hk_point)
}

/// `J_i^rho` at every site for `i = 1, 2, 3`.
pub fn j_rho_fields<T: Real>(rho: &Field2<T>) -> Result<[Field<LinMap4<T>>; 3]> {
    let hk = HKTriple::<T>::standard();
    let all = rho.try_map(|r| {
        check_admissible(r.wedge(r).0 * T::lit(0.5))?;
        Ok([
            j_rho(&hk.js[0], r)?,
            j_rho(&hk.js[1], r)?,
            j_rho(&hk.js[2], r)?,
        ])
    })?;
    Ok(std::array::from_fn(|i| all.map(|js| js[i])))
}

/// The 1-form `sum_i dK_i o J_i^rho`.
pub fn hk_one_form<T: Real>(rho: &Field2<T>) -> Result<Field<Form1<T>>> {
    let k = k_functions(rho)?;
    let js = j_rho_fields(rho)?;
    let mut sum = Field::<Form1<T>>::zeros(rho.grid());
    for i in 0..3 {
        let dk = d(&k.k[i]);
        sum = sum.add(&dk.zip_map(&js[i], |l, j| l.compose(j)));
    }
    Ok(sum)
}

/// `grad E(rho) = sum_i d(dK_i o J_i^rho)`.
pub fn grad_hk<T: Real>(rho: &Field2<T>) -> Result<Field2<T>> {
    Ok(d(&hk_one_form(rho)?))
}

/// `*^rho sum_i dK_i o J_i^rho`, which equals `d Theta^rho`.
pub fn d_theta_hk<T: Real>(rho: &Field2<T>) -> Result<Field<crate::exterior4::Form3<T>>> {
    let g = Metric4::euclid();
    let lambda = hk_one_form(rho)?;
    rho.try_zip_map(&lambda, |r, l| crate::exterior4::star_rho_1(l, r, &g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::{energy, theta_field};
    use crate::lattice::Grid;
    use num_rational::Rational64;

    #[test]
    fn standard_triple_is_exact_over_integers_and_rationals() {
        assert!(HKTriple::<i64>::standard().is_exact_hyperkahler());
        assert!(HKTriple::<Rational64>::standard().is_exact_hyperkahler());
        let mut broken = HKTriple::<i64>::standard();
        broken.js.swap(0, 1);
        assert!(!broken.is_exact_hyperkahler());
    }

    #[test]
    fn k_examples() {
        let hk = HKTriple::<f64>::standard();
        assert_eq!(k_point(&hk.omegas[0]).unwrap().1, [2.0, 0.0, 0.0]);
        assert_eq!(k_point(&hk.omegas[1]).unwrap().1, [0.0, 2.0, 0.0]);
        let (u, k) = k_point(&Form2([1.5f64, 0.0, 0.0, 0.5, 0.0, 0.0])).unwrap();
        assert_eq!(u, 0.75);
        assert!((k[0] - 8.0 / 3.0).abs() < 1e-15);
        assert_eq!((k[1], k[2]), (0.0, 0.0));
        // 2 |rho^+|^2 = u^2 sum K_i^2
        assert!((u * u * k[0] * k[0] - 4.0).abs() < 1e-14);
    }

    #[test]
    fn constant_field_energy_and_theta() {
        let g = Grid::spectral(4).unwrap();
        let rho = Field::constant(g, Form2([1.5f64, 0.0, 0.0, 0.5, 0.0, 0.0]));
        assert!((energy_hk(&rho).unwrap() - 8.0 / 3.0).abs() < 1e-14);
        assert!((energy_hk(&rho).unwrap() - energy(&rho).unwrap()).abs() < 1e-14);
        let diff = theta_hk(&rho)
            .unwrap()
            .max_abs_diff(&theta_field(&rho).unwrap());
        assert!(diff < 1e-14);
        let w1 = Field::constant(g, HKTriple::<f64>::standard().omegas[0]);
        assert_eq!(energy_hk(&w1).unwrap(), 2.0);
        assert_eq!(theta_hk(&w1).unwrap().sup_norm(), 0.0);
        assert_eq!(grad_hk(&w1).unwrap().sup_norm(), 0.0);
    }

    #[test]
    fn k_variation_vanishes_only_for_constant_k() {
        let g = Grid::spectral(4).unwrap();
        let w1 = Field::constant(g, HKTriple::<f64>::standard().omegas[0]);
        assert_eq!(k_functions(&w1).unwrap().variation(), [0.0; 3]);
    }
}
