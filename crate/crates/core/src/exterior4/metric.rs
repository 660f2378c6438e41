//! Inner products on the tangent space and their Hodge star operators.
//!
//! The general star is built from its defining identity
//! `alpha ^ *beta = <alpha, beta>_g dvol_g`: the induced inner product on
//! k-forms (k x k minors of the inverse metric) composed with the inverse
//! of the wedge pairing, which in the stored bases is a signed permutation.
//! The Euclidean metric takes a table fast path.

use super::forms::{Form1, Form2, Form3, Form4, LinMap4, Vector4};
use super::signs::BASIS3;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Symmetric positive definite inner product; orientation `e0^e1^e2^e3 > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Metric4<T> {
    matrix: LinMap4<T>,
    /// `G^{-1}` and `sqrt(det G)`, from the Cholesky factorization.
    inverse: LinMap4<T>,
    volume: T,
    euclidean: bool,
}

impl<T: Real> Metric4<T> {
    /// Validates symmetry (relative tolerance `1e-12`) and positive
    /// definiteness (by Cholesky factorization). The stored matrix is the
    /// symmetric part of the input.
    pub fn new(m: LinMap4<T>) -> Result<Self> {
        if !m.0.iter().flatten().all(|x| x.is_finite()) {
            return Err(Error::NonPositiveMetric);
        }
        let scale = m.max_abs();
        let tol = T::lit(1e-12) * scale;
        let mut s = m;
        for i in 0..4 {
            for j in (i + 1)..4 {
                if (m.0[i][j] - m.0[j][i]).abs() > tol {
                    return Err(Error::NonPositiveMetric);
                }
                let avg = (m.0[i][j] + m.0[j][i]) * T::lit(0.5);
                s.0[i][j] = avg;
                s.0[j][i] = avg;
            }
        }
        let l = cholesky(&s).ok_or(Error::NonPositiveMetric)?;
        let volume = (0..4).fold(T::one(), |p, i| p * l[i][i]);
        let euclidean = s == LinMap4::identity();
        Ok(Metric4 {
            matrix: s,
            inverse: cholesky_inverse(&l),
            volume,
            euclidean,
        })
    }

    pub fn euclid() -> Self {
        Metric4 {
            matrix: LinMap4::identity(),
            inverse: LinMap4::identity(),
            volume: T::one(),
            euclidean: true,
        }
    }

    pub fn diag(d: [T; 4]) -> Result<Self> {
        Self::new(LinMap4::from_diag(d))
    }

    pub fn matrix(&self) -> &LinMap4<T> {
        &self.matrix
    }

    pub fn is_euclidean(&self) -> bool {
        self.euclidean
    }

    /// `det G`, from the Cholesky factor; stable for ill-conditioned metrics
    /// where cofactor expansion cancels.
    pub fn det(&self) -> T {
        self.volume * self.volume
    }

    /// Coefficient of `dvol_g` on `e0^e1^e2^e3`.
    pub fn volume(&self) -> T {
        self.volume
    }

    pub fn dvol(&self) -> Form4<T> {
        Form4(self.volume())
    }

    pub fn inverse_matrix(&self) -> LinMap4<T> {
        self.inverse
    }

    /// `g(v, w)`.
    pub fn inner(&self, v: &Vector4<T>, w: &Vector4<T>) -> T {
        self.matrix.bilinear(v, w)
    }

    /// The covector `g(v, .)`.
    pub fn flat(&self, v: &Vector4<T>) -> Form1<T> {
        let g = self.matrix.apply(v);
        Form1(g.0)
    }

    /// The vector `v` with `g(v, .) = lambda`.
    pub fn sharp(&self, lambda: &Form1<T>) -> Vector4<T> {
        self.inverse_matrix().apply(&Vector4(lambda.0))
    }

    /// Precomputes the Hodge star matrices of this metric.
    pub fn hodge_star(&self) -> HodgeStar<T> {
        if self.euclidean {
            return HodgeStar::euclid();
        }
        let gi = self.inverse_matrix().0;
        let vol = self.volume();

        // Induced inner products on 1-, 2- and 3-forms.
        let gram1 = gi;
        let mut gram2 = [[T::zero(); 6]; 6];
        for (a, &[i, j]) in super::signs::BASIS2.iter().enumerate() {
            for (b, &[k, l]) in super::signs::BASIS2.iter().enumerate() {
                gram2[a][b] = gi[i][k] * gi[j][l] - gi[i][l] * gi[j][k];
            }
        }
        let mut gram3 = [[T::zero(); 4]; 4];
        for (a, ra) in BASIS3.iter().enumerate() {
            for (b, cb) in BASIS3.iter().enumerate() {
                let sub: [[T; 3]; 3] =
                    std::array::from_fn(|p| std::array::from_fn(|q| gi[ra[p]][cb[q]]));
                gram3[a][b] = det3(&sub);
            }
        }

        // Inverse wedge pairings: e_i ^ c_i = s_i dvol with s = (1,-1,1,-1),
        // c_b ^ e_b = -s_b dvol, b_a ^ b_{a+3} = dvol.
        let s = [T::one(), -T::one(), T::one(), -T::one()];
        let one: [[T; 4]; 4] =
            std::array::from_fn(|i| std::array::from_fn(|j| s[i] * vol * gram1[i][j]));
        let three: [[T; 4]; 4] =
            std::array::from_fn(|i| std::array::from_fn(|j| -s[i] * vol * gram3[i][j]));
        let two: [[T; 6]; 6] =
            std::array::from_fn(|a| std::array::from_fn(|b| vol * gram2[(a + 3) % 6][b]));
        HodgeStar {
            vol,
            one,
            two,
            three,
            euclidean: false,
        }
    }

    /// `<alpha, beta>_g` for 2-forms.
    pub fn inner2(&self, alpha: &Form2<T>, beta: &Form2<T>) -> T {
        let star = self.hodge_star();
        alpha.wedge(&star.apply2(beta)).0 / self.volume()
    }

    /// `|alpha|_g^2` for 2-forms.
    pub fn norm2_sq(&self, alpha: &Form2<T>) -> T {
        if self.euclidean {
            alpha.norm_sq()
        } else {
            self.inner2(alpha, alpha)
        }
    }

    /// Hodge star of a form of any degree.
    pub fn hodge<F: HodgeDual<T>>(&self, xi: &F) -> F::Output {
        xi.hodge_with(&self.hodge_star())
    }

    /// Largest entrywise deviation of the matrices.
    pub fn max_diff(&self, other: &Self) -> T {
        self.matrix.max_diff(&other.matrix)
    }
}

fn det3<T: Real>(m: &[[T; 3]; 3]) -> T {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Lower-triangular `L` with `L L^T = m`, or `None` unless `m` is
/// positive definite.
fn cholesky<T: Real>(m: &LinMap4<T>) -> Option<[[T; 4]; 4]> {
    let a = &m.0;
    let mut l = [[T::zero(); 4]; 4];
    for j in 0..4 {
        let diag = a[j][j] - (0..j).fold(T::zero(), |s, k| s + l[j][k] * l[j][k]);
        if !(diag > T::zero()) {
            return None;
        }
        l[j][j] = diag.sqrt();
        for i in (j + 1)..4 {
            let off = a[i][j] - (0..j).fold(T::zero(), |s, k| s + l[i][k] * l[j][k]);
            l[i][j] = off / l[j][j];
        }
    }
    Some(l)
}

/// `(L L^T)^{-1} = L^{-T} L^{-1}` from a Cholesky factor.
fn cholesky_inverse<T: Real>(l: &[[T; 4]; 4]) -> LinMap4<T> {
    // columns of L^{-1} by forward substitution
    let mut inv = [[T::zero(); 4]; 4];
    for c in 0..4 {
        for i in c..4 {
            let rhs = if i == c { T::one() } else { T::zero() };
            let s = (c..i).fold(T::zero(), |s, k| s + l[i][k] * inv[k][c]);
            inv[i][c] = (rhs - s) / l[i][i];
        }
    }
    LinMap4(std::array::from_fn(|i| {
        std::array::from_fn(|j| (i.max(j)..4).fold(T::zero(), |s, k| s + inv[k][i] * inv[k][j]))
    }))
}

/// Hodge star matrices of one metric, for all degrees.
#[derive(Clone, Copy, Debug)]
pub struct HodgeStar<T> {
    vol: T,
    one: [[T; 4]; 4],
    two: [[T; 6]; 6],
    three: [[T; 4]; 4],
    euclidean: bool,
}

impl<T: Real> HodgeStar<T> {
    pub fn euclid() -> Self {
        let z = T::zero();
        HodgeStar {
            vol: T::one(),
            one: [[z; 4]; 4],
            two: [[z; 6]; 6],
            three: [[z; 4]; 4],
            euclidean: true,
        }
    }

    pub fn volume(&self) -> T {
        self.vol
    }

    pub fn apply0(&self, f: T) -> Form4<T> {
        Form4(f * self.vol)
    }

    pub fn apply1(&self, l: &Form1<T>) -> Form3<T> {
        if self.euclidean {
            return l.euclid_star();
        }
        Form3(mat4_apply(&self.one, &l.0))
    }

    #[inline]
    pub fn apply2(&self, w: &Form2<T>) -> Form2<T> {
        if self.euclidean {
            return w.euclid_star();
        }
        let m = &self.two;
        Form2(std::array::from_fn(|a| {
            (0..6).fold(T::zero(), |acc, b| acc + m[a][b] * w.0[b])
        }))
    }

    pub fn apply3(&self, g: &Form3<T>) -> Form1<T> {
        if self.euclidean {
            return g.euclid_star();
        }
        Form1(mat4_apply(&self.three, &g.0))
    }

    pub fn apply4(&self, t: &Form4<T>) -> T {
        t.0 / self.vol
    }
}

fn mat4_apply<T: Real>(m: &[[T; 4]; 4], x: &[T; 4]) -> [T; 4] {
    std::array::from_fn(|i| (0..4).fold(T::zero(), |acc, j| acc + m[i][j] * x[j]))
}

/// Forms that have a Hodge dual.
pub trait HodgeDual<T> {
    type Output;
    fn hodge_with(&self, star: &HodgeStar<T>) -> Self::Output;
}

impl<T: Real> HodgeDual<T> for T {
    type Output = Form4<T>;
    fn hodge_with(&self, star: &HodgeStar<T>) -> Form4<T> {
        star.apply0(*self)
    }
}

impl<T: Real> HodgeDual<T> for Form1<T> {
    type Output = Form3<T>;
    fn hodge_with(&self, star: &HodgeStar<T>) -> Form3<T> {
        star.apply1(self)
    }
}

impl<T: Real> HodgeDual<T> for Form2<T> {
    type Output = Form2<T>;
    fn hodge_with(&self, star: &HodgeStar<T>) -> Form2<T> {
        star.apply2(self)
    }
}

impl<T: Real> HodgeDual<T> for Form3<T> {
    type Output = Form1<T>;
    fn hodge_with(&self, star: &HodgeStar<T>) -> Form1<T> {
        star.apply3(self)
    }
}

impl<T: Real> HodgeDual<T> for Form4<T> {
    type Output = T;
    fn hodge_with(&self, star: &HodgeStar<T>) -> T {
        star.apply4(self)
    }
}

/// `*_g xi` for a form of any degree.
pub fn hodge<T: Real, F: HodgeDual<T>>(g: &Metric4<T>, xi: &F) -> F::Output {
    g.hodge(xi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn general(m: LinMap4<f64>) -> Metric4<f64> {
        // Bypass the Euclidean flag so the general path is exercised.
        let mut g = Metric4::new(m).unwrap();
        g.euclidean = false;
        g
    }

    #[test]
    fn rejects_indefinite_and_asymmetric() {
        assert_eq!(
            Metric4::diag([1.0, -1.0, 1.0, 1.0]),
            Err(Error::NonPositiveMetric)
        );
        let mut m = LinMap4::<f64>::identity();
        m.0[0][1] = 0.5;
        assert_eq!(Metric4::new(m), Err(Error::NonPositiveMetric));
    }

    #[test]
    fn euclid_table_matches_general_formula() {
        let fast = Metric4::<f64>::euclid();
        let slow = general(LinMap4::identity());
        let l = Form1([0.3, -1.2, 2.0, 0.7]);
        let w = Form2([0.1, 0.2, -0.3, 0.4, 1.5, -0.6]);
        let g3 = Form3([1.0, -2.0, 0.5, 0.25]);
        assert_eq!(fast.hodge(&l), slow.hodge(&l));
        assert_eq!(fast.hodge(&w), slow.hodge(&w));
        assert_eq!(fast.hodge(&g3), slow.hodge(&g3));
        assert_eq!(fast.hodge(&Form1::basis(0)), Form3([1.0, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn star_of_e01_for_diagonal_metric() {
        // Oracle: the defining identity alpha ^ *beta = <alpha,beta> dvol,
        // solved independently here over the six basis 2-forms. For
        // g = diag(1/2, 1/2, 2, 2): det = 1, g^{00} g^{11} = 4.
        let g = Metric4::diag([0.5, 0.5, 2.0, 2.0]).unwrap();
        let star = g.hodge(&Form2::basis(0, 1));
        let gi: [f64; 4] = [2.0, 2.0, 0.5, 0.5];
        let mut oracle = [0.0; 6];
        for (b, &[k, l]) in super::super::signs::BASIS2.iter().enumerate() {
            // <e_b, e01> = g^{k0} g^{l1} - g^{k1} g^{l0}
            let ip = if k == 0 && l == 1 { gi[0] * gi[1] } else { 0.0 };
            // the only basis element pairing with the unknown component a is b+3
            oracle[(b + 3) % 6] = ip * g.volume();
        }
        for a in 0..6 {
            assert!(
                (star.0[a] - oracle[a]).abs() < 1e-14,
                "{a}: {:?} vs {:?}",
                star,
                oracle
            );
        }
        assert!((star.0[3] - 4.0).abs() < 1e-14);
    }
}
