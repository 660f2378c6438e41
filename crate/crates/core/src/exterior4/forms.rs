//! Pointwise vectors and forms on an oriented 4-dimensional space, with the
//! metric-free products between them.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use super::signs::{INTERIOR_2, INTERIOR_3, INTERIOR_4, WEDGE_1_1, WEDGE_1_2, WEDGE_1_3};
use crate::scalar::{Real, Ring};

/// Tangent vector in the coordinate basis `d0..d3`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vector4<T>(pub [T; 4]);

/// 1-form in the basis `e0..e3`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Form1<T>(pub [T; 4]);

/// 2-form with components `(c01, c02, c03, c23, c31, c12)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Form2<T>(pub [T; 6]);

/// 3-form with components on `(e123, e023, e013, e012)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Form3<T>(pub [T; 4]);

/// Top form, a multiple of `e0^e1^e2^e3`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Form4<T>(pub T);

/// Fixed-size component access shared by all pointwise value types.
///
/// Lattice fields are arrays of these; the trait lets them be split into
/// per-component scalar arrays for transforms and reductions.
pub trait Components: Copy + Send + Sync {
    type Scalar: Copy;
    /// Number of scalar components.
    const DIM: usize;
    fn component(&self, i: usize) -> Self::Scalar;
    fn from_fn(f: impl FnMut(usize) -> Self::Scalar) -> Self;
}

macro_rules! array_form {
    ($name:ident, $n:expr) => {
        impl<T: Ring> $name<T> {
            pub fn zero() -> Self {
                Self([T::zero(); $n])
            }

            pub fn scale(self, s: T) -> Self {
                Self(self.0.map(|c| c * s))
            }

            pub fn components(&self) -> &[T; $n] {
                &self.0
            }

            /// Sum of squared components (Euclidean norm squared in this basis).
            pub fn norm_sq(&self) -> T {
                self.0.iter().fold(T::zero(), |acc, &c| acc + c * c)
            }

            pub fn dot(&self, other: &Self) -> T {
                self.0
                    .iter()
                    .zip(other.0.iter())
                    .fold(T::zero(), |acc, (&a, &b)| acc + a * b)
            }
        }

        impl<T: Real> $name<T> {
            pub fn max_abs(&self) -> T {
                self.0.iter().fold(T::zero(), |m, c| m.max(c.abs()))
            }

            pub fn is_finite(&self) -> bool {
                self.0.iter().all(|c| c.is_finite())
            }
        }

        impl<T: Ring + Send + Sync> Components for $name<T> {
            type Scalar = T;
            const DIM: usize = $n;
            #[inline]
            fn component(&self, i: usize) -> T {
                self.0[i]
            }
            #[inline]
            fn from_fn(mut f: impl FnMut(usize) -> T) -> Self {
                Self(std::array::from_fn(|i| f(i)))
            }
        }

        impl<T> Index<usize> for $name<T> {
            type Output = T;
            #[inline]
            fn index(&self, i: usize) -> &T {
                &self.0[i]
            }
        }

        impl<T> IndexMut<usize> for $name<T> {
            #[inline]
            fn index_mut(&mut self, i: usize) -> &mut T {
                &mut self.0[i]
            }
        }

        impl<T: Ring> Add for $name<T> {
            type Output = Self;
            #[inline]
            fn add(self, rhs: Self) -> Self {
                Self(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
            }
        }

        impl<T: Ring> Sub for $name<T> {
            type Output = Self;
            #[inline]
            fn sub(self, rhs: Self) -> Self {
                Self(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
            }
        }

        impl<T: Ring> AddAssign for $name<T> {
            #[inline]
            fn add_assign(&mut self, rhs: Self) {
                *self = *self + rhs;
            }
        }

        impl<T: Ring> SubAssign for $name<T> {
            #[inline]
            fn sub_assign(&mut self, rhs: Self) {
                *self = *self - rhs;
            }
        }

        impl<T: Ring> Neg for $name<T> {
            type Output = Self;
            #[inline]
            fn neg(self) -> Self {
                Self(self.0.map(|c| -c))
            }
        }

        impl<T: Ring> Mul<T> for $name<T> {
            type Output = Self;
            #[inline]
            fn mul(self, s: T) -> Self {
                self.scale(s)
            }
        }
    };
}

array_form!(Vector4, 4);
array_form!(Form1, 4);
array_form!(Form2, 6);
array_form!(Form3, 4);

impl<T: Ring> Form4<T> {
    pub fn zero() -> Self {
        Form4(T::zero())
    }

    pub fn coefficient(&self) -> T {
        self.0
    }
}

impl<T: Ring + Send + Sync> Components for Form4<T> {
    type Scalar = T;
    const DIM: usize = 1;
    fn component(&self, _: usize) -> T {
        self.0
    }
    fn from_fn(mut f: impl FnMut(usize) -> T) -> Self {
        Form4(f(0))
    }
}

impl<T: Real> Components for T {
    type Scalar = T;
    const DIM: usize = 1;
    #[inline]
    fn component(&self, _: usize) -> T {
        *self
    }
    #[inline]
    fn from_fn(mut f: impl FnMut(usize) -> T) -> Self {
        f(0)
    }
}

impl<T: Ring> Add for Form4<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Form4(self.0 + rhs.0)
    }
}

impl<T: Ring> Sub for Form4<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Form4(self.0 - rhs.0)
    }
}

impl<T: Ring> Neg for Form4<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Form4(-self.0)
    }
}

impl<T: Ring> Mul<T> for Form4<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        Form4(self.0 * s)
    }
}

#[inline]
fn signed<T: Ring>(s: i8, x: T) -> T {
    match s {
        1 => x,
        -1 => -x,
        _ => T::zero(),
    }
}

impl<T: Ring> Vector4<T> {
    pub fn basis(i: usize) -> Self {
        let mut v = Self::zero();
        v.0[i] = T::one();
        v
    }
}

impl<T: Ring> Form1<T> {
    pub fn basis(i: usize) -> Self {
        let mut v = Self::zero();
        v.0[i] = T::one();
        v
    }

    /// Pairing with a vector, `lambda(v)`.
    pub fn eval(&self, v: &Vector4<T>) -> T {
        (0..4).fold(T::zero(), |acc, i| acc + self.0[i] * v.0[i])
    }

    /// `lambda o J`, the 1-form `v -> lambda(J v)`.
    pub fn compose(&self, j: &LinMap4<T>) -> Self {
        Form1(std::array::from_fn(|c| {
            (0..4).fold(T::zero(), |acc, r| acc + self.0[r] * j.0[r][c])
        }))
    }

    pub fn wedge1(&self, other: &Form1<T>) -> Form2<T> {
        let mut out = Form2::zero();
        for i in 0..4 {
            for j in 0..4 {
                let (idx, s) = WEDGE_1_1[i][j];
                if s != 0 {
                    out.0[idx] = out.0[idx] + signed(s, self.0[i] * other.0[j]);
                }
            }
        }
        out
    }

    pub fn wedge2(&self, omega: &Form2<T>) -> Form3<T> {
        let mut out = Form3::zero();
        for i in 0..4 {
            for a in 0..6 {
                let (idx, s) = WEDGE_1_2[i][a];
                if s != 0 {
                    out.0[idx] = out.0[idx] + signed(s, self.0[i] * omega.0[a]);
                }
            }
        }
        out
    }

    pub fn wedge3(&self, gamma: &Form3<T>) -> Form4<T> {
        let mut c = T::zero();
        for i in 0..4 {
            for b in 0..4 {
                c = c + signed(WEDGE_1_3[i][b], self.0[i] * gamma.0[b]);
            }
        }
        Form4(c)
    }

    pub fn interior(&self, v: &Vector4<T>) -> T {
        self.eval(v)
    }

    /// Euclidean Hodge star (orthonormal coframe table).
    pub fn euclid_star(&self) -> Form3<T> {
        let c = self.0;
        Form3([c[0], -c[1], c[2], -c[3]])
    }
}

impl<T: Ring> Form2<T> {
    /// `e_i ^ e_j` for `i != j`.
    pub fn basis(i: usize, j: usize) -> Self {
        let (idx, s) = WEDGE_1_1[i][j];
        let mut out = Self::zero();
        if s != 0 {
            out.0[idx] = signed(s, T::one());
        }
        out
    }

    /// `(self ^ other) / (e0^e1^e2^e3)`.
    #[inline]
    pub fn wedge(&self, other: &Form2<T>) -> Form4<T> {
        let a = &self.0;
        let b = &other.0;
        Form4(a[0] * b[3] + a[1] * b[4] + a[2] * b[5] + a[3] * b[0] + a[4] * b[1] + a[5] * b[2])
    }

    pub fn wedge1(&self, lambda: &Form1<T>) -> Form3<T> {
        lambda.wedge2(self)
    }

    /// Antisymmetric component matrix `P[i][j] = omega(e_i, e_j)`.
    pub fn to_matrix(&self) -> LinMap4<T> {
        let mut m = LinMap4::zero();
        for i in 0..4 {
            for j in 0..4 {
                let (idx, s) = WEDGE_1_1[i][j];
                if s != 0 {
                    m.0[i][j] = signed(s, self.0[idx]);
                }
            }
        }
        m
    }

    /// Inverse of [`Form2::to_matrix`]; only the upper triangle is read.
    pub fn from_matrix(m: &LinMap4<T>) -> Self {
        let mut out = Self::zero();
        for i in 0..4 {
            for j in (i + 1)..4 {
                let (idx, s) = WEDGE_1_1[i][j];
                out.0[idx] = signed(s, m.0[i][j]);
            }
        }
        out
    }

    /// `omega(v, w)`.
    pub fn eval(&self, v: &Vector4<T>, w: &Vector4<T>) -> T {
        self.to_matrix().bilinear(v, w)
    }

    pub fn interior(&self, v: &Vector4<T>) -> Form1<T> {
        let mut out = Form1::zero();
        for i in 0..4 {
            for a in 0..6 {
                let (idx, s) = INTERIOR_2[i][a];
                if s != 0 {
                    out.0[idx] = out.0[idx] + signed(s, v.0[i] * self.0[a]);
                }
            }
        }
        out
    }

    /// Pullback `omega(L v, L w)`.
    pub fn pullback(&self, l: &LinMap4<T>) -> Self {
        Self::from_matrix(&l.transpose().mul(&self.to_matrix()).mul(l))
    }

    /// Euclidean Hodge star: swaps the two component triples.
    #[inline]
    pub fn euclid_star(&self) -> Self {
        let c = self.0;
        Form2([c[3], c[4], c[5], c[0], c[1], c[2]])
    }
}

impl<T: Ring> Form3<T> {
    pub fn interior(&self, v: &Vector4<T>) -> Form2<T> {
        let mut out = Form2::zero();
        for i in 0..4 {
            for b in 0..4 {
                let (idx, s) = INTERIOR_3[i][b];
                if s != 0 {
                    out.0[idx] = out.0[idx] + signed(s, v.0[i] * self.0[b]);
                }
            }
        }
        out
    }

    pub fn wedge1(&self, lambda: &Form1<T>) -> Form4<T> {
        -lambda.wedge3(self)
    }

    /// Euclidean Hodge star, the inverse table of [`Form1::euclid_star`] up to sign.
    pub fn euclid_star(&self) -> Form1<T> {
        let c = self.0;
        Form1([-c[0], c[1], -c[2], c[3]])
    }
}

impl<T: Ring> Form4<T> {
    /// `iota(v)` of this top form.
    pub fn interior(&self, v: &Vector4<T>) -> Form3<T> {
        let mut out = Form3::zero();
        for i in 0..4 {
            let (idx, s) = INTERIOR_4[i];
            out.0[idx] = out.0[idx] + signed(s, v.0[i] * self.0);
        }
        out
    }
}

/// Contraction with a vector, `iota(v) xi`, lowering the degree by one.
pub trait Interior<T> {
    type Output;
    fn interior(&self, v: &Vector4<T>) -> Self::Output;
}

impl<T: Ring> Interior<T> for Form1<T> {
    type Output = T;
    fn interior(&self, v: &Vector4<T>) -> T {
        self.eval(v)
    }
}

impl<T: Ring> Interior<T> for Form2<T> {
    type Output = Form1<T>;
    fn interior(&self, v: &Vector4<T>) -> Form1<T> {
        Form2::interior(self, v)
    }
}

impl<T: Ring> Interior<T> for Form3<T> {
    type Output = Form2<T>;
    fn interior(&self, v: &Vector4<T>) -> Form2<T> {
        Form3::interior(self, v)
    }
}

impl<T: Ring> Interior<T> for Form4<T> {
    type Output = Form3<T>;
    fn interior(&self, v: &Vector4<T>) -> Form3<T> {
        Form4::interior(self, v)
    }
}

/// `iota(v) xi` for any form degree.
pub fn interior<T, F: Interior<T>>(v: &Vector4<T>, xi: &F) -> F::Output {
    xi.interior(v)
}

/// `alpha ^ beta` for two 2-forms.
pub fn wedge22<T: Ring>(alpha: &Form2<T>, beta: &Form2<T>) -> Form4<T> {
    alpha.wedge(beta)
}

pub fn wedge12<T: Ring>(lambda: &Form1<T>, omega: &Form2<T>) -> Form3<T> {
    lambda.wedge2(omega)
}

pub fn wedge13<T: Ring>(lambda: &Form1<T>, gamma: &Form3<T>) -> Form4<T> {
    lambda.wedge3(gamma)
}

/// Linear map of the tangent space; `m[i][j]` is row `i`, column `j`,
/// acting on column vectors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinMap4<T>(pub [[T; 4]; 4]);

impl<T: Ring> LinMap4<T> {
    pub fn zero() -> Self {
        LinMap4([[T::zero(); 4]; 4])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            m.0[i][i] = T::one();
        }
        m
    }

    pub fn from_diag(d: [T; 4]) -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            m.0[i][i] = d[i];
        }
        m
    }

    pub fn transpose(&self) -> Self {
        LinMap4(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[j][i])
        }))
    }

    pub fn mul(&self, other: &Self) -> Self {
        LinMap4(std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                (0..4).fold(T::zero(), |acc, k| acc + self.0[i][k] * other.0[k][j])
            })
        }))
    }

    pub fn apply(&self, v: &Vector4<T>) -> Vector4<T> {
        Vector4(std::array::from_fn(|i| {
            (0..4).fold(T::zero(), |acc, k| acc + self.0[i][k] * v.0[k])
        }))
    }

    /// `v^T M w`.
    pub fn bilinear(&self, v: &Vector4<T>, w: &Vector4<T>) -> T {
        v.dot(&self.apply(w))
    }

    pub fn scale(&self, s: T) -> Self {
        LinMap4(self.0.map(|r| r.map(|x| x * s)))
    }

    pub fn add(&self, other: &Self) -> Self {
        LinMap4(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[i][j] + other.0[i][j])
        }))
    }

    pub fn sub(&self, other: &Self) -> Self {
        LinMap4(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[i][j] - other.0[i][j])
        }))
    }

    /// Determinant by cofactor expansion (exact for exact scalar types).
    pub fn det(&self) -> T {
        let m = &self.0;
        let mut d = T::zero();
        for c in 0..4 {
            let minor = det3_excluding(m, 0, c);
            let term = m[0][c] * minor;
            d = if c % 2 == 0 { d + term } else { d - term };
        }
        d
    }

    /// Inverse via the adjugate; `None` when the determinant is zero.
    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det == T::zero() {
            return None;
        }
        let m = &self.0;
        Some(LinMap4(std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                // adj[i][j] = cofactor[j][i]
                let c = det3_excluding(m, j, i);
                let c = if (i + j) % 2 == 0 { c } else { -c };
                c / det
            })
        })))
    }
}

impl<T: Real> LinMap4<T> {
    pub fn max_abs(&self) -> T {
        self.0
            .iter()
            .flat_map(|r| r.iter())
            .fold(T::zero(), |m, x| m.max(x.abs()))
    }

    /// Largest entrywise deviation from `other`.
    pub fn max_diff(&self, other: &Self) -> T {
        self.sub(other).max_abs()
    }
}

fn det3_excluding<T: Ring>(m: &[[T; 4]; 4], row: usize, col: usize) -> T {
    let mut r = [[T::zero(); 3]; 3];
    let mut ri = 0;
    for i in 0..4 {
        if i == row {
            continue;
        }
        let mut ci = 0;
        for j in 0..4 {
            if j == col {
                continue;
            }
            r[ri][ci] = m[i][j];
            ci += 1;
        }
        ri += 1;
    }
    r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
        - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
        + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])
}
