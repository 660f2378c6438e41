//! The discrete exterior derivative, quadrature and cohomology coordinates.
//!
//! `d` is assembled from the grid's partial derivatives and the frozen
//! `e_j ^ (basis element)` sign tables. The partial derivatives are
//! translation-invariant Fourier multipliers for both schemes, so they
//! commute and `d o d` vanishes up to round-off.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::field::Field;
use super::reduce::pairwise_sum_by;
use super::spectral::partial;
use crate::exterior4::signs::{WEDGE_1_1, WEDGE_1_2, WEDGE_1_3};
use crate::exterior4::{Components, Form1, Form2, Form3, Form4};
use crate::scalar::Real;

/// Pointwise types of degree `k < 4`, with the table `e_j ^ b_a = s b'_c`.
pub trait ExteriorDerivative: Components {
    type Next: Components<Scalar = Self::Scalar>;

    /// `(c, s)` with `e_axis ^ (basis element a) = s * (basis element c)`.
    fn wedge_with_coordinate(axis: usize, a: usize) -> (usize, i8);
}

impl<T: Real> ExteriorDerivative for T {
    type Next = Form1<T>;
    fn wedge_with_coordinate(axis: usize, _: usize) -> (usize, i8) {
        (axis, 1)
    }
}

impl<T: Real> ExteriorDerivative for Form1<T> {
    type Next = Form2<T>;
    fn wedge_with_coordinate(axis: usize, a: usize) -> (usize, i8) {
        WEDGE_1_1[axis][a]
    }
}

impl<T: Real> ExteriorDerivative for Form2<T> {
    type Next = Form3<T>;
    fn wedge_with_coordinate(axis: usize, a: usize) -> (usize, i8) {
        WEDGE_1_2[axis][a]
    }
}

impl<T: Real> ExteriorDerivative for Form3<T> {
    type Next = Form4<T>;
    fn wedge_with_coordinate(axis: usize, a: usize) -> (usize, i8) {
        (0, WEDGE_1_3[axis][a])
    }
}

/// Exterior derivative `d f = sum_j e_j ^ (d f / d x_j)`.
pub fn d<F>(f: &Field<F>) -> Field<F::Next>
where
    F: ExteriorDerivative,
    F::Scalar: Real,
{
    let grid = f.grid();
    let zero = F::Scalar::zero();
    let mut out: Vec<Vec<F::Scalar>> = vec![vec![zero; grid.len()]; F::Next::DIM];
    for a in 0..F::DIM {
        let comp = f.component(a);
        for axis in 0..4 {
            let (c, s) = F::wedge_with_coordinate(axis, a);
            if s == 0 {
                continue;
            }
            let p = partial(grid, &comp, axis);
            let target = &mut out[c];
            if s > 0 {
                target.iter_mut().zip(&p).for_each(|(t, v)| *t += *v);
            } else {
                target.iter_mut().zip(&p).for_each(|(t, v)| *t -= *v);
            }
        }
    }
    Field::from_components(grid, &out)
}

/// `int_M f = h^4 sum_x f(x)` for a top-degree field.
pub fn integrate<T: Real>(f: &Field<Form4<T>>) -> T {
    let v = f.values();
    pairwise_sum_by(v.len(), |s| v[s].0) * f.grid().cell_volume::<T>()
}

/// Same quadrature for a scalar density.
pub fn integrate_scalar<T: Real>(f: &Field<T>) -> T {
    let v = f.values();
    pairwise_sum_by(v.len(), |s| v[s]) * f.grid().cell_volume::<T>()
}

/// Coordinates of the de Rham class of a closed 2-form field: the grid means
/// of its six components.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CohomologyClass2<T>(pub [T; 6]);

impl<T: Real> CohomologyClass2<T> {
    pub fn max_diff(&self, other: &Self) -> T {
        (0..6).fold(T::zero(), |m, i| m.max((self.0[i] - other.0[i]).abs()))
    }

    pub fn as_form(&self) -> Form2<T> {
        Form2(self.0)
    }
}

pub fn cohomology<T: Real>(rho: &Field<Form2<T>>) -> CohomologyClass2<T> {
    let m = rho.means();
    CohomologyClass2(std::array::from_fn(|i| m[i]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{Grid, Scheme};

    #[test]
    fn sine_derivative_examples() {
        let tau = std::f64::consts::TAU;
        for scheme in [Scheme::Spectral, Scheme::Fd2] {
            let g = Grid::new(8, scheme).unwrap();
            let f = Field::from_fn(g, |s| (tau * g.point::<f64>(s)[0]).sin());
            let df = d(&f);
            let factor = match scheme {
                Scheme::Spectral => tau,
                Scheme::Fd2 => (tau / 8.0).sin() * 8.0,
            };
            for s in 0..g.len() {
                let x = g.point::<f64>(s);
                let expect = Form1([factor * (tau * x[0]).cos(), 0.0, 0.0, 0.0]);
                assert!((df.at(s) - expect).max_abs() < 1e-12);
            }
        }
    }

    #[test]
    fn constants_are_closed() {
        let g = Grid::spectral(4).unwrap();
        let f = Field::constant(g, Form2([1.0, 2.0, 3.0, 4.0, 5.0, 6.0]));
        assert_eq!(d(&f).sup_norm(), 0.0);
    }

    #[test]
    fn quadrature_examples() {
        let g = Grid::spectral(8).unwrap();
        let tau = std::f64::consts::TAU;
        assert_eq!(integrate(&Field::constant(g, Form4(1.0))), 1.0);
        let s2 = Field::from_fn(g, |s| Form4((tau * g.point::<f64>(s)[0]).sin().powi(2)));
        assert!((integrate(&s2) - 0.5).abs() < 1e-15);
        let w1 = Form2([1.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        assert_eq!(integrate(&Field::constant(g, w1.wedge(&w1))), 2.0);
    }

    #[test]
    fn cohomology_examples() {
        let g = Grid::spectral(4).unwrap();
        let w2 = Form2([0.0, 1.0, 0.0, 0.0, 1.0, 0.0]);
        assert_eq!(
            cohomology(&Field::constant(g, w2.scale(3.0))).0,
            [0.0, 3.0, 0.0, 0.0, 3.0, 0.0]
        );
    }
}
