//! Periodic fields of pointwise values.

use num_traits::{Float, FromPrimitive, One, Zero};
use rayon::prelude::*;

use super::grid::Grid;
use super::reduce::{max_by, pairwise_sum_by};
use crate::error::{Error, Result};
use crate::exterior4::Components;
use crate::scalar::Real;

/// One value per grid site, in the grid's lexicographic order.
///
/// `F` is a pointwise type such as a scalar, `Form2<T>` or `Metric4<T>`.
/// Fields are plain values; all maps run data-parallel over sites and all
/// reductions are deterministic (see [`super::reduce`]).
#[derive(Clone, Debug, PartialEq)]
pub struct Field<F> {
    grid: Grid,
    values: Vec<F>,
}

impl<F: Copy + Send + Sync> Field<F> {
    pub fn new(grid: Grid, values: Vec<F>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "field has {} values, grid n = {} needs {}",
                values.len(),
                grid.n(),
                grid.len()
            )));
        }
        Ok(Field { grid, values })
    }

    /// Field with `f(site)` at every site.
    pub fn from_fn(grid: Grid, f: impl Fn(usize) -> F + Sync + Send) -> Self {
        let values = (0..grid.len()).into_par_iter().map(f).collect();
        Field { grid, values }
    }

    /// Field with `f(site)` at every site; the first failing site (in index
    /// order) determines the error.
    pub fn try_from_fn(grid: Grid, f: impl Fn(usize) -> Result<F> + Sync + Send) -> Result<Self> {
        let values: Vec<Result<F>> = (0..grid.len()).into_par_iter().map(f).collect();
        let values = values
            .into_iter()
            .enumerate()
            .map(|(site, v)| v.map_err(|e| e.at_site(site)))
            .collect::<Result<Vec<F>>>()?;
        Ok(Field { grid, values })
    }

    pub fn constant(grid: Grid, value: F) -> Self {
        Field {
            grid,
            values: vec![value; grid.len()],
        }
    }

    #[inline]
    pub fn grid(&self) -> Grid {
        self.grid
    }

    #[inline]
    pub fn values(&self) -> &[F] {
        &self.values
    }

    #[inline]
    pub fn values_mut(&mut self) -> &mut [F] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<F> {
        self.values
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn at(&self, site: usize) -> F {
        self.values[site]
    }

    /// Same field on a grid with a different derivative scheme.
    pub fn with_grid(self, grid: Grid) -> Result<Self> {
        Self::new(grid, self.values)
    }

    pub fn map<G: Copy + Send + Sync>(&self, f: impl Fn(&F) -> G + Sync + Send) -> Field<G> {
        Field {
            grid: self.grid,
            values: self.values.par_iter().map(f).collect(),
        }
    }

    pub fn try_map<G: Copy + Send + Sync>(
        &self,
        f: impl Fn(&F) -> Result<G> + Sync + Send,
    ) -> Result<Field<G>> {
        Field::try_from_fn(self.grid, |s| f(&self.values[s]))
    }

    pub fn zip_map<G, H>(&self, other: &Field<G>, f: impl Fn(&F, &G) -> H + Sync + Send) -> Field<H>
    where
        G: Copy + Send + Sync,
        H: Copy + Send + Sync,
    {
        self.assert_same_grid(other.grid);
        Field::from_fn(self.grid, |s| f(&self.values[s], &other.values[s]))
    }

    pub fn try_zip_map<G, H>(
        &self,
        other: &Field<G>,
        f: impl Fn(&F, &G) -> Result<H> + Sync + Send,
    ) -> Result<Field<H>>
    where
        G: Copy + Send + Sync,
        H: Copy + Send + Sync,
    {
        self.assert_same_grid(other.grid);
        Field::try_from_fn(self.grid, |s| f(&self.values[s], &other.values[s]))
    }

    fn assert_same_grid(&self, other: Grid) {
        assert_eq!(self.grid.n(), other.n(), "fields live on different grids");
    }
}

impl<F> Field<F>
where
    F: Components,
    F::Scalar: Real,
{
    pub fn zeros(grid: Grid) -> Self {
        Field::constant(grid, F::from_fn(|_| F::Scalar::zero()))
    }

    /// Scalar array of component `i` over all sites.
    pub fn component(&self, i: usize) -> Vec<F::Scalar> {
        self.values.par_iter().map(|v| v.component(i)).collect()
    }

    /// All component arrays, `F::DIM` of them.
    pub fn components(&self) -> Vec<Vec<F::Scalar>> {
        (0..F::DIM).map(|i| self.component(i)).collect()
    }

    /// Reassembles a field from `F::DIM` component arrays.
    pub fn from_components(grid: Grid, comps: &[Vec<F::Scalar>]) -> Self {
        assert_eq!(comps.len(), F::DIM, "wrong number of components");
        for c in comps {
            assert_eq!(c.len(), grid.len(), "component has wrong length");
        }
        Field::from_fn(grid, |s| F::from_fn(|i| comps[i][s]))
    }

    /// Componentwise `a * self + b * other`.
    pub fn lincomb(&self, a: F::Scalar, other: &Self, b: F::Scalar) -> Self {
        self.zip_map(other, |x, y| {
            F::from_fn(|i| a * x.component(i) + b * y.component(i))
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        self.lincomb(F::Scalar::one(), other, F::Scalar::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.lincomb(F::Scalar::one(), other, -F::Scalar::one())
    }

    pub fn scale(&self, a: F::Scalar) -> Self {
        self.map(|x| F::from_fn(|i| a * x.component(i)))
    }

    /// `self + a * other`.
    pub fn axpy(&self, a: F::Scalar, other: &Self) -> Self {
        self.lincomb(F::Scalar::one(), other, a)
    }

    /// Flat `L^2` norm squared, `h^4 sum_x sum_i |f_i(x)|^2`.
    pub fn l2_norm_sq(&self) -> F::Scalar {
        let sum = pairwise_sum_by(self.len(), |s| {
            let v = &self.values[s];
            (0..F::DIM).fold(F::Scalar::zero(), |acc, i| {
                acc + v.component(i) * v.component(i)
            })
        });
        sum * self.grid.cell_volume::<F::Scalar>()
    }

    pub fn l2_norm(&self) -> F::Scalar {
        self.l2_norm_sq().sqrt()
    }

    /// Flat `L^2` inner product, `h^4 sum_x sum_i f_i(x) g_i(x)`.
    pub fn l2_dot(&self, other: &Self) -> F::Scalar {
        let sum = pairwise_sum_by(self.len(), |s| {
            let (a, b) = (&self.values[s], &other.values[s]);
            (0..F::DIM).fold(F::Scalar::zero(), |acc, i| {
                acc + a.component(i) * b.component(i)
            })
        });
        sum * self.grid.cell_volume::<F::Scalar>()
    }

    /// Largest absolute component over all sites.
    pub fn sup_norm(&self) -> F::Scalar {
        max_by(self.len(), |s| {
            let v = &self.values[s];
            (0..F::DIM).fold(F::Scalar::zero(), |m, i| {
                let c = v.component(i).abs();
                if c.is_nan() || m.is_nan() {
                    F::Scalar::nan()
                } else {
                    m.max(c)
                }
            })
        })
    }

    pub fn max_abs_diff(&self, other: &Self) -> F::Scalar {
        self.sub(other).sup_norm()
    }

    /// Grid mean of every component.
    pub fn means(&self) -> Vec<F::Scalar> {
        let inv = F::Scalar::one() / F::Scalar::from_usize(self.len()).expect("site count");
        (0..F::DIM)
            .map(|i| pairwise_sum_by(self.len(), |s| self.values[s].component(i)) * inv)
            .collect()
    }

    pub fn is_finite(&self) -> bool {
        self.values
            .par_iter()
            .all(|v| (0..F::DIM).all(|i| v.component(i).is_finite()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior4::Form2;

    #[test]
    fn construction_checks_length() {
        let g = Grid::spectral(4).unwrap();
        assert!(Field::new(g, vec![0.0f64; 10]).is_err());
        assert!(Field::new(g, vec![0.0f64; 256]).is_ok());
    }

    #[test]
    fn components_round_trip() {
        let g = Grid::spectral(4).unwrap();
        let f = Field::from_fn(g, |s| Form2(std::array::from_fn(|i| (s * 6 + i) as f64)));
        let back = Field::<Form2<f64>>::from_components(g, &f.components());
        assert_eq!(back, f);
    }

    #[test]
    fn first_failing_site_is_reported() {
        let g = Grid::spectral(4).unwrap();
        let r = Field::<f64>::try_from_fn(g, |s| {
            if s >= 17 {
                Err(Error::DegenerateForm { u: 0.0, site: None })
            } else {
                Ok(1.0)
            }
        });
        assert_eq!(
            r,
            Err(Error::DegenerateForm {
                u: 0.0,
                site: Some(17)
            })
        );
    }

    #[test]
    fn norms_of_constant_field() {
        let g = Grid::spectral(4).unwrap();
        let f = Field::constant(g, Form2([1.0, 0.0, 0.0, 1.0, 0.0, 0.0]));
        assert!((f.l2_norm_sq() - 2.0).abs() < 1e-15);
        assert_eq!(f.sup_norm(), 1.0);
        assert_eq!(f.means(), vec![1.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
    }
}
