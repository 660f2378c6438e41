//! The uniform periodic grid on the unit four-torus.
//!
//! Sites are stored lexicographically with `x0` slowest:
//! `site = ((i0 * n + i1) * n + i2) * n + i3`. This layout is part of the
//! snapshot format and must not change.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// How partial derivatives are discretized.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// Fourier multiplier `i k` (Nyquist mode differentiated to zero).
    #[default]
    Spectral,
    /// Second-order central differences, symbol `i sin(k h) / h`.
    Fd2,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Spectral => "spectral",
            Scheme::Fd2 => "fd2",
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Grid {
    n: usize,
    scheme: Scheme,
}

impl Grid {
    /// `n` points per axis; must be even and at least 4.
    pub fn new(n: usize, scheme: Scheme) -> Result<Self> {
        if n < 4 || !n.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!("n = {n} must be even and >= 4")));
        }
        // n^4 sites times 6 components must be addressable
        if n.checked_pow(4).and_then(|s| s.checked_mul(6)).is_none() {
            return Err(Error::InvalidGrid(format!("n = {n} is too large")));
        }
        Ok(Grid { n, scheme })
    }

    pub fn spectral(n: usize) -> Result<Self> {
        Self::new(n, Scheme::Spectral)
    }

    pub fn with_scheme(self, scheme: Scheme) -> Self {
        Grid { scheme, ..self }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    /// Grid spacing `1/n`.
    #[inline]
    pub fn h<T: Real>(&self) -> T {
        T::one() / T::from_usize(self.n).expect("grid size")
    }

    /// Volume of one cell, `h^4`.
    #[inline]
    pub fn cell_volume<T: Real>(&self) -> T {
        self.h::<T>().powi(4)
    }

    /// Number of sites, `n^4`.
    #[inline]
    pub fn len(&self) -> usize {
        self.n * self.n * self.n * self.n
    }

    /// Always `false`: a grid has at least `4^4` sites.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Distance in the flat array between neighbours along `axis`.
    #[inline]
    pub fn stride(&self, axis: usize) -> usize {
        self.n.pow(3 - axis as u32)
    }

    #[inline]
    pub fn index(&self, i: [usize; 4]) -> usize {
        ((i[0] * self.n + i[1]) * self.n + i[2]) * self.n + i[3]
    }

    #[inline]
    pub fn coords(&self, site: usize) -> [usize; 4] {
        let n = self.n;
        [
            site / (n * n * n),
            (site / (n * n)) % n,
            (site / n) % n,
            site % n,
        ]
    }

    /// Position `x = i h` of a site in `[0, 1)^4`.
    #[inline]
    pub fn point<T: Real>(&self, site: usize) -> [T; 4] {
        let h = self.h::<T>();
        self.coords(site)
            .map(|i| T::from_usize(i).expect("grid index") * h)
    }

    /// Signed integer frequency of Fourier index `m`; the Nyquist index
    /// `n/2` is reported as `n/2`.
    #[inline]
    pub fn frequency(&self, m: usize) -> i64 {
        if m <= self.n / 2 {
            m as i64
        } else {
            m as i64 - self.n as i64
        }
    }

    /// Real symbol `s(m)` of the discrete partial derivative, which acts on
    /// the Fourier mode `m` as multiplication by `i s(m)`. Vanishes exactly
    /// at `m = 0` and `m = n/2` for both schemes.
    pub fn symbol<T: Real>(&self, m: usize) -> T {
        if m == 0 || 2 * m == self.n {
            return T::zero();
        }
        let two_pi = T::TAU();
        match self.scheme {
            Scheme::Spectral => two_pi * T::from_i64(self.frequency(m)).expect("frequency"),
            Scheme::Fd2 => {
                let n = T::from_usize(self.n).expect("grid size");
                (two_pi * T::from_usize(m).expect("index") / n).sin() * n
            }
        }
    }

    /// Symbols for all `n` Fourier indices of one axis.
    pub fn symbols<T: Real>(&self) -> Vec<T> {
        (0..self.n).map(|m| self.symbol(m)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_odd_and_small_grids() {
        assert!(Grid::spectral(3).is_err());
        assert!(Grid::spectral(6).is_ok());
        assert!(Grid::spectral(7).is_err());
        assert!(Grid::spectral(2).is_err());
    }

    #[test]
    fn index_round_trip_and_layout() {
        let g = Grid::spectral(4).unwrap();
        assert_eq!(g.index([0, 0, 0, 1]), 1);
        assert_eq!(g.index([1, 0, 0, 0]), 64);
        for s in 0..g.len() {
            assert_eq!(g.index(g.coords(s)), s);
        }
        assert_eq!(g.stride(0), 64);
        assert_eq!(g.stride(3), 1);
    }

    #[test]
    fn symbols_vanish_at_zero_and_nyquist() {
        for scheme in [Scheme::Spectral, Scheme::Fd2] {
            let g = Grid::new(8, scheme).unwrap();
            let s: Vec<f64> = g.symbols();
            assert_eq!(s[0], 0.0);
            assert_eq!(s[4], 0.0);
            assert!((s[1] + s[7]).abs() < 1e-12);
        }
        let g = Grid::new(8, Scheme::Fd2).unwrap();
        let h = 1.0 / 8.0;
        assert!((g.symbol::<f64>(1) - (std::f64::consts::TAU * h).sin() / h).abs() < 1e-13);
    }
}
