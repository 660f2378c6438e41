//! Fourier transforms along grid axes and the discrete partial derivatives.
//!
//! A transform along one axis gathers all `n^3` lines of that axis into a
//! contiguous buffer, runs batched 1D FFTs on it in parallel and scatters
//! the result back. Every line is processed independently with the same
//! plan, so results do not depend on the thread count.

use std::any::{Any, TypeId};
use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use super::grid::{Grid, Scheme};
use crate::scalar::Real;

/// Lines handed to one FFT call.
const LINES_PER_TASK: usize = 64;

type Plans<T> = (Arc<dyn Fft<T>>, Arc<dyn Fft<T>>);

/// Forward and inverse plans of length `n`, cached per thread.
fn plans<T: Real>(n: usize) -> Plans<T> {
    thread_local! {
        static CACHE: RefCell<HashMap<(TypeId, usize), Box<dyn Any>>> = RefCell::new(HashMap::new());
    }
    CACHE.with(|cache| {
        let mut cache = cache.borrow_mut();
        let entry = cache.entry((TypeId::of::<T>(), n)).or_insert_with(|| {
            let mut planner = FftPlanner::<T>::new();
            let p: Plans<T> = (planner.plan_fft_forward(n), planner.plan_fft_inverse(n));
            Box::new(p)
        });
        entry
            .downcast_ref::<Plans<T>>()
            .expect("plan cache type")
            .clone()
    })
}

#[inline]
fn line_base(n: usize, stride: usize, line: usize) -> usize {
    (line / stride) * n * stride + line % stride
}

/// Applies `op` to every line along `axis`. `op` receives a buffer holding
/// a whole number of lines, each contiguous and of length `n`.
fn for_each_line<T, O>(grid: Grid, data: &mut [Complex<T>], axis: usize, op: O)
where
    T: Real,
    O: Fn(&mut [Complex<T>]) + Sync + Send,
{
    let n = grid.n();
    let stride = grid.stride(axis);
    if stride == 1 {
        data.par_chunks_mut(n * LINES_PER_TASK).for_each(op);
        return;
    }
    let mut buf = vec![Complex::new(T::zero(), T::zero()); data.len()];
    buf.par_chunks_mut(n).enumerate().for_each(|(line, chunk)| {
        let base = line_base(n, stride, line);
        for (m, c) in chunk.iter_mut().enumerate() {
            *c = data[base + m * stride];
        }
    });
    buf.par_chunks_mut(n * LINES_PER_TASK).for_each(op);
    data.par_iter_mut().enumerate().for_each(|(idx, v)| {
        let outer = idx / (n * stride);
        let rem = idx % (n * stride);
        let (m, inner) = (rem / stride, rem % stride);
        *v = buf[(outer * stride + inner) * n + m];
    });
}

fn to_complex<T: Real>(data: &[T]) -> Vec<Complex<T>> {
    data.par_iter()
        .map(|&x| Complex::new(x, T::zero()))
        .collect()
}

/// Unnormalized forward 4D DFT of a real array.
pub fn fft4<T: Real>(grid: Grid, data: &[T]) -> Vec<Complex<T>> {
    let mut c = to_complex(data);
    let (fwd, _) = plans::<T>(grid.n());
    for axis in 0..4 {
        for_each_line(grid, &mut c, axis, |lines| fwd.process(lines));
    }
    c
}

/// Inverse 4D DFT including the `1/n^4` normalization.
pub fn ifft4<T: Real>(grid: Grid, mut c: Vec<Complex<T>>) -> Vec<Complex<T>> {
    let (_, inv) = plans::<T>(grid.n());
    for axis in 0..4 {
        for_each_line(grid, &mut c, axis, |lines| inv.process(lines));
    }
    let scale = T::one() / T::from_usize(grid.len()).expect("site count");
    c.par_iter_mut().for_each(|z| *z *= scale);
    c
}

/// Real part of the inverse 4D DFT.
pub fn ifft4_real<T: Real>(grid: Grid, c: Vec<Complex<T>>) -> Vec<T> {
    ifft4(grid, c).into_par_iter().map(|z| z.re).collect()
}

/// Discrete partial derivative `d/dx_axis` of a real array using the grid's
/// scheme.
pub fn partial<T: Real>(grid: Grid, data: &[T], axis: usize) -> Vec<T> {
    match grid.scheme() {
        Scheme::Spectral => spectral_partial(grid, data, axis),
        Scheme::Fd2 => central_difference(grid, data, axis),
    }
}

fn spectral_partial<T: Real>(grid: Grid, data: &[T], axis: usize) -> Vec<T> {
    let n = grid.n();
    let symbols: Vec<T> = grid.symbols();
    let (fwd, inv) = plans::<T>(n);
    let scale = T::one() / T::from_usize(n).expect("grid size");
    let mut c = to_complex(data);
    for_each_line(grid, &mut c, axis, |lines| {
        fwd.process(lines);
        for line in lines.chunks_mut(n) {
            for (z, &k) in line.iter_mut().zip(&symbols) {
                // (i k) z, normalized for the round trip
                *z = Complex::new(-z.im * k * scale, z.re * k * scale);
            }
        }
        inv.process(lines);
    });
    c.into_par_iter().map(|z| z.re).collect()
}

fn central_difference<T: Real>(grid: Grid, data: &[T], axis: usize) -> Vec<T> {
    let n = grid.n();
    let stride = grid.stride(axis);
    let half_inv_h = T::from_usize(n).expect("grid size") * T::lit(0.5);
    (0..data.len())
        .into_par_iter()
        .map(|idx| {
            let m = (idx / stride) % n;
            let base = idx - m * stride;
            let up = base + ((m + 1) % n) * stride;
            let down = base + ((m + n - 1) % n) * stride;
            (data[up] - data[down]) * half_inv_h
        })
        .collect()
}

/// Zeroes every Fourier mode with some `|k_a| > n/3` (the 2/3 rule).
pub fn dealias<T: Real>(grid: Grid, data: &[T]) -> Vec<T> {
    let n = grid.n();
    let cutoff = n as i64 / 3;
    let mut c = fft4(grid, data);
    c.par_iter_mut().enumerate().for_each(|(idx, z)| {
        if grid
            .coords(idx)
            .iter()
            .any(|&m| grid.frequency(m).abs() > cutoff)
        {
            *z = Complex::new(T::zero(), T::zero());
        }
    });
    ifft4_real(grid, c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wave(grid: Grid, f: impl Fn([f64; 4]) -> f64) -> Vec<f64> {
        (0..grid.len()).map(|s| f(grid.point(s))).collect()
    }

    #[test]
    fn transform_round_trip() {
        let g = Grid::spectral(6).unwrap();
        let data: Vec<f64> = (0..g.len())
            .map(|i| ((i * 7919) % 101) as f64 / 13.0)
            .collect();
        let back = ifft4_real(g, fft4(g, &data));
        for (a, b) in data.iter().zip(&back) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn transform_of_single_mode() {
        let g = Grid::spectral(4).unwrap();
        let tau = std::f64::consts::TAU;
        let data = wave(g, |x| (tau * x[1]).cos());
        let c = fft4(g, &data);
        let half = g.len() as f64 / 2.0;
        for (idx, z) in c.iter().enumerate() {
            let expect = if idx == g.index([0, 1, 0, 0]) || idx == g.index([0, 3, 0, 0]) {
                half
            } else {
                0.0
            };
            assert!(
                (z.re - expect).abs() < 1e-10 && z.im.abs() < 1e-10,
                "{idx} {z}"
            );
        }
    }

    #[test]
    fn derivatives_of_sine_along_every_axis() {
        let tau = std::f64::consts::TAU;
        for scheme in [Scheme::Spectral, Scheme::Fd2] {
            let g = Grid::new(8, scheme).unwrap();
            let factor = match scheme {
                Scheme::Spectral => tau,
                Scheme::Fd2 => (tau / 8.0).sin() * 8.0,
            };
            for axis in 0..4 {
                let d = partial(g, &wave(g, |x| (tau * x[axis]).sin()), axis);
                let expect = wave(g, |x| factor * (tau * x[axis]).cos());
                for (a, b) in d.iter().zip(&expect) {
                    assert!((a - b).abs() < 1e-12, "{scheme} axis {axis}");
                }
                let other = partial(g, &wave(g, |x| (tau * x[axis]).sin()), (axis + 1) % 4);
                assert!(other.iter().all(|v| v.abs() < 1e-12));
            }
        }
    }

    #[test]
    fn dealias_keeps_low_modes_and_removes_high_ones() {
        let g = Grid::spectral(8).unwrap();
        let tau = std::f64::consts::TAU;
        let low = wave(g, |x| (tau * 2.0 * x[0]).sin() + 0.5);
        let out = dealias(g, &low);
        for (a, b) in low.iter().zip(&out) {
            assert!((a - b).abs() < 1e-13);
        }
        let high = wave(g, |x| (tau * 3.0 * x[2]).cos());
        assert!(dealias(g, &high).iter().all(|v| v.abs() < 1e-13));
    }
}
