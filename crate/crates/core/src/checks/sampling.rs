//! Seeded random instances for the identity suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exterior4::{sd_split, Form1, Form2, LinMap4, Metric4, Vector4};

/// Independent stream for sample `index` of a suite run with `seed`; the
/// instance does not depend on how samples are distributed over threads.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    rng.random_range(-1.0..=1.0)
}

pub fn form1(rng: &mut ChaCha8Rng) -> Form1<f64> {
    Form1(std::array::from_fn(|_| uniform(rng)))
}

pub fn form2(rng: &mut ChaCha8Rng) -> Form2<f64> {
    Form2(std::array::from_fn(|_| uniform(rng)))
}

pub fn vector(rng: &mut ChaCha8Rng) -> Vector4<f64> {
    Vector4(std::array::from_fn(|_| uniform(rng)))
}

/// A 2-form with `rho ^ rho >= 2 min_u dvol_g`, by rejection.
pub fn nondegenerate(rng: &mut ChaCha8Rng, g: &Metric4<f64>, min_u: f64) -> Form2<f64> {
    loop {
        let rho = form2(rng);
        if crate::exterior4::u_of(&rho, g) > min_u {
            return rho;
        }
    }
}

/// Largest accepted condition number `max|L| max|L^{-1}|` of sampled maps.
pub const MAX_CONDITION: f64 = 10.0;

/// An orientation-preserving linear map `1 + B/2` with `det >= 0.2` and
/// condition number at most [`MAX_CONDITION`].
pub fn gl_plus(rng: &mut ChaCha8Rng) -> LinMap4<f64> {
    loop {
        let b = LinMap4(std::array::from_fn(|r| {
            std::array::from_fn(|c| {
                let delta = if r == c { 1.0 } else { 0.0 };
                delta + 0.5 * uniform(rng)
            })
        }));
        if b.det() >= 0.2
            && b.max_abs() * b.inverse().map_or(f64::INFINITY, |i| i.max_abs()) <= MAX_CONDITION
        {
            return b;
        }
    }
}

/// The metric `L^T L` of a random orientation-preserving `L`, which makes
/// `L` an oriented isometry onto the Euclidean space.
pub fn metric_of(l: &LinMap4<f64>) -> Metric4<f64> {
    Metric4::new(l.transpose().mul(l)).expect("L^T L is positive definite")
}

/// `L / det(L)^{1/4}`, whose metric has unit volume.
pub fn unimodular(l: &LinMap4<f64>) -> LinMap4<f64> {
    l.scale(l.det().powf(-0.25))
}

/// A rotation in `SO(4)` from Gram-Schmidt on a random matrix.
pub fn rotation(rng: &mut ChaCha8Rng) -> LinMap4<f64> {
    let l = gl_plus(rng);
    let mut cols: Vec<[f64; 4]> = Vec::with_capacity(4);
    for c in 0..4 {
        let mut v: [f64; 4] = std::array::from_fn(|r| l.0[r][c]);
        for q in &cols {
            let p: f64 = (0..4).map(|i| v[i] * q[i]).sum();
            v.iter_mut().zip(q).for_each(|(x, y)| *x -= p * y);
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        cols.push(v.map(|x| x / norm));
    }
    let mut q = LinMap4(std::array::from_fn(|r| std::array::from_fn(|c| cols[c][r])));
    if q.det() < 0.0 {
        q.0.iter_mut().for_each(|row| row[3] = -row[3]);
    }
    q
}

/// A point on the unit sphere `S^2`.
pub fn unit3(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let t: [f64; 3] = std::array::from_fn(|_| uniform(rng));
        let n = t.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 0.1 {
            return t.map(|x| x / n);
        }
    }
}

/// Self-dual parts of three random forms, resampled until their wedge
/// Gram matrix is well conditioned (`det >= 0.05` times the product of
/// its diagonal entries).
pub fn self_dual_basis(rng: &mut ChaCha8Rng, g: &Metric4<f64>) -> [Form2<f64>; 3] {
    loop {
        let b: [Form2<f64>; 3] = std::array::from_fn(|_| sd_split(&form2(rng), g).0);
        let m: [[f64; 3]; 3] =
            std::array::from_fn(|i| std::array::from_fn(|j| b[i].wedge(&b[j]).0));
        let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        if det >= 0.05 * m[0][0] * m[1][1] * m[2][2] {
            return b;
        }
    }
}
