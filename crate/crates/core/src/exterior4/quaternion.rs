//! Quaternion triples of complex structures and the reconstruction of a
//! metric from its volume form and its space of self-dual 2-forms.

use super::forms::{Form2, Form4, LinMap4, Vector4};
use super::metric::Metric4;
use crate::error::{Error, Result};
use crate::scalar::{Real, Ring};

/// Pivot tolerance of the wedge Gram-Schmidt.
pub const GRAM_PIVOT_TOL: f64 = 1e-10;

/// Threshold for accepting a probe vector when fixing the overall sign.
pub const PROBE_TOL: f64 = 1e-8;

/// The standard hyperKähler triple on `H = R^4`:
/// `omega_i = e0^e_i + e_j^e_k` and `J_i` left multiplication by `i, j, k`.
pub fn standard_triple<T: Ring>() -> ([Form2<T>; 3], [LinMap4<T>; 3]) {
    let o = T::one();
    let z = T::zero();
    let omegas = [
        Form2([o, z, z, o, z, z]),
        Form2([z, o, z, z, o, z]),
        Form2([z, z, o, z, z, o]),
    ];
    let n = -o;
    // columns are the images of e0..e3
    let j1 = LinMap4([[z, n, z, z], [o, z, z, z], [z, z, z, n], [z, z, o, z]]);
    let j2 = LinMap4([[z, z, n, z], [z, z, z, o], [o, z, z, z], [z, n, z, z]]);
    let j3 = LinMap4([[z, z, z, n], [z, z, n, z], [z, o, z, z], [o, z, z, z]]);
    (omegas, [j1, j2, j3])
}

/// Solves `omega2(., J3 .) = omega1`, `omega3(., J1 .) = omega2`,
/// `omega1(., J2 .) = omega3` for `(J1, J2, J3)`.
pub fn quaternion_triple<T: Real>(omegas: &[Form2<T>; 3]) -> Result<[LinMap4<T>; 3]> {
    let p: [LinMap4<T>; 3] = std::array::from_fn(|i| omegas[i].to_matrix());
    let inv = |i: usize| -> Result<LinMap4<T>> {
        let pf = omegas[i].wedge(&omegas[i]).0 * T::lit(0.5);
        if !(pf.abs() > T::lit(super::rho::U_FLOOR)) {
            return Err(Error::degenerate(pf.as_f64()));
        }
        p[i].inverse().ok_or_else(|| Error::degenerate(pf.as_f64()))
    };
    // omega_a(v, J w) = v^T P_a J w
    let j3 = inv(1)?.mul(&p[0]);
    let j1 = inv(2)?.mul(&p[1]);
    let j2 = inv(0)?.mul(&p[2]);
    Ok([j1, j2, j3])
}

/// The unique metric with volume form `dvol` whose self-dual 2-forms are
/// spanned by `basis`.
pub fn metric_from_vol_and_plane<T: Real>(
    dvol: Form4<T>,
    basis: &[Form2<T>; 3],
) -> Result<Metric4<T>> {
    let vol = dvol.0;
    if !(vol > T::zero()) {
        return Err(Error::NotPositivePlane);
    }
    let scale = basis.iter().fold(T::zero(), |m, b| m.max(b.norm_sq()));
    let pivot_tol = T::lit(GRAM_PIVOT_TOL) * scale / vol;

    // Gram-Schmidt for the pairing <a, b> = a^b / dvol, normalized to 2.
    let mut ortho: Vec<Form2<T>> = Vec::with_capacity(3);
    for b in basis {
        let mut w = *b;
        for o in &ortho {
            let c = w.wedge(o).0 / vol / T::lit(2.0);
            w -= o.scale(c);
        }
        let q = w.wedge(&w).0 / vol;
        if !(q > pivot_tol) {
            return Err(Error::NotPositivePlane);
        }
        ortho.push(w.scale((T::lit(2.0) / q).sqrt()));
    }
    let mut omegas = [ortho[0], ortho[1], ortho[2]];
    let mut js = quaternion_triple(&omegas)?;

    let probe = (0..4)
        .map(|i| {
            let v = Vector4::basis(i);
            omegas[0].eval(&v, &js[0].apply(&v))
        })
        .find(|s| s.abs() > T::lit(PROBE_TOL))
        .ok_or(Error::NotPositivePlane)?;
    if probe < T::zero() {
        js[0] = js[0].scale(-T::one());
        js[1] = js[1].scale(-T::one());
        omegas[2] = -omegas[2];
    }
    // g(v, w) = omega1(v, J1 w)
    let g = omegas[0].to_matrix().mul(&js[0]);
    Metric4::new(g).map_err(|_| Error::NotPositivePlane)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_triple_solves_its_own_relations() {
        let (om, js) = standard_triple::<f64>();
        assert_eq!(quaternion_triple(&om).unwrap(), js);
        // J1 e0 = e1 (left multiplication by i sends 1 to i)
        assert_eq!(js[0].apply(&Vector4::basis(0)), Vector4::basis(1));
        assert_eq!(js[0].mul(&js[1]), js[2]);
        assert_eq!(js[1].mul(&js[0]), js[2].scale(-1.0));
    }

    #[test]
    fn scaled_triple_gives_same_structures() {
        let (om, js) = standard_triple::<f64>();
        let scaled = om.map(|w| w.scale(2.0));
        assert_eq!(quaternion_triple(&scaled).unwrap(), js);
    }

    #[test]
    fn reconstruction_from_standard_and_permuted_bases() {
        let (om, _) = standard_triple::<f64>();
        let e = Metric4::euclid();
        for basis in [
            [om[0], om[1], om[2]],
            [om[1], om[2], om[0]],
            [om[0], om[2], om[1]],
        ] {
            let g = metric_from_vol_and_plane(Form4(1.0), &basis).unwrap();
            assert!(g.max_diff(&e) < 1e-14, "{g:?}");
        }
    }

    #[test]
    fn anti_self_dual_plane_is_rejected() {
        let neg = [
            Form2([1.0, 0.0, 0.0, -1.0, 0.0, 0.0]),
            Form2([0.0, 1.0, 0.0, 0.0, -1.0, 0.0]),
            Form2([0.0, 0.0, 1.0, 0.0, 0.0, -1.0]),
        ];
        assert_eq!(
            metric_from_vol_and_plane(Form4(1.0), &neg),
            Err(Error::NotPositivePlane)
        );
    }
}
