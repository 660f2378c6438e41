//! Pointwise suites: the four-dimensional linear algebra behind `g^rho`
//! and the `Theta` map.

use rand_chacha::ChaCha8Rng;

use super::sampling::{self, sample_rng};
use super::{run_instances, DiagnosticReport, Outcome};
use crate::exterior4::{
    a_of, g_rho, j_rho, metric_from_vol_and_plane, quaternion_triple, r_rho, sd_split,
    standard_triple, star_rho_1, star_rho_2, theta_dot_point, theta_point, u_of, Form1, Form2,
    Form3, LinMap4, Metric4,
};
use crate::hyperkahler::{k_point, theta_hk_point};

/// Relative tolerance of the linear-algebra identities.
pub const ALGEBRA_TOL: f64 = 1e-9;
/// Relative tolerance of the `Theta` identities.
pub const THETA_TOL: f64 = 1e-9;
/// Relative tolerance of the hyperKähler rewriting of `Theta`.
pub const HK_TOL: f64 = 1e-11;
/// Lower bound of `u` for sampled forms. Together with `det L >= 0.2` it
/// bounds the condition number of `g^rho`, so that identities are compared
/// at a precision the instance supports.
pub const MIN_U: f64 = 0.2;

fn flat(m: &LinMap4<f64>) -> Vec<f64> {
    m.0.iter().flatten().copied().collect()
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn anti_omega1() -> Form2<f64> {
    Form2([1.0, 0.0, 0.0, -1.0, 0.0, 0.0])
}

/// `L^* omega_i` and `L^{-1} J_i L`: a hyperKähler triple of `g = L^T L`.
fn pulled_triple(l: &LinMap4<f64>) -> ([Form2<f64>; 3], [LinMap4<f64>; 3]) {
    let (om, js) = standard_triple::<f64>();
    let l_inv = l.inverse().expect("det L >= 0.2");
    (om.map(|w| w.pullback(l)), js.map(|j| l_inv.mul(&j).mul(l)))
}

/// `omega(v, J w) = g(v, w)` as matrices, up to relative `tol`.
fn is_compatible(omega: &Form2<f64>, j: &LinMap4<f64>, g: &Metric4<f64>, tol: f64) -> bool {
    let lhs = omega.to_matrix().mul(j);
    lhs.max_diff(g.matrix()) <= tol * g.matrix().max_abs()
}

/// `dvol_omega = dvol_g` and `*_g(omega ^ lambda) = -lambda o J` on a
/// basis of covectors.
fn star_condition(omega: &Form2<f64>, j: &LinMap4<f64>, g: &Metric4<f64>, tol: f64) -> bool {
    let vol_ok = (omega.wedge(omega).0 * 0.5 - g.volume()).abs() <= tol * g.volume();
    vol_ok
        && (0..4).all(|b| {
            let lambda = Form1::basis(b);
            let lhs = g.hodge(&omega.wedge1(&lambda));
            let rhs = -lambda.compose(j);
            (lhs - rhs).max_abs() <= tol * (1.0 + rhs.max_abs())
        })
}

/// The complex structure `J = P^{-1} G` solving `omega(v, J w) = g(v, w)`,
/// and whether it squares to `-1`.
fn induced_structure_is_complex(omega: &Form2<f64>, g: &Metric4<f64>, tol: f64) -> bool {
    match omega.to_matrix().inverse() {
        Some(p_inv) => {
            let j = p_inv.mul(g.matrix());
            j.mul(&j).max_diff(&LinMap4::identity().scale(-1.0))
                <= tol * (1.0 + j.max_abs().powi(2))
        }
        None => false,
    }
}

fn appendix_instance(seed: u64, index: u64) -> Vec<Outcome> {
    let rng = &mut sample_rng(seed, index);
    let tol = ALGEBRA_TOL;
    let mut out = Vec::with_capacity(40);

    let l = sampling::gl_plus(rng);
    let g = sampling::metric_of(&l);
    let gu = sampling::metric_of(&sampling::unimodular(&l));
    let rho = sampling::nondegenerate(rng, &g, MIN_U);
    let (omega_t, omega_s, tau) = (
        sampling::form2(rng),
        sampling::form2(rng),
        sampling::form2(rng),
    );
    let lambda = sampling::form1(rng);
    let v = sampling::vector(rng);
    let u = u_of(&rho, &g);

    // determinant of A
    out.push(Outcome::scalar(
        "det_a",
        "det(A) = u^2",
        tol,
        a_of(&rho, &g).det(),
        u * u,
        0.0,
    ));

    // Hodge duality
    let star2 = gu.hodge(&gu.hodge(&lambda));
    out.push(Outcome::compare(
        "hodge_square_1",
        "** = -1 on 1-forms",
        tol,
        &star2.0,
        &(-lambda).0,
        sup(&lambda.0),
    ));
    let star2 = gu.hodge(&gu.hodge(&omega_t));
    out.push(Outcome::compare(
        "hodge_square_2",
        "** = +1 on 2-forms",
        tol,
        &star2.0,
        &omega_t.0,
        sup(&omega_t.0),
    ));
    let gamma = Form3(lambda.0);
    let star2 = gu.hodge(&gu.hodge(&gamma));
    out.push(Outcome::compare(
        "hodge_square_3",
        "** = -1 on 3-forms",
        tol,
        &star2.0,
        &(-gamma).0,
        sup(&gamma.0),
    ));
    let dvol = g.dvol();
    let lhs = g.hodge(&dvol.interior(&v));
    let rhs = -g.flat(&v);
    out.push(Outcome::compare(
        "star_interior_dvol",
        "*_g iota(v) dvol_g = -g(v, .)",
        tol,
        &lhs.0,
        &rhs.0,
        0.0,
    ));
    let lhs = g.hodge(&g.flat(&v));
    let rhs = dvol.interior(&v);
    out.push(Outcome::compare(
        "star_metric_dual",
        "*_g g(v, .) = iota(v) dvol_g",
        tol,
        &lhs.0,
        &rhs.0,
        0.0,
    ));

    // compatible triples (omega, J, g) pulled back from the standard one
    let (oms, js) = pulled_triple(&l);
    let (omega, j) = (oms[0], js[0]);
    let lhs = flat(&omega.to_matrix().mul(&j));
    out.push(Outcome::compare(
        "compatible_metric",
        "omega(., J .) = g",
        tol,
        &lhs,
        &flat(g.matrix()),
        0.0,
    ));
    let lhs = g.hodge(&omega.wedge1(&lambda));
    let rhs = -lambda.compose(&j);
    out.push(Outcome::compare(
        "compatible_star",
        "*_g(omega ^ lambda) = -lambda o J",
        tol,
        &lhs.0,
        &rhs.0,
        0.0,
    ));
    out.push(Outcome::scalar(
        "compatible_volume",
        "dvol_omega = dvol_g",
        tol,
        omega.wedge(&omega).0 * 0.5,
        g.volume(),
        0.0,
    ));

    // omega(., J .) = g  <=>  dvol_omega = dvol_g and *_g(omega ^ .) = -. o J
    let (cand_omega, cand_j, expected) = match index % 3 {
        0 => (omega, j, true),
        1 => (omega, js[1], false),
        _ => (omega.scale(1.5), j, false),
    };
    let first = is_compatible(&cand_omega, &cand_j, &g, 1e-9);
    let second = star_condition(&cand_omega, &cand_j, &g, 1e-9);
    out.push(Outcome::holds(
        "compatibility_equivalence",
        "omega(., J .) = g  <=>  dvol_omega = dvol_g and *_g(omega ^ lambda) = -lambda o J",
        first == second && first == expected,
        first as u8 as f64,
        second as u8 as f64,
    ));

    // self-dual forms of the right volume are compatible
    let t = sampling::unit3(rng);
    let omega_sd = oms[0].scale(t[0]) + oms[1].scale(t[1]) + oms[2].scale(t[2]);
    let j_sd = js[0]
        .scale(t[0])
        .add(&js[1].scale(t[1]))
        .add(&js[2].scale(t[2]));
    let lhs = flat(&omega_sd.to_matrix().mul(&j_sd));
    out.push(Outcome::compare(
        "self_dual_is_compatible",
        "omega = sum t_i omega_i, |t| = 1  =>  omega(., J .) = g for J = sum t_i J_i",
        tol,
        &lhs,
        &flat(g.matrix()),
        0.0,
    ));
    let s = 0.3 + 0.7 * sampling::uniform(rng).abs();
    let (cand, expected) = match index % 3 {
        0 => (omega_sd, true),
        1 => (
            omega.scale(s.cosh()) + anti_omega1().pullback(&l).scale(s.sinh()),
            false,
        ),
        _ => (omega_sd.scale(2.0), false),
    };
    let first = induced_structure_is_complex(&cand, &g, 1e-9);
    let vol_ok = (cand.wedge(&cand).0 * 0.5 - g.volume()).abs() <= 1e-9 * g.volume();
    let sd_ok = (g.hodge(&cand) - cand).max_abs() <= 1e-9 * cand.max_abs();
    let second = vol_ok && sd_ok;
    out.push(Outcome::holds(
        "self_dual_equivalence",
        "omega compatible with g  <=>  dvol_omega = dvol_g and *_g omega = omega",
        first == second && first == expected,
        first as u8 as f64,
        second as u8 as f64,
    ));

    // the reflection R
    let r = |x: &Form2<f64>| r_rho(x, &rho).expect("rho nondegenerate");
    let scale_r = sup(&omega_t.0) * (1.0 + sup(&rho.0).powi(2) / (u * g.volume()));
    out.push(Outcome::compare(
        "r_involution",
        "R R omega = omega",
        tol,
        &r(&r(&omega_t)).0,
        &omega_t.0,
        scale_r,
    ));
    out.push(Outcome::scalar(
        "r_wedge",
        "R omega ^ R tau = omega ^ tau",
        tol,
        r(&omega_t).wedge(&r(&tau)).0,
        omega_t.wedge(&tau).0,
        scale_r * scale_r,
    ));
    out.push(Outcome::compare(
        "r_rho",
        "R rho = -rho",
        tol,
        &r(&rho).0,
        &(-rho).0,
        0.0,
    ));
    let perp = omega_t - rho.scale(omega_t.wedge(&rho).0 / rho.wedge(&rho).0);
    out.push(Outcome::compare(
        "r_fixes_complement",
        "tau ^ rho = 0  =>  R tau = tau",
        tol,
        &r(&perp).0,
        &perp.0,
        scale_r,
    ));

    // the metric g^rho and its characterizations
    let g_tilde = g_rho(&rho, &g).expect("rho nondegenerate");
    out.push(Outcome::scalar(
        "g_rho_volume",
        "dvol_{g^rho} = dvol_g",
        tol,
        g_tilde.volume(),
        g.volume(),
        0.0,
    ));
    let a = a_of(&rho, &g);
    let from_a = a.transpose().mul(g.matrix()).mul(&a).scale(1.0 / u);
    out.push(Outcome::compare(
        "g_rho_formula",
        "g^rho(v, w) = u^{-1} g(A v, A w)",
        tol,
        &flat(g_tilde.matrix()),
        &flat(&from_a),
        0.0,
    ));
    let lhs = star_rho_1(&lambda, &rho, &g).expect("rho nondegenerate");
    let rhs = g_tilde.hodge(&lambda);
    out.push(Outcome::compare(
        "star_rho_one_forms",
        "*_{g^rho} lambda = u^{-1} rho ^ *_g(rho ^ lambda)",
        tol,
        &lhs.0,
        &rhs.0,
        0.0,
    ));
    let lhs = g_tilde.hodge(&rho.interior(&v));
    let rhs = -rho.wedge1(&g.flat(&v));
    out.push(Outcome::compare(
        "star_rho_interior",
        "*_{g^rho} iota(v) rho = -rho ^ g(v, .)",
        tol,
        &lhs.0,
        &rhs.0,
        0.0,
    ));
    let j_tilde = j_rho(&j, &rho).expect("rho nondegenerate");
    let rhs = flat(&r(&omega).to_matrix().mul(&j_tilde));
    out.push(Outcome::compare(
        "g_rho_from_reflected_pair",
        "g^rho = (R omega)(., J^rho .) for g = omega(., J .)",
        tol,
        &flat(g_tilde.matrix()),
        &rhs,
        0.0,
    ));
    let (lhs, rhs): (Vec<f64>, Vec<f64>) = oms
        .iter()
        .flat_map(|w| {
            let rw = r(w);
            let s = g_tilde.hodge(&rw);
            s.0.into_iter().zip(rw.0)
        })
        .unzip();
    out.push(Outcome::compare(
        "self_dual_image",
        "Lambda^+_{g^rho} = R Lambda^+_g",
        tol,
        &lhs,
        &rhs,
        0.0,
    ));
    let lhs = star_rho_2(&omega_s, &rho, &g).expect("rho nondegenerate");
    let rhs = g_tilde.hodge(&omega_s);
    out.push(Outcome::compare(
        "star_rho_two_forms",
        "*_{g^rho} omega = R *_g R omega",
        tol,
        &lhs.0,
        &rhs.0,
        scale_r,
    ));
    let twice = star_rho_2(&lhs, &rho, &g).expect("rho nondegenerate");
    out.push(Outcome::compare(
        "star_rho_square",
        "*^rho *^rho = 1 on 2-forms",
        tol,
        &twice.0,
        &omega_s.0,
        scale_r * scale_r,
    ));

    // reconstruction of a metric from its volume form and self-dual forms
    let basis = sampling::self_dual_basis(rng, &g);
    let rebuilt = metric_from_vol_and_plane(g.dvol(), &basis);
    let rebuilt = rebuilt
        .map(|m| flat(m.matrix()))
        .unwrap_or_else(|_| vec![f64::NAN; 16]);
    out.push(Outcome::compare(
        "metric_reconstruction",
        "g is determined by dvol_g and Lambda^+_g",
        tol,
        &rebuilt,
        &flat(g.matrix()),
        0.0,
    ));

    quaternion_checks(rng, &l, index, &mut out);
    out
}

fn quaternion_checks(rng: &mut ChaCha8Rng, l: &LinMap4<f64>, index: u64, out: &mut Vec<Outcome>) {
    let tol = ALGEBRA_TOL;
    let s = 0.5 + 1.5 * sampling::uniform(rng).abs();
    let (oms, _) = pulled_triple(l);
    let oms = oms.map(|w| w.scale(s));
    let js = quaternion_triple(&oms).expect("nondegenerate triple");
    let (v, w) = (sampling::vector(rng), sampling::vector(rng));
    let id = LinMap4::<f64>::identity();
    let (mut lhs, mut rhs) = (Vec::new(), Vec::new());
    for i in 0..3 {
        let (jj, k) = ((i + 1) % 3, (i + 2) % 3);
        lhs.extend(flat(&js[i].mul(&js[i])));
        rhs.extend(flat(&id.scale(-1.0)));
        lhs.extend(flat(&js[jj].mul(&js[k])));
        rhs.extend(flat(&js[i]));
        lhs.extend(flat(&js[k].mul(&js[jj])));
        rhs.extend(flat(&js[i].scale(-1.0)));
    }
    out.push(Outcome::compare(
        "quaternion_relations",
        "J_i^2 = -1, J_j J_k = -J_k J_j = J_i",
        tol,
        &lhs,
        &rhs,
        0.0,
    ));
    let (mut lhs, mut rhs) = (Vec::new(), Vec::new());
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let target = oms[k].eval(&v, &w);
        lhs.push(oms[i].eval(&js[j].apply(&v), &w));
        rhs.push(target);
        lhs.push(oms[i].eval(&v, &js[j].apply(&w)));
        rhs.push(target);
    }
    out.push(Outcome::compare(
        "quaternion_cyclic",
        "omega_i(J_j v, w) = omega_i(v, J_j w) = omega_k(v, w)",
        tol,
        &lhs,
        &rhs,
        0.0,
    ));
    let cols = [v, js[0].apply(&v), js[1].apply(&v), js[2].apply(&v)];
    let m = LinMap4(std::array::from_fn(|r| {
        std::array::from_fn(|c| cols[c].0[r])
    }));
    let hadamard: f64 = cols.iter().map(|c| c.norm_sq().sqrt()).product();
    let ratio = m.det().abs() / hadamard;
    out.push(Outcome::holds(
        "quaternion_basis",
        "v, J_1 v, J_2 v, J_3 v is a basis",
        ratio > 1e-6,
        ratio,
        1e-6,
    ));
    let b: Vec<f64> = (0..3).map(|i| oms[i].eval(&v, &js[i].apply(&w))).collect();
    out.push(Outcome::compare(
        "quaternion_common_metric",
        "omega_1(v, J_1 w) = omega_2(v, J_2 w) = omega_3(v, J_3 w)",
        tol,
        &b[1..],
        &[b[0], b[0]],
        0.0,
    ));
    let lhs: Vec<f64> = (0..3).map(|i| oms[i].eval(&w, &js[i].apply(&v))).collect();
    out.push(Outcome::compare(
        "quaternion_symmetric",
        "omega_i(w, J_i v) = omega_i(v, J_i w)",
        tol,
        &lhs,
        &b,
        0.0,
    ));
    let pos: Vec<f64> = (0..3).map(|i| oms[i].eval(&v, &js[i].apply(&v))).collect();
    let floor = 1e-9 * s * v.norm_sq();
    out.push(Outcome::holds(
        "quaternion_definite",
        "omega_i(v, J_i v) != 0 for v != 0",
        pos.iter().all(|p| p.abs() > floor),
        pos.iter().fold(f64::INFINITY, |m, p| m.min(p.abs())),
        floor,
    ));

    // wedge-orthonormal triples are exactly the quaternionic ones
    let (cand, expected) = if index.is_multiple_of(2) {
        (oms, true)
    } else {
        let g = Metric4::euclid();
        (
            std::array::from_fn(|_| sampling::nondegenerate(rng, &g, 0.05)),
            false,
        )
    };
    let wedge_scale = cand.iter().fold(0.0f64, |m, x| m.max(x.norm_sq()));
    let first = (0..3).all(|i| {
        (0..3).all(|j| {
            let target = if i == j {
                cand[0].wedge(&cand[0]).0
            } else {
                0.0
            };
            (cand[i].wedge(&cand[j]).0 - target).abs() <= 1e-9 * wedge_scale
        })
    });
    let second = match quaternion_triple(&cand) {
        Ok(js) => {
            let jscale = js.iter().fold(1.0f64, |m, x| m.max(x.max_abs()));
            let t = 1e-9 * jscale * jscale;
            (0..3).all(|i| {
                let (j, k) = ((i + 1) % 3, (i + 2) % 3);
                js[i].mul(&js[i]).max_diff(&id.scale(-1.0)) <= t
                    && js[j].mul(&js[k]).max_diff(&js[i]) <= t
                    && js[k].mul(&js[j]).max_diff(&js[i].scale(-1.0)) <= t
            })
        }
        Err(_) => false,
    };
    out.push(Outcome::holds(
        "quaternion_equivalence",
        "omega_i ^ omega_j = 0, omega_i^2 = omega_j^2  <=>  quaternion relations of J_i",
        first == second && first == expected,
        first as u8 as f64,
        second as u8 as f64,
    ));

    // anticommuting compatible complex structures
    let q = sampling::rotation(rng);
    let (_, std_js) = standard_triple::<f64>();
    let sign = if sampling::uniform(rng) < 0.0 {
        -1.0
    } else {
        1.0
    };
    let rot = std_js.map(|j| q.transpose().mul(&j).mul(&q));
    let rot = [rot[0], rot[1], rot[2].scale(sign)];
    let prod = rot[0].mul(&rot[1]);
    let miss = prod
        .max_diff(&rot[2])
        .min(prod.max_diff(&rot[2].scale(-1.0)));
    out.push(Outcome::absolute(
        "anticommuting_triple",
        "J_1 J_2 = +-J_3",
        tol,
        miss,
        0.0,
    ));
}

/// Identities of four-dimensional linear algebra.
pub fn appendix_a_suite(samples: usize, seed: u64) -> Vec<DiagnosticReport> {
    run_instances(samples, |i| appendix_instance(seed, i))
}

/// Symmetric difference quotient of `theta_point` at step `t`.
fn theta_difference(rho: &Form2<f64>, hat: &Form2<f64>, t: f64, g: &Metric4<f64>) -> Form2<f64> {
    let plus = theta_point(&(*rho + hat.scale(t)), g).expect("step keeps rho admissible");
    let minus = theta_point(&(*rho - hat.scale(t)), g).expect("step keeps rho admissible");
    (plus - minus).scale(0.5 / t)
}

/// Relative tolerance of the extrapolated difference quotient.
pub const FD_TOL: f64 = 1e-6;
/// Steps of the difference-quotient order test.
pub const FD_STEPS: [f64; 2] = [2e-3, 1e-3];

fn theta_instance(seed: u64, index: u64) -> Vec<Outcome> {
    let rng = &mut sample_rng(seed, index);
    let tol = THETA_TOL;
    let mut out = Vec::with_capacity(16);

    let l = sampling::gl_plus(rng);
    let g = sampling::metric_of(&l);
    let vol = g.volume();
    let rho = sampling::nondegenerate(rng, &g, MIN_U);
    let u = u_of(&rho, &g);
    let theta = theta_point(&rho, &g).expect("rho admissible");
    let (plus, minus) = sd_split(&rho, &g);
    let plus_sq = plus.wedge(&plus).0 / vol;
    let minus_sq = -minus.wedge(&minus).0 / vol;
    let scale = sup(&theta.0) * sup(&rho.0) * 6.0;

    out.push(Outcome::scalar(
        "theta_wedge_rho",
        "Theta ^ rho = 0",
        tol,
        theta.wedge(&rho).0 / vol,
        0.0,
        scale / vol,
    ));
    let rhs = plus.scale(2.0 / u) - rho.scale(plus_sq / (u * u));
    out.push(Outcome::compare(
        "theta_plus_form",
        "Theta = 2 rho^+/u - |rho^+/u|^2 rho",
        tol,
        &theta.0,
        &rhs.0,
        0.0,
    ));
    let rhs = (plus.scale(minus_sq) + minus.scale(plus_sq)).scale(-1.0 / (u * u));
    out.push(Outcome::compare(
        "theta_split_form",
        "Theta = -(|rho^-|^2 rho^+ + |rho^+|^2 rho^-)/u^2",
        tol,
        &theta.0,
        &rhs.0,
        0.0,
    ));
    out.push(Outcome::scalar(
        "theta_square",
        "Theta ^ Theta = -2 |rho^+|^2 |rho^-|^2 / u^3 dvol",
        tol,
        theta.wedge(&theta).0 / vol,
        -2.0 * plus_sq * minus_sq / (u * u * u),
        sup(&theta.0).powi(2) * 6.0,
    ));
    out.push(Outcome::scalar(
        "volume_split",
        "|rho^+|^2 - |rho^-|^2 = 2u",
        tol,
        plus_sq - minus_sq,
        2.0 * u,
        0.0,
    ));
    let theta_sd = theta_point(&plus, &g).expect("self-dual forms are admissible");
    out.push(Outcome::compare(
        "theta_vanishes_at_self_dual",
        "rho^- = 0  =>  Theta = 0",
        tol,
        &theta_sd.0,
        &[0.0; 6],
        1.0 / sup(&plus.0),
    ));
    let sq = theta.wedge(&theta).0;
    out.push(Outcome::holds(
        "theta_nonzero_off_self_dual",
        "rho^- != 0  =>  Theta ^ Theta < 0",
        minus_sq <= 1e-12 * plus_sq || sq < 0.0,
        sq,
        minus_sq,
    ));

    // the hyperKähler form of Theta and the volume identities
    let e = Metric4::euclid();
    let rho_e = sampling::nondegenerate(rng, &e, MIN_U);
    let theta_e = theta_point(&rho_e, &e).expect("rho admissible");
    let theta_k = theta_hk_point(&rho_e).expect("rho admissible");
    out.push(Outcome::compare(
        "theta_hk",
        "Theta = sum_i (K_i omega_i - K_i^2 rho / 2)",
        HK_TOL,
        &theta_k.0,
        &theta_e.0,
        0.0,
    ));
    let (ue, k) = k_point(&rho_e).expect("rho admissible");
    let (plus_e, _) = sd_split(&rho_e, &e);
    let (oms, _) = standard_triple::<f64>();
    let from_k = (oms[0].scale(k[0]) + oms[1].scale(k[1]) + oms[2].scale(k[2])).scale(ue / 2.0);
    out.push(Outcome::compare(
        "self_dual_from_k",
        "rho^+ = (u/2) sum_i K_i omega_i",
        HK_TOL,
        &plus_e.0,
        &from_k.0,
        0.0,
    ));
    let k_sq: f64 = k.iter().map(|x| x * x).sum();
    out.push(Outcome::scalar(
        "plus_norm_from_k",
        "2 |rho^+|^2 = u^2 sum_i K_i^2",
        HK_TOL,
        2.0 * plus_e.norm_sq(),
        ue * ue * k_sq,
        0.0,
    ));

    // the derivative of Theta against difference quotients
    // scale the direction to the distance u vol / |rho| from rho to the
    // degenerate forms, so that the step is small on every instance
    let hat = sampling::form2(rng);
    let hat = hat.scale(u * vol / (sup(&rho.0) * sup(&hat.0)));
    let exact = theta_dot_point(&rho, &hat, &g).expect("rho admissible");
    let coarse = theta_difference(&rho, &hat, FD_STEPS[0], &g);
    let fine = theta_difference(&rho, &hat, FD_STEPS[1], &g);
    // Richardson extrapolation cancels the O(t^2) term of both quotients
    let extrapolated = (fine.scale(4.0) - coarse).scale(1.0 / 3.0);
    out.push(Outcome::compare(
        "theta_dot_difference",
        "Theta-hat = d/dt Theta^{rho + t rho_hat} at t = 0",
        FD_TOL,
        &extrapolated.0,
        &exact.0,
        0.0,
    ));
    let e_coarse = (coarse - exact).max_abs();
    let e_fine = (fine - exact).max_abs();
    let ratio = e_coarse / e_fine;
    out.push(Outcome::holds(
        "theta_dot_second_order",
        "difference quotient error ratio 4 +- 20% when the step halves",
        (3.2..=4.8).contains(&ratio),
        ratio,
        4.0,
    ));
    out
}

/// Identities of the `Theta` map and its derivative.
pub fn theta_suite(samples: usize, seed: u64) -> Vec<DiagnosticReport> {
    run_instances(samples, |i| theta_instance(seed, i))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_runs_pass_and_are_reproducible() {
        let a = appendix_a_suite(300, 11);
        for r in &a {
            assert!(r.passed, "{r:?}");
        }
        assert_eq!(a, appendix_a_suite(300, 11));
        let t = theta_suite(300, 11);
        for r in &t {
            assert!(r.passed, "{r:?}");
        }
    }
}
