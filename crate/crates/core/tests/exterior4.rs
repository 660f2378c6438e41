//! Independent oracles for the pointwise exterior algebra: 2-forms are
//! expanded to full antisymmetric matrices and wedged/contracted by brute
//! force over permutations.

use approx::assert_relative_eq;
use num_rational::Rational64;
use proptest::prelude::*;

use donflow::exterior4::{
    a_of, hodge, j_rho, r_rho, standard_triple, star_rho_2, theta_point, u_of, Form1, Form2, Form4,
    LinMap4, Metric4, Vector4,
};

const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (2, 3), (3, 1), (1, 2)];

fn full(w: &Form2<f64>) -> [[f64; 4]; 4] {
    let mut m = [[0.0; 4]; 4];
    for (a, &(i, j)) in PAIRS.iter().enumerate() {
        m[i][j] = w.0[a];
        m[j][i] = -w.0[a];
    }
    m
}

fn permutations() -> Vec<([usize; 4], f64)> {
    let mut out = Vec::new();
    for p in 0..256usize {
        let s = [p & 3, (p >> 2) & 3, (p >> 4) & 3, (p >> 6) & 3];
        let distinct = (0..4).all(|i| (i + 1..4).all(|j| s[i] != s[j]));
        if distinct {
            let inversions = (0..4)
                .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
                .filter(|&(i, j)| s[i] > s[j])
                .count();
            out.push((s, if inversions % 2 == 0 { 1.0 } else { -1.0 }));
        }
    }
    out
}

/// `(a ^ b)(e0, e1, e2, e3)` from the alternation formula.
fn wedge_oracle(a: &Form2<f64>, b: &Form2<f64>) -> f64 {
    let (fa, fb) = (full(a), full(b));
    permutations()
        .iter()
        .map(|(s, sign)| sign * fa[s[0]][s[1]] * fb[s[2]][s[3]])
        .sum::<f64>()
        / 4.0
}

fn det4(m: &[[f64; 4]; 4]) -> f64 {
    permutations()
        .iter()
        .map(|(s, sign)| sign * (0..4).map(|r| m[r][s[r]]).product::<f64>())
        .sum()
}

/// Inverse by Gauss-Jordan elimination with partial pivoting.
fn inverse4(m: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    let mut a = *m;
    let mut inv = [[0.0; 4]; 4];
    (0..4).for_each(|i| inv[i][i] = 1.0);
    for c in 0..4 {
        let p = (c..4)
            .max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs()))
            .unwrap();
        a.swap(c, p);
        inv.swap(c, p);
        let d = a[c][c];
        for k in 0..4 {
            a[c][k] /= d;
            inv[c][k] /= d;
        }
        for r in 0..4 {
            if r != c {
                let f = a[r][c];
                for k in 0..4 {
                    a[r][k] -= f * a[c][k];
                    inv[r][k] -= f * inv[c][k];
                }
            }
        }
    }
    inv
}

/// `<a, b>_g = 1/2 g^ik g^jl a_ij b_kl`.
fn inner_oracle(gi: &[[f64; 4]; 4], a: &Form2<f64>, b: &Form2<f64>) -> f64 {
    let (fa, fb) = (full(a), full(b));
    let mut s = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    s += gi[i][k] * gi[j][l] * fa[i][j] * fb[k][l];
                }
            }
        }
    }
    s / 2.0
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn form2() -> impl Strategy<Value = Form2<f64>> {
    prop::array::uniform6(-1.0f64..1.0).prop_map(Form2)
}

fn form1() -> impl Strategy<Value = Form1<f64>> {
    prop::array::uniform4(-1.0f64..1.0).prop_map(Form1)
}

fn vector() -> impl Strategy<Value = Vector4<f64>> {
    prop::array::uniform4(-1.0f64..1.0).prop_map(Vector4)
}

/// `L^T L` for `L = 1 + B/2` with a bounded condition number.
fn metric() -> impl Strategy<Value = Metric4<f64>> {
    prop::array::uniform16(-0.5f64..0.5)
        .prop_map(|b| {
            LinMap4(std::array::from_fn(|r| {
                std::array::from_fn(|c| b[4 * r + c] + if r == c { 1.0 } else { 0.0 })
            }))
        })
        .prop_filter("well conditioned", |l| l.det().abs() > 0.2)
        .prop_map(|l| Metric4::new(l.transpose().mul(&l)).unwrap())
}

#[test]
fn euclidean_star_swaps_the_triples() {
    let g = Metric4::<f64>::euclid();
    for (a, &(i, j)) in PAIRS.iter().enumerate() {
        let star = hodge(&g, &Form2::<f64>::basis(i, j));
        let mut expected = Form2::zero();
        expected.0[(a + 3) % 6] = 1.0;
        assert_eq!(star, expected, "*e{i}{j}");
    }
    let (omegas, _) = standard_triple::<f64>();
    for w in omegas {
        assert_eq!(hodge(&g, &w), w);
    }
}

#[test]
fn diagonal_metric_star_on_two_forms() {
    // *e01 = sqrt(det g) g^00 g^11 e23 for a diagonal metric
    let g = Metric4::diag([1.0, 4.0, 9.0, 16.0]).unwrap();
    let star = hodge(&g, &Form2::<f64>::basis(0, 1));
    assert_relative_eq!(star.0[3], 24.0 / 4.0, max_relative = 1e-14);
    assert!(star.0.iter().enumerate().all(|(a, v)| a == 3 || *v == 0.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn wedge_matches_the_alternation_oracle(a in form2(), b in form2()) {
        let w = a.wedge(&b).0;
        prop_assert!((w - wedge_oracle(&a, &b)).abs() < 1e-14);
        prop_assert!((w - b.wedge(&a).0).abs() < 1e-15);
    }

    #[test]
    fn hodge_star_matches_the_gram_oracle(g in metric(), a in form2(), b in form2()) {
        let gi = inverse4(&g.matrix().0);
        let vol = det4(&g.matrix().0).sqrt();
        let lhs = wedge_oracle(&a, &hodge(&g, &b));
        let rhs = inner_oracle(&gi, &a, &b) * vol;
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()), "{lhs} vs {rhs}");
        // the 6x6 matrix of * is vol W Gram, W the wedge pairing
        let star = hodge(&g, &b);
        for c in 0..6 {
            let mut e = Form2::zero();
            e.0[(c + 3) % 6] = 1.0;
            let expected = vol * inner_oracle(&gi, &e, &b);
            prop_assert!((star.0[c] - expected).abs() <= 1e-12 * (1.0 + sup(&star.0)));
        }
    }

    #[test]
    fn hodge_squares_to_plus_minus_one(g in metric(), w in form2(), l in form1()) {
        let ww = hodge(&g, &hodge(&g, &w));
        let ll = hodge(&g, &hodge(&g, &l));
        for c in 0..6 {
            prop_assert!((ww.0[c] - w.0[c]).abs() < 1e-12);
        }
        for c in 0..4 {
            prop_assert!((ll.0[c] + l.0[c]).abs() < 1e-12);
        }
    }

    #[test]
    fn one_forms_wedge_to_zero_with_themselves(l in form1(), w in form2()) {
        prop_assert_eq!(l.wedge1(&l), Form2::zero());
        let lw = l.wedge2(&w);
        prop_assert!(l.wedge3(&lw).0.abs() < 1e-15);
    }

    #[test]
    fn interior_is_an_antiderivation(v in vector(), l in form1(), m in form1(), w in form2()) {
        let lhs = l.wedge1(&m).interior(&v);
        let rhs = m.scale(l.eval(&v)) - l.scale(m.eval(&v));
        for c in 0..4 {
            prop_assert!((lhs.0[c] - rhs.0[c]).abs() < 1e-14);
        }
        let lhs = l.wedge2(&w).interior(&v);
        let rhs = w.scale(l.eval(&v)) - l.wedge1(&w.interior(&v));
        for c in 0..6 {
            prop_assert!((lhs.0[c] - rhs.0[c]).abs() < 1e-14);
        }
        prop_assert!((w.interior(&v).eval(&v)).abs() < 1e-15);
    }

    #[test]
    fn det_a_is_u_squared(g in metric(), rho in form2()) {
        let u = u_of(&rho, &g);
        let det = a_of(&rho, &g).det();
        prop_assert!((det - u * u).abs() <= 1e-11 * (1.0 + u * u), "{det} vs {}", u * u);
    }

    #[test]
    fn j_rho_satisfies_its_defining_identity(rho in form2(), v in vector(), w in vector()) {
        prop_assume!(rho.wedge(&rho).0.abs() > 0.05);
        let (_, js) = standard_triple::<f64>();
        for j in js {
            let jr = j_rho(&j, &rho).unwrap();
            let lhs = rho.eval(&jr.apply(&v), &w);
            let rhs = rho.eval(&v, &j.apply(&w));
            prop_assert!((lhs - rhs).abs() < 1e-10 * (1.0 + jr.max_abs()));
        }
    }

    #[test]
    fn reflection_is_a_wedge_preserving_involution(rho in form2(), a in form2(), b in form2()) {
        prop_assume!(rho.wedge(&rho).0.abs() > 0.05);
        let ra = r_rho(&a, &rho).unwrap();
        let rra = r_rho(&ra, &rho).unwrap();
        let rb = r_rho(&b, &rho).unwrap();
        let scale = 1.0 + sup(&ra.0);
        for c in 0..6 {
            prop_assert!((rra.0[c] - a.0[c]).abs() < 1e-12 * scale * scale);
        }
        prop_assert!((ra.wedge(&rb).0 - a.wedge(&b).0).abs() < 1e-12 * scale * (1.0 + sup(&rb.0)));
    }

    #[test]
    fn star_rho_squares_to_one(g in metric(), rho in form2(), w in form2()) {
        prop_assume!(u_of(&rho, &g) > 0.1);
        let s = star_rho_2(&w, &rho, &g).unwrap();
        let ss = star_rho_2(&s, &rho, &g).unwrap();
        let scale = 1.0 + sup(&s.0);
        for c in 0..6 {
            prop_assert!((ss.0[c] - w.0[c]).abs() < 1e-10 * scale);
        }
    }

    #[test]
    fn theta_is_wedge_orthogonal_to_rho(g in metric(), rho in form2()) {
        prop_assume!(u_of(&rho, &g) > 0.1);
        let theta = theta_point(&rho, &g).unwrap();
        prop_assert!(theta.wedge(&rho).0.abs() < 1e-11 * (1.0 + sup(&theta.0)));
    }

    #[test]
    fn single_precision_theta_tracks_double(rho in form2()) {
        let g = Metric4::<f64>::euclid();
        prop_assume!(u_of(&rho, &g) > 0.2);
        let t64 = theta_point(&rho, &g).unwrap();
        let r32 = Form2(rho.0.map(|x| x as f32));
        let t32 = theta_point(&r32, &Metric4::<f32>::euclid()).unwrap();
        let scale = sup(&t64.0).max(1.0);
        for c in 0..6 {
            prop_assert!((t32.0[c] as f64 - t64.0[c]).abs() < 1e-4 * scale);
        }
        prop_assert!((t32.wedge(&r32).0 as f64).abs() < 1e-4 * scale);
    }
}

fn rational() -> impl Strategy<Value = Rational64> {
    (-12i64..=12, 1i64..=6).prop_map(|(p, q)| Rational64::new(p, q))
}

fn rational_form2() -> impl Strategy<Value = Form2<Rational64>> {
    prop::array::uniform6(rational()).prop_map(Form2)
}

fn rational_map() -> impl Strategy<Value = LinMap4<Rational64>> {
    prop::array::uniform16(rational()).prop_map(|b| {
        LinMap4(std::array::from_fn(|r| {
            std::array::from_fn(|c| b[4 * r + c])
        }))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn pullback_scales_the_wedge_by_det_exactly(l in rational_map(), a in rational_form2(), b in rational_form2()) {
        let lhs = a.pullback(&l).wedge(&b.pullback(&l));
        prop_assert_eq!(lhs, Form4(l.det() * a.wedge(&b).0));
    }

    #[test]
    fn rational_inverse_is_exact(l in rational_map()) {
        match l.inverse() {
            Some(inv) => prop_assert_eq!(l.mul(&inv), LinMap4::identity()),
            None => prop_assert_eq!(l.det(), Rational64::from_integer(0)),
        }
    }

    #[test]
    fn rational_pfaffian_squares_to_the_determinant(w in rational_form2()) {
        // det P = (Pf P)^2 with Pf = (w ^ w)/2
        let pf = w.wedge(&w).0 / Rational64::from_integer(2);
        prop_assert_eq!(w.to_matrix().det(), pf * pf);
    }
}

#[test]
fn standard_triple_is_quaternionic_over_the_rationals() {
    let (omegas, [j1, j2, j3]) = standard_triple::<Rational64>();
    let minus_one = LinMap4::identity().scale(Rational64::from_integer(-1));
    for j in [j1, j2, j3] {
        assert_eq!(j.mul(&j), minus_one);
    }
    assert_eq!(j1.mul(&j2), j3);
    assert_eq!(j2.mul(&j1), j3.scale(Rational64::from_integer(-1)));
    for (i, a) in omegas.iter().enumerate() {
        for (k, b) in omegas.iter().enumerate() {
            let expected = if i == k { 2 } else { 0 };
            assert_eq!(a.wedge(b).0, Rational64::from_integer(expected));
        }
    }
}
