//! Field suites: cross-formula equalities, the gradient against the
//! Donaldson metric, and the Hessian ledger on the lattice.

use std::f64::consts::PI;

use super::{merge, DiagnosticReport, Outcome};
use crate::error::Result;
use crate::exterior4::{star_rho_1, Form1, Metric4};
use crate::flow::{
    donaldson_inner, donaldson_norm_sq, energy, first_variation, flat_l2_sq, hessian_bilinear,
    hessian_form, initial_rho, l1_report, omega1, random_potential, rhs, theta_field, Field1,
    Field2,
};
use crate::hyperkahler::{
    d_theta_hk, energy_hk, grad_hk, hessian_hk, hessian_hk3, hessiancov_check, k_functions,
    khat_hhat, theta_hk, HKTriple,
};
use crate::lattice::{cohomology, d, Field, Grid};

/// Random fields per field check.
pub const FIELD_INSTANCES: usize = 4;
/// Random `(rho, rho_hat)` pairs of the gradient suite.
pub const GRADIENT_PAIRS: usize = 20;
/// Random exact directions of the Hessian-at-the-minimum check.
pub const MINIMUM_DIRECTIONS: usize = 50;
/// Random `(rho, mu)` pairs of the ledger suite.
pub const LEDGER_INSTANCES: usize = 2;

/// Amplitude and band limit of the smooth test fields.
const SMOOTH: (f64, usize) = (0.1, 1);
/// Amplitude of the band-limited fields on which the two gradient formulas
/// agree to round-off: the rational functions `K_i` alias on the grid, and
/// the aliasing error scales with the square of the amplitude.
const BAND_LIMITED: f64 = 1e-4;
/// Amplitude of the refinement study of the gradient formulas.
const REFINEMENT: f64 = 0.01;
/// Grid points added by refinement studies.
const REFINE_BY: usize = 4;

pub const CROSS_TOL: f64 = 1e-10;
pub const GRADIENT_HK_TOL: f64 = 1e-8;
pub const METRIC_TOL: f64 = 1e-6;
pub const LEDGER_TOL: f64 = 1e-3;
pub const POINTWISE_TOL: f64 = 1e-12;

/// Seed of instance `i` of a field check, kept apart from the seeds of the
/// other families of random data.
fn field_seed(seed: u64, family: u64, i: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(family << 32)
        .wrapping_add(i as u64)
}

fn smooth_rho(grid: Grid, seed: u64) -> Result<Field2<f64>> {
    Ok(initial_rho(grid, seed, SMOOTH.0, SMOOTH.1)?.0)
}

fn flat_components(f: &Field2<f64>) -> Vec<f64> {
    f.values().iter().flat_map(|w| w.0).collect()
}

fn refined(grid: Grid) -> Result<Grid> {
    Grid::new(grid.n() + REFINE_BY, grid.scheme())
}

/// Relative sup distance between `grad_hk` and `-rhs`.
fn gradient_gap(rho: &Field2<f64>) -> Result<f64> {
    let r = rhs(rho)?;
    Ok(grad_hk(rho)?.add(&r).sup_norm() / r.sup_norm().max(f64::MIN_POSITIVE))
}

fn fields_instance(grid: Grid, seed: u64, i: usize) -> Result<Vec<Outcome>> {
    let mut out = Vec::new();
    let rho = smooth_rho(grid, field_seed(seed, 1, i))?;
    let mu: Field1<f64> = random_potential(grid, field_seed(seed, 2, i), SMOOTH.1);
    let nu: Field1<f64> = random_potential(grid, field_seed(seed, 3, i), SMOOTH.1);
    let (a, b) = (d(&mu), d(&nu));

    out.push(Outcome::scalar(
        "energy_hk",
        "E = (1/2) int sum K_i^2 dvol_rho",
        CROSS_TOL,
        energy_hk(&rho)?,
        energy(&rho)?,
        0.0,
    ));
    out.push(Outcome::compare(
        "theta_hk",
        "Theta = sum (K_i omega_i - K_i^2 rho / 2)",
        CROSS_TOL,
        &flat_components(&theta_hk(&rho)?),
        &flat_components(&theta_field(&rho)?),
        0.0,
    ));
    out.push(Outcome::scalar(
        "hessian_hk",
        "int Theta-hat ^ rho_hat = int sum (K-hat_i^2 dvol_rho - K_i^2 rho_hat^2 / 2)",
        CROSS_TOL,
        hessian_hk(&rho, &a)?,
        hessian_form(&rho, &a)?,
        0.0,
    ));
    let ab = hessian_bilinear(&rho, &a, &b)?;
    let ba = hessian_bilinear(&rho, &b, &a)?;
    let scale = (hessian_form(&rho, &a)? * hessian_form(&rho, &b)?)
        .abs()
        .sqrt();
    out.push(Outcome::scalar(
        "hessian_symmetry",
        "int Theta-hat(a) ^ b = int Theta-hat(b) ^ a",
        CROSS_TOL,
        ab,
        ba,
        scale,
    ));

    let report = l1_report(&rho)?;
    out.push(Outcome::holds(
        "energy_lower_bound",
        "E(rho) >= 2 Vol",
        report.excess >= 0.0,
        report.energy,
        2.0,
    ));
    out.push(Outcome::holds(
        "l1_bound",
        "|rho|_L1 <= sqrt(c (E - Vol)), c = int rho ^ rho",
        report.bound_holds(),
        report.l1_norm,
        report.l1_bound,
    ));
    let variation = k_functions(&rho)?
        .variation()
        .into_iter()
        .fold(0.0f64, f64::max);
    out.push(Outcome::holds(
        "k_nonconstant",
        "E(rho) > 2 Vol  =>  some K_i is nonconstant",
        report.excess <= 1e-14 || variation > 0.0,
        variation,
        report.excess,
    ));
    let moved = rho.add(&a);
    let (before, after) = (cohomology(&rho), cohomology(&moved));
    out.push(Outcome::compare(
        "cohomology_invariance",
        "[rho + d mu] = [rho]",
        POINTWISE_TOL,
        &after.0,
        &before.0,
        1.0,
    ));

    // band-limited fields: the two gradient formulas agree to round-off
    let small = initial_rho::<f64>(grid, field_seed(seed, 1, i), BAND_LIMITED, 1)?.0;
    let r = rhs(&small)?;
    out.push(Outcome::compare(
        "grad_hk",
        "grad E = sum_i d(dK_i o J_i^rho) = -d *^rho d Theta",
        GRADIENT_HK_TOL,
        &flat_components(&grad_hk(&small)?),
        &flat_components(&r.scale(-1.0)),
        0.0,
    ));
    let dt = d(&theta_field(&small)?);
    let lhs: Vec<f64> = dt.values().iter().flat_map(|w| w.0).collect();
    let rhs_vals: Vec<f64> = d_theta_hk(&small)?
        .values()
        .iter()
        .flat_map(|w| w.0)
        .collect();
    out.push(Outcome::compare(
        "d_theta_hk",
        "d Theta = *^rho sum_i dK_i o J_i^rho",
        GRADIENT_HK_TOL,
        &lhs,
        &rhs_vals,
        0.0,
    ));
    let mid = initial_rho::<f64>(grid, field_seed(seed, 1, i), REFINEMENT, 1)?.0;
    let fine = initial_rho::<f64>(refined(grid)?, field_seed(seed, 1, i), REFINEMENT, 1)?.0;
    let (coarse_gap, fine_gap) = (gradient_gap(&mid)?, gradient_gap(&fine)?);
    out.push(Outcome::holds(
        "grad_hk_refinement",
        "|grad_hk + rhs| decreases under grid refinement",
        fine_gap < coarse_gap,
        coarse_gap,
        fine_gap,
    ));
    Ok(out)
}

/// The worked Hessian example `rho_hat = d(sin(2 pi x0) e1)` at `omega1`.
pub fn worked_direction(grid: Grid) -> (Field1<f64>, Field2<f64>) {
    let mu: Field1<f64> = Field::from_fn(grid, |s| {
        let x = grid.point::<f64>(s);
        Form1([0.0, (2.0 * PI * x[0]).sin(), 0.0, 0.0])
    });
    let hat = d(&mu);
    (mu, hat)
}

/// Cross-formula equalities of the energy, `Theta`, the gradient and the
/// Hessian on random smooth fields, and the Hessian at the minimum.
pub fn fields_suite(grid: Grid, seed: u64) -> Result<Vec<DiagnosticReport>> {
    let instances = (0..FIELD_INSTANCES)
        .map(|i| fields_instance(grid, seed, i))
        .collect::<Result<Vec<_>>>()?;
    let mut reports = merge(&instances, Some(grid));

    let w1 = Field::constant(grid, omega1::<f64>());
    let minimum = (0..MINIMUM_DIRECTIONS)
        .map(|i| {
            let mu: Field1<f64> = random_potential(grid, field_seed(seed, 4, i), 2);
            let hat = d(&mu);
            Ok(vec![Outcome::scalar(
                "hessian_at_minimum",
                "H_omega(rho_hat) = int |rho_hat|^2 dvol",
                CROSS_TOL,
                hessian_form(&w1, &hat)?,
                flat_l2_sq(&hat),
                0.0,
            )])
        })
        .collect::<Result<Vec<_>>>()?;
    reports.extend(merge(&minimum, Some(grid)));

    let (_, hat) = worked_direction(grid);
    let value = hessian_form(&w1, &hat)?;
    let worked = vec![
        Outcome::scalar(
            "hessian_worked_value",
            "H_omega(d(sin(2 pi x0) e1)) = 2 pi^2",
            CROSS_TOL,
            value,
            2.0 * PI * PI,
            0.0,
        ),
        Outcome::scalar(
            "hessian_hk_worked_value",
            "hessian_hk at omega1 = 2 pi^2",
            CROSS_TOL,
            hessian_hk(&w1, &hat)?,
            2.0 * PI * PI,
            0.0,
        ),
    ];
    reports.extend(merge(&[worked], Some(grid)));
    Ok(reports)
}

fn gradient_instance(grid: Grid, seed: u64, i: usize) -> Result<Vec<Outcome>> {
    let mut out = Vec::new();
    let rho = initial_rho::<f64>(grid, field_seed(seed, 5, i), 0.05, 2)?.0;
    let hat = d(&random_potential::<f64>(grid, field_seed(seed, 6, i), 2));
    let other = d(&random_potential::<f64>(grid, field_seed(seed, 7, i), 2));
    let r = rhs(&rho)?;

    let variation = first_variation(&rho, &hat)?;
    let metric_side = -donaldson_inner(&rho, &r, &hat)?;
    let scale = (donaldson_norm_sq(&r, &rho)? * donaldson_norm_sq(&hat, &rho)?).sqrt();
    out.push(Outcome::scalar(
        "gradient_metric",
        "dE(rho) rho_hat = -<rhs(rho), rho_hat>_rho",
        METRIC_TOL,
        variation,
        metric_side,
        scale,
    ));
    let t = 1e-5;
    let quotient = (energy(&rho.axpy(t, &hat))? - energy(&rho.axpy(-t, &hat))?) / (2.0 * t);
    out.push(Outcome::scalar(
        "first_variation_difference",
        "dE(rho) rho_hat = d/dt E(rho + t rho_hat)",
        1e-6,
        quotient,
        variation,
        0.0,
    ));
    let quotient = (first_variation(&rho.axpy(t, &hat), &hat)?
        - first_variation(&rho.axpy(-t, &hat), &hat)?)
        / (2.0 * t);
    let hess = hessian_form(&rho, &hat)?;
    out.push(Outcome::scalar(
        "hessian_difference",
        "H_rho(rho_hat) = d/dt dE(rho + t rho_hat) rho_hat",
        1e-6,
        quotient,
        hess,
        0.0,
    ));
    let ab = donaldson_inner(&rho, &hat, &other)?;
    let ba = donaldson_inner(&rho, &other, &hat)?;
    let scale = (donaldson_norm_sq(&hat, &rho)? * donaldson_norm_sq(&other, &rho)?).sqrt();
    out.push(Outcome::scalar(
        "donaldson_symmetry",
        "<a, b>_rho = <b, a>_rho",
        METRIC_TOL,
        ab,
        ba,
        scale,
    ));
    let descent = first_variation(&rho, &r)?;
    out.push(Outcome::holds(
        "descent_direction",
        "dE(rho) rhs(rho) <= 0",
        descent <= 0.0,
        descent,
        0.0,
    ));
    Ok(out)
}

/// The gradient against the Donaldson metric on random pairs.
pub fn gradient_suite(grid: Grid, seed: u64) -> Result<Vec<DiagnosticReport>> {
    let instances = (0..GRADIENT_PAIRS)
        .map(|i| gradient_instance(grid, seed, i))
        .collect::<Result<Vec<_>>>()?;
    let mut reports = merge(&instances, Some(grid));

    // rho_hat = d(sin(2 pi x0) e1) at omega1 has Donaldson norm 1/2
    let w1 = Field::constant(grid, omega1::<f64>());
    let (_, hat) = worked_direction(grid);
    let norm = donaldson_norm_sq(&hat, &w1)?;
    reports.extend(merge(
        &[vec![Outcome::scalar(
            "donaldson_norm_example",
            "|d(sin(2 pi x0) e1)|^2_omega1 = 1/2",
            METRIC_TOL,
            norm,
            0.5,
            0.0,
        )]],
        Some(grid),
    ));
    Ok(reports)
}

fn ledger_instance(grid: Grid, seed: u64, i: usize) -> Result<Vec<Outcome>> {
    let mut out = Vec::new();
    let rho = smooth_rho(grid, field_seed(seed, 8, i))?;
    let mu: Field1<f64> = random_potential(grid, field_seed(seed, 9, i), SMOOTH.1);
    let ledger = hessiancov_check(&rho, &mu)?;
    out.push(Outcome::absolute(
        "ledger_residual",
        "A + B + C + D = 2E",
        LEDGER_TOL,
        ledger.rel_residual,
        0.0,
    ));
    let scale = ledger
        .lhs
        .abs()
        .max(ledger.rhs.abs())
        .max(ledger.a.abs() + ledger.b.abs());
    out.push(Outcome::scalar(
        "covariant_hessian_sides",
        "both covariant forms of the Hessian agree",
        LEDGER_TOL,
        ledger.lhs,
        ledger.rhs,
        scale,
    ));

    let fine_grid = refined(grid)?;
    let fine = hessiancov_check(
        &smooth_rho(fine_grid, field_seed(seed, 8, i))?,
        &random_potential(fine_grid, field_seed(seed, 9, i), SMOOTH.1),
    )?;
    out.push(Outcome::holds(
        "ledger_refinement",
        "the ledger residual decreases under grid refinement",
        fine.rel_residual < ledger.rel_residual || fine.rel_residual < 1e-12,
        ledger.rel_residual,
        fine.rel_residual,
    ));

    // pointwise identities of the perturbation vector field
    let f = khat_hhat(&rho, &mu)?;
    let hk = HKTriple::<f64>::standard();
    let g = Metric4::euclid();
    let (mut zero_side, mut lhs, mut rhs_vals) = (Vec::new(), Vec::new(), Vec::new());
    let mut scale = 0.0f64;
    for s in 0..grid.len() {
        let (r, x) = (rho.at(s), f.x.at(s));
        let iota_rho = r.interior(&x);
        for i in 0..3 {
            let omega = hk.omegas[i];
            let reflected = omega - r.scale(f.k.k[i].at(s));
            let first = omega.interior(&x).wedge2(&r);
            let second = reflected.wedge1(&iota_rho);
            zero_side.extend((first + second).0);
            scale = scale.max(first.max_abs()).max(second.max_abs());
            lhs.extend(first.0);
            let jx = hk.js[i].apply(&x);
            rhs_vals.extend((-star_rho_1(&r.interior(&jx), &r, &g)?).0);
        }
    }
    out.push(Outcome::compare(
        "interior_identity",
        "(iota(X) omega_i) ^ rho + omega_i^rho ^ iota(X) rho = 0",
        POINTWISE_TOL,
        &zero_side,
        &vec![0.0; zero_side.len()],
        scale,
    ));
    out.push(Outcome::compare(
        "interior_star_identity",
        "(iota(X) omega_i) ^ rho = -*^rho iota(J_i X) rho",
        POINTWISE_TOL,
        &lhs,
        &rhs_vals,
        0.0,
    ));
    Ok(out)
}

/// The five-term Hessian ledger on random smooth fields and at the
/// minimum, and the pointwise identities behind it.
pub fn hessiancov_suite(grid: Grid, seed: u64) -> Result<Vec<DiagnosticReport>> {
    let instances = (0..LEDGER_INSTANCES)
        .map(|i| ledger_instance(grid, seed, i))
        .collect::<Result<Vec<_>>>()?;
    let mut reports = merge(&instances, Some(grid));

    let w1 = Field::constant(grid, omega1::<f64>());
    let minimum = (0..LEDGER_INSTANCES)
        .map(|i| {
            let mu: Field1<f64> = random_potential(grid, field_seed(seed, 10, i), SMOOTH.1);
            let ledger = hessiancov_check(&w1, &mu)?;
            let hat = d(&mu);
            Ok(vec![
                Outcome::absolute("ledger_at_minimum", "A + B + C + D = 2E at omega1", 1e-10, ledger.residual, 0.0),
                Outcome::absolute("ledger_terms_at_minimum", "C = D = E = 0 at omega1", 1e-10, ledger.c.abs() + ledger.d.abs() + ledger.e.abs(), 0.0),
                Outcome::scalar(
                    "critical_hessian",
                    "int sum (H-hat_i^2 + omega_i(X, nabla_{X_{K_i}} X)) dvol_rho = H_rho(rho_hat) at omega1",
                    CROSS_TOL,
                    hessian_hk3(&w1, &mu)?,
                    hessian_form(&w1, &hat)?,
                    0.0,
                ),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    reports.extend(merge(&minimum, Some(grid)));

    let zero = hessiancov_check(
        &smooth_rho(grid, field_seed(seed, 8, 0))?,
        &Field::<Form1<f64>>::zeros(grid),
    )?;
    let total = [zero.a, zero.b, zero.c, zero.d, zero.e]
        .iter()
        .map(|x| x.abs())
        .sum::<f64>();
    reports.extend(merge(
        &[vec![Outcome::absolute(
            "ledger_zero_direction",
            "rho_hat = 0  =>  A = B = C = D = E = 0",
            0.0,
            total,
            0.0,
        )]],
        Some(grid),
    ));
    Ok(reports)
}
