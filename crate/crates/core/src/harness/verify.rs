//! Named invariant and oracle-equivalence checks with measured deviations.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::fmt;
use std::time::Instant;

use super::curve::{emit_curve, CurveSpec};
use super::tables::{table_interval, RangeChoice, Table};
use crate::asymptotics::{
    displacement_approx, displacement_saddles, fock_position_approx, inphase_general,
    interference_area, DisplacementMethod, FockMethod,
};
use crate::error::{invalid, Result};
use crate::exact::{
    displacement_element, displacement_element_form, fock_position_wavefn, posmom_overlap,
    sho_propagator, sho_propagator_complex, squeeze_element, squeezed_coherent_element,
    LaguerreForm, SqueezeParam,
};
use crate::oracle::{
    fock_rotation_propagator, operator_matrix, quad_overlap_2d, quad_overlap_fixed,
    series_displacement_element, OperatorKind, QuadKind,
};
use crate::phasespace::{
    bargmann_phase, coherent_overlap, displacement_compose, pancharatnam_phase,
    polyline_geometric_phase, PhaseCurve, PhasePoint, SegmentModel,
};
use crate::specfun::{
    fock_wavefunctions, hermite, laguerre, log_binomial, log_factorial, wrap_phase,
};
use crate::states::{
    build_superposition, cat_state, circle_null_vector, coherent_fock_coeffs, evolve,
    q_closed_form, q_function, quadrature_stats, superposition_terms, two_source_q, FockVector,
    QConvention, QFamily, SuperpositionKind, SuperpositionSpec, Transform,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VerifyLevel {
    /// Cutoffs capped at 128 and indices at 30.
    #[default]
    Fast,
    Full,
}

impl std::str::FromStr for VerifyLevel {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(VerifyLevel::Fast),
            "full" => Ok(VerifyLevel::Full),
            _ => Err(invalid(format!("unknown level {s:?}, expected fast|full"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    /// Largest measured deviation; NaN when the check errored.
    pub deviation: f64,
    pub tolerance: f64,
    pub seconds: f64,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub level: VerifyLevel,
    pub checks: Vec<CheckResult>,
    pub seconds: f64,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            write!(
                f,
                "{} {:<44} deviation={:.3e} tolerance={:.1e} ({:.2}s)",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.deviation,
                c.tolerance,
                c.seconds
            )?;
            if let Some(e) = &c.error {
                write!(f, " error: {e}")?;
            }
            writeln!(f)?;
        }
        let failed = self.failures().count();
        write!(
            f,
            "{} checks, {} failed, {:.1}s",
            self.checks.len(),
            failed,
            self.seconds
        )
    }
}

struct Ctx {
    level: VerifyLevel,
}

impl Ctx {
    fn fast(&self) -> bool {
        self.level == VerifyLevel::Fast
    }

    fn cutoff(&self) -> usize {
        if self.fast() {
            128
        } else {
            256
        }
    }

    fn max_index(&self) -> usize {
        if self.fast() {
            30
        } else {
            40
        }
    }

    fn samples(&self) -> usize {
        if self.fast() {
            200
        } else {
            2000
        }
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(0x1f2e_3d4c ^ salt)
    }
}

fn random_point(rng: &mut ChaCha8Rng, half: f64) -> PhasePoint {
    PhasePoint::new(rng.random_range(-half..half), rng.random_range(-half..half))
}

/// Maximum that propagates NaN instead of skipping it.
fn worst(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |acc: f64, x| {
        if acc.is_nan() || x.is_nan() {
            f64::NAN
        } else {
            acc.max(x)
        }
    })
}

fn try_worst(values: impl IntoIterator<Item = Result<f64>>) -> Result<f64> {
    let mut acc = 0.0;
    for v in values {
        acc = worst([acc, v?]);
    }
    Ok(acc)
}

fn rel(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

// ---- specfun ----

fn hermite_parity(ctx: &Ctx) -> Result<f64> {
    let mut rng = ctx.rng(1);
    let xs: Vec<f64> = (0..ctx.samples() / 5)
        .map(|_| rng.random_range(-20.0..20.0))
        .collect();
    try_worst((0..=100usize).flat_map(|n| {
        xs.iter().map(move |&x| {
            let a = hermite(n, Complex64::new(-x, 0.0))?.re;
            let b = hermite(n, Complex64::new(x, 0.0))?.re;
            let sign = if n % 2 == 1 { -1.0 } else { 1.0 };
            Ok(rel(a, sign * b))
        })
    }))
}

fn hermite_recurrence(ctx: &Ctx) -> Result<f64> {
    let mut rng = ctx.rng(2);
    let samples: Vec<(usize, f64)> = (0..ctx.samples())
        .map(|_| (rng.random_range(1..100usize), rng.random_range(-10.0..10.0)))
        .collect();
    try_worst(samples.iter().map(|&(n, x)| {
        let h = |k| hermite(k, Complex64::new(x, 0.0)).map(|v| v.re);
        let (up, mid, down) = (h(n + 1)?, 2.0 * x * h(n)?, 2.0 * n as f64 * h(n - 1)?);
        let scale = up.abs() + mid.abs() + down.abs();
        Ok((up - mid + down).abs() / scale)
    }))
}

fn laguerre_at_zero(_: &Ctx) -> Result<f64> {
    try_worst((0..=50usize).flat_map(|n| {
        (0..=10usize).map(move |a| {
            let want = log_binomial(n + a, n).exp();
            Ok(rel(laguerre(n, a as i64, 0.0)?, want))
        })
    }))
}

fn log_factorial_sum(_: &Ctx) -> Result<f64> {
    let mut sum = 0.0;
    let mut dev = log_factorial(0).abs().max(log_factorial(1).abs());
    for n in 2..=200usize {
        sum += (n as f64).ln();
        dev = worst([dev, rel(log_factorial(n), sum)]);
    }
    Ok(dev)
}

fn fock_wavefn_recurrence(ctx: &Ctx) -> Result<f64> {
    let mut rng = ctx.rng(3);
    let qs: Vec<f64> = (0..ctx.samples() / 4)
        .map(|_| rng.random_range(-10.0..10.0))
        .collect();
    try_worst(qs.iter().flat_map(|&q| {
        let table = fock_wavefunctions(60, q);
        (0..=60).map(move |n| Ok((fock_position_wavefn(n, q)? - table[n]).abs()))
    }))
}

// ---- phasespace ----

fn random_triples(ctx: &Ctx, salt: u64) -> Vec<[PhasePoint; 3]> {
    let mut rng = ctx.rng(salt);
    (0..ctx.samples())
        .map(|_| {
            [
                random_point(&mut rng, 5.0),
                random_point(&mut rng, 5.0),
                random_point(&mut rng, 5.0),
            ]
        })
        .collect()
}

fn overlap_modulus(ctx: &Ctx) -> Result<f64> {
    Ok(worst(random_triples(ctx, 10).iter().map(|[a, b, _]| {
        let want = (-0.25 * ((a.q - b.q).powi(2) + (a.p - b.p).powi(2))).exp();
        (coherent_overlap(*a, *b).norm() - want).abs()
    })))
}

fn pancharatnam_antisymmetry(ctx: &Ctx) -> Result<f64> {
    Ok(worst(random_triples(ctx, 11).iter().map(|[a, b, _]| {
        (pancharatnam_phase(*a, *b) + pancharatnam_phase(*b, *a)).abs()
    })))
}

fn pancharatnam_is_overlap_arg(ctx: &Ctx) -> Result<f64> {
    Ok(worst(random_triples(ctx, 12).iter().map(|[a, b, _]| {
        wrap_phase(pancharatnam_phase(*a, *b) - coherent_overlap(*a, *b).arg()).abs()
    })))
}

fn bargmann_symmetry(ctx: &Ctx) -> Result<f64> {
    Ok(worst(random_triples(ctx, 13).iter().map(|&[a, b, c]| {
        let v = bargmann_phase(a, b, c);
        worst([
            (v - bargmann_phase(b, c, a)).abs(),
            (v - bargmann_phase(c, a, b)).abs(),
            (v + bargmann_phase(b, a, c)).abs(),
        ])
    })))
}

fn bargmann_pancharatnam_sum(ctx: &Ctx) -> Result<f64> {
    Ok(worst(random_triples(ctx, 14).iter().map(|&[a, b, c]| {
        let v = bargmann_phase(a, b, c);
        let sum = pancharatnam_phase(a, b) + pancharatnam_phase(b, c) + pancharatnam_phase(c, a);
        let product = coherent_overlap(a, b) * coherent_overlap(b, c) * coherent_overlap(c, a);
        worst([(v - sum).abs(), wrap_phase(v - product.arg()).abs()])
    })))
}

fn shoelace(points: &[PhasePoint]) -> f64 {
    let n = points.len();
    0.5 * (0..n)
        .map(|i| {
            let (a, b) = (points[i], points[(i + 1) % n]);
            a.q * b.p - b.q * a.p
        })
        .sum::<f64>()
}

fn polygon_shoelace(ctx: &Ctx) -> Result<f64> {
    let mut rng = ctx.rng(15);
    try_worst((0..ctx.samples()).map(|_| {
        let k = rng.random_range(3..13usize);
        let points: Vec<PhasePoint> = (0..k).map(|_| random_point(&mut rng, 4.0)).collect();
        let curve = PhaseCurve::closed(points.clone())?.with_model(SegmentModel::Chord);
        Ok((polyline_geometric_phase(&curve) + shoelace(&points)).abs())
    }))
}

/// Deviation of the chord-model error ratio under doubling from 4.
fn circle_refinement(_: &Ctx) -> Result<f64> {
    let r = 2.0;
    let errors = [32usize, 64, 128, 256, 512]
        .iter()
        .map(|&n| {
            let curve = PhaseCurve::circle(r, n)?.with_model(SegmentModel::Chord);
            Ok((polyline_geometric_phase(&curve) + PI * r * r).abs())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(worst(errors.windows(2).map(|w| (w[0] / w[1] - 4.0).abs())))
}

fn bohr_sommerfeld(_: &Ctx) -> Result<f64> {
    try_worst([1usize, 5, 20].iter().map(|&n| {
        let curve = PhaseCurve::circle((2.0 * n as f64).sqrt(), 500)?;
        Ok((polyline_geometric_phase(&curve) + 2.0 * PI * n as f64).abs())
    }))
}

// ---- states ----

fn circle_null(_: &Ctx) -> Result<f64> {
    try_worst((1..=5).map(|m| Ok(circle_null_vector(m, 2.0, 1024, 64)?.norm_sqr().sqrt())))
}

/// Per-step Pancharatnam phase of the circle integrand against
/// (r^2/2 - n) dtheta, in units of dtheta^2.
fn fock_circle_local_phase(_: &Ctx) -> Result<f64> {
    let samples = 500;
    let dtheta = 2.0 * PI / samples as f64;
    let mut dev = 0.0;
    for n in [1usize, 5, 20] {
        let ring = (2.0 * n as f64).sqrt();
        for r in [ring, ring + 0.5, ring - 0.5] {
            let spec = SuperpositionSpec::new(SuperpositionKind::FockCircle { n, r })
                .with_samples(samples);
            let terms = superposition_terms(&spec)?;
            let expected = (0.5 * r * r - n as f64) * dtheta;
            for w in terms.windows(2) {
                let step = wrap_phase(
                    w[1].phase - w[0].phase + pancharatnam_phase(w[0].point, w[1].point),
                );
                dev = worst([dev, (step - expected).abs() / (dtheta * dtheta)]);
            }
        }
    }
    Ok(dev)
}

fn fock_circle_state(cutoff: usize) -> Result<FockVector> {
    let spec = SuperpositionSpec::new(SuperpositionKind::FockCircle {
        n: 5,
        r: 10f64.sqrt(),
    })
    .with_samples(500);
    build_superposition(&spec, cutoff)
}

fn fock_circle_fidelity(_: &Ctx) -> Result<f64> {
    let state = fock_circle_state(64)?;
    Ok(1.0 - state.fidelity(&FockVector::number_state(5, 64)?)?)
}

fn argmax_on(lo: f64, step: f64, count: usize, f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let mut best = (f64::NEG_INFINITY, lo);
    for i in 0..count {
        let x = lo + i as f64 * step;
        let v = f(x)?;
        if v > best.0 {
            best = (v, x);
        }
    }
    Ok(best.1)
}

fn fock_circle_q_argmax(_: &Ctx) -> Result<f64> {
    let state = fock_circle_state(64)?;
    let r = argmax_on(0.0, 0.01, 601, |r| {
        q_function(&state, PhasePoint::new(r, 0.0), QConvention::PerDqDp)
    })?;
    Ok((r - 10f64.sqrt()).abs())
}

fn q_maxima(_: &Ctx) -> Result<f64> {
    let (q0, p0, n) = (0.7, -1.1, 5usize);
    let q = argmax_on(-3.0, 0.01, 601, |q| {
        Ok(q_closed_form(
            QFamily::Position(q0),
            PhasePoint::new(q, 0.3),
        ))
    })?;
    let p = argmax_on(-3.0, 0.01, 601, |p| {
        Ok(q_closed_form(
            QFamily::Momentum(p0),
            PhasePoint::new(-0.8, p),
        ))
    })?;
    let r = argmax_on(0.0, 0.01, 601, |r| {
        Ok(q_closed_form(QFamily::Fock(n), PhasePoint::polar(r, 0.4)))
    })?;
    Ok(worst([
        (q - q0).abs(),
        (p - p0).abs(),
        (r - (2.0 * n as f64).sqrt()).abs(),
    ]))
}

fn evolve_unitarity(_: &Ctx) -> Result<f64> {
    let cutoff = 80;
    let states = [
        coherent_fock_coeffs(PhasePoint::new(1.0, -0.5), cutoff)?,
        FockVector::number_state(10, cutoff)?,
        cat_state(1.0, 0.7, cutoff)?,
    ];
    let transforms = [
        Transform::Displace(PhasePoint::new(0.7, 1.2)),
        Transform::Displace(PhasePoint::new(-1.5, 0.2)),
        Transform::Rotate(0.9),
    ];
    try_worst(states.iter().flat_map(|s| {
        transforms.iter().map(move |&t| {
            let out = evolve(s, t)?;
            Ok(rel(out.norm_sqr(), s.norm_sqr()))
        })
    }))
}

fn gaussian_line_variance(_: &Ctx) -> Result<f64> {
    try_worst([0.5, 1.0, 2.0].iter().map(|&sigma: &f64| {
        let spec = SuperpositionSpec::new(SuperpositionKind::GaussianLine { sigma, p0: 0.3 });
        let m = quadrature_stats(&build_superposition(&spec, 128)?)?;
        Ok((m.var_p - 0.5 / (1.0 + 1.0 / (sigma * sigma))).abs())
    }))
}

fn two_source_matches_cat(ctx: &Ctx) -> Result<f64> {
    let mut rng = ctx.rng(20);
    let points: Vec<PhasePoint> = (0..ctx.samples() / 4)
        .map(|_| random_point(&mut rng, 3.0))
        .collect();
    let mut dev = 0.0;
    for q0 in [0.4, 1.0] {
        for theta in [0.0, 1.1, PI] {
            let state = cat_state(q0, theta, 64)?;
            let (z1, z2) = (PhasePoint::new(-q0, 0.0), PhasePoint::new(q0, 0.0));
            for &pt in &points {
                let closed = two_source_q(z1, z2, theta, pt).q_value;
                let direct = q_function(&state, pt, QConvention::PerD2zOverPi)?;
                dev = worst([dev, (closed - direct).abs()]);
            }
        }
    }
    Ok(dev)
}

/// Spacing of successive maxima of the normalized two-source column along
/// q = 0, for q0 = 0.4 and theta = 0, against 2 pi / q0.
fn fringe_spacing(_: &Ctx) -> Result<f64> {
    let q0 = 0.4;
    let spec = CurveSpec::parse(
        "two_source_fringes",
        "q0=0.4,theta=0,pmin=-20,pmax=20",
        &[],
        4001,
    )?;
    let mut buf = Vec::new();
    emit_curve(&spec, &mut buf)?;
    let text = String::from_utf8(buf).map_err(|e| invalid(e.to_string()))?;
    let rows: Vec<(f64, f64)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let cells: Vec<f64> = l
                .split(',')
                .map(|c| c.parse().unwrap_or(f64::NAN))
                .collect();
            (cells[0], cells[5])
        })
        .collect();
    let maxima: Vec<f64> = rows
        .windows(3)
        .filter(|w| w[1].1 > w[0].1 && w[1].1 >= w[2].1)
        .map(|w| w[1].0)
        .collect();
    if maxima.len() < 2 {
        return Err(invalid("fewer than two fringe maxima"));
    }
    Ok(worst(
        maxima
            .windows(2)
            .map(|m| (m[1] - m[0] - 2.0 * PI / q0).abs()),
    ))
}

fn source_segment_in_phase(_: &Ctx) -> Result<f64> {
    let q0 = 0.4;
    let (z1, z2) = (PhasePoint::new(-q0, 0.0), PhasePoint::new(q0, 0.0));
    Ok(worst((0..=100).map(|i| {
        let q = -q0 + 2.0 * q0 * i as f64 / 100.0;
        wrap_phase(two_source_q(z1, z2, 0.0, PhasePoint::new(q, 0.0)).delta).abs()
    })))
}

/// Closed-form moments of |-q0,0> + e^{i theta}|q0,0>:
/// (<q>, var q, <p>, <p^2>, var p, cov).
pub fn cat_moments_closed(q0: f64, theta: f64) -> [f64; 6] {
    let c4 = (-q0 * q0).exp();
    let c2 = c4.sqrt();
    let n2 = 2.0 * (1.0 + c4 * theta.cos());
    let nn = n2.sqrt();
    [
        0.0,
        0.5 + 2.0 * (q0 / nn).powi(2),
        2.0 * q0 / n2 * c4 * theta.sin(),
        0.5 - 2.0 * (q0 * c2 / nn).powi(2) * theta.cos(),
        0.5 - (2.0 * q0 * c2 / n2).powi(2) * (c4 + theta.cos()),
        0.0,
    ]
}

fn cat_moments(_: &Ctx) -> Result<f64> {
    let mut dev = 0.0;
    for q0 in [0.4, 1.0] {
        for theta in [0.0, PI / 2.0, PI] {
            let m = quadrature_stats(&cat_state(q0, theta, 128)?)?;
            let got = [
                m.mean_q,
                m.var_q,
                m.mean_p,
                m.var_p + m.mean_p * m.mean_p,
                m.var_p,
                m.cov_qp,
            ];
            let want = cat_moments_closed(q0, theta);
            dev = worst([
                dev,
                worst(got.iter().zip(&want).map(|(a, b)| (a - b).abs())),
            ]);
        }
    }
    Ok(dev)
}

/// Count of theta where "var p < 1/2" disagrees with "cos theta > -c^4".
fn cat_squeezing_condition(_: &Ctx) -> Result<f64> {
    let mut mismatches = 0usize;
    for q0 in [0.4f64, 1.0, 2.0] {
        let c4 = (-q0 * q0).exp();
        for i in 0..360 {
            let theta = 2.0 * PI * i as f64 / 360.0;
            if (theta.cos() + c4).abs() < 1e-8 {
                continue;
            }
            let m = quadrature_stats(&cat_state(q0, theta, 64)?)?;
            if (m.var_p < 0.5) != (theta.cos() > -c4) {
                mismatches += 1;
            }
        }
    }
    Ok(mismatches as f64)
}

// ---- exact ----

fn displacement_unitarity_rows(ctx: &Ctx) -> Result<f64> {
    let mut rng = ctx.rng(30);
    let labels: Vec<PhasePoint> = (0..ctx.samples() / 20)
        .map(|_| {
            PhasePoint::polar(
                rng.random_range(0.0..18f64.sqrt()),
                rng.random_range(0.0..2.0 * PI),
            )
        })
        .collect();
    try_worst(labels.iter().flat_map(|&z| {
        (0..=20usize).map(move |m| {
            let mut sum = 0.0;
            for n in 0..=200 {
                sum += displacement_element(m, n, z.q, z.p)?.norm_sqr();
            }
            Ok((sum - 1.0).abs())
        })
    }))
}

fn displacement_hermiticity(ctx: &Ctx) -> Result<f64> {
    let mut rng = ctx.rng(31);
    let cap = ctx.max_index();
    try_worst((0..ctx.samples()).map(|_| {
        let (m, n) = (rng.random_range(0..=cap), rng.random_range(0..=cap));
        let z = random_point(&mut rng, 4.0);
        let a = displacement_element(m, n, z.q, z.p)?;
        let b = displacement_element(n, m, -z.q, -z.p)?.conj();
        Ok((a - b).norm())
    }))
}

fn laguerre_forms_agree(ctx: &Ctx) -> Result<f64> {
    let mut rng = ctx.rng(32);
    let cap = ctx.max_index();
    try_worst((0..ctx.samples()).map(|_| {
        let (m, n) = (rng.random_range(0..=cap), rng.random_range(0..=cap));
        let z = random_point(&mut rng, 5.0);
        let a = displacement_element_form(m, n, z.q, z.p, LaguerreForm::Lower)?;
        let b = displacement_element_form(m, n, z.q, z.p, LaguerreForm::Upper)?;
        let scale = a.norm().max(b.norm());
        Ok(if scale == 0.0 {
            0.0
        } else {
            (a - b).norm() / scale
        })
    }))
}

fn squeezed_vacuum_normalization(_: &Ctx) -> Result<f64> {
    try_worst([0.1, 0.5, 1.0, 2.0].iter().map(|&mu| {
        let sq = SqueezeParam::new(mu)?;
        let mut sum = 0.0;
        for n in 0..=300 {
            sum += squeeze_element(n, sq, 0)?.powi(2);
        }
        Ok((sum - 1.0).abs())
    }))
}

fn propagator_real_limit(_: &Ctx) -> Result<f64> {
    let qs: &[f64] = &[-3.0, -1.0, 0.5, 3.0];
    try_worst([0.3, PI / 2.0, 2.0].iter().flat_map(|&t| {
        qs.iter().flat_map(move |&q1| {
            qs.iter().map(move |&q2| {
                let a = sho_propagator(q2, q1, t)?;
                let b = sho_propagator_complex(q2, q1, Complex64::new(t, -1e-13))?;
                Ok((a - b).norm())
            })
        })
    }))
}

/// Convolution of two damped kernels against the kernel at the summed time.
fn propagator_composition(_: &Ctx) -> Result<f64> {
    let (half, h) = (20.0, 0.01);
    let count = (2.0 * half / h) as usize + 1;
    let pairs = [
        (Complex64::new(0.7, -0.4), Complex64::new(0.9, -0.4)),
        (Complex64::new(1.2, -0.3), Complex64::new(1.5, -0.3)),
    ];
    let qs = [-1.0, 0.5, 2.0];
    let mut dev = 0.0;
    for (t1, t2) in pairs {
        for &q1 in &qs {
            for &q2 in &qs {
                let mut sum = Complex64::new(0.0, 0.0);
                for i in 0..count {
                    let q = -half + i as f64 * h;
                    let w = if i == 0 || i + 1 == count { 0.5 * h } else { h };
                    sum +=
                        sho_propagator_complex(q2, q, t2)? * sho_propagator_complex(q, q1, t1)? * w;
                }
                let want = sho_propagator_complex(q2, q1, t1 + t2)?;
                dev = worst([dev, (sum - want).norm()]);
            }
        }
    }
    Ok(dev)
}

// ---- asymptotics ----

fn sign_changes(xs: &[f64], f: impl Fn(f64) -> f64) -> Vec<f64> {
    let values: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut zeros = Vec::new();
    for i in 1..xs.len() {
        let (a, b) = (values[i - 1], values[i]);
        if a.is_finite() && b.is_finite() && a * b < 0.0 {
            let (mut lo, mut hi, mut flo) = (xs[i - 1], xs[i], a);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid);
                if fm * flo > 0.0 {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            zeros.push(0.5 * (lo + hi));
        }
    }
    zeros
}

/// Distance from each exact zero to the nearest approximate zero, in units
/// of half the local zero spacing.
fn zero_tracking(ctx: &Ctx) -> Result<f64> {
    let ns: &[usize] = if ctx.fast() {
        &[20, 30]
    } else {
        &[20, 30, 40, 50]
    };
    let mut dev = 0.0;
    for &n in ns {
        let (lo, hi) = table_interval(Table::I, n, n, RangeChoice::Caption);
        let xs: Vec<f64> = (0..=4000)
            .map(|i| lo + (hi - lo) * i as f64 / 4000.0)
            .collect();
        let exact = sign_changes(&xs, |q| fock_position_wavefn(n, q).unwrap_or(f64::NAN));
        if exact.len() < 3 {
            return Err(invalid(format!("too few zeros for n = {n}")));
        }
        for method in [FockMethod::Inphase, FockMethod::PlancherelRotach] {
            let approx = sign_changes(&xs, |q| fock_position_approx(method, n, q).value);
            for (i, &z) in exact.iter().enumerate() {
                let left = if i > 0 {
                    z - exact[i - 1]
                } else {
                    f64::INFINITY
                };
                let right = exact.get(i + 1).map_or(f64::INFINITY, |&w| w - z);
                let half = 0.5 * left.min(right);
                let nearest = approx
                    .iter()
                    .map(|a| (a - z).abs())
                    .fold(f64::INFINITY, f64::min);
                dev = worst([dev, nearest / half]);
            }
        }
    }
    Ok(dev)
}

/// Largest step-to-step increase of |inphase/exact - 1| at q0 = 0 over
/// n = 20, 40, 80, 160; negative when the error shrinks monotonically.
fn envelope_ratio(_: &Ctx) -> Result<f64> {
    let errors = [20usize, 40, 80, 160]
        .iter()
        .map(|&n| {
            let exact = fock_position_wavefn(n, 0.0)?;
            let approx = fock_position_approx(FockMethod::Inphase, n, 0.0).value;
            Ok((approx / exact - 1.0).abs())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(errors
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::NEG_INFINITY, f64::max))
}

fn inphase_specializes(ctx: &Ctx) -> Result<f64> {
    let mut dev = 0.0;
    for m in 1..=ctx.max_index() {
        let (lo, hi) = table_interval(Table::II, m, m, RangeChoice::Caption);
        for i in 0..=50 {
            let d = lo + (hi - lo) * i as f64 / 50.0;
            let general = inphase_general(m, m, d);
            let equal = displacement_approx(DisplacementMethod::InphaseEqual, m, m, d);
            let dispatched = displacement_approx(DisplacementMethod::Inphase, m, m, d);
            dev = worst([
                dev,
                (general.value - equal.value).abs(),
                (dispatched.value - equal.value).abs(),
            ]);
        }
    }
    Ok(dev)
}

fn admissible_triples(ctx: &Ctx, salt: u64) -> Vec<(usize, usize, f64)> {
    let mut rng = ctx.rng(salt);
    let cap = ctx.max_index();
    (0..ctx.samples())
        .map(|_| {
            let m = rng.random_range(1..=cap);
            let n = rng.random_range(1..=cap);
            let (rm, rn) = ((2.0 * m as f64).sqrt(), (2.0 * n as f64).sqrt());
            let lo = (rm - rn).abs();
            let d = lo + (rm + rn - lo) * rng.random_range(0.01..0.99);
            (m, n, d)
        })
        .collect()
}

fn interference_area_exchange(ctx: &Ctx) -> Result<f64> {
    try_worst(admissible_triples(ctx, 40).iter().map(|&(m, n, d)| {
        let a = displacement_saddles(m, n, d)?;
        let b = displacement_saddles(n, m, d)?;
        Ok(worst([
            (interference_area(m, n, d)? - interference_area(n, m, d)?).abs(),
            (b.theta0 - (PI - a.theta0_prime)).abs(),
            (b.theta0_prime - (PI - a.theta0)).abs(),
        ]))
    }))
}

fn interference_area_composition(ctx: &Ctx) -> Result<f64> {
    try_worst(admissible_triples(ctx, 41).iter().map(|&(m, n, d)| {
        let s = displacement_saddles(m, n, d)?;
        let (mf, nf) = (m as f64, n as f64);
        let want = nf * PI + mf * s.theta0
            - nf * s.theta0_prime
            - (mf * nf).sqrt() * (s.theta0_prime - s.theta0).sin();
        Ok((interference_area(m, n, d)? - want).abs())
    }))
}

// ---- oracle ----

fn posmom_quadrature(ctx: &Ctx) -> Result<f64> {
    let side: &[f64] = if ctx.fast() {
        &[-2.0, -1.0, 0.0, 1.0, 2.0]
    } else {
        &[-2.0, -1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0]
    };
    try_worst(side.iter().flat_map(|&q| {
        side.iter().map(move |&p| {
            Ok((quad_overlap_2d(QuadKind::Posmom { q, p })? - posmom_overlap(q, p)).norm())
        })
    }))
}

/// Largest error ratio between successive panel doublings while the error
/// is above the rounding floor.
fn posmom_convergence(_: &Ctx) -> Result<f64> {
    let (q, p) = (0.7, -0.4);
    let want = posmom_overlap(q, p);
    let errors = [1usize, 2, 4, 8, 16, 32]
        .iter()
        .map(|&k| Ok((quad_overlap_fixed(QuadKind::Posmom { q, p }, k)? - want).norm()))
        .collect::<Result<Vec<_>>>()?;
    let mut ratio: f64 = 0.0;
    for w in errors.windows(2) {
        if w[0] < 1e-11 {
            break;
        }
        ratio = ratio.max(w[1] / w[0]);
    }
    Ok(ratio)
}

fn propagator_quadrature(ctx: &Ctx) -> Result<f64> {
    let pairs: Vec<(f64, f64)> = if ctx.fast() {
        vec![(0.0, 0.0), (3.0, -1.0), (0.5, 3.0), (-3.0, -3.0)]
    } else {
        let qs = [-3.0, -1.0, 0.5, 3.0];
        qs.iter()
            .flat_map(|&a| qs.iter().map(move |&b| (a, b)))
            .collect()
    };
    try_worst([0.3, PI / 2.0, 2.0].iter().flat_map(|&t| {
        pairs.iter().map(move |&(q1, q2)| {
            let quad = quad_overlap_2d(QuadKind::Propagator { q1, q2, t })?;
            Ok((quad - sho_propagator(q2, q1, t)?).norm())
        })
    }))
}

fn propagator_fock_rotation(ctx: &Ctx) -> Result<f64> {
    let qs: &[f64] = &[-3.0, -1.5, 0.0, 0.5, 2.0, 3.0];
    let cutoff = ctx.cutoff();
    try_worst([0.3, PI / 2.0, 2.0].iter().flat_map(|&t| {
        qs.iter().flat_map(move |&q1| {
            qs.iter().map(move |&q2| {
                let tau = Complex64::new(t, -0.3);
                let sum = fock_rotation_propagator(q2, q1, tau, cutoff)?;
                Ok((sum - sho_propagator_complex(q2, q1, tau)?).norm())
            })
        })
    }))
}

fn resolution_identity(_: &Ctx) -> Result<f64> {
    let cutoff = 40;
    let phi = coherent_fock_coeffs(PhasePoint::new(0.8, -0.5), cutoff)?;
    let psi = [
        FockVector::number_state(3, cutoff)?,
        cat_state(1.0, 0.4, cutoff)?,
    ];
    try_worst(psi.iter().map(|psi| {
        let quad = quad_overlap_2d(QuadKind::Resolution { phi: &phi, psi })?;
        Ok((quad - phi.inner(psi)?).norm())
    }))
}

fn displacement_distances(ctx: &Ctx) -> Vec<f64> {
    if ctx.fast() {
        vec![0.5, 2.0, 5.0]
    } else {
        vec![0.5, 2.0, 5.0, 8.0]
    }
}

fn displacement_series(ctx: &Ctx) -> Result<f64> {
    let cap = ctx.max_index();
    let labels: Vec<PhasePoint> = [0.5, 2.0, 5.0, 8.0]
        .iter()
        .map(|&d| PhasePoint::new(d, 0.0))
        .chain([PhasePoint::new(1.0, -1.5)])
        .collect();
    let jobs: Vec<(usize, usize, PhasePoint)> = labels
        .iter()
        .flat_map(|&z| (0..=cap).flat_map(move |m| (0..=cap).map(move |n| (m, n, z))))
        .filter(|&(m, n, _)| ctx.level == VerifyLevel::Full || (m + n) % 3 == 0)
        .collect();
    let devs = jobs
        .par_iter()
        .map(|&(m, n, z)| {
            let closed = displacement_element(m, n, z.q, z.p)?;
            Ok((closed - series_displacement_element(m, n, z.q, z.p)?).norm())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(worst(devs))
}

fn displacement_expm(ctx: &Ctx) -> Result<f64> {
    let cap = ctx.max_index();
    try_worst(displacement_distances(ctx).iter().map(|&d| {
        let op = operator_matrix(
            OperatorKind::Displacement(PhasePoint::new(d, 0.0)),
            ctx.cutoff(),
        )?;
        let mut dev: f64 = 0.0;
        for m in 0..=cap {
            for n in 0..=cap {
                dev = worst([
                    dev,
                    (displacement_element(m, n, d, 0.0)? - op.get(m, n)).norm(),
                ]);
            }
        }
        Ok(dev)
    }))
}

fn displacement_composition(ctx: &Ctx) -> Result<f64> {
    let cutoff = ctx.cutoff();
    let (a, b) = (PhasePoint::new(0.5, -0.3), PhasePoint::new(-0.2, 0.8));
    let da = operator_matrix(OperatorKind::Displacement(a), cutoff)?;
    let db = operator_matrix(OperatorKind::Displacement(b), cutoff)?;
    let (sum, phi) = displacement_compose(a, b);
    let dsum = operator_matrix(OperatorKind::Displacement(sum), cutoff)?;
    let product = db.product(&da);
    let phase = Complex64::from_polar(1.0, phi);
    let block = 40;
    let mut dev: f64 = 0.0;
    for i in 0..block {
        for j in 0..block {
            dev = worst([dev, (product[[i, j]] - phase * dsum.get(i, j)).norm()]);
        }
    }
    Ok(dev)
}

fn rotation_composition(ctx: &Ctx) -> Result<f64> {
    let cutoff = ctx.cutoff();
    let (t1, t2) = (0.37, 1.91);
    let a = operator_matrix(OperatorKind::Rotation(t1), cutoff)?;
    let b = operator_matrix(OperatorKind::Rotation(t2), cutoff)?;
    let c = operator_matrix(OperatorKind::Rotation(t1 + t2), cutoff)?;
    let product = a.product(&b);
    Ok(worst(
        product
            .indexed_iter()
            .map(|((i, j), v)| (v - c.get(i, j)).norm()),
    ))
}

/// Closed-form squeeze elements against the exponentiated generator. At the
/// fast cutoff the strongest squeeze leaves too little headroom above index
/// 30, so its block is trimmed to 24.
fn squeeze_expm(ctx: &Ctx) -> Result<f64> {
    try_worst([0.1, 0.5, 1.0, 2.0].iter().map(|&mu: &f64| {
        let cap = if ctx.fast() && mu > 1.0 {
            24
        } else {
            ctx.max_index()
        };
        let op = operator_matrix(OperatorKind::Squeeze(mu), ctx.cutoff())?;
        let sq = SqueezeParam::new(mu)?;
        let mut dev: f64 = 0.0;
        for m in 0..=cap {
            for n in 0..=cap {
                let closed = squeeze_element(m, sq, n)?;
                if (m + n) % 2 == 1 && closed != 0.0 {
                    return Ok(f64::INFINITY);
                }
                dev = worst([dev, (Complex64::new(closed, 0.0) - op.get(m, n)).norm()]);
            }
        }
        if squeeze_element(0, sq, 0)? <= 0.0 {
            return Ok(f64::INFINITY);
        }
        Ok(dev)
    }))
}

fn squeezed_coherent_expm(ctx: &Ctx) -> Result<f64> {
    let cutoff = ctx.cutoff();
    let labels = [
        PhasePoint::new(0.0, 0.0),
        PhasePoint::new(1.0, 0.5),
        PhasePoint::new(-2.0, 1.0),
        PhasePoint::new(0.3, -2.5),
        PhasePoint::new(2.0, 2.0),
    ];
    let displacements = labels
        .iter()
        .map(|&z| operator_matrix(OperatorKind::Displacement(z), cutoff))
        .collect::<Result<Vec<_>>>()?;
    try_worst([0.25, 0.5, 1.0].iter().map(|&mu| {
        let vacuum = operator_matrix(OperatorKind::Squeeze(mu), cutoff)?.column(0);
        let sq = SqueezeParam::new(mu)?;
        let mut dev: f64 = 0.0;
        for (z, d) in labels.iter().zip(&displacements) {
            let column = d.apply(&vacuum)?;
            for (n, c) in column.iter().enumerate().take(21) {
                dev = worst([
                    dev,
                    (squeezed_coherent_element(n, sq, z.q, z.p)? - c).norm(),
                ]);
            }
        }
        Ok(dev)
    }))
}

// ---- harness ----

fn table_grid_endpoints(_: &Ctx) -> Result<f64> {
    let mut dev: f64 = 0.0;
    for n in [20usize, 30, 40, 50] {
        let r = (2.0 * n as f64).sqrt();
        let (lo, hi) = table_interval(Table::I, n, n, RangeChoice::Caption);
        dev = worst([dev, (lo - (-r + 0.3)).abs(), (hi - (r - 0.3)).abs()]);
        let (lo, hi) = table_interval(Table::II, n, n, RangeChoice::Caption);
        dev = worst([dev, (lo - 0.3).abs(), (hi - (2.0 * r - 0.3)).abs()]);
    }
    Ok(dev)
}

/// 1 if the same curve differs between a one-thread and a four-thread pool.
fn csv_determinism(_: &Ctx) -> Result<f64> {
    let spec = CurveSpec::parse("fock_wavefn", "n=20", &[], 512)?;
    let render = |threads: usize| -> Result<Vec<u8>> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| invalid(e.to_string()))?;
        pool.install(|| {
            let mut buf = Vec::new();
            emit_curve(&spec, &mut buf)?;
            Ok(buf)
        })
    };
    Ok(if render(1)? == render(4)? { 0.0 } else { 1.0 })
}

type CheckFn = fn(&Ctx) -> Result<f64>;

const CHECKS: &[(&str, f64, CheckFn)] = &[
    ("specfun.hermite_parity", 1e-10, hermite_parity),
    ("specfun.hermite_recurrence", 1e-12, hermite_recurrence),
    ("specfun.laguerre_at_zero", 1e-12, laguerre_at_zero),
    ("specfun.log_factorial_sum", 1e-13, log_factorial_sum),
    (
        "specfun.fock_wavefn_recurrence",
        1e-12,
        fock_wavefn_recurrence,
    ),
    ("phasespace.overlap_modulus", 1e-14, overlap_modulus),
    (
        "phasespace.pancharatnam_antisymmetry",
        1e-14,
        pancharatnam_antisymmetry,
    ),
    (
        "phasespace.pancharatnam_is_overlap_arg",
        1e-12,
        pancharatnam_is_overlap_arg,
    ),
    ("phasespace.bargmann_symmetry", 1e-12, bargmann_symmetry),
    (
        "phasespace.bargmann_pancharatnam_sum",
        1e-12,
        bargmann_pancharatnam_sum,
    ),
    ("phasespace.polygon_shoelace", 1e-12, polygon_shoelace),
    (
        "phasespace.circle_refinement_order",
        0.05,
        circle_refinement,
    ),
    ("phasespace.bohr_sommerfeld", 1e-4, bohr_sommerfeld),
    ("states.circle_null", 1e-10, circle_null),
    (
        "states.fock_circle_local_phase",
        1.0,
        fock_circle_local_phase,
    ),
    ("states.fock_circle_fidelity", 1e-8, fock_circle_fidelity),
    ("states.fock_circle_q_argmax", 0.01, fock_circle_q_argmax),
    ("states.q_maxima", 0.01, q_maxima),
    ("states.evolve_unitarity", 1e-10, evolve_unitarity),
    (
        "states.gaussian_line_variance",
        1e-8,
        gaussian_line_variance,
    ),
    (
        "states.two_source_matches_cat",
        1e-12,
        two_source_matches_cat,
    ),
    ("states.fringe_spacing", 0.01, fringe_spacing),
    (
        "states.source_segment_in_phase",
        1e-12,
        source_segment_in_phase,
    ),
    ("states.cat_moments", 1e-10, cat_moments),
    (
        "states.cat_squeezing_condition",
        0.0,
        cat_squeezing_condition,
    ),
    (
        "exact.displacement_unitarity_rows",
        1e-10,
        displacement_unitarity_rows,
    ),
    (
        "exact.displacement_hermiticity",
        1e-12,
        displacement_hermiticity,
    ),
    ("exact.laguerre_forms_agree", 1e-11, laguerre_forms_agree),
    (
        "exact.squeezed_vacuum_normalization",
        1e-9,
        squeezed_vacuum_normalization,
    ),
    ("exact.propagator_real_limit", 1e-9, propagator_real_limit),
    ("exact.propagator_composition", 1e-9, propagator_composition),
    ("asymptotics.zero_tracking", 1.0, zero_tracking),
    ("asymptotics.envelope_ratio_decreasing", 0.0, envelope_ratio),
    (
        "asymptotics.inphase_specializes",
        1e-12,
        inphase_specializes,
    ),
    (
        "asymptotics.interference_area_exchange",
        1e-10,
        interference_area_exchange,
    ),
    (
        "asymptotics.interference_area_composition",
        1e-12,
        interference_area_composition,
    ),
    ("oracle.posmom_quadrature", 1e-8, posmom_quadrature),
    ("oracle.posmom_convergence", 0.1, posmom_convergence),
    ("oracle.propagator_quadrature", 1e-6, propagator_quadrature),
    (
        "oracle.propagator_fock_rotation",
        1e-6,
        propagator_fock_rotation,
    ),
    ("oracle.resolution_identity", 1e-8, resolution_identity),
    ("oracle.displacement_series", 1e-9, displacement_series),
    ("oracle.displacement_expm", 1e-9, displacement_expm),
    (
        "oracle.displacement_composition",
        1e-9,
        displacement_composition,
    ),
    ("oracle.rotation_composition", 1e-12, rotation_composition),
    ("oracle.squeeze_expm", 1e-9, squeeze_expm),
    (
        "oracle.squeezed_coherent_expm",
        1e-8,
        squeezed_coherent_expm,
    ),
    ("harness.table_grid_endpoints", 0.0, table_grid_endpoints),
    ("harness.csv_determinism", 0.0, csv_determinism),
];

/// Names of every check, in report order.
pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.0).collect()
}

/// Runs every check; failures are report content, not errors.
pub fn verify_suite(level: VerifyLevel) -> VerifyReport {
    verify_selected(level, |_| true)
}

/// Runs the checks whose names satisfy `keep`.
pub fn verify_selected(level: VerifyLevel, keep: impl Fn(&str) -> bool + Sync) -> VerifyReport {
    let start = Instant::now();
    let ctx = Ctx { level };
    let checks = CHECKS
        .par_iter()
        .filter(|c| keep(c.0))
        .map(|&(name, tolerance, run)| {
            let t = Instant::now();
            let outcome = run(&ctx);
            let seconds = t.elapsed().as_secs_f64();
            match outcome {
                Ok(deviation) => CheckResult {
                    name,
                    passed: deviation <= tolerance,
                    deviation,
                    tolerance,
                    seconds,
                    error: None,
                },
                Err(e) => CheckResult {
                    name,
                    passed: false,
                    deviation: f64::NAN,
                    tolerance,
                    seconds,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    VerifyReport {
        level,
        checks,
        seconds: start.elapsed().as_secs_f64(),
    }
}
