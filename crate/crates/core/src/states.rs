//! Truncated Fock-space states, discretized in-phase coherent-state
//! superpositions, Husimi Q functions and quadrature moments.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{ensure_finite, invalid, Error, Result};
use crate::oracle::{operator_matrix, OperatorKind};
use crate::phasespace::{triangle_area, PhasePoint};
use crate::specfun::{log_factorial, norm_factor_log};

pub const DEFAULT_CUTOFF: usize = 128;
pub const DEFAULT_LINE_SAMPLES: usize = 2001;
pub const DEFAULT_CIRCLE_SAMPLES: usize = 500;
/// Half-length used for the eigenstate lines, whose weights do not decay.
pub const DEFAULT_EIGEN_EXTENT: f64 = 12.0;
/// Gaussian-weighted lines are cut at this many standard deviations.
pub const GAUSSIAN_EXTENT_SIGMAS: f64 = 8.0;
/// Tail-mass level above which callers should treat a state as truncated.
pub const TAIL_WARNING: f64 = 1e-8;
/// Relative weighted tail allowed when assembling a superposition.
pub const SUPERPOSITION_TAIL: f64 = 1e-10;

/// Coefficients on |0>..|cutoff>, not necessarily normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    coeffs: Vec<Complex64>,
}

impl FockVector {
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(invalid("a Fock vector needs at least one coefficient"));
        }
        if coeffs
            .iter()
            .any(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(invalid("Fock coefficients must be finite"));
        }
        Ok(FockVector { coeffs })
    }

    /// The number state |n> in a space with the given cutoff.
    pub fn number_state(n: usize, cutoff: usize) -> Result<Self> {
        if n > cutoff {
            return Err(invalid(format!("|{n}> does not fit cutoff {cutoff}")));
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); cutoff + 1];
        coeffs[n] = Complex64::new(1.0, 0.0);
        Ok(FockVector { coeffs })
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn cutoff(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if n == 0.0 {
            return Err(invalid("cannot normalize the zero vector"));
        }
        let s = n.sqrt();
        Ok(FockVector {
            coeffs: self.coeffs.iter().map(|c| c / s).collect(),
        })
    }

    /// Copy into a larger (or equal) cutoff, padding with zeros.
    pub fn padded(&self, cutoff: usize) -> Result<Self> {
        if cutoff < self.cutoff() {
            return Err(invalid("padding cannot shrink a Fock vector"));
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(cutoff + 1, Complex64::new(0.0, 0.0));
        Ok(FockVector { coeffs })
    }

    /// <self|other>.
    pub fn inner(&self, other: &FockVector) -> Result<Complex64> {
        if self.cutoff() != other.cutoff() {
            return Err(invalid("inner product of vectors with different cutoffs"));
        }
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// |<other|self>|^2 / (|self|^2 |other|^2).
    pub fn fidelity(&self, other: &FockVector) -> Result<f64> {
        let denom = self.norm_sqr() * other.norm_sqr();
        if denom == 0.0 {
            return Err(invalid("fidelity with a zero vector"));
        }
        Ok(self.inner(other)?.norm_sqr() / denom)
    }

    /// |c_cutoff|^2 / |c|^2; zero for the zero vector.
    pub fn tail_mass(&self) -> f64 {
        let total = self.norm_sqr();
        if total == 0.0 {
            return 0.0;
        }
        self.coeffs[self.cutoff()].norm_sqr() / total
    }

    /// Highest index whose coefficient is not negligible against the largest.
    pub fn effective_top(&self) -> usize {
        let peak = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        self.coeffs
            .iter()
            .rposition(|c| c.norm() > 1e-16 * peak)
            .unwrap_or(0)
    }

    /// <q,p|self> by the Fock series.
    pub fn coherent_amplitude(&self, point: PhasePoint) -> Complex64 {
        let zc = point.z().conj();
        let mut basis = Complex64::new((-0.5 * point.z_norm_sqr()).exp(), 0.0);
        let mut sum = basis * self.coeffs[0];
        for (n, c) in self.coeffs.iter().enumerate().skip(1) {
            basis *= zc / (n as f64).sqrt();
            sum += basis * c;
        }
        sum
    }
}

/// e^{-|z|^2/2} z^n / sqrt(n!) for n = 0..cutoff.
pub fn coherent_fock_coeffs(point: PhasePoint, cutoff: usize) -> Result<FockVector> {
    ensure_finite("q", point.q)?;
    ensure_finite("p", point.p)?;
    let z = point.z();
    let mut coeffs = Vec::with_capacity(cutoff + 1);
    let log_r = z.norm().ln();
    let angle = z.arg();
    let base = -0.5 * z.norm_sqr();
    coeffs.push(Complex64::new(base.exp(), 0.0));
    for n in 1..=cutoff {
        if z.norm() == 0.0 {
            coeffs.push(Complex64::new(0.0, 0.0));
            continue;
        }
        let log_mag = base + n as f64 * log_r - 0.5 * log_factorial(n);
        coeffs.push(Complex64::from_polar(log_mag.exp(), n as f64 * angle));
    }
    FockVector::from_coeffs(coeffs)
}

/// Probability that a Poisson(lambda) photon count exceeds `cutoff`.
pub fn poisson_tail_above(lambda: f64, cutoff: usize) -> f64 {
    if lambda <= 0.0 {
        return 0.0;
    }
    let ln_l = lambda.ln();
    let mut total = 0.0;
    let mut k = cutoff + 1;
    loop {
        let term = (-lambda + k as f64 * ln_l - log_factorial(k)).exp();
        total += term;
        if (k as f64 > lambda && term < 1e-20 * total.max(1e-300)) || k > cutoff + 100_000 {
            break;
        }
        k += 1;
    }
    total.min(1.0)
}

/// Geometry and weights of a one-dimensional in-phase superposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SuperpositionKind {
    /// Momentum eigenstate |p0> from the horizontal line through p = line_p.
    MomentumLine { p0: f64, line_p: f64 },
    /// Position eigenstate |q0> from the vertical line through q = line_q.
    PositionLine { q0: f64, line_q: f64 },
    /// Horizontal line at p0 with weight exp(-sigma^2 q^2 / 2).
    GaussianLine { sigma: f64, p0: f64 },
    /// |n> from the circle of radius r about the origin.
    FockCircle { n: usize, r: f64 },
    /// D(q,p)|n> from the radius sqrt(2n) circle about (q, p).
    DisplacedFockCircle { n: usize, center: PhasePoint },
    /// S0(mu)|0> from the horizontal (mu > 0) or vertical (mu < 0) line
    /// through the anchor.
    SqueezedLine { mu: f64, anchor: f64 },
}

impl SuperpositionKind {
    pub fn momentum_line(p0: f64) -> Self {
        SuperpositionKind::MomentumLine { p0, line_p: p0 }
    }

    pub fn position_line(q0: f64) -> Self {
        SuperpositionKind::PositionLine { q0, line_q: q0 }
    }

    pub fn is_circle(&self) -> bool {
        matches!(
            self,
            SuperpositionKind::FockCircle { .. } | SuperpositionKind::DisplacedFockCircle { .. }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperpositionSpec {
    pub kind: SuperpositionKind,
    pub samples: usize,
    /// Half-length of a line; `None` picks the kind's default. Ignored for
    /// circles.
    pub extent: Option<f64>,
}

impl SuperpositionSpec {
    /// Default sampling for the kind.
    pub fn new(kind: SuperpositionKind) -> Self {
        let samples = if kind.is_circle() {
            DEFAULT_CIRCLE_SAMPLES
        } else {
            DEFAULT_LINE_SAMPLES
        };
        SuperpositionSpec {
            kind,
            samples,
            extent: None,
        }
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_extent(mut self, extent: f64) -> Self {
        self.extent = Some(extent);
        self
    }

    fn validate(&self) -> Result<()> {
        use SuperpositionKind::*;
        let min = if self.kind.is_circle() { 8 } else { 2 };
        if self.samples < min {
            return Err(invalid(format!(
                "need at least {min} samples, got {}",
                self.samples
            )));
        }
        if let Some(l) = self.extent {
            if !(l.is_finite() && l > 0.0) {
                return Err(invalid(format!("line extent must be positive, got {l}")));
            }
        }
        let finite = |xs: &[f64]| xs.iter().all(|x| x.is_finite());
        let ok = match self.kind {
            MomentumLine { p0, line_p } => finite(&[p0, line_p]),
            PositionLine { q0, line_q } => finite(&[q0, line_q]),
            GaussianLine { sigma, p0 } => finite(&[sigma, p0]) && sigma > 0.0,
            FockCircle { r, .. } => r.is_finite() && r > 0.0,
            DisplacedFockCircle { center, .. } => center.is_finite(),
            SqueezedLine { mu, anchor } => finite(&[mu, anchor]) && mu != 0.0,
        };
        if !ok {
            return Err(invalid(format!(
                "invalid superposition parameters {:?}",
                self.kind
            )));
        }
        Ok(())
    }

    /// Half-length actually used for line kinds.
    pub fn line_extent(&self) -> f64 {
        use SuperpositionKind::*;
        if let Some(l) = self.extent {
            return l;
        }
        match self.kind {
            GaussianLine { sigma, .. } => GAUSSIAN_EXTENT_SIGMAS / sigma,
            SqueezedLine { mu, .. } => {
                let k2 = mu.abs().exp();
                GAUSSIAN_EXTENT_SIGMAS * (k2 - 1.0).sqrt()
            }
            _ => DEFAULT_EIGEN_EXTENT,
        }
    }
}

/// One discretized term: quadrature-weighted amplitude on a coherent state.
/// The weight is held as (ln |w|, arg w) because circle weights overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperpositionTerm {
    pub point: PhasePoint,
    pub log_weight: f64,
    pub phase: f64,
}

impl SuperpositionTerm {
    pub fn weight(&self) -> Complex64 {
        Complex64::from_polar(self.log_weight.exp(), self.phase)
    }
}

fn trapezoid(extent: f64, samples: usize) -> impl Iterator<Item = (f64, f64)> {
    let h = 2.0 * extent / (samples - 1) as f64;
    (0..samples).map(move |j| {
        let x = -extent + j as f64 * h;
        let w = if j == 0 || j + 1 == samples {
            0.5 * h
        } else {
            h
        };
        (x, w)
    })
}

/// The discretized integrand, term by term, including quadrature weights.
pub fn superposition_terms(spec: &SuperpositionSpec) -> Result<Vec<SuperpositionTerm>> {
    use SuperpositionKind::*;
    spec.validate()?;
    let n_s = spec.samples;
    let eigen_norm = -(2.0f64.ln() + 0.75 * PI.ln());
    let terms = match spec.kind {
        MomentumLine { p0, line_p } => {
            let shift = 0.5 * (p0 - line_p).powi(2);
            trapezoid(spec.line_extent(), n_s)
                .map(|(q, w)| SuperpositionTerm {
                    point: PhasePoint::new(q, line_p),
                    log_weight: eigen_norm + shift + w.ln(),
                    phase: q * (p0 - 0.5 * line_p),
                })
                .collect()
        }
        PositionLine { q0, line_q } => {
            let shift = 0.5 * (q0 - line_q).powi(2);
            trapezoid(spec.line_extent(), n_s)
                .map(|(p, w)| SuperpositionTerm {
                    point: PhasePoint::new(line_q, p),
                    log_weight: eigen_norm + shift + w.ln(),
                    phase: -p * (q0 - 0.5 * line_q),
                })
                .collect()
        }
        GaussianLine { sigma, p0 } => trapezoid(spec.line_extent(), n_s)
            .map(|(q, w)| SuperpositionTerm {
                point: PhasePoint::new(q, p0),
                log_weight: -0.5 * sigma * sigma * q * q + w.ln(),
                phase: 0.5 * q * p0,
            })
            .collect(),
        FockCircle { n, r } => {
            let nf = n as f64;
            let log_amp = 0.25 * r * r + 0.5 * log_factorial(n) + nf * (2f64.sqrt() / r).ln()
                - (2.0 * PI).ln();
            let dtheta = 2.0 * PI / n_s as f64;
            (0..n_s)
                .map(|j| {
                    let theta = j as f64 * dtheta;
                    SuperpositionTerm {
                        point: PhasePoint::polar(r, theta),
                        log_weight: log_amp + dtheta.ln(),
                        phase: -nf * theta,
                    }
                })
                .collect()
        }
        DisplacedFockCircle { n, center } => {
            let nf = n as f64;
            let r = (2.0 * nf).sqrt();
            let log_amp = norm_factor_log(n) - (2.0 * PI).ln();
            let dtheta = 2.0 * PI / n_s as f64;
            let half = (0.5 * nf).sqrt();
            (0..n_s)
                .map(|j| {
                    let theta = j as f64 * dtheta;
                    let (s, c) = theta.sin_cos();
                    SuperpositionTerm {
                        point: PhasePoint::new(center.q + r * c, center.p + r * s),
                        log_weight: log_amp + dtheta.ln(),
                        phase: -nf * theta + half * (center.p * c - center.q * s),
                    }
                })
                .collect()
        }
        SqueezedLine { mu, anchor } => {
            let k2 = mu.abs().exp();
            let s2 = k2 - 1.0;
            let log_amp =
                0.5 * (k2.sqrt() / (2.0 * PI * s2)).ln() + k2 * anchor * anchor / (2.0 * s2);
            let slope = (k2 + 1.0) * anchor / (2.0 * s2);
            trapezoid(spec.line_extent(), n_s)
                .map(|(x, w)| {
                    let (point, phase) = if mu > 0.0 {
                        (PhasePoint::new(x, anchor), -x * slope)
                    } else {
                        (PhasePoint::new(anchor, x), x * slope)
                    };
                    SuperpositionTerm {
                        point,
                        log_weight: log_amp - x * x / (2.0 * s2) + w.ln(),
                        phase,
                    }
                })
                .collect()
        }
    };
    Ok(terms)
}

/// Sum the discretized superposition into the truncated Fock space.
pub fn build_superposition(spec: &SuperpositionSpec, cutoff: usize) -> Result<FockVector> {
    let terms = superposition_terms(spec)?;
    let mut weighted_tail = 0.0;
    let mut weight_sum = 0.0;
    let peak = terms
        .iter()
        .map(|t| t.log_weight)
        .fold(f64::NEG_INFINITY, f64::max);
    for t in &terms {
        let w = (t.log_weight - peak).exp();
        weight_sum += w;
        weighted_tail += w * poisson_tail_above(t.point.z_norm_sqr(), cutoff).sqrt();
    }
    if weighted_tail > SUPERPOSITION_TAIL * weight_sum {
        return Err(Error::Truncation(format!(
            "cutoff {cutoff} leaves weighted tail {:e} of the sampled coherent states",
            weighted_tail / weight_sum
        )));
    }
    let mut coeffs = vec![Complex64::new(0.0, 0.0); cutoff + 1];
    for t in &terms {
        let z = t.point.z();
        let r = z.norm();
        let base = t.log_weight - 0.5 * r * r;
        if r == 0.0 {
            coeffs[0] += Complex64::from_polar(base.exp(), t.phase);
            continue;
        }
        let (log_r, angle) = (r.ln(), z.arg());
        for (n, c) in coeffs.iter_mut().enumerate() {
            let nf = n as f64;
            let log_mag = base + nf * log_r - 0.5 * log_factorial(n);
            *c += Complex64::from_polar(log_mag.exp(), t.phase + nf * angle);
        }
    }
    FockVector::from_coeffs(coeffs)
}

/// Density normalization for Q functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QConvention {
    /// Integrates to one against dq dp.
    #[default]
    PerDqDp,
    /// Integrates to one against d^2z / pi.
    PerD2zOverPi,
}

impl QConvention {
    fn divisor(self) -> f64 {
        match self {
            QConvention::PerDqDp => 2.0 * PI,
            QConvention::PerD2zOverPi => PI,
        }
    }
}

/// |<q,p|psi>|^2 / |psi|^2 over the convention's measure constant.
pub fn q_function(state: &FockVector, point: PhasePoint, convention: QConvention) -> Result<f64> {
    let norm = state.norm_sqr();
    if norm == 0.0 {
        return Err(invalid("Q function of the zero vector"));
    }
    Ok(state.coherent_amplitude(point).norm_sqr() / norm / convention.divisor())
}

/// States with a closed-form Q function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QFamily {
    Position(f64),
    Momentum(f64),
    Fock(usize),
}

/// Closed-form Q functions per dq dp.
pub fn q_closed_form(family: QFamily, point: PhasePoint) -> f64 {
    match family {
        QFamily::Position(q0) => (-(point.q - q0).powi(2)).exp() / (2.0 * PI.powf(1.5)),
        QFamily::Momentum(p0) => (-(point.p - p0).powi(2)).exp() / (2.0 * PI.powf(1.5)),
        QFamily::Fock(n) => {
            let half_r2 = point.z_norm_sqr();
            if half_r2 == 0.0 {
                return if n == 0 { 1.0 / (2.0 * PI) } else { 0.0 };
            }
            let log_q = n as f64 * half_r2.ln() - half_r2 - log_factorial(n);
            log_q.exp() / (2.0 * PI)
        }
    }
}

/// Pieces of the two-source interference formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferenceBreakdown {
    pub i1: f64,
    pub i2: f64,
    pub delta: f64,
    pub q_value: f64,
}

/// Q function (per d^2z/pi) of |z1> + e^{i theta}|z2>, split into source
/// intensities and the relative phase delta.
pub fn two_source_q(
    z1: PhasePoint,
    z2: PhasePoint,
    theta: f64,
    point: PhasePoint,
) -> InterferenceBreakdown {
    let i1 = (-(point - z1).z_norm_sqr()).exp();
    let i2 = (-(point - z2).z_norm_sqr()).exp();
    let delta0 = theta + triangle_area(PhasePoint::ORIGIN, z1, z2);
    let delta = delta0 + triangle_area(z1, point, z2);
    let norm = 2.0 * (1.0 + (-0.5 * (z1 - z2).z_norm_sqr()).exp() * delta0.cos());
    let q_value = (i1 + i2 + 2.0 * (i1 * i2).sqrt() * delta.cos()) / (PI * norm);
    InterferenceBreakdown {
        i1,
        i2,
        delta,
        q_value,
    }
}

/// |-q0, 0> + e^{i theta} |q0, 0>, unnormalized.
pub fn cat_state(q0: f64, theta: f64, cutoff: usize) -> Result<FockVector> {
    let a = coherent_fock_coeffs(PhasePoint::new(-q0, 0.0), cutoff)?;
    let b = coherent_fock_coeffs(PhasePoint::new(q0, 0.0), cutoff)?;
    let phase = Complex64::from_polar(1.0, theta);
    FockVector::from_coeffs(
        a.coeffs()
            .iter()
            .zip(b.coeffs())
            .map(|(x, y)| x + phase * y)
            .collect(),
    )
}

/// Means, variances and symmetrized covariance of q and p.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean_q: f64,
    pub mean_p: f64,
    pub var_q: f64,
    pub var_p: f64,
    pub cov_qp: f64,
}

/// Quadrature moments from ladder-operator actions on the coefficients.
pub fn quadrature_stats(state: &FockVector) -> Result<Moments> {
    let norm = state.norm_sqr();
    if norm == 0.0 {
        return Err(invalid("moments of the zero vector"));
    }
    if state.tail_mass() >= TAIL_WARNING {
        return Err(Error::Truncation(format!(
            "tail mass {:e} at cutoff {}",
            state.tail_mass(),
            state.cutoff()
        )));
    }
    let c = state.coeffs();
    let mut a1 = Complex64::new(0.0, 0.0);
    let mut a2 = Complex64::new(0.0, 0.0);
    let mut number = 0.0;
    for n in 0..c.len() {
        number += n as f64 * c[n].norm_sqr();
        if n + 1 < c.len() {
            a1 += c[n].conj() * c[n + 1] * ((n + 1) as f64).sqrt();
        }
        if n + 2 < c.len() {
            a2 += c[n].conj() * c[n + 2] * (((n + 1) * (n + 2)) as f64).sqrt();
        }
    }
    let (a1, a2, number) = (a1 / norm, a2 / norm, number / norm);
    let mean_q = 2f64.sqrt() * a1.re;
    let mean_p = 2f64.sqrt() * a1.im;
    let q2 = a2.re + number + 0.5;
    let p2 = -a2.re + number + 0.5;
    Ok(Moments {
        mean_q,
        mean_p,
        var_q: q2 - mean_q * mean_q,
        var_p: p2 - mean_p * mean_p,
        cov_qp: a2.im - mean_q * mean_p,
    })
}

/// Unitary evolutions applied to a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Transform {
    Displace(PhasePoint),
    /// Multiplies |n> by e^{i t n}.
    Rotate(f64),
}

/// Apply a displacement or rotation. Displacements are computed in a padded
/// space and must fit back into the original cutoff.
pub fn evolve(state: &FockVector, transform: Transform) -> Result<FockVector> {
    match transform {
        Transform::Rotate(t) => {
            ensure_finite("t", t)?;
            FockVector::from_coeffs(
                state
                    .coeffs()
                    .iter()
                    .enumerate()
                    .map(|(n, c)| c * Complex64::from_polar(1.0, t * n as f64))
                    .collect(),
            )
        }
        Transform::Displace(pt) => {
            let kind = OperatorKind::Displacement(pt);
            let big = state.cutoff() + kind.min_cutoff();
            let matrix = operator_matrix(kind, big)?;
            let out = matrix.apply(state.padded(big)?.coeffs())?;
            let keep = state.cutoff() + 1;
            let spill: f64 = out[keep..].iter().map(|c| c.norm_sqr()).sum();
            let total = state.norm_sqr();
            if spill > 1e-10 * total {
                return Err(Error::Truncation(format!(
                    "displaced state leaks {:e} of its norm beyond cutoff {}",
                    spill / total,
                    state.cutoff()
                )));
            }
            FockVector::from_coeffs(out[..keep].to_vec())
        }
    }
}

/// The label reached by rotating `point` anticlockwise by t.
pub fn rotated_label(point: PhasePoint, t: f64) -> PhasePoint {
    let (s, c) = t.sin_cos();
    PhasePoint::new(c * point.q - s * point.p, s * point.q + c * point.p)
}

/// Sum_j e^{i m theta_j} |r e^{i theta_j}> (2 pi / N): zero for m >= 1.
pub fn circle_null_vector(m: usize, r: f64, samples: usize, cutoff: usize) -> Result<FockVector> {
    let dtheta = 2.0 * PI / samples as f64;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); cutoff + 1];
    for j in 0..samples {
        let theta = j as f64 * dtheta;
        let phase = Complex64::from_polar(dtheta, m as f64 * theta);
        let state = coherent_fock_coeffs(PhasePoint::polar(r, theta), cutoff)?;
        for (acc, c) in coeffs.iter_mut().zip(state.coeffs()) {
            *acc += phase * c;
        }
    }
    FockVector::from_coeffs(coeffs)
}

/// Momentum-space amplitude <p|psi> from the oscillator eigenfunctions,
/// using psi_n(p) in momentum space = (-i)^n psi_n(p).
pub fn momentum_amplitude(state: &FockVector, p: f64) -> Complex64 {
    let psi = crate::specfun::fock_wavefunctions(state.cutoff(), p);
    let mut phase = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for (c, f) in state.coeffs().iter().zip(psi) {
        sum += c * phase * f;
        phase *= -Complex64::i();
    }
    sum
}
