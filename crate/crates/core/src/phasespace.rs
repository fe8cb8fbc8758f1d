//! Coherent-state geometry in the (q, p) plane: overlaps, displacement
//! composition phases, signed areas and geometric phases of polylines.

use num_complex::Complex64;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{invalid, Result};
use crate::specfun::wrap_phase;

/// A coherent-state label; z = (q + ip)/sqrt(2).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhasePoint {
    pub q: f64,
    pub p: f64,
}

impl PhasePoint {
    pub const ORIGIN: PhasePoint = PhasePoint { q: 0.0, p: 0.0 };

    pub fn new(q: f64, p: f64) -> Self {
        PhasePoint { q, p }
    }

    pub fn polar(r: f64, theta: f64) -> Self {
        PhasePoint {
            q: r * theta.cos(),
            p: r * theta.sin(),
        }
    }

    pub fn from_z(z: Complex64) -> Self {
        PhasePoint {
            q: z.re * std::f64::consts::SQRT_2,
            p: z.im * std::f64::consts::SQRT_2,
        }
    }

    pub fn z(self) -> Complex64 {
        Complex64::new(self.q * FRAC_1_SQRT_2, self.p * FRAC_1_SQRT_2)
    }

    /// |z|^2 = (q^2 + p^2)/2.
    pub fn z_norm_sqr(self) -> f64 {
        0.5 * (self.q * self.q + self.p * self.p)
    }

    pub fn is_finite(self) -> bool {
        self.q.is_finite() && self.p.is_finite()
    }

    fn dist_sqr(self, other: PhasePoint) -> f64 {
        let dq = self.q - other.q;
        let dp = self.p - other.p;
        dq * dq + dp * dp
    }
}

impl std::ops::Add for PhasePoint {
    type Output = PhasePoint;
    fn add(self, o: PhasePoint) -> PhasePoint {
        PhasePoint::new(self.q + o.q, self.p + o.p)
    }
}

impl std::ops::Sub for PhasePoint {
    type Output = PhasePoint;
    fn sub(self, o: PhasePoint) -> PhasePoint {
        PhasePoint::new(self.q - o.q, self.p - o.p)
    }
}

/// How the swept area of one polyline segment is measured about the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SegmentModel {
    /// Straight chord: the swept area is the triangle (origin, a, b).
    #[default]
    Chord,
    /// Radius interpolated linearly in the polar angle. Exact for arcs of
    /// origin-centred circles; falls back to the chord near the origin.
    Arc,
}

/// An ordered polyline of coherent-state labels.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseCurve {
    points: Vec<PhasePoint>,
    closed: bool,
    model: SegmentModel,
}

impl PhaseCurve {
    pub fn open(points: Vec<PhasePoint>) -> Result<Self> {
        Self::build(points, false, SegmentModel::Chord)
    }

    /// The last point is joined back to the first implicitly.
    pub fn closed(points: Vec<PhasePoint>) -> Result<Self> {
        Self::build(points, true, SegmentModel::Chord)
    }

    /// N uniform samples of the circle of radius r about the origin, with
    /// arc segments.
    pub fn circle(r: f64, samples: usize) -> Result<Self> {
        if !(r.is_finite() && r > 0.0) {
            return Err(invalid(format!("circle radius must be positive, got {r}")));
        }
        let points = (0..samples)
            .map(|j| PhasePoint::polar(r, 2.0 * PI * j as f64 / samples as f64))
            .collect();
        Self::build(points, true, SegmentModel::Arc)
    }

    pub fn with_model(mut self, model: SegmentModel) -> Self {
        self.model = model;
        self
    }

    fn build(points: Vec<PhasePoint>, closed: bool, model: SegmentModel) -> Result<Self> {
        let needed = if closed { 3 } else { 2 };
        if points.len() < needed {
            return Err(invalid(format!(
                "{} curve needs at least {needed} points, got {}",
                if closed { "closed" } else { "open" },
                points.len()
            )));
        }
        if let Some(bad) = points.iter().find(|pt| !pt.is_finite()) {
            return Err(invalid(format!("non-finite curve point {bad:?}")));
        }
        Ok(PhaseCurve {
            points,
            closed,
            model,
        })
    }

    pub fn points(&self) -> &[PhasePoint] {
        &self.points
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn model(&self) -> SegmentModel {
        self.model
    }

    fn segments(&self) -> impl Iterator<Item = (PhasePoint, PhasePoint)> + '_ {
        let n = self.points.len();
        let count = if self.closed { n } else { n - 1 };
        (0..count).map(move |i| (self.points[i], self.points[(i + 1) % n]))
    }
}

/// <a|b> for normalized coherent states.
pub fn coherent_overlap(a: PhasePoint, b: PhasePoint) -> Complex64 {
    let modulus = (-0.25 * a.dist_sqr(b)).exp();
    let phase = -0.5 * (b.q * a.p - b.p * a.q);
    Complex64::from_polar(modulus, phase)
}

/// Label and phase phi with D(second) D(first) = e^{i phi} D(first + second).
pub fn displacement_compose(
    first_applied: PhasePoint,
    second_applied: PhasePoint,
) -> (PhasePoint, f64) {
    let (a, b) = (first_applied, second_applied);
    (a + b, 0.5 * (a.q * b.p - a.p * b.q))
}

/// Signed area, positive when v0 -> v1 -> v2 runs anticlockwise.
pub fn triangle_area(v0: PhasePoint, v1: PhasePoint, v2: PhasePoint) -> f64 {
    0.5 * ((v1.q - v0.q) * (v2.p - v0.p) - (v2.q - v0.q) * (v1.p - v0.p))
}

/// arg <a|b>, unreduced: the triangle (origin, a, b).
pub fn pancharatnam_phase(a: PhasePoint, b: PhasePoint) -> f64 {
    0.5 * (a.q * b.p - b.q * a.p)
}

/// arg of <a|b><b|c><c|a>, unreduced: the triangle (a, b, c).
pub fn bargmann_phase(a: PhasePoint, b: PhasePoint, c: PhasePoint) -> f64 {
    triangle_area(a, b, c)
}

const ARC_FALLBACK_RADIUS: f64 = 1e-12;

fn swept_area(a: PhasePoint, b: PhasePoint, model: SegmentModel) -> f64 {
    let chord = pancharatnam_phase(a, b);
    match model {
        SegmentModel::Chord => chord,
        SegmentModel::Arc => {
            let ra = a.q.hypot(a.p);
            let rb = b.q.hypot(b.p);
            if ra < ARC_FALLBACK_RADIUS || rb < ARC_FALLBACK_RADIUS {
                return chord;
            }
            let dtheta = wrap_phase(b.p.atan2(b.q) - a.p.atan2(a.q));
            dtheta * (ra * ra + ra * rb + rb * rb) / 6.0
        }
    }
}

/// Geometric phase of a coherent-state polyline, not reduced mod 2 pi.
///
/// Closed curves give minus the enclosed signed area. Open curves give the
/// Pancharatnam phase of the end relative to the start minus the area swept
/// about the origin.
pub fn polyline_geometric_phase(curve: &PhaseCurve) -> f64 {
    let mut swept = 0.0;
    for (a, b) in curve.segments() {
        if curve.model == SegmentModel::Arc {
            let dtheta = wrap_phase(b.p.atan2(b.q) - a.p.atan2(a.q));
            if dtheta.abs() >= PI / 2.0 {
                log::warn!("segment {a:?} -> {b:?} turns by {dtheta:.3} rad");
            }
        }
        swept += swept_area(a, b, curve.model);
    }
    if curve.closed {
        -swept
    } else {
        let first = curve.points[0];
        let last = *curve.points.last().expect("curve has points");
        pancharatnam_phase(first, last) - swept
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(q: f64, p: f64) -> PhasePoint {
        PhasePoint::new(q, p)
    }

    #[test]
    fn overlap_examples() {
        let a = pt(0.3, -1.2);
        assert!((coherent_overlap(a, a) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let v = coherent_overlap(PhasePoint::ORIGIN, pt(1.0, 2.0));
        assert!((v - Complex64::new((-1.25f64).exp(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn overlap_matches_fock_series() {
        let a = pt(1.0, 0.0);
        let b = pt(0.0, 1.0);
        let (za, zb) = (a.z(), b.z());
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        let x = za.conj() * zb;
        for n in 1..64 {
            term *= x / n as f64;
            sum += term;
        }
        let series = sum * (-(za.norm_sqr() + zb.norm_sqr()) / 2.0).exp();
        assert!((coherent_overlap(a, b) - series).norm() < 1e-15);
        let want = Complex64::from_polar((-0.5f64).exp(), 0.5);
        assert!((coherent_overlap(a, b) - want).norm() < 1e-15);
    }

    #[test]
    fn z_round_trip() {
        let a = pt(-2.5, 0.125);
        let back = PhasePoint::from_z(a.z());
        assert!((back.q - a.q).abs() < 1e-15 && (back.p - a.p).abs() < 1e-15);
    }

    #[test]
    fn compose_examples() {
        let z = pt(1.5, -0.5);
        let (sum, phi) = displacement_compose(z, pt(-1.5, 0.5));
        assert_eq!(sum, PhasePoint::ORIGIN);
        assert_eq!(phi, 0.0);
        let (sum, phi) = displacement_compose(pt(2.0, 0.0), pt(0.0, 3.0));
        assert_eq!(sum, pt(2.0, 3.0));
        assert_eq!(phi, 3.0);
    }

    #[test]
    fn area_examples() {
        let o = PhasePoint::ORIGIN;
        assert_eq!(triangle_area(o, pt(1.0, 0.0), pt(0.0, 1.0)), 0.5);
        assert_eq!(triangle_area(o, pt(0.0, 1.0), pt(1.0, 0.0)), -0.5);
        assert_eq!(triangle_area(o, pt(1.0, 1.0), pt(2.0, 2.0)), 0.0);
        assert_eq!(pancharatnam_phase(pt(1.0, 0.0), pt(0.0, 1.0)), 0.5);
        assert_eq!(bargmann_phase(o, pt(1.0, 0.0), pt(0.0, 1.0)), 0.5);
        assert_eq!(bargmann_phase(o, o, pt(0.0, 1.0)), 0.0);
    }

    #[test]
    fn polyline_examples() {
        let square =
            PhaseCurve::closed(vec![pt(0.0, 0.0), pt(1.0, 0.0), pt(1.0, 1.0), pt(0.0, 1.0)])
                .unwrap();
        assert!((polyline_geometric_phase(&square) + 1.0).abs() < 1e-15);
        let radial =
            PhaseCurve::open((0..10).map(|i| pt(2.0 * i as f64 / 9.0, 0.0)).collect()).unwrap();
        assert_eq!(polyline_geometric_phase(&radial), 0.0);
        let radial_arc = radial.with_model(SegmentModel::Arc);
        assert_eq!(polyline_geometric_phase(&radial_arc), 0.0);
    }

    #[test]
    fn circle_arc_model_is_exact() {
        let r = 10f64.sqrt();
        let circle = PhaseCurve::circle(r, 500).unwrap();
        assert!((polyline_geometric_phase(&circle) + 10.0 * PI).abs() < 1e-10);
    }

    #[test]
    fn curve_point_count_guards() {
        assert!(PhaseCurve::open(vec![pt(0.0, 0.0)]).is_err());
        assert!(PhaseCurve::closed(vec![pt(0.0, 0.0), pt(1.0, 0.0)]).is_err());
        assert!(PhaseCurve::open(vec![pt(0.0, f64::NAN), pt(1.0, 0.0)]).is_err());
        assert!(PhaseCurve::circle(0.0, 10).is_err());
    }
}
