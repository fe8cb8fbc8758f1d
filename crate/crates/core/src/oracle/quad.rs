//! Adaptive tensor-product Gauss-Legendre quadrature of the Gaussian double
//! integrals behind the closed-form overlaps.

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{ensure_finite, invalid, Error, Result};
use crate::phasespace::PhasePoint;
use crate::specfun::fock_wavefunctions;
use crate::states::FockVector;

/// Absolute agreement required between successive refinements.
pub const QUAD_TOL: f64 = 1e-10;
const NODES_PER_PANEL: usize = 20;
const START_PANELS: usize = 4;
const MAX_PANELS: usize = 512;
/// Box half-widths in units of the Gaussian standard deviation.
const WIDTHS: f64 = 10.0;

/// Double integrals with a known closed form.
#[derive(Debug, Clone, Copy)]
pub enum QuadKind<'a> {
    /// Position-momentum overlap <q|p> written as an integral over the
    /// coherent-state resolution of identity.
    Posmom { q: f64, p: f64 },
    /// Oscillator kernel <q2|e^{-iHt}|q1> from its momentum-pair expansion.
    Propagator { q1: f64, q2: f64, t: f64 },
    /// <phi|psi> from the resolution of identity over |q,p>.
    Resolution {
        phi: &'a FockVector,
        psi: &'a FockVector,
    },
}

fn gauss_legendre_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(NODES_PER_PANEL))
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut deriv = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            deriv = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / deriv;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * deriv * deriv);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Oriented rectangle: centre plus orthonormal axes with half-extents.
#[derive(Debug, Clone, Copy)]
struct Box2 {
    center: [f64; 2],
    axis_u: [f64; 2],
    half_u: f64,
    half_v: f64,
}

fn axis_nodes(half: f64, panels: usize) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre_rule();
    let width = 2.0 * half / panels as f64;
    let mut out = Vec::with_capacity(panels * x.len());
    for k in 0..panels {
        let mid = -half + (k as f64 + 0.5) * width;
        for (xi, wi) in x.iter().zip(w) {
            out.push((mid + 0.5 * width * xi, 0.5 * width * wi));
        }
    }
    out
}

fn integrate_once<F>(f: &F, b: &Box2, panels: usize) -> Complex64
where
    F: Fn(f64, f64) -> Complex64 + Sync,
{
    let us = axis_nodes(b.half_u, panels);
    let vs = axis_nodes(b.half_v, panels);
    let [ux, uy] = b.axis_u;
    let (vx, vy) = (-uy, ux);
    us.par_iter()
        .map(|&(s, ws)| {
            let mut row = Complex64::new(0.0, 0.0);
            for &(t, wt) in &vs {
                let x = b.center[0] + s * ux + t * vx;
                let y = b.center[1] + s * uy + t * vy;
                row += f(x, y) * wt;
            }
            row * ws
        })
        .collect::<Vec<_>>()
        .into_iter()
        .sum()
}

fn integrate_adaptive<F>(f: F, b: Box2) -> Result<Complex64>
where
    F: Fn(f64, f64) -> Complex64 + Sync,
{
    let mut panels = START_PANELS;
    let mut previous = integrate_once(&f, &b, panels);
    let mut last_change = f64::INFINITY;
    while panels < MAX_PANELS {
        panels *= 2;
        let current = integrate_once(&f, &b, panels);
        last_change = (current - previous).norm();
        if last_change < QUAD_TOL {
            return Ok(current);
        }
        previous = current;
    }
    Err(Error::QuadratureFailure {
        tol: QUAD_TOL,
        last_change,
    })
}

fn integrate<F>(f: F, b: Box2, panels: Option<usize>) -> Result<Complex64>
where
    F: Fn(f64, f64) -> Complex64 + Sync,
{
    match panels {
        Some(n) => Ok(integrate_once(&f, &b, n)),
        None => integrate_adaptive(f, b),
    }
}

fn posmom_quad(q: f64, p: f64, panels: Option<usize>) -> Result<Complex64> {
    let i = Complex64::i();
    let integrand = move |qq: f64, pp: f64| {
        let chi = Complex64::new(
            0.25 * (qq * qq + pp * pp) - 0.5 * (qq * q + pp * p),
            0.5 * (qq * pp - qq * p - pp * q),
        );
        (-chi).exp()
    };
    // the real part of chi is centred on (q, p) with standard deviation sqrt(2)
    let half = WIDTHS * 2f64.sqrt();
    let b = Box2 {
        center: [q, p],
        axis_u: [1.0, 0.0],
        half_u: half,
        half_v: half,
    };
    let integral = integrate(integrand, b, panels)?;
    let prefactor = (Complex64::new(-0.25 * (q * q + p * p), 0.0) + i * (0.5 * q * p)).exp()
        / (4.0 * PI.powf(1.5));
    Ok(prefactor * integral)
}

fn propagator_quad(q1: f64, q2: f64, t: f64, panels: Option<usize>) -> Result<Complex64> {
    let (s, c) = t.sin_cos();
    if (1.0 - c.abs()) < 1e-6 {
        return Err(Error::Caustic { sin_t: s });
    }
    let e = Complex64::from_polar(1.0, -t);
    let i = Complex64::i();
    let integrand = move |p1: f64, p2: f64| {
        let z = 0.25 * (p1 * p1 + p2 * p2) - 0.5 * p1 * p2 * e
            + 0.5 * i * ((q1 - q2 * e) * p1 - (q2 - q1 * e) * p2)
            + 0.25 * (q1 * q1 + q2 * q2)
            - 0.5 * q1 * q2 * e;
        (-z).exp()
    };
    // Re Z = p.A.p/2 + b.p + const with A = [[1, -c], [-c, 1]]/2
    let (b1, b2) = (-0.5 * q2 * s, 0.5 * q1 * s);
    let det = 0.25 * (1.0 - c * c);
    let center = [
        -(0.5 * b1 + 0.5 * c * b2) / det,
        -(0.5 * c * b1 + 0.5 * b2) / det,
    ];
    let lambda_u = 0.5 * (1.0 - c);
    let lambda_v = 0.5 * (1.0 + c);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let b = Box2 {
        center,
        axis_u: [r, r],
        half_u: WIDTHS / lambda_u.sqrt(),
        half_v: WIDTHS / lambda_v.sqrt(),
    };
    let integral = integrate(integrand, b, panels)?;
    Ok(Complex64::from_polar(1.0, -0.5 * t) / (4.0 * PI.powf(1.5)) * integral)
}

fn resolution_quad(phi: &FockVector, psi: &FockVector, panels: Option<usize>) -> Result<Complex64> {
    for (name, v) in [("phi", phi), ("psi", psi)] {
        if v.tail_mass() >= 1e-10 {
            return Err(Error::Truncation(format!(
                "{name} has tail mass {:e}",
                v.tail_mass()
            )));
        }
    }
    let n_eff = [phi, psi]
        .iter()
        .map(|v| v.effective_top())
        .max()
        .unwrap_or(0);
    // |<z|n>| ~ exp(-(r - sqrt(2n))^2 / 4) beyond the ring
    let half = (2.0 * n_eff as f64).sqrt() + WIDTHS * 2f64.sqrt();
    let integrand = |q: f64, p: f64| {
        let pt = PhasePoint::new(q, p);
        let a = phi.coherent_amplitude(pt);
        let b = psi.coherent_amplitude(pt);
        a.conj() * b / (2.0 * PI)
    };
    let b = Box2 {
        center: [0.0, 0.0],
        axis_u: [1.0, 0.0],
        half_u: half,
        half_v: half,
    };
    integrate(integrand, b, panels)
}

/// Brute-force 2-D quadrature of one of the reference double integrals,
/// refined until successive panel doublings agree to `QUAD_TOL`.
pub fn quad_overlap_2d(kind: QuadKind<'_>) -> Result<Complex64> {
    quad_dispatch(kind, None)
}

/// The same integral on a fixed number of 20-point panels per axis.
pub fn quad_overlap_fixed(kind: QuadKind<'_>, panels: usize) -> Result<Complex64> {
    if panels == 0 {
        return Err(invalid("need at least one panel"));
    }
    quad_dispatch(kind, Some(panels))
}

fn quad_dispatch(kind: QuadKind<'_>, panels: Option<usize>) -> Result<Complex64> {
    match kind {
        QuadKind::Posmom { q, p } => {
            ensure_finite("q", q)?;
            ensure_finite("p", p)?;
            posmom_quad(q, p, panels)
        }
        QuadKind::Propagator { q1, q2, t } => {
            for (name, x) in [("q1", q1), ("q2", q2), ("t", t)] {
                ensure_finite(name, x)?;
            }
            propagator_quad(q1, q2, t, panels)
        }
        QuadKind::Resolution { phi, psi } => {
            if phi.cutoff() != psi.cutoff() {
                return Err(invalid("resolution states must share a cutoff"));
            }
            resolution_quad(phi, psi, panels)
        }
    }
}

/// Oscillator kernel from the Fock-space rotation e^{-i(n+1/2) tau} between
/// position eigenstates, at complex time tau with Im tau < 0 so the sum
/// converges geometrically.
pub fn fock_rotation_propagator(
    q2: f64,
    q1: f64,
    tau: Complex64,
    cutoff: usize,
) -> Result<Complex64> {
    if tau.im >= 0.0 {
        return Err(invalid(
            "the Fock-space kernel sum needs Im tau < 0 to converge",
        ));
    }
    let psi1 = fock_wavefunctions(cutoff, q1);
    let psi2 = fock_wavefunctions(cutoff, q2);
    let step = (-Complex64::i() * tau).exp();
    let mut phase = (-Complex64::i() * tau * 0.5).exp();
    let mut sum = Complex64::new(0.0, 0.0);
    for (a, b) in psi1.iter().zip(&psi2) {
        sum += phase * (a * b);
        phase *= step;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(20);
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
        let m38: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(38)).sum();
        assert!((m38 - 2.0 / 39.0).abs() < 1e-14);
    }

    #[test]
    fn posmom_at_origin() {
        let v = quad_overlap_2d(QuadKind::Posmom { q: 0.0, p: 0.0 }).unwrap();
        assert!((v - Complex64::new(1.0 / (2.0 * PI).sqrt(), 0.0)).norm() < 1e-8);
    }

    #[test]
    fn propagator_quarter_period() {
        let v = quad_overlap_2d(QuadKind::Propagator {
            q1: 0.0,
            q2: 0.0,
            t: PI / 2.0,
        })
        .unwrap();
        let want = (2.0 * PI * Complex64::i()).powf(-0.5);
        assert!((v - want).norm() < 1e-7, "{v} vs {want}");
    }

    #[test]
    fn fock_rotation_needs_damping() {
        assert!(fock_rotation_propagator(0.0, 0.0, Complex64::new(1.0, 0.0), 64).is_err());
    }
}
