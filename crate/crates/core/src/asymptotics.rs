//! Saddle-point approximations of Fock wavefunctions and displacement
//! matrix elements, with the classical benchmarks they are compared against.

use std::f64::consts::{FRAC_PI_4, PI};

use crate::error::{invalid, Result};
use crate::specfun::log_factorial;

/// An approximation, or the reason it does not apply.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxValue {
    pub value: f64,
    pub valid: bool,
    pub note: String,
}

impl ApproxValue {
    fn ok(value: f64) -> Self {
        ApproxValue {
            value,
            valid: true,
            note: String::new(),
        }
    }

    fn outside(note: impl Into<String>) -> Self {
        ApproxValue {
            value: f64::NAN,
            valid: false,
            note: note.into(),
        }
    }

    /// The value if valid.
    pub fn get(&self) -> Option<f64> {
        self.valid.then_some(self.value)
    }
}

/// theta0 = arccos(q0 / sqrt(2n)), the saddle angle for <q0|n>.
pub fn hermite_saddle(n: usize, q0: f64) -> Result<f64> {
    if n == 0 {
        return Err(invalid("the Hermite saddle needs n >= 1"));
    }
    let r = (2.0 * n as f64).sqrt();
    if !(q0.abs() < r) {
        return Err(invalid(format!(
            "q0 = {q0} lies outside the oscillatory region |q0| < {r}"
        )));
    }
    Ok((q0 / r).acos())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FockMethod {
    Inphase,
    PlancherelRotach,
    Wkb,
}

impl FockMethod {
    pub const ALL: [FockMethod; 3] = [
        FockMethod::Inphase,
        FockMethod::PlancherelRotach,
        FockMethod::Wkb,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            FockMethod::Inphase => "inphase",
            FockMethod::PlancherelRotach => "pr",
            FockMethod::Wkb => "wkb",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "inphase" => Some(FockMethod::Inphase),
            "pr" | "plancherel_rotach" => Some(FockMethod::PlancherelRotach),
            "wkb" => Some(FockMethod::Wkb),
            _ => None,
        }
    }
}

/// Approximate <q0|n>.
pub fn fock_position_approx(method: FockMethod, n: usize, q0: f64) -> ApproxValue {
    if n == 0 || !q0.is_finite() {
        return ApproxValue::outside("needs n >= 1 and finite q0");
    }
    let nf = n as f64;
    match method {
        FockMethod::Inphase => match hermite_saddle(n, q0) {
            Err(_) => ApproxValue::outside("|q0| >= sqrt(2n)"),
            Ok(t) => {
                let amp = (2.0 / (PI * PI * nf)).powf(0.25) / t.sin().sqrt();
                let phase = FRAC_PI_4 - 0.5 * t + nf * (0.5 * (2.0 * t).sin() - t);
                ApproxValue::ok(amp * phase.cos())
            }
        },
        FockMethod::PlancherelRotach => {
            let r = (2.0 * nf + 1.0).sqrt();
            if !(q0.abs() < r) {
                return ApproxValue::outside("|q0| >= sqrt(2n+1)");
            }
            let t = (q0 / r).acos();
            // e^{-q0^2/2} H_n(q0) ~ 2^{n/2+1/4} sqrt(n!) (pi n)^{-1/4} / sqrt(sin t) cos(...)
            // times pi^{-1/4} 2^{-n/2} / sqrt(n!) leaves (2 / (pi^2 n))^{1/4}
            let amp = (2.0 / (PI * PI * nf)).powf(0.25) / t.sin().sqrt();
            let phase = FRAC_PI_4 + (nf + 0.5) * (0.5 * (2.0 * t).sin() - t);
            ApproxValue::ok(amp * phase.cos())
        }
        FockMethod::Wkb => {
            let p2 = 2.0 * nf + 1.0 - q0 * q0;
            if !(p2 > 0.0) {
                return ApproxValue::outside("q0^2 >= 2n+1");
            }
            let pn = p2.sqrt();
            let action = (nf + 0.5) * pn.atan2(q0) - 0.5 * q0 * pn;
            ApproxValue::ok((2.0 / (PI * pn)).sqrt() * (action - FRAC_PI_4).cos())
        }
    }
}

/// Saddle angles for <m|D(d,0)|n>.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaddlePair {
    pub theta0: f64,
    pub theta0_prime: f64,
}

/// Angles where the radius sqrt(2m) and sqrt(2n) circles, offset by d,
/// intersect. Exists only for |sqrt(2m) - sqrt(2n)| < d < sqrt(2m) + sqrt(2n).
pub fn displacement_saddles(m: usize, n: usize, d: f64) -> Result<SaddlePair> {
    let rm = (2.0 * m as f64).sqrt();
    let rn = (2.0 * n as f64).sqrt();
    if !((rm - rn).abs() < d && d < rm + rn) {
        return Err(invalid(format!(
            "d = {d} outside the intersection window ({}, {})",
            (rm - rn).abs(),
            rm + rn
        )));
    }
    let (mf, nf) = (m as f64, n as f64);
    let c0 = (d * d + 2.0 * mf - 2.0 * nf) / (2.0 * rm * d);
    let c1 = (d * d + 2.0 * nf - 2.0 * mf) / (2.0 * rn * d);
    if !(c0.abs() < 1.0 && c1.abs() < 1.0) {
        return Err(invalid(format!("d = {d} is tangent to the circles")));
    }
    Ok(SaddlePair {
        theta0: c0.acos(),
        theta0_prime: PI - c1.acos(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DisplacementMethod {
    Inphase,
    InphaseEqual,
    Tricomi,
    DowlingWkb,
}

impl DisplacementMethod {
    pub fn tag(self) -> &'static str {
        match self {
            DisplacementMethod::Inphase => "inphase",
            DisplacementMethod::InphaseEqual => "inphase_equal",
            DisplacementMethod::Tricomi => "tricomi",
            DisplacementMethod::DowlingWkb => "wkb",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "inphase" => Some(DisplacementMethod::Inphase),
            "inphase_equal" => Some(DisplacementMethod::InphaseEqual),
            "tricomi" => Some(DisplacementMethod::Tricomi),
            "wkb" | "dowling_wkb" => Some(DisplacementMethod::DowlingWkb),
            _ => None,
        }
    }
}

/// The general in-phase approximation, without switching to the m = n form.
pub fn inphase_general(m: usize, n: usize, d: f64) -> ApproxValue {
    let sp = match displacement_saddles(m, n, d) {
        Ok(sp) => sp,
        Err(_) => return ApproxValue::outside("no real saddle pair"),
    };
    let (mf, nf) = (m as f64, n as f64);
    let root = (mf * nf).sqrt();
    let spread = sp.theta0_prime - sp.theta0;
    let growth = 0.5 * (mf.sqrt() - nf.sqrt()).powi(2) - 0.25 * d * d + root * (1.0 - spread.cos());
    let amp = (1.0 / (PI * PI * mf * nf)).powf(0.25) * growth.exp() / spread.sin().sqrt();
    let phase =
        (mf + 0.5) * sp.theta0 - (nf + 0.5) * sp.theta0_prime + FRAC_PI_4 - root * spread.sin();
    ApproxValue::ok(amp * phase.cos())
}

fn inphase_equal(m: usize, d: f64) -> ApproxValue {
    if m == 0 {
        return ApproxValue::outside("needs m >= 1");
    }
    let mf = m as f64;
    let c = d / (2.0 * (2.0 * mf).sqrt());
    if !(d > 0.0 && c < 1.0) {
        return ApproxValue::outside("d outside (0, 2 sqrt(2m))");
    }
    let t = c.acos();
    let amp = (1.0 / (PI * mf)).sqrt() * (-0.25 * d * d + mf * (1.0 + (2.0 * t).cos())).exp()
        / (2.0 * t).sin().sqrt();
    let phase = (2.0 * mf + 1.0) * t - (mf + 0.25) * PI - mf * (2.0 * t).sin();
    ApproxValue::ok(amp * phase.cos())
}

fn tricomi(m: usize, n: usize, d: f64) -> ApproxValue {
    let (mf, nf) = (m as f64, n as f64);
    let big = nf + mf + 1.0;
    let nu = 2.0 * big;
    let x = 0.5 * d * d;
    if !(d > 0.0 && x < nu) {
        return ApproxValue::outside("x = d^2/2 outside (0, nu)");
    }
    let t = (d / (2.0 * big.sqrt())).acos();
    let alpha = nf - mf;
    let s = t.sin();
    let big_theta = 0.5 * big * (2.0 * t - (2.0 * t).sin()) + FRAC_PI_4;
    let corr = (1.0 / 12.0) / (nu * (2.0 * t).sin() / 4.0)
        * (5.0 / (4.0 * s * s) - (1.0 - 3.0 * alpha * alpha) * s * s - 1.0);
    let log_amp = 0.5 * (log_factorial(m) - log_factorial(n))
        + 0.25 * (2.0 / (PI * PI * d * d)).ln()
        + (2.0 * nf - 2.0 * mf - 1.0) / 4.0 * (0.5 * big).ln()
        - 0.5 * s.ln();
    let sign = if n % 2 == 1 { -1.0 } else { 1.0 };
    let wave = big_theta.sin() + corr * (big_theta + 1.5 * PI).sin();
    ApproxValue::ok(sign * log_amp.exp() * wave)
}

fn dowling_wkb(m: usize, n: usize, d: f64) -> ApproxValue {
    if !(d > 0.0) {
        return ApproxValue::outside("needs d > 0");
    }
    let (mf, nf) = (m as f64, n as f64);
    let xc = (mf - nf) / d + 0.5 * d;
    let rm = (2.0 * mf + 1.0).sqrt();
    let rn = (2.0 * nf + 1.0).sqrt();
    if !(xc.abs() < rm && (xc - d).abs() < rn) {
        return ApproxValue::outside("turning point outside both orbits");
    }
    let pm = (rm * rm - xc * xc).sqrt();
    let amplitude = 1.0 / (2.0 * PI * d * pm);
    let action = -(mf + 0.5) * (xc / rm).asin() + (nf + 0.5) * ((xc - d) / rn).asin()
        - 0.5 * d * pm
        - (nf - mf) * 0.5 * PI;
    ApproxValue::ok(2.0 * amplitude.sqrt() * (action + FRAC_PI_4).cos())
}

/// Approximate <m|D(d,0)|n>.
pub fn displacement_approx(method: DisplacementMethod, m: usize, n: usize, d: f64) -> ApproxValue {
    if !d.is_finite() {
        return ApproxValue::outside("d must be finite");
    }
    match method {
        DisplacementMethod::Inphase if m == n => inphase_equal(m, d),
        DisplacementMethod::Inphase => inphase_general(m, n, d),
        DisplacementMethod::InphaseEqual if m != n => {
            ApproxValue::outside("the equal-index form needs m = n")
        }
        DisplacementMethod::InphaseEqual => inphase_equal(m, d),
        DisplacementMethod::Tricomi => tricomi(m, n, d),
        DisplacementMethod::DowlingWkb => dowling_wkb(m, n, d),
    }
}

/// Phase-space area between the two orbits cut off by the saddle chords.
pub fn interference_area(m: usize, n: usize, d: f64) -> Result<f64> {
    let sp = displacement_saddles(m, n, d)?;
    let (mf, nf) = (m as f64, n as f64);
    Ok(nf * PI + mf * sp.theta0
        - nf * sp.theta0_prime
        - (mf * nf).sqrt() * (sp.theta0_prime - sp.theta0).sin())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_saddle_examples() {
        assert!((hermite_saddle(7, 0.0).unwrap() - PI / 2.0).abs() < 1e-15);
        let r = 14f64.sqrt();
        assert!((hermite_saddle(7, r / 2.0).unwrap() - PI / 3.0).abs() < 1e-15);
        assert!(hermite_saddle(7, r * (1.0 - 1e-16)).unwrap() < 1e-7);
        assert!(hermite_saddle(7, r).is_err());
    }

    #[test]
    fn fock_approx_at_origin() {
        let v = fock_position_approx(FockMethod::Inphase, 20, 0.0);
        assert!((v.value - (2.0 / (PI * PI * 20.0)).powf(0.25)).abs() < 1e-14);
        assert!((v.value - 0.3172).abs() < 1e-4);
        let w = fock_position_approx(FockMethod::Wkb, 20, 0.0);
        let want = (2.0 / (PI * 41f64.sqrt())).sqrt() * (20.5 * PI / 2.0 - FRAC_PI_4).cos();
        assert!((w.value - want).abs() < 1e-14);
        assert!((w.value - 0.3153).abs() < 1e-4);
        assert!(!fock_position_approx(FockMethod::Inphase, 20, 7.0).valid);
        assert!(!fock_position_approx(FockMethod::Wkb, 20, 7.0).valid);
    }

    #[test]
    fn saddles_equal_index_are_mirror() {
        let sp = displacement_saddles(12, 12, 3.0).unwrap();
        assert!((sp.theta0_prime - (PI - sp.theta0)).abs() < 1e-14);
        let edge = (24f64).sqrt() * 2.0;
        assert!(displacement_saddles(12, 12, edge).is_err());
    }

    #[test]
    fn general_inphase_specializes() {
        for &d in &[0.5, 3.0, 6.5] {
            let a = inphase_general(20, 20, d).value;
            let b = displacement_approx(DisplacementMethod::InphaseEqual, 20, 20, d).value;
            assert!((a - b).abs() < 1e-12, "d = {d}: {a} vs {b}");
        }
    }

    #[test]
    fn area_small_offset_limit() {
        let a = interference_area(9, 9, 1e-6).unwrap();
        assert!((a - 9.0 * PI).abs() < 1e-5);
    }

    #[test]
    fn window_reporting() {
        assert!(!displacement_approx(DisplacementMethod::InphaseEqual, 3, 4, 1.0).valid);
        assert!(!displacement_approx(DisplacementMethod::Tricomi, 3, 3, 20.0).valid);
        assert!(!displacement_approx(DisplacementMethod::DowlingWkb, 3, 3, 0.0).valid);
        assert!(displacement_approx(DisplacementMethod::Inphase, 20, 20, 6.0).valid);
    }
}
