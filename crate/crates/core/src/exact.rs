//! Closed-form overlaps and oscillator matrix elements.

use num_complex::Complex64;
use std::f64::consts::{LN_2, PI};

use crate::error::{ensure_finite, invalid, Error, Result};
use crate::phasespace::PhasePoint;
use crate::specfun::{
    hermite_scaled, laguerre_scaled, log_factorial, DoubleDouble, HERMITE_MAX_DEGREE,
};

/// Largest Fock index accepted by the matrix-element formulas.
pub const ELEMENT_MAX_INDEX: usize = 300;
/// |sin t| at or below this is treated as a caustic of the propagator.
pub const CAUSTIC_SIN: f64 = 1e-9;
/// Power of two at which the squeeze series is renormalized.
const RESCALE: f64 = 3.273390607896142e150;

/// Squeeze parameter mu with k = e^{|mu|/2}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeParam {
    mu: f64,
    k: f64,
}

impl SqueezeParam {
    pub fn new(mu: f64) -> Result<Self> {
        ensure_finite("mu", mu)?;
        Ok(SqueezeParam {
            mu,
            k: (0.5 * mu.abs()).exp(),
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn k(&self) -> f64 {
        self.k
    }
}

fn check_index(name: &str, n: usize) -> Result<()> {
    if n > ELEMENT_MAX_INDEX {
        return Err(invalid(format!(
            "{name} = {n} exceeds the guard {ELEMENT_MAX_INDEX}"
        )));
    }
    Ok(())
}

/// <q|p> = e^{iqp}/sqrt(2 pi) for position and momentum eigenstates.
pub fn posmom_overlap(q: f64, p: f64) -> Complex64 {
    Complex64::from_polar(1.0 / (2.0 * PI).sqrt(), q * p)
}

/// Oscillator kernel <q2|e^{-iHt}|q1>, H = (p^2 + q^2)/2.
///
/// The square root of i sin t is continued from t -> 0+ through the lower
/// half plane, which adds a Maslov phase -pi/2 at every caustic crossed.
pub fn sho_propagator(q2: f64, q1: f64, t: f64) -> Result<Complex64> {
    for (name, x) in [("q2", q2), ("q1", q1), ("t", t)] {
        ensure_finite(name, x)?;
    }
    let (s, c) = t.sin_cos();
    if s.abs() <= CAUSTIC_SIN {
        return Err(Error::Caustic { sin_t: s });
    }
    let crossings = (t / PI).floor();
    let prefactor = Complex64::from_polar(
        (2.0 * PI * s.abs()).powf(-0.5),
        -(0.25 * PI + 0.5 * PI * crossings),
    );
    let action = ((q1 * q1 + q2 * q2) * c - 2.0 * q1 * q2) / (2.0 * s);
    Ok(prefactor * Complex64::from_polar(1.0, action))
}

/// The same kernel continued to complex time, principal branch, for
/// 0 < Re tau < pi. With Im tau < 0 it is the absolutely convergent Fock sum.
pub fn sho_propagator_complex(q2: f64, q1: f64, tau: Complex64) -> Result<Complex64> {
    if !(tau.re > 0.0 && tau.re < PI) {
        return Err(invalid("complex-time kernel needs 0 < Re tau < pi"));
    }
    let s = tau.sin();
    if s.norm() <= CAUSTIC_SIN {
        return Err(Error::Caustic { sin_t: s.norm() });
    }
    let i = Complex64::i();
    let prefactor = (2.0 * PI * i * s).powf(-0.5);
    let action = ((q1 * q1 + q2 * q2) * tau.cos() - 2.0 * q1 * q2) / (2.0 * s);
    Ok(prefactor * (i * action).exp())
}

/// <q0|n> = pi^{-1/4} 2^{-n/2} (n!)^{-1/2} e^{-q0^2/2} H_n(q0).
pub fn fock_position_wavefn(n: usize, q0: f64) -> Result<f64> {
    if n > HERMITE_MAX_DEGREE {
        return Err(invalid(format!("n = {n} exceeds {HERMITE_MAX_DEGREE}")));
    }
    ensure_finite("q0", q0)?;
    let h = hermite_scaled(n, Complex64::new(q0, 0.0))?;
    let log_amp = -0.25 * PI.ln() - 0.5 * n as f64 * LN_2 - 0.5 * log_factorial(n) - 0.5 * q0 * q0
        + h.log_scale;
    Ok(h.mantissa.re * log_amp.exp())
}

/// Which Laguerre superscript the displacement formula is written with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LaguerreForm {
    /// sqrt(m!/n!) (-z*)^{n-m} e^{-|z|^2/2} L_m^{n-m}(|z|^2)
    Lower,
    /// sqrt(n!/m!) z^{m-n} e^{-|z|^2/2} L_n^{m-n}(|z|^2)
    Upper,
}

/// <m|D(q,p)|n> with the Laguerre superscript kept nonnegative.
pub fn displacement_element(m: usize, n: usize, q: f64, p: f64) -> Result<Complex64> {
    let form = if n >= m {
        LaguerreForm::Lower
    } else {
        LaguerreForm::Upper
    };
    displacement_element_form(m, n, q, p, form)
}

/// <m|D(q,p)|n> using a specific Laguerre form; the two agree identically.
pub fn displacement_element_form(
    m: usize,
    n: usize,
    q: f64,
    p: f64,
    form: LaguerreForm,
) -> Result<Complex64> {
    check_index("m", m)?;
    check_index("n", n)?;
    ensure_finite("q", q)?;
    ensure_finite("p", p)?;
    let z = PhasePoint::new(q, p).z();
    let x = z.norm_sqr();
    // Lower: degree m, superscript n - m, power of -z*; Upper mirrors it.
    let (degree, other, base) = match form {
        LaguerreForm::Lower => (m, n, -z.conj()),
        LaguerreForm::Upper => (n, m, z),
    };
    let alpha = other as i64 - degree as i64;
    let lag = laguerre_scaled(degree, alpha, x)?;
    if lag.mantissa == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    // base^alpha, with alpha possibly negative for the reflected form
    let (pow_log, pow_arg) = if alpha == 0 {
        (0.0, 0.0)
    } else if x == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    } else {
        (alpha as f64 * base.norm().ln(), alpha as f64 * base.arg())
    };
    let log_mag = 0.5 * (log_factorial(degree) - log_factorial(other)) + pow_log - 0.5 * x
        + lag.log_scale
        + lag.mantissa.abs().ln();
    let arg = pow_arg + if lag.mantissa < 0.0 { PI } else { 0.0 };
    Ok(Complex64::from_polar(log_mag.exp(), arg))
}

/// <n|D(q,p)|psi_mu> for the squeezed vacuum psi_mu = S0(mu)|0>, mu >= 0.
pub fn squeezed_coherent_element(n: usize, sq: SqueezeParam, q: f64, p: f64) -> Result<Complex64> {
    check_index("n", n)?;
    ensure_finite("q", q)?;
    ensure_finite("p", p)?;
    if sq.mu < 0.0 {
        return Err(Error::Unsupported(
            "squeezed coherent elements are implemented for mu >= 0".into(),
        ));
    }
    let nf = n as f64;
    if sq.mu == 0.0 {
        let z = PhasePoint::new(q, p).z();
        if z.norm() == 0.0 {
            return Ok(Complex64::new(if n == 0 { 1.0 } else { 0.0 }, 0.0));
        }
        let log_mag = -0.5 * z.norm_sqr() + nf * z.norm().ln() - 0.5 * log_factorial(n);
        return Ok(Complex64::from_polar(log_mag.exp(), nf * z.arg()));
    }
    let k2 = sq.k * sq.k;
    let arg = Complex64::new(k2 * p, -q) / (k2 * k2 - 1.0).sqrt();
    let h = hermite_scaled(n, arg)?.to_log_scaled();
    if h.is_zero() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let exponent = -(Complex64::new(q, -p) * Complex64::new(q, k2 * p)) / (2.0 * (k2 + 1.0));
    let log_mag = -0.5 * nf * LN_2 - 0.5 * log_factorial(n)
        + 0.5 * (2.0 * sq.k / (k2 + 1.0)).ln()
        + 0.5 * nf * ((k2 - 1.0) / (k2 + 1.0)).ln()
        + exponent.re
        + h.log_magnitude;
    let phase = 0.5 * PI * nf + exponent.im + h.phase;
    Ok(Complex64::from_polar(log_mag.exp(), phase))
}

/// <n|S0(mu)|m> for mu >= 0, zero unless n - m is even.
pub fn squeeze_element(n: usize, sq: SqueezeParam, m: usize) -> Result<f64> {
    check_index("n", n)?;
    check_index("m", m)?;
    if sq.mu < 0.0 {
        return Err(Error::Unsupported(
            "squeeze elements are implemented for mu >= 0".into(),
        ));
    }
    if (n + m) % 2 == 1 {
        return Ok(0.0);
    }
    if sq.mu == 0.0 {
        return Ok(if n == m { 1.0 } else { 0.0 });
    }
    // Everything below derives from the rounded k^2, so the alternating sum
    // and the prefactor describe the same (exactly representable) squeeze.
    let k2m1 = sq.mu.exp_m1();
    let k2 = 1.0 + k2m1;
    let log_t = (k2m1 / (k2 + 1.0)).ln();
    let half_sum = 0.5 * (n + m) as f64;
    let log_pref = 0.5 * (log_factorial(m) + log_factorial(n)) - half_sum * LN_2
        + 0.5 * (2.0 * k2.sqrt() / (k2 + 1.0)).ln()
        + half_sum * log_t;
    let start = m % 2;
    let top = m.min(n);
    let log_first = start as f64 * (16.0 * k2 / (k2m1 * k2m1)).ln() * 0.5
        - log_factorial(start)
        - log_factorial((n - start) / 2)
        - log_factorial((m - start) / 2);
    // c^2 = 16 k^2 / (k^2 - 1)^2 and term ratios kept in double-double
    let c2 = DoubleDouble::sum(16.0, 16.0 * k2m1) / DoubleDouble::product(k2m1, k2m1);
    let mut term = DoubleDouble::from(if ((n - start) / 2) % 2 == 1 {
        -1.0
    } else {
        1.0
    });
    let mut sum = term;
    let mut log_scale = log_first;
    for j in (start..top).step_by(2) {
        let (a, b) = (((n - j) / 2) as f64, ((m - j) / 2) as f64);
        let ratio = DoubleDouble::from(a * b) / DoubleDouble::from(((j + 1) * (j + 2)) as f64);
        term = -(term * c2 * ratio);
        sum = sum + term;
        if term.hi().abs() > RESCALE {
            let down = DoubleDouble::from(RESCALE.recip());
            term = term * down;
            sum = sum * down;
            log_scale += RESCALE.ln();
        }
    }
    let (sum, peak) = (sum.value(), log_scale);
    // i^{n-m} is real because n - m is even
    let global = if ((n as i64 - m as i64) / 2).rem_euclid(2) == 1 {
        -1.0
    } else {
        1.0
    };
    Ok(global * sum * (peak + log_pref).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn posmom_examples() {
        let v = posmom_overlap(0.0, 0.0);
        assert!((v.re - 0.398_942_280_401_432_7).abs() < 1e-15);
        assert!((posmom_overlap(1.7, -2.2).norm() - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn propagator_quarter_period_and_symmetry() {
        let v = sho_propagator(0.0, 0.0, PI / 2.0).unwrap();
        let want = (2.0 * PI * Complex64::i()).powf(-0.5);
        assert!((v - want).norm() < 1e-15);
        let a = sho_propagator(1.0, 0.5, 0.7).unwrap();
        let b = sho_propagator(0.5, 1.0, 0.7).unwrap();
        assert_eq!(a, b);
        assert!(matches!(
            sho_propagator(0.0, 0.0, PI),
            Err(Error::Caustic { .. })
        ));
    }

    #[test]
    fn propagator_real_and_complex_time_agree() {
        let a = sho_propagator(0.3, -1.2, 2.0).unwrap();
        let b = sho_propagator_complex(0.3, -1.2, Complex64::new(2.0, 0.0)).unwrap();
        assert!((a - b).norm() < 1e-13);
    }

    #[test]
    fn propagator_past_half_period_picks_maslov_phase() {
        // two half periods give parity times e^{-i pi/2} twice more
        let t = 0.4;
        let a = sho_propagator(0.8, 0.3, t).unwrap();
        let b = sho_propagator(-0.8, 0.3, t + PI).unwrap();
        assert!((b - a * Complex64::from_polar(1.0, -0.5 * PI)).norm() < 1e-13);
    }

    #[test]
    fn fock_wavefunction_examples() {
        assert!((fock_position_wavefn(0, 0.0).unwrap() - PI.powf(-0.25)).abs() < 1e-15);
        assert_eq!(fock_position_wavefn(7, 0.0).unwrap(), 0.0);
        let want = PI.powf(-0.25)
            * (-10.0 * LN_2 - 0.5 * log_factorial(20) + log_factorial(20) - log_factorial(10))
                .exp();
        let got = fock_position_wavefn(20, 0.0).unwrap();
        assert!((got - want).abs() < 1e-14);
        assert!((got - 0.3152912009418028).abs() < 1e-15);
    }

    #[test]
    fn displacement_examples() {
        for m in 0..6 {
            for n in 0..6 {
                let v = displacement_element(m, n, 0.0, 0.0).unwrap();
                assert_eq!(v, Complex64::new(if m == n { 1.0 } else { 0.0 }, 0.0));
            }
        }
        let d = 1.7;
        let g = (-d * d / 4.0f64).exp();
        assert!((displacement_element(0, 0, d, 0.0).unwrap().re - g).abs() < 1e-15);
        let v = displacement_element(1, 1, d, 0.0).unwrap();
        assert!((v.re - g * (1.0 - d * d / 2.0)).abs() < 1e-15);
        assert!(displacement_element(301, 0, 1.0, 0.0).is_err());
    }

    #[test]
    fn squeeze_examples() {
        let sq = SqueezeParam::new(1.0).unwrap();
        let k = sq.k();
        let want = (2.0 * k / (k * k + 1.0)).sqrt();
        assert!((squeeze_element(0, sq, 0).unwrap() - want).abs() < 1e-15);
        assert_eq!(squeeze_element(3, sq, 0).unwrap(), 0.0);
        let id = SqueezeParam::new(0.0).unwrap();
        assert_eq!(squeeze_element(4, id, 4).unwrap(), 1.0);
        assert_eq!(squeeze_element(4, id, 2).unwrap(), 0.0);
        assert!(matches!(
            squeeze_element(0, SqueezeParam::new(-1.0).unwrap(), 0),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn squeezed_coherent_examples() {
        let sq = SqueezeParam::new(1.0).unwrap();
        let k = sq.k();
        let v = squeezed_coherent_element(0, sq, 0.0, 0.0).unwrap();
        assert!((v - Complex64::new((2.0 * k / (k * k + 1.0)).sqrt(), 0.0)).norm() < 1e-15);
        assert!(squeezed_coherent_element(3, sq, 0.0, 0.0).unwrap().norm() < 1e-300);
        let id = SqueezeParam::new(0.0).unwrap();
        let (q, p) = (0.6, -1.1);
        let z = PhasePoint::new(q, p).z();
        let want = (-0.5 * z.norm_sqr()).exp() * z.powi(3) / 6f64.sqrt();
        assert!((squeezed_coherent_element(3, id, q, p).unwrap() - want).norm() < 1e-15);
        assert!(squeezed_coherent_element(0, SqueezeParam::new(-0.5).unwrap(), 0.0, 0.0).is_err());
    }
}
