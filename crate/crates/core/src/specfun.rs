//! Stable scalar building blocks: log-factorials, Hermite and associated
//! Laguerre polynomials, and the Fock-circle normalization.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{invalid, Result};

/// Highest Hermite degree accepted by the recurrence evaluators.
pub const HERMITE_MAX_DEGREE: usize = 500;

/// Rescale threshold for the running recurrences.
const RESCALE_ABOVE: f64 = 1e150;

/// Unevaluated sum hi + lo carrying about 32 significant digits, for sums
/// that cancel heavily.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct DoubleDouble {
    hi: f64,
    lo: f64,
}

fn quick_two_sum(a: f64, b: f64) -> DoubleDouble {
    let s = a + b;
    DoubleDouble {
        hi: s,
        lo: b - (s - a),
    }
}

impl DoubleDouble {
    pub(crate) fn sum(a: f64, b: f64) -> Self {
        let s = a + b;
        let bb = s - a;
        DoubleDouble {
            hi: s,
            lo: (a - (s - bb)) + (b - bb),
        }
    }

    pub(crate) fn product(a: f64, b: f64) -> Self {
        let p = a * b;
        DoubleDouble {
            hi: p,
            lo: a.mul_add(b, -p),
        }
    }

    pub(crate) fn hi(self) -> f64 {
        self.hi
    }

    pub(crate) fn value(self) -> f64 {
        self.hi + self.lo
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }
}

impl std::ops::Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        DoubleDouble {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl std::ops::Add for DoubleDouble {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let s = DoubleDouble::sum(self.hi, o.hi);
        quick_two_sum(s.hi, s.lo + self.lo + o.lo)
    }
}

impl std::ops::Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + -o
    }
}

impl std::ops::Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let p = DoubleDouble::product(self.hi, o.hi);
        quick_two_sum(p.hi, p.lo + self.hi * o.lo + self.lo * o.hi)
    }
}

impl std::ops::Div for DoubleDouble {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let q1 = self.hi / o.hi;
        let r = self - o * DoubleDouble::from(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * DoubleDouble::from(q2);
        let q3 = r.hi / o.hi;
        quick_two_sum(q1, q2) + DoubleDouble::from(q3)
    }
}

/// A complex number stored as `exp(log_magnitude) * exp(i * phase)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogScaled {
    pub log_magnitude: f64,
    pub phase: f64,
}

impl LogScaled {
    pub const ZERO: LogScaled = LogScaled {
        log_magnitude: f64::NEG_INFINITY,
        phase: 0.0,
    };

    pub fn from_complex(z: Complex64) -> Self {
        if z == Complex64::new(0.0, 0.0) {
            return Self::ZERO;
        }
        // hypot in log form survives components near the overflow edge
        let scale = z.re.abs().max(z.im.abs());
        let log_magnitude = scale.ln() + (z / scale).norm().ln();
        LogScaled {
            log_magnitude,
            phase: z.arg(),
        }
    }

    pub fn to_complex(self) -> Complex64 {
        if self.log_magnitude == f64::NEG_INFINITY {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(self.log_magnitude.exp(), self.phase)
    }

    pub fn is_zero(self) -> bool {
        self.log_magnitude == f64::NEG_INFINITY
    }
}

impl std::ops::Mul for LogScaled {
    type Output = LogScaled;
    fn mul(self, other: LogScaled) -> LogScaled {
        if self.is_zero() || other.is_zero() {
            return LogScaled::ZERO;
        }
        LogScaled {
            log_magnitude: self.log_magnitude + other.log_magnitude,
            phase: wrap_phase(self.phase + other.phase),
        }
    }
}

/// Reduce an angle to the principal interval (-pi, pi].
pub fn wrap_phase(x: f64) -> f64 {
    let mut y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    }
    y
}

const LOG_FACTORIAL_TABLE: usize = 1024;

fn log_factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(LOG_FACTORIAL_TABLE + 1);
        t.push(0.0);
        // exact integer products while they fit a double exactly, then sums
        let mut exact = 1.0f64;
        for k in 1..=LOG_FACTORIAL_TABLE {
            if k <= 20 {
                exact *= k as f64;
                t.push(exact.ln());
            } else {
                let prev = t[k - 1];
                t.push(prev + (k as f64).ln());
            }
        }
        t
    })
}

/// ln(n!).
pub fn log_factorial(n: usize) -> f64 {
    let table = log_factorial_table();
    if n <= LOG_FACTORIAL_TABLE {
        return table[n];
    }
    // Stirling series beyond the table; error far below 1e-16 relative here
    let x = n as f64 + 1.0;
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + 1.0 / (12.0 * x) - 1.0 / (360.0 * x.powi(3))
        + 1.0 / (1260.0 * x.powi(5))
}

/// ln of the binomial coefficient C(a, b) for 0 <= b <= a.
pub fn log_binomial(a: usize, b: usize) -> f64 {
    debug_assert!(b <= a);
    log_factorial(a) - log_factorial(b) - log_factorial(a - b)
}

/// ln N_n with N_n = e^{n/2} n^{-n/2} sqrt(n!), the Fock-circle normalization.
pub fn norm_factor_log(n: usize) -> f64 {
    let nf = n as f64;
    let n_ln_n = if n == 0 { 0.0 } else { nf * nf.ln() };
    0.5 * nf - 0.5 * n_ln_n + 0.5 * log_factorial(n)
}

/// Hermite value split as `mantissa * exp(log_scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledHermite {
    pub mantissa: Complex64,
    pub log_scale: f64,
}

impl ScaledHermite {
    pub fn value(self) -> Complex64 {
        self.mantissa * self.log_scale.exp()
    }

    pub fn to_log_scaled(self) -> LogScaled {
        let mut l = LogScaled::from_complex(self.mantissa);
        if !l.is_zero() {
            l.log_magnitude += self.log_scale;
        }
        l
    }
}

fn check_hermite_degree(n: usize) -> Result<()> {
    if n > HERMITE_MAX_DEGREE {
        return Err(invalid(format!(
            "Hermite degree {n} exceeds the guard {HERMITE_MAX_DEGREE}"
        )));
    }
    Ok(())
}

/// H_n(x) from the upward recurrence, with a running rescale so the
/// mantissa never overflows.
pub fn hermite_scaled(n: usize, x: Complex64) -> Result<ScaledHermite> {
    check_hermite_degree(n)?;
    let mut prev = Complex64::new(1.0, 0.0);
    if n == 0 {
        return Ok(ScaledHermite {
            mantissa: prev,
            log_scale: 0.0,
        });
    }
    let mut cur = 2.0 * x;
    let mut log_scale = 0.0;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
        let size = cur.norm().max(prev.norm());
        if size > RESCALE_ABOVE {
            prev /= size;
            cur /= size;
            log_scale += size.ln();
        }
    }
    Ok(ScaledHermite {
        mantissa: cur,
        log_scale,
    })
}

/// Physicists' Hermite polynomial H_n(x) for complex x.
pub fn hermite(n: usize, x: Complex64) -> Result<Complex64> {
    Ok(hermite_scaled(n, x)?.value())
}

/// Real Laguerre value split as `mantissa * exp(log_scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledLaguerre {
    pub mantissa: f64,
    pub log_scale: f64,
}

impl ScaledLaguerre {
    pub fn value(self) -> f64 {
        self.mantissa * self.log_scale.exp()
    }
}

/// L_n^alpha(x) in scaled form.
///
/// Nonnegative alpha runs the three-term recurrence, which stays accurate
/// inside the oscillatory window where the explicit series cancels badly.
/// Negative alpha reduces to a nonnegative one through
/// L_n^{-j}(x) = (-x)^j (n-j)!/n! L_{n-j}^{j}(x).
pub fn laguerre_scaled(n: usize, alpha: i64, x: f64) -> Result<ScaledLaguerre> {
    if !x.is_finite() {
        return Err(invalid(format!(
            "Laguerre argument must be finite, got {x}"
        )));
    }
    if alpha < -(n as i64) {
        return Err(invalid(format!("Laguerre superscript {alpha} below -{n}")));
    }
    if alpha < 0 {
        let j = (-alpha) as usize;
        let inner = laguerre_recurrence(n - j, j as f64, x);
        if x == 0.0 {
            return Ok(ScaledLaguerre {
                mantissa: 0.0,
                log_scale: 0.0,
            });
        }
        let sign = if j % 2 == 1 { -x.signum() } else { 1.0 };
        let log_factor = j as f64 * x.abs().ln() + log_factorial(n - j) - log_factorial(n);
        return Ok(ScaledLaguerre {
            mantissa: sign * inner.mantissa,
            log_scale: inner.log_scale + log_factor,
        });
    }
    Ok(laguerre_recurrence(n, alpha as f64, x))
}

fn laguerre_recurrence(n: usize, alpha: f64, x: f64) -> ScaledLaguerre {
    let mut prev = 1.0;
    if n == 0 {
        return ScaledLaguerre {
            mantissa: prev,
            log_scale: 0.0,
        };
    }
    let mut cur = 1.0 + alpha - x;
    let mut log_scale = 0.0;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
        let size = cur.abs().max(prev.abs());
        if size > RESCALE_ABOVE {
            prev /= size;
            cur /= size;
            log_scale += size.ln();
        }
    }
    ScaledLaguerre {
        mantissa: cur,
        log_scale,
    }
}

/// Associated Laguerre polynomial L_n^alpha(x), alpha >= -n.
pub fn laguerre(n: usize, alpha: i64, x: f64) -> Result<f64> {
    Ok(laguerre_scaled(n, alpha, x)?.value())
}

/// L_n^alpha(x) from the explicit sum over (-1)^k C(n+alpha, n-k) x^k / k!.
///
/// Cancels catastrophically for large x; kept for small-x cross-checks.
pub fn laguerre_series(n: usize, alpha: i64, x: f64) -> Result<f64> {
    if alpha < -(n as i64) {
        return Err(invalid(format!("Laguerre superscript {alpha} below -{n}")));
    }
    let top = (n as i64 + alpha) as usize;
    let mut sum = 0.0;
    for k in 0..=n {
        // C(top, n-k) vanishes when n-k exceeds top
        if n - k > top {
            continue;
        }
        let log_term = log_binomial(top, n - k) - log_factorial(k);
        let power = if k == 0 { 1.0 } else { x.powi(k as i32) };
        let sign = if k % 2 == 1 { -1.0 } else { 1.0 };
        sum += sign * log_term.exp() * power;
    }
    Ok(sum)
}

/// Normalized oscillator eigenfunctions psi_0..psi_{n_max} at q, from the
/// stable normalized recurrence.
pub fn fock_wavefunctions(n_max: usize, q: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-0.5 * q * q).exp();
    out.push(cur);
    for k in 0..n_max {
        let kf = k as f64;
        let next = (2.0f64 / (kf + 1.0)).sqrt() * q * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        out.push(cur);
    }
    out
}
