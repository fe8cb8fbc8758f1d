//! Exact-arithmetic summation of the normal-ordered displacement series.
//!
//! <m|D|n> = e^{-|z|^2/2} sum_k z^{m-k} (-z*)^{n-k} sqrt(m! n!) / (k! (m-k)! (n-k)!)
//!
//! With z = (q + ip)/sqrt(2) every term carries 2^{-(m+n)/2} 2^k, so the sum
//! itself is a rational function of the dyadic inputs q and p and can be
//! formed without rounding. Only the final scaling touches floating point.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::f64::consts::LN_2;

use crate::error::{ensure_finite, invalid, Result};
use crate::specfun::log_factorial;

/// Degree guard for the exact series.
pub const SERIES_MAX_INDEX: usize = 100;

#[derive(Clone, Debug)]
struct ExactComplex {
    re: BigRational,
    im: BigRational,
}

impl ExactComplex {
    fn zero() -> Self {
        ExactComplex {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    fn one() -> Self {
        ExactComplex {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }

    fn mul(&self, o: &ExactComplex) -> ExactComplex {
        ExactComplex {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn scale(&self, s: &BigRational) -> ExactComplex {
        ExactComplex {
            re: &self.re * s,
            im: &self.im * s,
        }
    }

    fn add_assign(&mut self, o: &ExactComplex) {
        self.re = &self.re + &o.re;
        self.im = &self.im + &o.im;
    }
}

fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite input")
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// sign, ln|r| for a nonzero rational, without overflowing f64.
fn ln_abs(r: &BigRational) -> Option<(f64, f64)> {
    if r.is_zero() {
        return None;
    }
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    let num = r.numer().abs();
    let den = r.denom().clone();
    let shift = num.bits() as i64 - den.bits() as i64 - 64;
    let quotient = if shift >= 0 {
        num / (den << (shift as usize))
    } else {
        (num << ((-shift) as usize)) / den
    };
    let mantissa = quotient.to_f64().expect("quotient fits");
    Some((sign, mantissa.ln() + shift as f64 * LN_2))
}

/// <m|D(q,p)|n> from the exact double series.
pub fn series_displacement_element(m: usize, n: usize, q: f64, p: f64) -> Result<Complex64> {
    if m > SERIES_MAX_INDEX || n > SERIES_MAX_INDEX {
        return Err(invalid(format!(
            "series indices must be <= {SERIES_MAX_INDEX}, got ({m}, {n})"
        )));
    }
    ensure_finite("q", q)?;
    ensure_finite("p", p)?;
    if q == 0.0 && p == 0.0 {
        return Ok(Complex64::new(if m == n { 1.0 } else { 0.0 }, 0.0));
    }
    let (qr, pr) = (exact(q), exact(p));
    let w = ExactComplex {
        re: qr.clone(),
        im: pr.clone(),
    };
    let v = ExactComplex { re: -qr, im: pr };
    let powers = |base: &ExactComplex, top: usize| {
        let mut out = Vec::with_capacity(top + 1);
        out.push(ExactComplex::one());
        for j in 1..=top {
            let next = out[j - 1].mul(base);
            out.push(next);
        }
        out
    };
    let w_pow = powers(&w, m);
    let v_pow = powers(&v, n);

    // terms share the denominator m! n!; multiply through to keep integers
    // out of the inner loop as far as possible
    let mut sum = ExactComplex::zero();
    for k in 0..=m.min(n) {
        let weight = BigRational::new(
            BigInt::from(2).pow(k as u32),
            factorial(k) * factorial(m - k) * factorial(n - k),
        );
        let term = w_pow[m - k].mul(&v_pow[n - k]).scale(&weight);
        sum.add_assign(&term);
    }

    let log_prefactor = 0.5 * (log_factorial(m) + log_factorial(n))
        - 0.5 * (m + n) as f64 * LN_2
        - 0.25 * (q * q + p * p);
    let part = |r: &BigRational| match ln_abs(r) {
        None => 0.0,
        Some((sign, ln)) => sign * (ln + log_prefactor).exp(),
    };
    Ok(Complex64::new(part(&sum.re), part(&sum.im)))
}
