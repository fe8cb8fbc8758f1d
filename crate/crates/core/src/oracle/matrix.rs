//! Dense truncated-Fock operators built by matrix exponentiation.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::phasespace::PhasePoint;

/// Which unitary to realize on |0>..|cutoff>.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OperatorKind {
    /// D(q,p) = exp(z a^dag - z* a).
    Displacement(PhasePoint),
    /// S0(mu) = exp((mu/4)(a^dag^2 - a^2)).
    Squeeze(f64),
    /// exp(i t n).
    Rotation(f64),
}

impl OperatorKind {
    fn tag(&self) -> String {
        match self {
            OperatorKind::Displacement(pt) => format!("displacement(q={},p={})", pt.q, pt.p),
            OperatorKind::Squeeze(mu) => format!("squeeze(mu={mu})"),
            OperatorKind::Rotation(t) => format!("rotation(t={t})"),
        }
    }

    /// Smallest cutoff the truncation guard accepts.
    pub fn min_cutoff(&self) -> usize {
        let spread = match self {
            OperatorKind::Displacement(pt) => pt.z_norm_sqr(),
            OperatorKind::Squeeze(mu) => 4.0 * (0.5 * mu).sinh().powi(2),
            OperatorKind::Rotation(_) => 0.0,
        };
        (4.0 * spread).ceil() as usize + 40
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub entries: Array2<Complex64>,
    pub cutoff: usize,
    pub kind_tag: String,
    /// Bound on the Taylor remainder of the scaled exponential, amplified by
    /// the squaring steps. Zero for exactly diagonal operators.
    pub series_error_bound: f64,
}

impl OperatorMatrix {
    pub fn dim(&self) -> usize {
        self.cutoff + 1
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[[row, col]]
    }

    pub fn column(&self, col: usize) -> Vec<Complex64> {
        self.entries.column(col).to_vec()
    }

    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim() {
            return Err(invalid(format!(
                "vector length {} does not match operator dimension {}",
                v.len(),
                self.dim()
            )));
        }
        Ok(self.entries.dot(&Array1::from(v.to_vec())).to_vec())
    }

    pub fn product(&self, other: &OperatorMatrix) -> Array2<Complex64> {
        self.entries.dot(&other.entries)
    }

    /// max |(M^dag M - I)_{ij}| over the leading block of the given size.
    pub fn unitarity_defect(&self, block: usize) -> f64 {
        let block = block.min(self.dim());
        let mut worst = 0.0f64;
        for i in 0..block {
            for j in 0..block {
                let mut s = Complex64::new(0.0, 0.0);
                for k in 0..self.dim() {
                    s += self.entries[[k, i]].conj() * self.entries[[k, j]];
                }
                if i == j {
                    s -= 1.0;
                }
                worst = worst.max(s.norm());
            }
        }
        worst
    }
}

/// Realize a displacement, squeeze or rotation on the truncated Fock space.
pub fn operator_matrix(kind: OperatorKind, cutoff: usize) -> Result<OperatorMatrix> {
    let dim = cutoff + 1;
    let tag = kind.tag();
    match kind {
        OperatorKind::Rotation(t) => {
            if !t.is_finite() {
                return Err(invalid("rotation angle must be finite"));
            }
            let mut m = Array2::zeros((dim, dim));
            for n in 0..dim {
                m[[n, n]] = Complex64::from_polar(1.0, t * n as f64);
            }
            return Ok(OperatorMatrix {
                entries: m,
                cutoff,
                kind_tag: tag,
                series_error_bound: 0.0,
            });
        }
        OperatorKind::Displacement(pt) if !pt.is_finite() => {
            return Err(invalid("displacement label must be finite"))
        }
        OperatorKind::Squeeze(mu) if !mu.is_finite() => {
            return Err(invalid("squeeze parameter must be finite"))
        }
        _ => {}
    }
    let need = kind.min_cutoff();
    if cutoff < need {
        return Err(Error::Truncation(format!(
            "{tag} needs cutoff >= {need}, got {cutoff}"
        )));
    }
    let mut g = Array2::<Complex64>::zeros((dim, dim));
    match kind {
        OperatorKind::Displacement(pt) => {
            let z = pt.z();
            for n in 0..cutoff {
                let s = ((n + 1) as f64).sqrt();
                g[[n + 1, n]] = z * s;
                g[[n, n + 1]] = -z.conj() * s;
            }
        }
        OperatorKind::Squeeze(mu) => {
            for n in 0..dim.saturating_sub(2) {
                let s = 0.25 * mu * (((n + 1) * (n + 2)) as f64).sqrt();
                g[[n + 2, n]] = Complex64::new(s, 0.0);
                g[[n, n + 2]] = Complex64::new(-s, 0.0);
            }
        }
        OperatorKind::Rotation(_) => unreachable!(),
    }
    let (entries, series_error_bound) = expm(&g);
    Ok(OperatorMatrix {
        entries,
        cutoff,
        kind_tag: tag,
        series_error_bound,
    })
}

fn one_norm(a: &Array2<Complex64>) -> f64 {
    a.columns()
        .into_iter()
        .map(|c| c.iter().map(|x| x.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Scaling and squaring with a Taylor series; returns the exponential and a
/// bound on the truncated-series error.
fn expm(a: &Array2<Complex64>) -> (Array2<Complex64>, f64) {
    let dim = a.nrows();
    let norm = one_norm(a);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scale = 0.5f64.powi(squarings);
    let b = a.mapv(|x| x * scale);
    let b_norm = norm * scale;

    let mut result = Array2::<Complex64>::eye(dim);
    let mut term = Array2::<Complex64>::eye(dim);
    let mut bound_term = 1.0;
    let mut k = 0usize;
    loop {
        k += 1;
        term = term.dot(&b).mapv(|x| x / k as f64);
        result += &term;
        bound_term *= b_norm / k as f64;
        // remainder of the exponential series beyond term k
        let remainder = bound_term * b_norm / (k + 1) as f64 / (1.0 - b_norm / (k + 2) as f64);
        if remainder < 1e-18 || k > 60 {
            let mut m = result;
            for _ in 0..squarings {
                m = m.dot(&m);
            }
            return (m, remainder * 2f64.powi(squarings));
        }
    }
}
