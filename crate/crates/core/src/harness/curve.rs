//! CSV emission of one-dimensional curves and Q-function grids.

use num_complex::Complex64;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::io::Write;

use super::config::RunConfig;
use super::csv::{write_header, write_row};
use super::tables::{grid, table_interval, GridMode, RangeChoice, Table};
use crate::asymptotics::{
    displacement_approx, fock_position_approx, DisplacementMethod, FockMethod,
};
use crate::error::{ensure_finite, invalid, Error, Result};
use crate::exact::{displacement_element, fock_position_wavefn, squeeze_element, SqueezeParam};
use crate::phasespace::PhasePoint;
use crate::states::{
    build_superposition, cat_state, coherent_fock_coeffs, q_function, two_source_q, FockVector,
    QConvention, SuperpositionKind, SuperpositionSpec, TAIL_WARNING,
};

/// A state whose Q function can be tabulated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateChoice {
    Fock {
        n: usize,
    },
    Cat {
        q0: f64,
        theta: f64,
    },
    Squeezed {
        mu: f64,
    },
    Coherent {
        q: f64,
        p: f64,
    },
    /// |n> rebuilt from its in-phase circle of radius r.
    Circle {
        n: usize,
        r: f64,
    },
    /// In-phase Gaussian-weighted horizontal line.
    Gaussian {
        sigma: f64,
        p0: f64,
    },
}

fn parse_params(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| invalid(format!("expected key=value, got {item:?}")))?;
        if map
            .insert(k.trim().to_string(), v.trim().to_string())
            .is_some()
        {
            return Err(invalid(format!("parameter {k:?} given twice")));
        }
    }
    Ok(map)
}

struct Params(BTreeMap<String, String>);

impl Params {
    fn parse(text: &str) -> Result<Self> {
        parse_params(text).map(Params)
    }

    fn real(&mut self, key: &str) -> Result<Option<f64>> {
        self.0
            .remove(key)
            .map(|v| {
                let x: f64 = v
                    .parse()
                    .map_err(|_| invalid(format!("{key}: not a number: {v:?}")))?;
                ensure_finite(key, x)?;
                Ok(x)
            })
            .transpose()
    }

    fn index(&mut self, key: &str) -> Result<Option<usize>> {
        self.0
            .remove(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| invalid(format!("{key}: not a nonnegative integer: {v:?}")))
            })
            .transpose()
    }

    fn need_real(&mut self, key: &str) -> Result<f64> {
        self.real(key)?
            .ok_or_else(|| invalid(format!("missing parameter {key}")))
    }

    fn need_index(&mut self, key: &str) -> Result<usize> {
        self.index(key)?
            .ok_or_else(|| invalid(format!("missing parameter {key}")))
    }

    fn finish(self) -> Result<()> {
        match self.0.keys().next() {
            Some(k) => Err(invalid(format!("unknown parameter {k:?}"))),
            None => Ok(()),
        }
    }
}

impl std::str::FromStr for StateChoice {
    type Err = Error;

    /// `family:key=value,...`, e.g. `fock:n=5` or `cat:q0=0.4,theta=0`.
    fn from_str(s: &str) -> Result<Self> {
        let (family, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut p = Params::parse(rest)?;
        let choice = match family.trim() {
            "fock" => StateChoice::Fock {
                n: p.need_index("n")?,
            },
            "cat" => StateChoice::Cat {
                q0: p.need_real("q0")?,
                theta: p.real("theta")?.unwrap_or(0.0),
            },
            "squeezed" => StateChoice::Squeezed {
                mu: p.need_real("mu")?,
            },
            "coherent" => StateChoice::Coherent {
                q: p.real("q")?.unwrap_or(0.0),
                p: p.real("p")?.unwrap_or(0.0),
            },
            "circle" => {
                let n = p.need_index("n")?;
                let r = p.real("r")?.unwrap_or((2.0 * n as f64).sqrt());
                StateChoice::Circle { n, r }
            }
            "gaussian" => StateChoice::Gaussian {
                sigma: p.need_real("sigma")?,
                p0: p.real("p0")?.unwrap_or(0.0),
            },
            other => return Err(invalid(format!("unknown state family {other:?}"))),
        };
        p.finish()?;
        Ok(choice)
    }
}

impl StateChoice {
    /// Fock-space vector at the configured cutoff, refusing states that do
    /// not fit.
    pub fn build(&self, cfg: &RunConfig) -> Result<FockVector> {
        let cutoff = cfg.cutoff;
        let line = |kind| {
            let mut spec = SuperpositionSpec::new(kind).with_samples(cfg.line_samples);
            if let Some(l) = cfg.line_extent {
                spec = spec.with_extent(l);
            }
            build_superposition(&spec, cutoff)
        };
        let state = match *self {
            StateChoice::Fock { n } => FockVector::number_state(n, cutoff)?,
            StateChoice::Cat { q0, theta } => cat_state(q0, theta, cutoff)?,
            StateChoice::Squeezed { mu } => {
                let sq = SqueezeParam::new(mu.abs())?;
                let mut coeffs = Vec::with_capacity(cutoff + 1);
                let mut phase = Complex64::new(1.0, 0.0);
                for n in 0..=cutoff {
                    let c = squeeze_element(n, sq, 0)?;
                    coeffs.push(if mu < 0.0 {
                        phase * c
                    } else {
                        Complex64::new(c, 0.0)
                    });
                    phase *= Complex64::i();
                }
                FockVector::from_coeffs(coeffs)?
            }
            StateChoice::Coherent { q, p } => coherent_fock_coeffs(PhasePoint::new(q, p), cutoff)?,
            StateChoice::Circle { n, r } => build_superposition(
                &SuperpositionSpec::new(SuperpositionKind::FockCircle { n, r })
                    .with_samples(cfg.circle_samples),
                cutoff,
            )?,
            StateChoice::Gaussian { sigma, p0 } => {
                line(SuperpositionKind::GaussianLine { sigma, p0 })?
            }
        };
        if state.tail_mass() >= TAIL_WARNING {
            return Err(Error::Truncation(format!(
                "state {self:?} has tail mass {:e} at cutoff {cutoff}",
                state.tail_mass()
            )));
        }
        Ok(state)
    }
}

/// Rectangular grid of phase-space points for a Q-function table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QGridSpec {
    pub state: StateChoice,
    pub q_min: f64,
    pub q_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub step: f64,
    pub convention: QConvention,
}

impl QGridSpec {
    /// Parses `qmin,qmax,pmin,pmax,step`.
    pub fn parse(state: StateChoice, grid: &str, convention: QConvention) -> Result<Self> {
        let v: Vec<f64> = grid
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| invalid(format!("grid: not a number: {s:?}")))
            })
            .collect::<Result<_>>()?;
        let [q_min, q_max, p_min, p_max, step] = v[..] else {
            return Err(invalid("grid needs qmin,qmax,pmin,pmax,step"));
        };
        let spec = QGridSpec {
            state,
            q_min,
            q_max,
            p_min,
            p_max,
            step,
            convention,
        };
        spec.axis(q_min, q_max)?;
        spec.axis(p_min, p_max)?;
        Ok(spec)
    }

    fn axis(&self, lo: f64, hi: f64) -> Result<Vec<f64>> {
        step_axis(lo, hi, self.step)
    }
}

/// lo, lo + step, ... up to hi, tolerating rounding at the last point.
fn step_axis(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite() && step.is_finite() && step > 0.0 && hi >= lo) {
        return Err(invalid(format!("bad axis {lo}..{hi} step {step}")));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    if count > 10_000_000 {
        return Err(invalid("axis has too many points"));
    }
    Ok((0..count).map(|i| lo + i as f64 * step).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurveKind {
    /// Exact and approximate <q0|n> on [lo, hi].
    FockWavefn {
        n: usize,
        lo: f64,
        hi: f64,
    },
    /// Exact and approximate <m|D(d)|n> on [lo, hi].
    DisplacementElement {
        m: usize,
        n: usize,
        lo: f64,
        hi: f64,
    },
    /// Q function of |n> along the positive q axis.
    QRadial {
        n: usize,
        r_min: f64,
        r_max: f64,
    },
    QGrid(QGridSpec),
    /// Two-source Q function along q = 0 for |-q0,0> + e^{i theta}|q0,0>.
    TwoSourceFringes {
        q0: f64,
        theta: f64,
        p_min: f64,
        p_max: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveSpec {
    pub kind: CurveKind,
    pub methods: Vec<String>,
    pub points: usize,
    pub config: RunConfig,
}

impl CurveSpec {
    /// Builds a spec from the CLI's kind name and `K=V,...` parameters.
    pub fn parse(kind: &str, params: &str, methods: &[String], points: usize) -> Result<Self> {
        let mut p = Params::parse(params)?;
        let kind = match kind {
            "fock_wavefn" => {
                let n = p.need_index("n")?;
                let (lo, hi) = table_interval(Table::I, n, n, RangeChoice::Caption);
                CurveKind::FockWavefn {
                    n,
                    lo: p.real("lo")?.unwrap_or(lo),
                    hi: p.real("hi")?.unwrap_or(hi),
                }
            }
            "displacement_element" => {
                let m = p.need_index("m")?;
                let n = p.index("n")?.unwrap_or(m);
                let table = if m == n { Table::II } else { Table::III };
                let (lo, hi) = table_interval(table, m.max(n), m.min(n), RangeChoice::Caption);
                CurveKind::DisplacementElement {
                    m,
                    n,
                    lo: p.real("lo")?.unwrap_or(lo),
                    hi: p.real("hi")?.unwrap_or(hi),
                }
            }
            "q_radial" => {
                let n = p.need_index("n")?;
                CurveKind::QRadial {
                    n,
                    r_min: p.real("r_min")?.unwrap_or(0.0),
                    r_max: p
                        .real("r_max")?
                        .unwrap_or(2.0 * (2.0 * n as f64).sqrt() + 3.0),
                }
            }
            "q_grid" => {
                let state: StateChoice =
                    p.0.remove("state")
                        .ok_or_else(|| invalid("missing parameter state"))?
                        .replace(';', ",")
                        .parse()?;
                let spec = QGridSpec {
                    state,
                    q_min: p.need_real("qmin")?,
                    q_max: p.need_real("qmax")?,
                    p_min: p.need_real("pmin")?,
                    p_max: p.need_real("pmax")?,
                    step: p.need_real("step")?,
                    convention: QConvention::PerDqDp,
                };
                CurveKind::QGrid(spec)
            }
            "two_source_fringes" => CurveKind::TwoSourceFringes {
                q0: p.need_real("q0")?,
                theta: p.real("theta")?.unwrap_or(0.0),
                p_min: p.real("pmin")?.unwrap_or(-20.0),
                p_max: p.real("pmax")?.unwrap_or(20.0),
            },
            other => return Err(invalid(format!("unknown curve kind {other:?}"))),
        };
        p.finish()?;
        let spec = CurveSpec {
            kind,
            methods: methods.to_vec(),
            points,
            config: RunConfig::default(),
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        if self.points < 2 && !matches!(self.kind, CurveKind::QGrid(_)) {
            return Err(invalid("a curve needs at least 2 points"));
        }
        match self.kind {
            CurveKind::FockWavefn { .. } => {
                self.fock_methods()?;
            }
            CurveKind::DisplacementElement { .. } => {
                self.displacement_methods()?;
            }
            _ => {}
        }
        Ok(())
    }

    fn fock_methods(&self) -> Result<Vec<FockMethod>> {
        if self.methods.is_empty() {
            return Ok(FockMethod::ALL.to_vec());
        }
        self.methods
            .iter()
            .map(|t| {
                FockMethod::from_tag(t).ok_or_else(|| invalid(format!("unknown method {t:?}")))
            })
            .collect()
    }

    fn displacement_methods(&self) -> Result<Vec<DisplacementMethod>> {
        if self.methods.is_empty() {
            return Ok(vec![
                DisplacementMethod::Inphase,
                DisplacementMethod::Tricomi,
                DisplacementMethod::DowlingWkb,
            ]);
        }
        self.methods
            .iter()
            .map(|t| {
                DisplacementMethod::from_tag(t)
                    .ok_or_else(|| invalid(format!("unknown method {t:?}")))
            })
            .collect()
    }
}

/// Column names and numeric rows of a curve.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CurveTable {
    /// Writes header and rows as CSV and returns the number of data rows.
    pub fn write(&self, sink: &mut dyn Write) -> Result<usize> {
        write_header(sink, &self.header)?;
        for r in &self.rows {
            write_row(sink, r)?;
        }
        Ok(self.rows.len())
    }
}

/// Computes every row in parallel, kept in index order.
fn table_rows<T: Sync>(
    header: &[&str],
    xs: &[T],
    row: impl Fn(&T) -> Result<Vec<f64>> + Sync,
) -> Result<CurveTable> {
    Ok(CurveTable {
        header: header.iter().map(|s| s.to_string()).collect(),
        rows: xs.par_iter().map(&row).collect::<Result<Vec<_>>>()?,
    })
}

/// Writes the curve as CSV and returns the number of data rows.
pub fn emit_curve(spec: &CurveSpec, sink: &mut dyn Write) -> Result<usize> {
    curve_table(spec)?.write(sink)
}

/// Evaluates the curve.
pub fn curve_table(spec: &CurveSpec) -> Result<CurveTable> {
    spec.validate()?;
    match spec.kind {
        CurveKind::FockWavefn { n, lo, hi } => {
            let methods = spec.fock_methods()?;
            let mut header = vec!["q0", "exact"];
            header.extend(methods.iter().map(|m| m.tag()));
            let xs = grid(lo, hi, spec.points, GridMode::Inclusive);
            table_rows(&header, &xs, |&q| {
                let mut row = vec![q, fock_position_wavefn(n, q)?];
                row.extend(methods.iter().map(|&m| fock_position_approx(m, n, q).value));
                Ok(row)
            })
        }
        CurveKind::DisplacementElement { m, n, lo, hi } => {
            let methods = spec.displacement_methods()?;
            let mut header = vec!["d", "exact"];
            header.extend(methods.iter().map(|m| m.tag()));
            let xs = grid(lo, hi, spec.points, GridMode::Inclusive);
            table_rows(&header, &xs, |&d| {
                let mut row = vec![d, displacement_element(m, n, d, 0.0)?.re];
                row.extend(
                    methods
                        .iter()
                        .map(|&k| displacement_approx(k, m, n, d).value),
                );
                Ok(row)
            })
        }
        CurveKind::QRadial { n, r_min, r_max } => {
            let state = FockVector::number_state(n, spec.config.cutoff.max(n))?;
            let xs = grid(r_min, r_max, spec.points, GridMode::Inclusive);
            table_rows(&["r", "q"], &xs, |&r| {
                Ok(vec![
                    r,
                    q_function(&state, PhasePoint::new(r, 0.0), QConvention::PerDqDp)?,
                ])
            })
        }
        CurveKind::QGrid(g) => q_grid_table(&g, &spec.config),
        CurveKind::TwoSourceFringes {
            q0,
            theta,
            p_min,
            p_max,
        } => {
            let z1 = PhasePoint::new(-q0, 0.0);
            let z2 = PhasePoint::new(q0, 0.0);
            let xs = grid(p_min, p_max, spec.points, GridMode::Inclusive);
            table_rows(
                &["p", "i1", "i2", "delta", "q_value", "normalized"],
                &xs,
                |&p| {
                    let b = two_source_q(z1, z2, theta, PhasePoint::new(0.0, p));
                    let ratio = (b.i1 / b.i2).sqrt();
                    let normalized = 0.5 * (ratio + 1.0 / ratio) + b.delta.cos();
                    Ok(vec![p, b.i1, b.i2, b.delta, b.q_value, normalized])
                },
            )
        }
    }
}

/// Writes the Q function grid as CSV and returns the number of data rows.
pub fn emit_q_grid(spec: &QGridSpec, cfg: &RunConfig, sink: &mut dyn Write) -> Result<usize> {
    q_grid_table(spec, cfg)?.write(sink)
}

/// Q function on a rectangular grid, q varying slowest.
pub fn q_grid_table(spec: &QGridSpec, cfg: &RunConfig) -> Result<CurveTable> {
    let state = spec.state.build(cfg)?;
    let qs = spec.axis(spec.q_min, spec.q_max)?;
    let ps = spec.axis(spec.p_min, spec.p_max)?;
    let points: Vec<PhasePoint> = qs
        .iter()
        .flat_map(|&q| ps.iter().map(move |&p| PhasePoint::new(q, p)))
        .collect();
    table_rows(&["q", "p", "q_value"], &points, |&pt| {
        q_function(&state, pt, spec.convention).map(|v| vec![pt.q, pt.p, v])
    })
}
