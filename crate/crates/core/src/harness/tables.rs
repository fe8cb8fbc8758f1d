//! RMSE of the asymptotic approximations against exact values on the
//! benchmark grids.

use rayon::prelude::*;
use std::fmt;

use crate::asymptotics::{
    displacement_approx, fock_position_approx, DisplacementMethod, FockMethod,
};
use crate::error::{invalid, Result};
use crate::exact::{displacement_element, fock_position_wavefn};

/// Distance kept from the classical turning points.
pub const EDGE_MARGIN: f64 = 0.3;
/// Offset from the inner intersection for the unequal-index grid.
pub const INNER_OFFSET: f64 = 5.0;
pub const TABLE_POINTS: usize = 512;

pub const TABLE_I_INDICES: [usize; 4] = [20, 30, 40, 50];
pub const TABLE_II_INDICES: [usize; 4] = [20, 30, 40, 50];
pub const TABLE_III_PAIRS: [(usize, usize); 4] = [(30, 20), (40, 30), (50, 40), (30, 10)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Table {
    I,
    II,
    III,
}

impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Table::I => "I",
            Table::II => "II",
            Table::III => "III",
        })
    }
}

impl std::str::FromStr for Table {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" | "1" => Ok(Table::I),
            "II" | "2" => Ok(Table::II),
            "III" | "3" => Ok(Table::III),
            _ => Err(invalid(format!("unknown table {s:?}"))),
        }
    }
}

/// Upper end of the equal-index displacement grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RangeChoice {
    /// d up to 2 sqrt(2m) - 0.3, inside the classical boundary.
    #[default]
    Caption,
    /// d up to 2 sqrt(2m) + 0.3, past it; points where a method has no
    /// real saddle are excluded from that method's RMSE.
    Text,
}

impl std::str::FromStr for RangeChoice {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "caption" => Ok(RangeChoice::Caption),
            "text" => Ok(RangeChoice::Text),
            _ => Err(invalid(format!(
                "unknown range {s:?}, expected caption|text"
            ))),
        }
    }
}

/// How the sample points sit on the interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GridMode {
    /// Both endpoints included.
    #[default]
    Inclusive,
    /// Interior points of a grid with one more interval, endpoints excluded.
    Interior,
}

impl std::str::FromStr for GridMode {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inclusive" => Ok(GridMode::Inclusive),
            "interior" => Ok(GridMode::Interior),
            _ => Err(invalid(format!(
                "unknown grid {s:?}, expected inclusive|interior"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableOptions {
    pub range: RangeChoice,
    pub grid: GridMode,
    pub points: usize,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions {
            range: RangeChoice::Caption,
            grid: GridMode::Inclusive,
            points: TABLE_POINTS,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RmseRow {
    pub table: Table,
    pub m: usize,
    pub n: Option<usize>,
    pub method: String,
    pub grid_lo: f64,
    pub grid_hi: f64,
    pub points: usize,
    pub rmse: f64,
    /// Grid points dropped because the method had no real saddle there.
    pub excluded: usize,
}

/// `points` uniformly spaced abscissae on [lo, hi].
pub fn grid(lo: f64, hi: f64, points: usize, mode: GridMode) -> Vec<f64> {
    match mode {
        GridMode::Inclusive => {
            if points == 1 {
                return vec![lo];
            }
            let step = (hi - lo) / (points - 1) as f64;
            (0..points)
                .map(|i| {
                    if i + 1 == points {
                        hi
                    } else {
                        lo + i as f64 * step
                    }
                })
                .collect()
        }
        GridMode::Interior => {
            let step = (hi - lo) / (points + 1) as f64;
            (1..=points).map(|i| lo + i as f64 * step).collect()
        }
    }
}

/// Interval used for each table entry.
pub fn table_interval(table: Table, m: usize, n: usize, range: RangeChoice) -> (f64, f64) {
    let rm = (2.0 * m as f64).sqrt();
    let rn = (2.0 * n as f64).sqrt();
    match table {
        Table::I => (-rm + EDGE_MARGIN, rm - EDGE_MARGIN),
        Table::II => match range {
            RangeChoice::Caption => (EDGE_MARGIN, 2.0 * rm - EDGE_MARGIN),
            RangeChoice::Text => (EDGE_MARGIN, 2.0 * rm + EDGE_MARGIN),
        },
        Table::III => (rm - rn + INNER_OFFSET, rm + rn - EDGE_MARGIN),
    }
}

fn rmse_over(exact: &[f64], approx: &[Option<f64>]) -> (f64, usize) {
    let mut sum = 0.0;
    let mut used = 0usize;
    for (e, a) in exact.iter().zip(approx) {
        if let Some(a) = a {
            sum += (a - e).powi(2);
            used += 1;
        }
    }
    let rmse = if used == 0 {
        f64::NAN
    } else {
        (sum / used as f64).sqrt()
    };
    (rmse, exact.len() - used)
}

fn fock_rows(n: usize, opts: &TableOptions) -> Result<Vec<RmseRow>> {
    let (lo, hi) = table_interval(Table::I, n, n, opts.range);
    let xs = grid(lo, hi, opts.points, opts.grid);
    let exact = xs
        .par_iter()
        .map(|&q| fock_position_wavefn(n, q))
        .collect::<Result<Vec<_>>>()?;
    Ok(FockMethod::ALL
        .iter()
        .map(|&method| {
            let approx: Vec<Option<f64>> = xs
                .par_iter()
                .map(|&q| fock_position_approx(method, n, q).get())
                .collect();
            let (rmse, excluded) = rmse_over(&exact, &approx);
            RmseRow {
                table: Table::I,
                m: n,
                n: None,
                method: method.tag().to_string(),
                grid_lo: lo,
                grid_hi: hi,
                points: xs.len(),
                rmse,
                excluded,
            }
        })
        .collect())
}

const DISPLACEMENT_METHODS: [DisplacementMethod; 3] = [
    DisplacementMethod::Inphase,
    DisplacementMethod::Tricomi,
    DisplacementMethod::DowlingWkb,
];

fn displacement_rows(
    table: Table,
    m: usize,
    n: usize,
    opts: &TableOptions,
) -> Result<Vec<RmseRow>> {
    let (lo, hi) = table_interval(table, m, n, opts.range);
    let xs = grid(lo, hi, opts.points, opts.grid);
    let exact = xs
        .par_iter()
        .map(|&d| displacement_element(m, n, d, 0.0).map(|v| v.re))
        .collect::<Result<Vec<_>>>()?;
    Ok(DISPLACEMENT_METHODS
        .iter()
        .map(|&method| {
            let approx: Vec<Option<f64>> = xs
                .par_iter()
                .map(|&d| displacement_approx(method, m, n, d).get())
                .collect();
            let (rmse, excluded) = rmse_over(&exact, &approx);
            RmseRow {
                table,
                m,
                n: Some(n),
                method: method.tag().to_string(),
                grid_lo: lo,
                grid_hi: hi,
                points: xs.len(),
                rmse,
                excluded,
            }
        })
        .collect())
}

/// All rows of one table with the given grid options.
pub fn rmse_table_with(which: Table, opts: &TableOptions) -> Result<Vec<RmseRow>> {
    if opts.points < 2 {
        return Err(invalid("a table grid needs at least 2 points"));
    }
    let mut rows = Vec::new();
    match which {
        Table::I => {
            for n in TABLE_I_INDICES {
                rows.extend(fock_rows(n, opts)?);
            }
        }
        Table::II => {
            for m in TABLE_II_INDICES {
                rows.extend(displacement_rows(Table::II, m, m, opts)?);
            }
        }
        Table::III => {
            for (m, n) in TABLE_III_PAIRS {
                rows.extend(displacement_rows(Table::III, m, n, opts)?);
            }
        }
    }
    Ok(rows)
}

/// All rows of one table on the default 512-point inclusive grid.
pub fn rmse_table(which: Table) -> Vec<RmseRow> {
    rmse_table_with(which, &TableOptions::default()).expect("default table grids are valid")
}

/// Write rows as CSV.
pub fn write_rows(rows: &[RmseRow], sink: &mut dyn std::io::Write) -> Result<()> {
    use super::csv::{format_float, io_err};
    writeln!(
        sink,
        "table,m,n,method,grid_lo,grid_hi,points,excluded,rmse"
    )
    .map_err(io_err)?;
    for r in rows {
        writeln!(
            sink,
            "{},{},{},{},{},{},{},{},{}",
            r.table,
            r.m,
            r.n.map(|n| n.to_string()).unwrap_or_default(),
            r.method,
            format_float(r.grid_lo),
            format_float(r.grid_hi),
            r.points,
            r.excluded,
            format_float(r.rmse)
        )
        .map_err(io_err)?;
    }
    Ok(())
}
