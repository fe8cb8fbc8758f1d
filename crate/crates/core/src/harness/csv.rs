//! Minimal CSV writing with round-trip-safe floats.

use std::io::Write;

use crate::error::{Error, Result};

/// 17 significant digits in scientific notation.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.16e}")
    }
}

pub(crate) fn io_err(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

pub(crate) fn write_header(sink: &mut dyn Write, columns: &[String]) -> Result<()> {
    writeln!(sink, "{}", columns.join(",")).map_err(io_err)
}

pub(crate) fn write_row(sink: &mut dyn Write, values: &[f64]) -> Result<()> {
    let cells: Vec<String> = values.iter().map(|&v| format_float(v)).collect();
    writeln!(sink, "{}", cells.join(",")).map_err(io_err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for &x in &[0.1, -1.0 / 3.0, 6.02214076e23, 5e-324, 0.0] {
            let s = format_float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(format_float(f64::NAN), "NaN");
        assert_eq!(format_float(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn rows_have_no_trailing_separator() {
        let mut buf = Vec::new();
        write_row(&mut buf, &[1.0, 2.0]).unwrap();
        let line = String::from_utf8(buf).unwrap();
        assert!(!line.trim_end().ends_with(','));
        assert_eq!(line.matches(',').count(), 1);
    }
}
