//! Optional `key = value` run configuration.

use serde::Deserialize;
use std::path::Path;

use crate::error::{invalid, Error, Result};
use crate::states::{DEFAULT_CIRCLE_SAMPLES, DEFAULT_CUTOFF, DEFAULT_LINE_SAMPLES};

/// Numerical knobs shared by the CLI subcommands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub cutoff: usize,
    /// Half-length of line superpositions; `None` uses each kind's default.
    pub line_extent: Option<f64>,
    pub line_samples: usize,
    pub circle_samples: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            cutoff: DEFAULT_CUTOFF,
            line_extent: None,
            line_samples: DEFAULT_LINE_SAMPLES,
            circle_samples: DEFAULT_CIRCLE_SAMPLES,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    cutoff: Option<usize>,
    line_extent: Option<f64>,
    line_samples: Option<usize>,
    circle_samples: Option<usize>,
}

impl RunConfig {
    /// Defaults overridden by whatever keys the text sets.
    pub fn from_text(text: &str) -> Result<Self> {
        let file: ConfigFile =
            toml::from_str(text).map_err(|e| invalid(format!("config: {}", e.message())))?;
        let mut cfg = RunConfig::default();
        if let Some(c) = file.cutoff {
            cfg.cutoff = c;
        }
        if let Some(l) = file.line_extent {
            if !(l.is_finite() && l > 0.0) {
                return Err(invalid(format!(
                    "config: line_extent must be positive, got {l}"
                )));
            }
            cfg.line_extent = Some(l);
        }
        if let Some(s) = file.line_samples {
            cfg.line_samples = s;
        }
        if let Some(s) = file.circle_samples {
            cfg.circle_samples = s;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_text(&text)
    }
}
