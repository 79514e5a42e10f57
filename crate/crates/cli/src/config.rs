use std::fmt;
use std::str::FromStr;

use condspec::spectra::GridSpec;
use condspec::{Error, NormKind, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
    Svg,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            "svg" => Ok(Self::Svg),
            other => Err(format!(
                "unknown format `{other}` (expected csv, json or svg)"
            )),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Csv => "csv",
            Self::Json => "json",
            Self::Svg => "svg",
        })
    }
}

/// Settings shared by the grid-based subcommands.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub norm: NormKind,
    pub grid: GridSpec,
    pub levels: Vec<f64>,
    pub output_format: OutputFormat,
    pub seed: u64,
    pub tol: f64,
}

impl RunConfig {
    pub fn new(
        norm: NormKind,
        grid: GridSpec,
        mut levels: Vec<f64>,
        output_format: OutputFormat,
        seed: u64,
        tol: f64,
    ) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidArgument(
                "at least one level is required".into(),
            ));
        }
        if let Some(&bad) = levels.iter().find(|e| !(e.is_finite() && **e > 0.0)) {
            return Err(Error::InvalidEpsilon(bad));
        }
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "tolerance must be positive, got {tol}"
            )));
        }
        levels.sort_by(f64::total_cmp);
        levels.dedup();
        Ok(Self {
            norm,
            grid,
            levels,
            output_format,
            seed,
            tol,
        })
    }

    pub fn max_level(&self) -> f64 {
        *self.levels.last().expect("validated non-empty")
    }
}

pub fn parse_list(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}")))
        .collect()
}

/// `RE,IM` or any complex literal such as `2-1j`.
pub fn parse_point(s: &str) -> std::result::Result<condspec::Complex64, String> {
    if let Some((re, im)) = s.split_once(',') {
        let re = re
            .trim()
            .parse::<f64>()
            .map_err(|e| format!("`{re}`: {e}"))?;
        let im = im
            .trim()
            .parse::<f64>()
            .map_err(|e| format!("`{im}`: {e}"))?;
        return Ok(condspec::Complex64::new(re, im));
    }
    condspec::io::parse_complex(s).ok_or_else(|| format!("`{s}` is not a complex number"))
}

pub fn parse_window(s: &str) -> std::result::Result<[f64; 4], String> {
    match parse_list(s)?.as_slice() {
        &[a, b, c, d] => Ok([a, b, c, d]),
        _ => Err("expected RE_MIN,RE_MAX,IM_MIN,IM_MAX".into()),
    }
}
