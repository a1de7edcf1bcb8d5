//! `key=value` run configuration.

use std::path::Path;

use lrp_core::dde::{steps_per_unit, DEFAULT_STEP};
use lrp_core::hecke::DEFAULT_RAMANUJAN_TOL;
use lrp_core::sieve::PRIME_LIMIT_GUARD;
use lrp_core::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown output format {other:?} (csv or json)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub step_h: f64,
    pub ramanujan_tol: f64,
    pub output_format: OutputFormat,
    pub prime_limit_guard: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            step_h: DEFAULT_STEP,
            ramanujan_tol: DEFAULT_RAMANUJAN_TOL,
            output_format: OutputFormat::Csv,
            prime_limit_guard: PRIME_LIMIT_GUARD,
        }
    }
}

fn invalid(line: usize, msg: impl Into<String>) -> Error {
    Error::Validation { line, msg: msg.into() }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let row = raw.trim();
            if row.is_empty() || row.starts_with('#') {
                continue;
            }
            let (k, v) = row.split_once('=').ok_or_else(|| invalid(line, format!("expected key=value, got {row:?}")))?;
            let v = v.trim();
            let num = |v: &str| v.parse::<f64>().map_err(|_| invalid(line, format!("bad number {v:?}")));
            match k.trim() {
                "step_h" => cfg.step_h = num(v)?,
                "ramanujan_tol" => cfg.ramanujan_tol = num(v)?,
                "output_format" => cfg.output_format = v.parse().map_err(|e: String| invalid(line, e))?,
                "prime_limit_guard" => {
                    cfg.prime_limit_guard = v.parse().map_err(|_| invalid(line, format!("bad integer {v:?}")))?
                }
                other => return Err(invalid(line, format!("unknown key {other:?}"))),
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        steps_per_unit(self.step_h)?;
        if !(self.ramanujan_tol > 0.0) {
            return Err(invalid(0, format!("ramanujan_tol = {} must be positive", self.ramanujan_tol)));
        }
        if self.prime_limit_guard < 2 {
            return Err(invalid(0, "prime_limit_guard must be at least 2"));
        }
        Ok(())
    }
}
