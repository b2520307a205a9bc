use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use powerfree_core::bounds::{PowerIterationOptions, SupOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => bail!("unknown format {s:?} (expected csv or json)"),
        }
    }
}

/// Tunable tolerances, guards and analysis parameters for a run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub quad_multiplier: u64,
    pub power_tolerance: f64,
    pub power_max_iterations: usize,
    pub power_shift: f64,
    pub sup_grid: usize,
    pub sup_refine_width: f64,
    pub seed: u64,
    pub format: OutputFormat,
    pub max_members: u64,
    pub max_qk: u64,
    /// Threshold exponent of the `S1/S2` split.
    pub split_b: f64,
    /// Saving exponent; when absent it is `alpha - 1/k`.
    pub delta: Option<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            quad_multiplier: 16,
            power_tolerance: 1e-12,
            power_max_iterations: 100_000,
            power_shift: 0.0,
            sup_grid: 1024,
            sup_refine_width: 1e-12,
            seed: 0,
            format: OutputFormat::Csv,
            max_members: 100_000_000,
            max_qk: 1_000_000,
            split_b: 3.0,
            delta: None,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| anyhow::anyhow!("bad value {value:?} for {key}: {e}"))
}

impl RunConfig {
    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply_str(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .with_context(|| format!("line {}: expected key = value", i + 1))?;
            self.set(key.trim(), value.trim())
                .with_context(|| format!("line {}", i + 1))?;
        }
        self.validate()
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let mut cfg = RunConfig::default();
        cfg.apply_str(&text)?;
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "quad_multiplier" => self.quad_multiplier = parse(key, value)?,
            "power_tolerance" => self.power_tolerance = parse(key, value)?,
            "power_max_iterations" => self.power_max_iterations = parse(key, value)?,
            "power_shift" => self.power_shift = parse(key, value)?,
            "sup_grid" => self.sup_grid = parse(key, value)?,
            "sup_refine_width" => self.sup_refine_width = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "format" => self.format = value.parse()?,
            "max_members" => self.max_members = parse(key, value)?,
            "max_qk" => self.max_qk = parse(key, value)?,
            "split_b" => self.split_b = parse(key, value)?,
            "delta" => self.delta = Some(parse(key, value)?),
            _ => bail!("unknown config key {key:?}"),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("quad_multiplier", self.quad_multiplier as f64),
            ("power_tolerance", self.power_tolerance),
            ("power_max_iterations", self.power_max_iterations as f64),
            ("sup_grid", self.sup_grid as f64),
            ("sup_refine_width", self.sup_refine_width),
            ("max_members", self.max_members as f64),
            ("max_qk", self.max_qk as f64),
            ("split_b", self.split_b),
        ];
        for (name, v) in positive {
            if v.is_nan() || v <= 0.0 {
                bail!("{name} must be positive");
            }
        }
        if self.power_shift < 0.0 {
            bail!("power_shift must be nonnegative");
        }
        if self.sup_grid < 2 {
            bail!("sup_grid must be at least 2");
        }
        Ok(())
    }

    pub fn power_options(&self) -> PowerIterationOptions {
        PowerIterationOptions {
            tolerance: self.power_tolerance,
            max_iterations: self.power_max_iterations,
            shift: self.power_shift,
        }
    }

    pub fn sup_options(&self) -> SupOptions {
        SupOptions {
            grid: self.sup_grid,
            refine_width: self.sup_refine_width,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_overrides() {
        let mut c = RunConfig::default();
        c.apply_str("# tuned\nquad_multiplier = 32\nseed=7\nformat = json\ndelta = 0.01\n")
            .unwrap();
        assert_eq!(c.quad_multiplier, 32);
        assert_eq!(c.seed, 7);
        assert_eq!(c.format, OutputFormat::Json);
        assert_eq!(c.delta, Some(0.01));
    }

    #[test]
    fn rejects_bad_input() {
        let mut c = RunConfig::default();
        assert!(c.apply_str("nonsense = 1").is_err());
        assert!(c.apply_str("seed").is_err());
        assert!(RunConfig::default()
            .apply_str("power_tolerance = 0")
            .is_err());
    }
}
