//! Settings shared by all subcommands: defaults, then `--config`, then flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// sup-norm closure gap for period solutions
    pub closure: f64,
    /// integrability residual above which a reconstruction is ill-conditioned
    pub integrability: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            closure: 1e-8,
            integrability: cmcsurf::kenmotsu::DEFAULT_INTEGRABILITY_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Grid {
    pub nu: usize,
    pub nv: usize,
    /// grid used by period closure checks
    pub closure: usize,
    /// scan points for the Φ root finder
    pub scan: usize,
}

impl Default for Grid {
    fn default() -> Self {
        Self {
            nu: 64,
            nv: 64,
            closure: 64,
            scan: cmcsurf::period::DEFAULT_SCAN,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub out_dir: PathBuf,
    #[serde(rename = "H")]
    pub h: f64,
    pub tolerances: Tolerances,
    pub grid: Grid,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            out_dir: PathBuf::from("."),
            h: -0.5,
            tolerances: Tolerances::default(),
            grid: Grid::default(),
        }
    }
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let config = match path {
            None => Config::default(),
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading config {}", path.display()))?;
                toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?
            }
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        let t = &self.tolerances;
        for (name, v) in [("closure", t.closure), ("integrability", t.integrability)] {
            if !(v > 0.0 && v.is_finite()) {
                bail!("tolerance {name} must be positive (got {v})");
            }
        }
        let g = &self.grid;
        for (name, v) in [("nu", g.nu), ("nv", g.nv), ("closure", g.closure), ("scan", g.scan)] {
            if v < 2 {
                bail!("grid size {name} must be at least 2 (got {v})");
            }
        }
        if !(self.h != 0.0 && self.h.is_finite()) {
            bail!("H must be non-zero and finite (got {})", self.h);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_file_keeps_defaults() {
        let c: Config = toml::from_str("H = -1.0\n[grid]\nnu = 10\n").unwrap();
        assert_eq!(c.h, -1.0);
        assert_eq!(c.grid.nu, 10);
        assert_eq!(c.grid.nv, 64);
        assert_eq!(c.tolerances, Tolerances::default());
        c.validate().unwrap();
    }

    #[test]
    fn invalid_values_are_rejected() {
        let c: Config = toml::from_str("[tolerances]\nclosure = 0.0\n").unwrap();
        assert!(c.validate().is_err());
        let c: Config = toml::from_str("[grid]\nnv = 1\n").unwrap();
        assert!(c.validate().is_err());
        assert!(toml::from_str::<Config>("colour = 1\n").is_err());
    }
}
