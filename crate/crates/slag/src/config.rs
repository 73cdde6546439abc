use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use slag_core::hypersurface::{CoefficientVector, Preset};

use crate::error::{CliError, Result};

pub const DEFAULT_N: usize = 100;
pub const DEFAULT_STARTS: usize = 10_000;
pub const DEFAULT_BASES: usize = 20;
pub const DEFAULT_FIBER: usize = 64;

/// Contents of a TOML config file. Coefficients are strings so that
/// rationals such as `"-3/2"` stay exact.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub preset: Option<String>,
    pub c: Option<Vec<String>>,
    pub n: Option<usize>,
    pub seed: Option<u64>,
    pub starts: Option<usize>,
    pub tol_scale: Option<f64>,
    pub out: Option<PathBuf>,
    pub bases: Option<usize>,
    pub fiber: Option<usize>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::ReadConfig {
            path: path.into(),
            source,
        })?;
        Ok(toml::from_str(&text)?)
    }
}

/// Command-line values; each one present overrides the config file.
#[derive(Clone, Debug, Default)]
pub struct ConfigOverrides {
    pub preset: Option<String>,
    pub config: Option<PathBuf>,
    pub n: Option<usize>,
    pub seed: Option<u64>,
    pub starts: Option<usize>,
    pub tol_scale: Option<f64>,
    pub out: Option<PathBuf>,
    pub bases: Option<usize>,
    pub fiber: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub coefficients: CoefficientVector,
    pub preset: Option<Preset>,
    pub n: usize,
    pub seed: u64,
    pub starts: usize,
    /// Multiplies every verification threshold.
    pub tol_scale: f64,
    pub out: PathBuf,
    pub bases: usize,
    pub fiber: usize,
}

/// The resolved config as echoed into reports.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ConfigEcho {
    pub preset: Option<String>,
    pub c: Vec<String>,
    pub n: usize,
    pub seed: u64,
    pub starts: usize,
    pub tol_scale: f64,
    pub bases: usize,
    pub fiber: usize,
}

fn parse_preset(name: &str) -> Result<Preset> {
    Preset::from_str(name).map_err(|_| {
        CliError::Config(format!(
            "unknown preset `{name}` (expected eq1, eq7 or eq8)"
        ))
    })
}

fn parse_coefficients(raw: &[String]) -> Result<CoefficientVector> {
    if raw.len() != 6 {
        return Err(CliError::Config(format!(
            "expected 6 coefficients, found {}",
            raw.len()
        )));
    }
    let mut values = Vec::with_capacity(6);
    for s in raw {
        let q = BigRational::from_str(s.trim())
            .map_err(|_| CliError::Config(format!("coefficient `{s}` is not a rational number")))?;
        values.push(q);
    }
    let values: [BigRational; 6] = values.try_into().expect("six entries");
    CoefficientVector::new(values).map_err(|e| CliError::Config(e.to_string()))
}

impl RunConfig {
    pub fn resolve(o: &ConfigOverrides) -> Result<Self> {
        let file = match &o.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        if file.preset.is_some() && file.c.is_some() {
            return Err(CliError::Config(
                "config gives both `preset` and `c`".into(),
            ));
        }
        let preset_name = o.preset.clone().or(file.preset);
        let (coefficients, preset) = match (&preset_name, &file.c) {
            (Some(name), _) => {
                let p = parse_preset(name)?;
                (CoefficientVector::preset(p), Some(p))
            }
            (None, Some(c)) => (parse_coefficients(c)?, None),
            (None, None) => (CoefficientVector::preset(Preset::Eq1), Some(Preset::Eq1)),
        };
        let cfg = RunConfig {
            coefficients,
            preset,
            n: o.n.or(file.n).unwrap_or(DEFAULT_N),
            seed: o.seed.or(file.seed).unwrap_or(0),
            starts: o.starts.or(file.starts).unwrap_or(DEFAULT_STARTS),
            tol_scale: o.tol_scale.or(file.tol_scale).unwrap_or(1.0),
            out: o
                .out
                .clone()
                .or(file.out)
                .unwrap_or_else(|| PathBuf::from("slag-out")),
            bases: o.bases.or(file.bases).unwrap_or(DEFAULT_BASES),
            fiber: o.fiber.or(file.fiber).unwrap_or(DEFAULT_FIBER),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(CliError::Config("n must be at least 1".into()));
        }
        if self.starts == 0 {
            return Err(CliError::Config("starts must be at least 1".into()));
        }
        if !(self.tol_scale > 0.0 && self.tol_scale.is_finite()) {
            return Err(CliError::Config("tol_scale must be positive".into()));
        }
        if self.bases == 0 {
            return Err(CliError::Config("bases must be at least 1".into()));
        }
        if self.fiber < 3 {
            return Err(CliError::Config("a fiber needs at least 3 samples".into()));
        }
        Ok(())
    }

    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            preset: self.preset.map(|p| p.name().to_string()),
            c: self
                .coefficients
                .values()
                .iter()
                .map(|q| q.to_string())
                .collect(),
            n: self.n,
            seed: self.seed,
            starts: self.starts,
            tol_scale: self.tol_scale,
            bases: self.bases,
            fiber: self.fiber,
        }
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig::resolve(&ConfigOverrides::default()).expect("defaults are valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn presets_and_defaults() {
        let cfg = RunConfig::default();
        assert_eq!(cfg.preset, Some(Preset::Eq1));
        assert!(cfg.coefficients.is_standard());
        let o = ConfigOverrides {
            preset: Some("eq8".into()),
            ..Default::default()
        };
        assert_eq!(
            RunConfig::resolve(&o).unwrap().coefficients,
            CoefficientVector::preset(Preset::Eq8)
        );
    }

    #[test]
    fn rejects_bad_values() {
        for o in [
            ConfigOverrides {
                n: Some(0),
                ..Default::default()
            },
            ConfigOverrides {
                fiber: Some(2),
                ..Default::default()
            },
            ConfigOverrides {
                tol_scale: Some(-1.0),
                ..Default::default()
            },
            ConfigOverrides {
                preset: Some("eq2".into()),
                ..Default::default()
            },
        ] {
            assert!(matches!(RunConfig::resolve(&o), Err(CliError::Config(_))));
        }
    }

    #[test]
    fn file_with_exact_coefficients() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(
            f,
            "c = [\"1\", \"1/2\", \"1\", \"-1\", \"-3\", \"-1\"]\nn = 7\nseed = 3"
        )
        .unwrap();
        let o = ConfigOverrides {
            config: Some(f.path().into()),
            seed: Some(9),
            ..Default::default()
        };
        let cfg = RunConfig::resolve(&o).unwrap();
        assert_eq!(cfg.coefficients.to_string(), "(1, 1/2, 1, -1, -3, -1)");
        assert_eq!((cfg.n, cfg.seed, cfg.preset), (7, 9, None));
    }

    #[test]
    fn same_sign_coefficients_rejected() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "c = [\"1\", \"1\", \"1\", \"1\", \"1\", \"1\"]").unwrap();
        let o = ConfigOverrides {
            config: Some(f.path().into()),
            ..Default::default()
        };
        assert!(matches!(RunConfig::resolve(&o), Err(CliError::Config(_))));
    }
}
