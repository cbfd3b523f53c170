//! Run configuration: defaults, `key=value` parsing (config files and CLI
//! overrides funnel through the same setter), and a rendered form that
//! round-trips.

use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::model::{ExperimentContext, ModelParams, SpinPattern};

/// Everything one `run` needs: geometry, context, budget, seed, and where
/// to persist results. Paths are optional; absent means "don't write".
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams,
    pub context: ExperimentContext,
    pub particles: u64,
    pub seed: u64,
    pub csv_path: Option<PathBuf>,
    pub json_path: Option<PathBuf>,
    pub svg_path: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            params: ModelParams::default(),
            context: ExperimentContext::BothRandom,
            particles: 200_000,
            seed: 42,
            csv_path: None,
            json_path: None,
            svg_path: None,
        }
    }
}

impl RunConfig {
    /// Applies one `key=value` assignment. Both the config-file parser and
    /// the CLI flags go through here, so they accept the same keys and
    /// produce the same errors.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
            value
                .parse()
                .map_err(|_| Error::config(key, format!("malformed value {value:?}")))
        }
        match key {
            "radius" => self.params.atom_radius = num(key, value)?,
            "orbits" => self.params.n_orbits = num(key, value)?,
            "spin_pattern" => {
                self.params.initial_spin_pattern = SpinPattern::parse(value)
                    .ok_or_else(|| Error::config(key, format!("unknown spin pattern {value:?}")))?;
            }
            "slit1_lo" => self.params.slit1_aperture.lo = num(key, value)?,
            "slit1_hi" => self.params.slit1_aperture.hi = num(key, value)?,
            "slit2_lo" => self.params.slit2_aperture.lo = num(key, value)?,
            "slit2_hi" => self.params.slit2_aperture.hi = num(key, value)?,
            "context" => {
                self.context = ExperimentContext::parse(value)
                    .ok_or_else(|| Error::config(key, format!("unknown context {value:?}")))?;
            }
            "particles" => {
                let n: u64 = num(key, value)?;
                if n == 0 {
                    return Err(Error::config(key, "particle count must be positive"));
                }
                self.particles = n;
            }
            "seed" => self.seed = num(key, value)?,
            "csv" => self.csv_path = Some(PathBuf::from(value)),
            "json" => self.json_path = Some(PathBuf::from(value)),
            "svg" => self.svg_path = Some(PathBuf::from(value)),
            other => return Err(Error::config(other, "unknown key")),
        }
        Ok(())
    }

    /// Validates the assembled geometry (delegates to the model's rules).
    pub fn validate(&self) -> Result<()> {
        self.params.validate()
    }

    /// Canonical `key=value` form, one assignment per line. Parsing the
    /// result reproduces the config (paths included, when set).
    pub fn render(&self) -> String {
        let mut out = String::new();
        let p = &self.params;
        out.push_str(&format!("radius={}\n", p.atom_radius));
        out.push_str(&format!("orbits={}\n", p.n_orbits));
        out.push_str(&format!("spin_pattern={}\n", p.initial_spin_pattern.as_str()));
        out.push_str(&format!("slit1_lo={}\n", p.slit1_aperture.lo));
        out.push_str(&format!("slit1_hi={}\n", p.slit1_aperture.hi));
        out.push_str(&format!("slit2_lo={}\n", p.slit2_aperture.lo));
        out.push_str(&format!("slit2_hi={}\n", p.slit2_aperture.hi));
        out.push_str(&format!("context={}\n", self.context.as_str()));
        out.push_str(&format!("particles={}\n", self.particles));
        out.push_str(&format!("seed={}\n", self.seed));
        for (key, path) in [
            ("csv", &self.csv_path),
            ("json", &self.json_path),
            ("svg", &self.svg_path),
        ] {
            if let Some(path) = path {
                out.push_str(&format!("{}={}\n", key, path.display()));
            }
        }
        out
    }
}

/// Parses `key=value` assignments separated by whitespace or newlines.
/// `#` starts a comment that runs to the end of its line. Absent keys keep
/// their defaults; later assignments override earlier ones.
pub fn parse_config_str(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    apply_config_str(&mut cfg, text)?;
    Ok(cfg)
}

/// Like [`parse_config_str`] but layered on top of an existing config.
pub fn apply_config_str(cfg: &mut RunConfig, text: &str) -> Result<()> {
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("");
        for token in line.split_whitespace() {
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| Error::config(token, "expected key=value"))?;
            cfg.set(key.trim(), value.trim())?;
        }
    }
    Ok(())
}
