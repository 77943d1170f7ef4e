//! Run configuration: a flat TOML subset (tables, strings, numbers).

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;

use coulomb_core::geometry::{FourierMode, PotentialSpec, SurfaceSpec};
use coulomb_core::specfun::TorusModulus;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSection {
    pub genus: u32,
    #[serde(default)]
    pub tau_re: f64,
    #[serde(default = "default_tau_im")]
    pub tau_im: f64,
}

fn default_tau_im() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct PotentialSection {
    #[serde(default = "default_family")]
    pub family: String,
    /// sphere-zonal degree p
    #[serde(default)]
    pub degree: u32,
    /// sphere-zonal amplitude a
    #[serde(default)]
    pub amplitude: f64,
    /// torus-fourier modes: "m,n,re,im" entries separated by ';'
    #[serde(default)]
    pub modes: String,
}

fn default_family() -> String {
    "zero".into()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub n_min: u64,
    pub n_max: u64,
    #[serde(default = "default_step")]
    pub n_step: u64,
    pub grid_resolution: usize,
    #[serde(default)]
    pub output_path: String,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

fn default_step() -> u64 {
    1
}

fn default_seed() -> u64 {
    42
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub surface: SurfaceSection,
    #[serde(default)]
    pub potential: Option<PotentialSection>,
    pub run: RunSection,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let cfg: RunConfig =
            toml::from_str(&text).map_err(|e| CliError::Config(format!("parse: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.surface.genus > 1 {
            return Err(CliError::Config(format!(
                "genus {} unsupported (0 or 1)",
                self.surface.genus
            )));
        }
        if self.surface.genus == 1 && self.surface.tau_im <= 0.0 {
            return Err(CliError::Config("tau_im must be positive".into()));
        }
        let r = &self.run;
        if r.n_min < 2 {
            return Err(CliError::Config(format!("n_min {} < 2", r.n_min)));
        }
        if r.n_max > 2000 {
            return Err(CliError::Config(format!("n_max {} > 2000", r.n_max)));
        }
        if r.n_min > r.n_max {
            return Err(CliError::Config("n_min > n_max".into()));
        }
        if r.n_step == 0 {
            return Err(CliError::Config("n_step must be positive".into()));
        }
        if !(16..=512).contains(&r.grid_resolution) {
            return Err(CliError::Config(format!(
                "grid_resolution {} outside [16, 512]",
                r.grid_resolution
            )));
        }
        Ok(())
    }

    pub fn surface(&self) -> Result<SurfaceSpec> {
        Ok(match self.surface.genus {
            0 => SurfaceSpec::Sphere,
            1 => SurfaceSpec::Torus(
                TorusModulus::new(Complex64::new(self.surface.tau_re, self.surface.tau_im))
                    .map_err(|e| CliError::Config(e.to_string()))?,
            ),
            g => return Err(CliError::Config(format!("genus {g} unsupported"))),
        })
    }

    pub fn potential(&self) -> Result<PotentialSpec> {
        let Some(p) = &self.potential else {
            return Ok(PotentialSpec::Zero);
        };
        match p.family.as_str() {
            "zero" => Ok(PotentialSpec::Zero),
            "sphere-zonal" => {
                if p.degree == 0 {
                    return Err(CliError::Config("sphere-zonal needs degree >= 1".into()));
                }
                Ok(PotentialSpec::SphereZonal { degree: p.degree, amplitude: p.amplitude })
            }
            "torus-fourier" => {
                let mut modes = Vec::new();
                for entry in p.modes.split(';').filter(|s| !s.trim().is_empty()) {
                    let parts: Vec<&str> = entry.split(',').map(str::trim).collect();
                    if parts.len() != 4 {
                        return Err(CliError::Config(format!(
                            "mode '{entry}' must be m,n,re,im"
                        )));
                    }
                    let m: i32 = parts[0]
                        .parse()
                        .map_err(|_| CliError::Config(format!("bad mode index in '{entry}'")))?;
                    let n: i32 = parts[1]
                        .parse()
                        .map_err(|_| CliError::Config(format!("bad mode index in '{entry}'")))?;
                    let re: f64 = parts[2]
                        .parse()
                        .map_err(|_| CliError::Config(format!("bad coefficient in '{entry}'")))?;
                    let im: f64 = parts[3]
                        .parse()
                        .map_err(|_| CliError::Config(format!("bad coefficient in '{entry}'")))?;
                    modes.push(FourierMode { m, n, coeff: Complex64::new(re, im) });
                }
                if modes.is_empty() {
                    return Err(CliError::Config("torus-fourier needs modes".into()));
                }
                Ok(PotentialSpec::TorusFourier(modes))
            }
            other => Err(CliError::Config(format!("unknown potential family '{other}'"))),
        }
    }

    pub fn sweep(&self) -> Vec<u64> {
        (self.run.n_min..=self.run.n_max)
            .step_by(self.run.n_step as usize)
            .collect()
    }

    pub fn tolerance(&self, key: &str, default: f64) -> f64 {
        self.tolerances.get(key).copied().unwrap_or(default)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<RunConfig> {
        let cfg: RunConfig =
            toml::from_str(text).map_err(|e| CliError::Config(format!("parse: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    #[test]
    fn minimal_config_parses() {
        let cfg = parse(
            "[surface]\ngenus = 0\n[run]\nn_min = 2\nn_max = 100\ngrid_resolution = 64\n",
        )
        .unwrap();
        assert_eq!(cfg.sweep().len(), 99);
        assert!(matches!(cfg.surface().unwrap(), SurfaceSpec::Sphere));
        assert!(matches!(cfg.potential().unwrap(), PotentialSpec::Zero));
    }

    #[test]
    fn invariants_rejected() {
        assert!(parse("[surface]\ngenus = 0\n[run]\nn_min = 1\nn_max = 10\ngrid_resolution = 64\n").is_err());
        assert!(parse("[surface]\ngenus = 0\n[run]\nn_min = 2\nn_max = 4000\ngrid_resolution = 64\n").is_err());
        assert!(parse("[surface]\ngenus = 0\n[run]\nn_min = 2\nn_max = 10\ngrid_resolution = 8\n").is_err());
        assert!(parse("[surface]\ngenus = 1\ntau_im = 0.0\n[run]\nn_min = 2\nn_max = 10\ngrid_resolution = 64\n").is_err());
    }

    #[test]
    fn torus_fourier_modes_parse() {
        let cfg = parse(
            "[surface]\ngenus = 1\ntau_im = 1.0\n\
             [potential]\nfamily = \"torus-fourier\"\nmodes = \"1,0,0.05,0.0; 0,1,0.02,-0.01\"\n\
             [run]\nn_min = 2\nn_max = 50\ngrid_resolution = 64\n",
        )
        .unwrap();
        match cfg.potential().unwrap() {
            PotentialSpec::TorusFourier(modes) => {
                assert_eq!(modes.len(), 2);
                assert_eq!(modes[1].n, 1);
                assert_eq!(modes[1].coeff, Complex64::new(0.02, -0.01));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn tolerance_lookup_with_default() {
        let cfg = parse(
            "[surface]\ngenus = 0\n[run]\nn_min = 2\nn_max = 10\ngrid_resolution = 64\n\
             [tolerances]\n\"torus-exactness\" = 1e-12\n",
        )
        .unwrap();
        assert_eq!(cfg.tolerance("torus-exactness", 1e-10), 1e-12);
        assert_eq!(cfg.tolerance("missing", 0.5), 0.5);
    }
}
