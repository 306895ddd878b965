use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dynamics::{PhysicsParams, SolverConfig};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::monitor::{FamilyKind, MonitorConfig, ProdiSerrinPair, MIN_FAMILY_SIZE};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub grid: GridSpec,
    pub physics: PhysicsSpec,
    #[serde(default)]
    pub forcing: ForcingSpec,
    pub initial: InitialSpec,
    pub time: TimeSpec,
    #[serde(default)]
    pub monitor: MonitorSpec,
    #[serde(default)]
    pub output: OutputSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub dim: usize,
    pub n: usize,
    #[serde(default = "two_pi")]
    pub length: f64,
}

fn two_pi() -> f64 {
    2.0 * std::f64::consts::PI
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicsSpec {
    pub mu: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    #[serde(default)]
    pub alpha: f64,
    /// Constant gravity vector, one entry per axis.
    pub g: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ForcingPreset {
    #[default]
    None,
    /// `f = A sin(m k y) e_x`.
    Kolmogorov,
    /// `ℓ = A sin(m k x) cos(m k y)`.
    Heating,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForcingSpec {
    #[serde(default)]
    pub preset: ForcingPreset,
    #[serde(default)]
    pub amplitude: f64,
    #[serde(default = "one")]
    pub mode: i64,
}

fn one() -> i64 {
    1
}

impl Default for ForcingSpec {
    fn default() -> Self {
        ForcingSpec {
            preset: ForcingPreset::None,
            amplitude: 0.0,
            mode: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialPreset {
    Zero,
    TaylorGreen,
    SingleMode,
    /// Random spectra for the velocity and both scalars.
    #[serde(alias = "decay", alias = "convection")]
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSpec {
    pub preset: InitialPreset,
    #[serde(default)]
    pub seed: u64,
    /// Velocity amplitude (rms for random spectra).
    #[serde(default = "unit")]
    pub amplitude: f64,
    /// Rms of each random scalar.
    #[serde(default)]
    pub scalar_amplitude: f64,
    /// Spectral decay exponent of random fields.
    #[serde(default = "default_decay")]
    pub spectral_decay: f64,
}

fn unit() -> f64 {
    1.0
}

fn default_decay() -> f64 {
    2.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSpec {
    #[serde(rename = "T")]
    pub t_final: f64,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    #[serde(default = "default_max_dt")]
    pub max_dt: f64,
    #[serde(default = "default_sample_every")]
    pub sample_every: usize,
    #[serde(default = "yes")]
    pub nonlinear: bool,
}

fn default_cfl() -> f64 {
    SolverConfig::default().cfl
}

fn default_max_dt() -> f64 {
    SolverConfig::default().max_dt
}

fn default_sample_every() -> usize {
    SolverConfig::default().sample_every
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum CalibrationSpec {
    None,
    Fresh {
        seed: u64,
        count: usize,
        #[serde(default = "mixed")]
        kind: FamilyKind,
    },
    /// Relative paths resolve against the config file's directory.
    File {
        path: PathBuf,
    },
}

fn mixed() -> FamilyKind {
    FamilyKind::Mixed
}

impl Default for CalibrationSpec {
    fn default() -> Self {
        CalibrationSpec::Fresh {
            seed: 0,
            count: 50,
            kind: FamilyKind::Mixed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonitorSpec {
    #[serde(default = "default_pairs")]
    pub pairs: Vec<ProdiSerrinPair>,
    #[serde(default = "default_eps")]
    pub eps: Vec<f64>,
    #[serde(default = "default_eps_grid")]
    pub eps_grid: Vec<f64>,
    #[serde(default = "default_delta_grid")]
    pub delta_grid: Vec<f64>,
    #[serde(default)]
    pub calibration: CalibrationSpec,
}

fn default_pairs() -> Vec<ProdiSerrinPair> {
    MonitorConfig::default().pairs
}

fn default_eps() -> Vec<f64> {
    MonitorConfig::default().eps
}

fn default_eps_grid() -> Vec<f64> {
    MonitorConfig::default().eps_grid
}

fn default_delta_grid() -> Vec<f64> {
    MonitorConfig::default().delta_grid
}

impl Default for MonitorSpec {
    fn default() -> Self {
        let m = MonitorConfig::default();
        MonitorSpec {
            pairs: m.pairs,
            eps: m.eps,
            eps_grid: m.eps_grid,
            delta_grid: m.delta_grid,
            calibration: CalibrationSpec::default(),
        }
    }
}

impl MonitorSpec {
    pub fn monitor_config(&self) -> MonitorConfig {
        MonitorConfig {
            pairs: self.pairs.clone(),
            eps: self.eps.clone(),
            eps_grid: self.eps_grid.clone(),
            delta_grid: self.delta_grid.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub dir: PathBuf,
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec { dir: "out".into() }
    }
}

/// Command-line overrides applied after parsing.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub output_dir: Option<PathBuf>,
    /// Replaces the initial-condition seed and a fresh calibration seed.
    pub seed: Option<u64>,
}

fn config_err(key: &str, reason: impl std::fmt::Display) -> Error {
    Error::Config {
        key: key.to_string(),
        reason: reason.to_string(),
    }
}

impl RunConfig {
    /// Parses TOML; errors carry the dotted key path.
    pub fn from_toml(text: &str) -> Result<Self> {
        let de = toml::Deserializer::new(text);
        let config: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            config_err(&path, inner.message())
        })?;
        config.validate()?;
        Ok(config)
    }

    /// Reads a config file; a relative calibration file path is resolved
    /// against the file's directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut config = Self::from_toml(&text)?;
        if let CalibrationSpec::File { path: file } = &mut config.monitor.calibration {
            if file.is_relative() {
                if let Some(parent) = path.parent() {
                    *file = parent.join(&*file);
                }
            }
        }
        Ok(config)
    }

    pub fn apply(&mut self, overrides: &Overrides) {
        if let Some(dir) = &overrides.output_dir {
            self.output.dir = dir.clone();
        }
        if let Some(seed) = overrides.seed {
            self.initial.seed = seed;
            if let CalibrationSpec::Fresh { seed: s, .. } = &mut self.monitor.calibration {
                *s = seed;
            }
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        crate::io::to_toml(self)
    }

    pub fn validate(&self) -> Result<()> {
        self.grid().map_err(|e| config_err("grid", e))?;
        self.physics_params().map_err(|e| config_err("physics", e))?;
        if self.physics.g.len() != self.grid.dim {
            return Err(config_err(
                "physics.g",
                format!(
                    "gravity has {} entries on a {}-D grid",
                    self.physics.g.len(),
                    self.grid.dim
                ),
            ));
        }
        let t = &self.time;
        if !(t.t_final >= 0.0 && t.t_final.is_finite()) {
            return Err(config_err(
                "time.T",
                format!("must be finite and >= 0, got {}", t.t_final),
            ));
        }
        if !(t.cfl > 0.0 && t.cfl <= 1.0) {
            return Err(config_err("time.cfl", format!("must lie in (0, 1], got {}", t.cfl)));
        }
        if !(t.max_dt > 0.0) {
            return Err(config_err("time.max_dt", format!("must be positive, got {}", t.max_dt)));
        }
        if t.sample_every == 0 {
            return Err(config_err("time.sample_every", "must be at least 1"));
        }
        if !(self.initial.amplitude.is_finite() && self.initial.scalar_amplitude >= 0.0) {
            return Err(config_err(
                "initial",
                "amplitudes must be finite and scalar_amplitude >= 0",
            ));
        }
        if !self.forcing.amplitude.is_finite() {
            return Err(config_err("forcing.amplitude", "must be finite"));
        }
        self.monitor
            .monitor_config()
            .validate()
            .map_err(|e| config_err("monitor", e))?;
        if let CalibrationSpec::Fresh { count, .. } = self.monitor.calibration {
            if count < MIN_FAMILY_SIZE {
                return Err(config_err(
                    "monitor.calibration.count",
                    format!("family size {count} is below the minimum of {MIN_FAMILY_SIZE}"),
                ));
            }
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.grid.dim, self.grid.n, self.grid.length)
    }

    pub fn physics_params(&self) -> Result<PhysicsParams> {
        let p = &self.physics;
        PhysicsParams::new(p.mu, p.kappa1, p.kappa2, p.alpha, p.g.clone())
    }

    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            cfl: self.time.cfl,
            max_dt: self.time.max_dt,
            sample_every: self.time.sample_every,
            nonlinear: self.time.nonlinear,
            ..SolverConfig::default()
        }
    }
}
