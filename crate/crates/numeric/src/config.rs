//! TOML simulation configuration mirroring the solver types.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SolverError};
use crate::field::Field;
use crate::grid::Grid;
use crate::solver::{random_smooth_field, Integrator, SolverConfig};

fn default_n() -> usize {
    64
}
fn default_l() -> f64 {
    8.0 * std::f64::consts::PI
}
fn default_dt() -> f64 {
    1e-3
}
fn default_t_end() -> f64 {
    1.0
}
fn default_dealias() -> f64 {
    2.0 / 3.0
}
fn default_integrator() -> String {
    "etdrk4".into()
}
fn default_true() -> bool {
    true
}
fn default_stride() -> usize {
    10
}
fn default_kind() -> String {
    "random_smooth".into()
}
fn default_seed() -> u64 {
    42
}
fn default_amplitude() -> f64 {
    0.5
}
fn default_modes() -> u32 {
    4
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default = "default_n")]
    pub nx: usize,
    #[serde(default = "default_n")]
    pub ny: usize,
    #[serde(default = "default_l")]
    pub lx: f64,
    #[serde(default = "default_l")]
    pub ly: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            nx: default_n(),
            ny: default_n(),
            lx: default_l(),
            ly: default_l(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSettings {
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_t_end")]
    pub t_end: f64,
    #[serde(default = "default_dealias")]
    pub dealias: f64,
    #[serde(default = "default_integrator")]
    pub integrator: String,
    #[serde(default = "default_true")]
    pub nonlinear: bool,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            dt: default_dt(),
            t_end: default_t_end(),
            dealias: default_dealias(),
            integrator: default_integrator(),
            nonlinear: true,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialConfig {
    #[serde(default = "default_kind")]
    pub kind: String,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_amplitude")]
    pub amplitude: f64,
    #[serde(default = "default_modes")]
    pub modes: u32,
}

impl Default for InitialConfig {
    fn default() -> Self {
        InitialConfig {
            kind: default_kind(),
            seed: default_seed(),
            amplitude: default_amplitude(),
            modes: default_modes(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_stride")]
    pub stride: usize,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            stride: default_stride(),
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub solver: SolverSettings,
    #[serde(default)]
    pub initial: InitialConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

impl SimConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| SolverError::Config(e.to_string()))
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.grid.nx, self.grid.ny, self.grid.lx, self.grid.ly)
    }

    pub fn solver_config(&self) -> Result<SolverConfig> {
        let integrator = match self.solver.integrator.as_str() {
            "etdrk4" => Integrator::Etdrk4,
            "rk4" => Integrator::Rk4,
            other => {
                return Err(SolverError::Config(format!(
                    "unknown integrator `{other}` (expected etdrk4 or rk4)"
                )))
            }
        };
        let cfg = SolverConfig {
            dt: self.solver.dt,
            t_end: self.solver.t_end,
            dealias: self.solver.dealias,
            integrator,
            nonlinear: self.solver.nonlinear,
            snapshot_stride: self.output.stride,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn initial_field(&self, grid: &Grid) -> Result<Field> {
        match self.initial.kind.as_str() {
            "zero" => Ok(Field::zeros(grid)),
            "cosine" => {
                let amp = self.initial.amplitude;
                let k = 2.0 * std::f64::consts::PI * self.initial.modes.max(1) as f64 / grid.lx;
                let mut f = Field::from_values(grid, |x, _| amp * (k * x).cos());
                f.project(grid);
                Ok(f)
            }
            "random_smooth" => Ok(random_smooth_field(
                grid,
                self.initial.seed,
                self.initial.amplitude,
                self.initial.modes,
            )),
            other => Err(SolverError::Config(format!(
                "unknown initial kind `{other}`"
            ))),
        }
    }
}
