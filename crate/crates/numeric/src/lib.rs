//! Desk-scale periodic pseudospectral solver for the KP system and
//! diagnostics that cross-validate symbolic conservation laws numerically.

pub mod config;
pub mod diagnostics;
pub mod error;
pub mod field;
pub mod grid;
pub mod pointcheck;
pub mod solver;

pub use config::SimConfig;
pub use diagnostics::{conservation_drift, density_integral, DiagnosticSeries, FuncParams};
pub use error::{Result, SolverError};
pub use field::Field;
pub use grid::Grid;
pub use pointcheck::{random_point_check, PointCheckReport};
pub use solver::{solve_kp, Integrator, KpSolver, SolverConfig, Trajectory};
