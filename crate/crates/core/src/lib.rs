//! One-dimensional relativistic electrostatic electron-positron fluid
//! simulator with self-consistent Schwinger pair creation.
//!
//! Ions form a fixed neutralizing background. Electrons and positrons are
//! cold relativistic fluids; pairs are created at the local Schwinger rate
//! and, optionally, at slightly displaced positions so that the energy of
//! each new pair is drawn from the electrostatic field.
//!
//! - [`physics`]: pointwise rate and gamma kernels, normalized constants.
//! - [`grid`]: periodic grid, fourth-order stencils, Gauss-law field.
//! - [`solver`]: right-hand side, RK4 step, initial conditions.
//! - [`diagnostics`]: energies, pair count, constraint residuals.
//! - [`config`], [`output`], [`simulation`]: run description, CSV files
//!   and the driver.

pub mod config;
pub mod diagnostics;
pub mod error;
pub mod grid;
pub mod output;
pub mod physics;
pub mod selfcheck;
pub mod simulation;
pub mod solver;

pub use config::{parse_config, RunConfig};
pub use diagnostics::SeriesRecord;
pub use error::{Error, Result};
pub use grid::{Field, Grid1D};
pub use physics::PhysicsParams;
pub use simulation::{run, run_with, RunOutput};
pub use solver::{rhs, rk4_step, InitialCondition, SimState, SolverOptions, TimeStep};
