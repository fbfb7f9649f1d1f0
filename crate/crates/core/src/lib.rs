//! Classical rotor analog of adiabatic unstructured search.
//!
//! `n` planar rotors feel an oracle potential whose unique minimum sits at the
//! marked bitstring. Interpolating between kinetic and potential terms with an
//! annealing schedule drives the rotors from `θ = π/2` to the marked corner in
//! a time that grows like `2^{n/2}`.
//!
//! Modules:
//! - [`dynamics`]: potential, torques, gauge map and equations of motion
//! - [`schedule`]: annealing profiles
//! - [`integrator`]: adaptive integration with first-passage detection
//! - [`analytics`]: runtime formulas and the quantum gap
//! - [`spin`]: small-n checks of the quantum-side formulas
//! - [`experiments`]: runtime scaling and precision-sensitivity sweeps
//! - [`cli`]: command-line front end

pub mod analytics;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod fit;
pub mod integrator;
pub mod quadrature;
pub mod schedule;
pub mod spin;
pub mod verify;

pub use dynamics::{ReducedState, RotorState, SystemSpec};
pub use error::{Error, Result};
pub use integrator::{IntegratorConfig, RunResult, Termination};
pub use schedule::{Schedule, ScheduleKind};
