//! Steady-state optomechanical entanglement and mechanical squeezing for a
//! membrane-in-the-middle cavity with linear and quadratic coupling and an
//! instantaneous coherent feedback loop.
//!
//! Pipeline for one parameter set:
//! [`steady_state::solve_mean_field`] → [`feedback::effective_cavity`] →
//! [`dynamics::build_drift`] / [`dynamics::build_diffusion`] →
//! [`dynamics::assess_stability`] → [`dynamics::solve_lyapunov`] →
//! [`measures::log_negativity`] / [`measures::squeezing_degrees`].
//! [`sweep`] runs that pipeline over grids and [`presets`] holds the
//! reference parameter studies.

pub mod constants;
pub mod dynamics;
pub mod error;
pub mod feedback;
pub mod measures;
pub mod membrane;
pub mod params;
pub mod poly;
pub mod presets;
pub mod steady_state;
pub mod sweep;
pub mod trajectory;

pub use error::{Error, Result};
pub use params::{Config, DetuningMode, G1Convention, PhysicalParams};
pub use steady_state::{BranchRule, EffectiveModel, MeanFieldOptions};
pub use sweep::{run_point, run_sweep, OutputFormat, OutputSet, ResultRecord, SweepSpec, SweepTable};
