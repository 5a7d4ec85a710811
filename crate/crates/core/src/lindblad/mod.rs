//! Master-equation generator, time evolution and steady states.

mod evolve;
mod initial;
mod liouvillian;
mod steady;

pub use evolve::{
    evolve, propagator_expm, EvolutionConfig, EvolutionStats, IntegrationMethod, PositivityWarning, Trajectory,
    EXPM_MAX_SUPEROP_DIM, POSITIVITY_WARNING,
};
pub use initial::InitialState;
pub use liouvillian::{build_liouvillian, DephasingConvention, Liouvillian};
pub use steady::{
    steady_state, steady_state_detailed, SteadyState, SteadyStateMethod, STEADY_MAX_SUPEROP_DIM,
    STEADY_RESIDUAL_TOL, STEADY_RATE_TOL,
};
