//! Quantum emitters coupled to a single lossy plasmonic nanocavity mode.
//!
//! The crate is organised bottom-up:
//!
//! * [`operators`] builds sparse operators on the Fock ⊗ (two-level)^N space,
//!   density matrices, and column-stacked superoperators.
//! * [`cavity`] holds the physical parameters, evaluates emitter coupling
//!   strengths from the mode profile and assembles the driven Hamiltonian.
//! * [`lindblad`] builds the Liouvillian and provides time evolution
//!   (fixed-step RK4, adaptive Dormand–Prince, exact propagator) and
//!   steady-state solves.
//! * [`observables`] turns states into measurable numbers: populations,
//!   bright/dark decompositions, extinction cross-sections, Rabi
//!   frequencies and the closed-form hybrid-state energies.
//! * [`sweep`] runs deterministic parallel parameter maps and position
//!   sweeps.
//!
//! Units: ħ = 1 internally, energies and rates in meV, times in fs,
//! lengths in nm. See [`units`].

pub mod cavity;
pub mod error;
pub mod lindblad;
pub mod observables;
pub mod operators;
pub mod sweep;
pub mod units;

pub use cavity::{
    DriveSpec, EmitterSpec, ModeProfile, NanocavityParams, SystemParams,
};
pub use error::{Error, Result};
pub use lindblad::{
    DephasingConvention, EvolutionConfig, InitialState, IntegrationMethod, Liouvillian, Trajectory,
};
pub use observables::{HybridStates, RabiEstimate, TimeSeries};
pub use operators::{DensityMatrix, HilbertSpec, Operator, SuperOperator};
pub use sweep::{AxisKind, Placement, SweepAxis, SweepResult};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
