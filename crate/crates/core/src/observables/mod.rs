//! Measurable quantities computed from states and trajectories.

mod expectation;
mod extinction;
mod hybrid;
mod populations;
mod rabi;
mod series;

pub use expectation::{expectation, expectation_dense};
pub use extinction::{extinction_driven, extinction_empty, empty_cavity_field};
pub use hybrid::{hybrid_states, hybrid_states_analytic, HybridStates};
pub use populations::{bright_dark_populations, single_excitation_population, BrightDark};
pub use rabi::{fit_exponential_decay, rabi_frequency, DecayFit, RabiEstimate, RABI_NOISE_FLOOR};
pub use series::{TimeSeries, CH_IM_A, CH_PHOTON, CH_P_A, CH_P_BRIGHT, CH_P_DARK, CH_P_S, CH_RE_A};
