//! Sparse operator algebra on the Fock ⊗ (two-level)^N space.

pub mod density;
pub mod hilbert;
pub mod operator;
pub mod sparse;
pub mod superop;

pub use density::{devectorize, vectorize, DensityMatrix};
pub use hilbert::{sector_project, BasisState, HilbertSpec, SectorMap};
pub use operator::{annihilation, creation, pauli, Operator, PauliKind};
pub use sparse::CsrMatrix;
pub use superop::SuperOperator;
