use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::operators::{BasisState, DensityMatrix, HilbertSpec};

/// Pure initial states used by time-domain runs.
#[derive(Clone, Debug, PartialEq)]
pub enum InitialState {
    /// |0, g…g⟩
    Ground,
    /// |1, g…g⟩
    Photon,
    /// |0, e_j⟩ for emitter j (1-based)
    Emitter(usize),
    /// Normalised superposition of basis states with at most one excitation.
    Custom(Vec<(BasisState, C64)>),
}

impl InitialState {
    pub fn density(&self, spec: HilbertSpec) -> Result<DensityMatrix> {
        match self {
            Self::Ground => Ok(DensityMatrix::ground(spec)),
            Self::Photon => DensityMatrix::basis_state(spec, &BasisState::new(1, &[])),
            Self::Emitter(j) => {
                spec.check_emitter(*j)?;
                DensityMatrix::basis_state(spec, &BasisState::new(0, &[*j]))
            }
            Self::Custom(amps) => {
                let mut psi = vec![C64::new(0.0, 0.0); spec.dim()];
                for (s, c) in amps {
                    if s.excitations() > 1 {
                        return Err(Error::InvalidState(format!(
                            "custom amplitude on {s:?} has more than one excitation"
                        )));
                    }
                    let i = spec
                        .index_of(s)
                        .ok_or_else(|| Error::InvalidState(format!("{s:?} is not part of the space")))?;
                    psi[i] += *c;
                }
                DensityMatrix::pure(spec, &psi)
            }
        }
    }

    /// Total excitation number bound of the state.
    pub fn max_excitations(&self) -> usize {
        match self {
            Self::Ground => 0,
            _ => 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_initial_states() {
        let spec = HilbertSpec::new(2, 2).unwrap().with_sector_cap(1);
        assert!((InitialState::Photon.density(spec).unwrap().population(&BasisState::new(1, &[])) - 1.0).abs() < 1e-15);
        assert!((InitialState::Emitter(2).density(spec).unwrap().population(&BasisState::new(0, &[2])) - 1.0).abs() < 1e-15);
        assert!(InitialState::Emitter(3).density(spec).is_err());
    }

    #[test]
    fn custom_superposition_is_normalised() {
        let spec = HilbertSpec::new(1, 2).unwrap();
        let s = InitialState::Custom(vec![
            (BasisState::new(0, &[1]), C64::new(1.0, 0.0)),
            (BasisState::new(0, &[2]), C64::new(-1.0, 0.0)),
        ]);
        let rho = s.density(spec).unwrap();
        assert!((rho.population(&BasisState::new(0, &[1])) - 0.5).abs() < 1e-15);
        let bad = InitialState::Custom(vec![(BasisState::new(1, &[1]), C64::new(1.0, 0.0))]);
        assert!(bad.density(spec).is_err());
    }
}
