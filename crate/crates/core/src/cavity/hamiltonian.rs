use num_complex::Complex64 as C64;

use super::coupling::coupling_strength;
use super::params::{DriveSpec, EmitterSpec, NanocavityParams};
use super::profile::ModeProfile;
use crate::error::{Error, Result};
use crate::operators::{annihilation, pauli, HilbertSpec, Operator, PauliKind};

/// Rotating-frame reference: the drive frequency when driven, otherwise the
/// first emitter's transition (the cavity resonance when there are none).
pub fn frame_frequency(cav: &NanocavityParams, emitters: &[EmitterSpec], drive: Option<&DriveSpec>) -> f64 {
    match (drive, emitters.first()) {
        (Some(d), _) => d.omega_p,
        (None, Some(e)) => e.omega_qe,
        (None, None) => cav.omega_cav,
    }
}

/// Driven Tavis–Cummings Hamiltonian in the frame rotating at ω_p:
///
/// H = Δ_cav a†a + Σ_j ½Δ_d^(j) σ_z^(j) + Σ_j g_j (a†σ_−^(j) + aσ_+^(j))
///     + i√κ_in α (a − a†)
pub fn build_hamiltonian(
    spec: HilbertSpec,
    cav: &NanocavityParams,
    emitters: &[EmitterSpec],
    profile: &ModeProfile,
    drive: Option<&DriveSpec>,
) -> Result<Operator> {
    let g = emitters
        .iter()
        .map(|em| coupling_strength(cav, em, profile))
        .collect::<Result<Vec<_>>>()?;
    build_hamiltonian_with_couplings(spec, cav, emitters, &g, drive)
}

/// As [`build_hamiltonian`] with the couplings given directly (meV).
pub fn build_hamiltonian_with_couplings(
    spec: HilbertSpec,
    cav: &NanocavityParams,
    emitters: &[EmitterSpec],
    couplings: &[f64],
    drive: Option<&DriveSpec>,
) -> Result<Operator> {
    if spec.n_emitters() != emitters.len() {
        return Err(Error::DimensionMismatch {
            expected: spec.n_emitters(),
            found: emitters.len(),
        });
    }
    if couplings.len() != emitters.len() {
        return Err(Error::DimensionMismatch {
            expected: emitters.len(),
            found: couplings.len(),
        });
    }
    let omega_ref = frame_frequency(cav, emitters, drive);
    let a = annihilation(spec)?;
    let ad = a.dagger();

    let mut h = &Operator::number(spec) * (cav.omega_cav - omega_ref);
    for (j, (em, &g)) in emitters.iter().zip(couplings).enumerate() {
        let j = j + 1;
        let sz = pauli(spec, PauliKind::Z, j)?;
        h = &h + &(&sz * (0.5 * (em.omega_qe - omega_ref)));
        if g != 0.0 {
            let sm = pauli(spec, PauliKind::Minus, j)?;
            let hop = &ad * &sm;
            h = &h + &(&(&hop + &hop.dagger()) * g);
        }
    }
    if let Some(d) = drive {
        let s = d.strength();
        if s != 0.0 {
            h = &h + &(&(&a - &ad) * C64::new(0.0, s));
        }
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn resonant(n: usize) -> (NanocavityParams, Vec<EmitterSpec>) {
        (NanocavityParams::default(), vec![EmitterSpec::at(0.0, 0.0); n])
    }

    fn eigenvalues(h: &Operator) -> Vec<f64> {
        let m: DMatrix<C64> = h.to_dense();
        let mut v: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    #[test]
    fn uncoupled_undriven_is_diagonal() {
        let (cav, ems) = resonant(2);
        let spec = HilbertSpec::new(2, 2).unwrap();
        let h = build_hamiltonian_with_couplings(spec, &cav, &ems, &[0.0, 0.0], None).unwrap();
        assert!(h.matrix().is_diagonal());
    }

    #[test]
    fn jaynes_cummings_doublet() {
        let (cav, ems) = resonant(1);
        let g = 38.0;
        let spec = HilbertSpec::new(1, 1).unwrap().with_sector_cap(1);
        let h = build_hamiltonian_with_couplings(spec, &cav, &ems, &[g], None).unwrap();
        let ev = eigenvalues(&h);
        // resonant frame: the ground state sits at 0, the doublet at ±g
        assert_eq!(ev.len(), 3);
        assert!((ev[0] + g).abs() < 1e-12 && ev[1].abs() < 1e-12 && (ev[2] - g).abs() < 1e-12);
    }

    #[test]
    fn collective_enhancement_two_emitters() {
        let (cav, ems) = resonant(2);
        let g = 30.0;
        let spec = HilbertSpec::new(1, 2).unwrap().with_sector_cap(1);
        let h = build_hamiltonian_with_couplings(spec, &cav, &ems, &[g, g], None).unwrap();
        let ev = eigenvalues(&h);
        let s = 2f64.sqrt() * g;
        assert!((ev[0] + s).abs() < 1e-12, "{ev:?}");
        assert!((ev[ev.len() - 1] - s).abs() < 1e-12);
    }

    #[test]
    fn hermitian_and_excitation_conserving() {
        let cav = NanocavityParams::default();
        let ems = vec![
            EmitterSpec {
                omega_qe: cav.omega_cav + 17.0,
                ..EmitterSpec::at(1.0, 2.0)
            },
            EmitterSpec::at(-3.0, 0.5),
        ];
        let p = ModeProfile::gaussian(6.4).unwrap();
        let spec = HilbertSpec::new(3, 2).unwrap();
        let h = build_hamiltonian(spec, &cav, &ems, &p, None).unwrap();
        assert!(h.hermiticity_error() < 1e-12);
        assert_eq!(h.commutator(&Operator::excitation_number(spec)).max_abs(), 0.0);

        let drive = DriveSpec {
            omega_p: cav.omega_cav - 5.0,
            alpha: 0.3,
            kappa_in: 2.0,
        };
        let h = build_hamiltonian(spec, &cav, &ems, &p, Some(&drive)).unwrap();
        assert!(h.hermiticity_error() < 1e-12);
        assert!(h.commutator(&Operator::excitation_number(spec)).max_abs() > 0.1);
    }

    #[test]
    fn rejects_mismatched_emitter_count() {
        let (cav, ems) = resonant(2);
        let spec = HilbertSpec::new(1, 1).unwrap();
        assert!(build_hamiltonian_with_couplings(spec, &cav, &ems, &[1.0, 1.0], None).is_err());
    }

    #[test]
    fn frame_defaults() {
        let cav = NanocavityParams::default();
        let em = EmitterSpec {
            omega_qe: 1000.0,
            ..Default::default()
        };
        assert_eq!(frame_frequency(&cav, &[em.clone()], None), 1000.0);
        assert_eq!(frame_frequency(&cav, &[], None), cav.omega_cav);
        let d = DriveSpec {
            omega_p: 3.0,
            alpha: 0.0,
            kappa_in: 0.0,
        };
        assert_eq!(frame_frequency(&cav, &[em], Some(&d)), 3.0);
    }
}
