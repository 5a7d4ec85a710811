use super::params::{DriveSpec, EmitterSpec, NanocavityParams};
use super::profile::ModeProfile;
use crate::error::{Error, Result};
use crate::units::{joule_to_mev, mev_to_joule, C0_NM_PER_FS, DEBYE, EPSILON_0};

/// Coupling at the field maximum (u = 1), meV:
/// √(ħω_cav / 2ε₀εRe[V]) · d, evaluated in SI units.
///
/// `g0_override` on the cavity replaces this value when present.
pub fn coupling_prefactor(cav: &NanocavityParams, em: &EmitterSpec) -> f64 {
    if let Some(g0) = cav.g0_override {
        return g0;
    }
    let energy_j = mev_to_joule(cav.omega_cav);
    let volume_m3 = cav.mode_volume_re * 1e-27;
    let field = (energy_j / (2.0 * EPSILON_0 * cav.epsilon * volume_m3)).sqrt();
    joule_to_mev(field * em.dipole * DEBYE)
}

/// Coupling strength g(r) of one emitter, meV. Non-negative: the magnitude
/// of u enters, with the dipole taken parallel to the field.
pub fn coupling_strength(cav: &NanocavityParams, em: &EmitterSpec, profile: &ModeProfile) -> Result<f64> {
    let u = profile.eval_at(em.position)?;
    Ok(coupling_prefactor(cav, em) * u.abs())
}

/// κ_in = κ_out c₀ σ_ext / 2, in meV·nm³/fs.
///
/// This choice makes the empty-cavity quantum extinction cross-section
/// equal the classical one on resonance.
pub fn in_coupling(cav: &NanocavityParams) -> f64 {
    cav.kappa_out * C0_NM_PER_FS * cav.sigma_ext_classical / 2.0
}

/// g_E / g₀ = √(Σ_j u(r_j)²).
pub fn effective_coupling(emitters: &[EmitterSpec], profile: &ModeProfile) -> Result<f64> {
    if emitters.is_empty() {
        return Err(Error::TooFewEmitters {
            required: 1,
            found: 0,
        });
    }
    let mut sum = 0.0;
    for em in emitters {
        let u = profile.eval_at(em.position)?;
        sum += u * u;
    }
    Ok(sum.sqrt())
}

/// Drive amplitude that puts `n_ph` photons in the *empty* driven cavity:
/// α = √(N_ph (κ_out² + Δ_cav²) / κ_in), with Δ_cav = ω_cav − ω_p.
pub fn drive_for_photon_number(cav: &NanocavityParams, drive: &DriveSpec, n_ph: f64) -> Result<f64> {
    if !(n_ph >= 0.0) || !n_ph.is_finite() {
        return Err(Error::InvalidParameter {
            name: "photon_number",
            value: n_ph,
            reason: "must be >= 0",
        });
    }
    if !(drive.kappa_in > 0.0) {
        return Err(Error::InvalidParameter {
            name: "kappa_in",
            value: drive.kappa_in,
            reason: "must be > 0 to calibrate a drive",
        });
    }
    let detuning = cav.omega_cav - drive.omega_p;
    Ok((n_ph * (cav.kappa_out.powi(2) + detuning.powi(2)) / drive.kappa_in).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::thz_to_mev;

    /// Coupling prefactor evaluated independently with 30-digit arithmetic for
    /// ω_cav = h·338.9 THz, Re[V] = 60.01 nm³, ε = 2.5², d = 10.1 D, u = 1.
    const G0_REFERENCE_MEV: f64 = 38.664_543_892_539_14;

    #[test]
    fn reference_coupling_constant() {
        let cav = NanocavityParams::default();
        let em = EmitterSpec::at(0.0, 0.0);
        let g = coupling_strength(&cav, &em, &ModeProfile::gaussian(6.0).unwrap()).unwrap();
        assert!((g - G0_REFERENCE_MEV).abs() / G0_REFERENCE_MEV < 1e-12, "{g}");
    }

    #[test]
    fn zero_field_zero_coupling() {
        let p = ModeProfile::tabulated(vec![0.0, 1.0, 2.0], vec![1.0, 0.5, 0.0]).unwrap();
        let em = EmitterSpec::at(2.0, 0.0);
        assert_eq!(coupling_strength(&NanocavityParams::default(), &em, &p).unwrap(), 0.0);
    }

    #[test]
    fn scaling_with_dipole_and_volume() {
        let p = ModeProfile::gaussian(5.0).unwrap();
        let cav = NanocavityParams::default();
        let em = EmitterSpec::at(1.5, 0.5);
        let g = coupling_strength(&cav, &em, &p).unwrap();
        let em2 = EmitterSpec {
            dipole: 2.0 * em.dipole,
            ..em.clone()
        };
        assert!((coupling_strength(&cav, &em2, &p).unwrap() - 2.0 * g).abs() < 1e-12 * g);
        let cav4 = NanocavityParams {
            mode_volume_re: 4.0 * cav.mode_volume_re,
            ..cav.clone()
        };
        assert!((coupling_strength(&cav4, &em, &p).unwrap() - 0.5 * g).abs() < 1e-12 * g);
    }

    #[test]
    fn override_replaces_prefactor() {
        let cav = NanocavityParams {
            g0_override: Some(100.0),
            ..Default::default()
        };
        let p = ModeProfile::gaussian(2.0).unwrap();
        let g = coupling_strength(&cav, &EmitterSpec::at(2.0, 0.0), &p).unwrap();
        assert!((g - 100.0 * (-0.5f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn outside_tabulated_range_is_rejected() {
        let p = ModeProfile::tabulated(vec![0.0, 5.0], vec![1.0, 0.2]).unwrap();
        let err = coupling_strength(&NanocavityParams::default(), &EmitterSpec::at(3.0, 4.5), &p);
        assert!(matches!(err, Err(Error::OutsideProfile { .. })));
    }

    #[test]
    fn in_coupling_linearity() {
        let cav = NanocavityParams::default();
        assert_eq!(
            in_coupling(&NanocavityParams {
                sigma_ext_classical: 0.0,
                ..cav.clone()
            }),
            0.0
        );
        let k = in_coupling(&cav);
        for s in [2.0, 7.5] {
            let a = in_coupling(&NanocavityParams {
                kappa_out: s * cav.kappa_out,
                ..cav.clone()
            });
            let b = in_coupling(&NanocavityParams {
                sigma_ext_classical: s * cav.sigma_ext_classical,
                ..cav.clone()
            });
            assert!((a - s * k).abs() < 1e-9 * k);
            assert!((b - s * k).abs() < 1e-9 * k);
        }
    }

    #[test]
    fn effective_coupling_limits() {
        let p = ModeProfile::gaussian(6.4).unwrap();
        let x = 3.0;
        let pair = [EmitterSpec::at(-x, 0.0), EmitterSpec::at(x, 0.0)];
        let u = p.eval(x).unwrap();
        assert!((effective_coupling(&pair, &p).unwrap() - 2f64.sqrt() * u).abs() < 1e-14);

        let far = [EmitterSpec::at(0.0, 0.0), EmitterSpec::at(200.0, 0.0)];
        assert!((effective_coupling(&far, &p).unwrap() - 1.0).abs() < 1e-12);

        let eight = vec![EmitterSpec::at(0.0, 0.0); 8];
        assert!((effective_coupling(&eight, &p).unwrap() - 8f64.sqrt()).abs() < 1e-14);
        assert!(effective_coupling(&[], &p).is_err());
    }

    #[test]
    fn effective_coupling_permutation_invariant() {
        let p = ModeProfile::gaussian(6.4).unwrap();
        let a = [EmitterSpec::at(0.0, 1.0), EmitterSpec::at(2.0, 3.0), EmitterSpec::at(-4.0, 0.5)];
        let b = [a[2].clone(), a[0].clone(), a[1].clone()];
        let (ea, eb) = (effective_coupling(&a, &p).unwrap(), effective_coupling(&b, &p).unwrap());
        assert!((ea - eb).abs() < 1e-15);
    }

    #[test]
    fn drive_calibration() {
        let cav = NanocavityParams::default();
        let drive = DriveSpec {
            omega_p: cav.omega_cav,
            alpha: 0.0,
            kappa_in: in_coupling(&cav),
        };
        assert_eq!(drive_for_photon_number(&cav, &drive, 0.0).unwrap(), 0.0);
        let n = 1e-6;
        let alpha = drive_for_photon_number(&cav, &drive, n).unwrap();
        assert!((alpha - cav.kappa_out * (n / drive.kappa_in).sqrt()).abs() < 1e-15 * alpha.max(1.0));
        assert!(drive_for_photon_number(&cav, &drive, -1.0).is_err());
        let no_in = DriveSpec {
            kappa_in: 0.0,
            ..drive
        };
        assert!(drive_for_photon_number(&cav, &no_in, n).is_err());
    }

    #[test]
    fn thz_conversion_of_cavity_loss() {
        assert!((NanocavityParams::default().kappa_out - thz_to_mev(9.8)).abs() < 1e-12);
    }
}
