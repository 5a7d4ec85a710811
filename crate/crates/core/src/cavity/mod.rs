//! Physical parameters, coupling strengths and the system Hamiltonian.

mod coupling;
mod hamiltonian;
mod params;
mod profile;

pub use coupling::{
    coupling_prefactor, coupling_strength, drive_for_photon_number, effective_coupling, in_coupling,
};
pub use hamiltonian::{build_hamiltonian, build_hamiltonian_with_couplings, frame_frequency};
pub use params::{
    DriveSpec, EmitterSpec, NanocavityParams, DEFAULT_DIPOLE_DEBYE, DEFAULT_EPSILON, DEFAULT_KAPPA_OUT_THZ,
    DEFAULT_KAPPA_VIB, DEFAULT_MODE_VOLUME_RE, DEFAULT_OMEGA_CAV_THZ, DEFAULT_SIGMA_EXT,
};
pub use profile::{ModeProfile, PROFILE_HEADER};

use crate::error::Result;
use crate::operators::{HilbertSpec, Operator};

/// Boundary radius (nm) at which the default Gaussian profile brings the
/// coupling of a default emitter down to its dephasing rate.
pub const DEFAULT_WEAK_COUPLING_RADIUS: f64 = 6.0;

/// Everything needed to write down the Hamiltonian and dissipators.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemParams {
    pub cavity: NanocavityParams,
    pub emitters: Vec<EmitterSpec>,
    pub profile: ModeProfile,
    pub drive: Option<DriveSpec>,
    /// Multiplies every coupling strength (1 by default).
    pub coupling_scale: f64,
}

impl SystemParams {
    /// Default cavity, the given emitters and the default Gaussian profile.
    pub fn new(emitters: Vec<EmitterSpec>) -> Self {
        let cavity = NanocavityParams::default();
        let profile = default_profile(&cavity);
        Self {
            cavity,
            emitters,
            profile,
            drive: None,
            coupling_scale: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.cavity.validate()?;
        for em in &self.emitters {
            em.validate()?;
        }
        if let Some(d) = &self.drive {
            d.validate()?;
        }
        if !(self.coupling_scale >= 0.0) || !self.coupling_scale.is_finite() {
            return Err(crate::Error::InvalidParameter {
                name: "coupling_scale",
                value: self.coupling_scale,
                reason: "must be finite and >= 0",
            });
        }
        Ok(())
    }

    pub fn n_emitters(&self) -> usize {
        self.emitters.len()
    }

    /// g_j in meV, including `coupling_scale`.
    pub fn couplings(&self) -> Result<Vec<f64>> {
        self.emitters
            .iter()
            .map(|em| coupling_strength(&self.cavity, em, &self.profile).map(|g| g * self.coupling_scale))
            .collect()
    }

    pub fn frame_frequency(&self) -> f64 {
        frame_frequency(&self.cavity, &self.emitters, self.drive.as_ref())
    }

    pub fn hamiltonian(&self, spec: HilbertSpec) -> Result<Operator> {
        build_hamiltonian_with_couplings(spec, &self.cavity, &self.emitters, &self.couplings()?, self.drive.as_ref())
    }

    /// κ_in of the cavity (see [`in_coupling`]).
    pub fn kappa_in(&self) -> f64 {
        in_coupling(&self.cavity)
    }
}

/// Gaussian profile whose coupling for a default emitter falls to the
/// default dephasing rate at [`DEFAULT_WEAK_COUPLING_RADIUS`].
pub fn default_profile(cav: &NanocavityParams) -> ModeProfile {
    let g0 = coupling_prefactor(cav, &EmitterSpec::default());
    ModeProfile::gaussian_crossing(g0, DEFAULT_KAPPA_VIB, DEFAULT_WEAK_COUPLING_RADIUS)
        .unwrap_or(ModeProfile::Gaussian { width: DEFAULT_WEAK_COUPLING_RADIUS })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_profile_width() {
        match default_profile(&NanocavityParams::default()) {
            ModeProfile::Gaussian { width } => assert!((width - 6.424_946_461_681_67).abs() < 1e-9, "{width}"),
            _ => panic!(),
        }
    }

    #[test]
    fn coupling_scale_applies() {
        let mut sys = SystemParams::new(vec![EmitterSpec::at(0.0, 0.0), EmitterSpec::at(6.0, 0.0)]);
        let g = sys.couplings().unwrap();
        assert!((g[1] - DEFAULT_KAPPA_VIB).abs() < 1e-10);
        sys.coupling_scale = 0.5;
        let h = sys.couplings().unwrap();
        assert!((h[0] - 0.5 * g[0]).abs() < 1e-14);
        sys.validate().unwrap();
    }
}
