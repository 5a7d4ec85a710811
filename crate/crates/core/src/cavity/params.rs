use crate::error::{Error, Result};
use crate::units::thz_to_mev;

/// Resonance frequency of the (1,0) gap mode, THz.
pub const DEFAULT_OMEGA_CAV_THZ: f64 = 338.9;
/// Loss rate of the (1,0) gap mode, THz.
pub const DEFAULT_KAPPA_OUT_THZ: f64 = 9.8;
/// Re[V] of the gap mode, nm³.
pub const DEFAULT_MODE_VOLUME_RE: f64 = 60.01;
/// Relative permittivity of the n = 2.5 spacer.
pub const DEFAULT_EPSILON: f64 = 6.25;
/// On-resonance classical extinction cross-section, nm².
///
/// No numeric value is published for the reference geometry; this is an
/// order-of-magnitude figure for a 40 nm gold nanoparticle on a mirror.
/// It only sets κ_in and therefore the absolute scale of the drive.
pub const DEFAULT_SIGMA_EXT: f64 = 1.0e4;
/// Cy5 transition dipole, Debye.
pub const DEFAULT_DIPOLE_DEBYE: f64 = 10.1;
/// Cy5 dephasing rate, meV.
pub const DEFAULT_KAPPA_VIB: f64 = 25.0;

/// Single lossy cavity mode with complex eigenfrequency ω_cav − iκ_out.
#[derive(Clone, Debug, PartialEq)]
pub struct NanocavityParams {
    /// Resonance energy, meV.
    pub omega_cav: f64,
    /// Field (half-width) decay rate, meV. Energy decays at 2κ_out.
    pub kappa_out: f64,
    /// Re[V], nm³.
    pub mode_volume_re: f64,
    /// Im[V], nm³.
    pub mode_volume_im: f64,
    /// Relative permittivity of the medium hosting the emitters.
    pub epsilon: f64,
    /// Classical on-resonance extinction cross-section, nm².
    pub sigma_ext_classical: f64,
    /// When set, replaces the mode-volume prefactor: g(r) = g0 · u(r).
    pub g0_override: Option<f64>,
}

impl Default for NanocavityParams {
    fn default() -> Self {
        Self {
            omega_cav: thz_to_mev(DEFAULT_OMEGA_CAV_THZ),
            kappa_out: thz_to_mev(DEFAULT_KAPPA_OUT_THZ),
            mode_volume_re: DEFAULT_MODE_VOLUME_RE,
            mode_volume_im: 0.0,
            epsilon: DEFAULT_EPSILON,
            sigma_ext_classical: DEFAULT_SIGMA_EXT,
            g0_override: None,
        }
    }
}

impl NanocavityParams {
    pub fn validate(&self) -> Result<()> {
        positive("kappa_out", self.kappa_out)?;
        positive("mode_volume_re", self.mode_volume_re)?;
        positive("sigma_ext_classical", self.sigma_ext_classical)?;
        finite("omega_cav", self.omega_cav)?;
        finite("mode_volume_im", self.mode_volume_im)?;
        if !(self.epsilon >= 1.0) || !self.epsilon.is_finite() {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                value: self.epsilon,
                reason: "must be >= 1",
            });
        }
        if let Some(g0) = self.g0_override {
            if !(g0 >= 0.0) || !g0.is_finite() {
                return Err(Error::InvalidParameter {
                    name: "g0",
                    value: g0,
                    reason: "must be finite and >= 0",
                });
            }
        }
        Ok(())
    }

    /// R = Im[V] / Re[V].
    pub fn volume_ratio(&self) -> f64 {
        self.mode_volume_im / self.mode_volume_re
    }
}

/// Two-level quantum emitter.
#[derive(Clone, Debug, PartialEq)]
pub struct EmitterSpec {
    /// Transition energy, meV.
    pub omega_qe: f64,
    /// Pure-dephasing rate, meV.
    pub kappa_vib: f64,
    /// Transition dipole, Debye (taken parallel to the mode field).
    pub dipole: f64,
    /// In-plane position (x, y), nm, relative to the gap centre.
    pub position: (f64, f64),
}

impl EmitterSpec {
    /// Cy5-like emitter resonant with the default cavity, at `(x, y)`.
    pub fn at(x: f64, y: f64) -> Self {
        Self {
            omega_qe: thz_to_mev(DEFAULT_OMEGA_CAV_THZ),
            kappa_vib: DEFAULT_KAPPA_VIB,
            dipole: DEFAULT_DIPOLE_DEBYE,
            position: (x, y),
        }
    }

    pub fn radius(&self) -> f64 {
        self.position.0.hypot(self.position.1)
    }

    pub fn validate(&self) -> Result<()> {
        finite("omega_qe", self.omega_qe)?;
        if !(self.kappa_vib >= 0.0) || !self.kappa_vib.is_finite() {
            return Err(Error::InvalidParameter {
                name: "kappa_vib",
                value: self.kappa_vib,
                reason: "must be >= 0",
            });
        }
        positive("dipole", self.dipole)?;
        finite("x", self.position.0)?;
        finite("y", self.position.1)
    }
}

impl Default for EmitterSpec {
    fn default() -> Self {
        Self::at(0.0, 0.0)
    }
}

/// Coherent monochromatic drive of the cavity mode.
#[derive(Clone, Debug, PartialEq)]
pub struct DriveSpec {
    /// Drive frequency, meV; also the rotating-frame reference.
    pub omega_p: f64,
    /// Coherent amplitude (real, ≥ 0). √κ_in·α is in meV.
    pub alpha: f64,
    /// In-coupling rate, meV·nm³/fs (see [`in_coupling`](super::in_coupling)).
    pub kappa_in: f64,
}

impl DriveSpec {
    pub fn validate(&self) -> Result<()> {
        finite("omega_p", self.omega_p)?;
        if !(self.alpha >= 0.0) || !self.alpha.is_finite() {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: self.alpha,
                reason: "must be >= 0",
            });
        }
        if !(self.kappa_in >= 0.0) || !self.kappa_in.is_finite() {
            return Err(Error::InvalidParameter {
                name: "kappa_in",
                value: self.kappa_in,
                reason: "must be >= 0",
            });
        }
        Ok(())
    }

    /// Drive strength √κ_in·α in meV.
    pub fn strength(&self) -> f64 {
        self.kappa_in.sqrt() * self.alpha
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value: v,
            reason: "must be > 0",
        })
    }
}

fn finite(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value: v,
            reason: "must be finite",
        })
    }
}
