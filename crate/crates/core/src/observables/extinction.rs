use num_complex::Complex64 as C64;

use super::expectation::expectation;
use crate::cavity::{DriveSpec, NanocavityParams};
use crate::error::{Error, Result};
use crate::operators::{annihilation, DensityMatrix};
use crate::units::C0_NM_PER_FS;

/// Quantum extinction cross-section of the empty cavity, nm²:
/// σ = 2κ_in κ_out / (c₀ (κ_out² + Δ_cav²)).
pub fn extinction_empty(cav: &NanocavityParams, drive: &DriveSpec) -> f64 {
    let detuning = cav.omega_cav - drive.omega_p;
    2.0 * drive.kappa_in * cav.kappa_out / (C0_NM_PER_FS * (cav.kappa_out.powi(2) + detuning.powi(2)))
}

/// Steady-state ⟨a⟩ of the empty driven cavity, −√κ_in α / (κ_out + iΔ_cav).
pub fn empty_cavity_field(cav: &NanocavityParams, drive: &DriveSpec) -> C64 {
    let detuning = cav.omega_cav - drive.omega_p;
    -drive.strength() / C64::new(cav.kappa_out, detuning)
}

/// σ = −2√κ_in Re⟨a⟩ / (c₀ α) from a driven steady state, nm².
pub fn extinction_driven(rho_ss: &DensityMatrix, drive: &DriveSpec) -> Result<f64> {
    if !(drive.alpha > 0.0) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: drive.alpha,
            reason: "the driven extinction needs a non-zero drive",
        });
    }
    let a = expectation(&annihilation(rho_ss.spec())?, rho_ss)?;
    Ok(-2.0 * drive.kappa_in.sqrt() * a.re / (C0_NM_PER_FS * drive.alpha))
}
