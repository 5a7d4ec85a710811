//! Shared fixtures for the benchmarks under benches/.

use nanoqed_core::cavity::in_coupling;
use nanoqed_core::{DriveSpec, EmitterSpec, HilbertSpec, SystemParams};

/// `n` emitters evenly spread on a ring of radius `r` nm.
pub fn ring(n: usize, r: f64) -> SystemParams {
    let emitters = (0..n)
        .map(|k| {
            let phi = std::f64::consts::TAU * k as f64 / n as f64;
            EmitterSpec::at(r * phi.cos(), r * phi.sin())
        })
        .collect();
    SystemParams::new(emitters)
}

/// [`ring`] driven on the cavity resonance with amplitude `alpha`.
pub fn driven_ring(n: usize, r: f64, alpha: f64) -> SystemParams {
    let mut sys = ring(n, r);
    sys.drive = Some(DriveSpec {
        omega_p: sys.cavity.omega_cav,
        alpha,
        kappa_in: in_coupling(&sys.cavity),
    });
    sys
}

/// Full space with `n_max` photons, or the single-excitation sector.
pub fn space(n_max: usize, n: usize, single_excitation: bool) -> HilbertSpec {
    let spec = HilbertSpec::new(n_max, n).expect("benchmark sizes are valid");
    if single_excitation {
        spec.with_sector_cap(1)
    } else {
        spec
    }
}
