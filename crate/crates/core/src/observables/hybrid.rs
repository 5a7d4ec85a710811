use num_complex::Complex64 as C64;

use crate::cavity::{EmitterSpec, NanocavityParams};

/// Complex energies of the two hybrid light–matter states, meV.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HybridStates {
    pub omega_plus: C64,
    pub omega_minus: C64,
}

impl HybridStates {
    /// Re ω̃₊ − Re ω̃₋.
    pub fn splitting(&self) -> f64 {
        self.omega_plus.re - self.omega_minus.re
    }
}

/// ω̃± = (ω̃_e + ω̃_c)/2 ± √(g²(1 − iR) + ((ω̃_e − ω̃_c)/2)²), principal root.
pub fn hybrid_states(omega_e: C64, omega_c: C64, g: f64, r: f64) -> HybridStates {
    let mean = (omega_e + omega_c) * 0.5;
    let half = (omega_e - omega_c) * 0.5;
    let root = (C64::new(1.0, -r) * (g * g) + half * half).sqrt();
    HybridStates {
        omega_plus: mean + root,
        omega_minus: mean - root,
    }
}

/// Hybrid states for one emitter, with ω̃_e = ω_QE − iκ_vib,
/// ω̃_cav = ω_cav − iκ_out and R = Im[V]/Re[V].
pub fn hybrid_states_analytic(cav: &NanocavityParams, em: &EmitterSpec, g: f64) -> HybridStates {
    hybrid_states(
        C64::new(em.omega_qe, -em.kappa_vib),
        C64::new(cav.omega_cav, -cav.kappa_out),
        g,
        cav.volume_ratio(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uncoupled_roots() {
        let (e, c) = (C64::new(1400.0, -25.0), C64::new(1390.0, -40.0));
        let h = hybrid_states(e, c, 0.0, 0.3);
        let mut got = [h.omega_plus, h.omega_minus];
        got.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((got[0] - c).norm() < 1e-12 && (got[1] - e).norm() < 1e-12);
    }

    #[test]
    fn resonant_lossless_splitting() {
        let w = C64::new(1401.0, 0.0);
        let h = hybrid_states(w, w, 38.0, 0.0);
        assert!((h.splitting() - 76.0).abs() < 1e-12);
    }

    #[test]
    fn exchange_symmetry() {
        let (e, c) = (C64::new(1410.0, -12.5), C64::new(1401.6, -40.5));
        let a = hybrid_states(e, c, 30.0, 0.1);
        let b = hybrid_states(c, e, 30.0, 0.1);
        assert!((a.omega_plus - b.omega_plus).norm() < 1e-12);
        assert!((a.omega_minus - b.omega_minus).norm() < 1e-12);
    }

    #[test]
    fn defaults_are_strongly_coupled() {
        let cav = NanocavityParams::default();
        let h = hybrid_states_analytic(&cav, &EmitterSpec::default(), 38.66);
        assert!(h.splitting() > 2.0 * 30.0);
        assert!((h.omega_plus.im - h.omega_minus.im).abs() < 1e-9);
    }
}
