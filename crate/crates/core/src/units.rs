//! Physical constants and unit conversions.
//!
//! Internal convention: ħ = 1 with energies and rates in meV, times in fs
//! and lengths in nm. A rate `r` in meV corresponds to `r / HBAR_MEV_FS`
//! per femtosecond.

/// ħ in meV·fs.
pub const HBAR_MEV_FS: f64 = 658.211_956_9;

/// Speed of light in nm/fs.
pub const C0_NM_PER_FS: f64 = 299.792_458;

/// Photon energy per unit ordinary frequency, E = h·f, in meV/THz.
pub const MEV_PER_THZ: f64 = 4.135_667_696;

/// Elementary charge (C), also J per eV.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

/// Vacuum permittivity (F/m).
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;

/// Speed of light (m/s).
pub const C0_SI: f64 = 299_792_458.0;

/// One Debye in C·m.
pub const DEBYE: f64 = 1e-21 / C0_SI;

pub fn thz_to_mev(f_thz: f64) -> f64 {
    f_thz * MEV_PER_THZ
}

pub fn mev_to_joule(e_mev: f64) -> f64 {
    e_mev * 1e-3 * ELEMENTARY_CHARGE
}

pub fn joule_to_mev(e_j: f64) -> f64 {
    e_j / ELEMENTARY_CHARGE * 1e3
}

/// Converts a rate or energy in meV to an angular rate in 1/fs.
pub fn mev_to_per_fs(e_mev: f64) -> f64 {
    e_mev / HBAR_MEV_FS
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cavity_resonance_is_near_infrared() {
        // 338.9 THz is λ ≈ 885 nm
        let e = thz_to_mev(338.9);
        let lambda_nm = 2.0 * std::f64::consts::PI * HBAR_MEV_FS * C0_NM_PER_FS / e;
        assert!((lambda_nm - 884.6).abs() < 1.0, "{lambda_nm}");
    }

    #[test]
    fn joule_round_trip() {
        let e = 1401.5;
        assert!((joule_to_mev(mev_to_joule(e)) - e).abs() < 1e-10);
    }
}
