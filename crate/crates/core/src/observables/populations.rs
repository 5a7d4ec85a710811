use crate::error::{Error, Result};
use crate::operators::{BasisState, DensityMatrix};

/// Bright (symmetric) and dark single-excitation populations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BrightDark {
    /// ⟨S|ρ|S⟩ with |S⟩ = N^{-1/2} Σ_j |0, e_j⟩.
    pub bright: f64,
    /// Zero-photon single-excitation population orthogonal to |S⟩. For two
    /// emitters this is ⟨A|ρ|A⟩.
    pub dark: f64,
}

/// Σ_j ⟨0, e_j|ρ|0, e_j⟩.
pub fn single_excitation_population(rho: &DensityMatrix) -> f64 {
    let n = rho.spec().n_emitters();
    (1..=n).map(|j| rho.population(&BasisState::new(0, &[j]))).sum()
}

pub fn bright_dark_populations(rho: &DensityMatrix) -> Result<BrightDark> {
    let spec = rho.spec();
    let n = spec.n_emitters();
    if n < 2 {
        return Err(Error::TooFewEmitters {
            required: 2,
            found: n,
        });
    }
    let idx: Vec<usize> = (1..=n)
        .map(|j| {
            spec.index_of(&BasisState::new(0, &[j]))
                .ok_or_else(|| Error::InvalidSpec("single-excitation states are not in the space".into()))
        })
        .collect::<Result<_>>()?;
    let m = rho.matrix();
    let mut sum = 0.0;
    let mut diag = 0.0;
    for &i in &idx {
        diag += m[(i, i)].re;
        for &k in &idx {
            sum += m[(i, k)].re;
        }
    }
    let bright = sum / n as f64;
    Ok(BrightDark {
        bright,
        dark: diag - bright,
    })
}
