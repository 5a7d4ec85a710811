use num_complex::Complex64 as C64;

use crate::cavity::{EmitterSpec, NanocavityParams, SystemParams};
use crate::error::{Error, Result};
use crate::operators::{
    annihilation, pauli, CsrMatrix, HilbertSpec, Operator, PauliKind, SuperOperator,
};
use crate::units::HBAR_MEV_FS;

/// How the emitter dephasing rate enters the σ_z dissipator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum DephasingConvention {
    /// κ_vib σ_z ρ σ_z − (κ_vib/2){σ_z², ρ}: coherences decay at 2κ_vib.
    #[default]
    Literal,
    /// (κ_vib/2) σ_z ρ σ_z − (κ_vib/4){σ_z², ρ}: coherences decay at κ_vib.
    HalfRate,
}

impl DephasingConvention {
    /// Prefactor γ of γ(σ_z ρ σ_z − ρ).
    pub fn sandwich_rate(self, kappa_vib: f64) -> f64 {
        match self {
            Self::Literal => kappa_vib,
            Self::HalfRate => 0.5 * kappa_vib,
        }
    }

    /// Decay rate of an emitter's optical coherence ⟨σ_−⟩ from dephasing alone.
    pub fn coherence_decay(self, kappa_vib: f64) -> f64 {
        2.0 * self.sandwich_rate(kappa_vib)
    }
}

/// Generator of the master equation, dρ/dt = L ρ / ħ, stored in meV.
#[derive(Clone, Debug, PartialEq)]
pub struct Liouvillian {
    spec: HilbertSpec,
    superop: SuperOperator,
}

/// Largest |H − H†| accepted as Hermitian.
const HAMILTONIAN_HERMITIAN_TOL: f64 = 1e-10;

/// L(ρ) = −i[H, ρ] + 2κ_out aρa† − κ_out{a†a, ρ} + Σ_j γ_j(σ_z^(j) ρ σ_z^(j) − ρ).
pub fn build_liouvillian(
    h: &Operator,
    cav: &NanocavityParams,
    emitters: &[EmitterSpec],
    convention: DephasingConvention,
) -> Result<Liouvillian> {
    let spec = h.spec();
    if spec.n_emitters() != emitters.len() {
        return Err(Error::DimensionMismatch {
            expected: spec.n_emitters(),
            found: emitters.len(),
        });
    }
    let herr = h.hermiticity_error();
    if herr > HAMILTONIAN_HERMITIAN_TOL {
        return Err(Error::InvalidParameter {
            name: "hamiltonian",
            value: herr,
            reason: "H is not Hermitian",
        });
    }
    let minus_i = C64::new(0.0, -1.0);
    let mut l = SuperOperator::left(h)
        .add(&SuperOperator::right(h).scale(C64::new(-1.0, 0.0)))?
        .scale(minus_i);

    let a = annihilation(spec)?;
    let n = Operator::number(spec);
    let k = cav.kappa_out;
    l = l.add(&SuperOperator::sandwich(&a, &a.dagger())?.scale(C64::new(2.0 * k, 0.0)))?;
    l = l.add(&SuperOperator::left(&n).add(&SuperOperator::right(&n))?.scale(C64::new(-k, 0.0)))?;

    let d2 = spec.dim() * spec.dim();
    let mut total_rate = 0.0;
    for (j, em) in emitters.iter().enumerate() {
        let gamma = convention.sandwich_rate(em.kappa_vib);
        if gamma == 0.0 {
            continue;
        }
        let sz = pauli(spec, PauliKind::Z, j + 1)?;
        l = l.add(&SuperOperator::sandwich(&sz, &sz)?.scale(C64::new(gamma, 0.0)))?;
        total_rate += gamma;
    }
    if total_rate != 0.0 {
        let shift = CsrMatrix::identity(d2).scale(C64::new(-total_rate, 0.0));
        l = l.add(&SuperOperator::from_matrix(spec, shift)?)?;
    }
    Ok(Liouvillian { spec, superop: l })
}

impl Liouvillian {
    /// Builds H from `sys` on `spec` and the corresponding generator.
    pub fn from_system(sys: &SystemParams, spec: HilbertSpec, convention: DephasingConvention) -> Result<Self> {
        let h = sys.hamiltonian(spec)?;
        build_liouvillian(&h, &sys.cavity, &sys.emitters, convention)
    }

    pub fn spec(&self) -> HilbertSpec {
        self.spec
    }

    pub fn superop(&self) -> &SuperOperator {
        &self.superop
    }

    /// Hilbert-space dimension D (the superoperator is D² × D²).
    pub fn dim(&self) -> usize {
        self.spec.dim()
    }

    /// L / ħ in 1/fs.
    pub fn generator_per_fs(&self) -> CsrMatrix {
        self.superop.matrix().scale(C64::new(1.0 / HBAR_MEV_FS, 0.0))
    }

    /// L vec(ρ), meV.
    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        self.superop.apply(v)
    }
}
