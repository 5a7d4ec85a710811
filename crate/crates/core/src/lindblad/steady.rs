use faer::prelude::*;
use faer::sparse::{SparseColMat, Triplet};
use num_complex::Complex64 as C64;

use super::evolve::{evolve, hermitize_vec, EvolutionConfig, IntegrationMethod};
use super::liouvillian::Liouvillian;
use crate::error::{Error, Result};
use crate::operators::DensityMatrix;
use crate::units::HBAR_MEV_FS;

/// Largest superoperator dimension D² handled by the sparse solve.
pub const STEADY_MAX_SUPEROP_DIM: usize = 20_000_000;
/// Accepted ‖L vec(ρ)‖∞ after the direct solve, meV.
pub const STEADY_RESIDUAL_TOL: f64 = 1e-10;
/// Convergence threshold ‖dρ/dt‖∞ of the evolution fallback, 1/fs.
pub const STEADY_RATE_TOL: f64 = 1e-12;
/// Give up the evolution fallback after this long, fs.
const FALLBACK_T_MAX: f64 = 1e6;
const FALLBACK_CHUNK: f64 = 250.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SteadyStateMethod {
    SparseLu,
    Evolution,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SteadyState {
    pub rho: DensityMatrix,
    /// ‖L vec(ρ)‖∞ in meV.
    pub residual: f64,
    pub method: SteadyStateMethod,
}

/// Solves L vec(ρ) = 0 with Tr ρ = 1.
pub fn steady_state(l: &Liouvillian) -> Result<DensityMatrix> {
    steady_state_detailed(l).map(|s| s.rho)
}

/// As [`steady_state`], also reporting the residual and how it was found.
///
/// The first row of L is replaced by the trace functional and the system is
/// solved by sparse LU. When that fails or leaves a residual above
/// [`STEADY_RESIDUAL_TOL`], the state is instead relaxed by time evolution
/// until ‖dρ/dt‖∞ < [`STEADY_RATE_TOL`].
pub fn steady_state_detailed(l: &Liouvillian) -> Result<SteadyState> {
    let n = l.superop().dim();
    if n > STEADY_MAX_SUPEROP_DIM {
        return Err(Error::SizeGuard {
            what: "superoperator dimension for the steady-state solve",
            size: n,
            limit: STEADY_MAX_SUPEROP_DIM,
        });
    }
    match direct_solve(l) {
        Ok((v, residual)) if residual < STEADY_RESIDUAL_TOL => Ok(SteadyState {
            rho: DensityMatrix::devectorize(l.spec(), &v)?,
            residual,
            method: SteadyStateMethod::SparseLu,
        }),
        Ok((_, residual)) => {
            log::warn!("sparse steady-state residual {residual:e} meV; relaxing by time evolution");
            relax(l)
        }
        Err(e) => {
            log::warn!("sparse steady-state solve failed ({e}); relaxing by time evolution");
            relax(l)
        }
    }
}

fn direct_solve(l: &Liouvillian) -> Result<(Vec<C64>, f64)> {
    let d = l.dim();
    let n = d * d;
    let mut triplets: Vec<Triplet<usize, usize, C64>> = l
        .superop()
        .matrix()
        .iter()
        .filter(|&(r, _, _)| r != 0)
        .map(|(r, c, v)| Triplet::new(r, c, v))
        .collect();
    triplets.extend((0..d).map(|i| Triplet::new(0, i * d + i, C64::new(1.0, 0.0))));
    let m = SparseColMat::<usize, C64>::try_new_from_triplets(n, n, &triplets)
        .map_err(|e| Error::SteadyState(format!("assembly: {e:?}")))?;
    let lu = m
        .sp_lu()
        .map_err(|e| Error::SteadyState(format!("factorisation: {e:?}")))?;
    let mut rhs = Mat::<C64>::zeros(n, 1);
    rhs[(0, 0)] = C64::new(1.0, 0.0);
    let x = lu.solve(&rhs);
    let mut v: Vec<C64> = (0..n).map(|i| x[(i, 0)]).collect();
    if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::SteadyState("non-finite solution".into()));
    }
    normalise(&mut v, d);
    let residual = max_norm(&l.apply(&v)?);
    Ok((v, residual))
}

fn normalise(v: &mut [C64], d: usize) {
    hermitize_vec(v, d);
    let tr: C64 = (0..d).map(|i| v[i * d + i]).sum();
    for z in v.iter_mut() {
        *z /= tr;
    }
}

fn max_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn relax(l: &Liouvillian) -> Result<SteadyState> {
    let d = l.dim();
    let mut rho = DensityMatrix::ground(l.spec());
    let cfg = EvolutionConfig {
        t_max: FALLBACK_CHUNK,
        dt_initial: 0.05,
        method: IntegrationMethod::Rk45Adaptive,
        rel_tol: 1e-12,
        abs_tol: 1e-15,
        record_stride: (FALLBACK_CHUNK / 0.05) as usize,
    };
    let mut t = 0.0;
    while t < FALLBACK_T_MAX {
        let tr = evolve(l, &rho, &cfg)?;
        rho = tr.states.into_iter().last().expect("at least one record");
        t += FALLBACK_CHUNK;
        let mut v = rho.vectorize();
        normalise(&mut v, d);
        rho = DensityMatrix::devectorize(l.spec(), &v)?;
        let residual = max_norm(&l.apply(&v)?);
        if residual / HBAR_MEV_FS < STEADY_RATE_TOL {
            return Ok(SteadyState {
                rho,
                residual,
                method: SteadyStateMethod::Evolution,
            });
        }
    }
    Err(Error::SteadyState(format!(
        "no convergence after {FALLBACK_T_MAX} fs of relaxation"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cavity::{in_coupling, DriveSpec, EmitterSpec, NanocavityParams, SystemParams};
    use crate::lindblad::DephasingConvention;
    use crate::operators::{annihilation, HilbertSpec, Operator};

    #[test]
    fn empty_driven_cavity_photon_number() {
        let cav = NanocavityParams::default();
        let kin = in_coupling(&cav);
        for detuning in [-80.0, 0.0, 25.0] {
            let mut sys = SystemParams::new(vec![]);
            sys.drive = Some(DriveSpec {
                omega_p: cav.omega_cav - detuning,
                alpha: (2e-6 * cav.kappa_out.powi(2) / kin).sqrt(),
                kappa_in: kin,
            });
            let spec = HilbertSpec::new(2, 0).unwrap();
            let l = Liouvillian::from_system(&sys, spec, DephasingConvention::Literal).unwrap();
            let ss = steady_state_detailed(&l).unwrap();
            assert_eq!(ss.method, SteadyStateMethod::SparseLu);
            let n = (Operator::number(spec).to_dense() * ss.rho.matrix()).trace().re;
            let d = sys.drive.as_ref().unwrap();
            let exact = kin * d.alpha.powi(2) / (cav.kappa_out.powi(2) + detuning.powi(2));
            // n_max = 2 truncation error is of order N_ph²
            assert!((n - exact).abs() < 1e-9 * exact, "{n} vs {exact}");
            let a = (annihilation(spec).unwrap().to_dense() * ss.rho.matrix()).trace();
            assert!(a.norm() > 0.0);
        }
    }

    #[test]
    fn undriven_relaxes_to_ground() {
        let sys = SystemParams::new(vec![EmitterSpec::at(0.0, 0.0), EmitterSpec::at(3.0, 0.0)]);
        let spec = HilbertSpec::new(1, 2).unwrap();
        let l = Liouvillian::from_system(&sys, spec, DephasingConvention::Literal).unwrap();
        let rho = steady_state(&l).unwrap();
        assert!(rho.population(&crate::operators::BasisState::new(0, &[])) > 1.0 - 1e-9);
    }

    #[test]
    fn fallback_converges() {
        let cav = NanocavityParams::default();
        let spec = HilbertSpec::new(1, 0).unwrap();
        let l = crate::lindblad::build_liouvillian(&Operator::zeros(spec), &cav, &[], DephasingConvention::Literal)
            .unwrap();
        let ss = relax(&l).unwrap();
        assert!(ss.rho.matrix()[(0, 0)].re > 1.0 - 1e-9);
        assert_eq!(ss.method, SteadyStateMethod::Evolution);
    }
}
