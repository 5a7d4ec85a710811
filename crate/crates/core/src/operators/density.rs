use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::hilbert::{BasisState, HilbertSpec, SectorMap};
use crate::error::{Error, Result};

/// Tolerance on max |ρ − ρ†|.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Tolerance on |Tr ρ − 1|.
pub const TRACE_TOL: f64 = 1e-9;
/// Smallest admissible eigenvalue.
pub const POSITIVITY_TOL: f64 = 1e-9;

/// Dense density matrix on a [`HilbertSpec`].
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    spec: HilbertSpec,
    data: DMatrix<C64>,
}

impl DensityMatrix {
    /// Wraps `data` after checking Hermiticity, unit trace and positivity.
    pub fn new(spec: HilbertSpec, data: DMatrix<C64>) -> Result<Self> {
        let rho = Self::new_unchecked(spec, data)?;
        rho.validate()?;
        Ok(rho)
    }

    /// Wraps `data` checking only its shape.
    pub fn new_unchecked(spec: HilbertSpec, data: DMatrix<C64>) -> Result<Self> {
        let d = spec.dim();
        if data.nrows() != d || data.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: data.nrows(),
            });
        }
        Ok(Self { spec, data })
    }

    /// |ψ⟩⟨ψ| for the normalised amplitudes `psi`.
    pub fn pure(spec: HilbertSpec, psi: &[C64]) -> Result<Self> {
        if psi.len() != spec.dim() {
            return Err(Error::DimensionMismatch {
                expected: spec.dim(),
                found: psi.len(),
            });
        }
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("state vector has zero or non-finite norm".into()));
        }
        let v = nalgebra::DVector::from_iterator(psi.len(), psi.iter().map(|z| z / norm));
        Ok(Self {
            spec,
            data: &v * v.adjoint(),
        })
    }

    /// Projector onto a single basis state.
    pub fn basis_state(spec: HilbertSpec, state: &BasisState) -> Result<Self> {
        let idx = spec.index_of(state).ok_or_else(|| {
            Error::InvalidState(format!("basis state {state:?} is not part of the space"))
        })?;
        let mut data = DMatrix::zeros(spec.dim(), spec.dim());
        data[(idx, idx)] = C64::new(1.0, 0.0);
        Ok(Self { spec, data })
    }

    /// Vacuum with every emitter in its ground state.
    pub fn ground(spec: HilbertSpec) -> Self {
        Self::basis_state(spec, &BasisState::new(0, &[])).expect("ground state is always present")
    }

    pub fn spec(&self) -> HilbertSpec {
        self.spec
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.data
    }

    pub fn dim(&self) -> usize {
        self.spec.dim()
    }

    pub fn trace(&self) -> C64 {
        self.data.trace()
    }

    pub fn hermiticity_error(&self) -> f64 {
        let d = self.dim();
        let mut err = 0.0f64;
        for i in 0..d {
            for j in i..d {
                err = err.max((self.data[(i, j)] - self.data[(j, i)].conj()).norm());
            }
        }
        err
    }

    pub fn min_eigenvalue(&self) -> f64 {
        // eigenvalues of the Hermitian part
        let h = (&self.data + self.data.adjoint()) * C64::new(0.5, 0.0);
        h.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn validate(&self) -> Result<()> {
        let herm = self.hermiticity_error();
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("not Hermitian: max |ρ − ρ†| = {herm:e}")));
        }
        let tr = self.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min_eig = self.min_eigenvalue();
        if min_eig < -POSITIVITY_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min_eig:e}")));
        }
        Ok(())
    }

    /// Replaces ρ by (ρ + ρ†)/2.
    pub fn hermitize(&mut self) {
        let adj = self.data.adjoint();
        self.data = (&self.data + adj) * C64::new(0.5, 0.0);
    }

    /// Column-stacked vec(ρ): element (i, j) sits at index j·D + i.
    pub fn vectorize(&self) -> Vec<C64> {
        vectorize(&self.data)
    }

    /// Inverse of [`vectorize`](Self::vectorize). No physical validation
    /// is performed.
    pub fn devectorize(spec: HilbertSpec, v: &[C64]) -> Result<Self> {
        let data = devectorize(spec.dim(), v)?;
        Ok(Self { spec, data })
    }

    /// ⟨state|ρ|state⟩ for a basis state; zero when the state is not part
    /// of the space.
    pub fn population(&self, state: &BasisState) -> f64 {
        self.spec
            .index_of(state)
            .map(|i| self.data[(i, i)].re)
            .unwrap_or(0.0)
    }

    /// Embeds a sector-truncated state into the full space.
    pub fn inject(&self, map: &SectorMap) -> Result<Self> {
        self.spec.check_same(&map.truncated_spec())?;
        let full = map.full_spec();
        let mut data = DMatrix::zeros(full.dim(), full.dim());
        for (r, &fr) in map.retained().iter().enumerate() {
            for (c, &fc) in map.retained().iter().enumerate() {
                data[(fr, fc)] = self.data[(r, c)];
            }
        }
        Ok(Self { spec: full, data })
    }

    /// Restricts a full-space state to the retained sector.
    pub fn restrict(&self, map: &SectorMap) -> Result<Self> {
        self.spec.check_same(&map.full_spec())?;
        let idx = map.retained();
        let data = DMatrix::from_fn(idx.len(), idx.len(), |r, c| self.data[(idx[r], idx[c])]);
        Ok(Self {
            spec: map.truncated_spec(),
            data,
        })
    }
}

/// Column-stacking vectorisation.
pub fn vectorize(m: &DMatrix<C64>) -> Vec<C64> {
    // nalgebra storage is column-major
    m.as_slice().to_vec()
}

pub fn devectorize(d: usize, v: &[C64]) -> Result<DMatrix<C64>> {
    if v.len() != d * d {
        return Err(Error::DimensionMismatch {
            expected: d * d,
            found: v.len(),
        });
    }
    Ok(DMatrix::from_column_slice(d, d, v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maximally_mixed_qubit_vectorizes_column_stacked() {
        let spec = HilbertSpec::new(0, 1).unwrap();
        let rho = DensityMatrix::new(spec, DMatrix::identity(2, 2) * C64::new(0.5, 0.0)).unwrap();
        let v = rho.vectorize();
        assert_eq!(v, vec![C64::new(0.5, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.5, 0.0)]);
    }

    #[test]
    fn column_stacking_index_convention() {
        let m = DMatrix::from_fn(3, 3, |i, j| C64::new(i as f64, j as f64));
        let v = vectorize(&m);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(v[j * 3 + i], m[(i, j)]);
            }
        }
    }

    #[test]
    fn devectorize_rejects_wrong_length() {
        assert!(matches!(
            devectorize(3, &[C64::new(0.0, 0.0); 8]),
            Err(Error::DimensionMismatch { expected: 9, found: 8 })
        ));
    }

    #[test]
    fn validation_catches_each_invariant() {
        let spec = HilbertSpec::new(1, 0).unwrap();
        let mut m = DMatrix::identity(2, 2) * C64::new(0.5, 0.0);
        m[(0, 1)] = C64::new(0.1, 0.0);
        assert!(DensityMatrix::new(spec, m.clone()).is_err());
        let tr2 = DMatrix::identity(2, 2) * C64::new(1.0, 0.0);
        assert!(DensityMatrix::new(spec, tr2).is_err());
        let neg = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            C64::new(1.1, 0.0),
            C64::new(-0.1, 0.0),
        ]));
        assert!(DensityMatrix::new(spec, neg).is_err());
    }

    #[test]
    fn pure_state_is_valid() {
        let spec = HilbertSpec::new(1, 1).unwrap();
        let psi = vec![C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)];
        let rho = DensityMatrix::pure(spec, &psi).unwrap();
        rho.validate().unwrap();
        assert!((rho.trace().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn inject_then_restrict_is_identity() {
        let spec = HilbertSpec::new(2, 2).unwrap().with_sector_cap(1);
        let map = SectorMap::new(spec);
        let rho = DensityMatrix::basis_state(spec, &BasisState::new(0, &[2])).unwrap();
        let full = rho.inject(&map).unwrap();
        assert_eq!(full.dim(), 12);
        assert_eq!(full.population(&BasisState::new(0, &[2])), 1.0);
        assert_eq!(full.restrict(&map).unwrap(), rho);
    }
}
