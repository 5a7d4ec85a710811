use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::hilbert::HilbertSpec;
use super::operator::Operator;
use super::sparse::CsrMatrix;
use crate::error::{Error, Result};

/// Sparse linear map on column-stacked density matrices, D² × D².
///
/// With column stacking, vec(A ρ B) = (Bᵀ ⊗ A) vec(ρ).
#[derive(Clone, Debug, PartialEq)]
pub struct SuperOperator {
    spec: HilbertSpec,
    matrix: CsrMatrix,
}

impl SuperOperator {
    pub fn zeros(spec: HilbertSpec) -> Self {
        let n = spec.dim() * spec.dim();
        Self {
            spec,
            matrix: CsrMatrix::zeros(n, n),
        }
    }

    pub fn from_matrix(spec: HilbertSpec, matrix: CsrMatrix) -> Result<Self> {
        let n = spec.dim() * spec.dim();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: matrix.nrows(),
            });
        }
        Ok(Self { spec, matrix })
    }

    /// ρ ↦ A ρ B.
    pub fn sandwich(a: &Operator, b: &Operator) -> Result<Self> {
        a.spec().check_same(&b.spec())?;
        Ok(Self {
            spec: a.spec(),
            matrix: b.matrix().transpose().kron(a.matrix()),
        })
    }

    /// ρ ↦ A ρ.
    pub fn left(a: &Operator) -> Self {
        let id = CsrMatrix::identity(a.dim());
        Self {
            spec: a.spec(),
            matrix: id.kron(a.matrix()),
        }
    }

    /// ρ ↦ ρ B.
    pub fn right(b: &Operator) -> Self {
        let id = CsrMatrix::identity(b.dim());
        Self {
            spec: b.spec(),
            matrix: b.matrix().transpose().kron(&id),
        }
    }

    pub fn spec(&self) -> HilbertSpec {
        self.spec
    }

    pub fn matrix(&self) -> &CsrMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.spec.check_same(&other.spec)?;
        Ok(Self {
            spec: self.spec,
            matrix: self.matrix.add(&other.matrix),
        })
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            spec: self.spec,
            matrix: self.matrix.scale(s),
        }
    }

    /// L · vec(ρ).
    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        Ok(self.matrix.mul_vec(v))
    }

    pub fn apply_into(&self, v: &[C64], out: &mut [C64]) {
        self.matrix.mul_vec_into(v, out);
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        self.matrix.to_dense()
    }
}

#[cfg(test)]
mod tests {
    use super::super::density::{devectorize, vectorize};
    use super::*;

    fn pseudo_random_matrix(d: usize, seed: u64) -> DMatrix<C64> {
        // splitmix64
        let mut s = seed;
        let mut next = || {
            s = s.wrapping_add(0x9E37_79B9_7F4A_7C15);
            let mut z = s;
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
            z ^= z >> 31;
            (z >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        DMatrix::from_fn(d, d, |_, _| C64::new(next(), next()))
    }

    #[test]
    fn sandwich_matches_dense_product() {
        let spec = HilbertSpec::new(2, 1).unwrap();
        let d = spec.dim();
        for seed in 0..10 {
            let a = Operator::from_matrix(spec, CsrMatrix::from_dense(&pseudo_random_matrix(d, seed))).unwrap();
            let b = Operator::from_matrix(spec, CsrMatrix::from_dense(&pseudo_random_matrix(d, seed + 100))).unwrap();
            let rho = pseudo_random_matrix(d, seed + 200);
            let direct = a.to_dense() * &rho * b.to_dense();
            let via = SuperOperator::sandwich(&a, &b).unwrap().apply(&vectorize(&rho)).unwrap();
            let via = devectorize(d, &via).unwrap();
            assert!((direct - via).camax() < 1e-12);
        }
    }

    #[test]
    fn left_and_right_multiplication() {
        let spec = HilbertSpec::new(1, 1).unwrap();
        let d = spec.dim();
        let a = Operator::from_matrix(spec, CsrMatrix::from_dense(&pseudo_random_matrix(d, 7))).unwrap();
        let rho = pseudo_random_matrix(d, 8);
        let l = devectorize(d, &SuperOperator::left(&a).apply(&vectorize(&rho)).unwrap()).unwrap();
        let r = devectorize(d, &SuperOperator::right(&a).apply(&vectorize(&rho)).unwrap()).unwrap();
        assert!((l - a.to_dense() * &rho).camax() < 1e-14);
        assert!((r - &rho * a.to_dense()).camax() < 1e-14);
    }

    #[test]
    fn apply_rejects_wrong_length() {
        let s = SuperOperator::zeros(HilbertSpec::new(1, 0).unwrap());
        assert!(s.apply(&[C64::new(0.0, 0.0); 3]).is_err());
    }
}
