use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::Result;
use crate::operators::{DensityMatrix, Operator};

/// Tr[O ρ].
pub fn expectation(op: &Operator, rho: &DensityMatrix) -> Result<C64> {
    op.spec().check_same(&rho.spec())?;
    let m = rho.matrix();
    Ok(op.matrix().iter().map(|(i, j, o)| o * m[(j, i)]).sum())
}

/// Tr[O ρ] for dense matrices of equal shape.
pub fn expectation_dense(op: &DMatrix<C64>, rho: &DMatrix<C64>) -> C64 {
    op.iter()
        .zip(rho.transpose().iter())
        .map(|(o, r)| o * r)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{BasisState, CsrMatrix, HilbertSpec};

    #[test]
    fn identity_and_number() {
        let spec = HilbertSpec::new(2, 1).unwrap();
        let rho = DensityMatrix::basis_state(spec, &BasisState::new(1, &[])).unwrap();
        let one = expectation(&Operator::identity(spec), &rho).unwrap();
        assert!((one - C64::new(1.0, 0.0)).norm() < 1e-15);
        let n = expectation(&Operator::number(spec), &rho).unwrap();
        assert!((n - C64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn matches_dense_trace() {
        let spec = HilbertSpec::new(1, 2).unwrap();
        let d = spec.dim();
        let mut s = 7u64;
        let mut r = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1);
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let o = DMatrix::from_fn(d, d, |_, _| C64::new(r(), r()));
        let o = (&o + o.adjoint()) * C64::new(0.5, 0.0);
        let psi: Vec<C64> = (0..d).map(|_| C64::new(r(), r())).collect();
        let rho = DensityMatrix::pure(spec, &psi).unwrap();
        let op = Operator::from_matrix(spec, CsrMatrix::from_dense(&o)).unwrap();
        let got = expectation(&op, &rho).unwrap();
        let want = (&o * rho.matrix()).trace();
        assert!((got - want).norm() < 1e-12);
        assert!(got.im.abs() < 1e-12);
        assert!((expectation_dense(&o, rho.matrix()) - want).norm() < 1e-12);
    }
}
