use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::hilbert::{BasisState, HilbertSpec};
use super::sparse::CsrMatrix;
use crate::error::{Error, Result};

/// Sparse operator on a [`HilbertSpec`].
///
/// On a sector-truncated space every operator is the restriction P·O·P of
/// its full-space counterpart onto the retained states.
///
/// Arithmetic through the `std::ops` traits panics when the operands live
/// on different spaces, the same way mismatched matrix shapes would.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    spec: HilbertSpec,
    matrix: CsrMatrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PauliKind {
    Z,
    Plus,
    Minus,
}

impl Operator {
    pub fn from_matrix(spec: HilbertSpec, matrix: CsrMatrix) -> Result<Self> {
        let d = spec.dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: matrix.nrows(),
            });
        }
        Ok(Self { spec, matrix })
    }

    /// Builds the restriction of a basis-permuting elementary operator:
    /// `action` maps each basis state to its image and amplitude.
    fn from_action(spec: HilbertSpec, action: impl Fn(&BasisState) -> Option<(BasisState, f64)>) -> Self {
        let lookup = spec.lookup_table();
        let basis = spec.basis();
        let d = basis.len();
        let triplets = basis.iter().enumerate().filter_map(|(col, s)| {
            let (img, amp) = action(s)?;
            if img.photons > spec.n_max() {
                return None;
            }
            let row = lookup[spec.full_index(&img)]?;
            Some((row, col, C64::new(amp, 0.0)))
        });
        Self {
            spec,
            matrix: CsrMatrix::from_triplets(d, d, triplets.collect::<Vec<_>>()),
        }
    }

    pub fn zeros(spec: HilbertSpec) -> Self {
        let d = spec.dim();
        Self {
            spec,
            matrix: CsrMatrix::zeros(d, d),
        }
    }

    pub fn identity(spec: HilbertSpec) -> Self {
        Self {
            spec,
            matrix: CsrMatrix::identity(spec.dim()),
        }
    }

    /// Photon-number operator a†a (diagonal).
    pub fn number(spec: HilbertSpec) -> Self {
        Self::from_action(spec, |s| Some((*s, s.photons as f64)))
    }

    /// Total excitation number a†a + Σ_j σ_+^(j) σ_−^(j) (diagonal).
    pub fn excitation_number(spec: HilbertSpec) -> Self {
        Self::from_action(spec, |s| Some((*s, s.excitations() as f64)))
    }

    pub fn spec(&self) -> HilbertSpec {
        self.spec
    }

    pub fn matrix(&self) -> &CsrMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.spec.dim()
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        self.matrix.to_dense()
    }

    pub fn dagger(&self) -> Self {
        Self {
            spec: self.spec,
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            spec: self.spec,
            matrix: self.matrix.scale(s),
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.spec.check_same(&other.spec)?;
        Ok(Self {
            spec: self.spec,
            matrix: self.matrix.matmul(&other.matrix),
        })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.spec.check_same(&other.spec)?;
        Ok(Self {
            spec: self.spec,
            matrix: self.matrix.add(&other.matrix),
        })
    }

    /// `[self, other]`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// Largest elementwise modulus of `self - self†`.
    pub fn hermiticity_error(&self) -> f64 {
        self.matrix.max_abs_diff(&self.matrix.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    pub fn max_abs(&self) -> f64 {
        self.matrix.max_abs()
    }
}

/// Bosonic annihilation operator, a|n⟩ = √n |n−1⟩, identity on emitters.
pub fn annihilation(spec: HilbertSpec) -> Result<Operator> {
    if spec.n_max() < 1 {
        return Err(Error::InvalidSpec(
            "annihilation operator needs n_max >= 1".into(),
        ));
    }
    Ok(Operator::from_action(spec, |s| {
        (s.photons > 0).then(|| {
            (
                BasisState {
                    photons: s.photons - 1,
                    ..*s
                },
                (s.photons as f64).sqrt(),
            )
        })
    }))
}

pub fn creation(spec: HilbertSpec) -> Result<Operator> {
    annihilation(spec).map(|a| a.dagger())
}

/// Pauli-type operator on emitter `j` (1-based), identity elsewhere.
///
/// σ_z = diag(+1, −1) in (excited, ground) order; σ_+ raises ground to
/// excited; σ_− = σ_+†.
pub fn pauli(spec: HilbertSpec, which: PauliKind, j: usize) -> Result<Operator> {
    spec.check_emitter(j)?;
    let bit = 1u32 << (j - 1);
    Ok(match which {
        PauliKind::Z => Operator::from_action(spec, |s| {
            Some((*s, if s.is_excited(j) { 1.0 } else { -1.0 }))
        }),
        PauliKind::Plus => Operator::from_action(spec, |s| {
            (!s.is_excited(j)).then(|| {
                (
                    BasisState {
                        excited_mask: s.excited_mask | bit,
                        ..*s
                    },
                    1.0,
                )
            })
        }),
        PauliKind::Minus => Operator::from_action(spec, |s| {
            s.is_excited(j).then(|| {
                (
                    BasisState {
                        excited_mask: s.excited_mask & !bit,
                        ..*s
                    },
                    1.0,
                )
            })
        }),
    })
}

impl<'a> Mul<&'a Operator> for &'a Operator {
    type Output = Operator;
    fn mul(self, rhs: &'a Operator) -> Operator {
        self.try_mul(rhs).expect("operator spaces differ")
    }
}

impl<'a> Add<&'a Operator> for &'a Operator {
    type Output = Operator;
    fn add(self, rhs: &'a Operator) -> Operator {
        self.try_add(rhs).expect("operator spaces differ")
    }
}

impl<'a> Sub<&'a Operator> for &'a Operator {
    type Output = Operator;
    fn sub(self, rhs: &'a Operator) -> Operator {
        assert_eq!(self.spec, rhs.spec, "operator spaces differ");
        Operator {
            spec: self.spec,
            matrix: self.matrix.sub(&rhs.matrix),
        }
    }
}

impl Mul<C64> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: C64) -> Operator {
        self.scale(rhs)
    }
}

impl Mul<f64> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: f64) -> Operator {
        self.scale(C64::new(rhs, 0.0))
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        self.scale(C64::new(-1.0, 0.0))
    }
}
