//! Composite Hilbert space layout: one bosonic mode truncated at `n_max`
//! photons, tensored with `N` two-level emitters.
//!
//! Basis ordering is frozen: the Fock index varies slowest, then emitter 1,
//! then emitter 2, …, with emitter N fastest. Each emitter uses the local
//! ordering (excited, ground), so local index 0 is |e⟩ and 1 is |g⟩.
//!
//! With a `sector_cap` of `k`, only basis states whose total excitation
//! number (photons + excited emitters) is at most `k` are retained, kept in
//! ascending order of their full-space index.

use crate::error::{Error, Result};

/// Upper bound on the number of emitters; the full space grows as 2^N.
pub const MAX_EMITTERS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HilbertSpec {
    n_max: usize,
    n_emitters: usize,
    sector_cap: Option<usize>,
}

/// A product basis state |n; e/g, …⟩.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BasisState {
    pub photons: usize,
    /// Bit `j - 1` is set when emitter `j` is excited.
    pub excited_mask: u32,
}

impl BasisState {
    pub fn new(photons: usize, excited: &[usize]) -> Self {
        let mut mask = 0u32;
        for &j in excited {
            mask |= 1 << (j - 1);
        }
        Self {
            photons,
            excited_mask: mask,
        }
    }

    pub fn is_excited(&self, j: usize) -> bool {
        self.excited_mask & (1 << (j - 1)) != 0
    }

    pub fn excitations(&self) -> usize {
        self.photons + self.excited_mask.count_ones() as usize
    }
}

impl HilbertSpec {
    pub fn new(n_max: usize, n_emitters: usize) -> Result<Self> {
        if n_emitters > MAX_EMITTERS {
            return Err(Error::InvalidSpec(format!(
                "{n_emitters} emitters exceeds the supported maximum of {MAX_EMITTERS}"
            )));
        }
        Ok(Self {
            n_max,
            n_emitters,
            sector_cap: None,
        })
    }

    /// Restricts the space to states with at most `cap` total excitations.
    pub fn with_sector_cap(self, cap: usize) -> Self {
        Self {
            sector_cap: Some(cap),
            ..self
        }
    }

    pub fn without_sector_cap(self) -> Self {
        Self {
            sector_cap: None,
            ..self
        }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn n_emitters(&self) -> usize {
        self.n_emitters
    }

    pub fn sector_cap(&self) -> Option<usize> {
        self.sector_cap
    }

    /// Dimension of the untruncated space, (n_max + 1) · 2^N.
    pub fn full_dim(&self) -> usize {
        (self.n_max + 1) << self.n_emitters
    }

    /// Dimension of this space (truncated when a sector cap is set).
    pub fn dim(&self) -> usize {
        match self.sector_cap {
            None => self.full_dim(),
            Some(_) => self.retained_full_indices().len(),
        }
    }

    pub fn full_index(&self, s: &BasisState) -> usize {
        let n = self.n_emitters;
        let mut emit = 0usize;
        for j in 1..=n {
            let local = usize::from(!s.is_excited(j));
            emit |= local << (n - j);
        }
        s.photons * (1 << n) + emit
    }

    pub fn state_of_full_index(&self, idx: usize) -> BasisState {
        let n = self.n_emitters;
        let photons = idx >> n;
        let emit = idx & ((1 << n) - 1);
        let mut mask = 0u32;
        for j in 1..=n {
            if (emit >> (n - j)) & 1 == 0 {
                mask |= 1 << (j - 1);
            }
        }
        BasisState {
            photons,
            excited_mask: mask,
        }
    }

    fn retained_full_indices(&self) -> Vec<usize> {
        match self.sector_cap {
            None => (0..self.full_dim()).collect(),
            Some(cap) => (0..self.full_dim())
                .filter(|&i| self.state_of_full_index(i).excitations() <= cap)
                .collect(),
        }
    }

    /// Retained basis states in index order.
    pub fn basis(&self) -> Vec<BasisState> {
        self.retained_full_indices()
            .into_iter()
            .map(|i| self.state_of_full_index(i))
            .collect()
    }

    /// Index of `s` in this space, `None` when it is outside the photon
    /// cutoff or the excitation sector.
    pub fn index_of(&self, s: &BasisState) -> Option<usize> {
        if s.photons > self.n_max || (s.excited_mask >> self.n_emitters) != 0 {
            return None;
        }
        let full = self.full_index(s);
        match self.sector_cap {
            None => Some(full),
            Some(cap) if s.excitations() > cap => None,
            Some(_) => self.retained_full_indices().binary_search(&full).ok(),
        }
    }

    /// Index lookup table from full-space index to this space's index.
    pub(crate) fn lookup_table(&self) -> Vec<Option<usize>> {
        let mut table = vec![None; self.full_dim()];
        for (k, full) in self.retained_full_indices().into_iter().enumerate() {
            table[full] = Some(k);
        }
        table
    }

    pub(crate) fn check_emitter(&self, j: usize) -> Result<()> {
        if j == 0 || j > self.n_emitters {
            Err(Error::EmitterIndex {
                index: j,
                n_emitters: self.n_emitters,
            })
        } else {
            Ok(())
        }
    }

    pub(crate) fn check_same(&self, other: &HilbertSpec) -> Result<()> {
        if self != other {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            })
        } else {
            Ok(())
        }
    }
}

/// Maps between a sector-truncated space and its full parent space.
#[derive(Clone, Debug, PartialEq)]
pub struct SectorMap {
    truncated: HilbertSpec,
    full: HilbertSpec,
    retained: Vec<usize>,
}

impl SectorMap {
    pub fn new(truncated: HilbertSpec) -> Self {
        Self {
            full: truncated.without_sector_cap(),
            retained: truncated.retained_full_indices(),
            truncated,
        }
    }

    pub fn truncated_spec(&self) -> HilbertSpec {
        self.truncated
    }

    pub fn full_spec(&self) -> HilbertSpec {
        self.full
    }

    /// Full-space indices of the retained states.
    pub fn retained(&self) -> &[usize] {
        &self.retained
    }

    pub fn retained_states(&self) -> Vec<BasisState> {
        self.retained
            .iter()
            .map(|&i| self.full.state_of_full_index(i))
            .collect()
    }

    /// Embeds a truncated-space vector in the full space (zero padding).
    pub fn inject<T: Copy + Default>(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.retained.len());
        let mut out = vec![T::default(); self.full.full_dim()];
        for (k, &i) in self.retained.iter().enumerate() {
            out[i] = v[k];
        }
        out
    }

    /// Restricts a full-space vector to the retained states.
    pub fn restrict<T: Copy>(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.full.full_dim());
        self.retained.iter().map(|&i| v[i]).collect()
    }
}

/// Basis map between `spec` (which must carry a sector cap) and the full
/// space.
pub fn sector_project(spec: HilbertSpec) -> SectorMap {
    SectorMap::new(spec)
}
