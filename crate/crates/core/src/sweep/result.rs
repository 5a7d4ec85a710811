use super::axis::SweepAxis;

/// A cell that could not be evaluated; its grid entries hold NaN.
#[derive(Clone, Debug, PartialEq)]
pub struct CellFailure {
    /// Flat cell index (row-major over the axes).
    pub cell: usize,
    pub message: String,
}

/// Grid of scalar observables over one or two axes.
///
/// Cells are stored row-major: for two axes the second axis varies fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub axes: Vec<SweepAxis>,
    pub observables: Vec<String>,
    /// One flat grid per observable.
    pub grids: Vec<Vec<f64>>,
    pub failures: Vec<CellFailure>,
    /// Free-form provenance, e.g. the configuration echo and code version.
    pub metadata: Vec<(String, String)>,
}

impl SweepResult {
    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.count).collect()
    }

    pub fn cells(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }

    pub fn grid(&self, observable: &str) -> Option<&[f64]> {
        self.observables
            .iter()
            .position(|o| o == observable)
            .map(|k| self.grids[k].as_slice())
    }

    /// Axis coordinates of a flat cell index.
    pub fn coordinates(&self, cell: usize) -> Vec<f64> {
        let mut rem = cell;
        let mut idx = vec![0; self.axes.len()];
        for (k, a) in self.axes.iter().enumerate().rev() {
            idx[k] = rem % a.count;
            rem /= a.count;
        }
        self.axes.iter().zip(idx).map(|(a, i)| a.value(i)).collect()
    }

    /// Value of `observable` at (i, j) of a two-axis map.
    pub fn at(&self, observable: &str, i: usize, j: usize) -> Option<f64> {
        let n2 = self.axes.get(1)?.count;
        self.grid(observable).map(|g| g[i * n2 + j])
    }
}
