//! Radial mode profile u(r) of the gap mode, normalised so that its
//! largest magnitude, 1, sits at r = 0.

use std::path::Path;

use crate::error::{Error, Result};

/// Header line of the tabulated profile format.
pub const PROFILE_HEADER: &str = "# mode-profile v1";

#[derive(Clone, Debug, PartialEq)]
pub enum ModeProfile {
    /// u(r) = exp(−r² / 2w²).
    Gaussian { width: f64 },
    /// Linear interpolation between samples; no extrapolation.
    Tabulated { r: Vec<f64>, u: Vec<f64> },
}

impl ModeProfile {
    pub fn gaussian(width: f64) -> Result<Self> {
        if !(width > 0.0) || !width.is_finite() {
            return Err(Error::InvalidParameter {
                name: "width",
                value: width,
                reason: "must be > 0",
            });
        }
        Ok(Self::Gaussian { width })
    }

    /// Gaussian whose coupling g0·u(r) drops to `g_boundary` at
    /// `r_boundary`: w = r_b / √(2 ln(g0 / g_b)).
    pub fn gaussian_crossing(g0: f64, g_boundary: f64, r_boundary: f64) -> Result<Self> {
        if !(g0 > g_boundary && g_boundary > 0.0) {
            return Err(Error::InvalidParameter {
                name: "g0",
                value: g0,
                reason: "must exceed the boundary coupling for the profile to cross it",
            });
        }
        Self::gaussian(r_boundary / (2.0 * (g0 / g_boundary).ln()).sqrt())
    }

    /// Validates samples and rescales so that u(0) = 1.
    pub fn tabulated(r: Vec<f64>, u: Vec<f64>) -> Result<Self> {
        if r.len() != u.len() {
            return Err(Error::InvalidProfile("r and u have different lengths".into()));
        }
        if r.len() < 2 {
            return Err(Error::InvalidProfile("at least two samples are required".into()));
        }
        if r[0] != 0.0 {
            return Err(Error::InvalidProfile("first sample must be at r = 0".into()));
        }
        if r.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidProfile("r must be strictly increasing".into()));
        }
        if r.iter().chain(u.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidProfile("non-finite sample".into()));
        }
        let centre = u[0];
        if centre == 0.0 || u.iter().any(|v| v.abs() > centre.abs()) {
            return Err(Error::InvalidProfile(
                "the largest |u| must be attained at r = 0".into(),
            ));
        }
        let u = u.into_iter().map(|v| v / centre).collect();
        Ok(Self::Tabulated { r, u })
    }

    /// Parses the two-column text format: a `# mode-profile v1` header,
    /// then `r_nm  u` rows. Further `#` lines and blank lines are ignored.
    pub fn parse_table(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, first)) if first.trim() == PROFILE_HEADER => {}
            _ => {
                return Err(Error::InvalidProfile(format!(
                    "line 1: expected header `{PROFILE_HEADER}`"
                )))
            }
        }
        let (mut r, mut u) = (Vec::new(), Vec::new());
        for (i, line) in lines {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split_whitespace().collect();
            if cols.len() != 2 {
                return Err(Error::InvalidProfile(format!(
                    "line {}: expected two columns, found {}",
                    i + 1,
                    cols.len()
                )));
            }
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| Error::InvalidProfile(format!("line {}: cannot parse `{s}`", i + 1)))
            };
            r.push(parse(cols[0])?);
            u.push(parse(cols[1])?);
        }
        Self::tabulated(r, u)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::InvalidProfile(format!("cannot read {}: {e}", path.display()))
        })?;
        Self::parse_table(&text)
    }

    /// Serialises a tabulated profile in the `mode-profile v1` format.
    pub fn to_table(&self) -> Option<String> {
        match self {
            Self::Tabulated { r, u } => {
                let mut s = format!("{PROFILE_HEADER}\n");
                for (ri, ui) in r.iter().zip(u) {
                    s.push_str(&format!("{ri} {ui}\n"));
                }
                Some(s)
            }
            Self::Gaussian { .. } => None,
        }
    }

    /// u at radial distance `r` (nm).
    pub fn eval(&self, r: f64) -> Result<f64> {
        let r = r.abs();
        match self {
            Self::Gaussian { width } => Ok((-r * r / (2.0 * width * width)).exp()),
            Self::Tabulated { r: rs, u } => {
                let r_max = *rs.last().expect("validated non-empty");
                if r > r_max {
                    return Err(Error::OutsideProfile { r, r_max });
                }
                let k = match rs.binary_search_by(|x| x.partial_cmp(&r).expect("finite")) {
                    Ok(k) => return Ok(u[k]),
                    Err(k) => k,
                };
                let t = (r - rs[k - 1]) / (rs[k] - rs[k - 1]);
                Ok(u[k - 1] + t * (u[k] - u[k - 1]))
            }
        }
    }

    pub fn eval_at(&self, position: (f64, f64)) -> Result<f64> {
        self.eval(position.0.hypot(position.1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_is_one_at_centre_and_monotone() {
        let p = ModeProfile::gaussian(6.4).unwrap();
        assert_eq!(p.eval(0.0).unwrap(), 1.0);
        let mut last = 1.0;
        for i in 1..100 {
            let v = p.eval(i as f64 * 0.2).unwrap();
            assert!(v <= last);
            last = v;
        }
    }

    #[test]
    fn crossing_calibration() {
        let p = ModeProfile::gaussian_crossing(38.66, 25.0, 6.0).unwrap();
        assert!((38.66 * p.eval(6.0).unwrap() - 25.0).abs() < 1e-12);
    }

    #[test]
    fn parse_and_interpolate() {
        let p = ModeProfile::parse_table("# mode-profile v1\n0 2.0\n1 1.0\n# note\n\n3 0.0\n").unwrap();
        assert_eq!(p.eval(0.0).unwrap(), 1.0);
        assert!((p.eval(0.5).unwrap() - 0.75).abs() < 1e-15);
        assert!((p.eval(2.0).unwrap() - 0.25).abs() < 1e-15);
        assert!(matches!(p.eval(3.5), Err(Error::OutsideProfile { .. })));
    }

    #[test]
    fn table_round_trip() {
        let p = ModeProfile::tabulated(vec![0.0, 1.5, 4.0], vec![1.0, 0.5, 0.125]).unwrap();
        assert_eq!(ModeProfile::parse_table(&p.to_table().unwrap()).unwrap(), p);
    }

    #[test]
    fn rejects_malformed_tables() {
        assert!(ModeProfile::parse_table("0 1\n1 0.5\n").is_err());
        assert!(ModeProfile::parse_table("# mode-profile v1\n0.1 1\n1 0.5\n").is_err());
        assert!(ModeProfile::parse_table("# mode-profile v1\n0 1\n0 0.5\n").is_err());
        assert!(ModeProfile::parse_table("# mode-profile v1\n0 0.5\n1 1.0\n").is_err());
        assert!(ModeProfile::parse_table("# mode-profile v1\n0 1 2\n").is_err());
    }
}
