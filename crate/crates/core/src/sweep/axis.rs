use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Swept parameter. Detunings are measured from emitter 1's transition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AxisKind {
    /// ω_p − ω_QE^(1), meV.
    DeltaP,
    /// ω_cav − ω_QE^(1), meV.
    DeltaCav,
    /// Multiplier applied to every coupling strength.
    GScale,
    /// Emitter x coordinate, nm (meaning depends on the placement).
    PositionX,
    /// Radius of a ring placement, nm.
    RingRadius,
}

impl AxisKind {
    pub const ALL: [AxisKind; 5] = [Self::DeltaP, Self::DeltaCav, Self::GScale, Self::PositionX, Self::RingRadius];

    pub fn name(self) -> &'static str {
        match self {
            Self::DeltaP => "delta_p",
            Self::DeltaCav => "delta_cav",
            Self::GScale => "g_scale",
            Self::PositionX => "position_x",
            Self::RingRadius => "ring_radius",
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            Self::DeltaP | Self::DeltaCav => "meV",
            Self::GScale => "1",
            Self::PositionX | Self::RingRadius => "nm",
        }
    }
}

impl fmt::Display for AxisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AxisKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidSweep(format!("unknown axis `{s}`")))
    }
}

/// Evenly spaced samples `start, …, stop` (both included).
#[derive(Clone, Debug, PartialEq)]
pub struct SweepAxis {
    pub kind: AxisKind,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl SweepAxis {
    pub fn new(kind: AxisKind, start: f64, stop: f64, count: usize) -> Result<Self> {
        let axis = Self {
            kind,
            start,
            stop,
            count,
        };
        axis.validate()?;
        Ok(axis)
    }

    pub fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(Error::InvalidSweep(format!("axis {} needs at least 2 points", self.kind)));
        }
        if !(self.start < self.stop) || !self.start.is_finite() || !self.stop.is_finite() {
            return Err(Error::InvalidSweep(format!(
                "axis {} needs finite start < stop, got {} .. {}",
                self.kind, self.start, self.stop
            )));
        }
        Ok(())
    }

    pub fn value(&self, k: usize) -> f64 {
        if k + 1 == self.count {
            return self.stop;
        }
        self.start + (self.stop - self.start) * k as f64 / (self.count - 1) as f64
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|k| self.value(k)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_endpoints() {
        let a = SweepAxis::new(AxisKind::DeltaP, -150.0, 150.0, 61).unwrap();
        let v = a.values();
        assert_eq!(v.len(), 61);
        assert_eq!(v[0], -150.0);
        assert_eq!(v[60], 150.0);
        assert!((v[30]).abs() < 1e-12);
    }

    #[test]
    fn invalid_axes() {
        assert!(SweepAxis::new(AxisKind::GScale, 0.0, 1.0, 1).is_err());
        assert!(SweepAxis::new(AxisKind::GScale, 1.0, 1.0, 5).is_err());
        assert!("delta_x".parse::<AxisKind>().is_err());
        assert_eq!("ring_radius".parse::<AxisKind>().unwrap(), AxisKind::RingRadius);
    }
}
