use super::expectation::expectation;
use super::populations::bright_dark_populations;
use crate::error::{Error, Result};
use crate::lindblad::Trajectory;
use crate::operators::{annihilation, Operator};

pub const CH_PHOTON: &str = "photon_number";
pub const CH_P_S: &str = "P_S";
pub const CH_P_A: &str = "P_A";
pub const CH_P_BRIGHT: &str = "P_bright";
pub const CH_P_DARK: &str = "P_dark";
pub const CH_RE_A: &str = "re_a";
pub const CH_IM_A: &str = "im_a";

/// Named real-valued channels sampled on a common time grid (fs).
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeries {
    times: Vec<f64>,
    names: Vec<String>,
    channels: Vec<Vec<f64>>,
}

impl TimeSeries {
    pub fn new(times: Vec<f64>) -> Result<Self> {
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter {
                name: "times",
                value: f64::NAN,
                reason: "must be strictly increasing",
            });
        }
        Ok(Self {
            times,
            names: Vec::new(),
            channels: Vec::new(),
        })
    }

    pub fn push_channel(&mut self, name: impl Into<String>, values: Vec<f64>) -> Result<()> {
        if values.len() != self.times.len() {
            return Err(Error::DimensionMismatch {
                expected: self.times.len(),
                found: values.len(),
            });
        }
        let name = name.into();
        if self.names.contains(&name) {
            return Err(Error::InvalidSweep(format!("duplicate channel {name}")));
        }
        self.names.push(name);
        self.channels.push(values);
        Ok(())
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn channel_names(&self) -> &[String] {
        &self.names
    }

    pub fn channel(&self, name: &str) -> Option<&[f64]> {
        self.names.iter().position(|n| n == name).map(|k| self.channels[k].as_slice())
    }

    pub fn channels(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.names.iter().map(String::as_str).zip(self.channels.iter().map(Vec::as_slice))
    }

    /// Emitter population channel name, `pop_<j>` (1-based).
    pub fn population_channel(j: usize) -> String {
        format!("pop_{j}")
    }

    /// Standard channels of a trajectory: photon number, emitter
    /// populations, bright/dark populations (P_S and P_A for two emitters,
    /// P_bright and P_dark for more) and the cavity field ⟨a⟩.
    pub fn from_trajectory(tr: &Trajectory) -> Result<Self> {
        let mut ts = Self::new(tr.times.clone())?;
        let Some(first) = tr.states.first() else {
            return Ok(ts);
        };
        let spec = first.spec();
        let n_em = spec.n_emitters();
        let number = Operator::number(spec);
        let a = annihilation(spec)?;

        let mut photon = Vec::with_capacity(tr.len());
        let mut pops = vec![Vec::with_capacity(tr.len()); n_em];
        let mut bright = Vec::with_capacity(tr.len());
        let mut dark = Vec::with_capacity(tr.len());
        let (mut re_a, mut im_a) = (Vec::with_capacity(tr.len()), Vec::with_capacity(tr.len()));
        let excited: Vec<Vec<usize>> = (1..=n_em)
            .map(|j| {
                spec.basis()
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| s.is_excited(j))
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        for rho in &tr.states {
            photon.push(expectation(&number, rho)?.re);
            let m = rho.matrix();
            for (p, idx) in pops.iter_mut().zip(&excited) {
                p.push(idx.iter().map(|&i| m[(i, i)].re).sum());
            }
            if n_em >= 2 {
                let bd = bright_dark_populations(rho)?;
                bright.push(bd.bright);
                dark.push(bd.dark);
            }
            let av = expectation(&a, rho)?;
            re_a.push(av.re);
            im_a.push(av.im);
        }
        ts.push_channel(CH_PHOTON, photon)?;
        for (j, p) in pops.into_iter().enumerate() {
            ts.push_channel(Self::population_channel(j + 1), p)?;
        }
        if n_em == 2 {
            ts.push_channel(CH_P_S, bright)?;
            ts.push_channel(CH_P_A, dark)?;
        } else if n_em > 2 {
            ts.push_channel(CH_P_BRIGHT, bright)?;
            ts.push_channel(CH_P_DARK, dark)?;
        }
        ts.push_channel(CH_RE_A, re_a)?;
        ts.push_channel(CH_IM_A, im_a)?;
        Ok(ts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cavity::{EmitterSpec, SystemParams};
    use crate::lindblad::{evolve, DephasingConvention, EvolutionConfig, Liouvillian};
    use crate::observables::single_excitation_population;
    use crate::operators::{BasisState, DensityMatrix, HilbertSpec};

    fn ground_population(rho: &DensityMatrix) -> f64 {
        rho.population(&BasisState::new(0, &[]))
    }

    #[test]
    fn rejects_bad_input() {
        assert!(TimeSeries::new(vec![0.0, 1.0, 1.0]).is_err());
        let mut ts = TimeSeries::new(vec![0.0, 1.0]).unwrap();
        assert!(ts.push_channel("x", vec![1.0]).is_err());
        ts.push_channel("x", vec![1.0, 2.0]).unwrap();
        assert!(ts.push_channel("x", vec![1.0, 2.0]).is_err());
        assert_eq!(ts.channel("x").unwrap(), &[1.0, 2.0]);
    }

    #[test]
    fn populations_account_for_everything() {
        let sys = SystemParams::new(vec![EmitterSpec::at(0.0, 0.0), EmitterSpec::at(2.0, 1.0)]);
        let spec = HilbertSpec::new(1, 2).unwrap().with_sector_cap(1);
        let l = Liouvillian::from_system(&sys, spec, DephasingConvention::Literal).unwrap();
        let rho0 = DensityMatrix::basis_state(spec, &BasisState::new(0, &[1])).unwrap();
        let cfg = EvolutionConfig {
            t_max: 60.0,
            ..Default::default()
        };
        let tr = evolve(&l, &rho0, &cfg).unwrap();
        let ts = TimeSeries::from_trajectory(&tr).unwrap();
        let names: Vec<&str> = ts.channel_names().iter().map(String::as_str).collect();
        assert_eq!(names, ["photon_number", "pop_1", "pop_2", "P_S", "P_A", "re_a", "im_a"]);
        for (k, rho) in tr.states.iter().enumerate() {
            let total = ts.channel(CH_P_S).unwrap()[k]
                + ts.channel(CH_P_A).unwrap()[k]
                + ts.channel(CH_PHOTON).unwrap()[k]
                + ground_population(rho);
            assert!((total - 1.0).abs() < 1e-9);
            let pops = ts.channel("pop_1").unwrap()[k] + ts.channel("pop_2").unwrap()[k];
            assert!((pops - single_excitation_population(rho)).abs() < 1e-12);
        }
    }
}
