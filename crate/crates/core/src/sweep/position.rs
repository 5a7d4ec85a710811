use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use super::axis::{AxisKind, SweepAxis};
use super::result::SweepResult;
use super::{assemble, check_budget, evaluate_cells, DEFAULT_CELL_BUDGET};
use crate::cavity::{effective_coupling, EmitterSpec, SystemParams};
use crate::error::{Error, Result};
use crate::lindblad::{evolve, DephasingConvention, EvolutionConfig, InitialState, Liouvillian};
use crate::observables::{rabi_frequency, TimeSeries, CH_PHOTON, CH_P_A, CH_P_DARK};
use crate::operators::HilbertSpec;

/// Geometric arrangement of emitters as a function of one coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Placement {
    /// Two emitters at (−x, 0) and (x, 0).
    SymmetricPair,
    /// Emitter 1 at the centre, emitter 2 at (x, 0).
    AsymmetricPair,
    /// All emitters evenly spaced on a circle of radius r.
    Ring,
    /// Emitter 1 at the centre, the others evenly spaced on a circle of radius r.
    Encircled,
}

impl Placement {
    pub fn name(self) -> &'static str {
        match self {
            Self::SymmetricPair => "symmetric_pair",
            Self::AsymmetricPair => "asymmetric_pair",
            Self::Ring => "ring",
            Self::Encircled => "encircled",
        }
    }

    fn check(self, n: usize) -> Result<()> {
        let ok = match self {
            Self::SymmetricPair | Self::AsymmetricPair => n == 2,
            Self::Ring => n >= 1,
            Self::Encircled => n >= 2,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidSweep(format!("placement {} cannot hold {n} emitters", self.name())))
        }
    }
}

impl fmt::Display for Placement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Placement {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        [Self::SymmetricPair, Self::AsymmetricPair, Self::Ring, Self::Encircled]
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidSweep(format!("unknown placement `{s}`")))
    }
}

/// `n` points evenly spaced on a circle of radius `r`, the first on +x.
pub(crate) fn ring_positions(n: usize, r: f64) -> Vec<(f64, f64)> {
    (0..n)
        .map(|k| {
            let phi = 2.0 * PI * k as f64 / n as f64;
            (r * phi.cos(), r * phi.sin())
        })
        .collect()
}

/// Moves the emitters of `emitters` into `placement` at coordinate `x`.
pub fn place_emitters(emitters: &mut [EmitterSpec], placement: Placement, x: f64) -> Result<()> {
    placement.check(emitters.len())?;
    let positions: Vec<(f64, f64)> = match placement {
        Placement::SymmetricPair => vec![(-x, 0.0), (x, 0.0)],
        Placement::AsymmetricPair => vec![(0.0, 0.0), (x, 0.0)],
        Placement::Ring => ring_positions(emitters.len(), x),
        Placement::Encircled => std::iter::once((0.0, 0.0))
            .chain(ring_positions(emitters.len() - 1, x))
            .collect(),
    };
    for (em, p) in emitters.iter_mut().zip(positions) {
        em.position = p;
    }
    Ok(())
}

/// Settings for a time-domain position sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct PositionSweepConfig {
    /// Base system; its emitters are repositioned by the placement.
    pub system: SystemParams,
    pub n_max: usize,
    /// Excitation cap of the basis; `None` for the full space.
    pub sector_cap: Option<usize>,
    pub convention: DephasingConvention,
    pub evolution: EvolutionConfig,
    pub initial: InitialState,
    pub cell_budget: usize,
    pub workers: Option<usize>,
}

impl PositionSweepConfig {
    pub fn new(system: SystemParams) -> Self {
        Self {
            system,
            n_max: 1,
            sector_cap: Some(1),
            convention: DephasingConvention::default(),
            evolution: EvolutionConfig::default(),
            initial: InitialState::Photon,
            cell_budget: DEFAULT_CELL_BUDGET,
            workers: None,
        }
    }

    pub fn spec(&self) -> Result<HilbertSpec> {
        let spec = HilbertSpec::new(self.n_max, self.system.n_emitters())?;
        Ok(match self.sector_cap {
            Some(k) => spec.with_sector_cap(k),
            None => spec,
        })
    }
}

/// Summary channels of a position sweep: `effective_coupling` (g_E/g₀),
/// `rabi_frequency` (meV, NaN when overdamped) and, with two or more
/// emitters, the final dark-state population (`final_P_A` for a pair,
/// `final_P_dark` otherwise).
pub fn run_position_sweep(cfg: &PositionSweepConfig, placement: Placement, axis: &SweepAxis) -> Result<SweepResult> {
    axis.validate()?;
    if !matches!(axis.kind, AxisKind::PositionX | AxisKind::RingRadius) {
        return Err(Error::InvalidSweep(format!(
            "position sweeps run over position_x or ring_radius, not {}",
            axis.kind
        )));
    }
    check_budget(axis.count, cfg.cell_budget)?;
    cfg.system.validate()?;
    cfg.evolution.validate()?;
    let n = cfg.system.n_emitters();
    placement.check(n)?;
    let spec = cfg.spec()?;
    let rho0 = cfg.initial.density(spec)?;

    let mut observables = vec!["effective_coupling".to_string(), "rabi_frequency".to_string()];
    let dark_channel = match n {
        2 => Some(CH_P_A),
        n if n > 2 => Some(CH_P_DARK),
        _ => None,
    };
    if let Some(ch) = dark_channel {
        observables.push(format!("final_{ch}"));
    }

    let outcomes = evaluate_cells(axis.count, cfg.workers, |cell| {
        let mut sys = cfg.system.clone();
        place_emitters(&mut sys.emitters, placement, axis.value(cell))?;
        let ge = effective_coupling(&sys.emitters, &sys.profile)?;
        let l = Liouvillian::from_system(&sys, spec, cfg.convention)?;
        let tr = evolve(&l, &rho0, &cfg.evolution)?;
        let ts = TimeSeries::from_trajectory(&tr)?;
        let rabi = rabi_frequency(&ts, CH_PHOTON)?.omega().unwrap_or(f64::NAN);
        let mut out = vec![ge, rabi];
        if let Some(ch) = dark_channel {
            out.push(*ts.channel(ch).and_then(|c| c.last()).expect("channel present"));
        }
        Ok(out)
    })?;
    let mut result = assemble(vec![axis.clone()], observables, outcomes);
    result.metadata.push(("placement".into(), placement.name().into()));
    Ok(result)
}
