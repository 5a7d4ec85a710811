use std::fmt;
use std::str::FromStr;

use super::axis::{AxisKind, SweepAxis};
use super::position::ring_positions;
use super::result::SweepResult;
use super::{assemble, check_budget, evaluate_cells, DEFAULT_CELL_BUDGET};
use crate::cavity::{drive_for_photon_number, in_coupling, DriveSpec, SystemParams};
use crate::error::{Error, Result};
use crate::lindblad::{steady_state, DephasingConvention, Liouvillian};
use crate::observables::{expectation, extinction_driven};
use crate::operators::{annihilation, HilbertSpec, Operator};

/// Steady-state quantity recorded in each map cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MapObservable {
    ReA,
    ImA,
    /// Quantum extinction cross-section, nm².
    Extinction,
    PhotonNumber,
    /// Excited-state population of emitter j (1-based).
    Population(usize),
    /// |Tr ρ − 1| of the cell's steady state.
    TraceError,
    /// max |ρ − ρ†| of the cell's steady state.
    HermiticityError,
    /// Smallest eigenvalue of the cell's steady state.
    MinEigenvalue,
}

impl fmt::Display for MapObservable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ReA => f.write_str("re_a"),
            Self::ImA => f.write_str("im_a"),
            Self::Extinction => f.write_str("extinction"),
            Self::PhotonNumber => f.write_str("photon_number"),
            Self::Population(j) => write!(f, "pop_{j}"),
            Self::TraceError => f.write_str("trace_error"),
            Self::HermiticityError => f.write_str("hermiticity_error"),
            Self::MinEigenvalue => f.write_str("min_eigenvalue"),
        }
    }
}

impl FromStr for MapObservable {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "re_a" => Self::ReA,
            "im_a" => Self::ImA,
            "extinction" => Self::Extinction,
            "photon_number" => Self::PhotonNumber,
            "trace_error" => Self::TraceError,
            "hermiticity_error" => Self::HermiticityError,
            "min_eigenvalue" => Self::MinEigenvalue,
            _ => match s.strip_prefix("pop_").and_then(|j| j.parse::<usize>().ok()) {
                Some(j) if j >= 1 => Self::Population(j),
                _ => return Err(Error::InvalidSweep(format!("unknown observable `{s}`"))),
            },
        })
    }
}

/// Settings shared by every cell of a steady-state map.
#[derive(Clone, Debug, PartialEq)]
pub struct MapConfig {
    /// Base system. Without a drive, one is added at the cavity resonance
    /// with α calibrated to `photon_number` photons in the empty cavity.
    pub system: SystemParams,
    pub n_max: usize,
    pub convention: DephasingConvention,
    pub photon_number: f64,
    pub cell_budget: usize,
    /// Worker threads; `None` uses rayon's default.
    pub workers: Option<usize>,
}

impl MapConfig {
    pub fn new(system: SystemParams) -> Self {
        Self {
            system,
            n_max: 2,
            convention: DephasingConvention::default(),
            photon_number: 1e-6,
            cell_budget: DEFAULT_CELL_BUDGET,
            workers: None,
        }
    }

    /// The drive used by every cell before the axes are applied.
    pub fn base_drive(&self) -> Result<DriveSpec> {
        if let Some(d) = &self.system.drive {
            return Ok(d.clone());
        }
        let cav = &self.system.cavity;
        let mut drive = DriveSpec {
            omega_p: cav.omega_cav,
            alpha: 0.0,
            kappa_in: in_coupling(cav),
        };
        drive.alpha = drive_for_photon_number(cav, &drive, self.photon_number)?;
        Ok(drive)
    }
}

/// Reference transition for detuning axes: emitter 1, or the cavity.
fn reference_frequency(sys: &SystemParams) -> f64 {
    sys.emitters.first().map(|e| e.omega_qe).unwrap_or(sys.cavity.omega_cav)
}

pub(crate) fn apply_axis(sys: &mut SystemParams, kind: AxisKind, value: f64, reference: f64) -> Result<()> {
    match kind {
        AxisKind::DeltaP => {
            let d = sys
                .drive
                .as_mut()
                .ok_or_else(|| Error::InvalidSweep("delta_p needs a driven system".into()))?;
            d.omega_p = reference + value;
        }
        AxisKind::DeltaCav => sys.cavity.omega_cav = reference + value,
        AxisKind::GScale => sys.coupling_scale = value,
        AxisKind::PositionX => {
            let em = sys
                .emitters
                .first_mut()
                .ok_or_else(|| Error::TooFewEmitters { required: 1, found: 0 })?;
            em.position.0 = value;
        }
        AxisKind::RingRadius => {
            let ring = ring_positions(sys.emitters.len(), value);
            for (em, p) in sys.emitters.iter_mut().zip(ring) {
                em.position = p;
            }
        }
    }
    Ok(())
}

/// Steady-state observables over the grid `axis1 × axis2`.
///
/// A cell whose solve fails holds NaN in every grid and is listed in
/// [`SweepResult::failures`]; the remaining cells are still evaluated.
pub fn run_map(
    cfg: &MapConfig,
    axis1: &SweepAxis,
    axis2: &SweepAxis,
    observables: &[MapObservable],
) -> Result<SweepResult> {
    axis1.validate()?;
    axis2.validate()?;
    if axis1.kind == axis2.kind {
        return Err(Error::InvalidSweep(format!("both axes are {}", axis1.kind)));
    }
    if observables.is_empty() {
        return Err(Error::InvalidSweep("no observables requested".into()));
    }
    let cells = axis1.count * axis2.count;
    check_budget(cells, cfg.cell_budget)?;
    cfg.system.validate()?;
    let n_em = cfg.system.n_emitters();
    for o in observables {
        if let MapObservable::Population(j) = o {
            if *j > n_em {
                return Err(Error::EmitterIndex { index: *j, n_emitters: n_em });
            }
        }
    }
    let mut base = cfg.system.clone();
    base.drive = Some(cfg.base_drive()?);
    let reference = reference_frequency(&base);
    let spec = HilbertSpec::new(cfg.n_max, n_em)?;
    let number = Operator::number(spec);
    let a = annihilation(spec)?;

    let outcomes = evaluate_cells(cells, cfg.workers, |cell| {
        let (i, j) = (cell / axis2.count, cell % axis2.count);
        let mut sys = base.clone();
        apply_axis(&mut sys, axis1.kind, axis1.value(i), reference)?;
        apply_axis(&mut sys, axis2.kind, axis2.value(j), reference)?;
        let l = Liouvillian::from_system(&sys, spec, cfg.convention)?;
        let rho = steady_state(&l)?;
        let drive = sys.drive.as_ref().expect("set above");
        let field = expectation(&a, &rho)?;
        observables
            .iter()
            .map(|o| {
                Ok(match o {
                    MapObservable::ReA => field.re,
                    MapObservable::ImA => field.im,
                    MapObservable::Extinction => extinction_driven(&rho, drive)?,
                    MapObservable::PhotonNumber => expectation(&number, &rho)?.re,
                    MapObservable::Population(k) => {
                        let idx: Vec<usize> = spec
                            .basis()
                            .iter()
                            .enumerate()
                            .filter(|(_, s)| s.is_excited(*k))
                            .map(|(n, _)| n)
                            .collect();
                        idx.iter().map(|&n| rho.matrix()[(n, n)].re).sum()
                    }
                    MapObservable::TraceError => (rho.trace() - 1.0).norm(),
                    MapObservable::HermiticityError => rho.hermiticity_error(),
                    MapObservable::MinEigenvalue => rho.min_eigenvalue(),
                })
            })
            .collect()
    })?;
    Ok(assemble(
        vec![axis1.clone(), axis2.clone()],
        observables.iter().map(|o| o.to_string()).collect(),
        outcomes,
    ))
}
