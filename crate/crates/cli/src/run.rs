use std::fmt;

use nanoqed_core::cavity::in_coupling;
use nanoqed_core::lindblad::{evolve, steady_state_detailed, SteadyStateMethod};
use nanoqed_core::observables::{
    expectation, extinction_driven, extinction_empty, hybrid_states_analytic, rabi_frequency, CH_PHOTON,
};
use nanoqed_core::operators::annihilation;
use nanoqed_core::sweep::{run_map, run_position_sweep, MapConfig, PositionSweepConfig};
use nanoqed_core::{HilbertSpec, Liouvillian, Operator, RabiEstimate, SweepResult, TimeSeries, Trajectory};

use crate::config::{RunConfig, SweepConfig};
use crate::error::CliError;

/// What a run computes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Time evolution from the initial state.
    Simulate,
    /// Steady state of the driven system.
    Steady,
    /// The `[sweep]` block.
    Sweep,
    /// Closed-form hybrid eigenfrequencies.
    Hybrid,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Simulate => "simulate",
            Self::Steady => "steady",
            Self::Sweep => "sweep",
            Self::Hybrid => "hybrid",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Num(f64),
    Text(String),
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Self::Num(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Self::Num(v as f64)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Self::Text(v.into())
    }
}

/// Everything a run produces, ready for serialization.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultBundle {
    pub mode: Mode,
    pub config: RunConfig,
    /// Quantities recomputed from the configuration (couplings, ratios, κ_in).
    pub derived: Vec<(String, f64)>,
    pub timeseries: Option<TimeSeries>,
    pub sweep: Option<SweepResult>,
    pub summary: Vec<(String, Value)>,
}

/// g per emitter, κ_in and the coupling-to-loss ratios.
pub fn derived_quantities(cfg: &RunConfig) -> Vec<(String, f64)> {
    let sys = &cfg.system;
    let cav = &sys.cavity;
    let mut out = Vec::new();
    let kappa_in = sys.drive.as_ref().map(|d| d.kappa_in).unwrap_or_else(|| in_coupling(cav));
    out.push(("kappa_in".to_string(), kappa_in));
    // parse() has already checked that every emitter lies inside the profile
    let g = sys.couplings().unwrap_or_default();
    for (j, (g, em)) in g.iter().zip(&sys.emitters).enumerate() {
        let j = j + 1;
        out.push((format!("g_{j}"), *g));
        out.push((format!("g_{j}/kappa_vib"), g / em.kappa_vib));
        out.push((format!("g_{j}/kappa_out"), g / cav.kappa_out));
        out.push((format!("g_{j}^2/(kappa_out*kappa_vib)"), g * g / (cav.kappa_out * em.kappa_vib)));
    }
    out
}

fn spec_of(cfg: &RunConfig) -> nanoqed_core::Result<HilbertSpec> {
    let spec = HilbertSpec::new(cfg.model.n_max, cfg.system.n_emitters())?;
    Ok(match cfg.model.sector_cap {
        Some(k) => spec.with_sector_cap(k),
        None => spec,
    })
}

/// Largest trace and Hermiticity errors and the smallest eigenvalue over all snapshots.
pub fn snapshot_hygiene(tr: &Trajectory) -> (f64, f64, f64) {
    tr.states.iter().fold((0.0f64, 0.0f64, f64::INFINITY), |(t, h, e), rho| {
        (
            t.max((rho.trace() - 1.0).norm()),
            h.max(rho.hermiticity_error()),
            e.min(rho.min_eigenvalue()),
        )
    })
}

fn rabi_summary(summary: &mut Vec<(String, Value)>, est: RabiEstimate) {
    match est {
        RabiEstimate::Oscillating {
            omega,
            damping,
            extrema,
            ..
        } => {
            summary.push(("rabi_frequency".into(), omega.into()));
            summary.push(("rabi_damping".into(), damping.into()));
            summary.push(("rabi_extrema".into(), extrema.into()));
        }
        RabiEstimate::Overdamped { extrema } => {
            summary.push(("rabi_frequency".into(), f64::NAN.into()));
            summary.push(("rabi_damping".into(), f64::NAN.into()));
            summary.push(("rabi_extrema".into(), extrema.into()));
        }
    }
}

fn simulate(cfg: &RunConfig) -> Result<(TimeSeries, Vec<(String, Value)>), CliError> {
    let spec = spec_of(cfg)?;
    let l = Liouvillian::from_system(&cfg.system, spec, cfg.model.convention)?;
    let rho0 = cfg.initial.density(spec)?;
    let tr = evolve(&l, &rho0, &cfg.evolution)?;
    let ts = TimeSeries::from_trajectory(&tr)?;
    let mut summary: Vec<(String, Value)> = vec![
        ("hilbert_dim".into(), spec.dim().into()),
        ("snapshots".into(), tr.len().into()),
        ("accepted_steps".into(), tr.stats.accepted_steps.into()),
        ("rejected_steps".into(), tr.stats.rejected_steps.into()),
        ("positivity_warnings".into(), tr.warnings.len().into()),
    ];
    let (trace, herm, eig) = snapshot_hygiene(&tr);
    summary.push(("max_trace_error".into(), trace.into()));
    summary.push(("max_hermiticity_error".into(), herm.into()));
    summary.push(("min_eigenvalue".into(), eig.into()));
    for (name, values) in ts.channels() {
        summary.push((format!("final_{name}"), values.last().copied().unwrap_or(f64::NAN).into()));
    }
    rabi_summary(&mut summary, rabi_frequency(&ts, CH_PHOTON)?);
    Ok((ts, summary))
}

fn steady(cfg: &RunConfig) -> Result<Vec<(String, Value)>, CliError> {
    let drive = cfg
        .system
        .drive
        .as_ref()
        .ok_or_else(|| CliError::Usage("`steady` needs a [drive] block".into()))?;
    let spec = HilbertSpec::new(cfg.model.n_max, cfg.system.n_emitters())?;
    let l = Liouvillian::from_system(&cfg.system, spec, cfg.model.convention)?;
    let ss = steady_state_detailed(&l)?;
    let a = expectation(&annihilation(spec)?, &ss.rho)?;
    let mut summary: Vec<(String, Value)> = vec![
        ("photon_number".into(), expectation(&Operator::number(spec), &ss.rho)?.re.into()),
        ("re_a".into(), a.re.into()),
        ("im_a".into(), a.im.into()),
    ];
    let ext = if drive.alpha > 0.0 {
        extinction_driven(&ss.rho, drive)?
    } else {
        f64::NAN
    };
    summary.push(("extinction".into(), ext.into()));
    summary.push(("extinction_empty_cavity".into(), extinction_empty(&cfg.system.cavity, drive).into()));
    for j in 1..=spec.n_emitters() {
        let p: f64 = spec
            .basis()
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_excited(j))
            .map(|(i, _)| ss.rho.matrix()[(i, i)].re)
            .sum();
        summary.push((format!("pop_{j}"), p.into()));
    }
    summary.push(("residual".into(), ss.residual.into()));
    let method = match ss.method {
        SteadyStateMethod::SparseLu => "sparse_lu",
        SteadyStateMethod::Evolution => "evolution",
    };
    summary.push(("steady_method".into(), method.into()));
    Ok(summary)
}

fn sweep(cfg: &RunConfig, workers: Option<usize>) -> Result<(SweepResult, Vec<(String, Value)>), CliError> {
    let sweep_cfg = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Usage("`sweep` needs a [sweep] block".into()))?;
    let result = match sweep_cfg {
        SweepConfig::Map {
            axis1,
            axis2,
            observables,
            photon_number,
            cell_budget,
        } => {
            let map = MapConfig {
                system: cfg.system.clone(),
                n_max: cfg.model.n_max,
                convention: cfg.model.convention,
                photon_number: *photon_number,
                cell_budget: *cell_budget,
                workers,
            };
            run_map(&map, axis1, axis2, observables)?
        }
        SweepConfig::Position {
            placement,
            axis,
            cell_budget,
        } => {
            let pos = PositionSweepConfig {
                system: cfg.system.clone(),
                n_max: cfg.model.n_max,
                sector_cap: cfg.model.sector_cap,
                convention: cfg.model.convention,
                evolution: cfg.evolution.clone(),
                initial: cfg.initial.clone(),
                cell_budget: *cell_budget,
                workers,
            };
            run_position_sweep(&pos, *placement, axis)?
        }
    };
    let mut summary: Vec<(String, Value)> = vec![
        ("cells".into(), result.cells().into()),
        ("failed_cells".into(), result.failures.len().into()),
    ];
    for f in &result.failures {
        summary.push((format!("failure_cell_{}", f.cell), f.message.as_str().into()));
    }
    Ok((result, summary))
}

fn hybrid(cfg: &RunConfig) -> Result<Vec<(String, Value)>, CliError> {
    let sys = &cfg.system;
    let g = sys.couplings()?;
    let collective = g.iter().map(|g| g * g).sum::<f64>().sqrt();
    let h = hybrid_states_analytic(&sys.cavity, &sys.emitters[0], collective);
    Ok(vec![
        ("g_collective".into(), collective.into()),
        ("omega_plus_re".into(), h.omega_plus.re.into()),
        ("omega_plus_im".into(), h.omega_plus.im.into()),
        ("omega_minus_re".into(), h.omega_minus.re.into()),
        ("omega_minus_im".into(), h.omega_minus.im.into()),
        ("splitting".into(), h.splitting().into()),
    ])
}

/// Executes one run. `workers` only affects sweeps.
pub fn run(cfg: &RunConfig, mode: Mode, workers: Option<usize>) -> Result<ResultBundle, CliError> {
    let mut bundle = ResultBundle {
        mode,
        config: cfg.clone(),
        derived: derived_quantities(cfg),
        timeseries: None,
        sweep: None,
        summary: Vec::new(),
    };
    match mode {
        Mode::Simulate => {
            let (ts, summary) = simulate(cfg)?;
            bundle.timeseries = Some(ts);
            bundle.summary = summary;
        }
        Mode::Steady => bundle.summary = steady(cfg)?,
        Mode::Sweep => {
            let (result, summary) = sweep(cfg, workers)?;
            bundle.sweep = Some(result);
            bundle.summary = summary;
        }
        Mode::Hybrid => bundle.summary = hybrid(cfg)?,
    }
    Ok(bundle)
}

#[cfg(test)]
mod tests {
    use std::path::Path;

    use super::*;

    fn cfg(text: &str) -> RunConfig {
        RunConfig::parse(text, Path::new(".")).unwrap()
    }

    fn num(b: &ResultBundle, key: &str) -> f64 {
        match b.summary.iter().find(|(k, _)| k == key).map(|(_, v)| v) {
            Some(Value::Num(v)) => *v,
            other => panic!("{key}: {other:?}"),
        }
    }

    #[test]
    fn derived_ratios() {
        let c = cfg("[cavity]\ng0 = 50\n[emitter]\nkappa_vib = 25\n[initial]\nstate = photon\n");
        let d: std::collections::HashMap<_, _> = derived_quantities(&c).into_iter().collect();
        assert_eq!(d["g_1"], 50.0);
        assert_eq!(d["g_1/kappa_vib"], 2.0);
        let k = c.system.cavity.kappa_out;
        assert!((d["g_1^2/(kappa_out*kappa_vib)"] - 2500.0 / (25.0 * k)).abs() < 1e-12);
    }

    #[test]
    fn simulate_conserves_probability() {
        let c = cfg("[cavity]\n[emitter]\n[emitter]\n[initial]\nstate = emitter:1\n[model]\nn_max = 1\nsector_cap = 1\n[evolution]\nt_max = 50\n");
        let b = run(&c, Mode::Simulate, None).unwrap();
        assert!(num(&b, "max_trace_error") < 1e-10);
        assert!(num(&b, "min_eigenvalue") > -1e-8);
        assert_eq!(b.timeseries.as_ref().unwrap().times().last(), Some(&50.0));
    }

    #[test]
    fn steady_matches_empty_cavity_far_from_emitter() {
        let c = cfg("[cavity]\ng0 = 0\n[emitter]\n[drive]\nphoton_number = 1e-6\n");
        let b = run(&c, Mode::Steady, None).unwrap();
        assert!((num(&b, "photon_number") - 1e-6).abs() < 1e-15);
        assert!((num(&b, "extinction") / num(&b, "extinction_empty_cavity") - 1.0).abs() < 1e-9);
        assert!(run(&cfg("[cavity]\n[emitter]\n[initial]\nstate = photon\n"), Mode::Steady, None).is_err());
    }

    #[test]
    fn hybrid_splitting_of_co_located_pair() {
        let c = cfg("[cavity]\n[emitter]\nkappa_vib = 0\n[emitter]\nkappa_vib = 0\n[initial]\nstate = photon\n");
        let b = run(&c, Mode::Hybrid, None).unwrap();
        let g = num(&b, "g_collective");
        let k = c.system.cavity.kappa_out;
        assert!((num(&b, "splitting") - (4.0 * g * g - k * k).sqrt()).abs() < 1e-9);
    }

    #[test]
    fn sweep_reports_cells() {
        let c = cfg("[cavity]\n[emitter]\n[initial]\nstate = photon\n[sweep]\nkind = map\naxis1 = delta_cav, -50, 50, 3\naxis2 = delta_p, -50, 50, 4\n");
        let b = run(&c, Mode::Sweep, Some(2)).unwrap();
        assert_eq!(num(&b, "cells"), 12.0);
        assert_eq!(num(&b, "failed_cells"), 0.0);
    }
}
