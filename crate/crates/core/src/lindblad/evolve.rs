use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::liouvillian::Liouvillian;
use crate::error::{Error, Result};
use crate::operators::{CsrMatrix, DensityMatrix};
use crate::units::HBAR_MEV_FS;

/// Snapshots whose smallest eigenvalue falls below this are flagged.
pub const POSITIVITY_WARNING: f64 = -1e-6;

/// Largest superoperator dimension D² accepted by the dense propagator.
pub const EXPM_MAX_SUPEROP_DIM: usize = 10_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum IntegrationMethod {
    /// Classical RK4 with step `dt_initial` (shortened to land on records).
    Rk4Fixed,
    /// Dormand–Prince 5(4) with error control.
    #[default]
    Rk45Adaptive,
    /// Dense exp(L Δt) applied between records.
    ExpmPropagator,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionConfig {
    /// End time, fs.
    pub t_max: f64,
    /// Fixed step (RK4) or first trial step (RK45), fs.
    pub dt_initial: f64,
    pub method: IntegrationMethod,
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Records are taken every `record_stride · dt_initial` fs, and at `t_max`.
    pub record_stride: usize,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        Self {
            t_max: 500.0,
            dt_initial: 0.05,
            method: IntegrationMethod::Rk45Adaptive,
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            record_stride: 10,
        }
    }
}

impl EvolutionConfig {
    pub fn validate(&self) -> Result<()> {
        let checks: [(&'static str, f64); 4] = [
            ("t_max", self.t_max),
            ("dt_initial", self.dt_initial),
            ("rel_tol", self.rel_tol),
            ("abs_tol", self.abs_tol),
        ];
        for (name, v) in checks {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    value: v,
                    reason: "must be finite and > 0",
                });
            }
        }
        if self.record_stride == 0 {
            return Err(Error::InvalidParameter {
                name: "record_stride",
                value: 0.0,
                reason: "must be >= 1",
            });
        }
        Ok(())
    }

    /// Spacing between records, fs.
    pub fn record_interval(&self) -> f64 {
        self.dt_initial * self.record_stride as f64
    }

    /// 0, Δ, 2Δ, … up to `t_max`, with `t_max` appended when off-grid.
    pub fn record_times(&self) -> Vec<f64> {
        let dt = self.record_interval();
        let n = (self.t_max / dt + 1e-9).floor() as usize;
        let mut times: Vec<f64> = (0..=n).map(|k| k as f64 * dt).collect();
        if self.t_max - times[n] > 1e-9 * dt {
            times.push(self.t_max);
        }
        times
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PositivityWarning {
    pub t: f64,
    pub min_eigenvalue: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EvolutionStats {
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

/// Recorded states of one evolution.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    /// Record times, fs.
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    pub warnings: Vec<PositivityWarning>,
    pub stats: EvolutionStats,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<&DensityMatrix> {
        self.states.last()
    }
}

/// Integrates dρ/dt = L ρ / ħ from `rho0` at t = 0.
pub fn evolve(l: &Liouvillian, rho0: &DensityMatrix, cfg: &EvolutionConfig) -> Result<Trajectory> {
    cfg.validate()?;
    l.spec().check_same(&rho0.spec())?;
    rho0.validate()?;
    let times = cfg.record_times();
    let d = l.dim();
    let gen = l.generator_per_fs();
    let mut recorder = Recorder::new(l, times.len());
    let mut y = rho0.vectorize();
    recorder.record(times[0], &y)?;
    let mut stats = EvolutionStats::default();

    match cfg.method {
        IntegrationMethod::Rk4Fixed => {
            let mut ws = Rk4Workspace::new(y.len());
            for w in times.windows(2) {
                let span = w[1] - w[0];
                let m = ((span / cfg.dt_initial) - 1e-9).ceil().max(1.0) as usize;
                let h = span / m as f64;
                for _ in 0..m {
                    ws.step(&gen, &mut y, h);
                    hermitize_vec(&mut y, d);
                    stats.accepted_steps += 1;
                }
                recorder.record(w[1], &y)?;
            }
        }
        IntegrationMethod::Rk45Adaptive => {
            let mut dp = DormandPrince::new(&gen, &y, cfg.dt_initial, cfg.rel_tol, cfg.abs_tol);
            let mut t = 0.0;
            for &t_next in &times[1..] {
                dp.advance(&mut y, &mut t, t_next, d, &mut stats)?;
                recorder.record(t_next, &y)?;
            }
        }
        IntegrationMethod::ExpmPropagator => {
            let mut cache: Option<(f64, DMatrix<C64>)> = None;
            for w in times.windows(2) {
                let span = w[1] - w[0];
                let reuse = matches!(&cache, Some((s, _)) if (s - span).abs() <= 1e-12 * span);
                if !reuse {
                    cache = Some((span, propagator_expm(l, span)?));
                }
                let p = &cache.as_ref().expect("set above").1;
                let v = nalgebra::DVector::from_column_slice(&y);
                y = (p * v).as_slice().to_vec();
                hermitize_vec(&mut y, d);
                stats.accepted_steps += 1;
                recorder.record(w[1], &y)?;
            }
        }
    }
    Ok(recorder.finish(stats))
}

/// Dense exp(L t / ħ) for `t` in fs.
pub fn propagator_expm(l: &Liouvillian, t: f64) -> Result<DMatrix<C64>> {
    let n = l.superop().dim();
    if n > EXPM_MAX_SUPEROP_DIM {
        return Err(Error::SizeGuard {
            what: "superoperator dimension for the dense propagator",
            size: n,
            limit: EXPM_MAX_SUPEROP_DIM,
        });
    }
    if t == 0.0 {
        return Ok(DMatrix::identity(n, n));
    }
    let m = l.superop().to_dense() * C64::new(t / HBAR_MEV_FS, 0.0);
    Ok(m.exp())
}

/// Replaces vec(ρ) by vec((ρ + ρ†)/2) in place.
pub(crate) fn hermitize_vec(v: &mut [C64], d: usize) {
    for j in 0..d {
        v[j * d + j].im = 0.0;
        for i in (j + 1)..d {
            let (a, b) = (v[j * d + i], v[i * d + j]);
            let m = (a + b.conj()) * 0.5;
            v[j * d + i] = m;
            v[i * d + j] = m.conj();
        }
    }
}

struct Recorder<'a> {
    l: &'a Liouvillian,
    times: Vec<f64>,
    states: Vec<DensityMatrix>,
    warnings: Vec<PositivityWarning>,
}

impl<'a> Recorder<'a> {
    fn new(l: &'a Liouvillian, n: usize) -> Self {
        Self {
            l,
            times: Vec::with_capacity(n),
            states: Vec::with_capacity(n),
            warnings: Vec::new(),
        }
    }

    fn record(&mut self, t: f64, y: &[C64]) -> Result<()> {
        if y.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidState(format!("non-finite state at t = {t} fs")));
        }
        let rho = DensityMatrix::devectorize(self.l.spec(), y)?;
        let min_eig = rho.min_eigenvalue();
        if min_eig < POSITIVITY_WARNING {
            log::warn!("positivity violation at t = {t} fs: min eigenvalue {min_eig:e}");
            self.warnings.push(PositivityWarning {
                t,
                min_eigenvalue: min_eig,
            });
        }
        self.times.push(t);
        self.states.push(rho);
        Ok(())
    }

    fn finish(self, stats: EvolutionStats) -> Trajectory {
        Trajectory {
            times: self.times,
            states: self.states,
            warnings: self.warnings,
            stats,
        }
    }
}

struct Rk4Workspace {
    k: [Vec<C64>; 4],
    tmp: Vec<C64>,
}

impl Rk4Workspace {
    fn new(n: usize) -> Self {
        let z = vec![C64::new(0.0, 0.0); n];
        Self {
            k: [z.clone(), z.clone(), z.clone(), z.clone()],
            tmp: z,
        }
    }

    fn step(&mut self, gen: &CsrMatrix, y: &mut [C64], h: f64) {
        let [k1, k2, k3, k4] = &mut self.k;
        gen.mul_vec_into(y, k1);
        axpy_into(&mut self.tmp, y, 0.5 * h, k1);
        gen.mul_vec_into(&self.tmp, k2);
        axpy_into(&mut self.tmp, y, 0.5 * h, k2);
        gen.mul_vec_into(&self.tmp, k3);
        axpy_into(&mut self.tmp, y, h, k3);
        gen.mul_vec_into(&self.tmp, k4);
        let s = h / 6.0;
        for i in 0..y.len() {
            y[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * s;
        }
    }
}

/// out = y + a·x
fn axpy_into(out: &mut [C64], y: &[C64], a: f64, x: &[C64]) {
    for ((o, &yi), &xi) in out.iter_mut().zip(y).zip(x) {
        *o = yi + xi * a;
    }
}

const DP_A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth-order minus embedded fourth-order weights.
const DP_E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

struct DormandPrince<'a> {
    gen: &'a CsrMatrix,
    k: Vec<Vec<C64>>,
    tmp: Vec<C64>,
    h: f64,
    rtol: f64,
    atol: f64,
}

impl<'a> DormandPrince<'a> {
    fn new(gen: &'a CsrMatrix, y: &[C64], h: f64, rtol: f64, atol: f64) -> Self {
        let n = y.len();
        let mut k = vec![vec![C64::new(0.0, 0.0); n]; 7];
        gen.mul_vec_into(y, &mut k[0]);
        Self {
            gen,
            k,
            tmp: vec![C64::new(0.0, 0.0); n],
            h,
            rtol,
            atol,
        }
    }

    /// Steps from `t` to exactly `t_end`.
    fn advance(&mut self, y: &mut Vec<C64>, t: &mut f64, t_end: f64, d: usize, stats: &mut EvolutionStats) -> Result<()> {
        while *t < t_end {
            let remaining = t_end - *t;
            let last = self.h >= remaining * (1.0 - 1e-12);
            let h = if last { remaining } else { self.h };
            if h < 16.0 * f64::EPSILON * t.abs().max(1.0) {
                return Err(Error::StepUnderflow { t: *t, step: h });
            }
            for s in 0..6 {
                self.tmp.copy_from_slice(y);
                for (c, &a) in DP_A[s].iter().enumerate().take(s + 1) {
                    if a != 0.0 {
                        let ha = h * a;
                        for (o, &ki) in self.tmp.iter_mut().zip(&self.k[c]) {
                            *o += ki * ha;
                        }
                    }
                }
                let (_, rest) = self.k.split_at_mut(s + 1);
                self.gen.mul_vec_into(&self.tmp, &mut rest[0]);
            }
            // tmp now holds the fifth-order solution, k[6] its derivative
            let mut acc = 0.0;
            for i in 0..y.len() {
                let mut e = C64::new(0.0, 0.0);
                for (s, &w) in DP_E.iter().enumerate() {
                    if w != 0.0 {
                        e += self.k[s][i] * w;
                    }
                }
                let scale = self.atol + self.rtol * y[i].norm().max(self.tmp[i].norm());
                let r = (e * h).norm() / scale;
                acc += r * r;
            }
            let err = (acc / y.len() as f64).sqrt();
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            if err <= 1.0 {
                std::mem::swap(y, &mut self.tmp);
                hermitize_vec(y, d);
                self.k.swap(0, 6);
                hermitize_vec(&mut self.k[0], d);
                *t = if last { t_end } else { *t + h };
                stats.accepted_steps += 1;
                // a shortened final step says nothing about the natural step size
                if !last || factor < 1.0 {
                    self.h = h * factor;
                }
            } else {
                stats.rejected_steps += 1;
                self.h = h * factor;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cavity::{EmitterSpec, NanocavityParams, SystemParams};
    use crate::lindblad::{build_liouvillian, DephasingConvention};
    use crate::operators::{BasisState, HilbertSpec, Operator};

    fn photon_number(rho: &DensityMatrix) -> f64 {
        let n = Operator::number(rho.spec()).to_dense();
        (n * rho.matrix()).trace().re
    }

    fn empty_cavity() -> (Liouvillian, DensityMatrix, f64) {
        let cav = NanocavityParams::default();
        let spec = HilbertSpec::new(1, 0).unwrap();
        let l = build_liouvillian(&Operator::zeros(spec), &cav, &[], DephasingConvention::Literal).unwrap();
        let rho0 = DensityMatrix::basis_state(spec, &BasisState::new(1, &[])).unwrap();
        (l, rho0, cav.kappa_out)
    }

    #[test]
    fn record_grid() {
        let cfg = EvolutionConfig {
            t_max: 1.05,
            dt_initial: 0.1,
            record_stride: 5,
            ..Default::default()
        };
        let t = cfg.record_times();
        assert_eq!(t.len(), 4);
        assert!((t[2] - 1.0).abs() < 1e-15 && t[3] == 1.05);
    }

    #[test]
    fn empty_cavity_decay_all_methods() {
        let (l, rho0, k) = empty_cavity();
        for method in [IntegrationMethod::Rk4Fixed, IntegrationMethod::Rk45Adaptive, IntegrationMethod::ExpmPropagator] {
            let cfg = EvolutionConfig {
                t_max: 40.0,
                dt_initial: 0.02,
                method,
                record_stride: 50,
                ..Default::default()
            };
            let tr = evolve(&l, &rho0, &cfg).unwrap();
            for (t, rho) in tr.times.iter().zip(&tr.states) {
                let exact = (-2.0 * k * t / HBAR_MEV_FS).exp();
                let got = photon_number(rho);
                assert!((got - exact).abs() <= 1e-8 * exact, "{method:?} t={t}: {got} vs {exact}");
            }
        }
    }

    #[test]
    fn semigroup_property() {
        let sys = SystemParams::new(vec![EmitterSpec::at(0.0, 0.0)]);
        let spec = HilbertSpec::new(2, 1).unwrap();
        let l = Liouvillian::from_system(&sys, spec, DephasingConvention::Literal).unwrap();
        let p1 = propagator_expm(&l, 3.0).unwrap();
        let p2 = propagator_expm(&l, 4.5).unwrap();
        let p12 = propagator_expm(&l, 7.5).unwrap();
        assert!((&p1 * &p2 - p12).camax() < 1e-10);
        let id = propagator_expm(&l, 0.0).unwrap();
        assert_eq!(id, DMatrix::identity(36, 36));
    }

    #[test]
    fn expm_size_guard() {
        // D = 3 · 2⁶ = 192, D² = 36864
        let spec = HilbertSpec::new(2, 6).unwrap();
        let ems = vec![EmitterSpec::default(); 6];
        let l = build_liouvillian(&Operator::zeros(spec), &NanocavityParams::default(), &ems, DephasingConvention::Literal)
            .unwrap();
        assert!(matches!(propagator_expm(&l, 1.0), Err(Error::SizeGuard { .. })));
    }

    #[test]
    fn underflow_is_reported() {
        let (l, rho0, _) = empty_cavity();
        let cfg = EvolutionConfig {
            t_max: 10.0,
            dt_initial: 1.0,
            rel_tol: 1e-300,
            abs_tol: 1e-300,
            ..Default::default()
        };
        assert!(matches!(evolve(&l, &rho0, &cfg), Err(Error::StepUnderflow { .. })));
    }

    #[test]
    fn hermitize_vec_matches_dense() {
        let d = 3;
        let m = DMatrix::from_fn(d, d, |i, j| C64::new(i as f64 + 0.3 * j as f64, (i * j) as f64 - 1.0));
        let mut v = m.as_slice().to_vec();
        hermitize_vec(&mut v, d);
        let want = (&m + m.adjoint()) * C64::new(0.5, 0.0);
        assert!((DMatrix::from_column_slice(d, d, &v) - want).camax() < 1e-15);
    }
}
