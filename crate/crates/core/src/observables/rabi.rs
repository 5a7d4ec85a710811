use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rustfft::FftPlanner;

use super::series::TimeSeries;
use crate::error::{Error, Result};
use crate::units::HBAR_MEV_FS;

/// Extrema whose swing from the previous extremum is smaller than this
/// are treated as noise.
pub const RABI_NOISE_FLOOR: f64 = 1e-6;
const MIN_EXTREMA: usize = 3;
const PENCIL_MAX_SAMPLES: usize = 320;
const PENCIL_MAX_ORDER: usize = 12;
const PENCIL_SV_CUTOFF: f64 = 1e-7;
const ZERO_PAD: usize = 16;

#[derive(Clone, Debug, PartialEq)]
pub enum RabiEstimate {
    Oscillating {
        /// ħ × angular frequency of the dominant oscillation, meV.
        omega: f64,
        /// Amplitude decay rate of that component, meV.
        damping: f64,
        /// Interpolated spectral peak, when the spectrum has one.
        fft_omega: Option<f64>,
        extrema: usize,
    },
    /// Fewer than three extrema above [`RABI_NOISE_FLOOR`].
    Overdamped { extrema: usize },
}

impl RabiEstimate {
    pub fn omega(&self) -> Option<f64> {
        match self {
            Self::Oscillating { omega, .. } => Some(*omega),
            Self::Overdamped { .. } => None,
        }
    }
}

/// Dominant oscillation frequency of a channel.
///
/// A zero-padded DFT of the linearly detrended channel, with parabolic
/// interpolation of the peak, locates the oscillation. Because strongly
/// damped signals broaden and pull that peak, the estimate is refined by a
/// matrix-pencil fit of damped exponentials; the fitted pole closest to the
/// spectral peak is reported.
pub fn rabi_frequency(series: &TimeSeries, channel: &str) -> Result<RabiEstimate> {
    let y = series
        .channel(channel)
        .ok_or_else(|| Error::InvalidSweep(format!("no channel named {channel}")))?;
    let t = series.times();
    let dt = uniform_step(t)?;

    let end = y.last().copied().unwrap_or(0.0);
    let active = y
        .iter()
        .rposition(|v| (v - end).abs() > RABI_NOISE_FLOOR)
        .map(|k| (k + 2).min(y.len()))
        .unwrap_or(0);
    let y = &y[..active];
    let extrema = count_extrema(y, RABI_NOISE_FLOOR);
    if extrema < MIN_EXTREMA || y.len() < 8 {
        return Ok(RabiEstimate::Overdamped { extrema });
    }

    let fft_omega = spectral_peak(y, dt);
    let mut stride = y.len().div_ceil(PENCIL_MAX_SAMPLES).max(1);
    if let Some(w) = fft_omega {
        // keep at least ten samples per period
        let period = 2.0 * PI * HBAR_MEV_FS / w;
        stride = stride.min(((period / (10.0 * dt)) as usize).max(1));
    }
    let decimated: Vec<f64> = y.iter().step_by(stride).copied().collect();
    let poles = matrix_pencil(&decimated, dt * stride as f64)?;

    let oscillating: Vec<&Pole> = poles.iter().filter(|p| p.omega > 1e-9).collect();
    let chosen = match fft_omega {
        Some(w) => oscillating
            .iter()
            .min_by(|a, b| (a.omega - w).abs().total_cmp(&(b.omega - w).abs())),
        None => oscillating.iter().max_by(|a, b| a.weight.total_cmp(&b.weight)),
    };
    Ok(match chosen {
        Some(p) => RabiEstimate::Oscillating {
            omega: p.omega,
            damping: p.damping,
            fft_omega,
            extrema,
        },
        None => RabiEstimate::Overdamped { extrema },
    })
}

fn uniform_step(t: &[f64]) -> Result<f64> {
    if t.len() < 2 {
        return Err(Error::InvalidParameter {
            name: "times",
            value: t.len() as f64,
            reason: "at least two samples are required",
        });
    }
    let dt = t[1] - t[0];
    if t.windows(2).any(|w| ((w[1] - w[0]) - dt).abs() > 1e-6 * dt) {
        return Err(Error::InvalidParameter {
            name: "times",
            value: dt,
            reason: "samples must be uniformly spaced",
        });
    }
    Ok(dt)
}

/// Turning points whose swing from the previous turning point (or the
/// first sample) exceeds `floor`.
fn count_extrema(y: &[f64], floor: f64) -> usize {
    let mut count = 0;
    let mut last = y.first().copied().unwrap_or(0.0);
    for k in 1..y.len().saturating_sub(1) {
        let (a, b, c) = (y[k - 1], y[k], y[k + 1]);
        let turning = (b > a && b >= c) || (b < a && b <= c);
        if turning && (b - last).abs() > floor {
            count += 1;
            last = b;
        }
    }
    count
}

/// Interpolated position of the strongest local maximum of the amplitude
/// spectrum above zero frequency, meV.
fn spectral_peak(y: &[f64], dt: f64) -> Option<f64> {
    let n = y.len();
    let tm = (n as f64 - 1.0) / 2.0;
    let ym = y.iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (k, v) in y.iter().enumerate() {
        let x = k as f64 - tm;
        sxy += x * (v - ym);
        sxx += x * x;
    }
    let slope = sxy / sxx;
    let npad = (n * ZERO_PAD).next_power_of_two();
    let mut buf = vec![C64::new(0.0, 0.0); npad];
    for (k, v) in y.iter().enumerate() {
        buf[k] = C64::new(v - ym - slope * (k as f64 - tm), 0.0);
    }
    FftPlanner::new().plan_fft_forward(npad).process(&mut buf);
    let mag: Vec<f64> = buf[..npad / 2].iter().map(|z| z.norm()).collect();
    let k = (1..mag.len() - 1)
        .filter(|&k| mag[k] > mag[k - 1] && mag[k] >= mag[k + 1])
        .max_by(|&a, &b| mag[a].total_cmp(&mag[b]))?;
    let (a, b, c) = (mag[k - 1], mag[k], mag[k + 1]);
    let denom = a - 2.0 * b + c;
    let shift = if denom != 0.0 { 0.5 * (a - c) / denom } else { 0.0 };
    let f = (k as f64 + shift) / (npad as f64 * dt);
    Some(2.0 * PI * f * HBAR_MEV_FS)
}

struct Pole {
    /// meV
    omega: f64,
    /// meV
    damping: f64,
    /// |amplitude| of the fitted component
    weight: f64,
}

/// Damped-exponential decomposition y_k ≈ Σ c_m z_m^k.
fn matrix_pencil(y: &[f64], dt: f64) -> Result<Vec<Pole>> {
    let n = y.len();
    let l = n / 2;
    let rows = n - l;
    let hankel = DMatrix::from_fn(rows, l + 1, |i, j| y[i + j]);
    let svd = hankel.svd(false, true);
    let v_t = svd.v_t.ok_or_else(|| Error::InvalidState("SVD failed".into()))?;
    let s0 = svd.singular_values[0];
    if s0 == 0.0 {
        return Ok(Vec::new());
    }
    // singular values come sorted in decreasing order
    let order = svd
        .singular_values
        .iter()
        .take_while(|&&s| s > PENCIL_SV_CUTOFF * s0)
        .count()
        .clamp(1, PENCIL_MAX_ORDER);
    let v = v_t.rows(0, order).transpose();
    let v1 = v.rows(0, l).into_owned();
    let v2 = v.rows(1, l).into_owned();
    let a = v1
        .pseudo_inverse(1e-14)
        .map_err(|e| Error::InvalidState(e.to_string()))?
        * v2;
    let z: Vec<C64> = a.complex_eigenvalues().iter().copied().collect();

    let vander = DMatrix::from_fn(n, z.len(), |k, m| z[m].powu(k as u32));
    let rhs = DVector::from_iterator(n, y.iter().map(|&v| C64::new(v, 0.0)));
    let amps = vander
        .svd(true, true)
        .solve(&rhs, 1e-14)
        .map_err(|e| Error::InvalidState(e.to_string()))?;
    Ok(z
        .iter()
        .zip(amps.iter())
        .filter(|(z, _)| z.norm() > 0.0)
        .map(|(z, c)| {
            let s = z.ln() / dt;
            Pole {
                omega: s.im.abs() * HBAR_MEV_FS,
                damping: -s.re * HBAR_MEV_FS,
                weight: c.norm(),
            }
        })
        .collect())
}

/// Single-exponential fit A·exp(−Γ t/ħ) to the positive samples at t ≥ `t_from`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayFit {
    /// Γ, meV.
    pub rate: f64,
    pub amplitude: f64,
}

impl DecayFit {
    /// 1/e lifetime, fs.
    pub fn lifetime(&self) -> f64 {
        HBAR_MEV_FS / self.rate
    }
}

/// Log-linear least-squares fit of an exponential decay.
pub fn fit_exponential_decay(times: &[f64], values: &[f64], t_from: f64) -> Result<DecayFit> {
    if times.len() != values.len() {
        return Err(Error::DimensionMismatch {
            expected: times.len(),
            found: values.len(),
        });
    }
    let pts: Vec<(f64, f64)> = times
        .iter()
        .zip(values)
        .filter(|(&t, &v)| t >= t_from && v > 0.0)
        .map(|(&t, &v)| (t, v.ln()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::InvalidParameter {
            name: "t_from",
            value: t_from,
            reason: "fewer than three positive samples to fit",
        });
    }
    let n = pts.len() as f64;
    let tm = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let lm = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (t, l) in &pts {
        sxy += (t - tm) * (l - lm);
        sxx += (t - tm) * (t - tm);
    }
    let slope = sxy / sxx;
    Ok(DecayFit {
        rate: -slope * HBAR_MEV_FS,
        amplitude: (lm - slope * tm).exp(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(dt: f64, n: usize, f: impl Fn(f64) -> f64) -> TimeSeries {
        let times: Vec<f64> = (0..n).map(|k| k as f64 * dt).collect();
        let vals = times.iter().map(|&t| f(t)).collect();
        let mut ts = TimeSeries::new(times).unwrap();
        ts.push_channel("y", vals).unwrap();
        ts
    }

    #[test]
    fn synthetic_damped_cosine() {
        for (omega_mev, tau) in [(65.9, 200.0), (65.9, 16.0), (110.0, 40.0), (20.0, 1000.0)] {
            let w = omega_mev / HBAR_MEV_FS;
            let ts = series(0.5, 4000, |t| (-t / tau).exp() * (w * t).cos());
            let est = rabi_frequency(&ts, "y").unwrap();
            let got = est.omega().unwrap();
            assert!((got - omega_mev).abs() < 0.005 * omega_mev, "{omega_mev} {tau}: {est:?}");
        }
    }

    #[test]
    fn population_like_signal() {
        // e^{-κt}(1 + cos Ωt)/2 plus a decaying offset
        let (omega, kappa) = (65.9, 40.5);
        let (w, k) = (omega / HBAR_MEV_FS, kappa / HBAR_MEV_FS);
        let ts = series(0.25, 4000, |t| (-k * t).exp() * (0.5 + 0.3 * (w * t).cos() + 0.2 * (w * t).sin()));
        let got = rabi_frequency(&ts, "y").unwrap().omega().unwrap();
        assert!((got - omega).abs() < 1e-4 * omega, "{got}");
    }

    #[test]
    fn pure_decay_is_overdamped() {
        let ts = series(0.5, 1000, |t| (-t / 30.0).exp());
        assert!(matches!(rabi_frequency(&ts, "y").unwrap(), RabiEstimate::Overdamped { .. }));
    }

    #[test]
    fn missing_channel() {
        let ts = series(1.0, 10, |t| t);
        assert!(rabi_frequency(&ts, "nope").is_err());
    }

    #[test]
    fn exponential_fit() {
        let t: Vec<f64> = (0..200).map(|k| k as f64).collect();
        let v: Vec<f64> = t.iter().map(|t| 0.5 * (-t * 3.0 / HBAR_MEV_FS).exp()).collect();
        let fit = fit_exponential_decay(&t, &v, 10.0).unwrap();
        assert!((fit.rate - 3.0).abs() < 1e-10 && (fit.amplitude - 0.5).abs() < 1e-10);
        assert!((fit.lifetime() - HBAR_MEV_FS / 3.0).abs() < 1e-6);
        assert!(fit_exponential_decay(&t, &v, 1e6).is_err());
    }
}
