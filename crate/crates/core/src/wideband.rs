//! Energy and photon-number functionals of sampled voltage traces.
//!
//! Transform convention: a trace of `N` samples is zero-padded to
//! `M = next_power_of_two(2N)` and transformed as
//! `V_k = dt * sum_i v_i exp(-2 pi i k i / M)` on the grid `nu_k = k df`,
//! `df = 1 / (M dt)`. With this scaling `sum |v|^2 dt = sum |V|^2 df` exactly.
//!
//! The causal transform `w(t) = int_0^inf v(t - tau) / sqrt(tau) dtau` has
//! the multiplier `K(nu) = (i 2 pi nu)^(-1/2) Gamma(1/2)`, i.e. modulus
//! `1 / sqrt(2 |nu|)` and phase `-pi/4 sign(nu)`. The DC and Nyquist bins
//! are zeroed: the kernel diverges at DC and has no real value at Nyquist.
//! This is a high-pass at `df`.
//!
//! Photon numbers are reported as the raw functional; no vacuum
//! contribution is subtracted.

use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::WidebandError;
use crate::sampler::TimeTrace;

/// Planck constant in J s.
pub const PLANCK: f64 = 6.626_070_15e-34;

/// Shortest trace accepted by the spectral transforms.
pub const MIN_LEN: usize = 64;

/// Sampled spectrum of a zero-padded trace.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    /// Frequency resolution in Hz.
    pub df: f64,
    /// Two-sided bins in FFT order, in V/Hz.
    pub bins: Vec<Complex64>,
    /// Line impedance in ohms.
    pub z: f64,
}

impl Spectrum {
    /// Signed frequency of bin `k`; the Nyquist bin reports `+M/2 df`.
    pub fn frequency(&self, k: usize) -> f64 {
        let m = self.bins.len();
        if k <= m / 2 {
            k as f64 * self.df
        } else {
            -((m - k) as f64) * self.df
        }
    }

    /// `(1/Z) sum |V|^2 df`.
    pub fn energy(&self) -> f64 {
        self.bins.iter().map(|b| b.norm_sqr()).sum::<f64>() * self.df / self.z
    }

    /// `(1/Z) sum |V|^2 / (h |nu|) df` over bins the causal kernel keeps.
    pub fn photon_number(&self) -> f64 {
        let nyq = self.bins.len() / 2;
        self.bins
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != 0 && *k != nyq)
            .map(|(k, b)| b.norm_sqr() / self.frequency(k).abs())
            .sum::<f64>()
            * self.df
            / (PLANCK * self.z)
    }
}

/// Summary of a trace's energy and photon content.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WidebandReport {
    #[serde(rename = "energy_J")]
    pub energy_j: f64,
    pub photons: f64,
    /// `photons * h * nu0 / energy`; `None` for a zero-energy trace.
    pub ratio_to_hnu0: Option<f64>,
    pub nu0_hz: f64,
}

fn check_len(trace: &TimeTrace) -> Result<(), WidebandError> {
    if trace.len() < MIN_LEN {
        return Err(WidebandError::Degenerate {
            len: trace.len(),
            min: MIN_LEN,
        });
    }
    Ok(())
}

fn padded_len(n: usize) -> usize {
    (2 * n).next_power_of_two()
}

fn forward(samples: &[f64], len: usize, dt: f64) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = samples
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .chain(std::iter::repeat(Complex64::new(0.0, 0.0)))
        .take(len)
        .collect();
    FftPlanner::new().plan_fft_forward(len).process(&mut buf);
    for b in &mut buf {
        *b *= dt;
    }
    buf
}

fn inverse(mut bins: Vec<Complex64>, dt: f64) -> Vec<f64> {
    let len = bins.len();
    FftPlanner::new().plan_fft_inverse(len).process(&mut bins);
    let scale = 1.0 / (len as f64 * dt);
    bins.iter().map(|b| b.re * scale).collect()
}

/// Spectrum of the zero-padded trace.
pub fn spectrum_of(trace: &TimeTrace) -> Result<Spectrum, WidebandError> {
    check_len(trace)?;
    let m = padded_len(trace.len());
    Ok(Spectrum {
        df: trace.fs / m as f64,
        bins: forward(&trace.samples, m, trace.dt()),
        z: trace.z,
    })
}

/// `(1/Z) sum v_i^2 dt` in joules.
pub fn energy_of(trace: &TimeTrace) -> f64 {
    trace.samples.iter().map(|v| v * v).sum::<f64>() * trace.dt() / trace.z
}

/// Applies a spectral multiplier `H(nu)` to the trace without padding.
fn circular_filter(trace: &TimeTrace, multiplier: impl Fn(f64) -> Complex64) -> TimeTrace {
    let m = trace.len();
    let dt = trace.dt();
    let df = trace.fs / m as f64;
    let mut bins = forward(&trace.samples, m, dt);
    for (k, b) in bins.iter_mut().enumerate() {
        let nu = if k <= m / 2 {
            k as f64 * df
        } else {
            -((m - k) as f64) * df
        };
        let nyquist = m.is_multiple_of(2) && k == m / 2;
        *b *= if k == 0 || nyquist {
            Complex64::new(0.0, 0.0)
        } else {
            multiplier(nu)
        };
    }
    trace.with_samples(inverse(bins, dt))
}

fn causal_kernel(nu: f64) -> Complex64 {
    Complex64::from_polar(1.0 / (2.0 * nu.abs()).sqrt(), -FRAC_PI_4 * nu.signum())
}

/// `w(t) = int_0^inf v(t - tau) / sqrt(tau) dtau`, in V s^(1/2).
///
/// The output spans the zero-padded window of `next_power_of_two(2N)`
/// samples starting at the input's `t0`.
pub fn causal_transform(trace: &TimeTrace) -> Result<TimeTrace, WidebandError> {
    check_len(trace)?;
    let m = padded_len(trace.len());
    let mut padded = trace.samples.clone();
    padded.resize(m, 0.0);
    Ok(circular_filter(&trace.with_samples(padded), causal_kernel))
}

/// `(2 / (h Z)) sum w_i^2 dt`.
pub fn photon_number_of(trace: &TimeTrace) -> Result<f64, WidebandError> {
    let w = causal_transform(trace)?;
    Ok(2.0 * w.samples.iter().map(|v| v * v).sum::<f64>() * w.dt() / (PLANCK * w.z))
}

/// The same functional evaluated on the spectrum.
pub fn photon_number_spectral(trace: &TimeTrace) -> Result<f64, WidebandError> {
    Ok(spectrum_of(trace)?.photon_number())
}

/// Circular Hilbert transform, multiplier `-i sign(nu)`, on the trace's own length.
pub fn hilbert_transform(trace: &TimeTrace) -> TimeTrace {
    circular_filter(trace, |nu| Complex64::new(0.0, -nu.signum()))
}

/// Wideband quadrature pair: `x` is the causal transform, `p` its Hilbert
/// transform. `(1/(h Z)) sum (x^2 + p^2) dt` is the photon number.
pub fn hilbert_pair(trace: &TimeTrace) -> Result<(TimeTrace, TimeTrace), WidebandError> {
    let x = causal_transform(trace)?;
    let p = hilbert_transform(&x);
    Ok((x, p))
}

/// Photon number from a quadrature pair.
pub fn photon_number_from_pair(x: &TimeTrace, p: &TimeTrace) -> f64 {
    let sum: f64 = x
        .samples
        .iter()
        .zip(&p.samples)
        .map(|(a, b)| a * a + b * b)
        .sum();
    sum * x.dt() / (PLANCK * x.z)
}

/// Energy, photon number, and their ratio relative to quanta of `nu0`.
pub fn analyze(trace: &TimeTrace, nu0_hz: f64) -> Result<WidebandReport, WidebandError> {
    let energy_j = energy_of(trace);
    let photons = photon_number_of(trace)?;
    let ratio_to_hnu0 = (energy_j > 0.0).then(|| photons * PLANCK * nu0_hz / energy_j);
    Ok(WidebandReport {
        energy_j,
        photons,
        ratio_to_hnu0,
        nu0_hz,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::{sample_timetrace, PulseSpec};

    fn pulse_trace(nu0: f64, sigma_t: f64, v0: f64) -> TimeTrace {
        sample_timetrace(&PulseSpec::gaussian(nu0, sigma_t, v0), 8.0 * nu0, 12.0 * sigma_t, 50.0, 0)
            .unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn zero_trace_is_zero() {
        let tr = TimeTrace::new(1e10, 50.0, 0.0, vec![0.0; 256]).unwrap();
        assert_eq!(energy_of(&tr), 0.0);
        assert_eq!(photon_number_of(&tr).unwrap(), 0.0);
        let rep = analyze(&tr, 1e9).unwrap();
        assert_eq!(rep.ratio_to_hnu0, None);
    }

    #[test]
    fn short_trace_is_degenerate() {
        let tr = TimeTrace::new(1e10, 50.0, 0.0, vec![1.0; 63]).unwrap();
        assert!(matches!(
            causal_transform(&tr),
            Err(WidebandError::Degenerate { len: 63, min: 64 })
        ));
    }

    #[test]
    fn energy_parseval_and_closed_form() {
        let (nu0, sigma, v0) = (5e9, 10e-9, 1e-6);
        let tr = pulse_trace(nu0, sigma, v0);
        let e = energy_of(&tr);
        let closed = v0 * v0 * sigma * std::f64::consts::PI.sqrt() / (2.0 * 50.0);
        assert!(rel(e, closed) < 1e-3);
        assert!(rel(spectrum_of(&tr).unwrap().energy(), e) < 1e-9);
        let scaled = tr.with_samples(tr.samples.iter().map(|v| 3.0 * v).collect());
        assert!(rel(energy_of(&scaled), 9.0 * e) < 1e-12);
    }

    #[test]
    fn hundred_photon_pulse() {
        let (nu0, sigma) = (5e9, 10e-9);
        let z = 50.0;
        let v0 = (200.0 * PLANCK * nu0 * z / (sigma * std::f64::consts::PI.sqrt())).sqrt();
        let tr = pulse_trace(nu0, sigma, v0);
        assert!(rel(energy_of(&tr), 100.0 * PLANCK * nu0) < 1e-3);
        let n = photon_number_of(&tr).unwrap();
        assert!((n - 100.0).abs() < 1.0, "{n}");
        assert!(rel(photon_number_spectral(&tr).unwrap(), n) < 1e-9);
    }

    #[test]
    fn hilbert_twice_is_minus_identity() {
        let tr = pulse_trace(2e9, 3e-9, 1.0);
        let x = causal_transform(&tr).unwrap();
        let pp = hilbert_transform(&hilbert_transform(&x));
        let scale = x.samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (a, b) in pp.samples.iter().zip(&x.samples) {
            assert!((a + b).abs() < 1e-9 * scale);
        }
    }

    #[test]
    fn pair_energy_split() {
        let tr = pulse_trace(3e9, 1e-9, 1.0);
        let (x, p) = hilbert_pair(&tr).unwrap();
        let ex: f64 = x.samples.iter().map(|v| v * v).sum();
        let ep: f64 = p.samples.iter().map(|v| v * v).sum();
        assert!(rel(ep, ex) < 5e-3);
        let n = photon_number_of(&tr).unwrap();
        assert!(rel(photon_number_from_pair(&x, &p), n) < 1e-6);
    }
}
