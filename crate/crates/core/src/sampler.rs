//! Synthetic measurement data.
//!
//! Quadrature samples use the dimensionless convention where the vacuum
//! variance is 1/2. All states sampled here are Gaussian at fixed phase;
//! phase averaging draws a fresh uniform phase for every sample, which
//! keeps samples i.i.d.
//!
//! Randomness is drawn per block of [`BLOCK`] samples from ChaCha streams
//! derived from `(seed, block, purpose)`, so output depends only on the
//! inputs and not on the thread count.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::SamplerError;
use crate::rng::{block_rng, Stream};

pub const BLOCK: usize = 1 << 16;

/// Carriers must be sampled faster than this multiple of their frequency.
pub const MIN_OVERSAMPLING: f64 = 4.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateKind {
    Vacuum {},
    Coherent { mean_photons: f64 },
    Thermal { mean_photons: f64 },
    /// `squeeze_angle` is the phase of the anti-squeezed quadrature.
    SqueezedVacuum { squeeze_r: f64, squeeze_angle: f64 },
}

/// A canonical Gaussian state plus optional independent thermal noise.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    pub kind: StateKind,
    /// Mean photon number of added noise; contributes variance `added_noise`.
    #[serde(default)]
    pub added_noise: Option<f64>,
}

impl StateSpec {
    pub fn vacuum() -> Self {
        StateKind::Vacuum {}.into()
    }
    pub fn coherent(mean_photons: f64) -> Self {
        StateKind::Coherent { mean_photons }.into()
    }
    pub fn thermal(mean_photons: f64) -> Self {
        StateKind::Thermal { mean_photons }.into()
    }
    pub fn squeezed_vacuum(squeeze_r: f64, squeeze_angle: f64) -> Self {
        StateKind::SqueezedVacuum {
            squeeze_r,
            squeeze_angle,
        }
        .into()
    }

    pub fn with_noise(mut self, mean_photons: f64) -> Self {
        self.added_noise = Some(mean_photons);
        self
    }

    pub fn validate(&self) -> Result<(), SamplerError> {
        let nonneg = |what: &str, v: f64| {
            if v >= 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(SamplerError::Spec(format!("{what} must be finite and >= 0, got {v}")))
            }
        };
        match self.kind {
            StateKind::Vacuum {} => {}
            StateKind::Coherent { mean_photons } | StateKind::Thermal { mean_photons } => {
                nonneg("mean_photons", mean_photons)?
            }
            StateKind::SqueezedVacuum {
                squeeze_r,
                squeeze_angle,
            } => {
                nonneg("squeeze_r", squeeze_r)?;
                if !squeeze_angle.is_finite() {
                    return Err(SamplerError::Spec("squeeze_angle must be finite".into()));
                }
            }
        }
        if let Some(noise) = self.added_noise {
            nonneg("added_noise", noise)?;
        }
        Ok(())
    }

    /// Mean and standard deviation of the quadrature at phase `theta`, noise excluded.
    pub fn marginal(&self, theta: f64) -> (f64, f64) {
        match self.kind {
            StateKind::Vacuum {} => (0.0, 0.5f64.sqrt()),
            StateKind::Thermal { mean_photons } => (0.0, (mean_photons + 0.5).sqrt()),
            StateKind::Coherent { mean_photons } => {
                ((2.0 * mean_photons).sqrt() * theta.cos(), 0.5f64.sqrt())
            }
            StateKind::SqueezedVacuum {
                squeeze_r,
                squeeze_angle,
            } => {
                let d = theta - squeeze_angle;
                let var = ((2.0 * squeeze_r).exp() * d.cos().powi(2)
                    + (-2.0 * squeeze_r).exp() * d.sin().powi(2))
                    / 2.0;
                (0.0, var.sqrt())
            }
        }
    }
}

impl From<StateKind> for StateSpec {
    fn from(kind: StateKind) -> Self {
        StateSpec {
            kind,
            added_noise: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum PhaseMode {
    Averaged,
    Fixed { theta: f64 },
}

/// Finite sample of dimensionless quadrature values.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureBatch {
    samples: Vec<f64>,
    phase_mode: PhaseMode,
    seed: u64,
    spec: Option<StateSpec>,
}

impl QuadratureBatch {
    pub fn new(
        samples: Vec<f64>,
        phase_mode: PhaseMode,
        seed: u64,
        spec: Option<StateSpec>,
    ) -> Result<Self, SamplerError> {
        if samples.is_empty() {
            return Err(SamplerError::EmptyBatch);
        }
        if let Some(i) = samples.iter().position(|x| !x.is_finite()) {
            return Err(SamplerError::Spec(format!("sample {i} is not finite")));
        }
        Ok(QuadratureBatch {
            samples,
            phase_mode,
            seed,
            spec,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }
    pub fn len(&self) -> usize {
        self.samples.len()
    }
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
    pub fn phase_mode(&self) -> PhaseMode {
        self.phase_mode
    }
    pub fn seed(&self) -> u64 {
        self.seed
    }
    pub fn spec(&self) -> Option<&StateSpec> {
        self.spec.as_ref()
    }
}

/// Signal and noise draws kept apart; [`sample_quadratures`] adds them.
pub fn sample_quadrature_components(
    spec: &StateSpec,
    phase_mode: PhaseMode,
    n: usize,
    seed: u64,
) -> Result<(Vec<f64>, Option<Vec<f64>>), SamplerError> {
    spec.validate()?;
    if n == 0 {
        return Err(SamplerError::EmptyBatch);
    }
    let mut signal = vec![0.0; n];
    signal
        .par_chunks_mut(BLOCK)
        .enumerate()
        .for_each(|(b, out)| {
            let mut phase_rng = block_rng(seed, b as u64, Stream::Phase);
            let mut amp_rng = block_rng(seed, b as u64, Stream::Amplitude);
            for x in out.iter_mut() {
                let theta = match phase_mode {
                    PhaseMode::Averaged => phase_rng.random_range(0.0..TAU),
                    PhaseMode::Fixed { theta } => theta,
                };
                let (mean, sd) = spec.marginal(theta);
                let z: f64 = amp_rng.sample(StandardNormal);
                *x = mean + sd * z;
            }
        });
    let noise = spec.added_noise.map(|noise| {
        let sd = noise.sqrt();
        let mut out = vec![0.0; n];
        out.par_chunks_mut(BLOCK).enumerate().for_each(|(b, chunk)| {
            let mut rng = block_rng(seed, b as u64, Stream::Noise);
            for x in chunk.iter_mut() {
                let z: f64 = rng.sample(StandardNormal);
                *x = sd * z;
            }
        });
        out
    });
    Ok((signal, noise))
}

/// `n` i.i.d. quadrature samples of `spec`. Deterministic in `(spec, phase_mode, n, seed)`.
pub fn sample_quadratures(
    spec: &StateSpec,
    phase_mode: PhaseMode,
    n: usize,
    seed: u64,
) -> Result<QuadratureBatch, SamplerError> {
    let (mut samples, noise) = sample_quadrature_components(spec, phase_mode, n, seed)?;
    if let Some(noise) = noise {
        for (x, e) in samples.iter_mut().zip(noise) {
            *x += e;
        }
    }
    QuadratureBatch::new(samples, phase_mode, seed, Some(*spec))
}

/// Uniformly sampled real voltage record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeTrace {
    /// Sample rate in Hz.
    pub fs: f64,
    /// Line impedance in ohms.
    pub z: f64,
    /// Time of the first sample in seconds.
    pub t0: f64,
    /// Volts.
    pub samples: Vec<f64>,
}

impl TimeTrace {
    pub fn new(fs: f64, z: f64, t0: f64, samples: Vec<f64>) -> Result<Self, SamplerError> {
        if !(fs > 0.0 && fs.is_finite()) {
            return Err(SamplerError::Trace(format!("sample rate {fs}")));
        }
        if !(z > 0.0 && z.is_finite()) {
            return Err(SamplerError::Trace(format!("impedance {z}")));
        }
        if samples.len() < 2 {
            return Err(SamplerError::Trace("need at least two samples".into()));
        }
        if !t0.is_finite() || samples.iter().any(|v| !v.is_finite()) {
            return Err(SamplerError::Trace("non-finite value".into()));
        }
        Ok(TimeTrace { fs, z, t0, samples })
    }

    pub fn dt(&self) -> f64 {
        1.0 / self.fs
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t0 + i as f64 / self.fs
    }

    /// Same grid, new values.
    pub fn with_samples(&self, samples: Vec<f64>) -> Self {
        TimeTrace {
            samples,
            ..self.clone()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PulseShape {
    /// `exp(-t^2 / 2 sigma_t^2) cos(2 pi carrier t)`.
    Gaussian { carrier_hz: f64, sigma_t: f64 },
    /// Linear sweep from `start_hz` to `stop_hz` across `length_s`, centred
    /// on `t = 0`, with raised-cosine tapers over the outer 10% at each end.
    Chirp {
        start_hz: f64,
        stop_hz: f64,
        length_s: f64,
    },
}

pub const CHIRP_TAPER: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseSpec {
    pub shape: PulseShape,
    /// Peak amplitude in volts.
    pub amplitude: f64,
    /// Two-sided white-noise spectral density in V^2/Hz.
    #[serde(default)]
    pub noise_floor: f64,
}

impl PulseSpec {
    pub fn gaussian(carrier_hz: f64, sigma_t: f64, amplitude: f64) -> Self {
        PulseSpec {
            shape: PulseShape::Gaussian {
                carrier_hz,
                sigma_t,
            },
            amplitude,
            noise_floor: 0.0,
        }
    }

    pub fn chirp(start_hz: f64, stop_hz: f64, length_s: f64, amplitude: f64) -> Self {
        PulseSpec {
            shape: PulseShape::Chirp {
                start_hz,
                stop_hz,
                length_s,
            },
            amplitude,
            noise_floor: 0.0,
        }
    }

    pub fn with_noise_floor(mut self, density: f64) -> Self {
        self.noise_floor = density;
        self
    }

    pub fn max_frequency(&self) -> f64 {
        match self.shape {
            PulseShape::Gaussian { carrier_hz, .. } => carrier_hz,
            PulseShape::Chirp {
                start_hz, stop_hz, ..
            } => start_hz.max(stop_hz),
        }
    }

    /// Centre of the occupied band.
    pub fn center_frequency(&self) -> f64 {
        match self.shape {
            PulseShape::Gaussian { carrier_hz, .. } => carrier_hz,
            PulseShape::Chirp {
                start_hz, stop_hz, ..
            } => 0.5 * (start_hz + stop_hz),
        }
    }

    /// Noiseless voltage at time `t`.
    pub fn waveform(&self, t: f64) -> f64 {
        let v = match self.shape {
            PulseShape::Gaussian {
                carrier_hz,
                sigma_t,
            } => (-t * t / (2.0 * sigma_t * sigma_t)).exp() * (TAU * carrier_hz * t).cos(),
            PulseShape::Chirp {
                start_hz,
                stop_hz,
                length_s,
            } => {
                let s = t + 0.5 * length_s;
                if !(0.0..=length_s).contains(&s) {
                    return 0.0;
                }
                let edge = CHIRP_TAPER * length_s;
                let taper = if s < edge {
                    0.5 * (1.0 - (PI * s / edge).cos())
                } else if s > length_s - edge {
                    0.5 * (1.0 - (PI * (length_s - s) / edge).cos())
                } else {
                    1.0
                };
                let rate = (stop_hz - start_hz) / length_s;
                taper * (TAU * (start_hz * s + 0.5 * rate * s * s)).cos()
            }
        };
        self.amplitude * v
    }

    fn validate(&self, fs: f64, duration: f64) -> Result<(), SamplerError> {
        let fmax = self.max_frequency();
        if fs <= MIN_OVERSAMPLING * fmax {
            return Err(SamplerError::Aliasing {
                carrier_hz: fmax,
                fs,
                factor: MIN_OVERSAMPLING,
            });
        }
        let positive = |what: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(SamplerError::Trace(format!("{what} must be positive, got {v}")))
            }
        };
        match self.shape {
            PulseShape::Gaussian { sigma_t, .. } => {
                positive("sigma_t", sigma_t)?;
                if duration < 10.0 * sigma_t {
                    return Err(SamplerError::Trace(format!(
                        "duration {duration} s shorter than 10 sigma_t"
                    )));
                }
            }
            PulseShape::Chirp {
                start_hz, length_s, ..
            } => {
                positive("length_s", length_s)?;
                positive("start_hz", start_hz)?;
                if duration < length_s {
                    return Err(SamplerError::Trace(format!(
                        "duration {duration} s shorter than the chirp"
                    )));
                }
            }
        }
        if !(self.noise_floor >= 0.0 && self.amplitude.is_finite()) {
            return Err(SamplerError::Trace("invalid amplitude or noise floor".into()));
        }
        Ok(())
    }
}

/// Samples `pulse` on `round(duration * fs)` points with `t = 0` on sample `len / 2`.
pub fn sample_timetrace(
    pulse: &PulseSpec,
    fs: f64,
    duration: f64,
    z: f64,
    seed: u64,
) -> Result<TimeTrace, SamplerError> {
    pulse.validate(fs, duration)?;
    let n = (duration * fs).round() as usize;
    let t0 = -((n / 2) as f64) / fs;
    let noise_sd = (pulse.noise_floor * fs).sqrt();
    let mut samples = vec![0.0; n];
    samples
        .par_chunks_mut(BLOCK)
        .enumerate()
        .for_each(|(b, chunk)| {
            let mut rng = block_rng(seed, b as u64, Stream::Noise);
            for (j, v) in chunk.iter_mut().enumerate() {
                let t = t0 + (b * BLOCK + j) as f64 / fs;
                *v = pulse.waveform(t);
                if noise_sd > 0.0 {
                    let z: f64 = rng.sample(StandardNormal);
                    *v += noise_sd * z;
                }
            }
        });
    TimeTrace::new(fs, z, t0, samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(xs: &[f64]) -> f64 {
        let n = xs.len() as f64;
        let m = xs.iter().sum::<f64>() / n;
        xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n
    }

    #[test]
    fn rejects_invalid_specs() {
        assert!(StateSpec::thermal(-0.1).validate().is_err());
        assert!(StateSpec::squeezed_vacuum(f64::NAN, 0.0).validate().is_err());
        assert!(StateSpec::vacuum().with_noise(-1.0).validate().is_err());
        assert!(matches!(
            sample_quadratures(&StateSpec::coherent(-1.0), PhaseMode::Averaged, 10, 0),
            Err(SamplerError::Spec(_))
        ));
        assert!(matches!(
            sample_quadratures(&StateSpec::vacuum(), PhaseMode::Averaged, 0, 0),
            Err(SamplerError::EmptyBatch)
        ));
    }

    #[test]
    fn spec_json_shape() {
        let spec = StateSpec::coherent(0.5).with_noise(2.0);
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(
            json,
            r#"{"kind":{"name":"coherent","mean_photons":0.5},"added_noise":2.0}"#
        );
        let back: StateSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
        assert!(serde_json::from_str::<StateSpec>(
            r#"{"kind":{"name":"vacuum","mean_photons":1.0}}"#
        )
        .is_err());
    }

    #[test]
    fn deterministic_and_seed_sensitive() {
        let spec = StateSpec::squeezed_vacuum(0.3, 0.2).with_noise(0.1);
        let a = sample_quadratures(&spec, PhaseMode::Averaged, 200_000, 5).unwrap();
        let b = sample_quadratures(&spec, PhaseMode::Averaged, 200_000, 5).unwrap();
        let c = sample_quadratures(&spec, PhaseMode::Averaged, 200_000, 6).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.samples(), c.samples());
        // A prefix draw matches the longer draw: blocks are seeded by index.
        let short = sample_quadratures(&spec, PhaseMode::Averaged, 70_000, 5).unwrap();
        assert_eq!(&a.samples()[..70_000], short.samples());
    }

    #[test]
    fn fixed_phase_coherent_mean() {
        let theta = 0.7;
        let batch =
            sample_quadratures(&StateSpec::coherent(2.0), PhaseMode::Fixed { theta }, 400_000, 1)
                .unwrap();
        let mean = batch.samples().iter().sum::<f64>() / batch.len() as f64;
        let se = (0.5f64 / batch.len() as f64).sqrt();
        assert!((mean - 2.0 * f64::cos(theta)).abs() < 5.0 * se);
        assert!((var(batch.samples()) - 0.5).abs() < 5.0 * 0.5 * (2.0 / 400_000f64).sqrt());
    }

    #[test]
    fn fixed_phase_squeezing() {
        let spec = StateSpec::squeezed_vacuum(0.5, 0.0);
        let n = 400_000;
        let squeezed =
            sample_quadratures(&spec, PhaseMode::Fixed { theta: PI / 2.0 }, n, 2).unwrap();
        let anti = sample_quadratures(&spec, PhaseMode::Fixed { theta: 0.0 }, n, 3).unwrap();
        let (vs, va) = ((-1.0f64).exp() / 2.0, 1.0f64.exp() / 2.0);
        let rel = 5.0 * (2.0 / n as f64).sqrt();
        assert!((var(squeezed.samples()) / vs - 1.0).abs() < rel);
        assert!((var(anti.samples()) / va - 1.0).abs() < rel);
        assert!(var(squeezed.samples()) < 0.5);
    }

    #[test]
    fn timetrace_peak_and_grid() {
        let pulse = PulseSpec::gaussian(5e9, 10e-9, 1e-6);
        let tr = sample_timetrace(&pulse, 40e9, 200e-9, 50.0, 0).unwrap();
        assert_eq!(tr.len(), 8000);
        assert_eq!(tr.time(4000), 0.0);
        let peak = tr.samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert_eq!(peak, 1e-6);
        assert_eq!(tr.samples[4000], 1e-6);
    }

    #[test]
    fn timetrace_rejects_aliasing_and_short_windows() {
        let pulse = PulseSpec::gaussian(5e9, 10e-9, 1e-6);
        assert!(matches!(
            sample_timetrace(&pulse, 20e9, 200e-9, 50.0, 0),
            Err(SamplerError::Aliasing { .. })
        ));
        assert!(matches!(
            sample_timetrace(&pulse, 40e9, 90e-9, 50.0, 0),
            Err(SamplerError::Trace(_))
        ));
        assert!(TimeTrace::new(1.0, 0.0, 0.0, vec![0.0; 4]).is_err());
        assert!(TimeTrace::new(1.0, 50.0, 0.0, vec![0.0]).is_err());
    }

    #[test]
    fn timetrace_noise_density() {
        let fs = 10e9;
        let density = 1e-18;
        let pulse = PulseSpec::gaussian(1e9, 1e-9, 0.0).with_noise_floor(density);
        let a = sample_timetrace(&pulse, fs, 50e-6, 50.0, 9).unwrap();
        let b = sample_timetrace(&pulse, fs, 50e-6, 50.0, 9).unwrap();
        assert_eq!(a, b);
        let want = density * fs;
        let n = a.len() as f64;
        assert!((var(&a.samples) / want - 1.0).abs() < 5.0 * (2.0 / n).sqrt());
    }
}
