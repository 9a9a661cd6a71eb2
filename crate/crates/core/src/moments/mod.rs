//! Quadrature samples to photocount statistics.
//!
//! Central moments are accumulated in a single mergeable pass, turned into
//! cumulants with the standard relations, optionally reference-subtracted
//! (cumulants of independent sources add), and inverted into the mean,
//! variance and third central moment of the photocount distribution.
//!
//! The cumulants are plug-in estimators built from population central
//! moments, not unbiased k-statistics. Their bias is O(1/N), far below
//! the statistical error at the sample sizes this crate targets.

mod accumulator;
mod bootstrap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use accumulator::{MomentAccumulator, MomentSet, MIN_SAMPLES, ORDER};
pub use bootstrap::{bootstrap_errors, bootstrap_subtracted, MIN_RESAMPLES};

use crate::error::MomentsError;
use crate::sampler::QuadratureBatch;

/// Cumulants of orders two through six.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CumulantSet {
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
    pub c6: f64,
    pub count: u64,
}

/// Whether the vacuum's quadrature variance is still inside the cumulants.
///
/// Raw measurements include it. Subtracting a reference that was itself
/// measured with the vacuum present removes it, and it must be put back
/// before inverting to photon statistics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VacuumTerm {
    Included,
    Removed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QualityFlag {
    NegativeMean,
    NegativeVariance,
}

/// Bootstrap standard errors and the covariance of `(n_mean, n_var, n_skew3)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatErrors {
    pub n_mean: f64,
    pub n_var: f64,
    pub n_skew3: f64,
    pub fano: Option<f64>,
    pub covariance: [[f64; 3]; 3],
    pub resamples: usize,
}

/// Photocount mean `<n>`, variance `<dn^2>` and third central moment `<dn^3>`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhotonStats {
    pub n_mean: f64,
    pub n_var: f64,
    pub n_skew3: f64,
    /// `n_var / n_mean`, defined for positive mean.
    pub fano: Option<f64>,
    pub errors: Option<StatErrors>,
    pub flags: Vec<QualityFlag>,
}

impl PhotonStats {
    pub fn new(n_mean: f64, n_var: f64, n_skew3: f64) -> Self {
        let mut flags = Vec::new();
        if n_mean < 0.0 {
            flags.push(QualityFlag::NegativeMean);
        }
        if n_var < 0.0 {
            flags.push(QualityFlag::NegativeVariance);
        }
        PhotonStats {
            n_mean,
            n_var,
            n_skew3,
            fano: (n_mean > 0.0).then(|| n_var / n_mean),
            errors: None,
            flags,
        }
    }

    pub fn with_errors(mut self, errors: StatErrors) -> Self {
        self.errors = Some(errors);
        self
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.n_mean, self.n_var, self.n_skew3]
    }
}

/// Central moments of a batch. Requires at least [`MIN_SAMPLES`] samples.
pub fn accumulate_moments(batch: &QuadratureBatch) -> Result<MomentSet, MomentsError> {
    accumulate_slice(batch.samples())
}

pub(crate) fn accumulate_slice(xs: &[f64]) -> Result<MomentSet, MomentsError> {
    if xs.len() < MIN_SAMPLES {
        return Err(MomentsError::InsufficientSamples {
            required: MIN_SAMPLES,
            got: xs.len(),
        });
    }
    if let Some(i) = xs.iter().position(|x| !x.is_finite()) {
        return Err(MomentsError::NonFinite(i));
    }
    // Blocks in parallel, merged in order: identical to the sequential fold.
    let blocks: Vec<MomentAccumulator> = xs
        .par_chunks(accumulator::CHUNK)
        .map(MomentAccumulator::from_block)
        .collect();
    let mut acc = MomentAccumulator::new();
    for b in &blocks {
        acc.merge(b);
    }
    acc.finish()
}

pub fn cumulants_from_moments(m: &MomentSet) -> CumulantSet {
    CumulantSet {
        c2: m.m2,
        c3: m.m3,
        c4: m.m4 - 3.0 * m.m2 * m.m2,
        c5: m.m5 - 10.0 * m.m3 * m.m2,
        c6: m.m6 - 15.0 * m.m4 * m.m2 - 10.0 * m.m3 * m.m3 + 30.0 * m.m2.powi(3),
        count: m.count,
    }
}

/// Removes an independent reference contribution from measured cumulants.
pub fn subtract_reference(total: &CumulantSet, reference: &CumulantSet) -> CumulantSet {
    CumulantSet {
        c2: total.c2 - reference.c2,
        c3: total.c3 - reference.c3,
        c4: total.c4 - reference.c4,
        c5: total.c5 - reference.c5,
        c6: total.c6 - reference.c6,
        count: total.count.min(reference.count),
    }
}

/// Inverts phase-averaged quadrature cumulants into photocount moments.
///
/// ```text
/// <n>    = c2 - 1/2
/// <dn^2> = (2/3) c4 + c2^2 - 1/4
/// <dn^3> = (2/5) c6 + 4 c4 c2 + 2 c2^3 - c2 / 2
/// ```
///
/// With [`VacuumTerm::Removed`] the vacuum variance 1/2 is restored in `c2`
/// first. Negative results are flagged, never clamped.
pub fn photon_stats_from_cumulants(c: &CumulantSet, vacuum: VacuumTerm) -> PhotonStats {
    let c2 = match vacuum {
        VacuumTerm::Included => c.c2,
        VacuumTerm::Removed => c.c2 + 0.5,
    };
    let (c4, c6) = (c.c4, c.c6);
    let n_mean = c2 - 0.5;
    let n_var = 2.0 / 3.0 * c4 + c2 * c2 - 0.25;
    let n_skew3 = 0.4 * c6 + 4.0 * c4 * c2 + 2.0 * c2.powi(3) - 0.5 * c2;
    PhotonStats::new(n_mean, n_var, n_skew3)
}

/// Point estimate of the photon statistics of one batch, without error bars.
pub fn photon_stats_of(batch: &QuadratureBatch) -> Result<PhotonStats, MomentsError> {
    let m = accumulate_moments(batch)?;
    Ok(photon_stats_from_cumulants(
        &cumulants_from_moments(&m),
        VacuumTerm::Included,
    ))
}
