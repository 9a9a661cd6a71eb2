//! Nonparametric bootstrap of the photon statistics.
//!
//! Each replicate resamples with replacement and recomputes the whole
//! moment -> cumulant -> photocount chain. Large batches are resampled in
//! blocks of consecutive samples: the samples are i.i.d., so blocks are
//! i.i.d. too, and the statistics are smooth functions of block power
//! sums. Batches up to [`MAX_UNITS`] samples are resampled one by one.

use rand::Rng;
use rayon::prelude::*;

use super::accumulator::{recenter, MomentSet, ORDER};
use super::{
    accumulate_slice, cumulants_from_moments, photon_stats_from_cumulants, subtract_reference,
    PhotonStats, StatErrors, VacuumTerm,
};
use crate::error::MomentsError;
use crate::rng::{block_rng, Stream};
use crate::sampler::QuadratureBatch;

pub const MIN_RESAMPLES: usize = 100;

/// Upper bound on resampling units per batch.
pub const MAX_UNITS: usize = 1 << 16;

/// Power sums about a common shift, one row per resampling unit.
struct Units {
    shift: f64,
    sums: Vec<[f64; ORDER + 1]>,
}

impl Units {
    fn new(xs: &[f64], shift: f64) -> Self {
        let block = xs.len().div_ceil(MAX_UNITS).max(1);
        let sums = xs
            .chunks(block)
            .map(|chunk| {
                let mut s = [0.0; ORDER + 1];
                for &x in chunk {
                    let d = x - shift;
                    let mut t = 1.0;
                    for v in s.iter_mut() {
                        *v += t;
                        t *= d;
                    }
                }
                s
            })
            .collect();
        Units { shift, sums }
    }

    fn resample<R: Rng>(&self, rng: &mut R) -> MomentSet {
        let k = self.sums.len();
        let mut total = [0.0; ORDER + 1];
        for _ in 0..k {
            let u = &self.sums[rng.random_range(0..k)];
            for (t, v) in total.iter_mut().zip(u) {
                *t += v;
            }
        }
        let n = total[0];
        let offset = total[1] / n;
        let central = recenter(&total, offset);
        MomentSet {
            mean: self.shift + offset,
            m2: central[2] / n,
            m3: central[3] / n,
            m4: central[4] / n,
            m5: central[5] / n,
            m6: central[6] / n,
            count: n as u64,
        }
    }
}

fn check_resamples(resamples: usize) -> Result<(), MomentsError> {
    if resamples < MIN_RESAMPLES {
        return Err(MomentsError::InsufficientResamples {
            required: MIN_RESAMPLES,
            got: resamples,
        });
    }
    Ok(())
}

/// Photon statistics of a batch with bootstrap standard errors.
///
/// Deterministic given `seed`, independent of the thread count.
pub fn bootstrap_errors(
    batch: &QuadratureBatch,
    resamples: usize,
    seed: u64,
) -> Result<PhotonStats, MomentsError> {
    check_resamples(resamples)?;
    let m = accumulate_slice(batch.samples())?;
    let point = photon_stats_from_cumulants(&cumulants_from_moments(&m), VacuumTerm::Included);
    let units = Units::new(batch.samples(), m.mean);
    let replicates: Vec<PhotonStats> = (0..resamples as u64)
        .into_par_iter()
        .map(|b| {
            let mut rng = block_rng(seed, b, Stream::Bootstrap);
            let rm = units.resample(&mut rng);
            photon_stats_from_cumulants(&cumulants_from_moments(&rm), VacuumTerm::Included)
        })
        .collect();
    Ok(attach(point, &replicates))
}

/// Reference-subtracted photon statistics with bootstrap standard errors.
///
/// Both batches are resampled independently in every replicate.
pub fn bootstrap_subtracted(
    total: &QuadratureBatch,
    reference: &QuadratureBatch,
    resamples: usize,
    seed: u64,
) -> Result<PhotonStats, MomentsError> {
    check_resamples(resamples)?;
    let mt = accumulate_slice(total.samples())?;
    let mr = accumulate_slice(reference.samples())?;
    let point = photon_stats_from_cumulants(
        &subtract_reference(&cumulants_from_moments(&mt), &cumulants_from_moments(&mr)),
        VacuumTerm::Removed,
    );
    let ut = Units::new(total.samples(), mt.mean);
    let ur = Units::new(reference.samples(), mr.mean);
    let replicates: Vec<PhotonStats> = (0..resamples as u64)
        .into_par_iter()
        .map(|b| {
            let mut rng = block_rng(seed, b, Stream::Bootstrap);
            let ct = cumulants_from_moments(&ut.resample(&mut rng));
            let cr = cumulants_from_moments(&ur.resample(&mut rng));
            photon_stats_from_cumulants(&subtract_reference(&ct, &cr), VacuumTerm::Removed)
        })
        .collect();
    Ok(attach(point, &replicates))
}

fn attach(point: PhotonStats, replicates: &[PhotonStats]) -> PhotonStats {
    let b = replicates.len() as f64;
    let rows: Vec<[f64; 3]> = replicates.iter().map(PhotonStats::as_array).collect();
    let mut mean = [0.0; 3];
    for r in &rows {
        for i in 0..3 {
            mean[i] += r[i] / b;
        }
    }
    let mut cov = [[0.0; 3]; 3];
    for r in &rows {
        for i in 0..3 {
            for j in 0..3 {
                cov[i][j] += (r[i] - mean[i]) * (r[j] - mean[j]) / (b - 1.0);
            }
        }
    }
    let fano = point.fano.and_then(|_| {
        let f: Option<Vec<f64>> = replicates.iter().map(|r| r.fano).collect();
        f.map(|f| {
            let m = f.iter().sum::<f64>() / b;
            (f.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (b - 1.0)).sqrt()
        })
    });
    let errors = StatErrors {
        n_mean: cov[0][0].sqrt(),
        n_var: cov[1][1].sqrt(),
        n_skew3: cov[2][2].sqrt(),
        fano,
        covariance: cov,
        resamples: replicates.len(),
    };
    point.with_errors(errors)
}
