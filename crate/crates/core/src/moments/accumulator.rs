use serde::{Deserialize, Serialize};

use crate::error::MomentsError;

/// Highest central moment tracked.
pub const ORDER: usize = 6;

/// Samples folded per shifted power-sum block before merging.
pub(crate) const CHUNK: usize = 1024;

/// Minimum sample count for a [`MomentSet`].
pub const MIN_SAMPLES: usize = 100;

pub(crate) const BINOMIAL: [[f64; ORDER + 1]; ORDER + 1] = [
    [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0, 2.0, 1.0, 0.0, 0.0, 0.0, 0.0],
    [1.0, 3.0, 3.0, 1.0, 0.0, 0.0, 0.0],
    [1.0, 4.0, 6.0, 4.0, 1.0, 0.0, 0.0],
    [1.0, 5.0, 10.0, 10.0, 5.0, 1.0, 0.0],
    [1.0, 6.0, 15.0, 20.0, 15.0, 6.0, 1.0],
];

/// Central moments of a sample (population normalization, divided by N).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentSet {
    /// Raw mean.
    pub mean: f64,
    pub m2: f64,
    pub m3: f64,
    pub m4: f64,
    pub m5: f64,
    pub m6: f64,
    pub count: u64,
}

impl MomentSet {
    pub fn central(&self, p: usize) -> f64 {
        match p {
            0 => 1.0,
            1 => 0.0,
            2 => self.m2,
            3 => self.m3,
            4 => self.m4,
            5 => self.m5,
            6 => self.m6,
            _ => panic!("central moment order {p} not tracked"),
        }
    }
}

/// Mergeable single-pass accumulator of central moment sums up to order six.
///
/// `sums[p]` holds `sum (x - mean)^p`. Samples are folded in blocks of
/// [`CHUNK`] as power sums about the block's first value, then merged with
/// the pairwise update of Pebay (2008). Partial accumulators over disjoint
/// data merge to the accumulator of the concatenation.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MomentAccumulator {
    count: u64,
    mean: f64,
    sums: [f64; ORDER + 1],
}

impl MomentAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn push(&mut self, x: f64) {
        let single = MomentAccumulator {
            count: 1,
            mean: x,
            sums: [0.0; ORDER + 1],
        };
        self.merge(&single);
    }

    pub fn extend_from_slice(&mut self, xs: &[f64]) {
        for chunk in xs.chunks(CHUNK) {
            self.merge(&Self::from_block(chunk));
        }
    }

    /// Accumulator of one block via shifted power sums.
    pub(crate) fn from_block(xs: &[f64]) -> Self {
        let Some(&shift) = xs.first() else {
            return Self::default();
        };
        let mut power = [0.0; ORDER + 1];
        for &x in xs {
            let d = x - shift;
            let mut t = 1.0;
            for s in power.iter_mut() {
                *s += t;
                t *= d;
            }
        }
        let n = xs.len() as f64;
        let offset = power[1] / n;
        MomentAccumulator {
            count: xs.len() as u64,
            mean: shift + offset,
            sums: recenter(&power, offset),
        }
    }

    pub fn merge(&mut self, other: &Self) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let na = self.count as f64;
        let nb = other.count as f64;
        let n = na + nb;
        let delta = other.mean - self.mean;
        let da = -nb * delta / n;
        let db = na * delta / n;

        let a = self.full_sums();
        let b = other.full_sums();
        let mut out = [0.0; ORDER + 1];
        for p in 2..=ORDER {
            let mut acc = 0.0;
            let mut pa = 1.0;
            let mut pb = 1.0;
            for j in 0..=p {
                acc += BINOMIAL[p][j] * (a[p - j] * pa + b[p - j] * pb);
                pa *= da;
                pb *= db;
            }
            out[p] = acc;
        }
        out[0] = n;
        self.count += other.count;
        self.mean += nb * delta / n;
        self.sums = out;
    }

    fn full_sums(&self) -> [f64; ORDER + 1] {
        let mut s = self.sums;
        s[0] = self.count as f64;
        s[1] = 0.0;
        s
    }

    pub fn finish(&self) -> Result<MomentSet, MomentsError> {
        if (self.count as usize) < MIN_SAMPLES {
            return Err(MomentsError::InsufficientSamples {
                required: MIN_SAMPLES,
                got: self.count as usize,
            });
        }
        let n = self.count as f64;
        Ok(MomentSet {
            mean: self.mean,
            m2: self.sums[2] / n,
            m3: self.sums[3] / n,
            m4: self.sums[4] / n,
            m5: self.sums[5] / n,
            m6: self.sums[6] / n,
            count: self.count,
        })
    }
}

/// Converts power sums about some origin into sums about `origin + offset`.
pub(crate) fn recenter(power: &[f64; ORDER + 1], offset: f64) -> [f64; ORDER + 1] {
    let mut out = [0.0; ORDER + 1];
    for p in 0..=ORDER {
        let mut acc = 0.0;
        let mut t = 1.0;
        for j in 0..=p {
            acc += BINOMIAL[p][j] * power[p - j] * t;
            t *= -offset;
        }
        out[p] = acc;
    }
    out[1] = 0.0;
    out
}
