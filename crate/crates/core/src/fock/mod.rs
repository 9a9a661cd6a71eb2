//! Truncated Fock-space oracle.
//!
//! Ground truth for everything downstream: ladder operators on a finite
//! number basis, the completely symmetric ordering sum of `k` annihilators
//! and `k` creators (brute-force and closed form), and exact quadrature
//! and photocount moments of density matrices.

mod operator;
mod scalar;
mod state;

use num_bigint::BigInt;
use rayon::prelude::*;

pub use operator::{make_ladder, ExactOperator, FloatOperator, FockOperator, Ladder};
pub use scalar::{FockScalar, Surd};
pub use state::DensityMatrix;

use crate::error::OracleError;
use crate::moments::PhotonStats;

/// Largest `k` accepted by [`symmetric_sum_enumerated`]; `C(12, 6) = 924` orderings.
pub const MAX_ENUMERATED_K: usize = 6;

/// Tail mass above `dim - 4` tolerated by [`exact_photon_stats`].
pub const TAIL_LIMIT: f64 = 1e-12;

/// Sum over every distinct ordering of `k` annihilators and `k` creators.
///
/// There are `(2k)! / (k!)^2` such words. The result carries guard `2k`.
pub fn symmetric_sum_enumerated<T: FockScalar>(
    k: usize,
    dim: usize,
) -> Result<FockOperator<T>, OracleError> {
    if k == 0 {
        return Err(OracleError::InvalidDimension {
            dim,
            reason: "k must be positive",
        });
    }
    if k > MAX_ENUMERATED_K {
        return Err(OracleError::EnumerationTooLarge {
            k,
            cap: MAX_ENUMERATED_K,
        });
    }
    if dim <= 2 * k + 2 {
        return Err(OracleError::InvalidDimension {
            dim,
            reason: "need dim > 2k + 2 for a nonempty trusted block",
        });
    }
    let a: FockOperator<T> = make_ladder(dim, Ladder::Annihilation)?;
    let ad: FockOperator<T> = make_ladder(dim, Ladder::Creation)?;

    // Bit i of the word set => position i holds an annihilator.
    let words: Vec<u32> = (0u32..1 << (2 * k))
        .filter(|w| w.count_ones() as usize == k)
        .collect();
    let terms: Vec<FockOperator<T>> = words
        .par_iter()
        .map(|&w| {
            (0..2 * k).try_fold(FockOperator::identity(dim), |acc, pos| {
                let factor = if w >> pos & 1 == 1 { &a } else { &ad };
                acc.matmul(factor)
            })
        })
        .collect::<Result<_, _>>()?;

    terms
        .into_iter()
        .try_fold(FockOperator::zeros(dim), |acc, t| acc.add(&t))
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, i| acc * BigInt::from(i))
}

/// Diagonal value of the closed-form symmetric sum on level `m`, as an exact fraction.
fn closed_form_level(k: usize, m: usize) -> (BigInt, BigInt) {
    let two_k_fact = factorial(2 * k);
    let mut num = BigInt::from(0);
    let den = BigInt::from(1) << k;
    for i in 0..=k {
        // (1/2)^(k-i) (2k)! / ((i!)^2 (k-i)!) * m (m-1) ... (m-i+1)
        let falling: BigInt = (0..i).fold(BigInt::from(1), |acc, j| {
            acc * (BigInt::from(m as i64) - BigInt::from(j as i64))
        });
        let fi = factorial(i);
        let coeff = &two_k_fact / (&fi * &fi * factorial(k - i));
        num += coeff * falling * (BigInt::from(1) << i);
    }
    (num, den)
}

/// Closed form of the symmetric sum as a polynomial in the number operator.
///
/// The result is diagonal with guard 0: a polynomial in `n` never couples
/// levels across the truncation.
pub fn symmetric_sum_closed<T: FockScalar>(
    k: usize,
    dim: usize,
) -> Result<FockOperator<T>, OracleError> {
    if k == 0 {
        return Err(OracleError::InvalidDimension {
            dim,
            reason: "k must be positive",
        });
    }
    if dim <= 2 * k {
        return Err(OracleError::InvalidDimension {
            dim,
            reason: "need dim > 2k",
        });
    }
    let diag = (0..dim)
        .map(|m| {
            let (num, den) = closed_form_level(k, m);
            T::from_ratio(&num, &den)
        })
        .collect();
    Ok(FockOperator::from_diagonal(diag))
}

/// Phase-averaged `<x^(2k)>` of a state: `(1/2)^k Tr[rho * S_k]`.
///
/// Only the Fock diagonal of `state` contributes, which is exactly the
/// phase-averaged interpretation for states with coherences.
pub fn exact_quadrature_moment(state: &DensityMatrix, k: usize) -> Result<f64, OracleError> {
    state.check_trace()?;
    let dim = state.dim();
    if dim <= 2 * k + 2 {
        return Err(OracleError::InvalidDimension {
            dim,
            reason: "need dim > 2k + 2",
        });
    }
    let sym: FloatOperator = symmetric_sum_closed(k, dim)?;
    let trace: f64 = state
        .populations()
        .iter()
        .enumerate()
        .map(|(m, p)| p * sym.raw(m, m))
        .sum();
    Ok(trace * 0.5f64.powi(k as i32))
}

/// Photocount mean, variance and third central moment straight from the populations.
pub fn exact_photon_stats(state: &DensityMatrix) -> Result<PhotonStats, OracleError> {
    state.check_trace()?;
    let pops = state.populations();
    let dim = pops.len();
    let level = dim.saturating_sub(4);
    let tail_mass: f64 = pops[level..].iter().sum();
    if tail_mass >= TAIL_LIMIT {
        return Err(OracleError::Truncation {
            tail_mass,
            level,
            limit: TAIL_LIMIT,
        });
    }
    let raw = |l: i32| -> f64 {
        pops.iter()
            .enumerate()
            .map(|(m, p)| p * (m as f64).powi(l))
            .sum()
    };
    let (r1, r2, r3) = (raw(1), raw(2), raw(3));
    let var = r2 - r1 * r1;
    let third = r3 - 3.0 * r1 * r2 + 2.0 * r1.powi(3);
    Ok(PhotonStats::new(r1, var, third))
}
