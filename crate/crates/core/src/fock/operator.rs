use std::io::Write;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::scalar::{FockScalar, Surd};
use crate::error::OracleError;

/// Which ladder-type operator to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ladder {
    Annihilation,
    Creation,
    Number,
}

/// Dense operator on the truncated number basis `|0>, ..., |dim-1>`.
///
/// `guard` counts the top basis levels whose entries are contaminated by
/// truncation. Every ladder factor in a product can pull amplitude across
/// the cut by one level, so guards add under multiplication.
#[derive(Clone, Debug, PartialEq)]
pub struct FockOperator<T> {
    dim: usize,
    entries: Vec<T>,
    guard: usize,
}

pub type ExactOperator = FockOperator<Surd>;
pub type FloatOperator = FockOperator<f64>;

impl<T: FockScalar> FockOperator<T> {
    pub fn zeros(dim: usize) -> Self {
        FockOperator {
            dim,
            entries: vec![T::zero(); dim * dim],
            guard: 0,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diagonal((0..dim).map(|_| T::one()).collect())
    }

    pub fn from_diagonal(diag: Vec<T>) -> Self {
        let dim = diag.len();
        let mut op = Self::zeros(dim);
        for (m, v) in diag.into_iter().enumerate() {
            op.entries[m * dim + m] = v;
        }
        op
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn guard(&self) -> usize {
        self.guard
    }

    pub fn with_guard(mut self, guard: usize) -> Self {
        self.guard = guard;
        self
    }

    /// Number of leading levels whose entries are trustworthy.
    pub fn trusted_dim(&self) -> usize {
        self.dim.saturating_sub(self.guard)
    }

    /// Checked access: entries in the guard band are refused.
    pub fn entry(&self, row: usize, col: usize) -> Result<&T, OracleError> {
        let trusted = self.trusted_dim();
        if row >= trusted || col >= trusted {
            return Err(OracleError::GuardedEntry {
                row,
                col,
                dim: self.dim,
                guard: self.guard,
            });
        }
        Ok(&self.entries[row * self.dim + col])
    }

    /// Unchecked access, including the guard band.
    pub fn raw(&self, row: usize, col: usize) -> &T {
        &self.entries[row * self.dim + col]
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.dim).all(|r| (0..self.dim).all(|c| r == c || self.raw(r, c).is_zero()))
    }

    /// Diagonal restricted to the trusted levels.
    pub fn trusted_diagonal(&self) -> Vec<T> {
        (0..self.trusted_dim())
            .map(|m| self.raw(m, m).clone())
            .collect()
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self, OracleError> {
        if self.dim != rhs.dim {
            return Err(OracleError::DimensionMismatch(self.dim, rhs.dim));
        }
        let d = self.dim;
        let mut out = Self::zeros(d);
        // Ladder products are banded; skipping zero left factors keeps this O(nnz * d).
        for i in 0..d {
            for l in 0..d {
                let a = &self.entries[i * d + l];
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = &rhs.entries[l * d + j];
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a.mul(b);
                    let slot = &mut out.entries[i * d + j];
                    *slot = slot.add(&prod);
                }
            }
        }
        out.guard = self.guard + rhs.guard;
        Ok(out)
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, OracleError> {
        if self.dim != rhs.dim {
            return Err(OracleError::DimensionMismatch(self.dim, rhs.dim));
        }
        Ok(FockOperator {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a.add(b))
                .collect(),
            guard: self.guard.max(rhs.guard),
        })
    }

    pub fn transpose(&self) -> Self {
        let d = self.dim;
        let mut out = Self::zeros(d);
        for r in 0..d {
            for c in 0..d {
                out.entries[c * d + r] = self.entries[r * d + c].clone();
            }
        }
        out.guard = self.guard;
        out
    }

    /// True when both operators agree on every entry of the jointly trusted block.
    pub fn agrees_on_trusted(&self, other: &Self) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let trusted = self.trusted_dim().min(other.trusted_dim());
        (0..trusted).all(|r| (0..trusted).all(|c| self.raw(r, c) == other.raw(r, c)))
    }

    pub fn to_float(&self) -> FloatOperator {
        FockOperator {
            dim: self.dim,
            entries: self.entries.iter().map(FockScalar::to_f64).collect(),
            guard: self.guard,
        }
    }

    /// Dumps the matrix as CSV (one row per line, values as `f64`).
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for r in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|c| self.raw(r, c).to_f64().to_string())
                .collect();
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Builds `a`, `a^dagger` or `n = a^dagger a` on `dim` levels.
pub fn make_ladder<T: FockScalar>(dim: usize, which: Ladder) -> Result<FockOperator<T>, OracleError> {
    if dim < 2 {
        return Err(OracleError::InvalidDimension {
            dim,
            reason: "ladder operators need at least two levels",
        });
    }
    let op = match which {
        Ladder::Annihilation => {
            let mut a = FockOperator::zeros(dim);
            for m in 1..dim {
                a.entries[(m - 1) * dim + m] = T::sqrt_int(m as u64);
            }
            a.with_guard(1)
        }
        Ladder::Creation => make_ladder::<T>(dim, Ladder::Annihilation)?.transpose(),
        Ladder::Number => {
            let one = BigInt::from(1);
            FockOperator::from_diagonal((0..dim).map(|m| T::from_ratio(&BigInt::from(m), &one)).collect())
        }
    };
    Ok(op)
}
