//! Classicality tests on reconstructed photocount statistics.
//!
//! Three conditions hold for every classical field:
//!
//! 1. `<dn^2> >= <n>`
//! 2. `<dn^2> -> <n>` as `<n> -> 0`
//! 3. `<dn^3> >= <n> + 3 (<dn^2> - <n>) (1 - <n>)`
//!
//! Each is reported with a signed margin (positive means satisfied) and,
//! when bootstrap errors are available, its standard error from the delta
//! method on the bootstrap covariance.
//!
//! Condition 2 is a limit and cannot be checked at a single point. Below
//! `n_small` it is tested as `fano - 1 <= n_small`: the excess Fano factor
//! must be no larger than the scale at which the limit is probed. Thermal
//! light (`fano - 1 = <n>`) always satisfies this, pair emission from a
//! squeezed vacuum (`fano - 1 = 1 + 2 <n>`) never does.

use serde::{Deserialize, Serialize};

use crate::error::ClassifyError;
use crate::moments::PhotonStats;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Violated,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Overall {
    Classical,
    Nonclassical,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionResult {
    pub verdict: Verdict,
    /// Signed distance from the boundary; `None` when the condition does not apply.
    pub margin: Option<f64>,
    pub std_error: Option<f64>,
    /// `margin / std_error`.
    pub z_score: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalityReport {
    pub cond_variance: ConditionResult,
    pub cond_limit: ConditionResult,
    pub cond_third: ConditionResult,
    pub fano: Option<f64>,
    pub k_sigma: f64,
    pub n_small: f64,
    pub overall: Overall,
}

impl ClassicalityReport {
    pub fn is_nonclassical(&self) -> bool {
        self.overall == Overall::Nonclassical
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifyOptions {
    pub k_sigma: f64,
    pub n_small: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            k_sigma: 3.0,
            n_small: 0.1,
        }
    }
}

fn judge(margin: f64, std_error: Option<f64>, k_sigma: f64) -> ConditionResult {
    let z_score = std_error.filter(|s| *s > 0.0).map(|s| margin / s);
    let verdict = if k_sigma == 0.0 {
        if margin < 0.0 {
            Verdict::Violated
        } else {
            Verdict::Pass
        }
    } else {
        match std_error {
            Some(se) if margin < -k_sigma * se => Verdict::Violated,
            Some(se) if margin < k_sigma * se => Verdict::Inconclusive,
            Some(_) => Verdict::Pass,
            None => Verdict::Inconclusive,
        }
    };
    ConditionResult {
        verdict,
        margin: Some(margin),
        std_error,
        z_score,
    }
}

fn quad_form(g: [f64; 3], cov: &[[f64; 3]; 3]) -> f64 {
    let mut s = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            s += g[i] * cov[i][j] * g[j];
        }
    }
    s.max(0.0).sqrt()
}

/// Classifies with the default `n_small`.
pub fn classify(stats: &PhotonStats, k_sigma: f64) -> Result<ClassicalityReport, ClassifyError> {
    classify_with(
        stats,
        &ClassifyOptions {
            k_sigma,
            ..ClassifyOptions::default()
        },
    )
}

pub fn classify_with(
    stats: &PhotonStats,
    opts: &ClassifyOptions,
) -> Result<ClassicalityReport, ClassifyError> {
    let k = opts.k_sigma;
    if !(k >= 0.0 && k.is_finite()) {
        return Err(ClassifyError::Config(format!("k_sigma must be >= 0, got {k}")));
    }
    if !(opts.n_small > 0.0 && opts.n_small.is_finite()) {
        return Err(ClassifyError::Config(format!(
            "n_small must be positive, got {}",
            opts.n_small
        )));
    }
    let errors = stats.errors.as_ref();
    if k > 0.0 && errors.is_none() {
        return Err(ClassifyError::MissingErrors(k));
    }
    let (n, var, third) = (stats.n_mean, stats.n_var, stats.n_skew3);
    let se = |g: [f64; 3]| errors.map(|e| quad_form(g, &e.covariance));

    let cond_variance = judge(var - n, se([-1.0, 1.0, 0.0]), k);

    let third_margin = third - third_moment_boundary(n, var);
    let cond_third = judge(
        third_margin,
        se([2.0 - 6.0 * n + 3.0 * var, -3.0 * (1.0 - n), 1.0]),
        k,
    );

    let cond_limit = match stats.fano {
        Some(fano) if n < opts.n_small => {
            judge(opts.n_small - (fano - 1.0), errors.and_then(|e| e.fano), k)
        }
        _ => ConditionResult {
            verdict: Verdict::Pass,
            margin: None,
            std_error: None,
            z_score: None,
        },
    };

    let verdicts = [cond_variance.verdict, cond_limit.verdict, cond_third.verdict];
    let overall = if verdicts.contains(&Verdict::Violated) {
        Overall::Nonclassical
    } else if verdicts.contains(&Verdict::Inconclusive) {
        Overall::Inconclusive
    } else {
        Overall::Classical
    };
    Ok(ClassicalityReport {
        cond_variance,
        cond_limit,
        cond_third,
        fano: stats.fano,
        k_sigma: k,
        n_small: opts.n_small,
        overall,
    })
}

/// Smallest classical `<dn^3>` for given `<n>` and `<dn^2>`.
pub fn third_moment_boundary(n: f64, var: f64) -> f64 {
    n + 3.0 * (var - n) * (1.0 - n)
}

/// Lower classical envelope `<dn^2> = <n>` on a grid. Points below are nonclassical.
pub fn boundary_curve(n_grid: &[f64]) -> Result<Vec<(f64, f64)>, ClassifyError> {
    let sorted = n_grid.windows(2).all(|w| w[0] <= w[1]);
    if !sorted || n_grid.iter().any(|n| !(*n >= 0.0 && n.is_finite())) {
        return Err(ClassifyError::InvalidGrid);
    }
    Ok(n_grid.iter().map(|&n| (n, n)).collect())
}

/// `(n, var, third_moment_boundary(n, var))` over the product of two grids.
pub fn third_moment_surface(
    n_grid: &[f64],
    var_grid: &[f64],
) -> Result<Vec<[f64; 3]>, ClassifyError> {
    boundary_curve(n_grid)?;
    boundary_curve(var_grid)?;
    Ok(n_grid
        .iter()
        .flat_map(|&n| var_grid.iter().map(move |&v| [n, v, third_moment_boundary(n, v)]))
        .collect())
}
