//! Self-check suite for the Fock-space oracle and the cumulant inversion.

use serde::{Deserialize, Serialize};

use crate::fock::{
    exact_photon_stats, exact_quadrature_moment, symmetric_sum_closed, symmetric_sum_enumerated,
    DensityMatrix, ExactOperator,
};
use crate::moments::{cumulants_from_moments, photon_stats_from_cumulants, MomentSet, VacuumTerm};

/// Truncation used for the closed-loop states.
pub const LOOP_DIM: usize = 160;

/// Absolute tolerance of the closed loop.
pub const LOOP_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Enumerated vs closed-form symmetric sum, exact arithmetic, on the trusted block.
pub fn check_symmetric_sum(k: usize, dim: usize) -> CheckResult {
    let name = format!("symmetric_sum k={k} dim={dim}");
    let outcome = (|| {
        let e: ExactOperator = symmetric_sum_enumerated(k, dim)?;
        let c: ExactOperator = symmetric_sum_closed(k, dim)?;
        Ok::<_, crate::error::OracleError>((e.agrees_on_trusted(&c), e.trusted_dim()))
    })();
    match outcome {
        Ok((passed, trusted)) => CheckResult {
            name,
            passed,
            detail: format!("{trusted} trusted levels compared exactly"),
        },
        Err(e) => CheckResult {
            name,
            passed: false,
            detail: e.to_string(),
        },
    }
}

/// Photon statistics via oracle quadrature moments and the cumulant inversion.
pub fn loop_stats(state: &DensityMatrix) -> Result<[f64; 3], crate::error::OracleError> {
    let m = MomentSet {
        mean: 0.0,
        m2: exact_quadrature_moment(state, 1)?,
        m3: 0.0,
        m4: exact_quadrature_moment(state, 2)?,
        m5: 0.0,
        m6: exact_quadrature_moment(state, 3)?,
        count: 0,
    };
    Ok(photon_stats_from_cumulants(&cumulants_from_moments(&m), VacuumTerm::Included).as_array())
}

pub fn check_closed_loop(label: &str, state: &DensityMatrix) -> CheckResult {
    let name = format!("closed_loop {label}");
    let outcome = loop_stats(state).and_then(|via| Ok((via, exact_photon_stats(state)?.as_array())));
    match outcome {
        Ok((via, direct)) => {
            let worst = via
                .iter()
                .zip(&direct)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            CheckResult {
                name,
                passed: worst <= LOOP_TOL,
                detail: format!("loop {via:?} direct {direct:?} max |diff| {worst:.3e}"),
            }
        }
        Err(e) => CheckResult {
            name,
            passed: false,
            detail: e.to_string(),
        },
    }
}

/// Canonical phase-symmetric states used by the closed-loop check.
pub fn canonical_states() -> Vec<(String, Result<DensityMatrix, crate::error::OracleError>)> {
    let mut out = vec![("vacuum".to_string(), DensityMatrix::vacuum(LOOP_DIM))];
    for n in [0.5, 1.0, 2.0] {
        out.push((format!("thermal n={n}"), DensityMatrix::thermal(n, LOOP_DIM)));
    }
    for n in [0.1, 0.5, 1.0] {
        out.push((format!("coherent n={n}"), DensityMatrix::poisson(n, LOOP_DIM)));
    }
    for r in [0.1, 0.5] {
        out.push((
            format!("squeezed r={r}"),
            DensityMatrix::squeezed_vacuum(r, 0.0, LOOP_DIM).map(|s| s.phase_averaged()),
        ));
    }
    out
}

/// Full oracle suite: symmetric-sum identity for `k = 1..=4` at dim 40 and the closed loop.
pub fn run_oracle_suite() -> Vec<CheckResult> {
    let mut out: Vec<CheckResult> = (1..=4).map(|k| check_symmetric_sum(k, 40)).collect();
    for (label, state) in canonical_states() {
        out.push(match state {
            Ok(s) => check_closed_loop(&label, &s),
            Err(e) => CheckResult {
                name: format!("closed_loop {label}"),
                passed: false,
                detail: e.to_string(),
            },
        });
    }
    out
}
