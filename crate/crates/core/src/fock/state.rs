use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::OracleError;

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-10;
const FLUSH: f64 = 1e-30;
const EIGEN_TOL: f64 = 1e-10;

/// Single-mode density matrix on a truncated number basis.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    rho: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates hermiticity, unit trace and positivity.
    pub fn new(rho: DMatrix<Complex64>) -> Result<Self, OracleError> {
        if !rho.is_square() || rho.nrows() == 0 {
            return Err(OracleError::InvalidDimension {
                dim: rho.nrows(),
                reason: "density matrix must be square and nonempty",
            });
        }
        let state = DensityMatrix { rho };
        state.validate()?;
        Ok(state)
    }

    /// Skips validation. Operations still re-check the trace.
    pub fn new_unchecked(rho: DMatrix<Complex64>) -> Self {
        DensityMatrix { rho }
    }

    pub fn from_populations(pops: &[f64]) -> Result<Self, OracleError> {
        Self::new(Self::diag_matrix(pops))
    }

    pub fn from_populations_unchecked(pops: &[f64]) -> Self {
        Self::new_unchecked(Self::diag_matrix(pops))
    }

    fn diag_matrix(pops: &[f64]) -> DMatrix<Complex64> {
        let n = pops.len();
        DMatrix::from_fn(n, n, |r, c| {
            if r == c {
                Complex64::new(pops[r], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// Pure state `|psi><psi|` from amplitudes.
    pub fn from_amplitudes(psi: &[Complex64]) -> Result<Self, OracleError> {
        let n = psi.len();
        Self::new(DMatrix::from_fn(n, n, |r, c| psi[r] * psi[c].conj()))
    }

    pub fn vacuum(dim: usize) -> Result<Self, OracleError> {
        let mut pops = vec![0.0; dim];
        if let Some(p) = pops.first_mut() {
            *p = 1.0;
        }
        Self::from_populations(&pops)
    }

    /// Bose-Einstein populations `nbar^m / (1 + nbar)^(m+1)`.
    pub fn thermal(mean: f64, dim: usize) -> Result<Self, OracleError> {
        check_mean(mean)?;
        let ratio = mean / (1.0 + mean);
        let pops: Vec<f64> = (0..dim)
            .scan(1.0 / (1.0 + mean), |p, _| {
                let cur = *p;
                *p *= ratio;
                Some(cur)
            })
            .collect();
        Self::from_populations(&pops)
    }

    /// Poisson populations: a coherent state after phase averaging.
    pub fn poisson(mean: f64, dim: usize) -> Result<Self, OracleError> {
        check_mean(mean)?;
        let pops: Vec<f64> = (0..dim)
            .scan((-mean).exp(), |p, m| {
                let cur = *p;
                *p *= mean / (m as f64 + 1.0);
                Some(cur)
            })
            .collect();
        Self::from_populations(&pops)
    }

    /// Pure coherent state `|alpha>`.
    pub fn coherent(alpha: Complex64, dim: usize) -> Result<Self, OracleError> {
        let psi: Vec<Complex64> = (0..dim)
            .scan(Complex64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0), |c, m| {
                let cur = *c;
                *c *= alpha / (m as f64 + 1.0).sqrt();
                Some(cur)
            })
            .collect();
        Self::from_amplitudes(&psi)
    }

    /// Pure squeezed vacuum whose anti-squeezed quadrature lies at phase `angle`.
    ///
    /// The quadrature variance at phase `theta` is
    /// `[e^{2r} cos^2(theta - angle) + e^{-2r} sin^2(theta - angle)] / 2`.
    pub fn squeezed_vacuum(r: f64, angle: f64, dim: usize) -> Result<Self, OracleError> {
        if !(r >= 0.0 && r.is_finite()) {
            return Err(OracleError::InvalidState(format!("squeeze parameter {r}")));
        }
        let step = Complex64::from_polar(r.tanh(), 2.0 * angle);
        let mut psi = vec![Complex64::new(0.0, 0.0); dim];
        let mut c = Complex64::new(1.0 / r.cosh().sqrt(), 0.0);
        let mut m = 0usize;
        while 2 * m < dim {
            psi[2 * m] = c;
            // c_{m+1} / c_m = step * sqrt((2m+1)(2m+2)) / (2(m+1))
            let mf = m as f64;
            c *= step * ((2.0 * mf + 1.0) * (2.0 * mf + 2.0)).sqrt() / (2.0 * (mf + 1.0));
            m += 1;
        }
        Self::from_amplitudes(&psi)
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.rho
    }

    /// Fock populations `rho_mm`.
    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|m| self.rho[(m, m)].re).collect()
    }

    /// The populations alone: the state after averaging over the phase.
    pub fn phase_averaged(&self) -> Self {
        DensityMatrix::new_unchecked(Self::diag_matrix(&self.populations()))
    }

    pub fn trace(&self) -> f64 {
        self.rho.trace().re
    }

    pub(crate) fn check_trace(&self) -> Result<(), OracleError> {
        let trace = self.trace();
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(OracleError::Trace { trace });
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), OracleError> {
        let deviation = (&self.rho - self.rho.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if deviation > HERMITIAN_TOL {
            return Err(OracleError::NotHermitian { deviation });
        }
        self.check_trace()?;
        // The eigensolver underflows on tiny tail entries. Flushing them moves
        // eigenvalues by at most dim * FLUSH, far below the tolerance.
        let flushed = self.rho.map(|z| {
            if z.norm() < FLUSH {
                Complex64::new(0.0, 0.0)
            } else {
                z
            }
        });
        let eigenvalue = SymmetricEigen::new(flushed)
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if eigenvalue < -EIGEN_TOL {
            return Err(OracleError::NegativeEigenvalue { eigenvalue });
        }
        Ok(())
    }

    fn quadrature_operator(&self, theta: f64) -> DMatrix<Complex64> {
        let d = self.dim();
        let phase = Complex64::from_polar(std::f64::consts::FRAC_1_SQRT_2, theta);
        // x_theta = (a^dagger e^{i theta} + a e^{-i theta}) / sqrt 2
        DMatrix::from_fn(d, d, |r, c| {
            if r == c + 1 {
                phase * (r as f64).sqrt()
            } else if c == r + 1 {
                phase.conj() * (c as f64).sqrt()
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// `Tr[rho x_theta]` at a fixed phase.
    pub fn quadrature_mean(&self, theta: f64) -> f64 {
        (&self.rho * self.quadrature_operator(theta)).trace().re
    }

    /// `Tr[rho x_theta^2]` at a fixed phase. Valid while the state has no
    /// weight on the top level.
    pub fn quadrature_second_moment(&self, theta: f64) -> f64 {
        let x = self.quadrature_operator(theta);
        (&self.rho * &x * &x).trace().re
    }
}

fn check_mean(mean: f64) -> Result<(), OracleError> {
    if mean >= 0.0 && mean.is_finite() {
        Ok(())
    } else {
        Err(OracleError::InvalidState(format!("mean photon number {mean}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_states_validate() {
        assert!(DensityMatrix::vacuum(5).is_ok());
        assert!(DensityMatrix::thermal(2.0, 160).is_ok());
        assert!(DensityMatrix::poisson(1.0, 40).is_ok());
        assert!(DensityMatrix::coherent(Complex64::new(0.6, -0.3), 40).is_ok());
        assert!(DensityMatrix::squeezed_vacuum(0.5, 0.3, 80).is_ok());
    }

    #[test]
    fn truncated_thermal_fails_trace() {
        assert!(matches!(
            DensityMatrix::thermal(2.0, 20),
            Err(OracleError::Trace { .. })
        ));
    }

    #[test]
    fn rejects_bad_matrices() {
        let mut m = DMatrix::from_element(2, 2, Complex64::new(0.0, 0.0));
        m[(0, 0)] = Complex64::new(0.5, 0.0);
        m[(1, 1)] = Complex64::new(0.5, 0.0);
        m[(0, 1)] = Complex64::new(0.1, 0.0);
        assert!(matches!(
            DensityMatrix::new(m.clone()),
            Err(OracleError::NotHermitian { .. })
        ));
        m[(0, 1)] = Complex64::new(0.0, 0.0);
        m[(0, 0)] = Complex64::new(1.5, 0.0);
        m[(1, 1)] = Complex64::new(-0.5, 0.0);
        assert!(matches!(
            DensityMatrix::new(m),
            Err(OracleError::NegativeEigenvalue { .. })
        ));
        assert!(DensityMatrix::thermal(-1.0, 10).is_err());
    }

    #[test]
    fn coherent_quadrature_mean() {
        let alpha = 0.7f64;
        let rho = DensityMatrix::coherent(Complex64::new(alpha, 0.0), 50).unwrap();
        for theta in [0.0, 0.4, 1.3] {
            let want = 2f64.sqrt() * alpha * f64::cos(theta);
            assert!((rho.quadrature_mean(theta) - want).abs() < 1e-12);
        }
    }

    #[test]
    fn squeezed_variance_follows_angle_convention() {
        let (r, angle) = (0.5, 0.3);
        let rho = DensityMatrix::squeezed_vacuum(r, angle, 120).unwrap();
        for theta in [0.0, 0.3, 1.1, 1.87] {
            let d = theta - angle;
            let want = ((2.0 * r).exp() * d.cos().powi(2) + (-2.0 * r).exp() * d.sin().powi(2)) / 2.0;
            assert!((rho.quadrature_second_moment(theta) - want).abs() < 1e-12);
        }
    }

    #[test]
    fn phase_averaging_keeps_populations() {
        let rho = DensityMatrix::coherent(Complex64::from_polar(0.8, 1.0), 40).unwrap();
        let avg = rho.phase_averaged();
        let p = DensityMatrix::poisson(0.64, 40).unwrap();
        for (a, b) in avg.populations().iter().zip(p.populations()) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!(avg.validate().is_ok());
    }
}
