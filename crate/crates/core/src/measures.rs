//! Entanglement, mechanical squeezing and physicality of a two-mode
//! Gaussian covariance matrix.

use nalgebra::{Matrix2, Matrix4};
use serde::Serialize;

use crate::dynamics::CovarianceMatrix;
use crate::error::{Error, Result};

/// Zero-point variance of a quadrature.
pub const ZERO_POINT_VARIANCE: f64 = 0.5;
/// Σ² − 4 det V in [−CLAMP_TOLERANCE·s, 0) is rounded to zero, with
/// s = max(1, Σ²).
pub const CLAMP_TOLERANCE: f64 = 1e-12;
/// Below −REJECT_TOLERANCE·s the matrix is rejected.
pub const REJECT_TOLERANCE: f64 = 1e-9;
/// Heisenberg floor slack for the physicality test.
pub const PHYSICALITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockDecomposition {
    /// Mechanical autocorrelation.
    pub block_a: Matrix2<f64>,
    /// Optical autocorrelation.
    pub block_b: Matrix2<f64>,
    /// Mechanical–optical cross-correlation.
    pub block_c: Matrix2<f64>,
}

impl BlockDecomposition {
    pub fn new(v: &CovarianceMatrix) -> Self {
        Self {
            block_a: v.block(0, 0),
            block_b: v.block(1, 1),
            block_c: v.block(0, 1),
        }
    }

    pub fn reassemble(&self) -> Matrix4<f64> {
        let mut m = Matrix4::zeros();
        m.fixed_view_mut::<2, 2>(0, 0).copy_from(&self.block_a);
        m.fixed_view_mut::<2, 2>(2, 2).copy_from(&self.block_b);
        m.fixed_view_mut::<2, 2>(0, 2).copy_from(&self.block_c);
        m.fixed_view_mut::<2, 2>(2, 0).copy_from(&self.block_c.transpose());
        m
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntanglementResult {
    pub nu_minus: f64,
    pub e_n: f64,
    /// Σ(V) = det A + det B − 2 det C
    pub sigma_v: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SqueezingResult {
    pub s_q: f64,
    pub s_p: f64,
    pub sigma_q: f64,
    pub sigma_p: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalityReport {
    /// Smallest symplectic eigenvalue of V itself, from the symmetric
    /// matrix V^{1/2} Ωᵀ V Ω V^{1/2} whose eigenvalues are the ν².
    pub nu_tilde_min: f64,
    /// Same quantity from the invariants Σ̃ = det A + det B + 2 det C and
    /// det V. Loses about half the digits when the two symplectic
    /// eigenvalues coincide, so it serves as a cross-check only.
    pub nu_tilde_min_invariant: f64,
    /// The two routes agree to [`CROSS_CHECK_TOLERANCE`].
    pub cross_check_ok: bool,
    pub physical: bool,
}

/// Agreement required between the two symplectic-eigenvalue routes,
/// relative to max(1, ν̃_max).
pub const CROSS_CHECK_TOLERANCE: f64 = 1e-6;

/// Smaller symplectic eigenvalue of a two-mode CM from the invariant
/// `sigma` (Σ or Σ̃) and det V. Uses ν² = 2 det V / (Σ + √(Σ² − 4 det V)),
/// which avoids the cancellation in (Σ − √…)/2 near pure states.
fn smaller_symplectic(sigma: f64, det_v: f64) -> Result<f64> {
    if !(det_v > 0.0) {
        return Err(Error::InvalidCovariance(format!("det V = {det_v:.3e} is not positive")));
    }
    let scale = (sigma * sigma).max(1.0);
    let mut disc = sigma * sigma - 4.0 * det_v;
    if disc < 0.0 {
        if disc < -REJECT_TOLERANCE * scale {
            return Err(Error::InvalidCovariance(format!(
                "Σ² − 4 det V = {disc:.3e} is negative beyond rounding"
            )));
        }
        // Values between the clamp and reject thresholds are also treated
        // as rounding noise; the smaller threshold documents the expected size.
        disc = 0.0;
    }
    let denom = sigma + disc.sqrt();
    if !(denom > 0.0) {
        return Err(Error::InvalidCovariance("symplectic invariant is not positive".into()));
    }
    Ok((2.0 * det_v / denom).sqrt())
}

pub fn log_negativity(v: &CovarianceMatrix) -> Result<EntanglementResult> {
    let b = BlockDecomposition::new(v);
    let sigma_v = b.block_a.determinant() + b.block_b.determinant() - 2.0 * b.block_c.determinant();
    let nu_minus = smaller_symplectic(sigma_v, v.v.determinant())?;
    Ok(EntanglementResult {
        nu_minus,
        e_n: (-(2.0 * nu_minus).ln()).max(0.0),
        sigma_v,
    })
}

fn squeezing_db(variance: f64) -> f64 {
    -10.0 * (variance / ZERO_POINT_VARIANCE).log10()
}

pub fn squeezing_degrees(v: &CovarianceMatrix) -> Result<SqueezingResult> {
    let sigma_q = v.v[(0, 0)];
    let sigma_p = v.v[(1, 1)];
    if !(sigma_q > 0.0 && sigma_p > 0.0) {
        return Err(Error::InvalidCovariance(format!(
            "mechanical variances ({sigma_q:.3e}, {sigma_p:.3e}) must be positive"
        )));
    }
    Ok(SqueezingResult {
        s_q: squeezing_db(sigma_q),
        s_p: squeezing_db(sigma_p),
        sigma_q,
        sigma_p,
    })
}

#[rustfmt::skip]
const OMEGA: Matrix4<f64> = Matrix4::new(
    0.0, 1.0, 0.0, 0.0,
    -1.0, 0.0, 0.0, 0.0,
    0.0, 0.0, 0.0, 1.0,
    0.0, 0.0, -1.0, 0.0,
);

/// Symplectic spectrum check. Non-physical or non-positive matrices are
/// reported, not rejected.
pub fn physicality(v: &CovarianceMatrix) -> PhysicalityReport {
    let b = BlockDecomposition::new(v);
    let sigma_t = b.block_a.determinant() + b.block_b.determinant() + 2.0 * b.block_c.determinant();
    let from_invariants = smaller_symplectic(sigma_t, v.v.determinant()).unwrap_or(f64::NAN);

    let eig = v.v.symmetric_eigen();
    let positive = eig.eigenvalues.min() > 0.0;
    let (nu_min, nu_max) = if positive {
        let root = &eig.eigenvectors
            * Matrix4::from_diagonal(&eig.eigenvalues.map(f64::sqrt))
            * eig.eigenvectors.transpose();
        let m = root * OMEGA.transpose() * v.v * OMEGA * root;
        let nu2 = ((m + m.transpose()) * 0.5).symmetric_eigenvalues();
        (nu2.min().max(0.0).sqrt(), nu2.max().sqrt())
    } else {
        (f64::NAN, f64::NAN)
    };
    let cross_check_ok = (nu_min - from_invariants).abs() <= CROSS_CHECK_TOLERANCE * nu_max.max(1.0);
    PhysicalityReport {
        nu_tilde_min: nu_min,
        nu_tilde_min_invariant: from_invariants,
        cross_check_ok,
        physical: positive && nu_min >= 0.5 - PHYSICALITY_TOLERANCE,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cm(m: Matrix4<f64>) -> CovarianceMatrix {
        CovarianceMatrix::new(m).unwrap()
    }

    fn two_mode_squeezed(r: f64) -> CovarianceMatrix {
        let c = (2.0 * r).cosh() / 2.0;
        let s = (2.0 * r).sinh() / 2.0;
        #[rustfmt::skip]
        let m = Matrix4::new(
            c, 0.0, s, 0.0,
            0.0, c, 0.0, -s,
            s, 0.0, c, 0.0,
            0.0, -s, 0.0, c,
        );
        cm(m)
    }

    #[test]
    fn vacuum_is_separable() {
        let e = log_negativity(&CovarianceMatrix::vacuum()).unwrap();
        assert!((e.nu_minus - 0.5).abs() < 1e-15);
        assert_eq!(e.e_n, 0.0);
        let p = physicality(&CovarianceMatrix::vacuum());
        assert!(p.physical);
        assert!((p.nu_tilde_min - 0.5).abs() < 1e-15);
    }

    #[test]
    fn two_mode_squeezed_state() {
        for &r in &[0.1, 0.5, 1.0] {
            let e = log_negativity(&two_mode_squeezed(r)).unwrap();
            assert!((e.e_n - 2.0 * r).abs() < 1e-12, "r = {r}: {}", e.e_n);
            assert!(((e.nu_minus - (-2.0 * r).exp() / 2.0) / e.nu_minus).abs() < 1e-12);
            assert!(((e.sigma_v - (4.0 * r).cosh() / 2.0) / e.sigma_v).abs() < 1e-12);
            let p = physicality(&two_mode_squeezed(r));
            assert!(p.physical && p.cross_check_ok, "{p:?}");
            assert!((p.nu_tilde_min - 0.5).abs() < 1e-12, "{p:?}");
        }
    }

    #[test]
    fn sub_vacuum_matrix_is_unphysical() {
        let v = cm(Matrix4::identity() * 0.25);
        let p = physicality(&v);
        assert!(!p.physical);
        assert!((p.nu_tilde_min - 0.25).abs() < 1e-15);
        assert!((p.nu_tilde_min_invariant - 0.25).abs() < 1e-15);
        assert!(p.cross_check_ok);
    }

    #[test]
    fn squeezing_reference_values() {
        let s = squeezing_degrees(&CovarianceMatrix::vacuum()).unwrap();
        assert_eq!((s.s_q, s.s_p), (0.0, 0.0));
        let n = 20.3;
        let v = cm(Matrix4::identity() * (n + 0.5));
        let s = squeezing_degrees(&v).unwrap();
        assert!((s.s_q + 10.0 * (2.0 * n + 1.0).log10()).abs() < 1e-12);
        let mut m = Matrix4::identity() * 0.5;
        m[(0, 0)] = 0.25;
        m[(1, 1)] = 1.0;
        let s = squeezing_degrees(&cm(m)).unwrap();
        assert!((s.s_q - 10.0 * 2f64.log10()).abs() < 1e-12);
        assert!(s.s_q > 3.0);
        m[(0, 0)] = 0.0;
        assert!(squeezing_degrees(&cm(m)).is_err());
    }

    #[test]
    fn blocks_reassemble_exactly() {
        let v = two_mode_squeezed(0.7);
        assert_eq!(BlockDecomposition::new(&v).reassemble(), v.v);
    }

    #[test]
    fn negative_discriminant_is_rejected() {
        // Σ < 2√det V cannot come from a positive matrix; fabricate via invariants.
        assert!(smaller_symplectic(1.0, 1.0).is_err());
        assert!(smaller_symplectic(1.0, 0.25 + 1e-14).is_ok());
        assert!(smaller_symplectic(1.0, -1.0).is_err());
    }
}
