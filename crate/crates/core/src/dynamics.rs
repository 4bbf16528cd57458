//! Linearized fluctuation dynamics: drift and diffusion matrices, stability
//! of the drift, and the steady-state covariance from the Lyapunov equation
//! A V + V Aᵀ = −D.
//!
//! All matrices use the quadrature ordering of [`crate::constants::BASIS`].

use nalgebra::{Matrix2, Matrix4, SMatrix, SVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::feedback::EffectiveCavity;
use crate::steady_state::EffectiveModel;

/// Spectral abscissae with |max Re| below this fraction of the frequency
/// scale are classified as marginal, hence unstable.
pub const MARGINAL_TOLERANCE: f64 = 1e-9;
/// Routh–Hurwitz and the eigenvalues must agree whenever the spectral
/// abscissa is at least this far (relative) from zero.
pub const DISAGREEMENT_TOLERANCE: f64 = 1e-6;
/// Condition estimates above this attach a warning to a Lyapunov solve.
pub const CONDITION_WARNING: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftMatrix {
    pub a: Matrix4<f64>,
    /// Characteristic frequency used to balance the matrix (ω_m).
    pub scale: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionMatrix {
    pub d: Matrix4<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix {
    pub v: Matrix4<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StabilityReport {
    pub stable: bool,
    /// Largest real part of the drift eigenvalues (rad/s).
    pub margin: f64,
    /// Verdict of the Routh–Hurwitz test alone.
    pub routh_hurwitz: bool,
    pub method_agreement: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LyapunovSolution {
    pub v: CovarianceMatrix,
    /// ‖AV + VAᵀ + D‖_F / ‖D‖_F
    pub residual: f64,
    /// ‖M‖₁‖M⁻¹‖₁ of the vectorized 16×16 operator.
    pub condition: f64,
    pub warning: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CmIntegration {
    pub v: CovarianceMatrix,
    /// True when the flow left the finite range (unstable drift).
    pub diverged: bool,
    /// Number of interval doublings used.
    pub doublings: u32,
}

/// Row-major copy for serialization and printing.
pub fn matrix_rows(m: &Matrix4<f64>) -> [[f64; 4]; 4] {
    let mut out = [[0.0; 4]; 4];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = m[(i, j)];
        }
    }
    out
}

impl DriftMatrix {
    pub fn rows(&self) -> [[f64; 4]; 4] {
        matrix_rows(&self.a)
    }
}

impl DiffusionMatrix {
    pub fn rows(&self) -> [[f64; 4]; 4] {
        matrix_rows(&self.d)
    }
}

impl CovarianceMatrix {
    /// Accepts `v` only if it is symmetric to 1e-12 relative to its largest entry.
    pub fn new(v: Matrix4<f64>) -> Result<Self> {
        let scale = v.amax();
        let asym = (v - v.transpose()).amax();
        if !v.iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidCovariance("non-finite entry".into()));
        }
        if asym > 1e-12 * scale {
            return Err(Error::InvalidCovariance(format!(
                "asymmetry {asym:.3e} exceeds 1e-12 of max entry {scale:.3e}"
            )));
        }
        Ok(Self::symmetrized(v))
    }

    pub fn symmetrized(v: Matrix4<f64>) -> Self {
        Self {
            v: (v + v.transpose()) * 0.5,
        }
    }

    /// Two-mode vacuum, I/2.
    pub fn vacuum() -> Self {
        Self {
            v: Matrix4::identity() * 0.5,
        }
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.v.symmetric_eigenvalues().min()
    }

    pub fn rows(&self) -> [[f64; 4]; 4] {
        matrix_rows(&self.v)
    }

    /// 2×2 block at block position (i, j).
    pub fn block(&self, i: usize, j: usize) -> Matrix2<f64> {
        self.v.fixed_view::<2, 2>(2 * i, 2 * j).into_owned()
    }
}

pub fn build_drift(model: &EffectiveModel, cavity: &EffectiveCavity, gamma_m: f64, omega_m: f64) -> DriftMatrix {
    let g = std::f64::consts::SQRT_2 * model.lambda_eff;
    let k = cavity.kappa_tilde;
    let d = cavity.delta_tilde;
    #[rustfmt::skip]
    let a = Matrix4::new(
        0.0,              omega_m,  0.0, 0.0,
        -model.omega_eff, -gamma_m, g,   0.0,
        0.0,              0.0,      -k,  d,
        g,                0.0,      -d,  -k,
    );
    DriftMatrix { a, scale: omega_m }
}

pub fn build_diffusion(gamma_m: f64, n_m: f64, kappa_tilde: f64) -> DiffusionMatrix {
    DiffusionMatrix {
        d: Matrix4::from_diagonal(&nalgebra::Vector4::new(
            0.0,
            gamma_m * (2.0 * n_m + 1.0),
            kappa_tilde,
            kappa_tilde,
        )),
    }
}

/// Coefficients of det(sI − A/scale), ascending, leading coefficient 1.
/// Faddeev–LeVerrier recursion.
pub fn characteristic_polynomial(a: &DriftMatrix) -> [f64; 5] {
    let b = a.a / a.scale;
    let mut c = [0.0; 5];
    c[4] = 1.0;
    let mut m = Matrix4::<f64>::zeros();
    for k in 1..=4 {
        m = b * m + Matrix4::identity() * c[5 - k];
        c[4 - k] = -(b * m).trace() / k as f64;
    }
    c
}

/// Hurwitz test for s⁴ + b₁s³ + b₂s² + b₃s + b₄.
fn routh_hurwitz(c: &[f64; 5]) -> bool {
    let (b1, b2, b3, b4) = (c[3], c[2], c[1], c[0]);
    let h2 = b1 * b2 - b3;
    b1 > 0.0 && b3 > 0.0 && b4 > 0.0 && h2 > 0.0 && b3 * h2 - b1 * b1 * b4 > 0.0
}

/// Largest real part of the eigenvalues of `a` (rad/s).
pub fn spectral_abscissa(a: &DriftMatrix) -> f64 {
    let b = a.a / a.scale;
    b.complex_eigenvalues().iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max) * a.scale
}

pub fn assess_stability(a: &DriftMatrix) -> Result<StabilityReport> {
    let rh = routh_hurwitz(&characteristic_polynomial(a));
    let margin = spectral_abscissa(a);
    let eig = margin < -MARGINAL_TOLERANCE * a.scale;
    let agree = rh == eig;
    if !agree && margin.abs() > DISAGREEMENT_TOLERANCE * a.scale {
        return Err(Error::StabilityDisagreement {
            routh_hurwitz: rh,
            margin,
        });
    }
    Ok(StabilityReport {
        stable: rh && eig,
        margin,
        routh_hurwitz: rh,
        method_agreement: agree,
    })
}

/// Steady-state covariance. Refuses unstable drifts.
pub fn solve_lyapunov(a: &DriftMatrix, d: &DiffusionMatrix) -> Result<LyapunovSolution> {
    let report = assess_stability(a)?;
    solve_lyapunov_assessed(a, d, &report)
}

/// As [`solve_lyapunov`] when the stability report is already at hand.
pub fn solve_lyapunov_assessed(a: &DriftMatrix, d: &DiffusionMatrix, report: &StabilityReport) -> Result<LyapunovSolution> {
    if !report.stable {
        return Err(Error::NoSteadyState { margin: report.margin });
    }
    let b = a.a / a.scale;
    let ds = d.d / a.scale;

    // vec(V)[i + 4j] = V[i, j]; vec(BV + VBᵀ) = (I⊗B + B⊗I) vec(V).
    let mut m = SMatrix::<f64, 16, 16>::zeros();
    for j in 0..4 {
        for i in 0..4 {
            for k in 0..4 {
                m[(i + 4 * j, k + 4 * j)] += b[(i, k)];
                m[(i + 4 * j, i + 4 * k)] += b[(j, k)];
            }
        }
    }
    let rhs = SVector::<f64, 16>::from_iterator(ds.iter().map(|x| -x));
    let lu = m.lu();
    let mut x = lu.solve(&rhs).ok_or(Error::SingularLyapunov)?;
    let r = rhs - m * x;
    x += lu.solve(&r).ok_or(Error::SingularLyapunov)?;

    let inv = lu.try_inverse().ok_or(Error::SingularLyapunov)?;
    let condition = one_norm(&m) * one_norm(&inv);

    let v = CovarianceMatrix::symmetrized(Matrix4::from_iterator(x.iter().copied()));
    let residual = lyapunov_residual(a, d, &v);
    let warning = (condition > CONDITION_WARNING)
        .then(|| format!("Lyapunov operator condition estimate {condition:.3e} exceeds {CONDITION_WARNING:.0e}"));
    Ok(LyapunovSolution { v, residual, condition, warning })
}

fn one_norm<const N: usize>(m: &SMatrix<f64, N, N>) -> f64 {
    m.column_iter().map(|c| c.abs().sum()).fold(0.0, f64::max)
}

/// ‖AV + VAᵀ + D‖_F / ‖D‖_F, or the absolute norm when D = 0.
pub fn lyapunov_residual(a: &DriftMatrix, d: &DiffusionMatrix, v: &CovarianceMatrix) -> f64 {
    let r = a.a * v.v + v.v * a.a.transpose() + d.d;
    let dn = d.d.norm();
    if dn > 0.0 {
        r.norm() / dn
    } else {
        r.norm()
    }
}

/// Propagates V̇ = AV + VAᵀ + D from `v0` for `t_end` seconds.
///
/// One short step h is taken exactly with Van Loan's block exponential and
/// then doubled repeatedly: Q(2h) = Φ(h)Q(h)Φ(h)ᵀ + Q(h), Φ(2h) = Φ(h)².
pub fn integrate_cm(a: &DriftMatrix, d: &DiffusionMatrix, v0: &CovarianceMatrix, t_end: f64) -> Result<CmIntegration> {
    if !(t_end > 0.0) || !t_end.is_finite() {
        return Err(Error::invalid("t_end", "must be finite and > 0"));
    }
    let norm = one_norm(&a.a).max(f64::MIN_POSITIVE);
    let h_max = 0.5 / norm;
    let doublings = (t_end / h_max).log2().ceil().clamp(0.0, 80.0) as u32;
    let h = t_end / 2f64.powi(doublings as i32);

    let mut vl = SMatrix::<f64, 8, 8>::zeros();
    vl.fixed_view_mut::<4, 4>(0, 0).copy_from(&(-a.a * h));
    vl.fixed_view_mut::<4, 4>(0, 4).copy_from(&(d.d * h));
    vl.fixed_view_mut::<4, 4>(4, 4).copy_from(&(a.a.transpose() * h));
    let e = vl.exp();
    let f12: Matrix4<f64> = e.fixed_view::<4, 4>(0, 4).into_owned();
    let f22: Matrix4<f64> = e.fixed_view::<4, 4>(4, 4).into_owned();
    let mut phi = f22.transpose();
    let mut q = phi * f12;
    q = (q + q.transpose()) * 0.5;

    for _ in 0..doublings {
        q = phi * q * phi.transpose() + q;
        q = (q + q.transpose()) * 0.5;
        phi *= phi;
    }
    let v = phi * v0.v * phi.transpose() + q;
    let diverged = !v.iter().all(|x| x.is_finite());
    Ok(CmIntegration {
        v: CovarianceMatrix::symmetrized(v),
        diverged,
        doublings,
    })
}
