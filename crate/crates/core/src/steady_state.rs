//! Mean-field fixed point of the driven optomechanical system.
//!
//! With n = |α_s|², the static displacement is q_s = g₁n/(ω_m − 2g₂n) and the
//! effective detuning Δ̄ = Δ_c − g₁q_s − g₂q_s². Clearing denominators in
//! n(Δ̄² + κ²) = ε_d² gives a polynomial of degree ≤ 5 in n whose admissible
//! real roots are the possible steady states.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::feedback::{effective_cavity, FeedbackLoop};
use crate::params::{DetuningMode, PhysicalParams};
use crate::poly::Poly;

/// Roots closer than this (relative) to ω_m/(2g₂) are rejected.
pub const POLE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchRule {
    /// Smallest photon number; the branch connected to zero drive.
    #[default]
    Lowest,
    Highest,
    /// k-th admissible root in ascending photon number.
    Index(usize),
}

impl std::str::FromStr for BranchRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lowest" => Ok(BranchRule::Lowest),
            "highest" => Ok(BranchRule::Highest),
            other => other
                .strip_prefix("index:")
                .and_then(|k| k.parse().ok())
                .map(BranchRule::Index)
                .ok_or_else(|| Error::Config(format!("unknown branch rule `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MeanFieldOptions {
    pub detuning_mode: DetuningMode,
    pub branch: BranchRule,
    /// Use the feedback-modified κ̃ and phase shift in the mean field as well
    /// as in the fluctuations.
    pub feedback_in_mean_field: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EffectiveModel {
    /// Intracavity amplitude, re-phased to be real and nonnegative.
    pub alpha_s: f64,
    pub photon_number: f64,
    pub q_s: f64,
    pub p_s: f64,
    /// Bare detuning Δ_c (given or back-computed).
    pub delta_c: f64,
    pub delta_bar: f64,
    /// Ω_m = ω_m − 2g₂|α_s|²
    pub omega_eff: f64,
    /// λ = (g₁ + 2g₂q_s)α_s
    pub lambda_eff: f64,
    pub branch_count: usize,
    /// Photon numbers of all admissible roots, ascending.
    pub branches: Vec<f64>,
}

/// Ω_m = ω_m − 2g₂n.
pub fn effective_frequency(omega_m: f64, g_2: f64, photon_number: f64) -> f64 {
    omega_m - 2.0 * g_2 * photon_number
}

/// Cavity decay and detuning offset that the mean field sees.
fn mean_field_cavity(p: &PhysicalParams, opts: &MeanFieldOptions) -> Result<(f64, f64)> {
    if opts.feedback_in_mean_field {
        let fb = FeedbackLoop::new(p.r_b, p.theta)?;
        let cav = effective_cavity(p.kappa_1, p.kappa_2, &fb, 0.0);
        Ok((cav.kappa_tilde, cav.delta_tilde))
    } else {
        Ok((p.kappa_tot(), 0.0))
    }
}

fn static_displacement(p: &PhysicalParams, n: f64) -> f64 {
    p.g_1 * n / (p.omega_m - 2.0 * p.g_2 * n)
}

fn build_model(p: &PhysicalParams, n: f64, delta_c: f64, branches: Vec<f64>) -> Result<EffectiveModel> {
    let softening = 1.0 - 2.0 * p.g_2 * n / p.omega_m;
    if n > 0.0 && softening.abs() < POLE_TOLERANCE {
        return Err(Error::NearSingularSoftening {
            relative_distance: softening.abs(),
        });
    }
    let q_s = static_displacement(p, n);
    let alpha_s = n.sqrt();
    Ok(EffectiveModel {
        alpha_s,
        photon_number: n,
        q_s,
        p_s: 0.0,
        delta_c,
        delta_bar: delta_c - p.g_1 * q_s - p.g_2 * q_s * q_s,
        omega_eff: effective_frequency(p.omega_m, p.g_2, n),
        lambda_eff: (p.g_1 + 2.0 * p.g_2 * q_s) * alpha_s,
        branch_count: branches.len(),
        branches,
    })
}

/// Polynomial in x = n/n_max (n_max = ε_d²/κ²) whose roots are the steady
/// states for a given bare detuning. Frequencies are scaled by ω_m.
pub(crate) fn steady_state_polynomial(p: &PhysicalParams, kappa: f64, delta_c: f64, n_max: f64) -> Poly {
    let w = p.omega_m;
    let k = kappa / w;
    let delta = delta_c / w;
    let b = 2.0 * p.g_2 * n_max / w;
    let a = p.g_1 * p.g_1 * n_max / (w * w);
    let c = p.g_2 * p.g_1 * p.g_1 * n_max * n_max / (w * w * w);
    let x = Poly::linear(0.0, 1.0);
    let d = Poly::linear(1.0, -b);
    let d2 = d.mul(&d);
    let d4 = d2.mul(&d2);
    // Δ̄/ω_m = N(x)/D(x)²
    let num = d2
        .scale(delta)
        .sub(&x.mul(&d).scale(a))
        .sub(&Poly(vec![0.0, 0.0, c]));
    x.mul(&num.mul(&num).add(&d4.scale(k * k))).sub(&d4.scale(k * k))
}

/// f(n) = n(Δ̄(n)² + κ²) − ε² and its derivative.
fn field_residual(p: &PhysicalParams, kappa: f64, delta: f64, eps: f64, n: f64) -> (f64, f64) {
    let den = p.omega_m - 2.0 * p.g_2 * n;
    let q = p.g_1 * n / den;
    let dq = p.g_1 * p.omega_m / (den * den);
    let dbar = delta - p.g_1 * q - p.g_2 * q * q;
    let ddbar = -(p.g_1 + 2.0 * p.g_2 * q) * dq;
    (
        n * (dbar * dbar + kappa * kappa) - eps * eps,
        dbar * dbar + kappa * kappa + 2.0 * n * dbar * ddbar,
    )
}

/// Newton steps on the unscaled rational equation, kept only while they
/// reduce the residual. Removes the rounding left by the scaled polynomial.
fn refine_root(p: &PhysicalParams, kappa: f64, delta: f64, eps: f64, mut n: f64) -> f64 {
    let (mut f, mut df) = field_residual(p, kappa, delta, eps, n);
    for _ in 0..8 {
        if df == 0.0 || f == 0.0 {
            break;
        }
        let next = n - f / df;
        if !(next > 0.0) {
            break;
        }
        let (fn_, dfn) = field_residual(p, kappa, delta, eps, next);
        if !(fn_.abs() < f.abs()) {
            break;
        }
        (n, f, df) = (next, fn_, dfn);
    }
    n
}

/// All admissible photon numbers for bare detuning `delta_c`, ascending.
pub fn mean_field_roots(p: &PhysicalParams, opts: &MeanFieldOptions, delta_c: f64) -> Result<Vec<f64>> {
    p.validate()?;
    let eps = p.drive_amplitude()?;
    if eps == 0.0 {
        return Ok(vec![0.0]);
    }
    let (kappa, shift) = mean_field_cavity(p, opts)?;
    let delta = delta_c + shift;
    let n_max = eps * eps / (kappa * kappa);
    let poly = steady_state_polynomial(p, kappa, delta, n_max);

    let mut xs: Vec<f64> = Vec::new();
    for z in poly.roots() {
        if z.im.abs() > 1e-6 * z.norm().max(1.0) {
            continue;
        }
        let x = poly.polish(z.re);
        if !(x > 0.0 && x <= 1.0 + 1e-12) {
            continue;
        }
        let softening = 1.0 - 2.0 * p.g_2 * x * n_max / p.omega_m;
        if softening == 0.0 {
            continue;
        }
        let n = refine_root(p, kappa, delta, eps, x * n_max);
        // Accept only genuine roots of the rational equation.
        if (field_residual(p, kappa, delta, eps, n).0 / (eps * eps)).abs() > 1e-8 {
            continue;
        }
        xs.push(n / n_max);
    }
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * b.abs());
    Ok(xs.into_iter().map(|x| x * n_max).collect())
}

pub fn solve_mean_field(p: &PhysicalParams, opts: &MeanFieldOptions) -> Result<EffectiveModel> {
    p.validate()?;
    let eps = p.drive_amplitude()?;
    let (kappa, shift) = mean_field_cavity(p, opts)?;
    match opts.detuning_mode {
        DetuningMode::DeltaC => {
            let roots = mean_field_roots(p, opts, p.detuning)?;
            let n = match opts.branch {
                BranchRule::Lowest => roots.first().copied(),
                BranchRule::Highest => roots.last().copied(),
                BranchRule::Index(k) => {
                    if k >= roots.len() && !roots.is_empty() {
                        return Err(Error::BranchOutOfRange {
                            requested: k,
                            available: roots.len(),
                        });
                    }
                    roots.get(k).copied()
                }
            }
            .ok_or(Error::NoPhysicalRoot)?;
            build_model(p, n, p.detuning, roots)
        }
        DetuningMode::DeltaBar | DetuningMode::DeltaTilde => {
            let delta_bar = match opts.detuning_mode {
                DetuningMode::DeltaTilde => {
                    let fb = FeedbackLoop::new(p.r_b, p.theta)?;
                    p.detuning + fb.strength(p.kappa_1, p.kappa_2) * p.theta.sin()
                }
                _ => p.detuning,
            };
            let dm = delta_bar + shift;
            let n = eps * eps / (dm * dm + kappa * kappa);
            let softening = 1.0 - 2.0 * p.g_2 * n / p.omega_m;
            if n > 0.0 && softening.abs() < POLE_TOLERANCE {
                return Err(Error::NearSingularSoftening {
                    relative_distance: softening.abs(),
                });
            }
            let q = static_displacement(p, n);
            let delta_c = delta_bar + p.g_1 * q + p.g_2 * q * q;
            let mut m = build_model(p, n, delta_c, vec![n])?;
            // Keep the requested Δ̄ exactly rather than its round trip.
            m.delta_bar = delta_bar;
            Ok(m)
        }
    }
}
