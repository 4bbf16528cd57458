//! Coherent feedback through a beam splitter: effective cavity decay and
//! detuning, and the vacuum normalization of the mixed input noise.

use nalgebra::Complex;
use serde::Serialize;

use crate::constants::SPEED_OF_LIGHT;
use crate::error::{Error, Result};

/// Delay is treated as instantaneous while it stays below this fraction of
/// the cavity lifetime.
pub const DELAY_FRACTION_LIMIT: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FeedbackLoop {
    pub r_b: f64,
    pub t_b: f64,
    pub theta: f64,
}

impl FeedbackLoop {
    /// Loop losses are folded into `r_b`, so only 0 <= r_b < 1 is accepted.
    pub fn new(r_b: f64, theta: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&r_b) {
            return Err(Error::invalid("r_b", "must satisfy 0 <= r_b < 1"));
        }
        if !theta.is_finite() {
            return Err(Error::invalid("theta", "must be finite"));
        }
        Ok(Self {
            r_b,
            t_b: ((1.0 - r_b) * (1.0 + r_b)).sqrt(),
            theta,
        })
    }

    pub fn open() -> Self {
        Self { r_b: 0.0, t_b: 1.0, theta: 0.0 }
    }

    /// 2√(κ₁κ₂)·r_B, the feedback-induced coupling strength.
    pub fn strength(&self, kappa_1: f64, kappa_2: f64) -> f64 {
        2.0 * (kappa_1 * kappa_2).sqrt() * self.r_b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffectiveCavity {
    pub kappa_tilde: f64,
    pub delta_tilde: f64,
    /// κ̃/κ_tot
    pub eta: f64,
}

/// κ̃ = κ_tot − 2√(κ₁κ₂) r_B cos θ, Δ̃ = Δ̄ − 2√(κ₁κ₂) r_B sin θ.
pub fn effective_cavity(
    kappa_1: f64,
    kappa_2: f64,
    fb: &FeedbackLoop,
    delta_bar: f64,
) -> EffectiveCavity {
    let kappa_tilde = effective_decay(kappa_1, kappa_2, fb);
    EffectiveCavity {
        kappa_tilde,
        delta_tilde: delta_bar - fb.strength(kappa_1, kappa_2) * fb.theta.sin(),
        eta: kappa_tilde / (kappa_1 + kappa_2),
    }
}

/// κ̃ written as (√κ₁ − √κ₂)² + 2√(κ₁κ₂)[(1 − r_B) + 2 r_B sin²(θ/2)],
/// which stays accurate when the decay is almost cancelled.
fn effective_decay(kappa_1: f64, kappa_2: f64, fb: &FeedbackLoop) -> f64 {
    let diff = kappa_1.sqrt() - kappa_2.sqrt();
    let half = (fb.theta / 2.0).sin();
    diff * diff
        + 2.0 * (kappa_1 * kappa_2).sqrt() * ((1.0 - fb.r_b) + 2.0 * fb.r_b * half * half)
}

/// Relative mismatch between the noise weights t_B²κ₁ + |√κ₂ − √κ₁ r_B e^{iθ}|²
/// and κ̃. Zero up to rounding for any lossless splitter.
pub fn noise_normalization_residual(kappa_1: f64, kappa_2: f64, fb: &FeedbackLoop) -> f64 {
    let phase = Complex::from_polar(fb.r_b, fb.theta);
    let w2 = Complex::new(kappa_2.sqrt(), 0.0) - phase * kappa_1.sqrt();
    let total = fb.t_b * fb.t_b * kappa_1 + w2.norm_sqr();
    let kappa_tilde = effective_decay(kappa_1, kappa_2, fb);
    ((total - kappa_tilde) / kappa_tilde).abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DelayReport {
    pub delay: f64,
    pub lifetime: f64,
    pub valid: bool,
}

/// Compares the loop propagation delay n·L/c with the cavity lifetime 1/κ̃.
/// Advisory only; the model itself has no delay.
pub fn delay_validity(loop_length: f64, refractive_index: f64, kappa_tilde: f64) -> DelayReport {
    let delay = refractive_index * loop_length.max(0.0) / SPEED_OF_LIGHT;
    let lifetime = 1.0 / kappa_tilde;
    DelayReport {
        delay,
        lifetime,
        valid: delay <= DELAY_FRACTION_LIMIT * lifetime,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EtaPoint {
    pub r_b: f64,
    pub theta: f64,
    pub eta: f64,
}

/// Decay ratio over an (r_B, θ) grid, r_B outer.
pub fn eta_grid(kappa_1: f64, kappa_2: f64, r_values: &[f64], theta_values: &[f64]) -> Result<Vec<EtaPoint>> {
    let mut out = Vec::with_capacity(r_values.len() * theta_values.len());
    for &r_b in r_values {
        for &theta in theta_values {
            let fb = FeedbackLoop::new(r_b, theta)?;
            out.push(EtaPoint {
                r_b,
                theta,
                eta: effective_cavity(kappa_1, kappa_2, &fb, 0.0).eta,
            });
        }
    }
    Ok(out)
}
