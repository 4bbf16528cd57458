//! Noise-free integration of the nonlinear mean-field equations
//!
//!   q̇ = ω_m p
//!   ṗ = −ω_m q − γ_m p + g₁|α|² + 2g₂|α|²q
//!   α̇ = −(iΔ_c + κ₁ + κ₂)α + ig₁αq + ig₂αq² + ε_d
//!
//! with an adaptive Dormand–Prince 5(4) scheme. Used as an independent
//! check on the algebraic steady-state solver. `detuning` is read as Δ_c.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::PhysicalParams;

/// State (q, p, Re α, Im α).
pub type MeanFieldState = [f64; 4];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryOptions {
    pub rtol: f64,
    /// Relative state change over one mechanical period that counts as
    /// converged. Must sit well above the noise floor the step controller
    /// leaves behind (of order `rtol` per step), or a settled state never
    /// registers as converged.
    pub convergence_tolerance: f64,
    pub max_steps: usize,
}

impl Default for TrajectoryOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-12,
            convergence_tolerance: 1e-9,
            max_steps: 50_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    /// Sample times, one per mechanical period.
    pub times: Vec<f64>,
    pub states: Vec<MeanFieldState>,
    pub final_state: MeanFieldState,
    /// False when the state was still moving at `t_end` (divergence or a
    /// limit cycle).
    pub converged: bool,
    pub steps: usize,
}

impl Trajectory {
    pub fn photon_number(&self) -> f64 {
        let [_, _, x, y] = self.final_state;
        x * x + y * y
    }
}

struct System {
    wm: f64,
    gm: f64,
    kappa: f64,
    delta: f64,
    g1: f64,
    g2: f64,
    eps: f64,
}

impl System {
    fn rhs(&self, y: &MeanFieldState) -> MeanFieldState {
        let [q, p, x, z] = *y;
        let n = x * x + z * z;
        // α̇ = −κα − i(Δ_c − g₁q − g₂q²)α + ε
        let d = self.delta - self.g1 * q - self.g2 * q * q;
        [
            self.wm * p,
            -self.wm * q - self.gm * p + self.g1 * n + 2.0 * self.g2 * n * q,
            -self.kappa * x + d * z + self.eps,
            -self.kappa * z - d * x,
        ]
    }
}

// Dormand–Prince 5(4) tableau. The nodes are implicit in the autonomous
// system and kept only to check the tableau.
#[cfg_attr(not(test), allow(dead_code))]
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// One Dormand–Prince step; returns the 5th-order solution and the scaled
/// error norm.
fn dp_step(sys: &System, y: &MeanFieldState, h: f64, tol: &[f64; 4], rtol: f64) -> (MeanFieldState, f64) {
    let mut k = [[0.0; 4]; 7];
    k[0] = sys.rhs(y);
    for s in 1..7 {
        let mut ys = *y;
        for (j, kj) in k.iter().enumerate().take(s) {
            for i in 0..4 {
                ys[i] += h * A[s][j] * kj[i];
            }
        }
        k[s] = sys.rhs(&ys);
    }
    let mut y5 = *y;
    let mut err = 0.0f64;
    for i in 0..4 {
        let mut d5 = 0.0;
        let mut d4 = 0.0;
        for s in 0..7 {
            d5 += B5[s] * k[s][i];
            d4 += B4[s] * k[s][i];
        }
        y5[i] += h * d5;
        let sc = tol[i] + rtol * y[i].abs().max(y5[i].abs());
        err = err.max((h * (d5 - d4)).abs() / sc);
    }
    (y5, err)
}

/// Largest component change relative to the characteristic scales.
fn scaled_change(a: &MeanFieldState, b: &MeanFieldState, scales: &[f64; 4]) -> f64 {
    (0..4)
        .map(|i| (a[i] - b[i]).abs() / scales[i].max(a[i].abs()))
        .fold(0.0, f64::max)
}

pub fn mean_field_trajectory(
    params: &PhysicalParams,
    t_end: f64,
    initial: MeanFieldState,
    opts: &TrajectoryOptions,
) -> Result<Trajectory> {
    params.validate()?;
    if !(t_end > 0.0) || !t_end.is_finite() {
        return Err(Error::invalid("t_end", "must be finite and > 0"));
    }
    let eps = params.drive_amplitude()?;
    let kappa = params.kappa_tot();
    let sys = System {
        wm: params.omega_m,
        gm: params.gamma_m,
        kappa,
        delta: params.detuning,
        g1: params.g_1,
        g2: params.g_2,
        eps,
    };

    // Characteristic magnitudes set the absolute error floor per component.
    let alpha_scale = (eps / kappa).max(initial[2].hypot(initial[3])).max(1.0);
    let q_scale = (params.g_1.abs() * alpha_scale * alpha_scale / params.omega_m)
        .max(initial[0].abs().max(initial[1].abs()))
        .max(1.0);
    let scales = [q_scale, q_scale, alpha_scale, alpha_scale];
    let tol = scales.map(|s| s * opts.rtol);

    let period = 2.0 * PI / params.omega_m;
    let rate = params.omega_m + kappa + params.detuning.abs();
    let mut h = 0.1 / rate;

    let mut t = 0.0;
    let mut y = initial;
    let mut times = vec![0.0];
    let mut states = vec![y];
    let mut steps = 0usize;
    let mut converged = false;
    let mut prev_sample = y;
    let mut sample = 0u64;

    while t < t_end && steps < opts.max_steps {
        sample += 1;
        let next_sample = sample as f64 * period;
        let target = next_sample.min(t_end);
        while t < target && steps < opts.max_steps {
            let step = h.min(target - t);
            let (y_new, err) = dp_step(&sys, &y, step, &tol, opts.rtol);
            steps += 1;
            if !y_new.iter().all(|v| v.is_finite()) {
                return Ok(Trajectory { times, states, final_state: y, converged: false, steps });
            }
            if err <= 1.0 {
                t = if step == target - t { target } else { t + step };
                y = y_new;
            }
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h = step * factor;
        }
        times.push(t);
        states.push(y);
        if t == next_sample
            && scaled_change(&y, &prev_sample, &scales) < opts.convergence_tolerance
        {
            converged = true;
            break;
        }
        prev_sample = y;
    }
    Ok(Trajectory { times, states, final_state: y, converged, steps })
}
