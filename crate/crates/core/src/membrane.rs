//! Membrane-in-the-middle cavity frequency profile and its second-order
//! expansion into (ω_c, g₁, g₂).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::SPEED_OF_LIGHT;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MembraneGeometry {
    /// Membrane intensity reflectivity R_m in [0, 1].
    pub reflectivity: f64,
    /// Equilibrium position q₀ (m), measured from the cavity centre.
    pub equilibrium_position: f64,
    /// Half cavity length L (m); the mirrors sit at ±L.
    pub half_length: f64,
    pub mode_number: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CouplingExpansion {
    pub omega_c: f64,
    pub g_1: f64,
    pub g_2: f64,
    pub sigma: f64,
}

impl MembraneGeometry {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.reflectivity) {
            return Err(Error::invalid("reflectivity", "must lie in [0, 1]"));
        }
        if !(self.half_length > 0.0) {
            return Err(Error::invalid("half_length", "must be > 0"));
        }
        if self.mode_number == 0 {
            return Err(Error::invalid("mode_number", "must be >= 1"));
        }
        if !self.equilibrium_position.is_finite() {
            return Err(Error::invalid("equilibrium_position", "must be finite"));
        }
        Ok(())
    }

    /// ω_n = nπc/L.
    pub fn omega_n(&self) -> f64 {
        self.mode_number as f64 * PI * SPEED_OF_LIGHT / self.half_length
    }

    /// k_n = ω_n/c.
    pub fn k_n(&self) -> f64 {
        self.mode_number as f64 * PI / self.half_length
    }

    /// Subcavity round-trip time τ = 2L/c.
    pub fn tau(&self) -> f64 {
        2.0 * self.half_length / SPEED_OF_LIGHT
    }

    pub fn wavelength(&self) -> f64 {
        2.0 * self.half_length / self.mode_number as f64
    }

    /// Non-fatal validity warnings. The adiabatic check needs the mechanical
    /// frequency, so it is only run when one is supplied.
    pub fn warnings(&self, omega_m: Option<f64>) -> Vec<String> {
        let mut out = Vec::new();
        let lambda = self.wavelength();
        if self.equilibrium_position.abs() >= lambda / 10.0 {
            out.push(format!(
                "|q0| = {:.3e} m is not small against lambda_n/10 = {:.3e} m",
                self.equilibrium_position.abs(),
                lambda / 10.0
            ));
        }
        if let Some(wm) = omega_m {
            let x = wm * self.tau();
            if x >= 0.01 {
                out.push(format!("omega_m * tau = {x:.3e}; adiabatic following needs << 1"));
            }
        }
        out
    }

    /// Odd-mode cavity frequency ω_{n,o}(q₁) (rad/s).
    pub fn frequency_at(&self, q1: f64) -> f64 {
        self.omega_n() + self.profile_shift(q1)
    }

    /// ω_{n,o}(q₁) − ω_n. Carries all the position dependence without the
    /// large optical offset, so it can be differentiated numerically.
    pub fn profile_shift(&self, q1: f64) -> f64 {
        let sr = self.reflectivity.sqrt();
        let tau = self.tau();
        PI / tau - ((sr * (2.0 * self.k_n() * q1).cos()).asin() + sr.asin()) / tau
    }

    pub fn expand_couplings(&self) -> Result<CouplingExpansion> {
        self.validate()?;
        let k = self.k_n();
        let tau = self.tau();
        let r = self.reflectivity;
        let (s, c) = (2.0 * k * self.equilibrium_position).sin_cos();
        let sigma = (s * s + (1.0 - r) * c * c).sqrt();
        if sigma == 0.0 {
            return Err(Error::DegenerateExpansion);
        }
        let sr = r.sqrt();
        Ok(CouplingExpansion {
            omega_c: self.frequency_at(self.equilibrium_position),
            g_1: 2.0 * k * sr * s / (tau * sigma),
            g_2: 2.0 * k * k * sr * (1.0 - r) * c / (tau * sigma.powi(3)),
            sigma,
        })
    }
}
