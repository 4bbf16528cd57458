//! Physical parameter records, unit conventions and derived scalars.
//!
//! Everything inside [`PhysicalParams`] is SI with frequencies stored as
//! angular frequencies (rad/s). The flat [`Config`] document is the user
//! facing form: frequencies there are ordinary frequencies f = ω/2π in Hz.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::{BOLTZMANN, HBAR, SPEED_OF_LIGHT};
use crate::error::{Error, Result};

/// Below this Q the delta-correlated Brownian noise model is questionable.
pub const MARKOVIAN_Q_THRESHOLD: f64 = 1e3;

/// How the `g1` config value is turned into an angular frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum G1Convention {
    /// `g1` is an ordinary frequency in Hz and is multiplied by 2π.
    #[default]
    HzTimes2pi,
    /// `g1` is already in rad/s.
    RadPerS,
}

impl G1Convention {
    pub fn to_angular(self, g1: f64) -> f64 {
        match self {
            G1Convention::HzTimes2pi => 2.0 * PI * g1,
            G1Convention::RadPerS => g1,
        }
    }

    pub fn from_angular(self, g1: f64) -> f64 {
        match self {
            G1Convention::HzTimes2pi => g1 / (2.0 * PI),
            G1Convention::RadPerS => g1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            G1Convention::HzTimes2pi => "hz_times_2pi",
            G1Convention::RadPerS => "rad_per_s",
        }
    }
}

impl std::str::FromStr for G1Convention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hz_times_2pi" => Ok(G1Convention::HzTimes2pi),
            "rad_per_s" => Ok(G1Convention::RadPerS),
            other => Err(Error::Config(format!("unknown g1 convention `{other}`"))),
        }
    }
}

/// Which detuning the `detuning` field of [`PhysicalParams`] denotes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetuningMode {
    /// Bare detuning Δ_c = ω_c − ω_d; the mean field is solved self-consistently.
    #[default]
    DeltaC,
    /// Effective detuning Δ̄ including the static optomechanical shift.
    DeltaBar,
    /// Feedback-shifted detuning Δ̃ seen by the fluctuations.
    DeltaTilde,
}

impl DetuningMode {
    pub fn as_str(self) -> &'static str {
        match self {
            DetuningMode::DeltaC => "delta_c",
            DetuningMode::DeltaBar => "delta_bar",
            DetuningMode::DeltaTilde => "delta_tilde",
        }
    }
}

impl std::str::FromStr for DetuningMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "delta_c" => Ok(DetuningMode::DeltaC),
            "delta_bar" => Ok(DetuningMode::DeltaBar),
            "delta_tilde" => Ok(DetuningMode::DeltaTilde),
            other => Err(Error::Config(format!("unknown detuning mode `{other}`"))),
        }
    }
}

/// Bare system inputs in SI units, frequencies in rad/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub omega_m: f64,
    pub gamma_m: f64,
    pub kappa_1: f64,
    pub kappa_2: f64,
    pub g_1: f64,
    /// Quadratic coupling, signed.
    pub g_2: f64,
    /// Laser wavelength (m).
    pub drive_wavelength: f64,
    /// Drive power P_d (W).
    pub drive_power: f64,
    /// Bath temperature (K).
    pub temperature: f64,
    /// Laser detuning (rad/s). Interpreted as Δ_c, Δ̄ or Δ̃ according to
    /// the [`DetuningMode`] the caller solves with.
    pub detuning: f64,
    pub r_b: f64,
    pub theta: f64,
}

impl PhysicalParams {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("omega_m", self.omega_m),
            ("gamma_m", self.gamma_m),
            ("kappa_1", self.kappa_1),
            ("kappa_2", self.kappa_2),
            ("g_1", self.g_1),
            ("g_2", self.g_2),
            ("drive_wavelength", self.drive_wavelength),
            ("drive_power", self.drive_power),
            ("temperature", self.temperature),
            ("detuning", self.detuning),
            ("r_b", self.r_b),
            ("theta", self.theta),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(Error::invalid(name, "must be finite"));
            }
        }
        positive("omega_m", self.omega_m)?;
        positive("gamma_m", self.gamma_m)?;
        positive("kappa_1", self.kappa_1)?;
        positive("kappa_2", self.kappa_2)?;
        positive("drive_wavelength", self.drive_wavelength)?;
        if self.drive_power < 0.0 {
            return Err(Error::invalid("drive_power", "must be >= 0"));
        }
        if self.temperature < 0.0 {
            return Err(Error::invalid("temperature", "must be >= 0"));
        }
        if !(0.0..1.0).contains(&self.r_b) {
            return Err(Error::invalid("r_b", "must satisfy 0 <= r_b < 1"));
        }
        Ok(())
    }

    pub fn kappa_tot(&self) -> f64 {
        self.kappa_1 + self.kappa_2
    }

    pub fn drive_amplitude(&self) -> Result<f64> {
        drive_amplitude(self.drive_power, self.kappa_1, self.drive_wavelength)
    }

    pub fn thermal(&self) -> Result<ThermalEnvironment> {
        ThermalEnvironment::new(self.temperature, self.omega_m, self.gamma_m)
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(name, "must be > 0"))
    }
}

/// Drive amplitude |ε_d| = √(2 P_d κ₁ / ħω_d) in s⁻¹, with ω_d = 2πc/λ_d.
pub fn drive_amplitude(drive_power: f64, kappa_1: f64, drive_wavelength: f64) -> Result<f64> {
    positive("kappa_1", kappa_1)?;
    positive("drive_wavelength", drive_wavelength)?;
    if !(drive_power >= 0.0) {
        return Err(Error::invalid("drive_power", "must be >= 0"));
    }
    let omega_d = 2.0 * PI * SPEED_OF_LIGHT / drive_wavelength;
    Ok((2.0 * drive_power * kappa_1 / (HBAR * omega_d)).sqrt())
}

/// Bose occupation [exp(ħω/k_B T) − 1]⁻¹. Zero temperature maps to 0.
pub fn thermal_occupancy(temperature: f64, omega_m: f64) -> f64 {
    if temperature <= 0.0 {
        return 0.0;
    }
    let x = HBAR * omega_m / (BOLTZMANN * temperature);
    // expm1 overflows to +inf for huge x, which correctly yields 0.
    1.0 / x.exp_m1()
}

/// Q_m = ω_m/γ_m.
pub fn mechanical_quality(omega_m: f64, gamma_m: f64) -> Result<f64> {
    positive("omega_m", omega_m)?;
    positive("gamma_m", gamma_m)?;
    Ok(omega_m / gamma_m)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermalEnvironment {
    pub n_m: f64,
    pub q_factor: f64,
    /// False when Q_m < 10³ and the Markovian bath model is questionable.
    pub markovian_ok: bool,
}

impl ThermalEnvironment {
    pub fn new(temperature: f64, omega_m: f64, gamma_m: f64) -> Result<Self> {
        let q_factor = mechanical_quality(omega_m, gamma_m)?;
        Ok(Self {
            n_m: thermal_occupancy(temperature, omega_m),
            q_factor,
            markovian_ok: q_factor >= MARKOVIAN_Q_THRESHOLD,
        })
    }
}

/// Flat configuration document. Frequencies are f = ω/2π in Hz.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub omega_m_hz: f64,
    pub gamma_m_hz: f64,
    pub kappa1_hz: f64,
    pub kappa2_hz: f64,
    pub g1: f64,
    #[serde(default)]
    pub g1_convention: G1Convention,
    pub g2_over_g1: f64,
    pub wavelength_nm: f64,
    pub power_mw: f64,
    pub temperature_mk: f64,
    pub delta_over_omega_m: f64,
    #[serde(default)]
    pub detuning_mode: DetuningMode,
    #[serde(default)]
    pub r_b: f64,
    #[serde(default)]
    pub theta_rad: f64,
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn to_params(&self) -> Result<PhysicalParams> {
        let two_pi = 2.0 * PI;
        let omega_m = two_pi * self.omega_m_hz;
        let g_1 = self.g1_convention.to_angular(self.g1);
        let params = PhysicalParams {
            omega_m,
            gamma_m: two_pi * self.gamma_m_hz,
            kappa_1: two_pi * self.kappa1_hz,
            kappa_2: two_pi * self.kappa2_hz,
            g_1,
            g_2: self.g2_over_g1 * g_1,
            drive_wavelength: self.wavelength_nm * 1e-9,
            drive_power: self.power_mw * 1e-3,
            temperature: self.temperature_mk * 1e-3,
            detuning: self.delta_over_omega_m * omega_m,
            r_b: self.r_b,
            theta: self.theta_rad,
        };
        params.validate()?;
        Ok(params)
    }

    /// Inverse of [`Config::to_params`]. `g2_over_g1` is undefined when
    /// g₁ = 0 and is emitted as 0 in that case.
    pub fn from_params(
        p: &PhysicalParams,
        g1_convention: G1Convention,
        detuning_mode: DetuningMode,
    ) -> Self {
        let two_pi = 2.0 * PI;
        Self {
            omega_m_hz: p.omega_m / two_pi,
            gamma_m_hz: p.gamma_m / two_pi,
            kappa1_hz: p.kappa_1 / two_pi,
            kappa2_hz: p.kappa_2 / two_pi,
            g1: g1_convention.from_angular(p.g_1),
            g1_convention,
            g2_over_g1: if p.g_1 != 0.0 { p.g_2 / p.g_1 } else { 0.0 },
            wavelength_nm: p.drive_wavelength * 1e9,
            power_mw: p.drive_power * 1e3,
            temperature_mk: p.temperature * 1e3,
            delta_over_omega_m: p.detuning / p.omega_m,
            detuning_mode,
            r_b: p.r_b,
            theta_rad: p.theta,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn zero_power_gives_zero_drive() {
        assert_eq!(drive_amplitude(0.0, 1e7, 810e-9).unwrap(), 0.0);
    }

    #[test]
    fn quadrupled_power_doubles_drive() {
        let a = drive_amplitude(1e-3, 1e7, 810e-9).unwrap();
        let b = drive_amplitude(4e-3, 1e7, 810e-9).unwrap();
        assert!(rel(b, 2.0 * a) < 1e-14);
    }

    #[test]
    fn drive_amplitude_matches_high_precision_value() {
        // 40-digit evaluation with CODATA 2018 constants.
        let eps = drive_amplitude(5e-3, 2.0 * PI * 1.5e6, 810e-9).unwrap();
        assert!(rel(eps, 619_925_794_034.686_26) < 1e-12, "{eps}");
    }

    #[test]
    fn drive_amplitude_rejects_bad_inputs() {
        assert!(drive_amplitude(1e-3, 0.0, 810e-9).is_err());
        assert!(drive_amplitude(1e-3, 1e7, -1.0).is_err());
        assert!(drive_amplitude(-1e-3, 1e7, 810e-9).is_err());
    }

    #[test]
    fn thermal_occupancy_reference_values() {
        let wm = 2.0 * PI * 10e6;
        assert_eq!(thermal_occupancy(0.0, wm), 0.0);
        assert!(rel(thermal_occupancy(10e-3, wm), 20.340_618_339_036_45) < 1e-12);
        assert!(rel(thermal_occupancy(1e-3, wm), 1.623_502_914_385_847) < 1e-12);
        // Deep quantum regime must underflow to zero, not NaN.
        assert_eq!(thermal_occupancy(1e-12, wm), 0.0);
    }

    #[test]
    fn thermal_occupancy_monotone_on_grid() {
        let temps: Vec<f64> = (1..40).map(|i| 1e-4 * 1.3f64.powi(i)).collect();
        let freqs: Vec<f64> = (1..40).map(|i| 2.0 * PI * 1e5 * 1.3f64.powi(i)).collect();
        for &w in &freqs {
            for t in temps.windows(2) {
                assert!(thermal_occupancy(t[1], w) > thermal_occupancy(t[0], w) || thermal_occupancy(t[1], w) == 0.0);
            }
        }
        for &t in &temps {
            for w in freqs.windows(2) {
                let (lo, hi) = (thermal_occupancy(t, w[0]), thermal_occupancy(t, w[1]));
                assert!(hi < lo || (hi == 0.0 && lo == 0.0));
            }
        }
    }

    #[test]
    fn quality_factor_and_markovian_flag() {
        let q = mechanical_quality(2.0 * PI * 10e6, 2.0 * PI * 100.0).unwrap();
        assert!(rel(q, 1e5) < 1e-14);
        let env = ThermalEnvironment::new(0.0, 3.0, 3.0).unwrap();
        assert_eq!(env.q_factor, 1.0);
        assert!(!env.markovian_ok);
        let env = ThermalEnvironment::new(0.0, 1.0, 1e-300).unwrap();
        assert!(env.q_factor.is_finite() && env.markovian_ok);
        assert!(mechanical_quality(0.0, 1.0).is_err());
        assert!(mechanical_quality(1.0, -1.0).is_err());
    }

    fn sample_config() -> Config {
        Config {
            omega_m_hz: 10e6,
            gamma_m_hz: 100.0,
            kappa1_hz: 1.5e6,
            kappa2_hz: 1.5e6,
            g1: 1351.38,
            g1_convention: G1Convention::HzTimes2pi,
            g2_over_g1: 3e-5,
            wavelength_nm: 810.0,
            power_mw: 5.0,
            temperature_mk: 10.0,
            delta_over_omega_m: 0.3,
            detuning_mode: DetuningMode::DeltaC,
            r_b: 0.2,
            theta_rad: 1.5 * PI,
        }
    }

    #[test]
    fn config_rejects_unknown_key_by_name() {
        let mut v = serde_json::to_value(sample_config()).unwrap();
        v["kappa3_hz"] = serde_json::json!(1.0);
        let err = Config::from_json(&v.to_string()).unwrap_err();
        assert!(err.to_string().contains("kappa3_hz"), "{err}");
    }

    #[test]
    fn config_converts_to_angular_units() {
        let p = sample_config().to_params().unwrap();
        assert!(rel(p.omega_m, 2.0 * PI * 10e6) < 1e-15);
        assert!(rel(p.g_1, 2.0 * PI * 1351.38) < 1e-15);
        assert!(rel(p.g_2, 3e-5 * p.g_1) < 1e-15);
        let mut c = sample_config();
        c.g1_convention = G1Convention::RadPerS;
        assert_eq!(c.to_params().unwrap().g_1, 1351.38);
    }

    #[test]
    fn config_rejects_unit_reflectivity() {
        let mut c = sample_config();
        c.r_b = 1.0;
        assert!(matches!(c.to_params(), Err(Error::InvalidParameter { name: "r_b", .. })));
    }

    fn sig12(a: f64, b: f64) -> bool {
        a == b || ((a - b) / b).abs() < 5e-12
    }

    #[test]
    fn unit_round_trip_to_twelve_digits() {
        for conv in [G1Convention::HzTimes2pi, G1Convention::RadPerS] {
            let mut c = sample_config();
            c.g1_convention = conv;
            let back = Config::from_params(&c.to_params().unwrap(), conv, c.detuning_mode);
            let a = serde_json::to_value(&c).unwrap();
            let b = serde_json::to_value(&back).unwrap();
            for (k, va) in a.as_object().unwrap() {
                let vb = &b[k];
                match (va.as_f64(), vb.as_f64()) {
                    (Some(x), Some(y)) => assert!(sig12(y, x), "{k}: {x} vs {y}"),
                    _ => assert_eq!(va, vb, "{k}"),
                }
            }
        }
    }

    #[test]
    fn drive_power_squared_is_linear() {
        for &p in &[1e-6, 1e-3, 0.37, 12.0] {
            let a = drive_amplitude(p, 9.4e6, 810e-9).unwrap();
            let b = drive_amplitude(2.0 * p, 9.4e6, 810e-9).unwrap();
            assert!(rel(b * b, 2.0 * a * a) < 1e-12);
        }
    }
}
