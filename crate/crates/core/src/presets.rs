//! Ready-made sweeps reproducing the reference parameter studies.
//!
//! The coupling g₁ = 1351.38 is taken as rad/s and the detuning axis as the
//! bare detuning Δ_c by default; see the README for the calibration that
//! fixed this choice. Both can be overridden with [`preset_with`].

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::params::{DetuningMode, G1Convention, PhysicalParams};
use crate::steady_state::MeanFieldOptions;
use crate::sweep::{Axis, OutputSet, SweepParameter, SweepSpec};

/// Reference linear coupling, unit ambiguous (Hz or rad/s).
pub const REFERENCE_G1: f64 = 1351.38;
/// Convention selected by the calibration run.
pub const CALIBRATED_G1_CONVENTION: G1Convention = G1Convention::RadPerS;
pub const CALIBRATED_DETUNING_MODE: DetuningMode = DetuningMode::DeltaC;

/// Points per 1D axis and per side of a 2D grid.
pub const LINE_POINTS: usize = 401;
pub const SURFACE_POINTS: usize = 101;
/// Largest reflection coefficient on r_B axes (r_B = 1 is excluded).
pub const R_B_MAX: f64 = 0.99;
/// Detuning span (units of ω_m) of all Δ axes.
pub const DELTA_SPAN: (f64, f64) = (0.0, 1.5);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PresetId {
    Fig2a,
    Fig2b,
    Fig3a,
    Fig3b,
    Fig3c,
    Fig3d,
    Fig3e,
    Fig3f,
    Fig4a,
    Fig4b,
    Fig4c,
    Fig4d,
    Fig4e,
    Fig4f,
}

impl PresetId {
    pub const ALL: [PresetId; 14] = [
        PresetId::Fig2a,
        PresetId::Fig2b,
        PresetId::Fig3a,
        PresetId::Fig3b,
        PresetId::Fig3c,
        PresetId::Fig3d,
        PresetId::Fig3e,
        PresetId::Fig3f,
        PresetId::Fig4a,
        PresetId::Fig4b,
        PresetId::Fig4c,
        PresetId::Fig4d,
        PresetId::Fig4e,
        PresetId::Fig4f,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PresetId::Fig2a => "fig2a",
            PresetId::Fig2b => "fig2b",
            PresetId::Fig3a => "fig3a",
            PresetId::Fig3b => "fig3b",
            PresetId::Fig3c => "fig3c",
            PresetId::Fig3d => "fig3d",
            PresetId::Fig3e => "fig3e",
            PresetId::Fig3f => "fig3f",
            PresetId::Fig4a => "fig4a",
            PresetId::Fig4b => "fig4b",
            PresetId::Fig4c => "fig4c",
            PresetId::Fig4d => "fig4d",
            PresetId::Fig4e => "fig4e",
            PresetId::Fig4f => "fig4f",
        }
    }

    /// Caveats about choices the reference studies leave open.
    pub fn notes(self) -> Option<&'static str> {
        match self {
            PresetId::Fig2a => Some(
                "g2/g1 span, drive and detuning are not fixed by the reference study; \
                 defaults are g2/g1 in [-1e-3, 1e-3], entanglement-study base parameters, delta = 0.25",
            ),
            _ => None,
        }
    }
}

impl std::str::FromStr for PresetId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PresetId::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown preset `{s}`")))
    }
}

/// Parameters of the entanglement study.
pub fn entanglement_base(g1_convention: G1Convention) -> PhysicalParams {
    let two_pi = 2.0 * PI;
    let omega_m = two_pi * 10e6;
    PhysicalParams {
        omega_m,
        gamma_m: two_pi * 100.0,
        kappa_1: two_pi * 1.5e6,
        kappa_2: two_pi * 1.5e6,
        g_1: g1_convention.to_angular(REFERENCE_G1),
        g_2: 0.0,
        drive_wavelength: 810e-9,
        drive_power: 5e-3,
        temperature: 10e-3,
        detuning: 0.0,
        r_b: 0.0,
        theta: 0.0,
    }
}

/// Parameters of the squeezing study: asymmetric mirrors and a colder bath.
pub fn squeezing_base(g1_convention: G1Convention) -> PhysicalParams {
    let two_pi = 2.0 * PI;
    PhysicalParams {
        kappa_1: two_pi * 2.25e6,
        kappa_2: two_pi * 0.75e6,
        temperature: 1e-3,
        ..entanglement_base(g1_convention)
    }
}

pub fn preset(id: PresetId) -> SweepSpec {
    preset_with(id, CALIBRATED_G1_CONVENTION, CALIBRATED_DETUNING_MODE)
}

pub fn preset_with(id: PresetId, g1_convention: G1Convention, detuning_mode: DetuningMode) -> SweepSpec {
    use SweepParameter::*;
    let delta = |n| Axis::new(Delta, DELTA_SPAN.0, DELTA_SPAN.1, n);
    let theta = Axis::new(Theta, 0.0, 2.0 * PI, SURFACE_POINTS);
    let r_b = Axis::new(RB, 0.0, R_B_MAX, SURFACE_POINTS);
    let fixed = |mut p: PhysicalParams, settings: &[(SweepParameter, f64)]| {
        for &(k, v) in settings {
            k.apply(&mut p, v);
        }
        p
    };
    let e = entanglement_base(g1_convention);
    let s = squeezing_base(g1_convention);

    let (base, axis1, axis2, outputs) = match id {
        PresetId::Fig2a => (
            fixed(e, &[(Delta, 0.25)]),
            Axis::new(G2OverG1, -1e-3, 1e-3, LINE_POINTS),
            None,
            OutputSet::MeanField,
        ),
        PresetId::Fig2b => (e, r_b, Some(theta), OutputSet::Eta),
        PresetId::Fig3a => (
            e,
            Axis::new(G2OverG1, 0.0, 6e-5, 4),
            Some(delta(LINE_POINTS)),
            OutputSet::Full,
        ),
        PresetId::Fig3b => (
            fixed(e, &[(RB, 0.2), (Theta, 1.5 * PI)]),
            Axis::new(G2OverG1, 0.0, 6e-5, 4),
            Some(delta(LINE_POINTS)),
            OutputSet::Full,
        ),
        PresetId::Fig3c => (
            fixed(e, &[(RB, 0.5), (G2OverG1, 3e-5)]),
            delta(SURFACE_POINTS),
            Some(theta),
            OutputSet::Full,
        ),
        PresetId::Fig3d => (
            fixed(e, &[(Delta, 0.25), (Theta, 1.5 * PI)]),
            Axis::new(G2OverG1, -1e-4, 1e-4, SURFACE_POINTS),
            Some(r_b),
            OutputSet::Full,
        ),
        PresetId::Fig3e => (
            fixed(e, &[(Delta, 0.25), (G2OverG1, 1.5e-5)]),
            r_b,
            Some(theta),
            OutputSet::Full,
        ),
        PresetId::Fig3f => (
            fixed(e, &[(Delta, 0.25), (RB, 0.7)]),
            Axis::new(G2OverG1, -1e-4, 1e-4, SURFACE_POINTS),
            Some(theta),
            OutputSet::Full,
        ),
        PresetId::Fig4a => (
            s,
            Axis::new(G2OverG1, 0.0, -1e-3, 2),
            Some(delta(LINE_POINTS)),
            OutputSet::Full,
        ),
        PresetId::Fig4b => (
            fixed(s, &[(RB, 0.8), (Theta, 0.0)]),
            Axis::new(G2OverG1, 0.0, -1e-3, 2),
            Some(delta(LINE_POINTS)),
            OutputSet::Full,
        ),
        PresetId::Fig4c => (
            fixed(s, &[(Delta, 0.1), (Theta, 0.0)]),
            Axis::new(RB, 0.0, 0.8, 2),
            Some(Axis::new(G2OverG1, -2e-2, 2e-2, LINE_POINTS)),
            OutputSet::Full,
        ),
        PresetId::Fig4d => (
            fixed(s, &[(Delta, 0.1), (G2OverG1, -1e-3)]),
            r_b,
            Some(theta),
            OutputSet::Full,
        ),
        PresetId::Fig4e => (
            fixed(s, &[(RB, 0.8), (G2OverG1, -1e-3)]),
            delta(SURFACE_POINTS),
            Some(theta),
            OutputSet::Full,
        ),
        PresetId::Fig4f => (
            fixed(s, &[(RB, 0.8), (Theta, 0.0)]),
            delta(SURFACE_POINTS),
            Some(Axis::new(G2OverG1, -2e-2, 0.0, SURFACE_POINTS)),
            OutputSet::Full,
        ),
    };
    SweepSpec {
        base,
        axis1,
        axis2,
        options: MeanFieldOptions {
            detuning_mode,
            ..Default::default()
        },
        outputs,
    }
}
