//! Named parameter sets for the published figure datasets.
//!
//! Every preset is a homogeneous ensemble with collective couplings (`N = 1`; only the
//! products `Ω_q = √N g_q` enter the Dicke-reduced spectra).

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{CavityModeSet, CouplingMap, SystemSpec};
use crate::observables::mode_shift_scan;

/// Reference-mode coupling for the two-body loss maps.
pub const FIG2_OMEGA0: f64 = 0.35;
/// Free spectral range for the two-body loss maps.
pub const FIG2_FSR: f64 = 1.0;
/// Absolute reference bandwidth and emitter width for the two-body loss maps. Not stated
/// with the maps; `NJ′` does not depend on it.
pub const FIG2_KAPPA0: f64 = 0.1;
/// Reference-mode and emitter energy for the two-body loss maps. Only differences enter.
pub const REFERENCE_ENERGY: f64 = 2.0;
/// Resonance energy for the splitting/bandwidth maps; keeps `ω₋₁ > 0` out to `Δ = 2` eV.
pub const FIG3_REFERENCE_ENERGY: f64 = 3.0;

pub const FIG4_OMEGA_E: f64 = 2.15;
pub const FIG4_GAMMA: f64 = 0.37;
pub const FIG4_MODES: [(i32, f64, f64); 3] = [(-1, 1.45, 0.038), (0, 2.14, 0.09), (1, 2.76, 0.09)];
/// Mode shift used for the reduced-FSR curve (`𝓕 = (0.62 − 0.2)/0.09 ≈ 4.7`).
pub const FIG4_EPSILON: f64 = 0.2;

/// Two-mode cavity (`q = 0` lowest order, `Ω₋₁ = 0`): `Ω₊₁ = Ω₀ + δΩ`, `κ_q = κ₀ + qδκ`.
pub fn fig2a(delta_omega: f64, delta_kappa: f64) -> Result<SystemSpec> {
    let modes = CavityModeSet::three_mode(REFERENCE_ENERGY, FIG2_FSR, FIG2_KAPPA0, delta_kappa)?;
    let couplings = CouplingMap::collective([(-1, 0.0), (0, FIG2_OMEGA0), (1, FIG2_OMEGA0 + delta_omega)]);
    SystemSpec::dicke(modes, 1, REFERENCE_ENERGY, FIG2_KAPPA0, couplings)
}

/// Three-mode cavity: `Ω_{±1} = Ω₀ ± δΩ` (so `f = δΩ/Ω₀`), `κ_q = κ₀ + qδκ`.
pub fn fig2b(delta_omega: f64, delta_kappa: f64) -> Result<SystemSpec> {
    let modes = CavityModeSet::three_mode(REFERENCE_ENERGY, FIG2_FSR, FIG2_KAPPA0, delta_kappa)?;
    let couplings = CouplingMap::parametric(FIG2_OMEGA0, delta_omega / FIG2_OMEGA0)?;
    SystemSpec::dicke(modes, 1, REFERENCE_ENERGY, FIG2_KAPPA0, couplings)
}

/// The three readings of the splitting/bandwidth figure parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Fig3Variant {
    /// `κ = γ = 0.15`, `ζ = −0.1`.
    A,
    /// `κ = γ = 0.1`, `ζ = −0.1`.
    BCaption,
    /// `κ = γ = 0.15`, `ζ = −0.05`.
    BText,
}

impl Fig3Variant {
    pub const ALL: [Fig3Variant; 3] = [Fig3Variant::A, Fig3Variant::BCaption, Fig3Variant::BText];

    /// `(κ₀, γ, ζ)` in eV.
    pub fn parameters(self) -> (f64, f64, f64) {
        match self {
            Fig3Variant::A => (0.15, 0.15, -0.1),
            Fig3Variant::BCaption => (0.1, 0.1, -0.1),
            Fig3Variant::BText => (0.15, 0.15, -0.05),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Fig3Variant::A => "fig3-a",
            Fig3Variant::BCaption => "fig3-b-caption",
            Fig3Variant::BText => "fig3-b-text",
        }
    }
}

/// Resonant three-mode cavity with `Ω_q = Ω₀`, `Δ_{±1} = ±Δ`, `κ_q = κ₀ + qζ`.
pub fn fig3(variant: Fig3Variant, omega0: f64, fsr: f64) -> Result<SystemSpec> {
    let (kappa, gamma, zeta) = variant.parameters();
    fig3_with(omega0, fsr, kappa, gamma, zeta)
}

pub fn fig3_with(omega0: f64, fsr: f64, kappa: f64, gamma: f64, zeta: f64) -> Result<SystemSpec> {
    fig3_at(FIG3_REFERENCE_ENERGY, omega0, fsr, kappa, gamma, zeta)
}

/// [`fig3_with`] around an arbitrary resonance energy, for spacings wider than `ω₀`.
pub fn fig3_at(reference: f64, omega0: f64, fsr: f64, kappa: f64, gamma: f64, zeta: f64) -> Result<SystemSpec> {
    let modes = CavityModeSet::three_mode(reference, fsr, kappa, zeta)?;
    let couplings = CouplingMap::collective([(-1, omega0), (0, omega0), (1, omega0)]);
    SystemSpec::dicke(modes, 1, reference, gamma, couplings)
}

/// Realistic three-mode cavity with `Ω₀ = Ω_{±1}` free.
pub fn fig4(omega0: f64) -> Result<SystemSpec> {
    let modes = CavityModeSet::new(
        FIG4_MODES
            .iter()
            .map(|&(q, omega, kappa)| crate::model::CavityMode { q, omega, kappa })
            .collect(),
    )?;
    let couplings = CouplingMap::collective([(-1, omega0), (0, omega0), (1, omega0)]);
    SystemSpec::dicke(modes, 1, FIG4_OMEGA_E, FIG4_GAMMA, couplings)
}

/// [`fig4`] with `ω_{±1} → ω_{±1} ∓ ε`.
pub fn fig4_shifted(omega0: f64, epsilon: f64) -> Result<SystemSpec> {
    mode_shift_scan(&fig4(omega0)?, epsilon)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Preset {
    Fig2a,
    Fig2b,
    Fig3(Fig3Variant),
    Fig4,
}

impl Preset {
    pub const ALL: [Preset; 6] = [
        Preset::Fig2a,
        Preset::Fig2b,
        Preset::Fig3(Fig3Variant::A),
        Preset::Fig3(Fig3Variant::BCaption),
        Preset::Fig3(Fig3Variant::BText),
        Preset::Fig4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig2a => "fig2a",
            Preset::Fig2b => "fig2b",
            Preset::Fig3(v) => v.name(),
            Preset::Fig4 => "fig4",
        }
    }

    /// The preset at its headline operating point.
    pub fn default_spec(self) -> Result<SystemSpec> {
        match self {
            Preset::Fig2a => fig2a(0.0, 0.0),
            Preset::Fig2b => fig2b(0.0, 0.0),
            Preset::Fig3(v) => fig3(v, 0.35, 1.0),
            Preset::Fig4 => fig4(0.35),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig3" => Ok(Preset::Fig3(Fig3Variant::A)),
            _ => Preset::ALL
                .into_iter()
                .find(|p| p.name() == s)
                .ok_or_else(|| Error::Config(format!("unknown preset '{s}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fig4_values_are_verbatim() {
        let spec = fig4(0.35).unwrap();
        let m = spec.modes();
        assert_eq!(m.get(-1).unwrap().omega, 1.45);
        assert_eq!(m.get(0).unwrap().omega, 2.14);
        assert_eq!(m.get(1).unwrap().omega, 2.76);
        assert_eq!(m.get(-1).unwrap().kappa, 0.038);
        assert_eq!(m.get(0).unwrap().kappa, 0.09);
        assert_eq!(m.get(1).unwrap().kappa, 0.09);
        assert_eq!(spec.emitters().omega(0), 2.15);
        assert_eq!(spec.emitters().gamma(0), 0.37);
        for k in 0..3 {
            assert_eq!(spec.collective_coupling(k), 0.35);
        }
    }

    #[test]
    fn fig2_values() {
        let a = fig2a(0.05, -0.02).unwrap();
        assert_eq!(a.collective_coupling(0), 0.0);
        assert_eq!(a.collective_coupling(1), 0.35);
        assert!((a.collective_coupling(2) - 0.40).abs() < 1e-15);
        assert!((a.modes().bandwidth_mismatch(2) + 0.02).abs() < 1e-15);
        assert_eq!(a.modes().fsr(), Some(1.0));
        let b = fig2b(0.05, 0.1).unwrap();
        assert!((b.collective_coupling(0) - 0.30).abs() < 1e-15);
        assert!((b.collective_coupling(2) - 0.40).abs() < 1e-15);
    }

    #[test]
    fn fig3_variants() {
        assert_eq!(Fig3Variant::A.parameters(), (0.15, 0.15, -0.1));
        assert_eq!(Fig3Variant::BCaption.parameters(), (0.1, 0.1, -0.1));
        assert_eq!(Fig3Variant::BText.parameters(), (0.15, 0.15, -0.05));
        let s = fig3(Fig3Variant::A, 0.35, 1.0).unwrap();
        assert!((s.modes().get(1).unwrap().kappa - 0.05).abs() < 1e-15);
        assert!((s.modes().get(-1).unwrap().kappa - 0.25).abs() < 1e-15);
        assert_eq!(s.detuning(0), 0.0);
    }

    #[test]
    fn names_round_trip() {
        for p in Preset::ALL {
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
            p.default_spec().unwrap();
        }
        assert_eq!("fig3".parse::<Preset>().unwrap(), Preset::Fig3(Fig3Variant::A));
        assert!("fig5".parse::<Preset>().is_err());
    }

    #[test]
    fn shifted_fig4_finesse() {
        let s = fig4_shifted(0.35, FIG4_EPSILON).unwrap();
        let f = s.modes().finesse().unwrap();
        assert!((4.0..=5.0).contains(&f), "{f}");
    }
}
