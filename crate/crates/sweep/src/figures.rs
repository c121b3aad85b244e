//! Grid definitions for the published figure datasets.

use std::fmt;
use std::str::FromStr;

use anyhow::{bail, Result};
use polariton_core::presets::{Fig3Variant, Preset};

use crate::config::{Axis, RunConfig, SweepConfig};
use crate::system::SystemSource;

/// Points per axis for the two-body loss maps.
pub const FIG2_POINTS: usize = 201;
/// `(δΩ, δκ)` range for the two-body loss maps, in eV.
pub const FIG2_RANGE: (f64, f64) = (-0.1, 0.1);
pub const FIG3_OMEGA0: (f64, f64, usize) = (0.05, 0.5, 100);
pub const FIG3_FSR: (f64, f64, usize) = (0.4, 2.0, 100);
pub const FIG4_OMEGA0: (f64, f64, usize) = (0.01, 0.5, 50);
/// Mode shifts `ε` for the reduced free-spectral-range curves.
pub const FIG4_EPSILONS: (f64, f64, usize) = (0.0, 0.2, 3);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Fig2a,
    Fig2b,
    Fig3(Fig3Variant),
    Fig4,
}

impl Figure {
    pub const ALL: [Figure; 6] = [
        Figure::Fig2a,
        Figure::Fig2b,
        Figure::Fig3(Fig3Variant::A),
        Figure::Fig3(Fig3Variant::BCaption),
        Figure::Fig3(Fig3Variant::BText),
        Figure::Fig4,
    ];

    pub fn preset(self) -> Preset {
        match self {
            Figure::Fig2a => Preset::Fig2a,
            Figure::Fig2b => Preset::Fig2b,
            Figure::Fig3(v) => Preset::Fig3(v),
            Figure::Fig4 => Preset::Fig4,
        }
    }

    pub fn name(self) -> &'static str {
        self.preset().name()
    }

    pub fn config(self) -> RunConfig {
        let mut sweep = SweepConfig::default();
        match self {
            Figure::Fig2a | Figure::Fig2b => {
                let axis = Axis::linear(FIG2_RANGE.0, FIG2_RANGE.1, FIG2_POINTS);
                sweep.delta_omega = Some(axis);
                sweep.delta_kappa = Some(axis);
            }
            Figure::Fig3(_) => {
                sweep.omega0 = Some(Axis::linear(FIG3_OMEGA0.0, FIG3_OMEGA0.1, FIG3_OMEGA0.2));
                sweep.fsr = Some(Axis::linear(FIG3_FSR.0, FIG3_FSR.1, FIG3_FSR.2));
            }
            Figure::Fig4 => {
                sweep.omega0 = Some(Axis::linear(FIG4_OMEGA0.0, FIG4_OMEGA0.1, FIG4_OMEGA0.2));
                sweep.epsilon = Some(Axis::linear(FIG4_EPSILONS.0, FIG4_EPSILONS.1, FIG4_EPSILONS.2));
            }
        }
        RunConfig::new(SystemSource::preset(self.preset()), sweep)
    }

    pub fn notes(self) -> Vec<String> {
        match self {
            Figure::Fig2a | Figure::Fig2b => vec![format!(
                "grid: delta_omega x delta_kappa over [{}, {}] eV each, {} points per axis (range and resolution are not stated with the figure)",
                FIG2_RANGE.0, FIG2_RANGE.1, FIG2_POINTS
            )],
            Figure::Fig3(v) => {
                let (k, g, z) = v.parameters();
                vec![format!("reading {}: kappa = {k} eV, gamma = {g} eV, zeta = {z} eV", v.name())]
            }
            Figure::Fig4 => vec![
                "epsilon shifts the side modes toward the reference mode: omega_-1 + epsilon, omega_+1 - epsilon".into(),
                "exciton_fraction_LP is null where the lower branch carries too little matter to be labeled".into(),
            ],
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Figure {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let preset: Preset = s.parse()?;
        match Figure::ALL.into_iter().find(|f| f.preset() == preset) {
            Some(f) => Ok(f),
            None => bail!("no figure dataset for '{s}'"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for f in Figure::ALL {
            assert_eq!(f.name().parse::<Figure>().unwrap(), f);
            f.config().validate().unwrap();
        }
        assert_eq!("fig3".parse::<Figure>().unwrap(), Figure::Fig3(Fig3Variant::A));
        assert!("fig5".parse::<Figure>().is_err());
    }

    #[test]
    fn grid_sizes() {
        assert_eq!(Figure::Fig2a.config().sweep.size(), 201 * 201);
        assert_eq!(Figure::Fig3(Fig3Variant::A).config().sweep.size(), 10_000);
        let fig4 = Figure::Fig4.config();
        assert_eq!(fig4.sweep.size(), 150);
        assert_eq!(fig4.sweep.epsilon.unwrap().values(), vec![0.0, 0.1, 0.2]);
    }
}
