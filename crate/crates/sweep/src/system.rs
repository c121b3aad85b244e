//! Named presets and literal systems, and how sweep parameters act on them.

use anyhow::{anyhow, bail, Result};
use polariton_core::observables::mode_shift_scan;
use polariton_core::presets::{self, Fig3Variant, Preset};
use polariton_core::{CavityMode, CavityModeSet, CouplingMap, SystemSpec};
use serde::{Deserialize, Serialize};

/// Sweepable parameters in canonical (grid nesting) order.
pub const PARAMETERS: [&str; 7] = ["omega0", "fsr", "zeta", "f", "delta_omega", "delta_kappa", "epsilon"];

/// One grid point. Unset entries fall back to the system's defaults.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Params {
    pub omega0: Option<f64>,
    pub fsr: Option<f64>,
    pub zeta: Option<f64>,
    pub f: Option<f64>,
    pub delta_omega: Option<f64>,
    pub delta_kappa: Option<f64>,
    pub epsilon: Option<f64>,
}

impl Params {
    pub fn get(&self, name: &str) -> Option<f64> {
        match name {
            "omega0" => self.omega0,
            "fsr" => self.fsr,
            "zeta" => self.zeta,
            "f" => self.f,
            "delta_omega" => self.delta_omega,
            "delta_kappa" => self.delta_kappa,
            "epsilon" => self.epsilon,
            _ => None,
        }
    }

    pub fn set(&mut self, name: &str, value: f64) {
        let slot = match name {
            "omega0" => &mut self.omega0,
            "fsr" => &mut self.fsr,
            "zeta" => &mut self.zeta,
            "f" => &mut self.f,
            "delta_omega" => &mut self.delta_omega,
            "delta_kappa" => &mut self.delta_kappa,
            "epsilon" => &mut self.epsilon,
            _ => panic!("unknown parameter {name}"),
        };
        *slot = Some(value);
    }
}

/// A homogeneous ensemble written out mode by mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiteralSystem {
    #[serde(default = "one")]
    pub n: usize,
    pub omega_e: f64,
    pub gamma: f64,
    pub modes: Vec<LiteralMode>,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiteralMode {
    pub q: i32,
    pub omega: f64,
    pub kappa: f64,
    /// Collective coupling `Ω_q`.
    pub coupling: f64,
}

impl LiteralSystem {
    pub fn to_spec(&self) -> polariton_core::Result<SystemSpec> {
        let modes = CavityModeSet::new(self.modes.iter().map(|m| CavityMode { q: m.q, omega: m.omega, kappa: m.kappa }).collect())?;
        let couplings = CouplingMap::collective(self.modes.iter().map(|m| (m.q, m.coupling)));
        SystemSpec::dicke(modes, self.n, self.omega_e, self.gamma, couplings)
    }
}

/// `[system]` table: exactly one of `preset` or `literal`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSource {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub literal: Option<LiteralSystem>,
}

/// Which closed forms apply to a system family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Fig2a,
    Fig2b,
    Fig3(Fig3Variant),
    Fig4,
    Literal,
}

impl SystemSource {
    pub fn preset(preset: Preset) -> Self {
        Self { preset: Some(preset.name().to_string()), literal: None }
    }

    pub fn literal(system: LiteralSystem) -> Self {
        Self { preset: None, literal: Some(system) }
    }

    pub fn family(&self) -> Result<Family> {
        match (&self.preset, &self.literal) {
            (Some(name), None) => Ok(match name.parse::<Preset>()? {
                Preset::Fig2a => Family::Fig2a,
                Preset::Fig2b => Family::Fig2b,
                Preset::Fig3(v) => Family::Fig3(v),
                Preset::Fig4 => Family::Fig4,
            }),
            (None, Some(_)) => Ok(Family::Literal),
            _ => bail!("[system] needs exactly one of 'preset' or 'literal'"),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Family::Literal = self.family()? {
            self.literal.as_ref().expect("literal").to_spec()?;
        }
        Ok(())
    }

    pub fn name(&self) -> String {
        match (&self.preset, &self.literal) {
            (Some(name), _) => name.clone(),
            _ => "literal".into(),
        }
    }

    pub fn parameters(&self) -> &'static [&'static str] {
        match self.family() {
            Ok(Family::Fig2a) => &["delta_omega", "delta_kappa"],
            Ok(Family::Fig2b) => &["f", "delta_omega", "delta_kappa"],
            Ok(Family::Fig3(_)) => &["omega0", "fsr", "zeta"],
            Ok(Family::Fig4) | Ok(Family::Literal) => &["omega0", "epsilon"],
            Err(_) => &[],
        }
    }

    pub fn accepts(&self, name: &str) -> bool {
        self.parameters().contains(&name)
    }

    /// Builds the spec for one grid point and returns it with every applicable parameter
    /// resolved to the value actually used.
    pub fn build(&self, p: &Params) -> Result<(SystemSpec, Params)> {
        for name in PARAMETERS {
            if p.get(name).is_some() && !self.accepts(name) {
                bail!("system '{}' has no parameter '{name}'", self.name());
            }
        }
        let mut r = Params::default();
        let spec = match self.family()? {
            Family::Fig2a => {
                let (dw, dk) = (p.delta_omega.unwrap_or(0.0), p.delta_kappa.unwrap_or(0.0));
                r.delta_omega = Some(dw);
                r.delta_kappa = Some(dk);
                presets::fig2a(dw, dk)?
            }
            Family::Fig2b => {
                let dw = match (p.f, p.delta_omega) {
                    (Some(_), Some(_)) => bail!("give either f or delta_omega"),
                    (Some(f), None) => f * presets::FIG2_OMEGA0,
                    (None, dw) => dw.unwrap_or(0.0),
                };
                let dk = p.delta_kappa.unwrap_or(0.0);
                r.delta_omega = Some(dw);
                r.f = Some(dw / presets::FIG2_OMEGA0);
                r.delta_kappa = Some(dk);
                presets::fig2b(dw, dk)?
            }
            Family::Fig3(v) => {
                let (kappa, gamma, zeta0) = v.parameters();
                let (o, d, z) = (p.omega0.unwrap_or(0.35), p.fsr.unwrap_or(1.0), p.zeta.unwrap_or(zeta0));
                r.omega0 = Some(o);
                r.fsr = Some(d);
                r.zeta = Some(z);
                presets::fig3_with(o, d, kappa, gamma, z)?
            }
            Family::Fig4 => {
                let (o, e) = (p.omega0.unwrap_or(0.35), p.epsilon.unwrap_or(0.0));
                r.omega0 = Some(o);
                r.epsilon = Some(e);
                presets::fig4_shifted(o, e)?
            }
            Family::Literal => {
                let base = self.literal.as_ref().expect("literal").to_spec()?;
                let reference = base.collective_coupling(base.modes().reference_index());
                let spec = match p.omega0 {
                    Some(o) if reference > 0.0 => {
                        let scale = o / reference;
                        let map = (0..base.modes().len())
                            .map(|k| (base.modes().modes()[k].q, base.collective_coupling(k) * scale));
                        base.with_couplings(CouplingMap::collective(map))?
                    }
                    Some(_) => return Err(anyhow!("cannot rescale couplings: reference coupling is zero")),
                    None => base,
                };
                r.omega0 = Some(spec.collective_coupling(spec.modes().reference_index()));
                let e = p.epsilon.unwrap_or(0.0);
                r.epsilon = Some(e);
                if e != 0.0 {
                    mode_shift_scan(&spec, e)?
                } else {
                    spec
                }
            }
        };
        Ok((spec, r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit() -> LiteralSystem {
        LiteralSystem {
            n: 4,
            omega_e: 2.0,
            gamma: 0.1,
            modes: vec![
                LiteralMode { q: -1, omega: 1.2, kappa: 0.1, coupling: 0.2 },
                LiteralMode { q: 0, omega: 2.0, kappa: 0.1, coupling: 0.4 },
                LiteralMode { q: 1, omega: 2.8, kappa: 0.1, coupling: 0.2 },
            ],
        }
    }

    #[test]
    fn presets_resolve_defaults() {
        let src = SystemSource::preset(Preset::Fig4);
        let (spec, r) = src.build(&Params::default()).unwrap();
        assert_eq!(spec, presets::fig4(0.35).unwrap());
        assert_eq!((r.omega0, r.epsilon, r.fsr), (Some(0.35), Some(0.0), None));
        let src = SystemSource::preset(Preset::Fig2b);
        let (spec, r) = src.build(&Params { f: Some(0.2), ..Default::default() }).unwrap();
        assert!((r.delta_omega.unwrap() - 0.07).abs() < 1e-15);
        assert!((spec.collective_coupling(2) - 0.42).abs() < 1e-15);
    }

    #[test]
    fn foreign_parameters_are_rejected() {
        let src = SystemSource::preset(Preset::Fig2a);
        assert!(src.build(&Params { omega0: Some(0.3), ..Default::default() }).is_err());
        assert!(!src.accepts("fsr"));
    }

    #[test]
    fn literal_rescale_and_shift() {
        let src = SystemSource::literal(lit());
        let (spec, r) = src.build(&Params { omega0: Some(0.2), epsilon: Some(0.1), ..Default::default() }).unwrap();
        assert_eq!(r.omega0, Some(0.2));
        assert!((spec.collective_coupling(0) - 0.1).abs() < 1e-15);
        assert!((spec.modes().get(-1).unwrap().omega - 1.3).abs() < 1e-15);
        assert_eq!(spec.n_emitters(), 4);
    }

    #[test]
    fn exactly_one_source() {
        let both = SystemSource { preset: Some("fig4".into()), literal: Some(lit()) };
        assert!(both.validate().is_err());
        assert!(SystemSource { preset: None, literal: None }.validate().is_err());
        assert!(SystemSource::preset(Preset::Fig4).validate().is_ok());
    }
}
