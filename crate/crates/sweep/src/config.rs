//! Run configuration files (TOML). Every table rejects unknown keys.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use crate::system::{Params, SystemSource, PARAMETERS};

/// Grids larger than this are refused.
pub const MAX_GRID_POINTS: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Toggle {
    On,
    #[default]
    Off,
}

impl Toggle {
    pub fn is_on(self) -> bool {
        self == Toggle::On
    }

    pub fn name(self) -> &'static str {
        match self {
            Toggle::On => "on",
            Toggle::Off => "off",
        }
    }
}

fn on() -> Toggle {
    Toggle::On
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    #[serde(default)]
    pub scale: Scale,
}

impl Axis {
    pub fn fixed(value: f64) -> Self {
        Self { start: value, stop: value, count: 1, scale: Scale::Linear }
    }

    pub fn linear(start: f64, stop: f64, count: usize) -> Self {
        Self { start, stop, count, scale: Scale::Linear }
    }

    pub fn validate(&self, name: &str) -> Result<()> {
        if self.count < 1 {
            bail!("sweep.{name}: count must be at least 1");
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            bail!("sweep.{name}: start and stop must be finite");
        }
        if self.start > self.stop {
            bail!("sweep.{name}: start {} exceeds stop {}", self.start, self.stop);
        }
        if self.scale == Scale::Log && self.start <= 0.0 {
            bail!("sweep.{name}: log scale needs a positive start");
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                let t = i as f64 / last;
                match self.scale {
                    Scale::Linear => self.start + (self.stop - self.start) * t,
                    Scale::Log => (self.start.ln() + (self.stop.ln() - self.start.ln()) * t).exp(),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub omega0: Option<Axis>,
    pub fsr: Option<Axis>,
    pub zeta: Option<Axis>,
    pub f: Option<Axis>,
    pub delta_omega: Option<Axis>,
    pub delta_kappa: Option<Axis>,
    pub epsilon: Option<Axis>,
}

impl SweepConfig {
    pub fn axis(&self, name: &str) -> Option<&Axis> {
        match name {
            "omega0" => self.omega0.as_ref(),
            "fsr" => self.fsr.as_ref(),
            "zeta" => self.zeta.as_ref(),
            "f" => self.f.as_ref(),
            "delta_omega" => self.delta_omega.as_ref(),
            "delta_kappa" => self.delta_kappa.as_ref(),
            "epsilon" => self.epsilon.as_ref(),
            _ => None,
        }
    }

    pub fn axis_mut(&mut self, name: &str) -> Option<&mut Option<Axis>> {
        match name {
            "omega0" => Some(&mut self.omega0),
            "fsr" => Some(&mut self.fsr),
            "zeta" => Some(&mut self.zeta),
            "f" => Some(&mut self.f),
            "delta_omega" => Some(&mut self.delta_omega),
            "delta_kappa" => Some(&mut self.delta_kappa),
            "epsilon" => Some(&mut self.epsilon),
            _ => None,
        }
    }

    /// Swept parameters in canonical order, which is also the nesting order of the grid
    /// (first name outermost).
    pub fn active(&self) -> Vec<(&'static str, Axis)> {
        PARAMETERS.iter().filter_map(|&n| self.axis(n).map(|a| (n, *a))).collect()
    }

    pub fn size(&self) -> u128 {
        self.active().iter().map(|(_, a)| a.count as u128).product()
    }

    /// All grid points in row-major order.
    pub fn points(&self) -> Vec<Params> {
        let axes: Vec<(&str, Vec<f64>)> = self.active().into_iter().map(|(n, a)| (n, a.values())).collect();
        let mut out = vec![Params::default()];
        for (name, values) in axes {
            out = out
                .into_iter()
                .flat_map(|p| {
                    values.iter().map(move |&v| {
                        let mut q = p;
                        q.set(name, v);
                        q
                    })
                })
                .collect();
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    #[serde(default = "default_formats")]
    pub formats: Vec<Format>,
}

fn default_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_formats() -> Vec<Format> {
    vec![Format::Csv]
}

impl Default for Outputs {
    fn default() -> Self {
        Self { dir: default_dir(), formats: default_formats() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub system: SystemSource,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub outputs: Outputs,
    #[serde(default)]
    pub validation: Toggle,
    #[serde(default = "on")]
    pub thermodynamic_limit: Toggle,
    #[serde(default)]
    pub seed: u64,
}

impl RunConfig {
    pub fn new(system: SystemSource, sweep: SweepConfig) -> Self {
        Self {
            system,
            sweep,
            outputs: Outputs::default(),
            validation: Toggle::Off,
            thermodynamic_limit: Toggle::On,
            seed: 0,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).context("invalid run configuration")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn validate(&self) -> Result<()> {
        self.system.validate()?;
        for (name, axis) in self.sweep.active() {
            axis.validate(name)?;
            if !self.system.accepts(name) {
                bail!("system '{}' has no parameter '{name}'; it takes {:?}", self.system.name(), self.system.parameters());
            }
        }
        if self.sweep.f.is_some() && self.sweep.delta_omega.is_some() {
            bail!("sweep.f and sweep.delta_omega describe the same coupling; give one");
        }
        let size = self.sweep.size();
        if size > MAX_GRID_POINTS {
            bail!("grid has {size} points, more than the limit of {MAX_GRID_POINTS}");
        }
        if self.outputs.formats.is_empty() {
            bail!("outputs.formats must name at least one of csv, json");
        }
        Ok(())
    }

    pub fn wants(&self, f: Format) -> bool {
        self.outputs.formats.contains(&f)
    }
}
