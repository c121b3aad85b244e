//! Splittings, widths and wavefunction content derived from the exact spectra.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{build_dicke_matrix, build_full_matrix, CavityModeSet, CouplingMap, SystemSpec};
use crate::spectra::{classify_branches, eig_arrowhead, eig_dense, to_physical, BranchLabel, PolaritonBranch, Route};

/// Exact, labeled branches. Dicke specs go through the arrowhead path, others through the
/// dense `(M+N)` build.
pub fn solve_branches(spec: &SystemSpec) -> Result<(Vec<PolaritonBranch>, Route)> {
    let (pairs, basis, frame, route) = match build_dicke_matrix(spec) {
        Ok(m) => {
            let out = eig_arrowhead(&m)?;
            (out.pairs, m.basis().to_vec(), m.frame(), out.route)
        }
        Err(Error::UnsupportedReduction(_)) => {
            let m = build_full_matrix(spec);
            (eig_dense(&m)?, m.basis().to_vec(), m.frame(), Route::DenseFallback)
        }
        Err(e) => return Err(e),
    };
    Ok((classify_branches(&to_physical(&pairs, &basis, frame), spec), route))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumSummary {
    pub omega_r: Option<f64>,
    pub e_lp: Option<f64>,
    pub e_up: Option<f64>,
    pub gamma_lp: Option<f64>,
    pub gamma_up: Option<f64>,
    pub exciton_fraction_lp: Option<f64>,
    pub exciton_fraction_up: Option<f64>,
    pub photon_fractions_lp: Option<BTreeMap<i32, f64>>,
    pub photon_fractions_up: Option<BTreeMap<i32, f64>>,
    pub lp_present: bool,
    pub up_present: bool,
    /// `2Ω₀`.
    pub omega_r_single_mode: f64,
    /// `(κ₀ + γ)/2`.
    pub gamma_single_mode: f64,
}

pub fn summarize(branches: &[PolaritonBranch], spec: &SystemSpec) -> SpectrumSummary {
    let find = |label| branches.iter().find(|b| b.label == Some(label));
    let lp = find(BranchLabel::LowerPolariton);
    let up = find(BranchLabel::UpperPolariton);
    let omega0 = spec.collective_coupling(spec.modes().reference_index());
    let gamma_mean = (0..spec.n_emitters()).map(|j| spec.emitters().gamma(j)).sum::<f64>() / spec.n_emitters() as f64;
    SpectrumSummary {
        omega_r: lp.zip(up).map(|(l, u)| u.energy_abs - l.energy_abs),
        e_lp: lp.map(|b| b.energy_abs),
        e_up: up.map(|b| b.energy_abs),
        gamma_lp: lp.map(|b| b.bandwidth_abs),
        gamma_up: up.map(|b| b.bandwidth_abs),
        exciton_fraction_lp: lp.map(PolaritonBranch::exciton_fraction),
        exciton_fraction_up: up.map(PolaritonBranch::exciton_fraction),
        photon_fractions_lp: lp.map(PolaritonBranch::photon_fractions),
        photon_fractions_up: up.map(PolaritonBranch::photon_fractions),
        lp_present: lp.is_some(),
        up_present: up.is_some(),
        omega_r_single_mode: 2.0 * omega0,
        gamma_single_mode: 0.5 * (spec.modes().reference().kappa + gamma_mean),
    }
}

pub fn spectrum_summary(spec: &SystemSpec) -> Result<SpectrumSummary> {
    Ok(summarize(&solve_branches(spec)?.0, spec))
}

/// `ω_{±1} → ω_{±1} ∓ ε`, everything else unchanged.
pub fn mode_shift_scan(spec: &SystemSpec, epsilon: f64) -> Result<SystemSpec> {
    let modes = spec.modes();
    let (Some(lower), Some(upper)) = (modes.get(-1), modes.get(1)) else {
        return Err(Error::Config("mode shift needs modes q = -1 and q = +1".into()));
    };
    let omega0 = modes.reference().omega;
    let new_lower = lower.omega + epsilon;
    let new_upper = upper.omega - epsilon;
    if new_lower >= omega0 || new_upper <= omega0 {
        return Err(Error::Domain(format!(
            "shift {epsilon} moves the side modes to {new_lower} and {new_upper}, crossing the reference at {omega0}"
        )));
    }
    spec.with_modes(modes.with_energy(-1, new_lower)?.with_energy(1, new_upper)?)
}

/// The same system with every mode except `q = 0` removed.
pub fn single_mode_reference(spec: &SystemSpec) -> Result<SystemSpec> {
    let reference = *spec.modes().reference();
    let modes = CavityModeSet::new(vec![reference])?;
    let couplings = match spec.couplings() {
        CouplingMap::Collective(map) => CouplingMap::collective([(0, map[&0])]),
        CouplingMap::PerPair(rows) => {
            let k = spec.modes().reference_index();
            CouplingMap::PerPair(rows.iter().map(|r| vec![r[k]]).collect())
        }
    };
    SystemSpec::new(modes, spec.emitters().clone(), couplings)
}
