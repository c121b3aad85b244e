use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use super::{eig_dense, ComplexEigenpair};
use crate::error::{Error, Result};
use crate::model::{build_full_matrix, BasisLabel, CavityModeSet, CouplingMap, EmitterEnsemble, Frame, SystemSpec};

/// Sign `s` in `Γ = κ₀ + s·2·Im λ`.
///
/// Under `ẋ = −iMx` an amplitude decays as `e^{Im λ·t}` in the rotating frame and the
/// frame itself contributes `e^{−κ₀t/2}`, so the physical width is `κ₀ − 2 Im λ`. A bare
/// mode with `d_q = Δ_q − iΔκ_q/2` then reports exactly `κ_q`.
pub const BANDWIDTH_SIGN: f64 = -1.0;

/// Branches with less photon weight than this are dark.
pub const DARK_PHOTON_THRESHOLD: f64 = 1e-6;

/// Minimum `|β|²` for a branch to carry the LP or UP label.
pub const LABEL_THRESHOLD: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BranchLabel {
    LowerPolariton,
    UpperPolariton,
    Dark,
    Photonic(i32),
}

impl fmt::Display for BranchLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BranchLabel::LowerPolariton => f.write_str("LP"),
            BranchLabel::UpperPolariton => f.write_str("UP"),
            BranchLabel::Dark => f.write_str("dark"),
            BranchLabel::Photonic(q) => write!(f, "photonic({q})"),
        }
    }
}

impl Serialize for BranchLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolaritonBranch {
    pub lambda: Complex64,
    /// Lab-frame energy `ω₀ + Re λ`.
    pub energy_abs: f64,
    pub bandwidth_abs: f64,
    /// Matter amplitudes: `β` for a collective basis, `c_i` per emitter otherwise.
    pub matter: Vec<Complex64>,
    /// Photon amplitudes `α_q`, ascending in `q`.
    pub photon: Vec<(i32, Complex64)>,
    pub label: Option<BranchLabel>,
}

impl PolaritonBranch {
    /// `|β|²`, or `Σ_i |c_i|²` in the per-emitter basis.
    pub fn exciton_fraction(&self) -> f64 {
        self.matter.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn photon_fraction(&self, q: i32) -> f64 {
        self.photon.iter().find(|(k, _)| *k == q).map_or(0.0, |(_, a)| a.norm_sqr())
    }

    pub fn photon_fractions(&self) -> BTreeMap<i32, f64> {
        self.photon.iter().map(|(q, a)| (*q, a.norm_sqr())).collect()
    }

    pub fn total_photon_fraction(&self) -> f64 {
        self.photon.iter().map(|(_, a)| a.norm_sqr()).sum()
    }
}

pub fn to_physical(pairs: &[ComplexEigenpair], basis: &[BasisLabel], frame: Frame) -> Vec<PolaritonBranch> {
    to_physical_with_sign(pairs, basis, frame, BANDWIDTH_SIGN)
}

/// As [`to_physical`] with an explicit bandwidth sign; exposed for the calibration check.
pub fn to_physical_with_sign(
    pairs: &[ComplexEigenpair],
    basis: &[BasisLabel],
    frame: Frame,
    sign: f64,
) -> Vec<PolaritonBranch> {
    pairs
        .iter()
        .map(|pair| {
            let mut matter = Vec::new();
            let mut photon = Vec::new();
            for (label, amp) in basis.iter().zip(&pair.vector) {
                match label {
                    BasisLabel::Mode(q) => photon.push((*q, *amp)),
                    BasisLabel::Emitter(_) | BasisLabel::Collective => matter.push(*amp),
                }
            }
            PolaritonBranch {
                lambda: pair.lambda,
                energy_abs: frame.omega0 + pair.lambda.re,
                bandwidth_abs: frame.kappa0 + sign * 2.0 * pair.lambda.im,
                matter,
                photon,
                label: None,
            }
        })
        .collect()
}

/// Checks that `sign` turns a bare, decoupled mode back into its own bandwidth.
///
/// The system has three modes with `κ_q = 0.09 + 0.07q` and no coupling, so every
/// eigenvalue is a bare diagonal entry.
pub fn bandwidth_sign_self_test(sign: f64) -> Result<()> {
    let modes = CavityModeSet::three_mode(2.0, 0.6, 0.09, 0.07)?;
    let spec = SystemSpec::new(
        modes.clone(),
        EmitterEnsemble::homogeneous(1, 2.0, 0.2)?,
        CouplingMap::collective([(-1, 0.0), (0, 0.0), (1, 0.0)]),
    )?;
    let m = build_full_matrix(&spec);
    let branches = to_physical_with_sign(&eig_dense(&m)?, m.basis(), m.frame(), sign);
    for mode in modes.modes() {
        let b = branches
            .iter()
            .find(|b| b.photon_fraction(mode.q) > 0.5)
            .ok_or_else(|| Error::Domain(format!("no branch for bare mode q={}", mode.q)))?;
        if (b.bandwidth_abs - mode.kappa).abs() > 1e-12 {
            return Err(Error::Domain(format!(
                "bandwidth sign {sign}: bare mode q={} reports {} instead of {}",
                mode.q, b.bandwidth_abs, mode.kappa
            )));
        }
    }
    Ok(())
}

/// Labels LP, UP, dark and photonic branches.
///
/// Branches without photon weight are dark. The remaining bright branches are sorted by
/// energy; since the polariton eigenvalues interlace the bare mode energies, the LP is
/// the bright branch at position `K` and the UP at `K + 1`, where `K` counts the modes
/// below the reference mode. Each keeps its label only if `|β|² > 0.01`. Everything else
/// is `photonic(q)` for its dominant mode, ties going to the lower mode.
pub fn classify_branches(branches: &[PolaritonBranch], spec: &SystemSpec) -> Vec<PolaritonBranch> {
    let mut out = branches.to_vec();
    let omega0 = spec.modes().reference().omega;
    let below = spec.modes().modes().iter().filter(|m| m.omega < omega0).count();

    let mut bright: Vec<usize> = (0..out.len())
        .filter(|&k| out[k].total_photon_fraction() >= DARK_PHOTON_THRESHOLD)
        .collect();
    bright.sort_by(|&a, &b| out[a].energy_abs.total_cmp(&out[b].energy_abs));

    for b in out.iter_mut() {
        b.label = if b.total_photon_fraction() < DARK_PHOTON_THRESHOLD {
            Some(BranchLabel::Dark)
        } else {
            let mut best: Option<(i32, f64)> = None;
            for (q, a) in &b.photon {
                let w = a.norm_sqr();
                if best.map_or(true, |(_, bw)| w > bw) {
                    best = Some((*q, w));
                }
            }
            best.map(|(q, _)| BranchLabel::Photonic(q))
        };
    }
    for (pos, label) in [(below, BranchLabel::LowerPolariton), (below + 1, BranchLabel::UpperPolariton)] {
        if let Some(&k) = bright.get(pos) {
            if out[k].exciton_fraction() > LABEL_THRESHOLD {
                out[k].label = Some(label);
            }
        }
    }
    out
}

/// Permutation `perm` minimizing `Σ_i |a_i − b_{perm[i]}|`.
///
/// Exhaustive for up to eight values, greedy nearest pairs beyond that.
pub fn match_eigenvalues(a: &[Complex64], b: &[Complex64]) -> Vec<usize> {
    assert_eq!(a.len(), b.len(), "eigenvalue lists differ in length");
    let n = a.len();
    if n <= 8 {
        let mut perm: Vec<usize> = (0..n).collect();
        let mut best = perm.clone();
        let mut best_cost = f64::INFINITY;
        permute(&mut perm, 0, &mut |p| {
            let cost: f64 = p.iter().enumerate().map(|(i, &j)| (a[i] - b[j]).norm()).sum();
            if cost < best_cost {
                best_cost = cost;
                best.copy_from_slice(p);
            }
        });
        return best;
    }
    let mut pairs: Vec<(f64, usize, usize)> =
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| ((a[i] - b[j]).norm(), i, j)).collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    for (_, i, j) in pairs {
        if perm[i] == usize::MAX && !used[j] {
            perm[i] = j;
            used[j] = true;
        }
    }
    perm
}

fn permute(p: &mut [usize], k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, visit);
        p.swap(k, i);
    }
}

/// Reorders `next` so that entry `i` continues branch `i` of `previous`.
pub fn track_branches(previous: &[Complex64], next: &[PolaritonBranch]) -> Vec<PolaritonBranch> {
    let lams: Vec<Complex64> = next.iter().map(|b| b.lambda).collect();
    match_eigenvalues(previous, &lams).into_iter().map(|j| next[j].clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_dicke_matrix, CavityMode};
    use crate::presets;
    use crate::spectra::eig_arrowhead;

    fn branches_for(spec: &SystemSpec) -> Vec<PolaritonBranch> {
        let m = build_dicke_matrix(spec).unwrap();
        let pairs = eig_arrowhead(&m).unwrap().pairs;
        classify_branches(&to_physical(&pairs, m.basis(), m.frame()), spec)
    }

    fn find(bs: &[PolaritonBranch], label: BranchLabel) -> Option<&PolaritonBranch> {
        bs.iter().find(|b| b.label == Some(label))
    }

    #[test]
    fn calibrated_sign_passes_and_flipped_sign_fails() {
        bandwidth_sign_self_test(BANDWIDTH_SIGN).unwrap();
        assert!(bandwidth_sign_self_test(-BANDWIDTH_SIGN).is_err());
    }

    #[test]
    fn resonant_single_mode_labels_and_widths() {
        let modes = CavityModeSet::new(vec![CavityMode { q: 0, omega: 2.0, kappa: 0.15 }]).unwrap();
        let spec = SystemSpec::dicke(modes, 1, 2.0, 0.15, CouplingMap::collective([(0, 0.35)])).unwrap();
        let bs = branches_for(&spec);
        let lp = find(&bs, BranchLabel::LowerPolariton).unwrap();
        let up = find(&bs, BranchLabel::UpperPolariton).unwrap();
        assert!((lp.energy_abs - 1.65).abs() < 1e-12 && (up.energy_abs - 2.35).abs() < 1e-12);
        assert!((lp.bandwidth_abs - 0.15).abs() < 1e-12 && (up.bandwidth_abs - 0.15).abs() < 1e-12);
        assert!((lp.exciton_fraction() - 0.5).abs() < 1e-12);
        assert!((up.exciton_fraction() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn uncoupled_system_has_no_polaritons() {
        let spec = presets::fig4(0.3)
            .unwrap()
            .with_couplings(CouplingMap::collective([(-1, 0.0), (0, 0.0), (1, 0.0)]))
            .unwrap();
        let bs = branches_for(&spec);
        assert!(find(&bs, BranchLabel::LowerPolariton).is_none());
        assert!(find(&bs, BranchLabel::UpperPolariton).is_none());
        let mut labels: Vec<String> = bs.iter().map(|b| b.label.unwrap().to_string()).collect();
        labels.sort();
        assert_eq!(labels, ["dark", "photonic(-1)", "photonic(0)", "photonic(1)"]);
    }

    #[test]
    fn fig4_has_four_branches_and_photon_rich_lp() {
        let bs = branches_for(&presets::fig4(0.35).unwrap());
        assert_eq!(bs.len(), 4);
        let lp = find(&bs, BranchLabel::LowerPolariton).unwrap();
        assert!(lp.exciton_fraction() < 0.5);
        for b in &bs {
            let total = b.exciton_fraction() + b.total_photon_fraction();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn fig4_bandwidths_stay_within_bare_rates() {
        for k in 1..=50 {
            let omega0 = 0.01 * k as f64;
            for b in branches_for(&presets::fig4(omega0).unwrap()) {
                assert!(b.bandwidth_abs >= 0.038 - 1e-9 && b.bandwidth_abs <= 0.37 + 1e-9, "{}", b.bandwidth_abs);
            }
        }
    }

    #[test]
    fn matching_recovers_a_shuffle() {
        let a = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.1), Complex64::new(-1.0, 0.0)];
        let b = [a[2], a[0], a[1]];
        assert_eq!(match_eigenvalues(&a, &b), vec![1, 2, 0]);
        let big: Vec<Complex64> = (0..10).map(|k| Complex64::new(k as f64, 0.0)).collect();
        let rev: Vec<Complex64> = big.iter().rev().copied().collect();
        assert_eq!(match_eigenvalues(&big, &rev), (0..10).rev().collect::<Vec<_>>());
    }

    #[test]
    fn label_display() {
        assert_eq!(BranchLabel::Photonic(-1).to_string(), "photonic(-1)");
        assert_eq!(serde_json::to_string(&BranchLabel::LowerPolariton).unwrap(), "\"LP\"");
    }
}
