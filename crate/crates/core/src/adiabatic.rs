//! High-finesse corrections from eliminating the far-detuned modes.
//!
//! Every sum runs over `q ≠ 0` and shares the Lorentzian denominator
//! `D_q = Δ_q² + (Δκ_q/2)²`. The formulas are implemented as written, including the
//! factor `1/2` in `J″` relative to `Γ″`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::SystemSpec;

/// Non-reference modes as `(position, Δ_q, Δκ_q/2, D_q)`.
fn side_modes(spec: &SystemSpec) -> Result<Vec<(usize, f64, f64, f64)>> {
    let modes = spec.modes();
    (0..modes.len())
        .filter(|&k| k != modes.reference_index())
        .map(|k| {
            let delta = modes.detuning(k);
            let half_dk = 0.5 * modes.bandwidth_mismatch(k);
            let denom = delta * delta + half_dk * half_dk;
            if denom == 0.0 {
                Err(Error::SingularMode { q: modes.modes()[k].q })
            } else {
                Ok((k, delta, half_dk, denom))
            }
        })
        .collect()
}

fn check_emitter(spec: &SystemSpec, j: usize) -> Result<()> {
    if j >= spec.n_emitters() {
        return Err(Error::Config(format!("emitter {j} out of range ({} emitters)", spec.n_emitters())));
    }
    Ok(())
}

/// `Γ″_j = −Σ |g_jq|² Δ_q/D_q`.
pub fn one_body_shift(spec: &SystemSpec, j: usize) -> Result<f64> {
    check_emitter(spec, j)?;
    Ok(-side_modes(spec)?
        .into_iter()
        .map(|(k, delta, _, d)| spec.coupling(j, k).norm_sqr() * delta / d)
        .sum::<f64>())
}

/// `Γ′_j = −Σ |g_jq|² (Δκ_q/2)/D_q`.
pub fn one_body_decay(spec: &SystemSpec, j: usize) -> Result<f64> {
    check_emitter(spec, j)?;
    Ok(-side_modes(spec)?
        .into_iter()
        .map(|(k, _, half_dk, d)| spec.coupling(j, k).norm_sqr() * half_dk / d)
        .sum::<f64>())
}

/// `J″_ij = −Σ g*_iq g_jq (Δ_q/2)/D_q`.
pub fn two_body_coupling(spec: &SystemSpec, i: usize, j: usize) -> Result<Complex64> {
    check_emitter(spec, i)?;
    check_emitter(spec, j)?;
    Ok(-side_modes(spec)?
        .into_iter()
        .map(|(k, delta, _, d)| spec.coupling(i, k).conj() * spec.coupling(j, k) * (0.5 * delta / d))
        .sum::<Complex64>())
}

/// `J′_ij = −Σ g*_iq g_jq (Δκ_q/2)/D_q`.
pub fn two_body_loss(spec: &SystemSpec, i: usize, j: usize) -> Result<Complex64> {
    check_emitter(spec, i)?;
    check_emitter(spec, j)?;
    Ok(-side_modes(spec)?
        .into_iter()
        .map(|(k, _, half_dk, d)| spec.coupling(i, k).conj() * spec.coupling(j, k) * (half_dk / d))
        .sum::<Complex64>())
}

/// Per-emitter and pairwise corrections for a general ensemble.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairwiseCorrections {
    pub gamma_prime: Vec<f64>,
    pub gamma_dprime: Vec<f64>,
    /// `J′_ij`, indexed `[i][j]`.
    pub j_prime: Vec<Vec<Complex64>>,
    /// `J″_ij`, indexed `[i][j]`.
    pub j_dprime: Vec<Vec<Complex64>>,
}

pub fn pairwise_corrections(spec: &SystemSpec) -> Result<PairwiseCorrections> {
    let n = spec.n_emitters();
    let mut out = PairwiseCorrections {
        gamma_prime: Vec::with_capacity(n),
        gamma_dprime: Vec::with_capacity(n),
        j_prime: vec![vec![Complex64::default(); n]; n],
        j_dprime: vec![vec![Complex64::default(); n]; n],
    };
    for j in 0..n {
        out.gamma_prime.push(one_body_decay(spec, j)?);
        out.gamma_dprime.push(one_body_shift(spec, j)?);
        for i in 0..n {
            out.j_prime[i][j] = two_body_loss(spec, i, j)?;
            out.j_dprime[i][j] = two_body_coupling(spec, i, j)?;
        }
    }
    Ok(out)
}

/// Corrections for a homogeneous (Dicke) ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdiabaticCorrections {
    pub n: usize,
    /// `Γ′` of each emitter.
    pub gamma_prime: f64,
    /// `Γ″` of each emitter.
    pub gamma_dprime: f64,
    /// `NJ′`.
    pub nj_prime: f64,
    /// `NJ″`.
    pub nj_dprime: f64,
    /// `δ_N = δ₀ − Γ″ − NJ″`.
    pub delta_n: f64,
    /// `ΔΓ_N = −Δγ/2 + Γ′ + NJ′`.
    pub delta_gamma_n: f64,
    /// Whether `Γ′` and `Γ″` were dropped from `δ_N` and `ΔΓ_N`.
    pub thermodynamic_limit: bool,
}

impl AdiabaticCorrections {
    /// Zero corrections: the infinite-finesse limit for `spec`.
    pub fn none(spec: &SystemSpec) -> Self {
        Self {
            n: spec.n_emitters(),
            gamma_prime: 0.0,
            gamma_dprime: 0.0,
            nj_prime: 0.0,
            nj_dprime: 0.0,
            delta_n: spec.detuning(0),
            delta_gamma_n: -0.5 * spec.decay_mismatch(0),
            thermodynamic_limit: true,
        }
    }
}

/// Bundles `Γ′`, `Γ″`, `NJ′`, `NJ″` into `δ_N` and `ΔΓ_N`.
///
/// With the collective couplings `Ω_q = √N g_q`, the pair sums become
/// `NJ′ = −Σ Ω_q² (Δκ_q/2)/D_q` and `NJ″ = −Σ Ω_q² (Δ_q/2)/D_q`, while the one-body terms
/// carry an extra `1/N`.
pub fn effective_parameters(spec: &SystemSpec, thermodynamic_limit: bool) -> Result<AdiabaticCorrections> {
    let bright = spec.bright_couplings()?;
    let n = spec.n_emitters();
    let nf = n as f64;
    let (mut nj_prime, mut nj_dprime) = (0.0, 0.0);
    for (k, delta, half_dk, d) in side_modes(spec)? {
        let w = bright[k].norm_sqr();
        nj_prime -= w * half_dk / d;
        nj_dprime -= w * 0.5 * delta / d;
    }
    let gamma_prime = nj_prime / nf;
    let gamma_dprime = 2.0 * nj_dprime / nf;
    let (gp, gdp) = if thermodynamic_limit { (0.0, 0.0) } else { (gamma_prime, gamma_dprime) };
    Ok(AdiabaticCorrections {
        n,
        gamma_prime,
        gamma_dprime,
        nj_prime,
        nj_dprime,
        delta_n: spec.detuning(0) - gdp - nj_dprime,
        delta_gamma_n: -0.5 * spec.decay_mismatch(0) + gp + nj_prime,
        thermodynamic_limit,
    })
}

/// `Ω_R = Re √(c² + 4Ω₀²)` with `c = −δ_N − iΔΓ_N`, principal branch.
///
/// In the thermodynamic limit `c = NJ″ − δ₀ − i(NJ′ − Δγ/2)`.
pub fn rabi_splitting_adiabatic(spec: &SystemSpec, thermodynamic_limit: bool) -> Result<f64> {
    let corr = effective_parameters(spec, thermodynamic_limit)?;
    let omega0 = spec.collective_coupling(spec.modes().reference_index());
    Ok(rabi_splitting_from(corr.delta_n, corr.delta_gamma_n, omega0))
}

pub fn rabi_splitting_from(delta_n: f64, delta_gamma_n: f64, omega0: f64) -> f64 {
    let c = Complex64::new(-delta_n, -delta_gamma_n);
    (c * c + 4.0 * omega0 * omega0).sqrt().re
}

/// `NJ′` for `Ω_{±1} = Ω₀(1 ± f)`, `Δ_{±1} = ±Δ`, `κ_q = κ₀ + qζ`.
///
/// Returns `(exact, printed)`: the exact sum `(Ω₋₁² − Ω₊₁²)(ζ/2)/(Δ² + ζ²/4)` and the
/// printed approximation `ζfΩ₀²/(Δ² + ζ²/4)`. Substituting the parametric couplings into
/// the exact form gives `−2ζfΩ₀²/(Δ² + ζ²/4)`, so the two differ by a factor of −2.
pub fn nj_prime_homogeneous(omega0: f64, f: f64, fsr: f64, zeta: f64) -> Result<(f64, f64)> {
    if !(f.abs() < 1.0) {
        return Err(Error::Domain(format!("|f| must be < 1, got {f}")));
    }
    let denom = fsr * fsr + 0.25 * zeta * zeta;
    if denom == 0.0 {
        return Err(Error::SingularMode { q: 1 });
    }
    let om = omega0 * (1.0 - f);
    let op = omega0 * (1.0 + f);
    let exact = (om * om - op * op) * (0.5 * zeta) / denom;
    let printed = zeta * f * omega0 * omega0 / denom;
    Ok((exact, printed))
}
