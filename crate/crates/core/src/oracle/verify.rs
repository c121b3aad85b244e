//! Full versus adiabatically reduced dynamics.
//!
//! All propagations start from the bright emitter state and run in the `q = 0` rotating
//! frame over `t = π/Ω₀`, half a vacuum Rabi period. Three reductions of `(α₀, β)` are
//! compared against the full collective run:
//!
//! * the reduced `(1+N)` amplitude equations with `Γ′, Γ″, J′, J″` as written, restricted
//!   to the symmetric emitter state;
//! * the 2×2 matrix built from `δ_N` and `ΔΓ_N`;
//! * direct substitution of the stationary side-mode amplitudes
//!   `c_q = −iΩ_q β/(iΔ_q + Δκ_q/2)`, which carries no extra factors.

use num_complex::Complex64;
use serde::Serialize;

use super::power_law_fit;
use super::propagate::{default_dt, propagate, rk4};
use crate::adiabatic::effective_parameters;
use crate::error::{Error, Result};
use crate::model::SystemSpec;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdiabaticReport {
    /// All side modes pass the quasi-static validity check.
    pub in_regime: bool,
    pub horizon: f64,
    /// `Ω₀/min_q |Δ_q|`; `None` without side modes.
    pub omega0_over_detuning: Option<f64>,
    /// Relative max deviation of the reduced `(1+N)` equations.
    pub dev_reduced: f64,
    /// Relative max deviation of the 2×2 reduction.
    pub dev_two_level: f64,
    /// Relative max deviation of direct stationary substitution.
    pub dev_direct: f64,
}

/// Two-amplitude equations `α̇₀ = a β`, `β̇ = b α₀ + c β`.
#[derive(Debug, Clone, Copy)]
struct Reduced {
    a: Complex64,
    b: Complex64,
    c: Complex64,
}

impl Reduced {
    fn run(self, dt: f64, steps: usize) -> Vec<[Complex64; 2]> {
        let mut out = Vec::with_capacity(steps + 1);
        let one = Complex64::new(1.0, 0.0);
        rk4(
            |y, dy| {
                dy[0] = self.a * y[1];
                dy[1] = self.b * y[0] + self.c * y[1];
            },
            &[Complex64::default(), one],
            dt,
            steps,
            1,
            |_, y| out.push([y[0], y[1]]),
        );
        out
    }
}

pub fn verify_adiabatic(spec: &SystemSpec, thermodynamic_limit: bool) -> Result<AdiabaticReport> {
    let modes = spec.modes();
    let r = modes.reference_index();
    let omega0 = spec.collective_coupling(r);
    if !(omega0 > 0.0) {
        return Err(Error::Domain("reference coupling must be positive".into()));
    }
    let corr = effective_parameters(spec, thermodynamic_limit)?;
    let nf = spec.n_emitters() as f64;
    let delta = spec.detuning(0);
    let half_dg = 0.5 * spec.decay_mismatch(0);
    let bare = I * delta + half_dg;
    let coupling = -I * omega0;

    // Per-emitter pair terms J = NJ/N, summed over the N − 1 partners of each emitter.
    let (jp, jdp) = (corr.nj_prime / nf, corr.nj_dprime / nf);
    let reduced = Reduced {
        a: coupling,
        b: coupling,
        c: bare - I * corr.gamma_dprime - corr.gamma_prime - (nf - 1.0) * (jp + I * jdp),
    };
    let two_level = Reduced { a: coupling, b: coupling, c: I * corr.delta_n - corr.delta_gamma_n };
    let substitution: Complex64 = (0..modes.len())
        .filter(|&k| k != r)
        .map(|k| {
            let w = spec.collective_coupling(k).powi(2);
            w / (I * modes.detuning(k) + 0.5 * modes.bandwidth_mismatch(k))
        })
        .sum();
    let direct = Reduced { a: coupling, b: coupling, c: bare - substitution };

    let horizon = std::f64::consts::PI / omega0;
    let dt = default_dt(spec);
    let mut initial = vec![Complex64::default(); modes.len() + 1];
    initial[modes.len()] = Complex64::new(1.0, 0.0);
    let full = propagate(spec, &initial, horizon, dt)?;
    let rot = full.rotating();
    let steps = rot.len() - 1;
    let h = horizon / steps as f64;
    let peak = rot.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);

    let deviation = |eqs: Reduced| {
        let traj = eqs.run(h, steps);
        let worst = rot
            .iter()
            .zip(&traj)
            .map(|(f, x)| (f[r] - x[0]).norm().max((f[modes.len()] - x[1]).norm()))
            .fold(0.0, f64::max);
        worst / peak
    };

    let min_detuning = (0..modes.len()).filter(|&k| k != r).map(|k| modes.detuning(k).abs()).reduce(f64::min);
    Ok(AdiabaticReport {
        in_regime: spec.is_quasi_static(),
        horizon,
        omega0_over_detuning: min_detuning.map(|d| omega0 / d),
        dev_reduced: deviation(reduced),
        dev_two_level: deviation(two_level),
        dev_direct: deviation(direct),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingReport {
    pub ratios: Vec<f64>,
    pub reports: Vec<AdiabaticReport>,
    /// Fitted `(k, C)` of `deviation = C·(Ω₀/Δ)^k` for each reduction.
    pub fit_reduced: (f64, f64),
    pub fit_two_level: (f64, f64),
    pub fit_direct: (f64, f64),
}

/// Runs [`verify_adiabatic`] over a family of specs and fits power laws in `Ω₀/Δ`.
pub fn verify_adiabatic_scaling(
    specs: &[SystemSpec],
    thermodynamic_limit: bool,
) -> Result<ScalingReport> {
    let reports = specs.iter().map(|s| verify_adiabatic(s, thermodynamic_limit)).collect::<Result<Vec<_>>>()?;
    let ratios = reports
        .iter()
        .map(|r| r.omega0_over_detuning.ok_or_else(|| Error::Config("scaling needs side modes".into())))
        .collect::<Result<Vec<_>>>()?;
    let fit = |f: fn(&AdiabaticReport) -> f64| power_law_fit(&ratios, &reports.iter().map(f).collect::<Vec<_>>());
    Ok(ScalingReport {
        fit_reduced: fit(|r| r.dev_reduced),
        fit_two_level: fit(|r| r.dev_two_level),
        fit_direct: fit(|r| r.dev_direct),
        ratios,
        reports,
    })
}
