//! Brute-force checks that share no code with the eigensolvers: fixed-step time
//! propagation of the amplitude equations, harmonic inversion of the trajectories, and
//! a comparison of full and adiabatically reduced dynamics.

mod harmonic;
mod propagate;
mod verify;

pub use harmonic::{aberth_roots, fit_complex_frequencies, HarmonicFit};
pub use propagate::{
    default_dt, default_horizon, propagate, propagate_with, rate_scale, PropagateOptions, Trajectory, MAX_STEPS,
};
pub use verify::{verify_adiabatic, verify_adiabatic_scaling, AdiabaticReport, ScalingReport};

/// Least-squares fit of `y = C·x^k` on log–log axes. Returns `(k, C)`.
///
/// Points with non-positive coordinates are skipped; fewer than two usable points give NaN.
pub fn power_law_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let pts: Vec<(f64, f64)> =
        xs.iter().zip(ys).filter(|(x, y)| **x > 0.0 && **y > 0.0).map(|(x, y)| (x.ln(), y.ln())).collect();
    if pts.len() < 2 {
        return (f64::NAN, f64::NAN);
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let k = sxy / sxx;
    (k, (my - k * mx).exp())
}
