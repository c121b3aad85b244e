//! Harmonic inversion of propagated trajectories.
//!
//! Linear prediction (Prony) across all basis channels gives a characteristic polynomial
//! whose roots `z_k = e^{−iλ_k h}` carry the complex frequencies; a few Gauss–Newton steps
//! on the full sum-of-exponentials model then refine them.

use faer::linalg::solvers::SolveLstsq;
use faer::Mat;
use num_complex::Complex64;
use serde::Serialize;

use super::propagate::Trajectory;
use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const TARGET_SAMPLES: usize = 600;
const MAX_STRIDE: usize = 10;
const REFINE_ITERS: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HarmonicFit {
    /// Frame-relative complex frequencies, sorted by real part.
    pub lambdas: Vec<Complex64>,
    /// Ratio of extreme singular values of the prediction matrix.
    pub condition: f64,
    /// Relative RMS residual of the final model.
    pub residual: f64,
    /// Near-degenerate frequencies or an ill-conditioned prediction matrix.
    pub low_confidence: bool,
}

/// Fits `Σ_k A_k e^{−iλ_k t}` to every channel of the rotating-frame trajectory.
pub fn fit_complex_frequencies(traj: &Trajectory, n_expected: usize) -> Result<HarmonicFit> {
    if n_expected == 0 {
        return Err(Error::Fit("need at least one frequency".into()));
    }
    if traj.times.len() < 2 {
        return Err(Error::Fit("trajectory too short".into()));
    }
    let rot = traj.rotating();
    let dt = traj.times[1] - traj.times[0];
    let stride = (rot.len() / TARGET_SAMPLES).clamp(1, MAX_STRIDE);
    let samples: Vec<&Vec<Complex64>> = rot.iter().step_by(stride).take(TARGET_SAMPLES).collect();
    let h = dt * stride as f64;
    let len = samples.len();
    if len < 2 * n_expected + 1 {
        return Err(Error::Fit(format!("{len} samples cannot resolve {n_expected} frequencies")));
    }

    // Channels normalized to unit peak so each contributes comparably; silent ones dropped.
    let channels: Vec<Vec<Complex64>> = (0..traj.basis.len())
        .filter_map(|ch| {
            let series: Vec<Complex64> = samples.iter().map(|row| row[ch]).collect();
            let peak = series.iter().map(|z| z.norm()).fold(0.0, f64::max);
            (peak > 1e-12).then(|| series.iter().map(|z| z / peak).collect())
        })
        .collect();
    if channels.is_empty() {
        return Err(Error::Fit("trajectory carries no signal".into()));
    }

    let n = n_expected;
    let rows = channels.len() * (len - n);
    let mut a = Mat::<Complex64>::zeros(rows, n);
    let mut b = Mat::<Complex64>::zeros(rows, 1);
    for (c, y) in channels.iter().enumerate() {
        for k in 0..len - n {
            let r = c * (len - n) + k;
            for m in 0..n {
                a[(r, m)] = y[k + m];
            }
            b[(r, 0)] = -y[k + n];
        }
    }
    let sv = a.singular_values().map_err(|e| Error::Fit(format!("{e:?}")))?;
    let condition = sv.first().copied().unwrap_or(0.0) / sv.last().copied().unwrap_or(0.0);
    let coeffs = a.qr().solve_lstsq(&b);
    let mut poly: Vec<Complex64> = (0..n).map(|m| coeffs[(m, 0)]).collect();
    poly.push(Complex64::new(1.0, 0.0));
    let roots = aberth_roots(&poly)?;
    let mut lambdas: Vec<Complex64> = roots.iter().map(|z| I * z.ln() / h).collect();

    let times: Vec<f64> = (0..len).map(|k| k as f64 * h).collect();
    let mut residual = model_residual(&channels, &times, &lambdas)?.0;
    for _ in 0..REFINE_ITERS {
        let Some(step) = gauss_newton_step(&channels, &times, &lambdas)? else { break };
        let trial: Vec<Complex64> = lambdas.iter().zip(&step).map(|(l, d)| l + d).collect();
        let r = model_residual(&channels, &times, &trial)?.0;
        if !(r < residual) {
            break;
        }
        residual = r;
        lambdas = trial;
    }

    lambdas.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    let window = h * (len - 1) as f64;
    let min_sep = lambdas
        .windows(2)
        .map(|w| (w[1] - w[0]).norm())
        .chain(lambdas.iter().enumerate().flat_map(|(i, x)| lambdas[i + 1..].iter().map(move |y| (x - y).norm())))
        .fold(f64::INFINITY, f64::min);
    let low_confidence = !(condition < 1e10) || min_sep < 2.0 / window;
    Ok(HarmonicFit { lambdas, condition, residual, low_confidence })
}

fn basis_matrix(times: &[f64], lambdas: &[Complex64]) -> Mat<Complex64> {
    Mat::from_fn(times.len(), lambdas.len(), |k, m| (-I * lambdas[m] * times[k]).exp())
}

/// Relative RMS residual and per-channel amplitudes for fixed frequencies.
fn model_residual(channels: &[Vec<Complex64>], times: &[f64], lambdas: &[Complex64]) -> Result<(f64, Mat<Complex64>)> {
    let v = basis_matrix(times, lambdas);
    let y = Mat::from_fn(times.len(), channels.len(), |k, c| channels[c][k]);
    let amps = v.qr().solve_lstsq(&y);
    let fit = &v * &amps;
    let (mut num, mut den) = (0.0, 0.0);
    for c in 0..channels.len() {
        for k in 0..times.len() {
            num += (y[(k, c)] - fit[(k, c)]).norm_sqr();
            den += y[(k, c)].norm_sqr();
        }
    }
    let r = (num / den).sqrt();
    if !r.is_finite() {
        return Err(Error::Fit("non-finite residual".into()));
    }
    Ok((r, amps))
}

/// One Gauss–Newton update of the frequencies with amplitudes re-solved linearly.
fn gauss_newton_step(channels: &[Vec<Complex64>], times: &[f64], lambdas: &[Complex64]) -> Result<Option<Vec<Complex64>>> {
    let (_, amps) = model_residual(channels, times, lambdas)?;
    let v = basis_matrix(times, lambdas);
    let (len, n, nc) = (times.len(), lambdas.len(), channels.len());
    let mut jac = Mat::<Complex64>::zeros(len * nc, n);
    let mut res = Mat::<Complex64>::zeros(len * nc, 1);
    for c in 0..nc {
        for k in 0..len {
            let r = c * len + k;
            let mut model = Complex64::default();
            for m in 0..n {
                let term = amps[(m, c)] * v[(k, m)];
                model += term;
                jac[(r, m)] = -I * times[k] * term;
            }
            res[(r, 0)] = channels[c][k] - model;
        }
    }
    let step = jac.qr().solve_lstsq(&res);
    let out: Vec<Complex64> = (0..n).map(|m| step[(m, 0)]).collect();
    Ok(out.iter().all(|z| z.re.is_finite() && z.im.is_finite()).then_some(out))
}

/// Roots of `Σ_k coeffs[k] z^k` by Aberth–Ehrlich simultaneous iteration.
pub fn aberth_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let degree = coeffs
        .iter()
        .rposition(|c| *c != Complex64::default())
        .ok_or_else(|| Error::Fit("zero polynomial".into()))?;
    if degree == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[degree];
    let p: Vec<Complex64> = coeffs[..=degree].iter().map(|c| c / lead).collect();
    // Cauchy bound for the initial circle.
    let radius = 1.0 + p[..degree].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..degree)
        .map(|k| Complex64::from_polar(0.5 * radius, 2.0 * std::f64::consts::PI * k as f64 / degree as f64 + 0.4))
        .collect();
    let eval = |x: Complex64| {
        let mut v = Complex64::default();
        let mut d = Complex64::default();
        for c in p.iter().rev() {
            d = d * x + v;
            v = v * x + c;
        }
        (v, d)
    };
    for _ in 0..500 {
        let mut worst = 0.0f64;
        for k in 0..degree {
            let (v, d) = eval(z[k]);
            if v == Complex64::default() {
                continue;
            }
            let ratio = v / d;
            let repulsion: Complex64 = (0..degree).filter(|&j| j != k).map(|j| 1.0 / (z[k] - z[j])).sum();
            let w = ratio / (1.0 - ratio * repulsion);
            if !(w.re.is_finite() && w.im.is_finite()) {
                continue;
            }
            z[k] -= w;
            worst = worst.max(w.norm() / z[k].norm().max(1e-300));
        }
        if worst < 1e-15 {
            return Ok(z);
        }
    }
    if z.iter().all(|x| x.re.is_finite() && x.im.is_finite()) {
        Ok(z)
    } else {
        Err(Error::Fit("root iteration diverged".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_dicke_matrix, CavityMode, CavityModeSet, CouplingMap, SystemSpec};
    use crate::oracle::{default_dt, propagate, propagate_with, PropagateOptions};
    use crate::presets;
    use crate::spectra::eig_dense;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_matches(fit: &[Complex64], exact: &[Complex64], tol: f64) {
        assert_eq!(fit.len(), exact.len());
        for e in exact {
            let d = fit.iter().map(|f| (f - e).norm()).fold(f64::INFINITY, f64::min);
            assert!(d < tol, "exact {e} unmatched (closest {d:e}); fit {fit:?}");
        }
    }

    #[test]
    fn aberth_known_roots() {
        let roots = [c(1.0, 0.0), c(-0.5, 0.2), c(0.1, -0.9)];
        let poly = crate::spectra::polynomial_from_roots(&roots);
        let got = aberth_roots(&poly).unwrap();
        assert_matches(&got, &roots, 1e-12);
    }

    #[test]
    fn resonant_pair() {
        let modes = CavityModeSet::new(vec![CavityMode { q: 0, omega: 2.0, kappa: 0.1 }]).unwrap();
        let spec = SystemSpec::dicke(modes, 1, 2.0, 0.1, CouplingMap::collective([(0, 0.35)])).unwrap();
        let traj = propagate(&spec, &[c(0.0, 0.0), c(1.0, 0.0)], 100.0, default_dt(&spec)).unwrap();
        let fit = fit_complex_frequencies(&traj, 2).unwrap();
        assert!(!fit.low_confidence);
        assert_matches(&fit.lambdas, &[c(-0.35, 0.0), c(0.35, 0.0)], 1e-6);
    }

    #[test]
    fn fig4_frequencies_match_solver() {
        let spec = presets::fig4(0.2).unwrap();
        let exact: Vec<Complex64> =
            eig_dense(&build_dicke_matrix(&spec).unwrap()).unwrap().into_iter().map(|p| p.lambda).collect();
        let init = vec![c(0.5, 0.0); 4];
        let traj = propagate(&spec, &init, 300.0, default_dt(&spec)).unwrap();
        let fit = fit_complex_frequencies(&traj, 4).unwrap();
        assert_matches(&fit.lambdas, &exact, 1e-4);
    }

    #[test]
    fn lab_direct_trajectory_gives_the_same_frequencies() {
        let spec = presets::fig4(0.3).unwrap();
        let exact: Vec<Complex64> =
            eig_dense(&build_dicke_matrix(&spec).unwrap()).unwrap().into_iter().map(|p| p.lambda).collect();
        let dt = 0.05 / 2.76;
        let traj =
            propagate_with(&spec, &[c(0.5, 0.0); 4], 200.0, dt, PropagateOptions { lab_direct: true, stride: 1 })
                .unwrap();
        assert_matches(&fit_complex_frequencies(&traj, 4).unwrap().lambdas, &exact, 1e-4);
    }

    #[test]
    fn degenerate_pair_is_flagged() {
        // Uncoupled modes at the same frequency and width are indistinguishable.
        let modes = CavityModeSet::linear_bandwidth(&[(-1, 2.0), (0, 2.0)], 0.1, 0.0).unwrap();
        let spec =
            SystemSpec::dicke(modes, 1, 2.5, 0.1, CouplingMap::collective([(-1, 0.0), (0, 0.0)])).unwrap();
        let traj = propagate(&spec, &[c(0.6, 0.0), c(0.8, 0.0), c(0.0, 0.0)], 50.0, default_dt(&spec)).unwrap();
        let fit = fit_complex_frequencies(&traj, 2).unwrap();
        assert!(fit.low_confidence);
    }

    #[test]
    fn bad_requests() {
        let spec = presets::fig4(0.2).unwrap();
        let traj = propagate(&spec, &[c(0.5, 0.0); 4], 0.2, default_dt(&spec)).unwrap();
        assert!(fit_complex_frequencies(&traj, 0).is_err());
        assert!(fit_complex_frequencies(&traj, 4).is_err());
    }
}
