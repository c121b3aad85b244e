use polariton_core::oracle::{default_dt, fit_complex_frequencies, propagate};
use polariton_core::spectra::{eig_arrowhead, eig_dense};
use polariton_core::{build_dicke_matrix, presets, CavityMode, CavityModeSet, Complex64, CouplingMap, SystemSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Local maxima of `|Σ x(t) e^{iωt}|²` over a frequency grid, ignoring ripple far below the
/// strongest line.
fn spectral_peaks(times: &[f64], signal: &[Complex64], lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let freqs: Vec<f64> = (0..=((hi - lo) / step) as usize).map(|k| lo + k as f64 * step).collect();
    let power: Vec<f64> = freqs
        .iter()
        .map(|&w| times.iter().zip(signal).map(|(&t, x)| x * Complex64::new(0.0, w * t).exp()).sum::<Complex64>().norm_sqr())
        .collect();
    let floor = 1e-4 * power.iter().cloned().fold(0.0, f64::max);
    (1..freqs.len() - 1)
        .filter(|&k| power[k] > floor && power[k] > power[k - 1] && power[k] > power[k + 1])
        .map(|k| freqs[k])
        .collect()
}

#[test]
fn fig4_fourier_peaks_sit_on_branch_energies() {
    let spec = presets::fig4(0.35).unwrap();
    let exact: Vec<Complex64> = eig_dense(&build_dicke_matrix(&spec).unwrap()).unwrap().iter().map(|p| p.lambda).collect();
    let t_final = 200.0;
    let mut init = vec![Complex64::default(); 4];
    init[3] = Complex64::new(1.0, 0.0);
    let traj = propagate(&spec, &init, t_final, default_dt(&spec)).unwrap();
    // Real rotation only, so every line keeps its full width.
    let w0 = spec.modes().reference().omega;
    let x: Vec<Complex64> =
        traj.times.iter().zip(&traj.amplitudes).map(|(&t, row)| row[3] * Complex64::new(0.0, w0 * t).exp()).collect();
    let peaks = spectral_peaks(&traj.times, &x, -1.5, 1.5, 1e-3);
    let resolution = 2.0 * std::f64::consts::PI / t_final;
    assert_eq!(peaks.len(), exact.len(), "peaks {peaks:?}");
    for lam in &exact {
        let nearest = peaks.iter().map(|p| (p - lam.re).abs()).fold(f64::INFINITY, f64::min);
        assert!(nearest <= resolution, "branch at {} has nearest peak {nearest} away", lam.re);
    }
}

fn random_five_mode(rng: &mut ChaCha8Rng) -> SystemSpec {
    let fsr = rng.gen_range(0.4..0.6);
    let modes: Vec<CavityMode> =
        (-2..=2).map(|q| CavityMode { q, omega: 3.0 + q as f64 * fsr, kappa: rng.gen_range(0.02..0.2) }).collect();
    let couplings = CouplingMap::collective(modes.iter().map(|m| (m.q, rng.gen_range(0.1..0.3))));
    SystemSpec::dicke(
        CavityModeSet::new(modes).unwrap(),
        rng.gen_range(1..100),
        3.0 + rng.gen_range(-0.1..0.1),
        rng.gen_range(0.02..0.2),
        couplings,
    )
    .unwrap()
}

#[test]
fn harmonic_fit_recovers_random_five_mode_spectra() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..4 {
        let spec = random_five_mode(&mut rng);
        let exact: Vec<Complex64> =
            eig_arrowhead(&build_dicke_matrix(&spec).unwrap()).unwrap().pairs.iter().map(|p| p.lambda).collect();
        let min_sep = exact
            .iter()
            .enumerate()
            .flat_map(|(i, a)| exact[i + 1..].iter().map(move |b| (a - b).norm()))
            .fold(f64::INFINITY, f64::min);
        let init = vec![Complex64::new(6f64.sqrt().recip(), 0.0); 6];
        let traj = propagate(&spec, &init, (20.0 / min_sep).max(200.0), default_dt(&spec)).unwrap();
        let fit = fit_complex_frequencies(&traj, 6).unwrap();
        assert!(!fit.low_confidence, "{fit:?}");
        for e in &exact {
            let gap = fit.lambdas.iter().map(|f| (f - e).norm()).fold(f64::INFINITY, f64::min);
            assert!(gap < 1e-4, "eigenvalue {e} recovered only to {gap:e}");
        }
    }
}
