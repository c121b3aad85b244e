use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{BasisLabel, Frame, SystemSpec};

/// Cap on the number of integration steps for the default horizon.
pub const MAX_STEPS: usize = 100_000;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// Lab-frame amplitudes, one row per sample time.
    pub amplitudes: Vec<Vec<Complex64>>,
    /// `Σ|c|²` per sample.
    pub norm_series: Vec<f64>,
    pub basis: Vec<BasisLabel>,
    pub frame: Frame,
}

impl Trajectory {
    /// Amplitudes in the `q = 0` rotating frame, `c·e^{iω̃₀t}`.
    pub fn rotating(&self) -> Vec<Vec<Complex64>> {
        let w = self.frame.complex_frequency();
        self.times
            .iter()
            .zip(&self.amplitudes)
            .map(|(&t, row)| {
                let f = (I * w * t).exp();
                row.iter().map(|c| c * f).collect()
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagateOptions {
    /// Integrate the lab-frame equations directly instead of the rotating-frame ones.
    pub lab_direct: bool,
    /// Record every `stride`-th step.
    pub stride: usize,
}

impl Default for PropagateOptions {
    fn default() -> Self {
        Self { lab_direct: false, stride: 1 }
    }
}

/// `max(|Δ_q|, Ω_q, κ_q, |δ_j|)`, the largest rate in the rotating-frame equations.
pub fn rate_scale(spec: &SystemSpec) -> f64 {
    let modes = spec.modes();
    let mut s = 0.0f64;
    for k in 0..modes.len() {
        s = s.max(modes.detuning(k).abs()).max(spec.collective_coupling(k)).max(modes.modes()[k].kappa);
    }
    for j in 0..spec.n_emitters() {
        s = s.max(spec.detuning(j).abs()).max(spec.emitters().gamma(j));
    }
    s
}

fn lab_scale(spec: &SystemSpec) -> f64 {
    let top_mode = spec.modes().modes().iter().map(|m| m.omega).fold(0.0, f64::max);
    let top_emitter = (0..spec.n_emitters()).map(|j| spec.emitters().omega(j)).fold(0.0, f64::max);
    rate_scale(spec).max(top_mode).max(top_emitter)
}

/// `0.05/scale`.
pub fn default_dt(spec: &SystemSpec) -> f64 {
    let s = rate_scale(spec);
    if s > 0.0 {
        0.05 / s
    } else {
        0.05
    }
}

/// `50/min(κ_q, γ, Ω_q)` over the non-zero rates, capped at [`MAX_STEPS`] steps of `dt`.
pub fn default_horizon(spec: &SystemSpec, dt: f64) -> f64 {
    let modes = spec.modes();
    let rates = (0..modes.len())
        .flat_map(|k| [modes.modes()[k].kappa, spec.collective_coupling(k)])
        .chain((0..spec.n_emitters()).map(|j| spec.emitters().gamma(j)))
        .filter(|&r| r > 0.0)
        .fold(f64::INFINITY, f64::min);
    let t = if rates.is_finite() { 50.0 / rates } else { MAX_STEPS as f64 * dt };
    t.min(MAX_STEPS as f64 * dt)
}

/// Amplitude equations with explicit coefficients. Emitter rows read
/// `ċ_j = a_j c_j − iΣ_q g_jq c_q`, mode rows `ċ_q = b_q c_q − iΣ_j g*_jq c_j`.
struct Equations {
    emitter_rate: Vec<Complex64>,
    mode_rate: Vec<Complex64>,
    /// `[emitter][mode]`.
    g: Vec<Vec<Complex64>>,
}

impl Equations {
    fn new(spec: &SystemSpec, collective: bool, lab: bool) -> Self {
        let modes = spec.modes();
        let m = modes.len();
        let omega0 = modes.reference().omega;
        let kappa0 = modes.reference().kappa;
        let mode_rate = (0..m)
            .map(|k| {
                let md = modes.modes()[k];
                if lab {
                    -I * Complex64::new(md.omega, -0.5 * md.kappa)
                } else {
                    -(I * (md.omega - omega0) + 0.5 * (md.kappa - kappa0))
                }
            })
            .collect();
        let emitter = |j: usize| {
            let (w, g) = (spec.emitters().omega(j), spec.emitters().gamma(j));
            if lab {
                -I * Complex64::new(w, -0.5 * g)
            } else {
                I * (omega0 - w) + 0.5 * (kappa0 - g)
            }
        };
        let n = spec.n_emitters();
        if collective {
            let sqrt_n = (n as f64).sqrt();
            let row = (0..m).map(|k| (0..n).map(|j| spec.coupling(j, k)).sum::<Complex64>() / sqrt_n).collect();
            Self { emitter_rate: vec![emitter(0)], mode_rate, g: vec![row] }
        } else {
            Self {
                emitter_rate: (0..n).map(emitter).collect(),
                mode_rate,
                g: (0..n).map(|j| (0..m).map(|k| spec.coupling(j, k)).collect()).collect(),
            }
        }
    }

    fn dim(&self) -> usize {
        self.mode_rate.len() + self.emitter_rate.len()
    }

    fn rhs(&self, y: &[Complex64], out: &mut [Complex64]) {
        let m = self.mode_rate.len();
        for (k, b) in self.mode_rate.iter().enumerate() {
            let mut acc = b * y[k];
            for (j, row) in self.g.iter().enumerate() {
                acc -= I * row[k].conj() * y[m + j];
            }
            out[k] = acc;
        }
        for (j, a) in self.emitter_rate.iter().enumerate() {
            let mut acc = a * y[m + j];
            for (k, g) in self.g[j].iter().enumerate() {
                acc -= I * g * y[k];
            }
            out[m + j] = acc;
        }
    }
}

/// Classical fourth-order Runge–Kutta with a fixed step. Calls `record(step, y)` for the
/// initial state and every `stride`-th step, always including the last.
pub(crate) fn rk4(
    f: impl Fn(&[Complex64], &mut [Complex64]),
    y0: &[Complex64],
    dt: f64,
    steps: usize,
    stride: usize,
    mut record: impl FnMut(usize, &[Complex64]),
) {
    let n = y0.len();
    let mut y = y0.to_vec();
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) =
        (vec![Complex64::default(); n], vec![Complex64::default(); n], vec![Complex64::default(); n], vec![Complex64::default(); n], vec![Complex64::default(); n]);
    record(0, &y);
    for step in 1..=steps {
        f(&y, &mut k1);
        for i in 0..n {
            tmp[i] = y[i] + k1[i] * (0.5 * dt);
        }
        f(&tmp, &mut k2);
        for i in 0..n {
            tmp[i] = y[i] + k2[i] * (0.5 * dt);
        }
        f(&tmp, &mut k3);
        for i in 0..n {
            tmp[i] = y[i] + k3[i] * dt;
        }
        f(&tmp, &mut k4);
        for i in 0..n {
            y[i] += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (dt / 6.0);
        }
        if step % stride == 0 || step == steps {
            record(step, &y);
        }
    }
}

/// Propagates the single-excitation amplitude equations and returns lab-frame amplitudes.
///
/// An initial vector of length `M + N` selects the per-emitter basis (modes, then
/// emitters); length `M + 1` selects the collective basis `(modes, X)` of a Dicke spec.
pub fn propagate(spec: &SystemSpec, initial: &[Complex64], t_final: f64, dt: f64) -> Result<Trajectory> {
    propagate_with(spec, initial, t_final, dt, PropagateOptions::default())
}

pub fn propagate_with(
    spec: &SystemSpec,
    initial: &[Complex64],
    t_final: f64,
    dt: f64,
    opts: PropagateOptions,
) -> Result<Trajectory> {
    let m = spec.modes().len();
    let n = spec.n_emitters();
    let collective = if initial.len() == m + n {
        false
    } else if initial.len() == m + 1 && spec.is_dicke() {
        true
    } else {
        return Err(Error::Config(format!(
            "initial state has {} amplitudes; expected {} (per emitter) or {} (collective, Dicke only)",
            initial.len(),
            m + n,
            m + 1
        )));
    };
    if !(t_final > 0.0 && dt > 0.0) {
        return Err(Error::Config("t_final and dt must be positive".into()));
    }
    let scale = if opts.lab_direct { lab_scale(spec) } else { rate_scale(spec) };
    if scale > 0.0 && dt > 0.05 / scale * (1.0 + 1e-12) {
        return Err(Error::StepSize { dt, suggested: 0.05 / scale });
    }
    let eqs = Equations::new(spec, collective, opts.lab_direct);
    debug_assert_eq!(eqs.dim(), initial.len());

    let steps = (t_final / dt).ceil().max(1.0) as usize;
    let h = t_final / steps as f64;
    let frame = spec.frame();
    let w = frame.complex_frequency();
    let mut basis: Vec<BasisLabel> = spec.modes().modes().iter().map(|md| BasisLabel::Mode(md.q)).collect();
    if collective {
        basis.push(BasisLabel::Collective);
    } else {
        basis.extend((0..n).map(BasisLabel::Emitter));
    }
    let stride = opts.stride.max(1);
    let cap = steps / stride + 2;
    let mut traj = Trajectory {
        times: Vec::with_capacity(cap),
        amplitudes: Vec::with_capacity(cap),
        norm_series: Vec::with_capacity(cap),
        basis,
        frame,
    };
    rk4(|y, out| eqs.rhs(y, out), initial, h, steps, stride, |step, y| {
        let t = step as f64 * h;
        let row: Vec<Complex64> =
            if opts.lab_direct { y.to_vec() } else { y.iter().map(|c| c * (-I * w * t).exp()).collect() };
        traj.norm_series.push(row.iter().map(|c| c.norm_sqr()).sum());
        traj.times.push(t);
        traj.amplitudes.push(row);
    });
    Ok(traj)
}
