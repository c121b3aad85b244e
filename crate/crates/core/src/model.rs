//! Physical system description and the dynamical matrices built from it.
//!
//! Every matrix is expressed in the frame rotating at the complex frequency of the
//! reference (`q = 0`) cavity mode, `ω̃₀ = ω₀ − iκ₀/2`, so that the amplitude
//! equations read `ẋ = −i M x`. Only energy and bandwidth *differences* enter the
//! entries; absolute energies are recovered later from the recorded [`Frame`].

use std::collections::BTreeMap;
use std::fmt;

use faer::Mat;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `ħc` in eV·nm.
pub const HBAR_C_EV_NM: f64 = 197.326_980_4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavityMode {
    /// Transverse order relative to the reference mode.
    pub q: i32,
    /// Energy in eV.
    pub omega: f64,
    /// Bandwidth (full width) in eV.
    pub kappa: f64,
}

/// Discrete cavity modes at normal incidence, kept sorted by `q`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CavityModeSet {
    modes: Vec<CavityMode>,
    reference: usize,
}

impl CavityModeSet {
    pub fn new(mut modes: Vec<CavityMode>) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::Config("cavity needs at least one mode".into()));
        }
        for m in &modes {
            if !(m.omega.is_finite() && m.omega > 0.0) {
                return Err(Error::Config(format!("mode q={} has non-positive energy {}", m.q, m.omega)));
            }
            if !(m.kappa.is_finite() && m.kappa >= 0.0) {
                return Err(Error::Config(format!("mode q={} has negative bandwidth {}", m.q, m.kappa)));
            }
        }
        modes.sort_by_key(|m| m.q);
        if modes.windows(2).any(|w| w[0].q == w[1].q) {
            return Err(Error::Config("mode indices must be unique".into()));
        }
        let reference = modes
            .iter()
            .position(|m| m.q == 0)
            .ok_or_else(|| Error::Config("exactly one mode must carry q = 0".into()))?;
        Ok(Self { modes, reference })
    }

    /// Modes `q = −1, 0, +1` at `ω₀ ∓ Δ, ω₀, ω₀ + Δ` with `κ_q = κ₀ + qζ`.
    pub fn three_mode(omega0: f64, fsr: f64, kappa0: f64, zeta: f64) -> Result<Self> {
        Self::linear_bandwidth(&[(-1, omega0 - fsr), (0, omega0), (1, omega0 + fsr)], kappa0, zeta)
    }

    /// Explicit mode energies with bandwidths `κ_q = κ₀ + qζ`.
    pub fn linear_bandwidth(energies: &[(i32, f64)], kappa0: f64, zeta: f64) -> Result<Self> {
        Self::new(
            energies
                .iter()
                .map(|&(q, omega)| CavityMode { q, omega, kappa: kappa0 + q as f64 * zeta })
                .collect(),
        )
    }

    /// Ideal planar cavity of length `length_nm` filled with a medium of index `n_d`.
    ///
    /// Uses `q⊥(m) = mπ/2L`, i.e. `ω_m = ħc·mπ/(2 n_d L)` and an FSR of `ħcπ/(2 n_d L)`.
    /// This is half the textbook Fabry–Perot spacing `mπ/L`; the convention is kept
    /// so that the FSR matches `cπ/2n_dL`. Mode `m_ref` becomes `q = 0`.
    pub fn ideal_planar(
        length_nm: f64,
        n_d: f64,
        orders: std::ops::RangeInclusive<u32>,
        m_ref: u32,
        kappa0: f64,
        zeta: f64,
    ) -> Result<Self> {
        if !(length_nm > 0.0 && n_d > 0.0) {
            return Err(Error::Config("cavity length and index must be positive".into()));
        }
        if *orders.start() == 0 || !orders.contains(&m_ref) {
            return Err(Error::Config("orders must start at m >= 1 and contain m_ref".into()));
        }
        let fsr = HBAR_C_EV_NM * std::f64::consts::PI / (2.0 * n_d * length_nm);
        let energies: Vec<(i32, f64)> =
            orders.map(|m| (m as i32 - m_ref as i32, m as f64 * fsr)).collect();
        Self::linear_bandwidth(&energies, kappa0, zeta)
    }

    pub fn modes(&self) -> &[CavityMode] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn reference(&self) -> &CavityMode {
        &self.modes[self.reference]
    }

    pub fn reference_index(&self) -> usize {
        self.reference
    }

    pub fn index_of(&self, q: i32) -> Option<usize> {
        self.modes.binary_search_by_key(&q, |m| m.q).ok()
    }

    pub fn get(&self, q: i32) -> Option<&CavityMode> {
        self.index_of(q).map(|k| &self.modes[k])
    }

    /// `Δ_q = ω_q − ω₀` for the mode at position `k`.
    pub fn detuning(&self, k: usize) -> f64 {
        self.modes[k].omega - self.reference().omega
    }

    /// `Δκ_q = κ_q − κ₀` for the mode at position `k`.
    pub fn bandwidth_mismatch(&self, k: usize) -> f64 {
        self.modes[k].kappa - self.reference().kappa
    }

    /// `ω_{+1} − ω₀`, when a `q = +1` mode exists.
    pub fn fsr(&self) -> Option<f64> {
        self.get(1).map(|m| m.omega - self.reference().omega)
    }

    pub fn finesse(&self) -> Option<f64> {
        let k0 = self.reference().kappa;
        self.fsr().filter(|_| k0 > 0.0).map(|d| d / k0)
    }

    /// Copy with every mode energy shifted by `offset`.
    pub fn shifted(&self, offset: f64) -> Result<Self> {
        Self::new(self.modes.iter().map(|m| CavityMode { omega: m.omega + offset, ..*m }).collect())
    }

    /// Copy with the energy of mode `q` replaced.
    pub fn with_energy(&self, q: i32, omega: f64) -> Result<Self> {
        let mut modes = self.modes.clone();
        let k = self.index_of(q).ok_or_else(|| Error::Config(format!("no mode q={q}")))?;
        modes[k].omega = omega;
        Self::new(modes)
    }
}

/// Either one value shared by all emitters, or one value per emitter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerEmitter {
    Homogeneous(f64),
    PerEmitter(Vec<f64>),
}

impl PerEmitter {
    fn at(&self, i: usize) -> f64 {
        match self {
            PerEmitter::Homogeneous(v) => *v,
            PerEmitter::PerEmitter(v) => v[i],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmitterEnsemble {
    n: usize,
    frequencies: PerEmitter,
    decay: PerEmitter,
}

impl EmitterEnsemble {
    pub fn homogeneous(n: usize, omega_e: f64, gamma: f64) -> Result<Self> {
        Self::new(n, PerEmitter::Homogeneous(omega_e), PerEmitter::Homogeneous(gamma))
    }

    pub fn heterogeneous(omegas: Vec<f64>, gammas: Vec<f64>) -> Result<Self> {
        Self::new(omegas.len(), PerEmitter::PerEmitter(omegas), PerEmitter::PerEmitter(gammas))
    }

    pub fn new(n: usize, frequencies: PerEmitter, decay: PerEmitter) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("at least one emitter is required".into()));
        }
        for (name, list) in [("frequency", &frequencies), ("decay", &decay)] {
            if let PerEmitter::PerEmitter(v) = list {
                if v.len() != n {
                    return Err(Error::Config(format!("{name} list has {} entries for {n} emitters", v.len())));
                }
            }
        }
        let gammas_ok = match &decay {
            PerEmitter::Homogeneous(g) => g.is_finite() && *g >= 0.0,
            PerEmitter::PerEmitter(v) => v.iter().all(|g| g.is_finite() && *g >= 0.0),
        };
        if !gammas_ok {
            return Err(Error::Config("emitter decay rates must be non-negative".into()));
        }
        Ok(Self { n, frequencies, decay })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn omega(&self, i: usize) -> f64 {
        self.frequencies.at(i)
    }

    pub fn gamma(&self, i: usize) -> f64 {
        self.decay.at(i)
    }

    pub fn is_homogeneous(&self) -> bool {
        matches!(
            (&self.frequencies, &self.decay),
            (PerEmitter::Homogeneous(_), PerEmitter::Homogeneous(_))
        )
    }

    pub fn shifted(&self, offset: f64) -> Self {
        let frequencies = match &self.frequencies {
            PerEmitter::Homogeneous(w) => PerEmitter::Homogeneous(w + offset),
            PerEmitter::PerEmitter(v) => PerEmitter::PerEmitter(v.iter().map(|w| w + offset).collect()),
        };
        Self { frequencies, ..self.clone() }
    }
}

/// Light–matter couplings.
///
/// `Collective` stores `Ω_q = √N g_q` for every mode (real, non-negative) and is the
/// Dicke-regime description. `PerPair` stores complex `g_{iq}` indexed
/// `[emitter][mode position]` with modes in ascending `q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingMap {
    Collective(BTreeMap<i32, f64>),
    PerPair(Vec<Vec<Complex64>>),
}

impl CouplingMap {
    pub fn collective<I: IntoIterator<Item = (i32, f64)>>(entries: I) -> Self {
        CouplingMap::Collective(entries.into_iter().collect())
    }

    /// `Ω_{±1} = Ω₀(1 ± f)` on the modes `q = −1, 0, +1`.
    pub fn parametric(omega0: f64, f: f64) -> Result<Self> {
        if f.abs() >= 1.0 {
            return Err(Error::Domain(format!("|f| must be < 1, got {f}")));
        }
        Ok(Self::collective([(-1, omega0 * (1.0 - f)), (0, omega0), (1, omega0 * (1.0 + f))]))
    }
}

/// Complete description of modes, emitters and couplings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SystemSpec {
    modes: CavityModeSet,
    emitters: EmitterEnsemble,
    couplings: CouplingMap,
    /// `(q, |Δ_q| > sqrt(Σ_j |g_jq|²))` for every `q ≠ 0`.
    quasi_static: Vec<(i32, bool)>,
}

impl SystemSpec {
    pub fn new(modes: CavityModeSet, emitters: EmitterEnsemble, couplings: CouplingMap) -> Result<Self> {
        match &couplings {
            CouplingMap::Collective(map) => {
                let keys: Vec<i32> = map.keys().copied().collect();
                let qs: Vec<i32> = modes.modes().iter().map(|m| m.q).collect();
                if keys != qs {
                    return Err(Error::Config(format!(
                        "collective couplings given for modes {keys:?}, cavity has {qs:?}"
                    )));
                }
                if map.values().any(|v| !(v.is_finite() && *v >= 0.0)) {
                    return Err(Error::Config("collective couplings must be non-negative reals".into()));
                }
            }
            CouplingMap::PerPair(rows) => {
                if rows.len() != emitters.n() || rows.iter().any(|r| r.len() != modes.len()) {
                    return Err(Error::Config(format!(
                        "per-pair couplings must be {} x {}",
                        emitters.n(),
                        modes.len()
                    )));
                }
            }
        }
        let mut spec = Self { modes, emitters, couplings, quasi_static: Vec::new() };
        spec.quasi_static = (0..spec.modes.len())
            .filter(|&k| k != spec.modes.reference_index())
            .map(|k| (spec.modes.modes()[k].q, spec.modes.detuning(k).abs() > spec.collective_coupling(k)))
            .collect();
        Ok(spec)
    }

    /// Homogeneous ensemble with collective couplings.
    pub fn dicke(modes: CavityModeSet, n: usize, omega_e: f64, gamma: f64, couplings: CouplingMap) -> Result<Self> {
        Self::new(modes, EmitterEnsemble::homogeneous(n, omega_e, gamma)?, couplings)
    }

    pub fn modes(&self) -> &CavityModeSet {
        &self.modes
    }

    pub fn emitters(&self) -> &EmitterEnsemble {
        &self.emitters
    }

    pub fn couplings(&self) -> &CouplingMap {
        &self.couplings
    }

    pub fn n_emitters(&self) -> usize {
        self.emitters.n()
    }

    /// `g_{iq}` for emitter `i` and the mode at position `k`.
    pub fn coupling(&self, i: usize, k: usize) -> Complex64 {
        match &self.couplings {
            CouplingMap::Collective(map) => {
                let q = self.modes.modes()[k].q;
                Complex64::new(map[&q] / (self.emitters.n() as f64).sqrt(), 0.0)
            }
            CouplingMap::PerPair(rows) => rows[i][k],
        }
    }

    /// `Ω_q = sqrt(Σ_j |g_jq|²)` for the mode at position `k`.
    pub fn collective_coupling(&self, k: usize) -> f64 {
        match &self.couplings {
            CouplingMap::Collective(map) => map[&self.modes.modes()[k].q],
            CouplingMap::PerPair(rows) => rows.iter().map(|r| r[k].norm_sqr()).sum::<f64>().sqrt(),
        }
    }

    /// `δ_j = ω₀ − ω_j`.
    pub fn detuning(&self, j: usize) -> f64 {
        self.modes.reference().omega - self.emitters.omega(j)
    }

    /// `Δγ_j = κ₀ − γ_j`.
    pub fn decay_mismatch(&self, j: usize) -> f64 {
        self.modes.reference().kappa - self.emitters.gamma(j)
    }

    pub fn quasi_static_validity(&self) -> &[(i32, bool)] {
        &self.quasi_static
    }

    pub fn is_quasi_static(&self) -> bool {
        self.quasi_static.iter().all(|&(_, ok)| ok)
    }

    /// Collective bright-state couplings `(√N g_q, √N g_q*)` when the ensemble is homogeneous
    /// and every emitter couples identically to each mode.
    pub(crate) fn bright_couplings(&self) -> Result<Vec<Complex64>> {
        if !self.emitters.is_homogeneous() {
            return Err(Error::UnsupportedReduction(
                "Dicke reduction needs identical emitter frequencies and decay rates".into(),
            ));
        }
        match &self.couplings {
            CouplingMap::Collective(map) => Ok(map.values().map(|&v| Complex64::new(v, 0.0)).collect()),
            CouplingMap::PerPair(rows) => {
                let first = &rows[0];
                if rows.iter().any(|r| r != first) {
                    return Err(Error::UnsupportedReduction(
                        "Dicke reduction needs identical couplings for every emitter".into(),
                    ));
                }
                let sqrt_n = (rows.len() as f64).sqrt();
                Ok(first.iter().map(|g| g * sqrt_n).collect())
            }
        }
    }

    pub fn is_dicke(&self) -> bool {
        self.bright_couplings().is_ok()
    }

    /// Copy with every mode and emitter frequency shifted by the same amount.
    pub fn shifted(&self, offset: f64) -> Result<Self> {
        Self::new(self.modes.shifted(offset)?, self.emitters.shifted(offset), self.couplings.clone())
    }

    pub fn with_modes(&self, modes: CavityModeSet) -> Result<Self> {
        Self::new(modes, self.emitters.clone(), self.couplings.clone())
    }

    pub fn with_couplings(&self, couplings: CouplingMap) -> Result<Self> {
        Self::new(self.modes.clone(), self.emitters.clone(), couplings)
    }

    pub fn frame(&self) -> Frame {
        let r = self.modes.reference();
        Frame { omega0: r.omega, kappa0: r.kappa }
    }
}

/// The `q = 0` rotating frame at `ω̃₀ = ω₀ − iκ₀/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    pub omega0: f64,
    pub kappa0: f64,
}

impl Frame {
    pub fn complex_frequency(&self) -> Complex64 {
        Complex64::new(self.omega0, -0.5 * self.kappa0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasisLabel {
    /// Single photon in mode `q`.
    Mode(i32),
    /// Single excitation on emitter `i`.
    Emitter(usize),
    /// Symmetric collective excitation `|X⟩`.
    Collective,
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisLabel::Mode(q) => write!(f, "mode(q={q})"),
            BasisLabel::Emitter(i) => write!(f, "emitter(i={i})"),
            BasisLabel::Collective => write!(f, "X"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DynamicalMatrix {
    entries: Mat<Complex64>,
    frame: Frame,
    basis: Vec<BasisLabel>,
}

/// Arrowhead decomposition of a matrix whose last basis state is `|X⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct Arrowhead {
    /// Mode diagonal `d_q`.
    pub diag: Vec<Complex64>,
    /// `M[q, X]`.
    pub col: Vec<Complex64>,
    /// `M[X, q]`.
    pub row: Vec<Complex64>,
    /// Corner `p`.
    pub corner: Complex64,
}

impl Arrowhead {
    /// Products `M[X,q]·M[q,X]`, equal to `e_q²` for real couplings.
    pub fn weights(&self) -> Vec<Complex64> {
        self.row.iter().zip(&self.col).map(|(r, c)| r * c).collect()
    }

    pub fn scale(&self) -> f64 {
        self.diag
            .iter()
            .chain(&self.col)
            .chain(&self.row)
            .map(|z| z.norm())
            .fold(self.corner.norm(), f64::max)
    }
}

impl DynamicalMatrix {
    pub fn new(entries: Mat<Complex64>, frame: Frame, basis: Vec<BasisLabel>) -> Result<Self> {
        if entries.nrows() != entries.ncols() || entries.nrows() != basis.len() {
            return Err(Error::Config("matrix must be square and match its basis".into()));
        }
        Ok(Self { entries, frame, basis })
    }

    pub fn entries(&self) -> &Mat<Complex64> {
        &self.entries
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn basis(&self) -> &[BasisLabel] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i, j)]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.entries[(i, i)]).sum()
    }

    /// Max absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.entries[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn is_complex_symmetric(&self, tol: f64) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..i).all(|j| (self.entries[(i, j)] - self.entries[(j, i)]).norm() <= tol))
    }

    pub fn arrowhead(&self) -> Result<Arrowhead> {
        let n = self.dim();
        if n < 1 || self.basis[n - 1] != BasisLabel::Collective {
            return Err(Error::NotArrowhead("last basis state must be the collective excitation".into()));
        }
        let m = n - 1;
        for i in 0..m {
            for j in 0..m {
                if i != j && self.entries[(i, j)] != Complex64::new(0.0, 0.0) {
                    return Err(Error::NotArrowhead(format!("entry ({i},{j}) couples two modes")));
                }
            }
        }
        Ok(Arrowhead {
            diag: (0..m).map(|k| self.entries[(k, k)]).collect(),
            col: (0..m).map(|k| self.entries[(k, m)]).collect(),
            row: (0..m).map(|k| self.entries[(m, k)]).collect(),
            corner: self.entries[(m, m)],
        })
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.entries[(i, j)] * v[j]).sum())
            .collect()
    }
}

fn mode_diagonal(spec: &SystemSpec, k: usize) -> Complex64 {
    Complex64::new(spec.modes.detuning(k), -0.5 * spec.modes.bandwidth_mismatch(k))
}

/// `−δ_j + iΔγ_j/2`.
fn emitter_diagonal(spec: &SystemSpec, j: usize) -> Complex64 {
    Complex64::new(-spec.detuning(j), 0.5 * spec.decay_mismatch(j))
}

/// The `(M+N)` single-excitation matrix.
///
/// Basis: modes ascending by `q`, then emitters ascending by `i`. Emitter rows carry
/// `g_{jq}`, mode rows carry `g*_{jq}`.
pub fn build_full_matrix(spec: &SystemSpec) -> DynamicalMatrix {
    let m = spec.modes.len();
    let n = spec.n_emitters();
    let mut a = Mat::<Complex64>::zeros(m + n, m + n);
    for k in 0..m {
        a[(k, k)] = mode_diagonal(spec, k);
    }
    for j in 0..n {
        a[(m + j, m + j)] = emitter_diagonal(spec, j);
        for k in 0..m {
            let g = spec.coupling(j, k);
            a[(m + j, k)] = g;
            a[(k, m + j)] = g.conj();
        }
    }
    let basis = spec
        .modes
        .modes()
        .iter()
        .map(|md| BasisLabel::Mode(md.q))
        .chain((0..n).map(BasisLabel::Emitter))
        .collect();
    DynamicalMatrix { entries: a, frame: spec.frame(), basis }
}

/// The `(M+1)` arrowhead matrix of the Dicke-reduced problem.
///
/// Mode diagonal `d_q = Δ_q − iΔκ_q/2`, arrow `e_q = Ω_q`, corner `p = −δ + iΔγ/2`.
pub fn build_dicke_matrix(spec: &SystemSpec) -> Result<DynamicalMatrix> {
    let bright = spec.bright_couplings()?;
    let m = spec.modes.len();
    let mut a = Mat::<Complex64>::zeros(m + 1, m + 1);
    for (k, e) in bright.iter().enumerate() {
        a[(k, k)] = mode_diagonal(spec, k);
        a[(m, k)] = *e;
        a[(k, m)] = e.conj();
    }
    a[(m, m)] = emitter_diagonal(spec, 0);
    let basis = spec
        .modes
        .modes()
        .iter()
        .map(|md| BasisLabel::Mode(md.q))
        .chain(std::iter::once(BasisLabel::Collective))
        .collect();
    Ok(DynamicalMatrix { entries: a, frame: spec.frame(), basis })
}

/// The 2×2 effective matrix `[[0, Ω₀], [Ω₀, −δ_N − iΔΓ_N]]` on `(α₀, β)`.
pub fn build_effective_two_level(
    spec: &SystemSpec,
    corrections: &crate::adiabatic::AdiabaticCorrections,
) -> Result<DynamicalMatrix> {
    let bright = spec.bright_couplings()?;
    let e0 = bright[spec.modes.reference_index()];
    let mut a = Mat::<Complex64>::zeros(2, 2);
    a[(0, 1)] = e0.conj();
    a[(1, 0)] = e0;
    a[(1, 1)] = Complex64::new(-corrections.delta_n, -corrections.delta_gamma_n);
    Ok(DynamicalMatrix {
        entries: a,
        frame: spec.frame(),
        basis: vec![BasisLabel::Mode(0), BasisLabel::Collective],
    })
}
