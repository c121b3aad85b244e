//! One row of sweep output and its fixed column schema.

use anyhow::Result;
use polariton_core::adiabatic::{effective_parameters, nj_prime_homogeneous, rabi_splitting_from};
use polariton_core::observables::{single_mode_reference, solve_branches, summarize};
use polariton_core::perturbative::{bandwidths_linear_zeta, splitting_linear_zeta, x_correction};
use polariton_core::presets;
use polariton_core::spectra::Route;
use polariton_core::{build_dicke_matrix, SystemSpec};
use serde_json::{Map, Value};

use crate::system::{Family, Params, SystemSource};

/// Bumped whenever columns are added, removed, renamed or reordered.
pub const SCHEMA_VERSION: &str = "polsweep-record/1";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Int(u64),
    Bool(Option<bool>),
    Num(Option<f64>),
}

impl Cell {
    /// CSV text: 17 significant digits for floats, `null` for anything missing.
    pub fn csv(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(Some(b)) => b.to_string(),
            Cell::Num(Some(x)) if x.is_finite() => format!("{x:.16e}"),
            Cell::Num(Some(x)) => format!("{x}"),
            Cell::Bool(None) | Cell::Num(None) => "null".into(),
        }
    }

    pub fn json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Int(i) => Value::from(*i),
            Cell::Bool(b) => b.map_or(Value::Null, Value::Bool),
            Cell::Num(x) => x.and_then(serde_json::Number::from_f64).map_or(Value::Null, Value::Number),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepRecord {
    pub system: String,
    pub params: Params,
    pub thermodynamic_limit: bool,
    pub n: u64,
    pub omega_e: f64,
    pub gamma: f64,
    /// `q:ω:κ:Ω` per mode, `;`-separated.
    pub modes: String,
    pub delta_minus: Option<f64>,
    pub delta_plus: Option<f64>,
    pub quasi_static: bool,
    pub route: String,
    pub lp_present: bool,
    pub up_present: bool,
    pub e_lp: Option<f64>,
    pub e_up: Option<f64>,
    pub omega_r_exact: Option<f64>,
    pub omega_r_eq19: Option<f64>,
    pub omega_r_eq14: Option<f64>,
    pub omega_r_perturbative: Option<f64>,
    pub omega_r_single_mode: f64,
    pub gamma_lp_exact: Option<f64>,
    pub gamma_up_exact: Option<f64>,
    pub gamma_lp_eq20: Option<f64>,
    pub gamma_up_eq20: Option<f64>,
    pub gamma_single_mode: f64,
    pub nj_prime_exact: Option<f64>,
    pub nj_prime_eq15: Option<f64>,
    pub nj_dprime: Option<f64>,
    pub exciton_fraction_lp: Option<f64>,
    pub exciton_fraction_up: Option<f64>,
    pub exciton_fraction_lp_single_mode: Option<f64>,
    /// Photon fractions on `q = −1, 0, +1`.
    pub photon_lp: [Option<f64>; 3],
    pub photon_up: [Option<f64>; 3],
}

impl SweepRecord {
    pub fn fields(&self) -> Vec<(&'static str, Cell)> {
        use Cell::*;
        let p = &self.params;
        vec![
            ("system", Text(self.system.clone())),
            ("omega0", Num(p.omega0)),
            ("fsr", Num(p.fsr)),
            ("zeta", Num(p.zeta)),
            ("f", Num(p.f)),
            ("delta_omega", Num(p.delta_omega)),
            ("delta_kappa", Num(p.delta_kappa)),
            ("epsilon", Num(p.epsilon)),
            ("thermodynamic_limit", Text(if self.thermodynamic_limit { "on" } else { "off" }.into())),
            ("n", Int(self.n)),
            ("omega_e", Num(Some(self.omega_e))),
            ("gamma", Num(Some(self.gamma))),
            ("modes", Text(self.modes.clone())),
            ("delta_minus", Num(self.delta_minus)),
            ("delta_plus", Num(self.delta_plus)),
            ("quasi_static", Bool(Some(self.quasi_static))),
            ("route", Text(self.route.clone())),
            ("lp_present", Bool(Some(self.lp_present))),
            ("up_present", Bool(Some(self.up_present))),
            ("E_LP", Num(self.e_lp)),
            ("E_UP", Num(self.e_up)),
            ("omega_R_exact", Num(self.omega_r_exact)),
            ("omega_R_eq19", Num(self.omega_r_eq19)),
            ("omega_R_eq14", Num(self.omega_r_eq14)),
            ("omega_R_perturbative", Num(self.omega_r_perturbative)),
            ("omega_R_single_mode", Num(Some(self.omega_r_single_mode))),
            ("Gamma_LP_exact", Num(self.gamma_lp_exact)),
            ("Gamma_UP_exact", Num(self.gamma_up_exact)),
            ("Gamma_LP_eq20", Num(self.gamma_lp_eq20)),
            ("Gamma_UP_eq20", Num(self.gamma_up_eq20)),
            ("Gamma_single_mode", Num(Some(self.gamma_single_mode))),
            ("NJ_prime_exact", Num(self.nj_prime_exact)),
            ("NJ_prime_eq15", Num(self.nj_prime_eq15)),
            ("NJ_dprime", Num(self.nj_dprime)),
            ("exciton_fraction_LP", Num(self.exciton_fraction_lp)),
            ("exciton_fraction_UP", Num(self.exciton_fraction_up)),
            ("exciton_fraction_LP_single_mode", Num(self.exciton_fraction_lp_single_mode)),
            ("photon_fraction_LP_qm1", Num(self.photon_lp[0])),
            ("photon_fraction_LP_q0", Num(self.photon_lp[1])),
            ("photon_fraction_LP_qp1", Num(self.photon_lp[2])),
            ("photon_fraction_UP_qm1", Num(self.photon_up[0])),
            ("photon_fraction_UP_q0", Num(self.photon_up[1])),
            ("photon_fraction_UP_qp1", Num(self.photon_up[2])),
        ]
    }

    pub fn columns() -> Vec<&'static str> {
        SweepRecord::default().fields().into_iter().map(|(n, _)| n).collect()
    }

    pub fn csv_row(&self) -> Vec<String> {
        self.fields().iter().map(|(_, c)| c.csv()).collect()
    }

    pub fn json(&self) -> Value {
        Value::Object(self.fields().into_iter().map(|(n, c)| (n.to_string(), c.json())).collect::<Map<_, _>>())
    }
}

fn mode_string(spec: &SystemSpec) -> String {
    spec.modes()
        .modes()
        .iter()
        .enumerate()
        .map(|(k, m)| format!("{}:{}:{}:{}", m.q, m.omega, m.kappa, spec.collective_coupling(k)))
        .collect::<Vec<_>>()
        .join(";")
}

/// Solves one grid point. Observables that do not apply to the system are `None`.
pub fn evaluate(source: &SystemSource, point: &Params, thermodynamic_limit: bool) -> Result<SweepRecord> {
    let family = source.family()?;
    let (spec, params) = source.build(point)?;
    let (branches, route) = solve_branches(&spec)?;
    let s = summarize(&branches, &spec);
    let modes = spec.modes();
    let r = modes.reference_index();
    let omega0 = spec.collective_coupling(r);
    let detuning = |q: i32| modes.index_of(q).map(|k| modes.detuning(k));

    let corr = effective_parameters(&spec, thermodynamic_limit).ok();
    let omega_r_eq14 = corr.map(|c| rabi_splitting_from(c.delta_n, c.delta_gamma_n, omega0));
    let omega_r_perturbative = build_dicke_matrix(&spec).ok().and_then(|m| x_correction(&m).ok()).map(|x| x.omega_r);

    let (mut omega_r_eq19, mut gamma_lp_eq20, mut gamma_up_eq20, mut nj_prime_eq15) = (None, None, None, None);
    match family {
        Family::Fig3(v) => {
            let (kappa, _, _) = v.parameters();
            let (o, d, z) = (params.omega0.unwrap(), params.fsr.unwrap(), params.zeta.unwrap());
            omega_r_eq19 = Some(splitting_linear_zeta(o, d, z));
            let (lp, up) = bandwidths_linear_zeta(o, d, z, kappa);
            gamma_lp_eq20 = Some(lp);
            gamma_up_eq20 = Some(up);
        }
        Family::Fig2b => {
            let (_, printed) = nj_prime_homogeneous(
                presets::FIG2_OMEGA0,
                params.f.unwrap(),
                presets::FIG2_FSR,
                params.delta_kappa.unwrap(),
            )?;
            nj_prime_eq15 = Some(printed);
        }
        _ => {}
    }

    let single = single_mode_reference(&spec).ok().and_then(|s1| {
        let (b, _) = solve_branches(&s1).ok()?;
        summarize(&b, &s1).exciton_fraction_lp
    });
    let photon = |fr: &Option<std::collections::BTreeMap<i32, f64>>| {
        [-1, 0, 1].map(|q| fr.as_ref().and_then(|m| m.get(&q).copied()))
    };

    Ok(SweepRecord {
        system: source.name(),
        params,
        thermodynamic_limit,
        n: spec.n_emitters() as u64,
        omega_e: spec.emitters().omega(0),
        gamma: spec.emitters().gamma(0),
        modes: mode_string(&spec),
        delta_minus: detuning(-1),
        delta_plus: detuning(1),
        quasi_static: spec.is_quasi_static(),
        route: match route {
            Route::Secular => "secular",
            Route::DenseFallback => "dense_fallback",
        }
        .into(),
        lp_present: s.lp_present,
        up_present: s.up_present,
        e_lp: s.e_lp,
        e_up: s.e_up,
        omega_r_exact: s.omega_r,
        omega_r_eq19,
        omega_r_eq14,
        omega_r_perturbative,
        omega_r_single_mode: s.omega_r_single_mode,
        gamma_lp_exact: s.gamma_lp,
        gamma_up_exact: s.gamma_up,
        gamma_lp_eq20,
        gamma_up_eq20,
        gamma_single_mode: s.gamma_single_mode,
        nj_prime_exact: corr.map(|c| c.nj_prime),
        nj_prime_eq15,
        nj_dprime: corr.map(|c| c.nj_dprime),
        exciton_fraction_lp: s.exciton_fraction_lp,
        exciton_fraction_up: s.exciton_fraction_up,
        exciton_fraction_lp_single_mode: single,
        photon_lp: photon(&s.photon_fractions_lp),
        photon_up: photon(&s.photon_fractions_up),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use polariton_core::presets::Preset;

    #[test]
    fn columns_are_unique_and_stable() {
        let cols = SweepRecord::columns();
        let mut sorted = cols.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), cols.len());
        assert_eq!(cols.len(), 43);
        assert_eq!(cols[0], "system");
        assert_eq!(cols[21], "omega_R_exact");
    }

    #[test]
    fn missing_values_are_null() {
        let row = SweepRecord::default().csv_row();
        assert_eq!(row[1], "null");
        assert_eq!(Cell::Num(Some(0.0)).csv(), "0.0000000000000000e0");
        assert_eq!(Cell::Num(Some(0.1)).csv().parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn fig2b_origin_has_zero_two_body_loss() {
        let rec = evaluate(&SystemSource::preset(Preset::Fig2b), &Params::default(), true).unwrap();
        assert_eq!(rec.nj_prime_exact, Some(0.0));
        assert_eq!(rec.nj_prime_eq15, Some(0.0));
        assert!(rec.omega_r_eq19.is_none());
    }

    #[test]
    fn fig4_headline_point() {
        let p = Params { omega0: Some(0.35), ..Default::default() };
        let rec = evaluate(&SystemSource::preset(Preset::Fig4), &p, true).unwrap();
        assert!(rec.exciton_fraction_lp.unwrap() < 0.5);
        assert!(rec.exciton_fraction_lp_single_mode.unwrap() > rec.exciton_fraction_lp.unwrap());
        assert!(rec.nj_prime_eq15.is_none());
    }

    #[test]
    fn fig3_closed_forms_present() {
        let p = Params { omega0: Some(0.2), fsr: Some(0.8), ..Default::default() };
        let rec = evaluate(&"fig3".parse::<Preset>().map(SystemSource::preset).unwrap(), &p, true).unwrap();
        let (exact, closed) = (rec.omega_r_exact.unwrap(), rec.omega_r_eq19.unwrap());
        assert!(exact < 0.4 && (exact - closed).abs() < 0.01);
        assert!((rec.gamma_lp_eq20.unwrap() + rec.gamma_up_eq20.unwrap() - 0.3).abs() < 1e-15);
        assert_eq!(rec.params.zeta, Some(-0.1));
    }
}
