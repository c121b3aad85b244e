//! Sweeps, figure datasets and the validation suite behind the `polsweep` binary.

pub mod config;
pub mod figures;
pub mod output;
pub mod record;
pub mod system;
pub mod validate;

use anyhow::{Context, Result};
use polariton_core::spectra::{eig_arrowhead, eig_dense, match_eigenvalues};
use polariton_core::build_dicke_matrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::record::{evaluate, SweepRecord};
use crate::system::Params;

/// Largest eigenvalue gap between the two solvers tolerated at a grid point, relative to
/// `max(1, ‖M‖∞)`.
pub const POINT_SOLVER_TOL: f64 = 1e-10;

fn pool(threads: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        b = b.num_threads(n);
    }
    b.build().context("cannot start worker pool")
}

fn each_point<T: Send>(cfg: &RunConfig, threads: Option<usize>, f: impl Fn(&Params) -> Result<T> + Sync) -> Result<Vec<T>> {
    let points = cfg.sweep.points();
    // Indexed parallel collect keeps grid order.
    pool(threads)?.install(|| points.par_iter().map(&f).collect())
}

/// Evaluates every grid point on a pool of `threads` workers (default: available
/// parallelism). Records come back in grid order.
pub fn run_sweep(cfg: &RunConfig, threads: Option<usize>) -> Result<Vec<SweepRecord>> {
    let tl = cfg.thermodynamic_limit.is_on();
    each_point(cfg, threads, |p| evaluate(&cfg.system, p, tl).with_context(|| format!("at grid point {p:?}")))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointCheck {
    pub index: usize,
    pub solver_gap: f64,
    pub trace_gap: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointValidation {
    pub passed: bool,
    pub tolerance: f64,
    pub worst_solver_gap: f64,
    pub worst_trace_gap: f64,
    pub failures: Vec<PointCheck>,
}

/// Per-point cross-check used when a run has `validation = "on"`: the secular and dense
/// solvers must agree, and the eigenvalues must sum to the matrix trace.
pub fn validate_points(cfg: &RunConfig, threads: Option<usize>) -> Result<PointValidation> {
    let checks = each_point(cfg, threads, |p| {
        let (spec, _) = cfg.system.build(p)?;
        let m = build_dicke_matrix(&spec)?;
        let dense: Vec<_> = eig_dense(&m)?.iter().map(|e| e.lambda).collect();
        let fast: Vec<_> = eig_arrowhead(&m)?.pairs.iter().map(|e| e.lambda).collect();
        let perm = match_eigenvalues(&fast, &dense);
        let solver_gap = fast.iter().enumerate().map(|(i, z)| (z - dense[perm[i]]).norm()).fold(0.0, f64::max);
        let trace_gap = (dense.iter().sum::<polariton_core::Complex64>() - m.trace()).norm();
        let scale = m.norm_inf().max(1.0);
        Ok((solver_gap / scale, trace_gap / scale))
    })?;
    let mut out = PointValidation {
        passed: true,
        tolerance: POINT_SOLVER_TOL,
        worst_solver_gap: 0.0,
        worst_trace_gap: 0.0,
        failures: Vec::new(),
    };
    for (index, (solver_gap, trace_gap)) in checks.into_iter().enumerate() {
        out.worst_solver_gap = out.worst_solver_gap.max(solver_gap);
        out.worst_trace_gap = out.worst_trace_gap.max(trace_gap);
        let passed = solver_gap <= POINT_SOLVER_TOL && trace_gap <= POINT_SOLVER_TOL;
        if !passed {
            out.passed = false;
            out.failures.push(PointCheck { index, solver_gap, trace_gap, passed });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::figures::Figure;

    #[test]
    fn thread_count_does_not_change_records() {
        let cfg = Figure::Fig4.config();
        assert_eq!(run_sweep(&cfg, Some(1)).unwrap(), run_sweep(&cfg, Some(4)).unwrap());
    }

    #[test]
    fn point_validation_passes_on_fig4() {
        let v = validate_points(&Figure::Fig4.config(), Some(2)).unwrap();
        assert!(v.passed, "{v:?}");
    }
}
