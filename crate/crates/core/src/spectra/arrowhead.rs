use num_complex::Complex64;
use serde::Serialize;

use super::companion::{monic_polynomial_roots, poly_add_assign, poly_mul};
use super::dense::eig_dense;
use super::{sort_by_real, ComplexEigenpair};
use crate::error::Result;
use crate::model::{Arrowhead, DynamicalMatrix};

/// Which path produced the eigenpairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Secular,
    /// Two coupled poles coincide, or an arrow entry is one-sided; the dense solver was used.
    DenseFallback,
}

#[derive(Debug, Clone)]
pub struct ArrowheadEigen {
    pub pairs: Vec<ComplexEigenpair>,
    pub route: Route,
    /// Mode positions whose arrow entries vanish; their eigenvalue is the bare `d_q`.
    pub deflated: Vec<usize>,
}

const NEWTON_STEPS: usize = 2;
const EXTRA_NEWTON_STEPS: usize = 6;

/// Eigenpairs of an arrowhead matrix from the roots of its secular function.
///
/// Uncoupled modes are deflated. The remaining poles define
/// `Φ(λ) = p − λ − Σ_k u_k/(d_k − λ)` with `u_k = M[X,k]·M[k,X]`; clearing denominators
/// gives a degree-(k+1) polynomial whose roots come from the companion matrix and are
/// then polished by Newton steps on `Φ`. Eigenvectors follow from row `k` of
/// `(M − λ)v = 0`: `v_k = M[k,X]·β/(λ − d_k)`.
pub fn eig_arrowhead(m: &DynamicalMatrix) -> Result<ArrowheadEigen> {
    let arrow = m.arrowhead()?;
    let n_modes = arrow.diag.len();
    let scale = arrow.scale().max(f64::MIN_POSITIVE);
    let tiny = 1e-15 * scale;

    let mut active = Vec::new();
    let mut deflated = Vec::new();
    for k in 0..n_modes {
        let b_zero = arrow.col[k].norm() <= tiny;
        let r_zero = arrow.row[k].norm() <= tiny;
        match (b_zero, r_zero) {
            (true, true) => deflated.push(k),
            (false, false) => active.push(k),
            _ => return dense_fallback(m, deflated),
        }
    }
    for (a, &k) in active.iter().enumerate() {
        for &l in &active[a + 1..] {
            if (arrow.diag[k] - arrow.diag[l]).norm() <= 1e-12 * scale {
                return dense_fallback(m, deflated);
            }
        }
    }

    let sub = Arrowhead {
        diag: active.iter().map(|&k| arrow.diag[k]).collect(),
        col: active.iter().map(|&k| arrow.col[k]).collect(),
        row: active.iter().map(|&k| arrow.row[k]).collect(),
        corner: arrow.corner,
    };
    let roots = monic_polynomial_roots(&secular_polynomial(&sub))?;

    let dim = n_modes + 1;
    let mut pairs = Vec::with_capacity(dim);
    for root in roots {
        let lambda = polish(&sub, root, scale);
        let mut v = vec![Complex64::default(); dim];
        v[n_modes] = Complex64::new(1.0, 0.0);
        for &k in &active {
            v[k] = arrow.col[k] / (lambda - arrow.diag[k]);
        }
        pairs.push(ComplexEigenpair::new(lambda, v));
    }
    for &k in &deflated {
        let mut v = vec![Complex64::default(); dim];
        v[k] = Complex64::new(1.0, 0.0);
        pairs.push(ComplexEigenpair::new(arrow.diag[k], v));
    }
    sort_by_real(&mut pairs);
    Ok(ArrowheadEigen { pairs, route: Route::Secular, deflated })
}

fn dense_fallback(m: &DynamicalMatrix, deflated: Vec<usize>) -> Result<ArrowheadEigen> {
    Ok(ArrowheadEigen { pairs: eig_dense(m)?, route: Route::DenseFallback, deflated })
}

/// `(p − λ)Π(d_k − λ) − Σ_k u_k Π_{l≠k}(d_l − λ)`, low to high degree.
pub(crate) fn secular_polynomial(a: &Arrowhead) -> Vec<Complex64> {
    let minus_one = Complex64::new(-1.0, 0.0);
    let u = a.weights();
    let factor = |d: Complex64| [d, minus_one];
    let mut all = vec![Complex64::new(1.0, 0.0)];
    for &d in &a.diag {
        all = poly_mul(&all, &factor(d));
    }
    let mut q = poly_mul(&all, &factor(a.corner));
    for k in 0..a.diag.len() {
        let mut partial = vec![Complex64::new(1.0, 0.0)];
        for (l, &d) in a.diag.iter().enumerate() {
            if l != k {
                partial = poly_mul(&partial, &factor(d));
            }
        }
        poly_add_assign(&mut q, &partial, -u[k]);
    }
    q
}

pub(crate) fn secular(a: &Arrowhead, lambda: Complex64) -> (Complex64, Complex64) {
    let mut phi = a.corner - lambda;
    let mut dphi = Complex64::new(-1.0, 0.0);
    for (d, (r, c)) in a.diag.iter().zip(a.row.iter().zip(&a.col)) {
        let inv = 1.0 / (d - lambda);
        let u = r * c;
        phi -= u * inv;
        dphi -= u * inv * inv;
    }
    (phi, dphi)
}

fn polish(a: &Arrowhead, mut lambda: Complex64, scale: f64) -> Complex64 {
    let (mut phi, mut dphi) = secular(a, lambda);
    for step in 0..NEWTON_STEPS + EXTRA_NEWTON_STEPS {
        if step >= NEWTON_STEPS && phi.norm() <= 1e-13 * scale.max(lambda.norm()) {
            break;
        }
        if dphi.norm() == 0.0 || !phi.is_finite() {
            break;
        }
        let next = lambda - phi / dphi;
        let (p2, d2) = secular(a, next);
        if !(p2.is_finite() && p2.norm() <= phi.norm()) {
            break;
        }
        lambda = next;
        phi = p2;
        dphi = d2;
    }
    lambda
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_dicke_matrix, CavityModeSet, CouplingMap, SystemSpec};
    use crate::presets;
    use crate::spectra::{eig_dense, match_eigenvalues};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn max_mismatch(a: &[ComplexEigenpair], b: &[ComplexEigenpair]) -> f64 {
        let la: Vec<_> = a.iter().map(|p| p.lambda).collect();
        let lb: Vec<_> = b.iter().map(|p| p.lambda).collect();
        let perm = match_eigenvalues(&la, &lb);
        la.iter().zip(perm).map(|(x, j)| (x - lb[j]).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn uncoupled_roots_are_the_diagonal() {
        let spec = presets::fig4(0.3)
            .unwrap()
            .with_couplings(CouplingMap::collective([(-1, 0.0), (0, 0.0), (1, 0.0)]))
            .unwrap();
        let m = build_dicke_matrix(&spec).unwrap();
        let out = eig_arrowhead(&m).unwrap();
        assert_eq!(out.deflated, vec![0, 1, 2]);
        let arrow = m.arrowhead().unwrap();
        let mut want: Vec<Complex64> = arrow.diag.clone();
        want.push(arrow.corner);
        for w in want {
            assert!(out.pairs.iter().any(|p| p.lambda == w));
        }
    }

    #[test]
    fn single_mode_limit_reduces_to_quadratic() {
        let spec = SystemSpec::dicke(
            CavityModeSet::three_mode(2.0, 1.0, 0.1, -0.1).unwrap(),
            1,
            2.0,
            0.1,
            CouplingMap::collective([(-1, 0.0), (0, 0.35), (1, 0.0)]),
        )
        .unwrap();
        let out = eig_arrowhead(&build_dicke_matrix(&spec).unwrap()).unwrap();
        assert_eq!(out.route, Route::Secular);
        let lams: Vec<_> = out.pairs.iter().map(|p| p.lambda).collect();
        assert!(lams.iter().any(|l| (l - c(-0.35, 0.0)).norm() < 1e-14));
        assert!(lams.iter().any(|l| (l - c(0.35, 0.0)).norm() < 1e-14));
    }

    #[test]
    fn fig4_matches_dense() {
        let m = build_dicke_matrix(&presets::fig4(0.3).unwrap()).unwrap();
        let fast = eig_arrowhead(&m).unwrap();
        let dense = eig_dense(&m).unwrap();
        assert!(max_mismatch(&fast.pairs, &dense) < 1e-10);
        let arrow = m.arrowhead().unwrap();
        for p in &fast.pairs {
            assert!(p.residual(&m) <= 1e-9 * m.norm_inf());
            let (phi, _) = secular(&arrow, p.lambda);
            let s = arrow.scale().max(p.lambda.norm());
            assert!(phi.norm() <= 1e-9 * s);
        }
    }

    #[test]
    fn degenerate_poles_fall_back_to_dense() {
        // Two side modes at the same energy and bandwidth.
        let modes = CavityModeSet::linear_bandwidth(&[(-1, 3.0), (0, 2.0), (1, 3.0)], 0.1, 0.0).unwrap();
        let spec =
            SystemSpec::dicke(modes, 1, 2.0, 0.1, CouplingMap::collective([(-1, 0.2), (0, 0.3), (1, 0.2)])).unwrap();
        let m = build_dicke_matrix(&spec).unwrap();
        let out = eig_arrowhead(&m).unwrap();
        assert_eq!(out.route, Route::DenseFallback);
        assert!(max_mismatch(&out.pairs, &eig_dense(&m).unwrap()) < 1e-12);
    }

    #[test]
    fn polynomial_matches_secular_function_off_poles() {
        let m = build_dicke_matrix(&presets::fig4(0.2).unwrap()).unwrap();
        let a = m.arrowhead().unwrap();
        let q = secular_polynomial(&a);
        let lambda = c(0.123, -0.045);
        let qv: Complex64 = q.iter().rev().fold(c(0.0, 0.0), |acc, k| acc * lambda + k);
        let prod: Complex64 = a.diag.iter().map(|d| d - lambda).product();
        let (phi, _) = secular(&a, lambda);
        assert!((qv - phi * prod).norm() < 1e-14);
    }
}
