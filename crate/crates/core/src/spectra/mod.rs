//! Eigenpairs of dynamical matrices and their physical interpretation.

mod arrowhead;
mod branches;
mod companion;
mod dense;

pub use arrowhead::{eig_arrowhead, ArrowheadEigen, Route};
pub use branches::{
    bandwidth_sign_self_test, classify_branches, match_eigenvalues, to_physical, to_physical_with_sign,
    track_branches, BranchLabel, PolaritonBranch, BANDWIDTH_SIGN, DARK_PHOTON_THRESHOLD, LABEL_THRESHOLD,
};
pub use companion::{monic_polynomial_roots, polynomial_from_roots};
pub use dense::{eig_dense, eig_dense_entries};

use num_complex::Complex64;
use serde::Serialize;

use crate::model::DynamicalMatrix;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplexEigenpair {
    /// Frame-relative complex frequency.
    pub lambda: Complex64,
    /// Unit-norm amplitudes in the matrix basis.
    pub vector: Vec<Complex64>,
}

impl ComplexEigenpair {
    /// Builds a pair from an unnormalized vector, applying the phase convention.
    pub fn new(lambda: Complex64, vector: Vec<Complex64>) -> Self {
        Self { lambda, vector: normalize_phase(vector) }
    }

    /// `‖M v − λ v‖`.
    pub fn residual(&self, m: &DynamicalMatrix) -> f64 {
        m.apply(&self.vector)
            .iter()
            .zip(&self.vector)
            .map(|(mv, v)| (mv - self.lambda * v).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Unit Euclidean norm, with the largest-magnitude component rotated onto the positive real axis.
///
/// Components within a relative `1e-12` of the largest count as ties and the first one wins,
/// so the choice does not flip on rounding noise.
pub fn normalize_phase(mut v: Vec<Complex64>) -> Vec<Complex64> {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return v;
    }
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let pivot = v.iter().find(|z| z.norm() >= max * (1.0 - 1e-12)).copied().unwrap_or_default();
    let phase = pivot.conj() / pivot.norm();
    for z in &mut v {
        *z = *z * phase / norm;
    }
    v
}

pub(crate) fn sort_by_real(pairs: &mut [ComplexEigenpair]) {
    pairs.sort_by(|a, b| {
        a.lambda
            .re
            .total_cmp(&b.lambda.re)
            .then(a.lambda.im.total_cmp(&b.lambda.im))
    });
}
