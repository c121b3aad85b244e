use faer::Mat;
use num_complex::Complex64;

use super::{sort_by_real, ComplexEigenpair};
use crate::error::{Error, Result};
use crate::model::DynamicalMatrix;

/// All eigenpairs of a dense complex matrix, sorted by real part.
pub fn eig_dense(m: &DynamicalMatrix) -> Result<Vec<ComplexEigenpair>> {
    eig_dense_entries(m.entries())
}

pub fn eig_dense_entries(a: &Mat<Complex64>) -> Result<Vec<ComplexEigenpair>> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::Config("eigensolver needs a square matrix".into()));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    if (0..n).any(|i| (0..n).any(|j| !(a[(i, j)].re.is_finite() && a[(i, j)].im.is_finite()))) {
        return Err(Error::Solver { iterations: 0, detail: "matrix has non-finite entries".into() });
    }
    let evd = a.eigen().map_err(|e| Error::Solver {
        iterations: 30 * n,
        detail: format!("{e:?}"),
    })?;
    let s = evd.S().column_vector();
    let u = evd.U();
    let mut pairs: Vec<ComplexEigenpair> = (0..n)
        .map(|k| ComplexEigenpair::new(s[k], (0..n).map(|i| u[(i, k)]).collect()))
        .collect();
    if pairs.iter().any(|p| !(p.lambda.re.is_finite() && p.lambda.im.is_finite())) {
        return Err(Error::Solver { iterations: 30 * n, detail: "non-finite eigenvalue".into() });
    }
    sort_by_real(&mut pairs);
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_dicke_matrix, BasisLabel, CavityMode, CavityModeSet, CouplingMap, Frame, SystemSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn wrap(a: Mat<Complex64>) -> DynamicalMatrix {
        let n = a.nrows();
        DynamicalMatrix::new(a, Frame { omega0: 2.0, kappa0: 0.1 }, (0..n).map(BasisLabel::Emitter).collect())
            .unwrap()
    }

    #[test]
    fn diagonal_matrix_returns_its_diagonal() {
        let diag = [c(-1.0, 0.02), c(0.0, 0.0), c(1.0, -0.05), c(0.01, -0.1)];
        let a = Mat::from_fn(4, 4, |i, j| if i == j { diag[i] } else { c(0.0, 0.0) });
        let pairs = eig_dense(&wrap(a)).unwrap();
        let got: Vec<_> = pairs.iter().map(|p| p.lambda).collect();
        let want = [diag[0], diag[1], diag[3], diag[2]];
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).norm() < 1e-15);
        }
    }

    #[test]
    fn single_mode_resonant_pair() {
        let modes = CavityModeSet::new(vec![CavityMode { q: 0, omega: 2.0, kappa: 0.1 }]).unwrap();
        let spec = SystemSpec::dicke(modes, 1, 2.0, 0.1, CouplingMap::collective([(0, 0.35)])).unwrap();
        let pairs = eig_dense(&build_dicke_matrix(&spec).unwrap()).unwrap();
        assert!((pairs[0].lambda - c(-0.35, 0.0)).norm() < 1e-14);
        assert!((pairs[1].lambda - c(0.35, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn random_matrix_trace_and_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let a = Mat::from_fn(6, 6, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let m = wrap(a);
            let pairs = eig_dense(&m).unwrap();
            let sum: Complex64 = pairs.iter().map(|p| p.lambda).sum();
            assert!((sum - m.trace()).norm() < 1e-12);
            for p in &pairs {
                assert!(p.residual(&m) <= 1e-9 * m.norm_inf());
                let n: f64 = p.vector.iter().map(|z| z.norm_sqr()).sum();
                assert!((n - 1.0).abs() < 1e-12);
            }
            assert!(pairs.windows(2).all(|w| w[0].lambda.re <= w[1].lambda.re));
        }
    }

    #[test]
    fn non_finite_input_is_a_solver_error() {
        let a = Mat::from_fn(2, 2, |i, j| if i == j { c(f64::NAN, 0.0) } else { c(0.0, 0.0) });
        assert!(matches!(eig_dense(&wrap(a)), Err(Error::Solver { .. })));
    }
}
