//! Polynomial roots as eigenvalues of the companion matrix.
//!
//! The companion matrix is already upper Hessenberg, so a complex single-shift QR
//! iteration with Givens rotations and Wilkinson shifts is all that is needed. This
//! path is kept separate from the dense LAPACK-style solver so the two routes in
//! [`super::eig_arrowhead`] and [`super::eig_dense`] stay independent.

use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_ITER_PER_ROOT: usize = 60;

/// Roots of `Σ_k coeffs[k] λ^k` (coefficients from low to high degree).
pub fn monic_polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let degree = coeffs
        .iter()
        .rposition(|c| *c != Complex64::default())
        .ok_or_else(|| Error::Solver { iterations: 0, detail: "zero polynomial".into() })?;
    if degree == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[degree];
    // Upper Hessenberg companion: first row −a_{n−1} … −a_0, ones on the subdiagonal.
    let n = degree;
    let mut h = vec![vec![Complex64::default(); n]; n];
    for j in 0..n {
        h[0][j] = -coeffs[n - 1 - j] / lead;
    }
    for i in 1..n {
        h[i][i - 1] = Complex64::new(1.0, 0.0);
    }
    hessenberg_eigenvalues(h)
}

/// Coefficients (low to high) of `Π_k (λ − r_k)`.
pub fn polynomial_from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut poly = vec![Complex64::new(1.0, 0.0)];
    for r in roots {
        poly = poly_mul(&poly, &[-r, Complex64::new(1.0, 0.0)]);
    }
    poly
}

pub(crate) fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::default(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub(crate) fn poly_add_assign(acc: &mut Vec<Complex64>, p: &[Complex64], scale: Complex64) {
    if acc.len() < p.len() {
        acc.resize(p.len(), Complex64::default());
    }
    for (a, x) in acc.iter_mut().zip(p) {
        *a += scale * x;
    }
}

fn hessenberg_eigenvalues(mut h: Vec<Vec<Complex64>>) -> Result<Vec<Complex64>> {
    let n = h.len();
    let mut eig = vec![Complex64::default(); n];
    let mut hi = n - 1;
    let mut its = 0usize;
    let mut total = 0usize;
    loop {
        if hi == 0 {
            eig[0] = h[0][0];
            break;
        }
        let mut l = hi;
        while l > 0 {
            let s = h[l - 1][l - 1].norm() + h[l][l].norm();
            let s = if s == 0.0 { 1.0 } else { s };
            if h[l][l - 1].norm() <= f64::EPSILON * s {
                h[l][l - 1] = Complex64::default();
                break;
            }
            l -= 1;
        }
        if l == hi {
            eig[hi] = h[hi][hi];
            hi -= 1;
            its = 0;
            continue;
        }
        if its >= MAX_ITER_PER_ROOT {
            return Err(Error::Solver {
                iterations: total,
                detail: format!("companion QR stalled with {} roots unresolved", hi + 1),
            });
        }
        its += 1;
        total += 1;

        let mu = if its % 10 == 0 {
            // Exceptional shift to break cycles.
            h[hi][hi] + Complex64::new(0.75 * h[hi][hi - 1].norm(), 0.25 * h[hi][hi - 1].norm())
        } else {
            wilkinson_shift(h[hi - 1][hi - 1], h[hi - 1][hi], h[hi][hi - 1], h[hi][hi])
        };

        for k in l..=hi {
            h[k][k] -= mu;
        }
        let mut rotations = Vec::with_capacity(hi - l);
        for k in l..hi {
            let x = h[k][k];
            let y = h[k + 1][k];
            let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (c, s) = if r == 0.0 {
                (Complex64::new(1.0, 0.0), Complex64::default())
            } else {
                (x / r, y / r)
            };
            for j in k..=hi {
                let a = h[k][j];
                let b = h[k + 1][j];
                h[k][j] = c.conj() * a + s.conj() * b;
                h[k + 1][j] = -s * a + c * b;
            }
            rotations.push((c, s));
        }
        for (offset, (c, s)) in rotations.into_iter().enumerate() {
            let k = l + offset;
            for i in l..=(k + 1).min(hi) {
                let a = h[i][k];
                let b = h[i][k + 1];
                h[i][k] = a * c + b * s;
                h[i][k + 1] = -a * s.conj() + b * c.conj();
            }
        }
        for k in l..=hi {
            h[k][k] += mu;
        }
    }
    if eig.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::Solver { iterations: total, detail: "non-finite root".into() });
    }
    Ok(eig)
}

/// Eigenvalue of `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half_tr = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (half_tr * half_tr - det).sqrt();
    let m1 = half_tr + disc;
    let m2 = half_tr - disc;
    if (m1 - d).norm() <= (m2 - d).norm() {
        m1
    } else {
        m2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_same_roots(mut got: Vec<Complex64>, want: &[Complex64], tol: f64) {
        assert_eq!(got.len(), want.len());
        for w in want {
            let (k, d) = got
                .iter()
                .enumerate()
                .map(|(k, g)| (k, (g - w).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            assert!(d < tol, "root {w} missing, closest off by {d}");
            got.swap_remove(k);
        }
    }

    #[test]
    fn quadratic() {
        // λ² − 0.1225 = 0.
        let roots = monic_polynomial_roots(&[c(-0.1225, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_same_roots(roots, &[c(0.35, 0.0), c(-0.35, 0.0)], 1e-14);
    }

    #[test]
    fn non_monic_leading_coefficient() {
        let roots = monic_polynomial_roots(&[c(2.0, 0.0), c(-2.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_same_roots(roots, &[c(1.0, 0.0)], 1e-15);
    }

    #[test]
    fn random_complex_roots_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for degree in 1..=8 {
            for _ in 0..20 {
                let roots: Vec<Complex64> =
                    (0..degree).map(|_| c(rng.gen_range(-2.0..2.0), rng.gen_range(-0.3..0.3))).collect();
                let poly = polynomial_from_roots(&roots);
                let got = monic_polynomial_roots(&poly).unwrap();
                assert_same_roots(got, &roots, 1e-7);
            }
        }
    }

    #[test]
    fn repeated_root() {
        let r = c(0.3, -0.1);
        let got = monic_polynomial_roots(&polynomial_from_roots(&[r, r, c(-1.0, 0.0)])).unwrap();
        assert_same_roots(got, &[r, r, c(-1.0, 0.0)], 1e-6);
    }

    #[test]
    fn zero_polynomial_is_an_error() {
        assert!(monic_polynomial_roots(&[c(0.0, 0.0); 3]).is_err());
    }
}
