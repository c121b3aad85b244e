//! Low-finesse corrections for the three-mode arrowhead problem.
//!
//! The polariton pair of the single-mode problem, `λ± = p/2 ± √(p²/4 + e₀²)`, is shifted
//! by one Newton step on the secular polynomial: `x± = Q(λ±)/P(λ±)`, where `Q` is the
//! secular function with its denominators cleared and `P = −Q′`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{BasisLabel, DynamicalMatrix, Frame};
use crate::spectra::{eig_dense, BANDWIDTH_SIGN};

/// Entries of the `(3+1)` arrowhead matrix. Couplings enter only as the products
/// `e_q² = M[X,q]·M[q,X]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThreeModeArrow {
    pub d_minus: Complex64,
    pub d_plus: Complex64,
    pub e0_sq: Complex64,
    pub e_minus_sq: Complex64,
    pub e_plus_sq: Complex64,
    pub p: Complex64,
}

impl ThreeModeArrow {
    pub fn from_matrix(m: &DynamicalMatrix) -> Result<Self> {
        let expected = [BasisLabel::Mode(-1), BasisLabel::Mode(0), BasisLabel::Mode(1), BasisLabel::Collective];
        if m.basis() != expected {
            return Err(Error::NotArrowhead(format!(
                "expected modes q = -1, 0, +1 followed by X, got {:?}",
                m.basis()
            )));
        }
        let a = m.arrowhead()?;
        if a.diag[1] != Complex64::default() {
            return Err(Error::NotArrowhead("reference-mode diagonal must vanish".into()));
        }
        let u = a.weights();
        Ok(Self { d_minus: a.diag[0], d_plus: a.diag[2], e0_sq: u[1], e_minus_sq: u[0], e_plus_sq: u[2], p: a.corner })
    }

    fn scale(&self) -> f64 {
        [self.d_minus, self.d_plus, self.p]
            .iter()
            .map(|z| z.norm())
            .chain([self.e0_sq, self.e_minus_sq, self.e_plus_sq].iter().map(|z| z.norm().sqrt()))
            .fold(0.0, f64::max)
    }

    /// `Φ(λ) = p − λ + e₀²/λ − e₋₁²/(d₋₁ − λ) − e₊₁²/(d₊₁ − λ)`.
    pub fn phi(&self, lambda: Complex64) -> Result<Complex64> {
        let tol = 1e-14 * self.scale().max(lambda.norm()).max(f64::MIN_POSITIVE);
        for pole in [Complex64::default(), self.d_minus, self.d_plus] {
            if (lambda - pole).norm() <= tol {
                return Err(Error::Pole { lambda });
            }
        }
        Ok(self.p - lambda + self.e0_sq / lambda
            - self.e_minus_sq / (self.d_minus - lambda)
            - self.e_plus_sq / (self.d_plus - lambda))
    }

    /// `P(λ)` in its full form, `p` terms included.
    pub fn p_polynomial(&self, lambda: Complex64) -> Complex64 {
        let (dm, dp, p) = (self.d_minus, self.d_plus, self.p);
        let (e0, em, ep) = (self.e0_sq, self.e_minus_sq, self.e_plus_sq);
        dp * (e0 + em) + dm * (e0 + ep) - dm * dp * p
            - 2.0 * (e0 + em + ep - dp * p - dm * p - dm * dp) * lambda
            - 3.0 * (dm + dp + p) * lambda * lambda
            + 4.0 * lambda * lambda * lambda
    }

    /// `P(λ)` with `p = 0`.
    pub fn p_polynomial_resonant(&self, lambda: Complex64) -> Complex64 {
        let (dm, dp) = (self.d_minus, self.d_plus);
        let (e0, em, ep) = (self.e0_sq, self.e_minus_sq, self.e_plus_sq);
        dp * (e0 + em) + dm * (e0 + ep) - 2.0 * (e0 + ep + em - dm * dp) * lambda - 3.0 * (dm + dp) * lambda * lambda
            + 4.0 * lambda * lambda * lambda
    }

    /// `−λ[e₋₁²d₊₁ + e₊₁²d₋₁ − (e₋₁² + e₊₁²)λ]`, the cleared secular function at a
    /// single-mode root.
    pub fn numerator(&self, lambda: Complex64) -> Complex64 {
        -lambda
            * (self.e_minus_sq * self.d_plus + self.e_plus_sq * self.d_minus
                - (self.e_minus_sq + self.e_plus_sq) * lambda)
    }

    /// Single-mode roots `(λ₋, λ₊)` of `λ(p − λ) + e₀² = 0`.
    pub fn single_mode_roots(&self) -> (Complex64, Complex64) {
        let half = 0.5 * self.p;
        let s = (half * half + self.e0_sq).sqrt();
        (half - s, half + s)
    }
}

pub fn phi(lambda: Complex64, m: &DynamicalMatrix) -> Result<Complex64> {
    ThreeModeArrow::from_matrix(m)?.phi(lambda)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerturbativeResult {
    pub lambda_minus: Complex64,
    pub lambda_plus: Complex64,
    pub x_minus: Complex64,
    pub x_plus: Complex64,
    /// Frame-relative LP energy `Re(λ₋ + x₋)`.
    pub e_lp: f64,
    pub e_up: f64,
    pub gamma_lp: f64,
    pub gamma_up: f64,
    pub omega_r: f64,
}

/// Linearized LP/UP corrections from the adjacent `q = ±1` modes.
///
/// `p = 0` uses the reduced denominator; any other corner uses the full `P(λ)`.
pub fn x_correction(m: &DynamicalMatrix) -> Result<PerturbativeResult> {
    let arrow = ThreeModeArrow::from_matrix(m)?;
    let (lm, lp) = arrow.single_mode_roots();
    let scale = arrow.scale().max(f64::MIN_POSITIVE);
    let resonant = arrow.p == Complex64::default();
    let x = |lambda: Complex64| -> Result<Complex64> {
        let den = if resonant { arrow.p_polynomial_resonant(lambda) } else { arrow.p_polynomial(lambda) };
        if den.norm() < 1e-12 * scale.powi(3) {
            return Err(Error::NearSingular { magnitude: den.norm() });
        }
        Ok(arrow.numerator(lambda) / den)
    };
    let (x_minus, x_plus) = (x(lm)?, x(lp)?);
    Ok(assemble(lm, lp, x_minus, x_plus, m.frame()))
}

fn assemble(lm: Complex64, lp: Complex64, x_minus: Complex64, x_plus: Complex64, frame: Frame) -> PerturbativeResult {
    let lam_lp = lm + x_minus;
    let lam_up = lp + x_plus;
    PerturbativeResult {
        lambda_minus: lm,
        lambda_plus: lp,
        x_minus,
        x_plus,
        e_lp: lam_lp.re,
        e_up: lam_up.re,
        gamma_lp: frame.kappa0 + BANDWIDTH_SIGN * 2.0 * lam_lp.im,
        gamma_up: frame.kappa0 + BANDWIDTH_SIGN * 2.0 * lam_up.im,
        omega_r: lam_up.re - lam_lp.re,
    }
}

/// Gap between the linearized pair and the exact eigenvalues nearest to it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExactGap {
    pub lambda_lp_exact: Complex64,
    pub lambda_up_exact: Complex64,
    pub abs_gap_lp: f64,
    pub abs_gap_up: f64,
    pub omega_r_exact: f64,
    pub omega_r_rel_gap: f64,
}

pub fn compare_with_exact(m: &DynamicalMatrix, r: &PerturbativeResult) -> Result<ExactGap> {
    let exact: Vec<Complex64> = eig_dense(m)?.into_iter().map(|p| p.lambda).collect();
    let nearest = |z: Complex64| {
        exact
            .iter()
            .copied()
            .min_by(|a, b| (a - z).norm().total_cmp(&(b - z).norm()))
            .expect("non-empty spectrum")
    };
    let approx_lp = r.lambda_minus + r.x_minus;
    let approx_up = r.lambda_plus + r.x_plus;
    let (lp, up) = (nearest(approx_lp), nearest(approx_up));
    let omega_r_exact = up.re - lp.re;
    Ok(ExactGap {
        lambda_lp_exact: lp,
        lambda_up_exact: up,
        abs_gap_lp: (approx_lp - lp).norm(),
        abs_gap_up: (approx_up - up).norm(),
        omega_r_exact,
        omega_r_rel_gap: (r.omega_r - omega_r_exact).abs() / omega_r_exact.abs(),
    })
}

fn side_term(omega: f64, fsr: f64, dk_minus: f64, dk_plus: f64, sign: f64) -> (f64, f64) {
    let a = fsr * (dk_minus - dk_plus) - sign * omega * (dk_minus + dk_plus) / 2.0;
    let s2 = omega * omega + fsr * fsr;
    (a, s2 * s2 + a * a)
}

/// `Re x±` as printed for `Ω_q = Ω`, `Δ_{±1} = ±Δ`, to first order in `Δκ_{±1}`.
/// Returns `(Re x₋, Re x₊)`.
pub fn printed_re_x(omega: f64, fsr: f64, dk_minus: f64, dk_plus: f64) -> (f64, f64) {
    let f = |sign: f64| {
        let s2 = omega * omega + fsr * fsr;
        let (_, den) = side_term(omega, fsr, dk_minus, dk_plus, sign);
        -sign * omega * omega * omega * s2 * s2 / den
    };
    (f(-1.0), f(1.0))
}

/// `2 Im x±` as printed. Returns `(2 Im x₋, 2 Im x₊)`.
pub fn printed_two_im_x(omega: f64, fsr: f64, dk_minus: f64, dk_plus: f64) -> (f64, f64) {
    let f = |sign: f64| {
        let s2 = omega * omega + fsr * fsr;
        let (a, den) = side_term(omega, fsr, dk_minus, dk_plus, sign);
        -sign * omega * (omega * (dk_minus + dk_plus) * s2 / 2.0 + sign * omega * omega * a) / den
    };
    (f(-1.0), f(1.0))
}

fn linear_zeta_denominator(omega: f64, fsr: f64, zeta: f64) -> f64 {
    let s2 = omega * omega + fsr * fsr;
    s2 * s2 + fsr * fsr * zeta * zeta
}

/// `Ω_R = 2Ω[1 − Ω²(Ω² + Δ²)/((Ω² + Δ²)² + Δ²ζ²)]`.
pub fn splitting_linear_zeta(omega: f64, fsr: f64, zeta: f64) -> f64 {
    let s2 = omega * omega + fsr * fsr;
    2.0 * omega * (1.0 - omega * omega * s2 / linear_zeta_denominator(omega, fsr, zeta))
}

/// `Γ± = κ ± 2Ω·Ω²Δζ/((Ω² + Δ²)² + Δ²ζ²)`. Returns `(Γ_LP, Γ_UP)`.
pub fn bandwidths_linear_zeta(omega: f64, fsr: f64, zeta: f64, kappa: f64) -> (f64, f64) {
    let shift = 2.0 * omega * omega * omega * fsr * zeta / linear_zeta_denominator(omega, fsr, zeta);
    (kappa - shift, kappa + shift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_dicke_matrix, CavityModeSet, CouplingMap, SystemSpec};
    use crate::presets;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn resonant(omega: f64, fsr: f64, zeta: f64, kappa: f64) -> DynamicalMatrix {
        build_dicke_matrix(&presets::fig3_at(20.0, omega, fsr, kappa, kappa, zeta).unwrap()).unwrap()
    }

    #[test]
    fn phi_single_mode_root_and_asymptote() {
        let m = build_dicke_matrix(
            &SystemSpec::dicke(
                CavityModeSet::three_mode(2.0, 1.0, 0.1, 0.0).unwrap(),
                1,
                2.0,
                0.1,
                CouplingMap::collective([(-1, 0.0), (0, 0.35), (1, 0.0)]),
            )
            .unwrap(),
        )
        .unwrap();
        assert!(phi(c(0.35, 0.0), &m).unwrap().norm() < 1e-15);
        let big = c(1e7, 0.0);
        assert!((phi(big, &resonant(0.35, 1.0, -0.1, 0.15)).unwrap() / (-big) - 1.0).norm() < 1e-6);
        assert!(matches!(phi(c(0.0, 0.0), &m), Err(Error::Pole { .. })));
        assert!(matches!(phi(c(1.0, 0.0), &m), Err(Error::Pole { .. })));
    }

    #[test]
    fn phi_vanishes_at_exact_eigenvalues() {
        let m = build_dicke_matrix(&presets::fig4(0.3).unwrap()).unwrap();
        for pair in crate::spectra::eig_arrowhead(&m).unwrap().pairs {
            let scale = m.arrowhead().unwrap().scale().max(pair.lambda.norm());
            assert!(phi(pair.lambda, &m).unwrap().norm() <= 1e-9 * scale);
        }
    }

    #[test]
    fn p_is_minus_the_derivative_of_cleared_secular_function() {
        let m = build_dicke_matrix(&presets::fig4(0.3).unwrap()).unwrap();
        let arrow = ThreeModeArrow::from_matrix(&m).unwrap();
        // Q(λ) = Φ(λ)·λ(d₋ − λ)(d₊ − λ), derivative by central differences.
        let q = |l: Complex64| arrow.phi(l).unwrap() * l * (arrow.d_minus - l) * (arrow.d_plus - l);
        for l in [c(0.3, -0.02), c(-0.41, 0.1), c(1.3, 0.0)] {
            let h = 1e-5;
            let dq = (q(l + h) - q(l - h)) / (2.0 * h);
            assert!((arrow.p_polynomial(l) + dq).norm() < 1e-8);
            // At a single-mode root, Q reduces to the printed numerator.
        }
        let (lm, lp) = arrow.single_mode_roots();
        for l in [lm, lp] {
            assert!((q(l) - arrow.numerator(l)).norm() < 1e-14);
        }
    }

    #[test]
    fn resonant_reduction_of_p() {
        let arrow = ThreeModeArrow::from_matrix(&resonant(0.35, 1.0, -0.1, 0.15)).unwrap();
        assert_eq!(arrow.p, c(0.0, 0.0));
        for l in [c(0.35, 0.0), c(-0.2, 0.05)] {
            assert!((arrow.p_polynomial(l) - arrow.p_polynomial_resonant(l)).norm() < 1e-15);
        }
    }

    #[test]
    fn equal_bandwidths_give_real_level_pushing() {
        let (omega, fsr) = (0.35, 1.0);
        let r = x_correction(&resonant(omega, fsr, 0.0, 0.15)).unwrap();
        let want = omega * omega * omega / (omega * omega + fsr * fsr);
        assert!((r.x_plus - c(-want, 0.0)).norm() < 1e-15);
        assert!((r.x_minus - c(want, 0.0)).norm() < 1e-15);
        assert!((r.omega_r - 2.0 * omega * fsr * fsr / (fsr * fsr + omega * omega)).abs() < 1e-15);
        assert!((r.gamma_lp - 0.15).abs() < 1e-15 && (r.gamma_up - 0.15).abs() < 1e-15);
    }

    #[test]
    fn no_side_coupling_no_correction() {
        let spec = presets::fig3_with(0.35, 1.0, 0.15, 0.15, -0.1)
            .unwrap()
            .with_couplings(CouplingMap::collective([(-1, 0.0), (0, 0.35), (1, 0.0)]))
            .unwrap();
        let r = x_correction(&build_dicke_matrix(&spec).unwrap()).unwrap();
        assert_eq!(r.x_minus, c(0.0, 0.0));
        assert_eq!(r.x_plus, c(0.0, 0.0));
        assert!((r.e_lp + 0.35).abs() < 1e-15 && (r.omega_r - 0.7).abs() < 1e-15);
    }

    #[test]
    fn linear_zeta_examples() {
        let r = splitting_linear_zeta(0.35, 1.0, -0.1);
        assert!((r - 0.6242).abs() < 5e-5, "{r}");
        let (lp, up) = bandwidths_linear_zeta(0.35, 1.0, -0.1, 0.15);
        assert!((up - 0.14325).abs() < 5e-5 && (lp - 0.15675).abs() < 5e-5, "{lp} {up}");
        assert_eq!(bandwidths_linear_zeta(0.35, 1.0, 0.0, 0.15), (0.15, 0.15));
        let r = splitting_linear_zeta(1e-3, 10.0, 1e-3);
        assert!((r / 2e-3 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn linear_zeta_against_exact() {
        // Exact three-mode pair for Ω = 0.35, Δ = 1, ζ = −0.1, κ = γ = 0.15.
        let m = resonant(0.35, 1.0, -0.1, 0.15);
        let r = x_correction(&m).unwrap();
        let gap = compare_with_exact(&m, &r).unwrap();
        assert!((gap.omega_r_exact - 0.62133).abs() < 1e-5, "{}", gap.omega_r_exact);
        let g_lp = 0.15 - 2.0 * gap.lambda_lp_exact.im;
        let g_up = 0.15 - 2.0 * gap.lambda_up_exact.im;
        assert!((g_lp - 0.15714).abs() < 1e-5 && (g_up - 0.14286).abs() < 1e-5, "{g_lp} {g_up}");
        let eq19 = splitting_linear_zeta(0.35, 1.0, -0.1);
        assert!((eq19 - gap.omega_r_exact).abs() / gap.omega_r_exact < (0.35f64).powi(2));
    }

    #[test]
    fn printed_forms_against_linearized() {
        let (omega, fsr, zeta) = (0.35, 1.0, -0.1);
        let r = x_correction(&resonant(omega, fsr, zeta, 0.15)).unwrap();
        let (re_m, re_p) = printed_re_x(omega, fsr, -zeta, zeta);
        let (im_m, im_p) = printed_two_im_x(omega, fsr, -zeta, zeta);
        // Frozen evaluations of the printed forms; they do not reproduce the linearized x.
        assert!((re_m - 0.041555775573194).abs() < 1e-12 && (re_p + re_m).abs() < 1e-15);
        assert!((im_m + 0.0065961221340282).abs() < 1e-12 && (im_p - im_m).abs() < 1e-15);
        assert!((r.x_minus.re - 0.03797848782031).abs() < 1e-12);
        assert!((2.0 * r.x_minus.im + 0.006781872825055).abs() < 1e-12);
        // The linear-ζ splitting tracks the linearized Re x to second order in ζ.
        let eq19_half = 0.5 * splitting_linear_zeta(omega, fsr, zeta);
        assert!((eq19_half - (omega - r.x_minus.re)).abs() < 1e-3);
        // At ζ = 0 the linearized x is ∓Ω³/(Ω² + Δ²), but the printed real part collapses
        // to ∓Ω³: it misses the 1/(Ω² + Δ²) factor.
        let r0 = x_correction(&resonant(omega, fsr, 0.0, 0.15)).unwrap();
        let s2 = omega * omega + fsr * fsr;
        assert!((r0.x_plus.re + omega.powi(3) / s2).abs() < 1e-14);
        assert!((r0.x_minus.re - omega.powi(3) / s2).abs() < 1e-14);
        assert!((printed_re_x(omega, fsr, 0.0, 0.0).1 + omega.powi(3)).abs() < 1e-15);
    }

    #[test]
    fn general_corner_uses_full_denominator() {
        let spec = presets::fig4(0.3).unwrap();
        let m = build_dicke_matrix(&spec).unwrap();
        let r = x_correction(&m).unwrap();
        let arrow = ThreeModeArrow::from_matrix(&m).unwrap();
        assert_ne!(arrow.p, c(0.0, 0.0));
        let (lm, lp) = arrow.single_mode_roots();
        assert!((lm * (arrow.p - lm) + arrow.e0_sq).norm() < 1e-15);
        assert!((lp * (arrow.p - lp) + arrow.e0_sq).norm() < 1e-15);
        let gap = compare_with_exact(&m, &r).unwrap();
        assert!(gap.abs_gap_lp.is_finite() && gap.abs_gap_up.is_finite());
    }

    #[test]
    fn wrong_layout_is_rejected() {
        let spec = crate::presets::fig3_with(0.35, 1.0, 0.15, 0.15, 0.0).unwrap();
        let full = crate::model::build_full_matrix(&spec);
        assert!(matches!(x_correction(&full), Err(Error::NotArrowhead(_))));
    }

    #[test]
    fn correction_error_shrinks_with_fsr() {
        let mut prev = f64::INFINITY;
        for k in 0..8 {
            let fsr = 1.5f64.powi(k);
            let m = resonant(0.35, fsr, -0.1, 0.15);
            let r = x_correction(&m).unwrap();
            let gap = compare_with_exact(&m, &r).unwrap();
            let err = gap.abs_gap_lp.max(gap.abs_gap_up);
            assert!(err < prev, "{err} >= {prev} at fsr {fsr}");
            prev = err;
        }
    }

    proptest! {
        #[test]
        fn eq20_widths_sum_to_twice_kappa(o in 0.01f64..0.6, d in 0.1f64..3.0, z in -0.3f64..0.3, k in 0.0f64..0.5) {
            let (lp, up) = bandwidths_linear_zeta(o, d, z, k);
            prop_assert!(((lp + up) - 2.0 * k).abs() <= 4.0 * f64::EPSILON * k.max(1.0));
            let s = (d * z).signum();
            if z != 0.0 {
                prop_assert_eq!((up - k).signum(), s);
                prop_assert_eq!((lp - k).signum(), -s);
            }
        }

        #[test]
        fn eq19_is_below_bare_splitting(o in 0.01f64..0.6, d in 0.1f64..3.0, z in -0.3f64..0.3) {
            let r = splitting_linear_zeta(o, d, z);
            prop_assert!(r < 2.0 * o && r > 0.0);
        }
    }
}
