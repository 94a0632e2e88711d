//! Matrix special functions: gamma, incomplete gamma, Pochhammer symbols,
//! Bessel and Laguerre, all evaluated through one spectral decomposition.
//!
//! For a diagonalizable A = P·Λ·P⁻¹ every function here is
//! f(A) = P·diag(f(λᵢ))·P⁻¹ with f the scalar kernel from [`crate::scalar`].

use crate::error::{Error, Result};
use crate::linalg::{apply_scalar_function, spectral_decompose, CMatrix, SpectralForm, C64};
use crate::scalar;
use serde::{Deserialize, Serialize};

/// Which piece of the gamma decomposition a symbol or function refers to.
///
/// `Lower` uses γ(·,x), `Upper` uses Γ(·,x), and `Complete` is the ordinary
/// (complete-gamma) object with no x dependence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Lower,
    Upper,
    Complete,
}

impl Kind {
    pub fn is_incomplete(self) -> bool {
        !matches!(self, Kind::Complete)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Lower => "lower",
            Kind::Upper => "upper",
            Kind::Complete => "complete",
        }
    }
}

fn positive_stable_form(a: &CMatrix) -> Result<SpectralForm> {
    let form = spectral_decompose(a)?;
    if let Some(l) = form.eigenvalues.iter().find(|l| l.re <= 0.0) {
        return Err(Error::NotPositiveStable(l.to_string()));
    }
    Ok(form)
}

/// Γ(A) for positive stable A.
pub fn gamma_matrix(a: &CMatrix) -> Result<CMatrix> {
    apply_scalar_function(&positive_stable_form(a)?, scalar::gamma)
}

/// Γ⁻¹(A), defined whenever no eigenvalue sits on a gamma pole.
pub fn gamma_matrix_inverse(a: &CMatrix) -> Result<CMatrix> {
    let form = spectral_decompose(a)?;
    apply_scalar_function(&form, scalar::reciprocal_gamma)
}

/// γ(A,x) or Γ(A,x) for positive stable A and x > 0.
pub fn inc_gamma_matrix(kind: Kind, a: &CMatrix, x: f64) -> Result<CMatrix> {
    if !(x > 0.0) {
        return Err(Error::DomainError(format!(
            "incomplete matrix gamma requires x > 0, got {x}"
        )));
    }
    let form = positive_stable_form(a)?;
    match kind {
        Kind::Lower => apply_scalar_function(&form, |l| scalar::lower_inc_gamma(l, x)),
        Kind::Upper => apply_scalar_function(&form, |l| scalar::upper_inc_gamma(l, x)),
        Kind::Complete => Err(Error::InvalidParams(
            "incomplete matrix gamma asked for the complete kind; use gamma_matrix".into(),
        )),
    }
}

/// Scalar complete Pochhammer symbol (λ)ₙ as a direct product.
pub fn poch_scalar(l: C64, n: usize) -> C64 {
    let mut p = C64::new(1.0, 0.0);
    for j in 0..n {
        p *= l + j as f64;
    }
    p
}

/// Scalar incomplete Pochhammer symbols
/// (λ;x)ₙ = γ(λ+n,x)/Γ(λ) and [λ;x]ₙ = Γ(λ+n,x)/Γ(λ), returned as a pair.
///
/// Their sum is exactly (λ)ₙ up to rounding.  Requires Re(λ+n) > 0.
pub fn inc_poch_scalar_pair(l: C64, n: usize, x: f64) -> Result<(C64, C64)> {
    let shifted = l + n as f64;
    let (lo, hi) = scalar::inc_gamma_pair(shifted, x)?;
    let rg = scalar::reciprocal_gamma(l)?;
    Ok((lo * rg, hi * rg))
}

/// Matrix Pochhammer symbol of the requested kind.
///
/// Complete: (A)ₙ = A(A+I)…(A+(n−1)I), defined for every A.
/// Incomplete kinds need x and Re spectrum of A + nI positive.
pub fn pochhammer(a: &CMatrix, n: usize, kind: Kind, x: Option<f64>) -> Result<CMatrix> {
    let form = spectral_decompose(a)?;
    match kind {
        Kind::Complete => apply_scalar_function(&form, |l| Ok(poch_scalar(l, n))),
        _ => {
            let x = x.ok_or_else(|| {
                Error::InvalidParams("incomplete Pochhammer symbol requires x".into())
            })?;
            if !(x > 0.0) {
                return Err(Error::DomainError(format!(
                    "incomplete Pochhammer symbol requires x > 0, got {x}"
                )));
            }
            if let Some(l) = form.eigenvalues.iter().find(|l| l.re + (n as f64) <= 0.0) {
                return Err(Error::NotPositiveStable(format!("{l} + {n}")));
            }
            match kind {
                Kind::Lower => {
                    apply_scalar_function(&form, |l| Ok(inc_poch_scalar_pair(l, n, x)?.0))
                }
                Kind::Upper => {
                    apply_scalar_function(&form, |l| Ok(inc_poch_scalar_pair(l, n, x)?.1))
                }
                Kind::Complete => unreachable!(),
            }
        }
    }
}

/// Bessel family member selector.
///
/// `ILeft` and `IRight` are the two sector readings of the modified function,
/// I_A(z) = e^(∓Aπi/2) J_A(z·e^(±πi/2)); they agree for z > 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BesselVariant {
    #[serde(rename = "J")]
    J,
    #[serde(rename = "I_left")]
    ILeft,
    #[serde(rename = "I_right")]
    IRight,
}

/// J_A(z) or I_A(z) for Re spectrum > −1 and real z in (0, 20].
pub fn bessel_matrix(variant: BesselVariant, a: &CMatrix, z: f64) -> Result<CMatrix> {
    if !(z > 0.0 && z <= 20.0) {
        return Err(Error::DomainError(format!(
            "bessel_matrix requires z in (0, 20], got {z}"
        )));
    }
    let form = spectral_decompose(a)?;
    if let Some(l) = form.eigenvalues.iter().find(|l| l.re <= -1.0) {
        return Err(Error::DomainError(format!(
            "bessel_matrix requires Re spectrum > −1, found {l}"
        )));
    }
    let i = C64::new(0.0, 1.0);
    let half_pi_i = C64::new(0.0, std::f64::consts::FRAC_PI_2);
    match variant {
        BesselVariant::J => {
            apply_scalar_function(&form, |l| scalar::bessel_j_complex(l, C64::new(z, 0.0)))
        }
        BesselVariant::ILeft => apply_scalar_function(&form, |l| {
            Ok((-(l * half_pi_i)).exp() * scalar::bessel_j_complex(l, i * z)?)
        }),
        BesselVariant::IRight => apply_scalar_function(&form, |l| {
            Ok((l * half_pi_i).exp() * scalar::bessel_j_complex(l, -i * z)?)
        }),
    }
}

/// Laguerre matrix polynomial
/// Lₙ^(A,λ)(x) = Σₖ (−1)ᵏ λᵏ / (k!(n−k)!) · (A+I)ₙ[(A+I)ₖ]⁻¹ · xᵏ.
///
/// Defined when no (A+I)ₖ with k ≤ n is singular, i.e. no eigenvalue of A
/// is an integer in [−n, −1].
pub fn laguerre_matrix(a: &CMatrix, lambda: f64, n: usize, x: C64) -> Result<CMatrix> {
    let form = spectral_decompose(a)?;
    apply_scalar_function(&form, |l| laguerre_scalar(l, lambda, n, x))
}

/// Scalar case of [`laguerre_matrix`] at eigenvalue `l`.
pub(crate) fn laguerre_scalar(l: C64, lambda: f64, n: usize, x: C64) -> Result<C64> {
    let top = poch_scalar(l + 1.0, n);
    let mut sum = C64::new(0.0, 0.0);
    let mut k_fact = 1.0;
    for k in 0..=n {
        if k > 0 {
            k_fact *= k as f64;
        }
        let denom_poch = poch_scalar(l + 1.0, k);
        if denom_poch.norm() < 1e-250 {
            return Err(Error::SingularValue(format!(
                "(A+I)_{k} singular at eigenvalue {l}"
            )));
        }
        let mut nk_fact = 1.0;
        for j in 1..=(n - k) {
            nk_fact *= j as f64;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += x.powu(k as u32) * (sign * lambda.powi(k as i32) / (k_fact * nk_fact))
            * (top / denom_poch);
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::make_commuting_family;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn diag(values: &[f64]) -> CMatrix {
        CMatrix::diagonal(&values.iter().map(|&v| c(v, 0.0)).collect::<Vec<_>>())
    }

    #[test]
    fn gamma_matrix_on_diagonal() {
        let g = gamma_matrix(&diag(&[1.0, 2.0])).unwrap();
        assert!(g.rel_distance(&CMatrix::identity(2)) < 1e-12);
        let g = gamma_matrix(&diag(&[6.0])).unwrap();
        assert!((g.get(0, 0).re - 120.0).abs() < 1e-10);
    }

    #[test]
    fn gamma_matrix_rejects_non_positive_stable() {
        assert!(matches!(
            gamma_matrix(&diag(&[1.0, -0.5])),
            Err(Error::NotPositiveStable(_))
        ));
    }

    #[test]
    fn gamma_inverse_is_elementwise_inverse_on_good_spectra() {
        let fam = make_commuting_family(3, 1, 3, (0.6, 2.4)).unwrap();
        let a = fam.member(0).unwrap();
        let g = gamma_matrix(&a).unwrap();
        let gi = gamma_matrix_inverse(&a).unwrap();
        assert!(g.matmul(&gi).unwrap().rel_distance(&CMatrix::identity(3)) < 1e-10);
    }

    #[test]
    fn gamma_inverse_handles_pole_spectra() {
        // Γ⁻¹ is entire; an eigenvalue at 0 maps to 0.
        let gi = gamma_matrix_inverse(&diag(&[0.0, 1.0])).unwrap();
        assert!(gi.get(0, 0).norm() < 1e-14);
        assert!((gi.get(1, 1).re - 1.0).abs() < 1e-13);
    }

    #[test]
    fn inc_gamma_matrix_splits_gamma() {
        let fam = make_commuting_family(17, 1, 3, (0.6, 2.4)).unwrap();
        let a = fam.member(0).unwrap();
        for x in [0.3, 1.0, 5.0] {
            let lo = inc_gamma_matrix(Kind::Lower, &a, x).unwrap();
            let hi = inc_gamma_matrix(Kind::Upper, &a, x).unwrap();
            let whole = gamma_matrix(&a).unwrap();
            assert!(lo.add(&hi).unwrap().rel_distance(&whole) < 1e-12, "x={x}");
        }
    }

    #[test]
    fn inc_gamma_matrix_known_diagonal_values() {
        let lo = inc_gamma_matrix(Kind::Lower, &diag(&[1.0, 2.0]), 0.5).unwrap();
        assert!((lo.get(0, 0).re - 0.3934693402873666).abs() < 1e-14);
        assert!((lo.get(1, 1).re - 0.09020401043104986).abs() < 1e-14);
        let hi = inc_gamma_matrix(Kind::Upper, &diag(&[1.0, 2.0]), 0.5).unwrap();
        assert!((hi.get(0, 0).re - 0.6065306597126334).abs() < 1e-14);
        assert!((hi.get(1, 1).re - 0.9097959895689501).abs() < 1e-14);
    }

    #[test]
    fn inc_gamma_matrix_domain_checks() {
        assert!(inc_gamma_matrix(Kind::Lower, &diag(&[1.0]), 0.0).is_err());
        assert!(inc_gamma_matrix(Kind::Complete, &diag(&[1.0]), 1.0).is_err());
    }

    #[test]
    fn pochhammer_complete_matches_products() {
        let p = pochhammer(&diag(&[0.5, 3.0]), 3, Kind::Complete, None).unwrap();
        // (0.5)_3 = 0.5·1.5·2.5; (3)_3 = 3·4·5
        assert!((p.get(0, 0).re - 1.875).abs() < 1e-13);
        assert!((p.get(1, 1).re - 60.0).abs() < 1e-12);
        let p0 = pochhammer(&diag(&[0.5, 3.0]), 0, Kind::Complete, None).unwrap();
        assert!(p0.rel_distance(&CMatrix::identity(2)) < 1e-14);
    }

    #[test]
    fn incomplete_pochhammer_pair_sums_to_complete() {
        let fam = make_commuting_family(23, 1, 2, (0.6, 2.4)).unwrap();
        let a = fam.member(0).unwrap();
        for n in [0usize, 1, 4] {
            let lo = pochhammer(&a, n, Kind::Lower, Some(0.8)).unwrap();
            let hi = pochhammer(&a, n, Kind::Upper, Some(0.8)).unwrap();
            let complete = pochhammer(&a, n, Kind::Complete, None).unwrap();
            assert!(
                lo.add(&hi).unwrap().rel_distance(&complete) < 1e-12,
                "n={n}"
            );
        }
    }

    #[test]
    fn incomplete_pochhammer_requires_x() {
        assert!(matches!(
            pochhammer(&diag(&[1.0]), 2, Kind::Lower, None),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn bessel_matrix_known_orders() {
        let j = bessel_matrix(BesselVariant::J, &diag(&[0.0, 1.0]), 1.0).unwrap();
        assert!((j.get(0, 0).re - 0.7651976865579666).abs() < 1e-12);
        assert!((j.get(1, 1).re - 0.4400505857449335).abs() < 1e-12);
    }

    #[test]
    fn modified_bessel_sector_readings_agree() {
        // Both rotations must produce the same I_A(z) for real z > 0.
        let fam = make_commuting_family(31, 1, 3, (0.2, 1.8)).unwrap();
        let a = fam.member(0).unwrap();
        for z in [0.4, 1.0, 3.0] {
            let left = bessel_matrix(BesselVariant::ILeft, &a, z).unwrap();
            let right = bessel_matrix(BesselVariant::IRight, &a, z).unwrap();
            assert!(left.rel_distance(&right) < 1e-12, "z={z}");
        }
    }

    #[test]
    fn modified_bessel_matches_real_series() {
        // I_0(1) = Σ (1/4)ᵐ / m!²
        let mut want = 0.0f64;
        let mut term = 1.0;
        for m in 1..30 {
            want += term;
            term *= 0.25 / (m as f64 * m as f64);
        }
        let i0 = bessel_matrix(BesselVariant::ILeft, &diag(&[0.0]), 1.0).unwrap();
        assert!((i0.get(0, 0).re - want).abs() < 1e-13);
        assert!(i0.get(0, 0).im.abs() < 1e-13);
    }

    #[test]
    fn bessel_matrix_domain_checks() {
        assert!(bessel_matrix(BesselVariant::J, &diag(&[0.0]), 0.0).is_err());
        assert!(bessel_matrix(BesselVariant::J, &diag(&[0.0]), 21.0).is_err());
        assert!(bessel_matrix(BesselVariant::J, &diag(&[-1.5]), 1.0).is_err());
    }

    #[test]
    fn laguerre_degree_one_closed_form() {
        // L₁^(A,λ)(x) = A + I − λx·I
        let l = laguerre_matrix(&diag(&[1.0]), 1.0, 1, c(0.5, 0.0)).unwrap();
        assert!((l.get(0, 0).re - 1.5).abs() < 1e-14);
        let fam = make_commuting_family(8, 1, 2, (0.6, 2.4)).unwrap();
        let a = fam.member(0).unwrap();
        let lam = 0.7;
        let x = c(0.3, 0.1);
        let got = laguerre_matrix(&a, lam, 1, x).unwrap();
        let want = a.shift(c(1.0, 0.0) - x * lam);
        assert!(got.rel_distance(&want) < 1e-12);
    }

    #[test]
    fn laguerre_matches_confluent_form_at_unit_lambda() {
        // Lₙ^(A,1)(x) = (A+I)ₙ/n! · ₁F₁(−n; A+I; x), checked per eigenvalue
        // with a locally coded ₁F₁ sum.
        let one_f_one = |b: C64, cc: C64, z: C64| {
            let mut term = C64::new(1.0, 0.0);
            let mut sum = term;
            for m in 0..60 {
                term *= (b + m as f64) * z / ((cc + m as f64) * (m as f64 + 1.0));
                sum += term;
                if term.norm() < 1e-18 * sum.norm() {
                    break;
                }
            }
            sum
        };
        for (a_val, n, x) in [(0.7, 3usize, 0.4), (1.9, 5, 1.3)] {
            let a = diag(&[a_val]);
            let got = laguerre_matrix(&a, 1.0, n, c(x, 0.0)).unwrap().get(0, 0);
            let mut n_fact = 1.0;
            for j in 1..=n {
                n_fact *= j as f64;
            }
            let want = poch_scalar(c(a_val + 1.0, 0.0), n) / n_fact
                * one_f_one(c(-(n as f64), 0.0), c(a_val + 1.0, 0.0), c(x, 0.0));
            assert!((got - want).norm() < 1e-12 * want.norm().max(1.0));
        }
    }

    #[test]
    fn laguerre_singular_parameter_is_reported() {
        assert!(matches!(
            laguerre_matrix(&diag(&[-2.0]), 1.0, 3, c(0.5, 0.0)),
            Err(Error::SingularValue(_))
        ));
    }

    proptest! {
        #[test]
        fn pochhammer_recurrence_on_family_members(seed in 0u64..400) {
            let fam = make_commuting_family(seed, 1, 3, (0.6, 2.4)).unwrap();
            let a = fam.member(0).unwrap();
            for n in [0usize, 1, 3] {
                let pn = pochhammer(&a, n, Kind::Complete, None).unwrap();
                let pn1 = pochhammer(&a, n + 1, Kind::Complete, None).unwrap();
                let want = pn.matmul(&a.shift(c(n as f64, 0.0))).unwrap();
                prop_assert!(pn1.rel_distance(&want) < 1e-11);
            }
        }

        #[test]
        fn incomplete_pochhammer_recovers_inc_gamma(seed in 0u64..200, x in 0.2f64..3.0) {
            // n = 0: (A;x)₀ = γ(A,x)Γ⁻¹(A)
            let fam = make_commuting_family(seed, 1, 2, (0.6, 2.4)).unwrap();
            let a = fam.member(0).unwrap();
            let sym = pochhammer(&a, 0, Kind::Lower, Some(x)).unwrap();
            let want = inc_gamma_matrix(Kind::Lower, &a, x)
                .unwrap()
                .matmul(&gamma_matrix_inverse(&a).unwrap())
                .unwrap();
            prop_assert!(sym.rel_distance(&want) < 1e-11);
        }
    }
}
