//! The secrecy function `Ξ(y) = Θ_{ℤⁿ}(yi) / Θ_Λ(yi)`.
//!
//! Dividing either basis expansion by `ϑ₃ⁿ` turns `1/Ξ` into a polynomial
//! `D(z)` in `z = ϑ₂⁴ϑ₄⁴/ϑ₃⁸`:
//!
//! ```text
//! from a_r:  D(z) = Σ_r (a_r / 16^r) z^r
//! from b_j:  D(z) = (1-z)^{3m+k} + Σ_j (b_j / 256^j) (1-z)^{3(m-j)+k} z^{2j}
//! ```
//!
//! Since `z` ranges over `(0, 1/4]` with `z(1) = 1/4`, the value of `Ξ` at
//! `y = 1` is `1/D(1/4)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::lattice::ThetaCoefficients;
pub use crate::poly::PolyQ;
use crate::qseries::{
    expand_general, extremal_b_coeffs, fit_a_basis, BasisCoeffsEven, BasisCoeffsGeneral,
};
use crate::rat::{fmt_rational, q, qi};
use crate::theta_numeric::{check_y, theta_series_dd, z_dd, ThetaKind, INTERNAL_EPS};

/// Largest number of theta coefficients `xi_direct` will generate.
pub const MAX_DIRECT_CUT: usize = 4000;

/// `D(z) = Σ_r (a_r/16^r) z^r`.
pub fn denom_from_ar(c: &BasisCoeffsGeneral) -> PolyQ {
    let mut scale = BigRational::one();
    let sixteenth = q(1, 16);
    let mut coeffs = Vec::with_capacity(c.a().len());
    for a in c.a() {
        coeffs.push(a * &scale);
        scale *= &sixteenth;
    }
    PolyQ::new(coeffs)
}

/// `D(z) = (1-z)^{3m+k} + Σ_j (b_j/256^j)(1-z)^{3(m-j)+k} z^{2j}`, expanded.
pub fn denom_from_bj(c: &BasisCoeffsEven) -> PolyQ {
    let (m, k) = (c.m() as u32, c.k() as u32);
    let one_minus_z = PolyQ::from_ints(&[1, -1]);
    let mut d = one_minus_z.pow(3 * m + k);
    let mut scale = BigRational::one();
    for (j, b) in (1..=m).zip(c.b()) {
        scale /= qi(256);
        let term = &one_minus_z.pow(3 * (m - j) + k) * &PolyQ::monomial(b * &scale, 2 * j as usize);
        d = &d + &term;
    }
    d
}

/// The same denominator in the `(1-z)`, `z` form, e.g.
/// `(1-z)^3 - 45/16 z^2`.
pub fn denom_factored(c: &BasisCoeffsEven) -> String {
    let (m, k) = (c.m(), c.k());
    let power = |e: usize| match e {
        0 => String::new(),
        1 => "(1-z)".to_string(),
        _ => format!("(1-z)^{e}"),
    };
    let mut out = power(3 * m + k);
    if out.is_empty() {
        out.push('1');
    }
    let mut scale = BigRational::one();
    for (j, b) in (1..=m).zip(c.b()) {
        scale /= qi(256);
        let coeff = b * &scale;
        if coeff.is_zero() {
            continue;
        }
        let sign = if coeff.is_negative() { '-' } else { '+' };
        let mut term = fmt_rational(&coeff.abs());
        let p = power(3 * (m - j) + k);
        if !p.is_empty() {
            term.push(' ');
            term.push_str(&p);
        }
        term.push_str(&format!(" z^{}", 2 * j));
        out.push_str(&format!(" {sign} {term}"));
    }
    out
}

/// `1/D(1/4)`, the value of the secrecy function at `y = 1`.
pub fn gain_at_one(d: &PolyQ) -> Result<BigRational> {
    let v = d.eval(&q(1, 4));
    if !v.is_positive() {
        return Err(Error::InvalidProfile(format!(
            "D(1/4) = {} is not positive",
            fmt_rational(&v)
        )));
    }
    Ok(v.recip())
}

/// `Ξ(y) = 1/D(z(y))`.
pub fn xi_poly(d: &PolyQ, y: f64, precision: f64) -> Result<f64> {
    check_y(y)?;
    if !(precision > 0.0) {
        return Err(Error::Domain(format!("precision must be positive, got {precision}")));
    }
    let z = z_dd(Dd::from_f64(y));
    Ok(d.eval_dd(z).recip().to_f64())
}

/// Below this `y` the direct route uses `Ξ(y) = Ξ(1/y)`, which holds for
/// every unimodular lattice because `Θ_Λ(i/y) = y^{n/2} Θ_Λ(yi)`.
const DIRECT_SMALL_Y: f64 = 0.5;

/// `ln( C (2√k + 2)^n q^k )`: a bound on `|N_k| q^k` for any series of the
/// form `Σ a_r ϑ₃^{n-8r} Δ₈^r` with `C = Σ |a_r|/16^r`. Coefficientwise,
/// `|ϑ₄| ≤ ϑ₃`, so the r-th basis element is dominated by
/// `ϑ₃^{n-4r} ϑ₂^{4r} / 16^r`, which counts points of a shifted copy of `ℤⁿ`
/// of norm `k`: at most `(2√k + 2)^n` of them.
fn ln_majorant(ln_c: f64, n: usize, k: usize, ln_q: f64) -> f64 {
    ln_c + n as f64 * (2.0 * (k as f64).sqrt() + 2.0).ln() + k as f64 * ln_q
}

/// Smallest cut `K` such that `Σ_{k>K} |N_k| q^k ≤ e^{ln_tol}`.
fn required_cut(ln_c: f64, n: usize, ln_q: f64, ln_tol: f64, from: usize) -> Option<usize> {
    (from..=MAX_DIRECT_CUT).find(|&cut| {
        let k = cut + 1;
        let t = ln_majorant(ln_c, n, k, ln_q);
        let rho = ln_majorant(0.0, n, k + 1, ln_q) - ln_majorant(0.0, n, k, ln_q);
        // ratio of consecutive majorant terms decreases in k
        rho < 0.0 && t - (1.0 - rho.exp()).ln() <= ln_tol
    })
}

/// `Θ_{ℤⁿ}(yi) / Θ_Λ(yi)` summed directly from the vector counts.
///
/// The counts are fitted to the `a_r` basis first; when they run out before
/// the series tail is below tolerance, further counts are generated exactly
/// from the fit. Fails with [`Error::InsufficientCut`] only when more than
/// [`MAX_DIRECT_CUT`] coefficients would be needed.
pub fn xi_direct(theta: &ThetaCoefficients, n: usize, y: f64, precision: f64) -> Result<f64> {
    check_y(y)?;
    if !(precision > 0.0) {
        return Err(Error::Domain(format!("precision must be positive, got {precision}")));
    }
    let fitted = fit_a_basis(theta, n)?;
    let y = if y < DIRECT_SMALL_Y { 1.0 / y } else { y };
    let yd = Dd::from_f64(y);

    let numerator = theta_series_dd(ThetaKind::Theta3, yd, INTERNAL_EPS).powi(n as u32);

    let c: f64 = denom_from_ar(&fitted)
        .coeffs()
        .iter()
        .map(|x| x.abs().to_f64().unwrap_or(f64::INFINITY))
        .sum();
    let ln_q = -std::f64::consts::PI * y;
    // Θ_Λ ≥ N_0 = 1; relative accuracy on the denominator well below `precision`
    let ln_tol = (precision * 1e-3).ln();
    let cut = required_cut(c.max(1.0).ln(), n, ln_q, ln_tol, theta.cut()).ok_or(
        Error::InsufficientCut {
            required: MAX_DIRECT_CUT + 1,
        },
    )?;

    let counts: Vec<BigInt> = if cut <= theta.cut() {
        theta.counts().to_vec()
    } else {
        expand_general(&fitted, cut + 1)
            .coeffs()
            .iter()
            .map(|x| x.to_integer())
            .collect()
    };

    let qd = (-(Dd::PI * yd)).exp();
    let mut power = Dd::ONE;
    let mut denominator = Dd::ZERO;
    for nk in &counts {
        if !nk.is_zero() {
            denominator += Dd::from_bigint(nk) * power;
        }
        power *= qd;
    }
    Ok((numerator / denominator).to_f64())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    FromAr,
    FromBj,
    Extremal,
}

/// A lattice's secrecy denominator together with its value at `y = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecrecyProfile {
    pub n: usize,
    pub denominator: PolyQ,
    pub gain_at_one: BigRational,
    pub provenance: Provenance,
}

impl SecrecyProfile {
    fn build(n: usize, denominator: PolyQ, provenance: Provenance) -> Result<Self> {
        let gain_at_one = gain_at_one(&denominator)?;
        Ok(SecrecyProfile {
            n,
            denominator,
            gain_at_one,
            provenance,
        })
    }

    pub fn from_ar(c: &BasisCoeffsGeneral) -> Result<Self> {
        SecrecyProfile::build(c.n(), denom_from_ar(c), Provenance::FromAr)
    }

    pub fn from_bj(c: &BasisCoeffsEven) -> Result<Self> {
        SecrecyProfile::build(c.n(), denom_from_bj(c), Provenance::FromBj)
    }

    pub fn extremal(n: usize) -> Result<Self> {
        let e = extremal_b_coeffs(n)?;
        SecrecyProfile::build(n, denom_from_bj(&e.coeffs), Provenance::Extremal)
    }
}
