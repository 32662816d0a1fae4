//! Numerical evaluation of the Jacobi theta constants on the imaginary axis.
//!
//! With `τ = yi` the nome is `q = e^{-πy}` and
//!
//! ```text
//! ϑ₂ = Σ_{n∈ℤ} q^{(n+1/2)²}   = 2q^{1/4} ∏ (1 - q^{2n})(1 + q^{2n})²
//! ϑ₃ = Σ_{n∈ℤ} q^{n²}         =          ∏ (1 - q^{2n})(1 + q^{2n-1})²
//! ϑ₄ = Σ_{n∈ℤ} (-1)ⁿ q^{n²}   =          ∏ (1 - q^{2n})(1 - q^{2n-1})²
//! ```
//!
//! Both forms are implemented independently so that each can check the
//! other. All internal work is done in double-double arithmetic and both
//! truncation rules carry an explicit geometric tail bound.
//!
//! For `y < 0.1` the nome approaches 1 and neither form converges quickly, so
//! the arguments are first mapped through `y -> 1/y` using
//! `ϑ₂(i/y) = √y ϑ₄(yi)`, `ϑ₃(i/y) = √y ϑ₃(yi)`, `ϑ₄(i/y) = √y ϑ₂(yi)`.

use crate::dd::Dd;
use crate::error::{Error, Result};

/// Below this `y` the modular transformation is applied first.
const SMALL_Y: f64 = 0.1;

/// Absolute error used when a theta value feeds another computation.
pub(crate) const INTERNAL_EPS: f64 = 1e-28;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ThetaKind {
    Theta2,
    Theta3,
    Theta4,
}

impl ThetaKind {
    pub const ALL: [ThetaKind; 3] = [ThetaKind::Theta2, ThetaKind::Theta3, ThetaKind::Theta4];

    /// The function `ϑ(i/y)` is expressed through after the `y -> 1/y` swap.
    fn dual(self) -> ThetaKind {
        match self {
            ThetaKind::Theta2 => ThetaKind::Theta4,
            ThetaKind::Theta3 => ThetaKind::Theta3,
            ThetaKind::Theta4 => ThetaKind::Theta2,
        }
    }
}

/// A point `τ = yi` together with the absolute error tolerated in the result.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalRequest {
    y: f64,
    precision: f64,
}

impl EvalRequest {
    pub fn new(y: f64, precision: f64) -> Result<Self> {
        check_y(y)?;
        if !(precision > 0.0 && precision.is_finite()) {
            return Err(Error::Domain(format!("precision must be positive, got {precision}")));
        }
        Ok(EvalRequest { y, precision })
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn precision(&self) -> f64 {
        self.precision
    }
}

pub(crate) fn check_y(y: f64) -> Result<()> {
    if y > 0.0 && y.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("y must be a positive real, got {y}")))
    }
}

fn nome(y: Dd) -> Dd {
    (-(Dd::PI * y)).exp()
}

/// Lattice-sum form, valid for any `y > 0` but only used directly when the
/// nome is small.
fn series_direct(kind: ThetaKind, y: Dd, eps: f64) -> Dd {
    let q = nome(y);
    let q2 = q * q;
    match kind {
        ThetaKind::Theta3 | ThetaKind::Theta4 => {
            let alternating = kind == ThetaKind::Theta4;
            let mut sum = Dd::ONE;
            // term = q^{n²}, step = q^{2n+1}
            let mut term = q;
            let mut step = q * q2;
            let mut n = 1u32;
            loop {
                let signed = if alternating && n % 2 == 1 { -term } else { term };
                sum += signed * 2.0;
                let next = term * step;
                // tail 2 Σ_{m>n} q^{m²} ≤ 2 q^{(n+1)²} / (1 - q^{2n+3})
                let ratio = (step * q2).to_f64();
                let tail = 2.0 * next.to_f64() / (1.0 - ratio);
                if tail < eps / 2.0 || next.hi == 0.0 {
                    break;
                }
                term = next;
                step *= q2;
                n += 1;
            }
            sum
        }
        ThetaKind::Theta2 => {
            let quarter = (-(Dd::PI * y) / 4.0).exp();
            let lead = quarter * 2.0;
            // 2q^{1/4} Σ_{n≥0} q^{n(n+1)}; term = q^{n(n+1)}, step = q^{2n+2}
            let mut sum = Dd::ONE;
            let mut term = Dd::ONE;
            let mut step = q2;
            loop {
                let next = term * step;
                let ratio = (step * q2).to_f64();
                let tail = 2.0 * quarter.to_f64() * next.to_f64() / (1.0 - ratio);
                if tail < eps / 2.0 || next.hi == 0.0 {
                    break;
                }
                sum += next;
                term = next;
                step *= q2;
            }
            lead * sum
        }
    }
}

fn product_direct(kind: ThetaKind, y: Dd, eps: f64) -> Dd {
    let q = nome(y);
    let q2 = q * q;
    let qf = q.to_f64();
    let mut prod = match kind {
        ThetaKind::Theta2 => (-(Dd::PI * y) / 4.0).exp() * 2.0,
        _ => Dd::ONE,
    };
    // even = q^{2n}, odd = q^{2n-1}
    let mut even = q2;
    let mut odd = q;
    loop {
        let factor = match kind {
            ThetaKind::Theta2 => (Dd::ONE - even) * (Dd::ONE + even) * (Dd::ONE + even),
            ThetaKind::Theta3 => (Dd::ONE - even) * (Dd::ONE + odd) * (Dd::ONE + odd),
            ThetaKind::Theta4 => (Dd::ONE - even) * (Dd::ONE - odd) * (Dd::ONE - odd),
        };
        prod *= factor;
        odd *= q2;
        even *= q2;
        // every later factor differs from 1 by at most 8q^{2m-1}; their sum
        // after this point is at most δ = 8q^{2n+1} / (1 - q²)
        let delta = 8.0 * odd.to_f64() / (1.0 - qf * qf);
        if delta < 0.5 && 2.0 * delta * prod.abs().to_f64() < eps / 2.0 {
            break;
        }
        if odd.hi == 0.0 {
            break;
        }
    }
    prod
}

fn transformed(
    kind: ThetaKind,
    y: Dd,
    eps: f64,
    direct: fn(ThetaKind, Dd, f64) -> Dd,
) -> Dd {
    if y.to_f64() >= SMALL_Y {
        direct(kind, y, eps)
    } else {
        let s = y.sqrt();
        direct(kind.dual(), y.recip(), eps * s.to_f64()) / s
    }
}

pub(crate) fn theta_series_dd(kind: ThetaKind, y: Dd, eps: f64) -> Dd {
    transformed(kind, y, eps, series_direct)
}

pub(crate) fn theta_product_dd(kind: ThetaKind, y: Dd, eps: f64) -> Dd {
    transformed(kind, y, eps, product_direct)
}

/// `[ϑ₂, ϑ₃, ϑ₄]` at `yi` from the series form.
pub(crate) fn thetas_dd(y: Dd, eps: f64) -> [Dd; 3] {
    ThetaKind::ALL.map(|k| theta_series_dd(k, y, eps))
}

/// `ϑ(yi)` from the lattice-sum definition.
pub fn eval_theta(kind: ThetaKind, req: EvalRequest) -> Result<f64> {
    let req = EvalRequest::new(req.y, req.precision)?;
    Ok(theta_series_dd(kind, Dd::from_f64(req.y), req.precision).to_f64())
}

/// `ϑ(yi)` from the infinite-product representation.
pub fn eval_theta_product(kind: ThetaKind, req: EvalRequest) -> Result<f64> {
    let req = EvalRequest::new(req.y, req.precision)?;
    Ok(theta_product_dd(kind, Dd::from_f64(req.y), req.precision).to_f64())
}

pub(crate) fn z_dd(y: Dd) -> Dd {
    let [t2, t3, t4] = thetas_dd(y, INTERNAL_EPS);
    let r = t2 * t4 / (t3 * t3);
    let r2 = r * r;
    r2 * r2
}

/// `z(y) = ϑ₂⁴ϑ₄⁴ / ϑ₃⁸` at `τ = yi`; lies in `(0, 1/4]` with the maximum at
/// `y = 1`. Underflows to zero once `y` leaves roughly `[0.004, 240]`.
pub fn z_of_y(y: f64, precision: f64) -> Result<f64> {
    EvalRequest::new(y, precision)?;
    Ok(z_dd(Dd::from_f64(y)).to_f64())
}

/// The same `z`, computed instead as `(2 (g^{1/24} ∏ (1 + (-g)ⁿ))⁶)⁴` with
/// `g = e^{-πy}`. The inner expression equals `ϑ₂ϑ₄/ϑ₃²`.
pub fn z_of_y_product(y: f64, precision: f64) -> Result<f64> {
    EvalRequest::new(y, precision)?;
    let mut yd = Dd::from_f64(y);
    if y < 1.0 {
        // z(y) = z(1/y); keeps g ≤ e^{-π}
        yd = yd.recip();
    }
    let g = nome(yd);
    let mut prod = Dd::ONE;
    let mut pow = -g;
    loop {
        prod *= Dd::ONE + pow;
        pow = pow * -g;
        if pow.abs().to_f64() < INTERNAL_EPS * 1e-3 {
            break;
        }
    }
    // (2 g^{1/4} prod⁶)⁴ = 16 g prod²⁴
    Ok((g * prod.powi(24) * 16.0).to_f64())
}

/// Residuals of the identities the rest of the crate relies on at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdentityResiduals {
    /// `|ϑ₂(i/y) - √y ϑ₄(yi)|`
    pub theta2: f64,
    /// `|ϑ₃(i/y) - √y ϑ₃(yi)|`
    pub theta3: f64,
    /// `|ϑ₄(i/y) - √y ϑ₂(yi)|`
    pub theta4: f64,
    /// `|ϑ₂⁴ + ϑ₄⁴ - ϑ₃⁴|` at `yi`
    pub jacobi: f64,
}

impl IdentityResiduals {
    pub fn max(&self) -> f64 {
        self.theta2.max(self.theta3).max(self.theta4).max(self.jacobi)
    }
}

/// Evaluates both sides of the `y -> 1/y` transformation laws and the Jacobi
/// quartic identity. Only meaningful for `y` and `1/y` in `[0.1, 10]`;
/// outside that range one side is itself computed through the
/// transformation.
pub fn check_transform_identities(y: f64, precision: f64) -> Result<IdentityResiduals> {
    EvalRequest::new(y, precision)?;
    let eps = precision.min(1e-20);
    let yd = Dd::from_f64(y);
    let at = thetas_dd(yd, eps);
    let inv = thetas_dd(yd.recip(), eps);
    let s = yd.sqrt();
    let res = |a: Dd, b: Dd| (a - b).abs().to_f64();
    let [t2, t3, t4] = at;
    let p4 = |x: Dd| {
        let x2 = x * x;
        x2 * x2
    };
    Ok(IdentityResiduals {
        theta2: res(inv[0], s * t4),
        theta3: res(inv[1], s * t3),
        theta4: res(inv[2], s * t2),
        jacobi: res(p4(t2) + p4(t4), p4(t3)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    // mpmath.jtheta at q = e^{-πy}, 40 digits
    const THETA_AT_1: [f64; 3] = [
        0.913_579_138_156_116_821_407_242_593_401_222,
        1.086_434_811_213_308_014_575_316_121_510_223,
        0.913_579_138_156_116_821_407_242_593_401_222,
    ];
    const THETA_AT_2: [f64; 3] = [
        0.415_760_602_596_027_032_314_507_136_284_744,
        1.003_734_885_487_739_091_047_679_595_066_954,
        0.996_265_114_560_907_135_789_957_638_522_668,
    ];

    fn req(y: f64, p: f64) -> EvalRequest {
        EvalRequest::new(y, p).unwrap()
    }

    #[test]
    fn rejects_bad_requests() {
        assert!(EvalRequest::new(0.0, 1e-12).is_err());
        assert!(EvalRequest::new(-1.0, 1e-12).is_err());
        assert!(EvalRequest::new(1.0, 0.0).is_err());
        assert!(EvalRequest::new(f64::NAN, 1e-12).is_err());
        assert!(z_of_y(-2.0, 1e-12).is_err());
        assert!(check_transform_identities(0.0, 1e-12).is_err());
    }

    #[test]
    fn theta3_large_y_is_one() {
        let v = eval_theta(ThetaKind::Theta3, req(50.0, 1e-15)).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn series_matches_reference_values() {
        for (y, expected) in [(1.0, THETA_AT_1), (2.0, THETA_AT_2)] {
            for (k, e) in ThetaKind::ALL.into_iter().zip(expected) {
                let v = eval_theta(k, req(y, 1e-15)).unwrap();
                assert!((v - e).abs() < 2e-16, "{k:?} at {y}: {v} vs {e}");
            }
        }
        let t2 = eval_theta(ThetaKind::Theta2, req(1.0, 1e-15)).unwrap();
        let t4 = eval_theta(ThetaKind::Theta4, req(1.0, 1e-15)).unwrap();
        assert!((t2 - t4).abs() < 1e-15);
    }

    #[test]
    fn product_agrees_with_series() {
        let eps = 1e-13;
        for y in [0.05, 0.5, 1.0, 2.0, 7.5, 30.0] {
            for k in ThetaKind::ALL {
                let s = eval_theta(k, req(y, eps)).unwrap();
                let p = eval_theta_product(k, req(y, eps)).unwrap();
                assert!((s - p).abs() <= 2.0 * eps, "{k:?} at {y}: {s} vs {p}");
            }
        }
        let p4 = eval_theta_product(ThetaKind::Theta4, req(2.0, 1e-14)).unwrap();
        assert!((p4 - THETA_AT_2[2]).abs() < 1e-12);
        let p2 = eval_theta_product(ThetaKind::Theta2, req(1.0, 1e-14)).unwrap();
        assert!((p2 - THETA_AT_1[0]).abs() < 1e-12);
    }

    #[test]
    fn small_y_goes_through_transformation() {
        // ϑ₃(0.05 i) = ϑ₃(20 i) / √0.05
        let v = eval_theta(ThetaKind::Theta3, req(0.05, 1e-14)).unwrap();
        let direct = series_direct(ThetaKind::Theta3, Dd::from_f64(0.05), 1e-20).to_f64();
        assert!((v - direct).abs() < 1e-13, "{v} vs {direct}");
    }

    #[test]
    fn z_at_one_is_a_quarter() {
        let z = z_of_y(1.0, 1e-12).unwrap();
        assert!((z - 0.25).abs() < 1e-15);
        let zp = z_of_y_product(1.0, 1e-12).unwrap();
        assert!((zp - 0.25).abs() < 1e-15);
    }

    #[test]
    fn z_reference_values() {
        // mpmath: z(2) = z(1/2) = 0.028570699745639325468..., z(5) = 2.4112189196124294e-6
        let z2 = z_of_y(2.0, 1e-12).unwrap();
        assert!((z2 - 0.028_570_699_745_639_325).abs() < 1e-17);
        let zh = z_of_y(0.5, 1e-12).unwrap();
        assert!((z2 - zh).abs() < 1e-16);
        let z5 = z_of_y(5.0, 1e-12).unwrap();
        assert!((z5 - 2.411_218_919_612_429_4e-6).abs() < 1e-20);
        // leading q-term: z = 16q + O(q²)
        let lead = 16.0 * (-5.0 * std::f64::consts::PI).exp();
        assert!((z5 / lead - 1.0).abs() < 0.1);
    }

    #[test]
    fn product_path_z_matches() {
        for y in [0.2, 0.7, 1.0, 1.9, 4.0, 11.0] {
            let a = z_of_y(y, 1e-12).unwrap();
            let b = z_of_y_product(y, 1e-12).unwrap();
            assert!((a - b).abs() < 1e-15, "{y}: {a} vs {b}");
        }
    }

    #[test]
    fn transformation_residuals_small() {
        for y in [1.0, 2.0, 0.3] {
            let r = check_transform_identities(y, 1e-14).unwrap();
            assert!(r.max() <= 1e-12, "{y}: {r:?}");
        }
        let r = check_transform_identities(1.0, 1e-14).unwrap();
        assert_eq!(r.theta2, r.theta4);
    }
}
