//! Exact truncated q-expansions and the two polynomial bases for theta
//! series of unimodular lattices.
//!
//! The nome is `q = e^{πiτ}` throughout, so the coefficient of `q^k` in a
//! lattice theta series is the number of vectors of squared norm `k`. In this
//! normalisation `E₄` and `Δ` only have even powers of `q`, and `ϑ₂` (which
//! carries a `q^{1/4}`) is only ever exposed through its fourth power.
//!
//! A unimodular lattice of dimension `n = 8μ + ν` has
//!
//! ```text
//! Θ = Σ_{r=0}^{μ} a_r ϑ₃^{n-8r} Δ₈^r,        Δ₈ = ϑ₂⁴ϑ₄⁴ / 16,
//! ```
//!
//! and an even one of dimension `n = 24m + 8k` (`0 ≤ k ≤ 2`) additionally has
//!
//! ```text
//! Θ = E₄^{3m+k} + Σ_{j=1}^{m} b_j E₄^{3(m-j)+k} Δ^j.
//! ```
//!
//! Each basis element has leading term `q^r` (resp. `q^{2j}`) with
//! coefficient 1, so fitting is a forward substitution.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::ThetaCoefficients;
use crate::rat::{fmt_rational, q, qi};

/// A power series in `q` known exactly below `order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    coeffs: Vec<BigRational>,
}

impl QSeries {
    /// The series `Σ coeffs[k] q^k + O(q^{coeffs.len()})`.
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        QSeries { coeffs }
    }

    pub fn from_ints<I: Into<BigInt>, T: IntoIterator<Item = I>>(coeffs: T) -> Self {
        QSeries::new(
            coeffs
                .into_iter()
                .map(|c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn zero(order: usize) -> Self {
        QSeries::new(vec![BigRational::zero(); order])
    }

    pub fn one(order: usize) -> Self {
        let mut s = QSeries::zero(order);
        if order > 0 {
            s.coeffs[0] = BigRational::one();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &BigRational {
        &self.coeffs[k]
    }

    /// Index of the first nonzero coefficient, or `order` if none is known.
    pub fn valuation(&self) -> usize {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .unwrap_or(self.coeffs.len())
    }

    pub fn truncate(mut self, order: usize) -> Self {
        self.coeffs.truncate(order);
        self
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        let n = self.order().min(other.order());
        QSeries::new((0..n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect())
    }

    pub fn sub(&self, other: &QSeries) -> QSeries {
        let n = self.order().min(other.order());
        QSeries::new((0..n).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect())
    }

    pub fn scale(&self, c: &BigRational) -> QSeries {
        QSeries::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiplication by `q^k`.
    pub fn shift(&self, k: usize) -> QSeries {
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        QSeries::new(coeffs)
    }

    /// Truncated product. A factor with valuation `v` lets the other operand's
    /// order stretch by `v`, so the result is known below
    /// `min(order_a + val_b, order_b + val_a)`.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        let (va, vb) = (self.valuation(), other.valuation());
        let order = (self.order() + vb).min(other.order() + va);
        let (na, da) = to_integers(&self.coeffs);
        let (nb, db) = to_integers(&other.coeffs);
        let prod = int_mul(&na, &nb, order);
        let denom = da * db;
        QSeries::new(
            prod.into_iter()
                .map(|c| {
                    if denom.is_one() {
                        BigRational::from_integer(c)
                    } else {
                        BigRational::new(c, denom.clone())
                    }
                })
                .collect(),
        )
    }

    /// `self^e`; `e = 0` gives the unit series at the operand's order.
    pub fn pow(&self, mut e: u32) -> QSeries {
        let mut acc = QSeries::one(self.order());
        let mut base = self.clone();
        let mut first = true;
        while e > 0 {
            if e & 1 == 1 {
                acc = if first { base.clone() } else { acc.mul(&base) };
                first = false;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `true` when every coefficient is a non-negative integer.
    pub fn is_nonnegative_integral(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.is_integer() && *c.numer() >= BigInt::zero())
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(fmt_rational).collect();
        write!(f, "[{}] + O(q^{})", parts.join(", "), self.order())
    }
}

/// Clears denominators: returns integer numerators over a common denominator.
fn to_integers(c: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let l = c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let v = c
        .iter()
        .map(|x| {
            if l.is_one() {
                x.numer().clone()
            } else {
                x.numer() * (&l / x.denom())
            }
        })
        .collect();
    (v, l)
}

fn int_mul(a: &[BigInt], b: &[BigInt], order: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); order];
    for (i, x) in a.iter().enumerate().take(order) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(order - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Multiplies `s` in place by `(1 + sign·q^e)^power` below `s.len()`.
fn mul_binomial(s: &mut [BigInt], e: usize, negative: bool, power: u32) {
    for _ in 0..power {
        for k in (e..s.len()).rev() {
            let t = s[k - e].clone();
            if negative {
                s[k] -= t;
            } else {
                s[k] += t;
            }
        }
    }
}

/// `∏_{n≥1} (1 - q^{2n})^{a} (1 ± q^{odd_or_even(n)})^{b}` below `order`.
fn theta_product(order: usize, a: u32, second_exp: fn(usize) -> usize, negative: bool, b: u32) -> Vec<BigInt> {
    let mut s = vec![BigInt::zero(); order];
    if order == 0 {
        return s;
    }
    s[0] = BigInt::one();
    let mut n = 1;
    loop {
        let even = 2 * n;
        let second = second_exp(n);
        if even >= order && second >= order {
            break;
        }
        if even < order {
            mul_binomial(&mut s, even, true, a);
        }
        if second < order {
            mul_binomial(&mut s, second, negative, b);
        }
        n += 1;
    }
    s
}

/// Symbols with an exact q-expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaseSymbol {
    Theta3,
    Theta2Pow4,
    Theta4,
    E4,
    Delta,
    Delta8,
}

impl FromStr for BaseSymbol {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "theta3" => BaseSymbol::Theta3,
            "theta2_pow4" => BaseSymbol::Theta2Pow4,
            "theta4" => BaseSymbol::Theta4,
            "E4" => BaseSymbol::E4,
            "Delta" => BaseSymbol::Delta,
            "Delta8" => BaseSymbol::Delta8,
            other => return Err(Error::UnknownSymbol(other.to_string())),
        })
    }
}

fn ints(v: Vec<BigInt>) -> QSeries {
    QSeries::new(v.into_iter().map(BigRational::from_integer).collect())
}

/// Exact expansion of a basic modular object to `O(q^order)`.
pub fn base_series(symbol: BaseSymbol, order: usize) -> Result<QSeries> {
    if order == 0 {
        return Err(Error::Domain("series order must be at least 1".into()));
    }
    let odd = |n: usize| 2 * n - 1;
    let even = |n: usize| 2 * n;
    Ok(match symbol {
        BaseSymbol::Theta3 => ints(theta_product(order, 1, odd, false, 2)),
        BaseSymbol::Theta4 => ints(theta_product(order, 1, odd, true, 2)),
        BaseSymbol::Theta2Pow4 => {
            // (2q^{1/4} ∏(1-q^{2n})(1+q^{2n})²)⁴ = 16q ∏(1-q^{2n})⁴(1+q^{2n})⁸
            let inner = ints(theta_product(order - 1, 4, even, false, 8));
            inner.shift(1).scale(&qi(16))
        }
        BaseSymbol::E4 => {
            let t2 = base_series(BaseSymbol::Theta2Pow4, order)?;
            let t3 = base_series(BaseSymbol::Theta3, order)?;
            let t4 = base_series(BaseSymbol::Theta4, order)?;
            t2.pow(2)
                .add(&t3.pow(8))
                .add(&t4.pow(8))
                .scale(&q(1, 2))
                .truncate(order)
        }
        BaseSymbol::Delta => {
            let t2 = base_series(BaseSymbol::Theta2Pow4, order)?;
            let t3 = base_series(BaseSymbol::Theta3, order)?;
            let t4 = base_series(BaseSymbol::Theta4, order)?;
            t2.pow(2)
                .mul(&t3.pow(8))
                .mul(&t4.pow(8))
                .scale(&q(1, 256))
                .truncate(order)
        }
        BaseSymbol::Delta8 => {
            let t2 = base_series(BaseSymbol::Theta2Pow4, order)?;
            let t4 = base_series(BaseSymbol::Theta4, order)?;
            t2.mul(&t4.pow(4)).scale(&q(1, 16)).truncate(order)
        }
    })
}

/// [`base_series`] by name: `theta3`, `theta2_pow4`, `theta4`, `E4`,
/// `Delta` or `Delta8`.
pub fn base_series_named(name: &str, order: usize) -> Result<QSeries> {
    base_series(name.parse()?, order)
}

/// Coefficients `a_0 … a_μ` of `Θ = Σ a_r ϑ₃^{n-8r} Δ₈^r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisCoeffsGeneral {
    n: usize,
    a: Vec<BigRational>,
}

impl BasisCoeffsGeneral {
    pub fn new(n: usize, a: Vec<BigRational>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("dimension must be positive".into()));
        }
        if a.len() != n / 8 + 1 {
            return Err(Error::Domain(format!(
                "dimension {n} needs {} a-coefficients, got {}",
                n / 8 + 1,
                a.len()
            )));
        }
        Ok(BasisCoeffsGeneral { n, a })
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn mu(&self) -> usize {
        self.n / 8
    }
    pub fn nu(&self) -> usize {
        self.n % 8
    }
    pub fn a(&self) -> &[BigRational] {
        &self.a
    }
}

/// Coefficients `b_1 … b_m` of `Θ = E₄^{3m+k} + Σ b_j E₄^{3(m-j)+k} Δ^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisCoeffsEven {
    n: usize,
    b: Vec<BigRational>,
}

impl BasisCoeffsEven {
    pub fn new(n: usize, b: Vec<BigRational>) -> Result<Self> {
        if n == 0 || n % 8 != 0 {
            return Err(Error::Domain(format!(
                "even unimodular dimension must be a positive multiple of 8, got {n}"
            )));
        }
        if b.len() != n / 24 {
            return Err(Error::Domain(format!(
                "dimension {n} needs {} b-coefficients, got {}",
                n / 24,
                b.len()
            )));
        }
        Ok(BasisCoeffsEven { n, b })
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn m(&self) -> usize {
        self.n / 24
    }
    pub fn k(&self) -> usize {
        (self.n % 24) / 8
    }
    /// `b_1 … b_m` (index 0 holds `b_1`).
    pub fn b(&self) -> &[BigRational] {
        &self.b
    }
}

/// Fitting order used when nothing else is specified: room for the
/// `μ + 1` unknowns and a handful of surplus consistency checks.
pub fn default_order(n: usize) -> usize {
    2 * (n / 8 + 1) + 4
}

/// `ϑ₃^{n-8r} Δ₈^r` for `r = 0..=μ`, all below `order`.
fn general_basis(n: usize, order: usize) -> Vec<QSeries> {
    let mu = n / 8;
    let t3 = base_series(BaseSymbol::Theta3, order).expect("order ≥ 1");
    let d8 = base_series(BaseSymbol::Delta8, order).expect("order ≥ 1");
    let t8 = t3.pow(8);
    let tail = t3.pow((n % 8) as u32);
    let mut t8_pows = vec![QSeries::one(order)];
    let mut d8_pows = vec![QSeries::one(order)];
    for i in 1..=mu {
        t8_pows.push(t8_pows[i - 1].mul(&t8).truncate(order));
        d8_pows.push(d8_pows[i - 1].mul(&d8).truncate(order));
    }
    (0..=mu)
        .map(|r| tail.mul(&t8_pows[mu - r]).mul(&d8_pows[r]).truncate(order))
        .collect()
}

/// `E₄^{3(m-j)+k} Δ^j` for `j = 0..=m`, all below `order`.
fn even_basis(n: usize, order: usize) -> Vec<QSeries> {
    let (m, k) = (n / 24, (n % 24) / 8);
    let e4 = base_series(BaseSymbol::E4, order).expect("order ≥ 1");
    let delta = base_series(BaseSymbol::Delta, order).expect("order ≥ 1");
    let e4_cubed = e4.pow(3);
    let e4_k = e4.pow(k as u32);
    let mut cubes = vec![QSeries::one(order)];
    let mut deltas = vec![QSeries::one(order)];
    for i in 1..=m {
        cubes.push(cubes[i - 1].mul(&e4_cubed).truncate(order));
        deltas.push(deltas[i - 1].mul(&delta).truncate(order));
    }
    (0..=m)
        .map(|j| e4_k.mul(&cubes[m - j]).mul(&deltas[j]).truncate(order))
        .collect()
}

fn combine(basis: &[QSeries], weights: &[BigRational], order: usize) -> QSeries {
    basis
        .iter()
        .zip(weights)
        .fold(QSeries::zero(order), |acc, (f, w)| acc.add(&f.scale(w)))
}

/// Theta series `Σ a_r ϑ₃^{n-8r} Δ₈^r` to `O(q^order)`.
pub fn expand_general(c: &BasisCoeffsGeneral, order: usize) -> QSeries {
    combine(&general_basis(c.n, order), &c.a, order)
}

/// Theta series `E₄^{3m+k} + Σ b_j E₄^{3(m-j)+k} Δ^j` to `O(q^order)`.
pub fn expand_even(c: &BasisCoeffsEven, order: usize) -> QSeries {
    let mut weights = vec![BigRational::one()];
    weights.extend(c.b.iter().cloned());
    combine(&even_basis(c.n, order), &weights, order)
}

/// Every observed coefficient must match the fitted expansion.
fn check_surplus(observed: &[BigRational], fitted: &QSeries) -> Result<()> {
    for (index, got) in observed.iter().enumerate() {
        let expected = fitted.coeff(index);
        if expected != got {
            return Err(Error::CoefficientMismatch {
                index,
                expected: fmt_rational(expected),
                got: fmt_rational(got),
            });
        }
    }
    Ok(())
}

/// Finds the unique `a_r` reproducing `N_0 … N_μ`; any further coefficients
/// supplied must then agree with the fitted expansion.
pub fn fit_a_basis(theta: &ThetaCoefficients, n: usize) -> Result<BasisCoeffsGeneral> {
    if n == 0 {
        return Err(Error::Domain("dimension must be positive".into()));
    }
    let mu = n / 8;
    let observed = theta.as_rationals();
    let order = observed.len();
    if order < mu + 1 {
        return Err(Error::InsufficientCoefficients {
            needed: mu + 1,
            got: order,
        });
    }
    let basis = general_basis(n, order);
    let mut a: Vec<BigRational> = Vec::with_capacity(mu + 1);
    for r in 0..=mu {
        let known: BigRational = a
            .iter()
            .zip(&basis)
            .map(|(ai, f)| ai * f.coeff(r))
            .sum();
        // leading coefficient of basis[r] at q^r is 1
        a.push(&observed[r] - known);
    }
    check_surplus(&observed, &combine(&basis, &a, order))?;
    BasisCoeffsGeneral::new(n, a)
}

/// Finds the unique `b_j` for an even lattice from `N_0, N_2, …, N_{2m}`;
/// odd-norm counts must vanish and surplus coefficients must agree.
pub fn fit_b_basis(theta: &ThetaCoefficients, n: usize) -> Result<BasisCoeffsEven> {
    if n == 0 || n % 8 != 0 {
        return Err(Error::Domain(format!(
            "even unimodular dimension must be a positive multiple of 8, got {n}"
        )));
    }
    let observed = theta.as_rationals();
    for (index, c) in observed.iter().enumerate().skip(1).step_by(2) {
        if !c.is_zero() {
            return Err(Error::OddCoefficient {
                index,
                value: fmt_rational(c),
            });
        }
    }
    let m = n / 24;
    let order = observed.len();
    if order < 2 * m + 1 {
        return Err(Error::InsufficientCoefficients {
            needed: 2 * m + 1,
            got: order,
        });
    }
    let basis = even_basis(n, order);
    let mut weights = vec![BigRational::one()];
    for j in 1..=m {
        let known: BigRational = weights
            .iter()
            .zip(&basis)
            .map(|(w, f)| w * f.coeff(2 * j))
            .sum();
        weights.push(&observed[2 * j] - known);
    }
    check_surplus(&observed, &combine(&basis, &weights, order))?;
    BasisCoeffsEven::new(n, weights.split_off(1))
}

/// The extremal theta series in dimension `n`: the unique `b_j` that make
/// `N_2 = … = N_{2m} = 0`, so the minimum norm is `2m + 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremalCoeffs {
    pub coeffs: BasisCoeffsEven,
    /// `2m + 2`.
    pub min_norm: usize,
    /// `N_{2m+2}`, the number of minimal vectors.
    pub kissing_number: BigRational,
}

pub fn extremal_b_coeffs(n: usize) -> Result<ExtremalCoeffs> {
    if n < 8 || n % 8 != 0 {
        return Err(Error::Domain(format!(
            "extremal dimension must be a positive multiple of 8, got {n}"
        )));
    }
    let m = n / 24;
    let order = 2 * m + 3;
    let basis = even_basis(n, order);
    let mut weights = vec![BigRational::one()];
    for j in 1..=m {
        let known: BigRational = weights
            .iter()
            .zip(&basis)
            .map(|(w, f)| w * f.coeff(2 * j))
            .sum();
        weights.push(-known);
    }
    let series = combine(&basis, &weights, order);
    let kissing_number = series.coeff(2 * m + 2).clone();
    Ok(ExtremalCoeffs {
        coeffs: BasisCoeffsEven::new(n, weights.split_off(1))?,
        min_norm: 2 * m + 2,
        kissing_number,
    })
}
