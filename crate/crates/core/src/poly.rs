//! Univariate polynomials over the rationals.
//!
//! Coefficients are stored lowest degree first and trailing zeros are always
//! trimmed, so the zero polynomial has no coefficients at all and structural
//! equality is mathematical equality.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::dd::Dd;
use crate::rat::{fmt_rational, qi};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PolyQ {
    coeffs: Vec<BigRational>,
}

impl PolyQ {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        PolyQ { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        PolyQ::new(coeffs.iter().map(|&c| qi(c)).collect())
    }

    pub fn zero() -> Self {
        PolyQ { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        PolyQ::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        PolyQ::new(vec![c])
    }

    /// `c * z^k`.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.push(c);
        PolyQ::new(coeffs)
    }

    /// `z - r`.
    pub fn linear_root(r: BigRational) -> Self {
        PolyQ::new(vec![-r, BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, z: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * z + c)
    }

    pub fn eval_dd(&self, z: Dd) -> Dd {
        self.coeffs
            .iter()
            .rev()
            .fold(Dd::ZERO, |acc, c| acc * z + Dd::from_rational(c))
    }

    pub fn derivative(&self) -> PolyQ {
        PolyQ::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * qi(k as i64))
                .collect(),
        )
    }

    pub fn scale(&self, c: &BigRational) -> PolyQ {
        PolyQ::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, mut e: u32) -> PolyQ {
        let mut base = self.clone();
        let mut acc = PolyQ::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &PolyQ) -> (PolyQ, PolyQ) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (PolyQ::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                for (i, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + i] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (PolyQ::new(quot), PolyQ::new(rem))
    }

    pub fn rem(&self, divisor: &PolyQ) -> PolyQ {
        self.div_rem(divisor).1
    }

    pub fn monic(&self) -> PolyQ {
        match self.leading() {
            Some(l) => self.scale(&l.recip()),
            None => PolyQ::zero(),
        }
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &PolyQ) -> PolyQ {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Divides out the factor `(z - r)` as often as it divides, returning the
    /// quotient and the multiplicity.
    pub fn deflate(&self, r: &BigRational) -> (PolyQ, usize) {
        let lin = PolyQ::linear_root(r.clone());
        let mut p = self.clone();
        let mut mult = 0;
        while !p.is_zero() && p.eval(r).is_zero() {
            p = p.div_rem(&lin).0;
            mult += 1;
        }
        (p, mult)
    }

    /// `p / gcd(p, p')`: same distinct roots, all simple.
    pub fn square_free(&self) -> PolyQ {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0
    }
}

impl Add for &PolyQ {
    type Output = PolyQ;
    fn add(self, rhs: &PolyQ) -> PolyQ {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyQ::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &PolyQ {
    type Output = PolyQ;
    fn sub(self, rhs: &PolyQ) -> PolyQ {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyQ::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &PolyQ {
    type Output = PolyQ;
    fn mul(self, rhs: &PolyQ) -> PolyQ {
        if self.is_zero() || rhs.is_zero() {
            return PolyQ::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolyQ::new(out)
    }
}

impl Neg for &PolyQ {
    type Output = PolyQ;
    fn neg(self) -> PolyQ {
        PolyQ::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for PolyQ {
            type Output = PolyQ;
            fn $m(self, rhs: PolyQ) -> PolyQ {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Prints like `1 - 3*z + 3/16*z^2 - z^3`.
impl fmt::Display for PolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            let var = match k {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{k}"),
            };
            if k == 0 {
                write!(f, "{}", fmt_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{}*{var}", fmt_rational(&mag))?;
            }
        }
        Ok(())
    }
}
