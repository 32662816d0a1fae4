//! Small helpers around `BigRational`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parses `"7"`, `"-45/16"` or `" 3 / 4 "`.
pub fn parse_rational(s: &str) -> Result<Q> {
    let bad = || Error::Descriptor(format!("not a rational number: `{s}`"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Canonical text: `n` for integers, `n/d` otherwise.
pub fn fmt_rational(r: &Q) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Positional decimal with `digits` significant digits, rounded half away
/// from zero, trailing zeros dropped: `fmt_decimal(&q(256, 63), 12)` is
/// `"4.06349206349"`.
pub fn fmt_decimal(r: &Q, digits: usize) -> String {
    assert!(digits > 0, "at least one significant digit");
    if r.is_zero() {
        return "0".to_string();
    }
    let a = r.abs();
    let ten = BigInt::from(10);
    // 10^e <= a < 10^(e+1)
    let mut e = a.numer().to_string().len() as i64 - a.denom().to_string().len() as i64;
    let pow10 = |k: i64| -> Q {
        if k >= 0 {
            Q::from_integer(ten.pow(k as u32))
        } else {
            Q::new(BigInt::one(), ten.pow((-k) as u32))
        }
    };
    while a < pow10(e) {
        e -= 1;
    }
    while a >= pow10(e + 1) {
        e += 1;
    }
    let scaled = &a * pow10(digits as i64 - 1 - e);
    let mut int = (scaled + q(1, 2)).floor().to_integer();
    if int == ten.pow(digits as u32) {
        int /= &ten;
        e += 1;
    }
    let s = int.to_string();
    let mut out = String::new();
    if r.is_negative() {
        out.push('-');
    }
    if e < 0 {
        out.push_str("0.");
        out.push_str(&"0".repeat((-e - 1) as usize));
        out.push_str(&s);
    } else if e as usize >= digits - 1 {
        out.push_str(&s);
        out.push_str(&"0".repeat(e as usize + 1 - digits));
        return out;
    } else {
        let (head, tail) = s.split_at(e as usize + 1);
        out.push_str(head);
        out.push('.');
        out.push_str(tail);
    }
    let trimmed = out.trim_end_matches('0').trim_end_matches('.');
    trimmed.to_string()
}

/// `fmt_decimal` of the exact binary value of `x`.
pub fn fmt_decimal_f64(x: f64, digits: usize) -> String {
    match Q::from_float(x) {
        Some(r) => fmt_decimal(&r, digits),
        None => x.to_string(),
    }
}

pub fn sign(r: &Q) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("-45/16").unwrap(), q(-45, 16));
        assert_eq!(parse_rational(" 6 / 4 ").unwrap(), q(3, 2));
        assert_eq!(parse_rational("12").unwrap(), qi(12));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(fmt_rational(&q(-6, 4)), "-3/2");
        assert_eq!(fmt_rational(&qi(5)), "5");
    }

    #[test]
    fn decimals() {
        assert_eq!(fmt_decimal(&q(256, 63), 12), "4.06349206349");
        assert_eq!(fmt_decimal(&q(4, 3), 12), "1.33333333333");
        assert_eq!(fmt_decimal(&q(-2, 3), 3), "-0.667");
        assert_eq!(fmt_decimal(&q(1, 4), 12), "0.25");
        assert_eq!(fmt_decimal(&q(1, 4000), 2), "0.00025");
        assert_eq!(fmt_decimal(&qi(123456), 3), "123000");
        assert_eq!(fmt_decimal(&q(9999, 1000), 3), "10");
        assert_eq!(fmt_decimal(&qi(0), 5), "0");
        assert_eq!(fmt_decimal_f64(1.0, 12), "1");
        assert_eq!(fmt_decimal_f64(0.1, 12), "0.1");
    }
}
