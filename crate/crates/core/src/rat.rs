//! Exact rational scalars.
//!
//! All coefficients in the engine are `Rat` values: arbitrary-precision
//! rationals kept in lowest terms with a positive denominator. The arithmetic
//! is provided by `num`; this module adds the small constructors and integer
//! helpers the rest of the crate leans on.

use num::bigint::Sign;
use num::{BigInt, BigRational, One, Signed, Zero};

pub type Rat = BigRational;

/// Rational from a machine integer.
pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational n/d (d != 0).
pub fn frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

/// Double factorial n!! (n odd or even, n >= -1).
pub fn double_factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    let mut m = n;
    while m > 1 {
        acc *= BigInt::from(m);
        m -= 2;
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    acc
}

/// Binomial coefficient C(n, k) for small arguments.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Integer power with negative exponents allowed.
pub fn pow(r: &Rat, e: i64) -> Rat {
    if e >= 0 {
        num::pow::pow(r.clone(), e as usize)
    } else {
        num::pow::pow(r.clone(), (-e) as usize).recip()
    }
}

/// Exact decimal rendering: "n" for integers, "n/d" otherwise.
pub fn to_decimal_string(r: &Rat) -> String {
    if is_integer(r) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse "n" or "n/d".
pub fn parse(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Rat::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(Rat::from_integer(n))
    }
}

/// Sign of the rational as -1, 0, 1.
pub fn signum(r: &Rat) -> i32 {
    match r.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

pub fn abs(r: &Rat) -> Rat {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_with_positive_denominator() {
        let r = frac(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
        let s = frac(2, 3) + frac(1, 3);
        assert!(is_integer(&s));
        assert_eq!(s, one());
    }

    #[test]
    fn double_factorials() {
        assert_eq!(double_factorial(5), BigInt::from(15));
        assert_eq!(double_factorial(7), BigInt::from(105));
        assert_eq!(double_factorial(1), BigInt::one());
        assert_eq!(double_factorial(0), BigInt::one());
        assert_eq!(double_factorial(21), BigInt::from(13749310575u64));
    }

    #[test]
    fn decimal_roundtrip() {
        for s in ["105/4", "-44100", "276177175032776063634/25"] {
            let r = parse(s).unwrap();
            assert_eq!(to_decimal_string(&r), s);
        }
        assert!(parse("1/0").is_none());
    }

    #[test]
    fn integer_powers() {
        assert_eq!(pow(&frac(2, 3), -2), frac(9, 4));
        assert_eq!(pow(&int(7), 0), one());
    }
}
