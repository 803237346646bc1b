//! Exact rationals and the handful of helpers the rest of the crate needs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

/// `p / q` as an exact rational. Panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

pub fn ceil(x: &Rational) -> BigInt {
    x.ceil().to_integer()
}

pub fn floor(x: &Rational) -> BigInt {
    x.floor().to_integer()
}

/// Canonical textual form: `"p/q"`, or `"p"` when the denominator is 1.
pub fn to_canonical(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `"p/q"` or `"p"`.
pub fn parse(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rational::new(p, q))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn gcd_all<I: IntoIterator<Item = u64>>(it: I) -> u64 {
    it.into_iter().fold(0, |g, x| g.gcd(&x))
}

pub fn is_nonpositive(x: &Rational) -> bool {
    !x.is_positive()
}
