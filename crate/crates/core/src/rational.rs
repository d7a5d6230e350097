//! Parsing, rendering and comparison helpers for exact rationals.
//!
//! All quantities in this crate are ratios of integers; floats only ever
//! appear at presentation time. A logarithmic quantity is carried around as
//! its exact argument (see `measures::LogValue`), so comparing it against a
//! rational budget reduces to integer arithmetic whenever the log base is 2.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Parses "p/q", "p", or "-p/q" with arbitrary precision. Rejects empty
/// parts, zero denominators and anything with a decimal point or exponent.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad =
        |msg: &str| Error::InvalidArgument(format!("cannot parse `{s}` as a rational: {msg}"));
    let s = s.trim();
    if s.is_empty() {
        return Err(bad("empty string"));
    }
    if s.contains(['.', 'e', 'E']) {
        return Err(bad("floats are not accepted, write an integer or \"p/q\""));
    }
    let (numer, denom) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let numer: BigInt = numer
        .parse()
        .map_err(|_| bad("numerator is not an integer"))?;
    let denom: BigInt = match denom {
        Some(d) => d
            .parse()
            .map_err(|_| bad("denominator is not an integer"))?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(BigRational::new(numer, denom))
}

/// Canonical text form: "p" when the denominator is 1, else "p/q" in lowest
/// terms with the sign on the numerator.
pub fn render_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn big_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn from_usize(n: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn pow_big(base: &BigRational, exp: &BigInt) -> Option<BigRational> {
    let e = exp.to_i32()?;
    Some(num::pow::Pow::pow(base, e))
}

/// Decides `log2(ratio) <= bound` exactly for `ratio > 0`: with `bound = p/q`
/// in lowest terms (q > 0) the claim is equivalent to `ratio^q <= 2^p`.
pub fn log2_le(ratio: &BigRational, bound: &BigRational) -> bool {
    debug_assert!(ratio.is_positive());
    let q = bound.denom();
    let p = bound.numer();
    let two = BigRational::from_integer(BigInt::from(2));
    match (pow_big(ratio, q), pow_big(&two, p)) {
        (Some(lhs), Some(rhs)) => lhs <= rhs,
        // Exponents beyond i32 only arise from adversarial budgets; the f64
        // fallback is still monotone there.
        _ => big_to_f64(ratio).log2() <= big_to_f64(bound),
    }
}

/// Decides `ln(ratio) <= bound`. `e^bound` is transcendental for rational
/// `bound != 0`, so apart from the exact short-circuits at `ratio = 1` and
/// `bound = 0` a tie is impossible and the f64 comparison is trustworthy.
pub fn ln_le(ratio: &BigRational, bound: &BigRational) -> bool {
    debug_assert!(ratio.is_positive());
    if ratio.is_one() {
        return !bound.is_negative();
    }
    if bound.is_zero() {
        return *ratio <= BigRational::one();
    }
    big_to_f64(ratio).ln() <= big_to_f64(bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(parse_rational("7").unwrap(), from_usize(7));
        assert_eq!(
            parse_rational("-3/6").unwrap(),
            BigRational::new(BigInt::from(-1), BigInt::from(2))
        );
        assert_eq!(render_rational(&parse_rational("4/6").unwrap()), "2/3");
        assert_eq!(render_rational(&parse_rational("-8/2").unwrap()), "-4");
    }

    #[test]
    fn rejects_floats_and_zero_denominators() {
        assert!(parse_rational("1.5").is_err());
        assert!(parse_rational("1e3").is_err());
        assert!(parse_rational("3/0").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("a/b").is_err());
    }

    #[test]
    fn log2_comparison_is_exact_on_ties() {
        // log2(8) <= 3 holds with equality; log2(8) <= 2999/1000 does not.
        let eight = from_usize(8);
        assert!(log2_le(&eight, &from_usize(3)));
        assert!(!log2_le(&eight, &parse_rational("2999/1000").unwrap()));
        // log2(4/3) <= 2/5  <=>  (4/3)^5 <= 2^2  <=>  1024/243 <= 4: false.
        assert!(!log2_le(
            &parse_rational("4/3").unwrap(),
            &parse_rational("2/5").unwrap()
        ));
        // log2(5/4) <= 1/3  <=>  125/64 <= 2: true.
        assert!(log2_le(
            &parse_rational("5/4").unwrap(),
            &parse_rational("1/3").unwrap()
        ));
    }

    #[test]
    fn ln_comparison_short_circuits() {
        assert!(ln_le(&BigRational::one(), &BigRational::zero()));
        assert!(!ln_le(&from_usize(2), &BigRational::zero()));
        assert!(ln_le(&from_usize(2), &BigRational::one()));
        assert!(!ln_le(&from_usize(3), &BigRational::one()));
    }
}
