//! Scalar abstraction for all numeric code in the crate.
//!
//! Weights, capacities and fractional coordinates only need an ordered
//! signed ring, so the flow solver, the closure reduction and the
//! polytope checks are generic over [`Scalar`]. Exactness matters:
//! cut and closure optimality is decided by comparisons, never by
//! tolerances, which rules out floating point for those paths.

use num_traits::Signed;

/// Ordered signed numeric type: exact rationals and built-in integers
/// both qualify; floats do not (no total order).
pub trait Scalar: Clone + Ord + Signed + std::fmt::Debug {}

impl<T: Clone + Ord + Signed + std::fmt::Debug> Scalar for T {}

/// Default exact weight type for the CLI and file formats.
pub type Weight = num_rational::BigRational;

/// Integer weights, convenient in tests.
pub type IntWeight = i64;

/// Parses a decimal literal (`-12`, `3.25`, `.5`) into an exact rational.
pub fn parse_decimal(s: &str) -> Option<Weight> {
    use num_bigint::BigInt;
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    let (sign, digits) = match s.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((a, b)) => (a, b),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let mut numer: BigInt = if int_part.is_empty() {
        BigInt::from(0)
    } else {
        int_part.parse().ok()?
    };
    let mut denom = BigInt::from(1);
    for c in frac_part.chars() {
        numer = numer * 10 + (c as u8 - b'0');
        denom *= 10;
    }
    Some(Weight::new(numer * sign, denom))
}

/// Formats a rational: plain integer when the denominator clears,
/// otherwise `p/q`.
pub fn format_weight(w: &Weight) -> String {
    if w.is_integer() {
        w.numer().to_string()
    } else {
        format!("{}/{}", w.numer(), w.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn decimal_parsing() {
        assert_eq!(parse_decimal("12").unwrap(), Weight::from_integer(12.into()));
        assert_eq!(
            parse_decimal("-3.25").unwrap(),
            Weight::new((-13).into(), 4.into())
        );
        assert_eq!(parse_decimal(".5").unwrap(), Weight::new(1.into(), 2.into()));
        assert_eq!(parse_decimal("0").unwrap(), Weight::zero());
        assert!(parse_decimal("").is_none());
        assert!(parse_decimal("1.2.3").is_none());
        assert!(parse_decimal("abc").is_none());
    }

    #[test]
    fn weight_formatting() {
        assert_eq!(format_weight(&parse_decimal("12").unwrap()), "12");
        assert_eq!(format_weight(&parse_decimal("-4.0").unwrap()), "-4");
        assert_eq!(format_weight(&parse_decimal("0.5").unwrap()), "1/2");
    }
}
