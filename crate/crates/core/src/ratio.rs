//! Exact rational arithmetic for metric values.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Arithmetic mean; zero for an empty slice.
pub fn mean(values: &[Rational]) -> Rational {
    if values.is_empty() {
        return Rational::zero();
    }
    let sum: Rational = values.iter().sum();
    sum / int(values.len() as i64)
}

/// Parses a plain decimal literal (`0.05`, `-3`, `1e-2`) into the exact rational
/// it denotes.
pub fn parse_decimal(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, fraction) = match digits.split_once('.') {
        Some((w, f)) => (w, f),
        None => (digits, ""),
    };
    if whole.is_empty() && fraction.is_empty() {
        return None;
    }
    if !whole.chars().chain(fraction.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{whole}{fraction}");
    let mut numer: BigInt = all_digits.parse().ok()?;
    if negative {
        numer = -numer;
    }
    let scale = exponent - fraction.len() as i32;
    let ten = BigInt::from(10);
    Some(if scale >= 0 {
        Rational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num_traits::pow(ten, (-scale) as usize))
    })
}

/// Exact rational for the shortest decimal that round-trips to `value`, so
/// `0.05` read from JSON becomes 1/20 rather than its binary expansion.
pub fn from_f64(value: f64) -> Option<Rational> {
    if !value.is_finite() {
        return None;
    }
    parse_decimal(&format!("{value}"))
}

/// `numer/denom` text, or just the integer when the denominator is one.
pub fn exact_string(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_are_exact() {
        assert_eq!(parse_decimal("0.05"), Some(frac(1, 20)));
        assert_eq!(parse_decimal("90.38"), Some(frac(9038, 100)));
        assert_eq!(parse_decimal("-2"), Some(int(-2)));
        assert_eq!(parse_decimal("1e-2"), Some(frac(1, 100)));
        assert_eq!(parse_decimal("2.5E1"), Some(int(25)));
        assert_eq!(parse_decimal(""), None);
        assert_eq!(parse_decimal("."), None);
        assert_eq!(parse_decimal("1.2.3"), None);
        assert_eq!(from_f64(0.8), Some(frac(4, 5)));
        assert_eq!(from_f64(f64::NAN), None);
    }

    #[test]
    fn mean_of_empty_is_zero() {
        assert_eq!(mean(&[]), int(0));
        assert_eq!(mean(&[frac(1, 2), int(1), int(1)]), frac(5, 6));
        assert_eq!(exact_string(&frac(4, 6)), "2/3");
        assert_eq!(exact_string(&int(3)), "3");
    }
}
