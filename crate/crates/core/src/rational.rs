//! Parsing and display of exact rationals.
//!
//! Instance values arrive as strings and are kept exact: `"6"`, `"1/100"`
//! and `"2.5"` become the rationals 6, 1/100 and 5/2. Decimal strings are
//! converted exactly (never through a float).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Parse a rational from one of the accepted forms: an integer (`"6"`),
/// a fraction (`"1/100"`), or a decimal (`"2.5"`). Returns the reason on
/// failure; sign is accepted so that non-positive values can be reported
/// as such rather than as parse errors.
pub fn parse_rational(text: &str) -> Result<BigRational, String> {
    let mut s = text.trim();
    if s.is_empty() {
        return Err("empty string".into());
    }
    let mut negative = false;
    if let Some(rest) = s.strip_prefix('-') {
        negative = true;
        s = rest;
    } else if let Some(rest) = s.strip_prefix('+') {
        s = rest;
    }

    let magnitude = if let Some((num, den)) = s.split_once('/') {
        let num = parse_digits(num, "numerator")?;
        let den = parse_digits(den, "denominator")?;
        if den.is_zero() {
            return Err("denominator is zero".into());
        }
        BigRational::new(num, den)
    } else if let Some((int, frac)) = s.split_once('.') {
        let int = parse_digits(int, "integer part")?;
        let frac_digits = frac.len();
        let frac = parse_digits(frac, "fractional part")?;
        let scale = BigInt::from(10u32).pow(frac_digits as u32);
        BigRational::new(int * &scale + frac, scale)
    } else {
        BigRational::from_integer(parse_digits(s, "integer")?)
    };

    Ok(if negative { -magnitude } else { magnitude })
}

fn parse_digits(s: &str, what: &str) -> Result<BigInt, String> {
    if s.is_empty() {
        return Err(format!("missing {what}"));
    }
    if !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("{what} {s:?} is not a number"));
    }
    s.parse::<BigInt>().map_err(|e| e.to_string())
}

/// Lossless serialization, always `numerator/denominator` (so `1` prints
/// as `1/1`). [`parse_rational`] round-trips these strings exactly.
pub fn exact_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Display approximation. Exactness is lost; use [`exact_string`] for
/// anything that will be read back.
pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Magnitudes beyond f64 range: divide out via string length heuristic
        // is overkill; all probabilities here live in [0, 1].
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Fixed 6-decimal rendering used in reports.
pub fn approx_string(r: &BigRational) -> String {
    format!("{:.6}", to_f64(r))
}
