//! Exact rational arithmetic for models whose identities must hold without
//! rounding (price capitalization, money printing, consumption-rights splits).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rust_decimal::Decimal;

pub type Exact = BigRational;

pub fn int(v: i64) -> Exact {
    Exact::from_integer(BigInt::from(v))
}

pub fn ratio(numer: i64, denom: i64) -> Exact {
    Exact::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn from_decimal(d: Decimal) -> Exact {
    let numer = BigInt::from(d.mantissa());
    let denom = BigInt::from(10u8).pow(d.scale());
    Exact::new(numer, denom)
}

/// Converts through the shortest decimal representation of `x`, so `0.03`
/// becomes exactly 3/100 rather than the nearest binary fraction.
///
/// Returns `None` for NaN and infinities.
pub fn from_f64(x: f64) -> Option<Exact> {
    if !x.is_finite() {
        return None;
    }
    if x == 0.0 {
        return Some(Exact::zero());
    }
    let text = format!("{x:e}");
    let (mantissa, exponent) = text.split_once('e')?;
    let exponent: i32 = exponent.parse().ok()?;
    let negative = mantissa.starts_with('-');
    let mantissa = mantissa.trim_start_matches('-');
    let (whole, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits: BigInt = format!("{whole}{frac}").parse().ok()?;
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10u8);
    let mut value = if scale >= 0 {
        Exact::from_integer(digits * ten.pow(scale as u32))
    } else {
        Exact::new(digits, ten.pow((-scale) as u32))
    };
    if negative {
        value = -value;
    }
    Some(value)
}

pub fn to_f64(x: &Exact) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Renders with `places` decimal digits, rounding half away from zero.
pub fn to_decimal_string(x: &Exact, places: u32) -> String {
    let scale = BigInt::from(10u8).pow(places);
    let scaled = x * Exact::from_integer(scale.clone());
    let rounded = scaled.round().to_integer();
    let negative = rounded.is_negative();
    let digits = rounded.abs().to_string();
    let body = if places == 0 {
        digits
    } else {
        let width = places as usize + 1;
        let padded = format!("{digits:0>width$}");
        let (int_part, frac_part) = padded.split_at(padded.len() - places as usize);
        format!("{int_part}.{frac_part}")
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

pub(crate) fn is_positive(x: &Exact) -> bool {
    x.is_positive()
}

pub(crate) fn one() -> Exact {
    Exact::one()
}
