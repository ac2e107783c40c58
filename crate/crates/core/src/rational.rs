//! Exact rational scalars: the coefficient type of every field in the crate.
//!
//! `Rational` is a reduced arbitrary-precision fraction with positive
//! denominator (both guaranteed by `num-rational`). Floating-point values
//! appear only at explicit conversion boundaries.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::Error;

pub type Rational = BigRational;

/// Integer as a rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num / den` as a reduced rational. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    assert!(den != 0, "rational with zero denominator");
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Lossy conversion for reporting and floating oracles.
pub fn rat_to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Parses "3", "-1/2", "0.25", "1e-2", "2.5e3" into an exact rational.
///
/// Decimal and scientific notation are expanded exactly (powers of ten),
/// so "1e-2" is exactly 1/100.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    let fail = || Error::InvalidRational(s.to_string());
    if s.is_empty() {
        return Err(fail());
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| fail())?;
        let d: BigInt = den.trim().parse().map_err(|_| fail())?;
        if d.is_zero() {
            return Err(fail());
        }
        return Ok(Rational::new(n, d));
    }
    // [sign] digits [. digits] [e|E [sign] digits]
    let (mantissa, exp10) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = s[pos + 1..].parse().map_err(|_| fail())?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((a, b)) => (a, b),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(fail());
    }
    let digits = format!(
        "{}{}",
        if int_part.is_empty() { "0" } else { int_part },
        frac_part
    );
    let n: BigInt = digits.parse().map_err(|_| fail())?;
    let shift = exp10 - frac_part.len() as i32;
    let ten = BigInt::from(10);
    Ok(if shift >= 0 {
        Rational::from_integer(n * ten.pow(shift as u32))
    } else {
        Rational::new(n, ten.pow((-shift) as u32))
    })
}

/// Relative gap |a - b| / max(1, |b|), as an exact rational.
pub fn relative_gap(a: &Rational, b: &Rational) -> Rational {
    let scale = b.abs().max(Rational::from_integer(BigInt::from(1)));
    (a - b).abs() / scale
}

/// Serde adapter: rationals as "num/den" strings, never floats.
pub mod rat_string {
    use super::Rational;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(de)?;
        super::parse_rational(&s).map_err(de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod rat_string_vec {
    use super::Rational;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(xs: &[Rational], ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_seq(xs.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<Rational>, D::Error> {
        let strs = Vec::<String>::deserialize(de)?;
        strs.iter()
            .map(|s| super::parse_rational(s).map_err(de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_plain_and_fraction_forms() {
        assert_eq!(parse_rational("3").unwrap(), rat_int(3));
        assert_eq!(parse_rational("-1/2").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("4/6").unwrap(), rat(2, 3));
    }

    #[test]
    fn parses_decimal_and_scientific_exactly() {
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("1e-2").unwrap(), rat(1, 100));
        assert_eq!(parse_rational("3e-3").unwrap(), rat(3, 1000));
        assert_eq!(parse_rational("2.5e3").unwrap(), rat_int(2500));
        assert_eq!(parse_rational("-0.5e-1").unwrap(), rat(-1, 20));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "x", "1/0", "1.2.3", "e5", "--3"] {
            assert!(parse_rational(bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn roundtrips_via_display() {
        for s in ["1/2", "-7/3", "5", "0"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(parse_rational(&r.to_string()).unwrap(), r);
        }
    }
}
