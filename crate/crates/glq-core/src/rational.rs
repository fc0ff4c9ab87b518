//! Parsing and rendering of exact rationals.
//!
//! Text forms accepted by [`parse_rational`]:
//! - fraction: `p/r` (e.g. `2/3`, `-7/4`)
//! - integer: `42`, `-3`
//! - decimal: `0.5`, `-12.25`
//! - scientific: `1e-9`, `2.5e3`
//!
//! Rendering is canonical: [`format_rational`] emits `p/r` (or just `p` for
//! integers); [`decimal_string`] emits a rounded decimal expansion used for
//! certified values in machine-readable reports.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Parse a rational from any accepted text form, reporting the byte position
/// of the first offending character on failure.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::Parse("empty rational literal".into()));
    }
    if let Some(slash) = t.find('/') {
        let (num, den) = (&t[..slash], &t[slash + 1..]);
        let n = parse_int(num, 0)?;
        let d = parse_int(den, slash + 1)?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {t:?}")));
        }
        return Ok(BigRational::new(n, d));
    }
    // decimal / scientific form: [sign] digits [. digits] [e [sign] digits]
    let (mantissa, exp10) = match t.find(['e', 'E']) {
        Some(epos) => {
            let exp: i64 = t[epos + 1..].parse().map_err(|_| {
                Error::Parse(format!("bad exponent at position {} in {t:?}", epos + 1))
            })?;
            (&t[..epos], exp)
        }
        None => (t, 0),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(dot) => (&mantissa[..dot], &mantissa[dot + 1..]),
        None => (mantissa, ""),
    };
    if !frac_part.is_empty() && !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        let bad = frac_part.bytes().position(|b| !b.is_ascii_digit()).unwrap();
        return Err(Error::Parse(format!(
            "bad digit at position {} in {t:?}",
            mantissa.find('.').unwrap() + 1 + bad
        )));
    }
    let digits = format!("{int_part}{frac_part}");
    let n = parse_int(&digits, 0)?;
    let scale = frac_part.len() as i64;
    let net = exp10 - scale;
    let ten = BigInt::from(10);
    Ok(if net >= 0 {
        BigRational::from_integer(n * ten.pow(net as u32))
    } else {
        BigRational::new(n, ten.pow((-net) as u32))
    })
}

fn parse_int(s: &str, offset: usize) -> Result<BigInt> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::Parse(format!("missing integer at position {offset}")));
    }
    let body = t.strip_prefix(['+', '-']).unwrap_or(t);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        let bad = body
            .bytes()
            .position(|b| !b.is_ascii_digit())
            .unwrap_or(0);
        return Err(Error::Parse(format!(
            "bad digit at position {} in {t:?}",
            offset + bad
        )));
    }
    t.parse::<BigInt>()
        .map_err(|e| Error::Parse(format!("bad integer {t:?}: {e}")))
}

/// Canonical `p/r` rendering; integers render without the `/1`.
pub fn format_rational(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Round `x` to `digits` decimal places, half away from zero, and render it.
/// Trailing zeros are trimmed; integers render without a decimal point.
pub fn decimal_string(x: &BigRational, digits: u32) -> String {
    let scale = BigInt::from(10).pow(digits);
    let scaled = x * BigRational::from_integer(scale.clone());
    // round half away from zero: floor(|x| + 1/2) with the sign reattached
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let rounded = (scaled.abs() + half).floor().to_integer();
    render_scaled(rounded, x.is_negative(), digits)
}

/// Round `x` (must be nonnegative) up to `digits` decimal places and render.
/// Used for error bounds, which must never shrink when rendered.
pub fn decimal_string_ceil(x: &BigRational, digits: u32) -> String {
    assert!(!x.is_negative(), "ceil rendering expects a nonnegative bound");
    let scale = BigInt::from(10).pow(digits);
    let rounded = (x * BigRational::from_integer(scale)).ceil().to_integer();
    render_scaled(rounded, false, digits)
}

fn render_scaled(abs_scaled: BigInt, negative: bool, digits: u32) -> String {
    let mut s = abs_scaled.to_string();
    let d = digits as usize;
    if s.len() <= d {
        s = format!("{}{}", "0".repeat(d - s.len() + 1), s);
    }
    let split = s.len() - d;
    let (int_part, frac_part) = (&s[..split], &s[split..]);
    let frac_trimmed = frac_part.trim_end_matches('0');
    let sign = if negative && (int_part != "0" || !frac_trimmed.is_empty()) {
        "-"
    } else {
        ""
    };
    if frac_trimmed.is_empty() {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_trimmed}")
    }
}

/// q^k for integer k of either sign; errors on 0^negative.
pub fn rational_pow(q: &BigRational, k: i64) -> Result<BigRational> {
    if k >= 0 {
        Ok(pow_u(q, k as u64))
    } else {
        if q.is_zero() {
            return Err(Error::Domain("0 cannot be raised to a negative power".into()));
        }
        Ok(pow_u(q, (-k) as u64).recip())
    }
}

fn pow_u(q: &BigRational, mut k: u64) -> BigRational {
    let mut base = q.clone();
    let mut acc = BigRational::one();
    while k > 0 {
        if k & 1 == 1 {
            acc *= &base;
        }
        k >>= 1;
        if k > 0 {
            base = &base * &base;
        }
    }
    acc
}

/// Serde adapter storing a `BigRational` as its canonical `p/r` string.
pub mod rat_string {
    use super::{format_rational, parse_rational};
    use num::rational::BigRational;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let raw = String::deserialize(d)?;
        parse_rational(&raw).map_err(de::Error::custom)
    }
}

/// Serde adapter for `Option<BigRational>` as an optional `p/r` string.
pub mod opt_rat_string {
    use super::{format_rational, parse_rational};
    use num::rational::BigRational;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => s.serialize_some(&format_rational(v)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<Option<BigRational>, D::Error> {
        let raw: Option<String> = Option::deserialize(d)?;
        raw.map(|r| parse_rational(&r).map_err(de::Error::custom))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn parses_all_forms() {
        assert_eq!(parse_rational("2/3").unwrap(), rat(2, 3));
        assert_eq!(parse_rational("-7/4").unwrap(), rat(-7, 4));
        assert_eq!(parse_rational("42").unwrap(), rat(42, 1));
        assert_eq!(parse_rational("0.5").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("1e-9").unwrap(), rat(1, 1_000_000_000));
        assert_eq!(parse_rational("2.5e3").unwrap(), rat(2500, 1));
        assert_eq!(parse_rational("-1.25e2").unwrap(), rat(-125, 1));
    }

    #[test]
    fn rejects_bad_syntax_with_position() {
        let err = parse_rational("1/0").unwrap_err();
        assert!(matches!(err, Error::Parse(_)));
        let err = parse_rational("12x4").unwrap_err();
        assert!(err.to_string().contains("position"));
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1/").is_err());
    }

    #[test]
    fn round_trips_canonical_form() {
        for s in ["2/3", "-7/4", "42", "0", "-1"] {
            let x = parse_rational(s).unwrap();
            assert_eq!(format_rational(&x), *s);
        }
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal_string(&rat(1, 2), 4), "0.5");
        assert_eq!(decimal_string(&rat(2, 3), 4), "0.6667");
        assert_eq!(decimal_string(&rat(-2, 3), 4), "-0.6667");
        assert_eq!(decimal_string(&rat(5, 1), 4), "5");
        assert_eq!(decimal_string(&rat(1, 3), 2), "0.33");
        // ceil rendering never understates a bound
        assert_eq!(decimal_string_ceil(&rat(1, 3), 2), "0.34");
        assert_eq!(decimal_string_ceil(&rat(1, 2), 2), "0.5");
    }

    #[test]
    fn integer_powers() {
        let q = rat(2, 1);
        assert_eq!(rational_pow(&q, 10).unwrap(), rat(1024, 1));
        assert_eq!(rational_pow(&q, -2).unwrap(), rat(1, 4));
        assert_eq!(rational_pow(&rat(0, 1), 3).unwrap(), rat(0, 1));
        assert!(rational_pow(&rat(0, 1), -1).is_err());
    }
}
