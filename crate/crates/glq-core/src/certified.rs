//! Certified evaluation of genuinely infinite products.
//!
//! A [`CertifiedReal`] is a rational approximation paired with a rigorous
//! error bound: the true value lies in `[value - error_bound, value +
//! error_bound]`, always. [`certified_product`] evaluates a
//! [`ProductFactorSpec`] at a numeric fugacity by exact partial products plus
//! a closed-form bound on the logarithm of the discarded tail:
//! `|log(1-x)| <= x/(1-x)` for `0 < x < 1`, summed over the tail with the
//! geometric and geometric-derivative closed forms.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{decimal_string, decimal_string_ceil, rational_pow};
use crate::series::ProductFactorSpec;

/// A high-precision value with a rigorous two-sided error bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedReal {
    value: BigRational,
    error_bound: BigRational,
}

impl CertifiedReal {
    pub fn new(value: BigRational, error_bound: BigRational) -> Result<Self> {
        if error_bound.is_negative() {
            return Err(Error::Domain("error bound must be nonnegative".into()));
        }
        Ok(Self { value, error_bound })
    }

    /// An exactly known value (zero error).
    pub fn exact(value: BigRational) -> Self {
        Self { value, error_bound: BigRational::zero() }
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn error_bound(&self) -> &BigRational {
        &self.error_bound
    }

    pub fn lower(&self) -> BigRational {
        &self.value - &self.error_bound
    }

    pub fn upper(&self) -> BigRational {
        &self.value + &self.error_bound
    }

    /// Multiply by an exactly known rational.
    pub fn scale_exact(&self, c: &BigRational) -> Self {
        Self { value: &self.value * c, error_bound: &self.error_bound * c.abs() }
    }

    /// Product of two certified values, with the cross terms folded into the
    /// bound: |ab - a'b'| <= |a| eb + |b| ea + ea eb.
    pub fn mul(&self, other: &Self) -> Self {
        let value = &self.value * &other.value;
        let error_bound = self.value.abs() * &other.error_bound
            + other.value.abs() * &self.error_bound
            + &self.error_bound * &other.error_bound;
        Self { value, error_bound }
    }

    /// |self - x| for an exactly known x; the bound carries over unchanged.
    pub fn abs_diff_exact(&self, x: &BigRational) -> Self {
        Self { value: (&self.value - x).abs(), error_bound: self.error_bound.clone() }
    }

    /// 1 - self (exact affine map; the bound carries over).
    pub fn one_minus(&self) -> Self {
        Self { value: BigRational::one() - &self.value, error_bound: self.error_bound.clone() }
    }

    /// True when the whole certified interval sits at or below `bound`.
    pub fn certainly_at_most(&self, bound: &BigRational) -> bool {
        self.upper() <= *bound
    }

    /// True when the whole certified interval sits strictly above the other's.
    pub fn certainly_greater_than(&self, other: &Self) -> bool {
        self.lower() > other.upper()
    }
}

/// Serialized form: decimal strings, with the error bound rounded upward so
/// rendering can only widen the interval.
impl serde::Serialize for CertifiedReal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        const DIGITS: u32 = 40;
        // the value is rounded to 40 places (off by at most 10^-40); widen the
        // rendered bound by that much before rounding it up
        let slack = BigRational::new(BigInt::one(), BigInt::from(10).pow(DIGITS));
        let mut st = s.serialize_struct("CertifiedReal", 2)?;
        st.serialize_field("value", &decimal_string(&self.value, DIGITS))?;
        st.serialize_field("err", &decimal_string_ceil(&(&self.error_bound + slack), DIGITS))?;
        st.end()
    }
}

impl<'de> serde::Deserialize<'de> for CertifiedReal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        struct Raw {
            value: String,
            err: String,
        }
        let raw = Raw::deserialize(d)?;
        let value = crate::rational::parse_rational(&raw.value).map_err(serde::de::Error::custom)?;
        let err = crate::rational::parse_rational(&raw.err).map_err(serde::de::Error::custom)?;
        CertifiedReal::new(value, err).map_err(serde::de::Error::custom)
    }
}

/// Evaluate `prod_{r >= r0} (1 - (v q^{-r})^d)^(c_lin*r + c_const)` at the
/// numeric fugacity `v > 0`, certified to `tol`.
///
/// Requires the first factor base to satisfy `(v q^{-r0})^d < 1`, which makes
/// every factor positive; this is exactly the measure-theoretic domain
/// (`v < q` when `r0 = 1`, `v < 1` when `r0 = 0`).
pub fn certified_product(
    spec: &ProductFactorSpec,
    v: &BigRational,
    tol: &BigRational,
) -> Result<CertifiedReal> {
    if !v.is_positive() {
        return Err(Error::Domain("fugacity must be positive".into()));
    }
    if !tol.is_positive() {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    let d = spec.d() as i64;
    let first_base = rational_pow(&(v * rational_pow(spec.q(), -(spec.r0() as i64))?), d)?;
    if first_base >= BigRational::one() {
        return Err(Error::Domain(format!(
            "fugacity {} out of range: the first product factor would not be positive",
            crate::rational::format_rational(v),
        )));
    }

    let v_d = rational_pow(v, d)?;
    let t = rational_pow(spec.q(), -d)?; // ratio between consecutive factor bases
    let c_lin_abs = BigRational::from_integer(BigInt::from(spec.c_lin().unsigned_abs()));
    let c_const_abs = BigRational::from_integer(BigInt::from(spec.c_const().unsigned_abs()));

    let mut partial = BigRational::one();
    let mut r = spec.r0() as u64;
    let mut next_checkpoint = (spec.r0() as u64).max(4);
    const HARD_CAP: u64 = 1 << 20;
    loop {
        // fold factors up to the checkpoint into the exact partial product
        while r <= next_checkpoint {
            let base = BigRational::one() - &v_d * rational_pow(&t, r as i64)?;
            let e = spec.exponent_at(r);
            if e != 0 {
                partial *= rational_pow(&base, e)?;
            }
            r += 1;
        }
        let cap_r = r - 1; // factors r0..=cap_r are in `partial`

        // tail bound: sum_{r > R} |e(r)| x_r / (1 - x_{R+1}), x_r = v^d t^r
        let x_next = &v_d * rational_pow(&t, cap_r as i64 + 1)?;
        if x_next >= BigRational::one() {
            // cannot happen given the first-factor check, but keep it rigorous
            next_checkpoint = next_checkpoint * 2;
            continue;
        }
        let one_minus_t = BigRational::one() - &t;
        let rr = BigRational::from_integer(BigInt::from(cap_r));
        // Σ_{r>R} t^r and Σ_{r>R} r t^r in closed form
        let geo = rational_pow(&t, cap_r as i64 + 1)? / &one_minus_t;
        let geo_deriv = rational_pow(&t, cap_r as i64 + 1)?
            * ((&rr + BigRational::one()) - &rr * &t)
            / (&one_minus_t * &one_minus_t);
        let log_tail =
            (&c_lin_abs * geo_deriv + &c_const_abs * geo) * &v_d / (BigRational::one() - &x_next);

        if log_tail < BigRational::one() {
            // |P - P_R| <= P_R * L/(1-L) covers both e^L and e^-L deviations
            let err = partial.abs() * &log_tail / (BigRational::one() - &log_tail);
            if err <= *tol {
                return CertifiedReal::new(partial, err);
            }
        }
        if next_checkpoint >= HARD_CAP {
            return Err(Error::Internal(format!(
                "certified product did not reach tolerance {} within {HARD_CAP} factors",
                crate::rational::format_rational(tol),
            )));
        }
        next_checkpoint *= 2;
    }
}
