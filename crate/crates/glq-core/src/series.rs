//! Truncated power series in the fugacity variable with exact rational
//! coefficients.
//!
//! Everything here is exact: a [`TruncatedSeries`] of order `N` stores the
//! coefficients of `v^0 .. v^N` as arbitrary-precision rationals, and every
//! operation produces the mathematically exact truncation of its result.
//! Binary operations insist on equal orders; mixing orders requires an
//! explicit [`TruncatedSeries::truncated`] call first, so an accidental loss
//! of precision cannot pass silently.
//!
//! [`ProductFactorSpec`] describes infinite products of the shape
//!
//! ```text
//!     prod_{r >= r0} (1 - (v q^{-r})^d)^(c_lin*r + c_const),    q > 1
//! ```
//!
//! whose truncated expansions are computed in closed form: the logarithm of
//! the product telescopes to geometric sums in `q^{-1}`, one exact rational
//! per power of `v`, and the exponential is recovered by the standard
//! derivative recurrence. No floating point, no factor-by-factor truncation
//! error.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::rational_pow;

/// A power series truncated at a fixed order, with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<BigRational>,
}

impl TruncatedSeries {
    /// Wrap explicit coefficients `c_0 .. c_N`; the order is `len - 1`.
    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Domain("a series needs at least the constant term".into()));
        }
        Ok(Self { coeffs })
    }

    /// The zero series of the given order.
    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![BigRational::zero(); order + 1] }
    }

    /// The constant series `1`.
    pub fn one(order: usize) -> Self {
        Self::constant(BigRational::one(), order)
    }

    /// A constant series.
    pub fn constant(c: BigRational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// `c * v^k`, or the zero series if `k` exceeds the order.
    pub fn monomial(c: BigRational, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `v^k`; panics beyond the order (use [`Self::coeff_extract`]
    /// for a checked read).
    pub fn coeff(&self, k: usize) -> &BigRational {
        &self.coeffs[k]
    }

    /// Checked coefficient extraction; an index beyond the order is an error,
    /// never a silent zero.
    pub fn coeff_extract(&self, n: usize) -> Result<BigRational> {
        self.coeffs
            .get(n)
            .cloned()
            .ok_or(Error::CoefficientBeyondOrder { index: n, order: self.order() })
    }

    /// Explicitly drop coefficients above `new_order`. Extending a series
    /// would claim knowledge of coefficients that were never computed, so
    /// `new_order > order` is an error.
    pub fn truncated(&self, new_order: usize) -> Result<Self> {
        if new_order > self.order() {
            return Err(Error::OrderMismatch { left: self.order(), right: new_order });
        }
        Ok(Self { coeffs: self.coeffs[..=new_order].to_vec() })
    }

    fn check_same_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch { left: self.order(), right: other.order() });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self { coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self { coeffs })
    }

    /// Full convolution, truncated to the common order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_order(other)?;
        let n = self.order();
        let mut out = vec![BigRational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n + 1 - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Ok(Self { coeffs: out })
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn invert(&self) -> Result<Self> {
        if self.coeffs[0].is_zero() {
            return Err(Error::Domain(
                "series with zero constant term is not invertible".into(),
            ));
        }
        let n = self.order();
        let c0_inv = self.coeffs[0].recip();
        let mut out = vec![BigRational::zero(); n + 1];
        out[0] = c0_inv.clone();
        for k in 1..=n {
            let mut acc = BigRational::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += &self.coeffs[j] * &out[k - j];
                }
            }
            out[k] = -&c0_inv * acc;
        }
        Ok(Self { coeffs: out })
    }

    /// Multiply every coefficient by a fixed rational.
    pub fn scale(&self, c: &BigRational) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Multiply by `v^k`, dropping coefficients pushed past the order.
    pub fn shift_up(&self, k: usize) -> Self {
        let n = self.order();
        let mut out = vec![BigRational::zero(); n + 1];
        for i in 0..=n.saturating_sub(k) {
            out[i + k] = self.coeffs[i].clone();
        }
        Self { coeffs: out }
    }

    /// Integer power; negative exponents go through [`Self::invert`] and thus
    /// require a nonzero constant term.
    pub fn pow(&self, e: i64) -> Result<Self> {
        if e == 0 {
            return Ok(Self::one(self.order()));
        }
        let (mut base, mut k) = if e < 0 {
            (self.invert()?, (-e) as u64)
        } else {
            (self.clone(), e as u64)
        };
        let mut acc = Self::one(self.order());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// exp of a series with zero constant term, via the recurrence
    /// `n f_n = sum_{k=1..n} k g_k f_{n-k}` coming from `f' = g' f`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Domain("exp requires a zero constant term".into()));
        }
        let n = self.order();
        let mut f = vec![BigRational::zero(); n + 1];
        f[0] = BigRational::one();
        for m in 1..=n {
            let mut acc = BigRational::zero();
            for k in 1..=m {
                if !self.coeffs[k].is_zero() {
                    acc += &self.coeffs[k] * BigRational::from_integer(BigInt::from(k)) * &f[m - k];
                }
            }
            f[m] = acc / BigRational::from_integer(BigInt::from(m));
        }
        Ok(Self { coeffs: f })
    }

    /// log of a series with constant term 1.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::Domain("log requires constant term 1".into()));
        }
        let n = self.order();
        let mut g = vec![BigRational::zero(); n + 1];
        for m in 1..=n {
            let mut acc = &self.coeffs[m] * BigRational::from_integer(BigInt::from(m));
            for k in 1..m {
                if !g[k].is_zero() && !self.coeffs[m - k].is_zero() {
                    acc -= &g[k] * BigRational::from_integer(BigInt::from(k)) * &self.coeffs[m - k];
                }
            }
            g[m] = acc / BigRational::from_integer(BigInt::from(m));
        }
        Ok(Self { coeffs: g })
    }

    /// `self^e` for an arbitrary rational exponent, as `exp(e * log self)`;
    /// requires constant term 1.
    pub fn pow_rational(&self, e: &BigRational) -> Result<Self> {
        self.log()?.scale(e).exp()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }
}

/// One family of factors of the paper-style infinite products:
/// `prod_{r >= r0} (1 - (v q^{-r})^d)^(c_lin*r + c_const)` with `q > 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductFactorSpec {
    d: u32,
    r0: u32,
    c_lin: i64,
    c_const: i64,
    q: BigRational,
}

impl ProductFactorSpec {
    /// Validates `d >= 1`, `r0 in {0, 1}`, and `q > 1` (coefficients diverge
    /// otherwise).
    pub fn new(d: u32, r0: u32, c_lin: i64, c_const: i64, q: BigRational) -> Result<Self> {
        if d == 0 {
            return Err(Error::Domain("inner exponent d must be positive".into()));
        }
        if r0 > 1 {
            return Err(Error::Domain("product start index r0 must be 0 or 1".into()));
        }
        if q <= BigRational::one() {
            return Err(Error::Domain(format!(
                "q must exceed 1, got {}",
                crate::rational::format_rational(&q)
            )));
        }
        Ok(Self { d, r0, c_lin, c_const, q })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn r0(&self) -> u32 {
        self.r0
    }

    pub fn c_lin(&self) -> i64 {
        self.c_lin
    }

    pub fn c_const(&self) -> i64 {
        self.c_const
    }

    pub fn q(&self) -> &BigRational {
        &self.q
    }

    /// Exponent of the factor at index `r`.
    pub fn exponent_at(&self, r: u64) -> i64 {
        self.c_lin * r as i64 + self.c_const
    }

    /// Closed-form truncated logarithm of the product:
    ///
    /// ```text
    /// log prod = - sum_{k >= 1} v^{dk}/k * (c_lin * A_k + c_const * B_k)
    /// A_k = sum_{r >= r0} r t^r = t/(1-t)^2,     t = q^{-dk}
    /// B_k = sum_{r >= r0} t^r   = t^{r0}/(1-t)
    /// ```
    ///
    /// (`A_k` is the same for `r0 = 0` and `r0 = 1`: the `r = 0` term vanishes.)
    pub fn log_series(&self, order: usize) -> Result<TruncatedSeries> {
        let mut g = TruncatedSeries::zero(order);
        let d = self.d as usize;
        let mut k = 1usize;
        while d * k <= order {
            let t = rational_pow(&self.q, -((d * k) as i64))?;
            let one_minus_t = BigRational::one() - &t;
            let a = &t / (&one_minus_t * &one_minus_t);
            let b = if self.r0 == 0 {
                one_minus_t.recip()
            } else {
                &t / &one_minus_t
            };
            let c_lin = BigRational::from_integer(BigInt::from(self.c_lin));
            let c_const = BigRational::from_integer(BigInt::from(self.c_const));
            let term = (c_lin * a + c_const * b) / BigRational::from_integer(BigInt::from(k));
            g.coeffs[d * k] = -term;
            k += 1;
        }
        Ok(g)
    }

    /// Exact truncated expansion of the infinite product.
    pub fn series(&self, order: usize) -> Result<TruncatedSeries> {
        self.log_series(order)?.exp()
    }
}

/// Exact truncated expansion of the infinite product described by `spec`.
/// Thin wrapper over [`ProductFactorSpec::series`].
pub fn pochhammer_series(spec: &ProductFactorSpec, order: usize) -> Result<TruncatedSeries> {
    spec.series(order)
}
