//! The index set of monic irreducible polynomials over F_q with nonzero
//! constant term, grouped by degree.
//!
//! Counting uses the Möbius/necklace formula and works for any integer
//! `q >= 2` (a non-prime-power `q` yields a formal count, flagged as such).
//! Explicit enumeration is implemented for prime fields only and proceeds by
//! trial division against all lower-degree irreducibles.

use num::bigint::BigUint;
use num::Zero;

use crate::error::{Error, Result};

/// Default cap on `q^d` for explicit enumeration.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 20;

/// A degree together with the number of eligible irreducibles of that degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeClass {
    pub degree: u32,
    pub count: BigUint,
}

/// Count of degree-`d` members, plus a flag marking formal (non-field) counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrreducibleCount {
    pub count: BigUint,
    /// True when `q` is not a prime power, so the count is a formal value of
    /// the necklace polynomial rather than a cardinality.
    pub formal: bool,
}

/// A canonical label for one member: its degree and its position in the
/// lexicographic enumeration; explicit coefficients (constant term first)
/// are present only when the member was enumerated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialLabel {
    pub degree: u32,
    pub index: u128,
    pub coeffs: Option<Vec<u64>>,
}

/// Number of monic irreducible polynomials of degree `d` over F_q with
/// nonzero constant term:
///
/// ```text
/// N(1) = q - 1                       (x - a, a != 0)
/// N(d) = (1/d) Σ_{e|d} μ(e) q^{d/e}  for d >= 2
/// ```
///
/// Excluding the single polynomial `x` only affects degree 1; every
/// irreducible of higher degree has a nonzero constant term already.
pub fn count_irreducibles(d: u32, q: u64) -> Result<IrreducibleCount> {
    if d == 0 {
        return Err(Error::Domain("degree must be positive".into()));
    }
    if q < 2 {
        return Err(Error::Domain(format!("q must be at least 2, got {q}")));
    }
    let formal = is_prime_power(q).is_none();
    if d == 1 {
        return Ok(IrreducibleCount { count: BigUint::from(q - 1), formal });
    }
    // Σ_{e|d} μ(e) q^{d/e}; positive and negative parts kept separate so the
    // arithmetic stays in BigUint.
    let (mut plus, mut minus) = (BigUint::zero(), BigUint::zero());
    for e in 1..=d {
        if d % e != 0 {
            continue;
        }
        match moebius(e) {
            1 => plus += BigUint::from(q).pow(d / e),
            -1 => minus += BigUint::from(q).pow(d / e),
            _ => {}
        }
    }
    debug_assert!(plus > minus);
    let total = plus - minus;
    debug_assert!((&total % BigUint::from(d)).is_zero());
    Ok(IrreducibleCount { count: total / BigUint::from(d), formal })
}

/// The Möbius function μ(n).
fn moebius(n: u32) -> i32 {
    let mut n = n;
    let mut sign = 1;
    let mut p = 2u32;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// If `q = p^k` for a prime `p` and `k >= 1`, return `(p, k)`.
pub fn is_prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q {
        if q % p == 0 {
            let mut rest = q;
            let mut k = 0u32;
            while rest % p == 0 {
                rest /= p;
                k += 1;
            }
            return if rest == 1 { Some((p, k)) } else { None };
        }
        p += 1;
    }
    Some((q, 1)) // q itself is prime
}

pub fn is_prime(q: u64) -> bool {
    matches!(is_prime_power(q), Some((_, 1)))
}

/// Enumerate the degree-`d` members over the prime field F_q, in
/// lexicographic order on the coefficient tuple `(c_{d-1}, ..., c_0)` with
/// field elements ordered `0 < 1 < ... < q-1`. Uses the default size cap.
pub fn enumerate_irreducibles(d: u32, q: u64) -> Result<Vec<PolynomialLabel>> {
    enumerate_irreducibles_with_cap(d, q, DEFAULT_ENUMERATION_CAP)
}

/// As [`enumerate_irreducibles`] with an explicit cap on `q^d`.
pub fn enumerate_irreducibles_with_cap(d: u32, q: u64, cap: u64) -> Result<Vec<PolynomialLabel>> {
    if d == 0 {
        return Err(Error::Domain("degree must be positive".into()));
    }
    match is_prime_power(q) {
        None => {
            return Err(Error::Domain(format!("q = {q} is not a prime power")));
        }
        Some((_, k)) if k > 1 => {
            return Err(Error::Unsupported(format!(
                "explicit enumeration needs a prime field; q = {q} is a proper prime power"
            )));
        }
        Some(_) => {}
    }
    if checked_pow(q, d).filter(|&s| s <= cap).is_none() {
        return Err(Error::Resource(format!("q^d = {q}^{d} exceeds the cap {cap}")));
    }

    // Sieve by degree: keep every monic irreducible (including x, which is
    // needed as a trial divisor), then filter on the constant term.
    let mut by_degree: Vec<Vec<Vec<u64>>> = vec![Vec::new()]; // index = degree
    for deg in 1..=d {
        let mut irreducibles = Vec::new();
        for coeffs in monic_polys(deg, q) {
            if is_irreducible_by_trial_division(&coeffs, q, &by_degree) {
                irreducibles.push(coeffs);
            }
        }
        by_degree.push(irreducibles);
    }

    let mut out = Vec::new();
    let mut index = 0u128;
    for coeffs in &by_degree[d as usize] {
        if coeffs[0] != 0 {
            out.push(PolynomialLabel { degree: d, index, coeffs: Some(coeffs.clone()) });
            index += 1;
        }
    }
    Ok(out)
}

fn checked_pow(q: u64, d: u32) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..d {
        acc = acc.checked_mul(q)?;
    }
    Some(acc)
}

/// All monic polynomials of the given degree, coefficients constant-first,
/// iterated in lexicographic order on `(c_{d-1}, ..., c_0)`.
fn monic_polys(degree: u32, q: u64) -> impl Iterator<Item = Vec<u64>> {
    let d = degree as usize;
    let total = q.pow(degree);
    (0..total).map(move |code| {
        let mut coeffs = vec![0u64; d + 1];
        coeffs[d] = 1;
        // the constant term varies fastest, so the iteration order is
        // lexicographic on (c_{d-1}, ..., c_0)
        let mut rem = code;
        for slot in 0..d {
            coeffs[slot] = rem % q;
            rem /= q;
        }
        coeffs
    })
}

fn is_irreducible_by_trial_division(coeffs: &[u64], q: u64, by_degree: &[Vec<Vec<u64>>]) -> bool {
    let deg = coeffs.len() - 1;
    if deg == 1 {
        return true;
    }
    for div_deg in 1..=deg / 2 {
        if div_deg >= by_degree.len() {
            break;
        }
        for divisor in &by_degree[div_deg] {
            if poly_rem_is_zero(coeffs, divisor, q) {
                return false;
            }
        }
    }
    true
}

/// Long division remainder test over F_q (q prime).
fn poly_rem_is_zero(num: &[u64], den: &[u64], q: u64) -> bool {
    let dd = den.len() - 1;
    let mut rem: Vec<u64> = num.to_vec();
    while rem.len() > dd {
        let lead = *rem.last().expect("nonempty");
        if lead != 0 {
            // den is monic, so the quotient coefficient is just `lead`
            let offset = rem.len() - 1 - dd;
            for (i, &dc) in den.iter().enumerate() {
                let idx = offset + i;
                let sub = (lead * dc) % q;
                rem[idx] = (rem[idx] + q - sub) % q;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c == 0)
}

/// Render coefficients (constant term first) as `x^3+x+1`-style text, with
/// descending powers and coefficients reduced mod p.
pub fn render_poly(coeffs: &[u64]) -> String {
    let mut terms = Vec::new();
    for (k, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let term = match (k, c) {
            (0, c) => format!("{c}"),
            (1, 1) => "x".to_string(),
            (1, c) => format!("{c}x"),
            (k, 1) => format!("x^{k}"),
            (k, c) => format!("{c}x^{k}"),
        };
        terms.push(term);
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}
