//! Pointwise weight formulas: the principal Schur specialization, the limit
//! measure on partitions, |GL(n,q)|, irreducible-representation degrees, the
//! Plancherel weight, and the grand-canonical weight.
//!
//! Everything that can be exact is exact; the only certified (interval)
//! quantities are the genuinely infinite prefactor products.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::certified::{certified_product, CertifiedReal};
use crate::collections::PartitionCollection;
use crate::error::{Error, Result};
use crate::partitions::Partition;
use crate::rational::{format_rational, rational_pow};
use crate::series::ProductFactorSpec;

/// The principal specialization `s_λ(q^{-d}, q^{-2d}, ...)` as an exact
/// rational: with `Q = q^d`,
///
/// ```text
/// s_λ = Q^{n(λ')} · prod_{x in λ} (Q^{h(x)} - 1)^{-1}
/// ```
pub fn schur_special(lam: &Partition, d: u32, q: &BigRational) -> Result<BigRational> {
    if *q <= BigRational::one() {
        return Err(Error::Domain(format!("q must exceed 1, got {}", format_rational(q))));
    }
    if d == 0 {
        return Err(Error::Domain("specialization step d must be positive".into()));
    }
    let big_q = rational_pow(q, d as i64)?;
    let mut val = rational_pow(&big_q, lam.n_stat_conjugate() as i64)?;
    for h in lam.hooks() {
        val /= rational_pow(&big_q, h as i64)? - BigRational::one();
    }
    Ok(val)
}

/// The weight of the limit measure split into its certified infinite
/// prefactor times an exact rational.
#[derive(Clone, Debug)]
pub struct MWeight {
    /// The full weight `C(v,q) · exact_part`, certified.
    pub certified: CertifiedReal,
    /// `q^{2n(λ')+|λ|} · prod (q^{h(x)}-1)^{-2} · v^{|λ|}`, exact.
    pub exact_part: BigRational,
}

/// Exact part of the measure weight (everything except the infinite product):
/// `q^{2n(λ')+|λ|} prod_{x}(q^{h(x)}-1)^{-2} v^{|λ|}`.
pub fn m_weight_exact_part(lam: &Partition, v: &BigRational, q: &BigRational) -> Result<BigRational> {
    check_m_domain(v, q)?;
    let s = schur_special(lam, 1, q)?;
    // equals (q v)^{|λ|} s_λ², kept in that form deliberately: the identity
    // with the Schur route is asserted by tests
    let qv = q * v;
    Ok(rational_pow(&qv, lam.size() as i64)? * &s * &s)
}

/// Weight of the partition under the measure with fugacity `v` and base `q`
/// (`0 < v < q`, `q > 1`): certified full value plus the exact part.
pub fn m_weight(
    lam: &Partition,
    v: &BigRational,
    q: &BigRational,
    tol: &BigRational,
) -> Result<MWeight> {
    check_m_domain(v, q)?;
    let exact_part = m_weight_exact_part(lam, v, q)?;
    // C(v,q) = prod_{r>=1} (1 - v q^{-r})^r, certified so that the error of
    // the final product stays within tol
    let spec = ProductFactorSpec::new(1, 1, 1, 0, q.clone())?;
    let c_tol = if exact_part.is_zero() {
        tol.clone()
    } else {
        tol / exact_part.abs()
    };
    let prefactor = certified_product(&spec, v, &c_tol)?;
    Ok(MWeight { certified: prefactor.scale_exact(&exact_part), exact_part })
}

fn check_m_domain(v: &BigRational, q: &BigRational) -> Result<()> {
    if *q <= BigRational::one() {
        return Err(Error::Domain(format!("q must exceed 1, got {}", format_rational(q))));
    }
    if !v.is_positive() || v >= q {
        return Err(Error::Domain(format!(
            "fugacity must satisfy 0 < v < q, got v = {}, q = {}",
            format_rational(v),
            format_rational(q)
        )));
    }
    Ok(())
}

/// |GL(n,q)| = q^{n(n-1)/2} · prod_{i=1..n} (q^i - 1), exact.
pub fn gl_order(n: u64, q: u64) -> Result<BigInt> {
    if q < 2 {
        return Err(Error::Domain(format!("q must be at least 2, got {q}")));
    }
    let qb = BigInt::from(q);
    let mut acc = qb.pow(u32::try_from(n * (n.saturating_sub(1)) / 2).map_err(|_| {
        Error::Resource(format!("group order exponent overflow at n = {n}"))
    })?);
    let mut qi = BigInt::one();
    for _ in 1..=n {
        qi *= &qb;
        acc *= &qi - BigInt::one();
    }
    Ok(acc)
}

/// Degree of the irreducible representation labeled by the collection:
///
/// ```text
/// d_Λ = prod_{i=1..n} (q^i - 1) · prod_φ s_{Λ_φ}(q^{-deg φ}, ...)
/// ```
///
/// computed over exact rationals and asserted integral; a non-integral result
/// signals an implementation bug, never bad input.
pub fn irrep_degree(coll: &PartitionCollection, q: u64) -> Result<BigInt> {
    if q < 2 {
        return Err(Error::Domain(format!("q must be at least 2, got {q}")));
    }
    coll.validate_for(q)?;
    let n = coll.total_size();
    let q_rat = BigRational::from_integer(BigInt::from(q));
    let mut val = BigRational::one();
    let mut qi = BigRational::one();
    for _ in 1..=n {
        qi *= &q_rat;
        val *= &qi - BigRational::one();
    }
    for (slot, lam) in coll.iter() {
        val *= schur_special(lam, slot.degree, &q_rat)?;
    }
    if !val.is_integer() {
        return Err(Error::Internal(format!(
            "representation degree came out non-integral: {}",
            format_rational(&val)
        )));
    }
    if !val.is_positive() {
        return Err(Error::Internal("representation degree came out non-positive".into()));
    }
    Ok(val.to_integer())
}

/// Plancherel weight `μ_n(Λ) = d_Λ² / |GL(n,q)|`, exact.
///
/// Both the degree route and the specialization product route
/// `q^{-n(n-1)/2} prod (q^i - 1) prod_φ s²` are evaluated; their agreement is
/// a standing self-check.
pub fn plancherel_weight(coll: &PartitionCollection, q: u64) -> Result<BigRational> {
    let n = coll.total_size();
    let degree = irrep_degree(coll, q)?;
    let order = gl_order(n, q)?;
    let via_degree = BigRational::new(&degree * &degree, order);

    let q_rat = BigRational::from_integer(BigInt::from(q));
    let mut via_schur = rational_pow(&q_rat, -((n * n.saturating_sub(1) / 2) as i64))?;
    let mut qi = BigRational::one();
    for _ in 1..=n {
        qi *= &q_rat;
        via_schur *= &qi - BigRational::one();
    }
    for (slot, lam) in coll.iter() {
        let s = schur_special(lam, slot.degree, &q_rat)?;
        via_schur *= &s * &s;
    }

    if via_degree != via_schur {
        return Err(Error::Internal(format!(
            "plancherel weight routes disagree: {} vs {}",
            format_rational(&via_degree),
            format_rational(&via_schur)
        )));
    }
    Ok(via_degree)
}

/// Grand-canonical weight split into the certified infinite prefactor and the
/// exact remainder.
#[derive(Clone, Debug)]
pub struct GrandWeight {
    /// The full weight, certified.
    pub certified: CertifiedReal,
    /// `q^{n(n+1)/2} prod_{i=1..n}(q^i-1)^{-1} v^n μ_n(Λ)`, exact.
    pub exact_part: BigRational,
}

/// Grand-canonical weight of a collection (`0 < v < 1`):
/// `prod_{r>=0}(1 - v q^{-r}) · q^{n(n+1)/2} prod (q^i-1)^{-1} v^n · μ_n(Λ)`.
pub fn grand_weight(
    coll: &PartitionCollection,
    v: &BigRational,
    q: u64,
    tol: &BigRational,
) -> Result<GrandWeight> {
    check_grand_domain(v)?;
    let n = coll.total_size();
    let mu = plancherel_weight(coll, q)?;
    let q_rat = BigRational::from_integer(BigInt::from(q));
    let exact_part = euler_series_coefficient(n, &q_rat)? * rational_pow(v, n as i64)? * mu;
    let spec = ProductFactorSpec::new(1, 0, 0, 1, q_rat)?;
    let c_tol = if exact_part.is_zero() {
        tol.clone()
    } else {
        tol / exact_part.abs()
    };
    let prefactor = certified_product(&spec, v, &c_tol)?;
    Ok(GrandWeight { certified: prefactor.scale_exact(&exact_part), exact_part })
}

fn check_grand_domain(v: &BigRational) -> Result<()> {
    if !v.is_positive() || *v >= BigRational::one() {
        return Err(Error::Domain(format!(
            "grand-canonical fugacity must satisfy 0 < v < 1, got {}",
            format_rational(v)
        )));
    }
    Ok(())
}

/// Coefficient `q^{n(n+1)/2} / prod_{i=1..n}(q^i - 1)` of the Euler-identity
/// series; also the size-law coefficient of the grand-canonical measure.
pub fn euler_series_coefficient(n: u64, q: &BigRational) -> Result<BigRational> {
    if *q <= BigRational::one() {
        return Err(Error::Domain(format!("q must exceed 1, got {}", format_rational(q))));
    }
    // a_0 = 1, a_n = a_{n-1} · q^n / (q^n - 1)
    let mut acc = BigRational::one();
    for i in 1..=n {
        let qi = rational_pow(q, i as i64)?;
        acc = acc * &qi / (&qi - BigRational::one());
    }
    Ok(acc)
}
