//! Exact random generation: partitions from the fugacity measure,
//! collections from the fixed-size Plancherel measure via backward dynamic
//! programming, and collections from the grand-canonical measure via its
//! exact size law.
//!
//! Every categorical draw compares exact rational cumulative weights against
//! a 128-bit uniform, so sampling error is purely statistical, never
//! arithmetic. Streams are reproducible: the generator is ChaCha8 seeded
//! from the configured 64-bit seed (the crate pins the `rand_chacha`
//! version), and identical configurations produce bit-identical streams.

use std::collections::HashMap;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::certified::{certified_product, CertifiedReal};
use crate::collections::{PartitionCollection, SlotId};
use crate::error::{Error, Result};
use crate::fieldpolys::{count_irreducibles, is_prime_power};
use crate::measures::{euler_series_coefficient, schur_special};
use crate::partitions::{enumerate_partitions_with_cap, Partition};
use crate::rational::{decimal_string, format_rational};
use crate::series::{ProductFactorSpec, TruncatedSeries};

/// Default bound on the probability mass allowed beyond the size truncation.
pub const DEFAULT_TAIL_EPS_DENOM: u64 = 1_000_000; // tail_eps = 1e-6

/// Default cap on sampled partition / collection sizes.
pub const DEFAULT_SIZE_CAP: u32 = 60;

/// Default cap on the total size handled by the Plancherel sampler.
pub const DEFAULT_PLANCHEREL_CAP: u64 = 40;

/// Reproducible sampler configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SamplerConfig {
    pub seed: u64,
    pub count: usize,
    /// Probability mass allowed beyond the size truncation; must lie in
    /// (0, 1e-3].
    pub tail_eps: BigRational,
    pub size_cap: u32,
}

impl SamplerConfig {
    pub fn new(seed: u64, count: usize) -> Self {
        Self {
            seed,
            count,
            tail_eps: BigRational::new(BigInt::one(), BigInt::from(DEFAULT_TAIL_EPS_DENOM)),
            size_cap: DEFAULT_SIZE_CAP,
        }
    }

    pub fn with_tail_eps(mut self, tail_eps: BigRational) -> Self {
        self.tail_eps = tail_eps;
        self
    }

    pub fn with_size_cap(mut self, size_cap: u32) -> Self {
        self.size_cap = size_cap;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let max = BigRational::new(BigInt::one(), BigInt::from(1000));
        if !self.tail_eps.is_positive() || self.tail_eps > max {
            return Err(Error::Domain(format!(
                "tail_eps must lie in (0, 1/1000], got {}",
                format_rational(&self.tail_eps)
            )));
        }
        Ok(())
    }
}

/// 128-bit uniform variates on (0, 1] from a seeded ChaCha8 stream.
pub struct UniformSource {
    rng: ChaCha8Rng,
}

impl UniformSource {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// (U + 1) / 2^128 with U uniform on [0, 2^128): never exactly zero, so a
    /// zero-weight prefix of a cumulative table can never be selected.
    pub fn next_unit(&mut self) -> BigRational {
        let hi = self.rng.next_u64() as u128;
        let lo = self.rng.next_u64() as u128;
        let u = (hi << 64) | lo;
        BigRational::new(BigInt::from(u) + BigInt::one(), BigInt::one() << 128)
    }
}

/// Cumulative weights for exact inverse-CDF selection. The rule is "first
/// cumulative >= u·total"; with exact rationals a tie lands on the earlier
/// index (the "round down" convention), and the chosen index always has
/// positive weight because u > 0.
struct CategoricalTable {
    cum: Vec<BigRational>,
    total: BigRational,
}

impl CategoricalTable {
    fn new(weights: &[BigRational]) -> Result<Self> {
        let mut cum = Vec::with_capacity(weights.len());
        let mut acc = BigRational::zero();
        for w in weights {
            if w.is_negative() {
                return Err(Error::Internal("negative categorical weight".into()));
            }
            acc += w;
            cum.push(acc.clone());
        }
        if !acc.is_positive() {
            return Err(Error::Internal("categorical table with zero total mass".into()));
        }
        Ok(Self { total: acc, cum })
    }

    fn pick(&self, rng: &mut UniformSource) -> usize {
        let threshold = rng.next_unit() * &self.total;
        self.cum.partition_point(|c| *c < threshold)
    }
}

// ---------------------------------------------------------------------------
// fugacity-measure partition sampler
// ---------------------------------------------------------------------------

/// Unnormalized size-law weights of the fugacity measure: entry `m` is
/// `v^m · [v^m] prod_{r>=1}(1 - v q^{-r})^{-r}`, so that the probability of
/// size `m` is the prefactor `C(v,q)` times this entry.
pub fn m_size_weights(v: &BigRational, q: &BigRational, upto: u32) -> Result<Vec<BigRational>> {
    let h = ProductFactorSpec::new(1, 1, -1, 0, q.clone())?.series(upto as usize)?;
    let mut out = Vec::with_capacity(upto as usize + 1);
    let mut vm = BigRational::one();
    for m in 0..=upto as usize {
        out.push(&vm * h.coeff(m));
        vm *= v;
    }
    Ok(out)
}

/// The certified prefactor `C(v,q) = prod_{r>=1}(1 - v q^{-r})^r`, with an
/// error bound small enough that its lower endpoint stays positive.
fn certified_m_prefactor(v: &BigRational, q: &BigRational, eps: &BigRational) -> Result<CertifiedReal> {
    let spec = ProductFactorSpec::new(1, 1, 1, 0, q.clone())?;
    let sixteenth = eps / BigRational::from_integer(BigInt::from(16));
    let c = certified_product(&spec, v, &sixteenth)?;
    if c.lower().is_positive() {
        return Ok(c);
    }
    let tighter = c.value() * &sixteenth; // value is positive: product of positive factors
    certified_product(&spec, v, &tighter)
}

/// Draw i.i.d. partitions from the fugacity measure, restricted to the event
/// `|λ| <= M*` where `M*` is the smallest size bound whose certified tail
/// mass is at most `tail_eps`.
pub fn sample_m_partition(
    v: &BigRational,
    q: &BigRational,
    cfg: &SamplerConfig,
) -> Result<Vec<Partition>> {
    cfg.validate()?;
    if *q <= BigRational::one() || !v.is_positive() || v >= q {
        return Err(Error::Domain(format!(
            "fugacity must satisfy 0 < v < q, got v = {}, q = {}",
            format_rational(v),
            format_rational(q)
        )));
    }
    let prefactor = certified_m_prefactor(v, q, &cfg.tail_eps)?;
    let weights = m_size_weights(v, q, cfg.size_cap)?;

    // smallest M with certified tail 1 - C·S_M <= tail_eps
    let mut partial = BigRational::zero();
    let mut truncation = None;
    let mut last_tail = BigRational::one();
    for (m, w) in weights.iter().enumerate() {
        partial += w;
        last_tail = BigRational::one() - prefactor.lower() * &partial;
        if last_tail <= cfg.tail_eps {
            truncation = Some(m);
            break;
        }
    }
    let truncation = truncation.ok_or_else(|| {
        Error::Resource(format!(
            "tail_eps {} unreachable within size cap {}; achievable tail is {}",
            format_rational(&cfg.tail_eps),
            cfg.size_cap,
            decimal_string(&last_tail, 12),
        ))
    })?;

    let size_table = CategoricalTable::new(&weights[..=truncation])?;
    let mut partition_tables: HashMap<u32, (Vec<Partition>, CategoricalTable)> = HashMap::new();
    let mut rng = UniformSource::new(cfg.seed);
    let mut out = Vec::with_capacity(cfg.count);
    for _ in 0..cfg.count {
        let m = size_table.pick(&mut rng) as u32;
        if m == 0 {
            out.push(Partition::empty());
            continue;
        }
        let (partitions, table) = match partition_tables.entry(m) {
            std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(conditional_partition_table(m, 1, q, cfg.size_cap)?)
            }
        };
        out.push(partitions[table.pick(&mut rng)].clone());
    }
    Ok(out)
}

/// Partitions of `m` with weights proportional to the squared Schur
/// specialization at step `d` (the shared factor `(q^d)^m` cancels).
fn conditional_partition_table(
    m: u32,
    d: u32,
    q: &BigRational,
    cap: u32,
) -> Result<(Vec<Partition>, CategoricalTable)> {
    let partitions = enumerate_partitions_with_cap(m, cap.max(m))?;
    let weights: Vec<BigRational> = partitions
        .iter()
        .map(|lam| {
            let s = schur_special(lam, d, q)?;
            Ok(&s * &s)
        })
        .collect::<Result<_>>()?;
    let table = CategoricalTable::new(&weights)?;
    Ok((partitions, table))
}

// ---------------------------------------------------------------------------
// Plancherel sampler (backward DP)
// ---------------------------------------------------------------------------

/// Exact sampler for the Plancherel measure on collections of total size `n`
/// over F_q. Construction precomputes, per degree `d <= n`, the class series
/// `G_d = H_d^{N(d)}` and the suffix products `T_d = prod_{e >= d} G_e`;
/// sampling walks degrees, splits each degree class over its labeled slots by
/// binary splitting, and finally picks a partition inside each occupied slot.
pub struct PlancherelSampler {
    n: u64,
    q: u64,
    q_rat: BigRational,
    slot_counts: Vec<u128>,          // index d-1
    log_h: Vec<TruncatedSeries>,     // index d-1: log of H_d
    class_series: Vec<TruncatedSeries>, // index d-1: G_d
    suffix: Vec<TruncatedSeries>,    // index d-1: T_d; plus one final = 1
    power_cache: HashMap<(u32, u128), TruncatedSeries>,
    partition_tables: HashMap<(u32, u32), (Vec<Partition>, CategoricalTable)>,
}

impl PlancherelSampler {
    pub fn new(n: u64, q: u64) -> Result<Self> {
        Self::with_cap(n, q, DEFAULT_PLANCHEREL_CAP)
    }

    pub fn with_cap(n: u64, q: u64, cap: u64) -> Result<Self> {
        if n > cap {
            return Err(Error::Resource(format!(
                "total size {n} exceeds the Plancherel sampler cap {cap}"
            )));
        }
        if is_prime_power(q).is_none() {
            return Err(Error::Domain(format!("q = {q} is not a prime power")));
        }
        let q_rat = BigRational::from_integer(BigInt::from(q));
        let order = n as usize;
        let mut slot_counts = Vec::new();
        let mut log_h = Vec::new();
        let mut class_series = Vec::new();
        for d in 1..=n.max(1).min(u32::MAX as u64) as u32 {
            if d as u64 > n {
                break;
            }
            let count = count_irreducibles(d, q)?.count.to_u128().ok_or_else(|| {
                Error::Resource(format!("degree-{d} slot count over F_{q} exceeds u128"))
            })?;
            let lh = ProductFactorSpec::new(d, 1, -1, 0, q_rat.clone())?.log_series(order)?;
            let g = lh
                .scale(&BigRational::from_integer(BigInt::from(count)))
                .exp()?;
            slot_counts.push(count);
            log_h.push(lh);
            class_series.push(g);
        }
        // suffix products T_d = G_d · T_{d+1}, T_{n+1} = 1
        let mut suffix = vec![TruncatedSeries::one(order); class_series.len() + 1];
        for d_idx in (0..class_series.len()).rev() {
            suffix[d_idx] = class_series[d_idx].mul(&suffix[d_idx + 1])?;
        }
        Ok(Self {
            n,
            q,
            q_rat,
            slot_counts,
            log_h,
            class_series,
            suffix,
            power_cache: HashMap::new(),
            partition_tables: HashMap::new(),
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    fn stage1_weights(&self, d_idx: usize, remaining: u64) -> Vec<BigRational> {
        let g = &self.class_series[d_idx];
        let t_next = &self.suffix[d_idx + 1];
        (0..=remaining as usize)
            .map(|m| g.coeff(m) * t_next.coeff(remaining as usize - m))
            .collect()
    }

    /// `H_d^k` truncated at the ambient order, memoized along the split tree.
    fn class_power(&mut self, d: u32, k: u128) -> Result<TruncatedSeries> {
        if let Some(s) = self.power_cache.get(&(d, k)) {
            return Ok(s.clone());
        }
        let s = self.log_h[(d - 1) as usize]
            .scale(&BigRational::from_integer(BigInt::from(k)))
            .exp()?;
        self.power_cache.insert((d, k), s.clone());
        Ok(s)
    }

    fn split_weights(&mut self, d: u32, k1: u128, k2: u128, p: u64) -> Result<Vec<BigRational>> {
        let left = self.class_power(d, k1)?;
        let right = self.class_power(d, k2)?;
        Ok((0..=p as usize)
            .map(|j| left.coeff(j) * right.coeff(p as usize - j))
            .collect())
    }

    fn partition_pick(
        &mut self,
        d: u32,
        m: u32,
        rng: &mut UniformSource,
    ) -> Result<Partition> {
        let q_rat = self.q_rat.clone();
        let (partitions, table) = match self.partition_tables.entry((d, m)) {
            std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(conditional_partition_table(m, d, &q_rat, m)?)
            }
        };
        Ok(partitions[table.pick(rng)].clone())
    }

    /// One exact draw.
    pub fn sample(&mut self, rng: &mut UniformSource) -> Result<PartitionCollection> {
        let mut pairs: Vec<(SlotId, Partition)> = Vec::new();
        let mut remaining = self.n;
        for d_idx in 0..self.class_series.len() {
            if remaining == 0 {
                break;
            }
            let weights = self.stage1_weights(d_idx, remaining);
            let table = CategoricalTable::new(&weights)?;
            let class_power = table.pick(rng) as u64;
            remaining -= class_power;
            if class_power > 0 {
                let d = (d_idx + 1) as u32;
                self.split_into_slots(d, 0, self.slot_counts[d_idx], class_power, rng, &mut pairs)?;
            }
        }
        if remaining != 0 {
            return Err(Error::Internal("allocated sizes do not sum to n".into()));
        }
        PartitionCollection::from_pairs(pairs)
    }

    /// Binary splitting of a class power `p` over the `k` slots starting at
    /// index `lo`. Zero power short-circuits without consuming randomness.
    fn split_into_slots(
        &mut self,
        d: u32,
        lo: u128,
        k: u128,
        p: u64,
        rng: &mut UniformSource,
        pairs: &mut Vec<(SlotId, Partition)>,
    ) -> Result<()> {
        if p == 0 {
            return Ok(());
        }
        if k == 1 {
            if p % d as u64 != 0 {
                return Err(Error::Internal("slot power not a multiple of its degree".into()));
            }
            let m = (p / d as u64) as u32;
            let lam = self.partition_pick(d, m, rng)?;
            pairs.push((SlotId::new(d, lo), lam));
            return Ok(());
        }
        let k1 = k / 2;
        let k2 = k - k1;
        let weights = self.split_weights(d, k1, k2, p)?;
        let table = CategoricalTable::new(&weights)?;
        let j = table.pick(rng) as u64;
        self.split_into_slots(d, lo, k1, j, rng, pairs)?;
        self.split_into_slots(d, lo + k1, k2, p - j, rng, pairs)?;
        Ok(())
    }

    /// Exact probability the staged scheme assigns to a collection: the
    /// product of its stage-wise choice probabilities. Equals the Plancherel
    /// weight (a standing invariant, asserted by the acceptance suite).
    pub fn collection_probability(&mut self, coll: &PartitionCollection) -> Result<BigRational> {
        if coll.total_size() != self.n {
            return Ok(BigRational::zero());
        }
        coll.validate_for(self.q)?;
        // per-degree class powers
        let mut class_powers = vec![0u64; self.class_series.len()];
        for (slot, lam) in coll.iter() {
            class_powers[(slot.degree - 1) as usize] += slot.degree as u64 * lam.size();
        }
        let mut prob = BigRational::one();
        let mut remaining = self.n;
        for d_idx in 0..self.class_series.len() {
            if remaining == 0 {
                break;
            }
            let weights = self.stage1_weights(d_idx, remaining);
            let total: BigRational = weights.iter().sum();
            let m = class_powers[d_idx];
            prob *= &weights[m as usize] / &total;
            remaining -= m;
            if m > 0 {
                let d = (d_idx + 1) as u32;
                prob *= self.split_probability(d, 0, self.slot_counts[d_idx], m, coll)?;
            }
        }
        Ok(prob)
    }

    fn split_probability(
        &mut self,
        d: u32,
        lo: u128,
        k: u128,
        p: u64,
        coll: &PartitionCollection,
    ) -> Result<BigRational> {
        if p == 0 {
            return Ok(BigRational::one());
        }
        if k == 1 {
            let m = (p / d as u64) as u32;
            let lam = coll
                .get(&SlotId::new(d, lo))
                .ok_or_else(|| Error::Internal("occupied slot missing from collection".into()))?;
            let s = schur_special(lam, d, &self.q_rat)?;
            let weight = &s * &s;
            let mut total = BigRational::zero();
            for cand in enumerate_partitions_with_cap(m, m)? {
                let sc = schur_special(&cand, d, &self.q_rat)?;
                total += &sc * &sc;
            }
            return Ok(weight / total);
        }
        let k1 = k / 2;
        let k2 = k - k1;
        let j: u64 = coll
            .iter()
            .filter(|(slot, _)| slot.degree == d && slot.index >= lo && slot.index < lo + k1)
            .map(|(slot, lam)| slot.degree as u64 * lam.size())
            .sum();
        let weights = self.split_weights(d, k1, k2, p)?;
        let total: BigRational = weights.iter().sum();
        let mut prob = &weights[j as usize] / &total;
        prob *= self.split_probability(d, lo, k1, j, coll)?;
        prob *= self.split_probability(d, lo + k1, k2, p - j, coll)?;
        Ok(prob)
    }
}

/// Draw `cfg.count` i.i.d. collections from the Plancherel measure.
pub fn sample_plancherel(n: u64, q: u64, cfg: &SamplerConfig) -> Result<Vec<PartitionCollection>> {
    cfg.validate()?;
    let mut sampler = PlancherelSampler::new(n, q)?;
    let mut rng = UniformSource::new(cfg.seed);
    (0..cfg.count).map(|_| sampler.sample(&mut rng)).collect()
}

// ---------------------------------------------------------------------------
// grand-canonical sampler
// ---------------------------------------------------------------------------

/// Unnormalized grand-canonical size-law weights: entry `n` is
/// `q^{n(n+1)/2} prod_{i<=n}(q^i - 1)^{-1} v^n`; the probability of total
/// size `n` is the prefactor `prod_{r>=0}(1 - v q^{-r})` times this entry.
pub fn grand_size_weights(v: &BigRational, q: u64, upto: u64) -> Result<Vec<BigRational>> {
    let q_rat = BigRational::from_integer(BigInt::from(q));
    let mut out = Vec::with_capacity(upto as usize + 1);
    let mut vn = BigRational::one();
    for n in 0..=upto {
        out.push(euler_series_coefficient(n, &q_rat)? * &vn);
        vn *= v;
    }
    Ok(out)
}

/// The certified grand-canonical prefactor `prod_{r>=0}(1 - v q^{-r})`.
pub fn grand_prefactor(v: &BigRational, q: u64, eps: &BigRational) -> Result<CertifiedReal> {
    let q_rat = BigRational::from_integer(BigInt::from(q));
    let spec = ProductFactorSpec::new(1, 0, 0, 1, q_rat)?;
    let sixteenth = eps / BigRational::from_integer(BigInt::from(16));
    let c = certified_product(&spec, v, &sixteenth)?;
    if c.lower().is_positive() {
        return Ok(c);
    }
    let tighter = c.value() * &sixteenth;
    certified_product(&spec, v, &tighter)
}

/// Draw collections from the grand-canonical measure (`0 < v < 1`): first the
/// total size from its exact law, then a Plancherel draw at that size.
pub fn sample_grand(v: &BigRational, q: u64, cfg: &SamplerConfig) -> Result<Vec<PartitionCollection>> {
    cfg.validate()?;
    if !v.is_positive() || *v >= BigRational::one() {
        return Err(Error::Domain(format!(
            "grand-canonical fugacity must satisfy 0 < v < 1, got {}",
            format_rational(v)
        )));
    }
    let size_bound = (cfg.size_cap as u64).min(DEFAULT_PLANCHEREL_CAP);
    let prefactor = grand_prefactor(v, q, &cfg.tail_eps)?;
    let weights = grand_size_weights(v, q, size_bound)?;

    let mut partial = BigRational::zero();
    let mut truncation = None;
    let mut last_tail = BigRational::one();
    for (n, w) in weights.iter().enumerate() {
        partial += w;
        last_tail = BigRational::one() - prefactor.lower() * &partial;
        if last_tail <= cfg.tail_eps {
            truncation = Some(n);
            break;
        }
    }
    let truncation = truncation.ok_or_else(|| {
        Error::Resource(format!(
            "tail_eps {} unreachable within size cap {}; achievable tail is {}",
            format_rational(&cfg.tail_eps),
            size_bound,
            decimal_string(&last_tail, 12),
        ))
    })?;

    let size_table = CategoricalTable::new(&weights[..=truncation])?;
    let mut rng = UniformSource::new(cfg.seed);
    let mut samplers: HashMap<u64, PlancherelSampler> = HashMap::new();
    let mut out = Vec::with_capacity(cfg.count);
    for _ in 0..cfg.count {
        let n = size_table.pick(&mut rng) as u64;
        if n == 0 {
            out.push(PartitionCollection::empty());
            continue;
        }
        let sampler = match samplers.entry(n) {
            std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(PlancherelSampler::new(n, q)?)
            }
        };
        out.push(sampler.sample(&mut rng)?);
    }
    Ok(out)
}
