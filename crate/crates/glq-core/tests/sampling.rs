//! Statistical integration tests for the samplers: size-histogram goodness
//! of fit against the exact laws, and marginal frequencies against the exact
//! marginals. Seeds are fixed, so these tests are deterministic.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, ToPrimitive, Zero};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use glq_core::collections::SlotId;
use glq_core::ensembles::{marginal, MarginalConstraint};
use glq_core::partitions::Partition;
use glq_core::sampler::{m_size_weights, sample_m_partition, sample_plancherel, SamplerConfig};
use glq_core::series::ProductFactorSpec;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn tol(exp: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(10).pow(exp))
}

/// Pearson chi-square of observed sizes against exact masses, merging the
/// tail so every bin keeps an expected count of at least 5.
fn chi_square_against(masses: &[f64], sizes: &[u64]) -> (f64, f64, usize) {
    let n = sizes.len() as f64;
    let mut cut = masses.len();
    let mut head = 0.0;
    for (m, mass) in masses.iter().enumerate() {
        if (1.0 - head - mass) * n < 5.0 || mass * n < 5.0 {
            cut = m;
            break;
        }
        head += mass;
    }
    let bins = cut + 1;
    let mut observed = vec![0u64; bins];
    for &s in sizes {
        observed[(s as usize).min(cut)] += 1;
    }
    let mut statistic = 0.0;
    for b in 0..bins {
        let expected = if b < cut { masses[b] * n } else { (1.0 - head) * n };
        let diff = observed[b] as f64 - expected;
        statistic += diff * diff / expected;
    }
    let threshold = ChiSquared::new((bins - 1) as f64).unwrap().inverse_cdf(0.999);
    (statistic, threshold, bins)
}

/// Size histogram of 1e5 seeded draws at v=1, q=2 matches the exact size
/// masses within chi-square acceptance at the 1e-3 level.
#[test]
fn m_partition_size_histogram_chi_square() {
    let (v, q) = (rat(1, 1), rat(2, 1));
    let cfg = SamplerConfig::new(42, 100_000);
    let draws = sample_m_partition(&v, &q, &cfg).unwrap();
    let sizes: Vec<u64> = draws.iter().map(Partition::size).collect();

    // exact masses: C(v,q) · v^m [v^m] H, with the certified prefactor
    let spec = ProductFactorSpec::new(1, 1, 1, 0, q.clone()).unwrap();
    let prefactor = glq_core::certified::certified_product(&spec, &v, &tol(9)).unwrap();
    let masses: Vec<f64> = m_size_weights(&v, &q, 60)
        .unwrap()
        .iter()
        .map(|w| (prefactor.value() * w).to_f64().unwrap())
        .collect();

    let (statistic, threshold, bins) = chi_square_against(&masses, &sizes);
    assert!(
        statistic <= threshold,
        "chi-square {statistic} exceeds the 0.999 quantile {threshold} over {bins} bins"
    );
}

/// The empirical frequency of the event "the degree-1 slot carries (2)" at
/// n=2, q=2 is close to the exact marginal 2/3.
#[test]
fn plancherel_marginal_frequency() {
    let constraint =
        MarginalConstraint::single(SlotId::new(1, 0), Partition::new(vec![2]).unwrap());
    let exact = marginal(2, 2, &constraint).unwrap();
    assert_eq!(exact, rat(2, 3));

    let draws = sample_plancherel(2, 2, &SamplerConfig::new(11, 100_000)).unwrap();
    let hits = draws.iter().filter(|c| constraint.matches(c)).count();
    let freq = hits as f64 / draws.len() as f64;
    // standard error is about 0.0015 at 1e5 draws; allow 6 sigma
    assert!(
        (freq - 2.0 / 3.0).abs() < 0.01,
        "frequency {freq} not within 0.01 of 2/3"
    );
}

/// Identical configurations produce bit-identical sample streams across all
/// three samplers.
#[test]
fn streams_are_reproducible() {
    let cfg = SamplerConfig::new(2024, 200);
    let v = rat(1, 2);
    assert_eq!(
        sample_m_partition(&v, &rat(2, 1), &cfg).unwrap(),
        sample_m_partition(&v, &rat(2, 1), &cfg).unwrap()
    );
    assert_eq!(
        sample_plancherel(4, 3, &cfg).unwrap(),
        sample_plancherel(4, 3, &cfg).unwrap()
    );
    assert_eq!(
        glq_core::sampler::sample_grand(&v, 2, &cfg).unwrap(),
        glq_core::sampler::sample_grand(&v, 2, &cfg).unwrap()
    );
}
