//! Integer partitions: conjugation, hook lengths, the `n(λ)` statistics, and
//! enumeration by size.
//!
//! The canonical text form is comma-separated parts with no spaces (`"2,1"`);
//! the empty string denotes the empty partition.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Default cap on the size accepted by [`enumerate_partitions`].
pub const DEFAULT_PARTITION_CAP: u32 = 60;

/// A partition: weakly decreasing positive parts (possibly none).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Validates that the parts are positive and weakly decreasing.
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        for w in parts.windows(2) {
            if w[0] < w[1] {
                return Err(Error::Domain(format!(
                    "parts must be weakly decreasing: {} before {}",
                    w[0], w[1]
                )));
            }
        }
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::Domain("parts must be positive".into()));
        }
        Ok(Self { parts })
    }

    pub fn empty() -> Self {
        Self { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// |λ| = sum of the parts.
    pub fn size(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }

    /// The conjugate partition (transposed diagram).
    pub fn conjugate(&self) -> Partition {
        match self.parts.first() {
            None => Partition::empty(),
            Some(&first) => {
                let parts = (1..=first)
                    .map(|j| self.parts.iter().take_while(|&&p| p >= j).count() as u32)
                    .collect();
                Partition { parts }
            }
        }
    }

    /// Hook lengths h(x) = λ_i + λ'_j - i - j + 1, cell by cell in row-major
    /// order (a multiset; callers that compare should sort).
    pub fn hooks(&self) -> Vec<u32> {
        let conj = self.conjugate();
        let mut out = Vec::with_capacity(self.size() as usize);
        for (i, &row) in self.parts.iter().enumerate() {
            for j in 0..row as usize {
                let h = row + conj.parts[j] - i as u32 - j as u32 - 1;
                out.push(h);
            }
        }
        out
    }

    /// n(λ) = Σ_j λ'_j (λ'_j - 1) / 2.
    pub fn n_stat(&self) -> u64 {
        self.conjugate().n_stat_conjugate()
    }

    /// n(λ') = Σ_i λ_i (λ_i - 1) / 2.
    pub fn n_stat_conjugate(&self) -> u64 {
        self.parts
            .iter()
            .map(|&p| p as u64 * (p as u64 - 1) / 2)
            .sum()
    }

    /// All statistics at once.
    pub fn stats(&self) -> PartitionStats {
        PartitionStats {
            conjugate: self.conjugate(),
            hooks: self.hooks(),
            n_lambda: self.n_stat(),
            n_conjugate: self.n_stat_conjugate(),
            size: self.size(),
        }
    }
}

/// The record returned by [`Partition::stats`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionStats {
    pub conjugate: Partition,
    /// Hook lengths as a multiset (row-major cell order).
    pub hooks: Vec<u32>,
    /// n(λ) = Σ_j λ'_j (λ'_j - 1)/2.
    pub n_lambda: u64,
    /// n(λ') = Σ_i λ_i (λ_i - 1)/2.
    pub n_conjugate: u64,
    pub size: u64,
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for p in &self.parts {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self)
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Ok(Partition::empty());
        }
        let mut parts = Vec::new();
        let mut pos = 0usize;
        for piece in s.split(',') {
            let p: u32 = piece.parse().map_err(|_| {
                Error::Parse(format!("bad partition part {piece:?} at position {pos}"))
            })?;
            parts.push(p);
            pos += piece.len() + 1;
        }
        Partition::new(parts)
    }
}

/// All partitions of `m` in reverse-lexicographic order, e.g. for m = 4:
/// (4), (3,1), (2,2), (2,1,1), (1,1,1,1). Uses the default size cap.
pub fn enumerate_partitions(m: u32) -> Result<Vec<Partition>> {
    enumerate_partitions_with_cap(m, DEFAULT_PARTITION_CAP)
}

/// As [`enumerate_partitions`] with an explicit cap.
pub fn enumerate_partitions_with_cap(m: u32, cap: u32) -> Result<Vec<Partition>> {
    if m > cap {
        return Err(Error::Resource(format!(
            "partition size {m} exceeds the cap {cap}"
        )));
    }
    let mut out = Vec::new();
    let mut acc = Vec::new();
    descend(m, m, &mut acc, &mut out);
    Ok(out)
}

fn descend(remaining: u32, max_part: u32, acc: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition { parts: acc.clone() });
        return;
    }
    let hi = remaining.min(max_part);
    for first in (1..=hi).rev() {
        acc.push(first);
        descend(remaining - first, first, acc, out);
        acc.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn sorted(mut v: Vec<u32>) -> Vec<u32> {
        v.sort_unstable();
        v
    }

    #[test]
    fn empty_partition_stats() {
        let s = Partition::empty().stats();
        assert_eq!(s.conjugate, Partition::empty());
        assert!(s.hooks.is_empty());
        assert_eq!((s.n_lambda, s.n_conjugate, s.size), (0, 0, 0));
    }

    #[test]
    fn staircase_two_one() {
        // hand evaluation: cells (1,1),(1,2),(2,1) have hooks 3,1,1
        let s = p(&[2, 1]).stats();
        assert_eq!(s.conjugate, p(&[2, 1]));
        assert_eq!(sorted(s.hooks), vec![1, 1, 3]);
        assert_eq!(s.n_lambda, 1);
        assert_eq!(s.n_conjugate, 1);
        assert_eq!(s.size, 3);
    }

    #[test]
    fn single_row() {
        // (4): hooks 4,3,2,1; n(λ) = 0 (all columns have height 1),
        // n(λ') = 4·3/2 = 6
        let s = p(&[4]).stats();
        assert_eq!(s.conjugate, p(&[1, 1, 1, 1]));
        assert_eq!(sorted(s.hooks), vec![1, 2, 3, 4]);
        assert_eq!(s.n_lambda, 0);
        assert_eq!(s.n_conjugate, 6);
    }

    #[test]
    fn construction_rejects_invalid() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
    }

    #[test]
    fn text_round_trip() {
        for (text, parts) in [("", vec![]), ("2,1", vec![2, 1]), ("10,10,3", vec![10, 10, 3])] {
            let parsed: Partition = text.parse().unwrap();
            assert_eq!(parsed.parts(), parts.as_slice());
            assert_eq!(parsed.to_string(), text);
        }
        assert!("1,2".parse::<Partition>().is_err());
        assert!("2,x".parse::<Partition>().is_err());
        assert!("2,,1".parse::<Partition>().is_err());
    }

    #[test]
    fn enumeration_order_and_counts() {
        assert_eq!(enumerate_partitions(0).unwrap(), vec![Partition::empty()]);
        let four = enumerate_partitions(4).unwrap();
        let expect: Vec<Partition> = [
            vec![4],
            vec![3, 1],
            vec![2, 2],
            vec![2, 1, 1],
            vec![1, 1, 1, 1],
        ]
        .into_iter()
        .map(|v| Partition::new(v).unwrap())
        .collect();
        assert_eq!(four, expect);
        // p(10) = 42 by the recurrence oracle below
        assert_eq!(enumerate_partitions(10).unwrap().len(), 42);
        assert!(enumerate_partitions(DEFAULT_PARTITION_CAP + 1).is_err());
    }

    /// Euler's pentagonal-number recurrence for the partition counts:
    /// p(n) = Σ_{k>=1} (-1)^{k-1} [ p(n - k(3k-1)/2) + p(n - k(3k+1)/2) ].
    fn partition_counts(upto: usize) -> Vec<u64> {
        let mut p = vec![0u64; upto + 1];
        p[0] = 1;
        for n in 1..=upto {
            let mut acc: i128 = 0;
            let mut k = 1i128;
            loop {
                let g1 = k * (3 * k - 1) / 2;
                let g2 = k * (3 * k + 1) / 2;
                if g1 > n as i128 {
                    break;
                }
                let sign = if k % 2 == 1 { 1 } else { -1 };
                acc += sign * p[n - g1 as usize] as i128;
                if g2 <= n as i128 {
                    acc += sign * p[n - g2 as usize] as i128;
                }
                k += 1;
            }
            p[n] = acc as u64;
        }
        p
    }

    #[test]
    fn enumeration_matches_pentagonal_recurrence() {
        let counts = partition_counts(60);
        for m in 0..=60u32 {
            let got = enumerate_partitions(m).unwrap().len() as u64;
            assert_eq!(got, counts[m as usize], "p({m})");
        }
    }

    #[test]
    fn hook_sum_identity_exhaustive() {
        // Σ_x h(x) = n(λ) + n(λ') + |λ| for every |λ| <= 20
        for m in 0..=20u32 {
            for lam in enumerate_partitions(m).unwrap() {
                let s = lam.stats();
                let hook_sum: u64 = s.hooks.iter().map(|&h| h as u64).sum();
                assert_eq!(hook_sum, s.n_lambda + s.n_conjugate + s.size, "λ = {lam:?}");
            }
        }
    }

    #[test]
    fn conjugation_swaps_statistics() {
        for m in 0..=12u32 {
            for lam in enumerate_partitions(m).unwrap() {
                let s = lam.stats();
                let cs = s.conjugate.stats();
                assert_eq!(cs.conjugate, lam);
                assert_eq!(cs.n_lambda, s.n_conjugate);
                assert_eq!(cs.n_conjugate, s.n_lambda);
                assert_eq!(sorted(cs.hooks), sorted(s.hooks.clone()));
            }
        }
    }

    fn arb_partition() -> impl Strategy<Value = Partition> {
        proptest::collection::vec(1u32..=8, 0..=6).prop_map(|mut v| {
            v.sort_unstable_by(|a, b| b.cmp(a));
            Partition::new(v).unwrap()
        })
    }

    proptest! {
        #[test]
        fn conjugation_is_an_involution(lam in arb_partition()) {
            prop_assert_eq!(lam.conjugate().conjugate(), lam.clone());
            prop_assert_eq!(lam.conjugate().size(), lam.size());
        }
    }
}
