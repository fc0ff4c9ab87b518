//! Partition collections: finite assignments of nonempty partitions to
//! labeled irreducible polynomials, the objects that parameterize the
//! irreducible representations of GL(n,q).

use std::collections::BTreeMap;

use num::bigint::BigUint;

use crate::error::{Error, Result};
use crate::fieldpolys::count_irreducibles;
use crate::partitions::Partition;

/// A bare polynomial label: degree plus position in the canonical
/// enumeration of that degree. The collection machinery never needs the
/// explicit coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SlotId {
    pub degree: u32,
    pub index: u128,
}

impl SlotId {
    pub fn new(degree: u32, index: u128) -> Self {
        Self { degree, index }
    }
}

/// A finite-support map from polynomial labels to nonempty partitions.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PartitionCollection {
    assignments: BTreeMap<SlotId, Partition>,
}

impl PartitionCollection {
    /// The empty collection (total size 0).
    pub fn empty() -> Self {
        Self::default()
    }

    /// Build from `(slot, partition)` pairs. Empty partitions and duplicate
    /// slots are rejected: absence of a slot already means "empty partition
    /// there".
    pub fn from_pairs<I: IntoIterator<Item = (SlotId, Partition)>>(pairs: I) -> Result<Self> {
        let mut assignments = BTreeMap::new();
        for (slot, lam) in pairs {
            if lam.is_empty() {
                return Err(Error::Domain(format!(
                    "empty partition stored at slot {}:{}; omit the slot instead",
                    slot.degree, slot.index
                )));
            }
            if assignments.insert(slot, lam).is_some() {
                return Err(Error::Domain(format!(
                    "duplicate slot {}:{}",
                    slot.degree, slot.index
                )));
            }
        }
        Ok(Self { assignments })
    }

    /// Total size |Λ| = Σ |Λ_φ| · deg φ.
    pub fn total_size(&self) -> u64 {
        self.assignments
            .iter()
            .map(|(slot, lam)| lam.size() * slot.degree as u64)
            .sum()
    }

    pub fn get(&self, slot: &SlotId) -> Option<&Partition> {
        self.assignments.get(slot)
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    /// Assignments in canonical (degree, index) order.
    pub fn iter(&self) -> impl Iterator<Item = (&SlotId, &Partition)> {
        self.assignments.iter()
    }

    /// Check that every slot index addresses an existing polynomial over F_q.
    pub fn validate_for(&self, q: u64) -> Result<()> {
        for slot in self.assignments.keys() {
            let n = count_irreducibles(slot.degree, q)?.count;
            if BigUint::from(slot.index) >= n {
                return Err(Error::Domain(format!(
                    "slot index {} out of range: only {} irreducibles of degree {} over F_{}",
                    slot.index, n, slot.degree, q
                )));
            }
        }
        Ok(())
    }
}
