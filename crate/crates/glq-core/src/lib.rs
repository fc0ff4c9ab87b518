//! Exact arithmetic for the Plancherel measures of the finite general linear
//! groups GL(n,q) and their limit laws on partitions.
//!
//! The crate computes, over arbitrary-precision rationals:
//!
//! - truncated power-series expansions of the structural infinite products,
//!   in closed form ([`series`]);
//! - partition combinatorics: hooks, conjugates, the `n(λ)` statistics
//!   ([`partitions`]);
//! - counts and explicit enumerations of monic irreducible polynomials with
//!   nonzero constant term ([`fieldpolys`]);
//! - pointwise weights: Schur specializations, representation degrees,
//!   |GL(n,q)|, Plancherel and grand-canonical weights ([`measures`]);
//! - ensemble-level objects: collection enumeration, exact joint marginals by
//!   coefficient extraction, limit weights, convergence tables, and identity
//!   verifiers ([`ensembles`]);
//! - exact reproducible samplers for all three ensembles ([`sampler`]).
//!
//! Infinite products that must be evaluated numerically are carried as
//! [`certified::CertifiedReal`] values: a rational approximation plus a
//! rigorous error bound. Everything else is exact.

pub mod certified;
pub mod collections;
pub mod ensembles;
pub mod error;
pub mod fieldpolys;
pub mod measures;
pub mod partitions;
pub mod rational;
pub mod sampler;
pub mod series;

pub use certified::CertifiedReal;
pub use collections::{PartitionCollection, SlotId};
pub use error::{Error, Result};
pub use partitions::Partition;
pub use series::{ProductFactorSpec, TruncatedSeries};

/// Default truncation order for series-based computations.
pub const DEFAULT_ORDER: usize = 30;
