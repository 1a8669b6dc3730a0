//! Coded caching for two-hop relay networks with the resolvability property.
//!
//! A server holding `N` files reaches `K` users through `h` relays; every user
//! is attached to `r` relays. When the user set splits into parallel classes
//! (each class a partition of the relays), users can cache by class so that
//! every relay sees the same cache pattern below it, and each relay then runs
//! an XOR multicast schedule for one superscript of the subfiles.
//!
//! The crate is organised bottom up:
//!
//! - [`combinatorics`]: subsets, lexicographic enumeration, binomials.
//! - [`topology`]: resolvable networks (combination networks via Baranyai
//!   partitions, affine planes, custom designs) and their file format.
//! - [`erasure`]: a systematic Cauchy MDS code over GF(2^8).
//! - [`schemes`]: the class-based coded scheme, routing, CM-CNC and the
//!   broadcast MDS variant, all bit-exact over byte buffers.
//! - [`harness`]: end-to-end runs, closed-form rates, memory sharing,
//!   comparison ratios and sweeps.

pub mod combinatorics;
pub mod erasure;
mod error;
pub mod harness;
pub mod schemes;
pub mod topology;

pub use combinatorics::SortedSubset;
pub use error::{Error, Result};
pub use harness::{RatePoint, SchemeId, SchemeReport};
pub use schemes::{CacheState, DemandVector, FileLibrary, TransmissionLog};
pub use topology::Network;

/// Exact rational used for storage levels and rates.
pub type Rational = num_rational::Ratio<i128>;
