//! Placement, delivery and decoding pipelines.
//!
//! Four schemes share the same data model:
//!
//! - [`proposed`]: class-based placement with per-relay XOR multicast.
//! - [`routing`]: the same placement with uncoded per-user delivery.
//! - [`cmcnc`]: centralized coded multicast over all `K` users, each signal
//!   split into `r` parts and MDS-coded across the `h` server edges.
//! - [`broadcast`]: uncoded prefix caching; every file's remainder is
//!   MDS-coded onto the server edges and relays forward the demanded pieces.
//!
//! All pieces are byte buffers; a file of `F` bits is `F/8` bytes and every
//! subfile boundary falls on a byte.

pub mod broadcast;
pub mod cmcnc;
mod log;
pub mod proposed;
pub mod routing;

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::combinatorics::SortedSubset;
use crate::topology::Network;
use crate::{Error, Rational, Result};

pub use log::{Reception, Signal, SignalLabel, Term, TransmissionLog};

/// `N` files of `F` bits each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileLibrary {
    files: Vec<Vec<u8>>,
}

impl FileLibrary {
    pub fn new(files: Vec<Vec<u8>>) -> Result<Self> {
        if files.is_empty() {
            return Err(Error::InvalidArgument(
                "library needs at least one file".into(),
            ));
        }
        if files.iter().any(|f| f.len() != files[0].len()) {
            return Err(Error::InvalidArgument("files differ in size".into()));
        }
        Ok(Self { files })
    }

    /// Seeded pseudo-random contents; `bits` must be a multiple of 8.
    pub fn random(n_files: usize, bits: u64, seed: u64) -> Result<Self> {
        if !bits.is_multiple_of(8) {
            return Err(Error::InvalidArgument(format!(
                "file size {bits} bits is not a whole number of bytes"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let files = (0..n_files)
            .map(|_| {
                let mut f = vec![0u8; (bits / 8) as usize];
                rng.fill_bytes(&mut f);
                f
            })
            .collect();
        Self::new(files)
    }

    pub fn n(&self) -> usize {
        self.files.len()
    }

    pub fn bits(&self) -> u64 {
        self.file_bytes() as u64 * 8
    }

    pub fn file_bytes(&self) -> usize {
        self.files[0].len()
    }

    /// File `n`, 1-based.
    pub fn file(&self, n: usize) -> &[u8] {
        &self.files[n - 1]
    }
}

/// Requested file per user, 1-based file ids indexed by user.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DemandVector(Vec<usize>);

impl DemandVector {
    pub fn new(demands: Vec<usize>, n_files: usize) -> Result<Self> {
        if let Some(bad) = demands.iter().find(|&&d| d == 0 || d > n_files) {
            return Err(Error::DemandMismatch(format!(
                "file {bad} outside 1..={n_files}"
            )));
        }
        Ok(Self(demands))
    }

    /// User `u` requests file `u + 1`; needs `n_files >= users`.
    pub fn distinct(users: usize, n_files: usize) -> Result<Self> {
        if n_files < users {
            return Err(Error::DemandMismatch(format!(
                "distinct demands need N >= K, got N = {n_files}, K = {users}"
            )));
        }
        Self::new((1..=users).collect(), n_files)
    }

    pub fn all_same(users: usize, file: usize, n_files: usize) -> Result<Self> {
        Self::new(vec![file; users], n_files)
    }

    pub fn seeded(users: usize, n_files: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::new(
            (0..users).map(|_| rng.gen_range(1..=n_files)).collect(),
            n_files,
        )
    }

    /// The `index`-th of the `N^K` demand vectors; user 0 is the most significant digit.
    pub fn from_index(mut index: u64, users: usize, n_files: usize) -> Result<Self> {
        let mut d = vec![1; users];
        for slot in d.iter_mut().rev() {
            *slot = (index % n_files as u64) as usize + 1;
            index /= n_files as u64;
        }
        Self::new(d, n_files)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, u: usize) -> usize {
        self.0[u]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub(crate) fn check(&self, net: &Network, lib: &FileLibrary) -> Result<()> {
        if self.0.len() != net.k() {
            return Err(Error::DemandMismatch(format!(
                "{} demands for {} users",
                self.0.len(),
                net.k()
            )));
        }
        if let Some(bad) = self.0.iter().find(|&&d| d == 0 || d > lib.n()) {
            return Err(Error::DemandMismatch(format!(
                "file {bad} outside the library of {}",
                lib.n()
            )));
        }
        Ok(())
    }
}

/// Identifies one cached piece of a file.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SubfileKey {
    /// `W^part_{file, subset}` with `subset` a set of class labels.
    Class {
        file: usize,
        subset: SortedSubset,
        part: usize,
    },
    /// `W_{file, subset}` with `subset` a set of 1-based user labels.
    Users { file: usize, subset: SortedSubset },
    /// The cached leading bytes of `file`.
    Prefix { file: usize },
}

impl fmt::Display for SubfileKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubfileKey::Class { file, subset, part } => {
                write!(f, "W[n={file},T={subset},l={part}]")
            }
            SubfileKey::Users { file, subset } => write!(f, "W[n={file},S={subset}]"),
            SubfileKey::Prefix { file } => write!(f, "W[n={file},prefix]"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Placement {
    /// Subfiles indexed by `t`-subsets of class labels and a part `1..=r`.
    Class { t: usize },
    /// Subfiles indexed by `t'`-subsets of users.
    Users { t: usize },
    /// First `prefix_bytes` of each file.
    Prefix { prefix_bytes: usize },
}

/// What every user stores after placement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CacheState {
    placement: Placement,
    memory: Rational,
    subfile_bytes: usize,
    users: Vec<BTreeMap<SubfileKey, Vec<u8>>>,
}

impl CacheState {
    pub fn placement(&self) -> Placement {
        self.placement
    }

    /// Storage `M`, in files.
    pub fn memory(&self) -> Rational {
        self.memory
    }

    /// Size of one subfile (or of the prefix, for prefix placement).
    pub fn subfile_bytes(&self) -> usize {
        self.subfile_bytes
    }

    pub fn user(&self, u: usize) -> &BTreeMap<SubfileKey, Vec<u8>> {
        &self.users[u]
    }

    pub fn user_count(&self) -> usize {
        self.users.len()
    }

    pub fn cached_bits(&self, u: usize) -> u64 {
        self.users[u].values().map(|v| v.len() as u64 * 8).sum()
    }

    /// Sorted multiset of the cache label sets of the users below relay `i`.
    pub fn relay_profile(&self, net: &Network, i: usize) -> Result<Vec<Vec<SubfileKey>>> {
        let mut profile: Vec<Vec<SubfileKey>> = net
            .relay_neighborhood(i)?
            .iter()
            .map(|&u| self.users[u].keys().cloned().collect())
            .collect();
        profile.sort();
        Ok(profile)
    }
}

/// `t = M * parts / N` when it is an integer in `0..=parts`.
pub(crate) fn grid_index(memory: Rational, n_files: usize, parts: usize) -> Result<usize> {
    let n = Rational::from_integer(n_files as i128);
    if memory < Rational::from_integer(0) || memory > n {
        return Err(Error::InvalidArgument(format!(
            "storage M = {memory} outside [0, {n_files}]"
        )));
    }
    let t = memory * Rational::from_integer(parts as i128) / n;
    if !t.is_integer() {
        return Err(Error::GridViolation {
            m: memory.to_string(),
            step: (n / Rational::from_integer(parts as i128)).to_string(),
        });
    }
    Ok(t.to_integer() as usize)
}

pub(crate) fn subfile_size(lib: &FileLibrary, count: u64) -> Result<usize> {
    let bytes = lib.file_bytes();
    if count == 0 || !(bytes as u64).is_multiple_of(count) {
        return Err(Error::Subpacketization {
            bytes,
            divisor: count as usize,
        });
    }
    Ok(bytes / count as usize)
}

pub(crate) fn xor_into(acc: &mut [u8], other: &[u8]) {
    debug_assert_eq!(acc.len(), other.len());
    for (a, b) in acc.iter_mut().zip(other) {
        *a ^= b;
    }
}

pub(crate) fn check_reception(net: &Network, u: usize, reception: &Reception<'_>) -> Result<()> {
    for &i in net.user(u).elements() {
        if !reception.contains_key(&i) {
            return Err(Error::IncompleteReception { relay: i });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn demand_vectors() {
        assert_eq!(DemandVector::distinct(3, 5).unwrap().as_slice(), &[1, 2, 3]);
        assert!(DemandVector::distinct(6, 5).is_err());
        assert_eq!(
            DemandVector::all_same(3, 2, 2).unwrap().as_slice(),
            &[2, 2, 2]
        );
        assert!(DemandVector::new(vec![0], 3).is_err());
        assert!(DemandVector::new(vec![4], 3).is_err());
        assert_eq!(
            DemandVector::from_index(0, 3, 2).unwrap().as_slice(),
            &[1, 1, 1]
        );
        assert_eq!(
            DemandVector::from_index(5, 3, 2).unwrap().as_slice(),
            &[2, 1, 2]
        );
        assert_eq!(
            DemandVector::seeded(10, 4, 9).unwrap(),
            DemandVector::seeded(10, 4, 9).unwrap()
        );
    }

    #[test]
    fn grid() {
        let r = |n, d| Rational::new(n, d);
        assert_eq!(grid_index(r(2, 1), 6, 3).unwrap(), 1);
        assert_eq!(grid_index(r(2, 3), 2, 3).unwrap(), 1);
        assert!(matches!(
            grid_index(r(1, 1), 6, 3),
            Err(Error::GridViolation { .. })
        ));
        assert!(grid_index(r(7, 1), 6, 3).is_err());
        assert!(grid_index(r(-1, 1), 6, 3).is_err());
    }

    #[test]
    fn library() {
        assert!(FileLibrary::random(2, 12, 0).is_err());
        let lib = FileLibrary::random(3, 64, 1).unwrap();
        assert_eq!((lib.n(), lib.bits(), lib.file_bytes()), (3, 64, 8));
        assert_eq!(lib, FileLibrary::random(3, 64, 1).unwrap());
        assert!(FileLibrary::new(vec![vec![1], vec![1, 2]]).is_err());
        assert!(FileLibrary::new(vec![]).is_err());
    }
}
