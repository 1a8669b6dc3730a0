//! Subsets of a 1-based ground set and their canonical enumeration.
//!
//! Every transmission schedule in the crate walks subsets in the order
//! produced by [`enumerate_subsets`], so this order is part of the on-wire
//! contract: lexicographic over the ascending element lists.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A strictly increasing list of positive labels.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct SortedSubset(Vec<usize>);

impl SortedSubset {
    /// Builds a subset from arbitrary labels, sorting them. Rejects zero and duplicates.
    pub fn new(mut elements: Vec<usize>) -> Result<Self> {
        elements.sort_unstable();
        if elements.first() == Some(&0) {
            return Err(Error::InvalidArgument("subset labels are 1-based".into()));
        }
        if elements.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument(format!(
                "duplicate element in subset {elements:?}"
            )));
        }
        Ok(Self(elements))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn elements(&self) -> &[usize] {
        &self.0
    }

    /// The `j`-th smallest element, 1-based. Panics when `j` is out of range.
    pub fn at(&self, j: usize) -> usize {
        self.0[j - 1]
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn max_element(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn is_disjoint(&self, other: &SortedSubset) -> bool {
        let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
        while let (Some(x), Some(y)) = (a.peek(), b.peek()) {
            match x.cmp(y) {
                std::cmp::Ordering::Less => {
                    a.next();
                }
                std::cmp::Ordering::Greater => {
                    b.next();
                }
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    /// Copy of the subset with `i` removed (no-op when absent).
    pub fn without(&self, i: usize) -> SortedSubset {
        Self(self.0.iter().copied().filter(|&x| x != i).collect())
    }

    /// Copy of the subset with `i` inserted.
    pub fn with(&self, i: usize) -> SortedSubset {
        let mut v = self.0.clone();
        if let Err(pos) = v.binary_search(&i) {
            v.insert(pos, i);
        }
        Self(v)
    }
}

impl TryFrom<Vec<usize>> for SortedSubset {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<SortedSubset> for Vec<usize> {
    fn from(s: SortedSubset) -> Self {
        s.0
    }
}

impl fmt::Display for SortedSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (idx, e) in self.0.iter().enumerate() {
            if idx > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for SortedSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All `k`-subsets of `[m]`, lexicographic.
pub fn enumerate_subsets(m: usize, k: i64) -> Result<Vec<SortedSubset>> {
    if k < 0 || k as u64 > m as u64 {
        return Err(Error::InvalidArgument(format!(
            "subset size {k} outside 0..={m}"
        )));
    }
    let k = k as usize;
    let count = binomial(m as u64, k as i64)? as usize;
    let mut out = Vec::with_capacity(count);
    let mut current: Vec<usize> = (1..=k).collect();
    loop {
        out.push(SortedSubset(current.clone()));
        // rightmost position that can still advance
        let Some(pos) = (0..k).rev().find(|&p| current[p] < m - (k - 1 - p)) else {
            break;
        };
        current[pos] += 1;
        for q in pos + 1..k {
            current[q] = current[q - 1] + 1;
        }
    }
    Ok(out)
}

/// `j` such that `subset.at(j) == i`.
pub fn position_in(subset: &SortedSubset, i: usize) -> Result<usize> {
    subset
        .0
        .binary_search(&i)
        .map(|p| p + 1)
        .map_err(|_| Error::NotAMember {
            element: i,
            subset: subset.to_string(),
        })
}

/// Exact binomial coefficient; zero outside `0..=n`.
pub fn binomial(n: u64, k: i64) -> Result<u64> {
    if k < 0 || k as u64 > n {
        return Ok(0);
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc: u128 = 1;
    for i in 1..=k {
        // acc * (n-k+i) / i stays integral at every step
        acc = acc * (n - k + i) as u128 / i as u128;
        if acc > u64::MAX as u128 {
            return Err(Error::Overflow(format!("C({n},{k})")));
        }
    }
    Ok(acc as u64)
}
