//! Resolvable two-hop networks.
//!
//! A [`Network`] is `h` relays plus a list of users, each identified by the
//! sorted `r`-subset of relays it is attached to, and a partition of the users
//! into parallel classes. Users are stored in lexicographic order and classes
//! are ordered by their smallest user index, so any two constructions of the
//! same design compare equal and serialize identically.
//!
//! User indices are 0-based positions in [`Network::users`]; relays and class
//! labels are 1-based.

mod affine;
mod baranyai;
mod io;
mod maxflow;
mod resolve;

use std::collections::BTreeSet;

pub use affine::affine_plane;
pub use baranyai::baranyai_partition;
pub use io::TopologyFile;

use crate::combinatorics::{enumerate_subsets, SortedSubset};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    h: usize,
    r: usize,
    users: Vec<SortedSubset>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    neighborhoods: Vec<Vec<usize>>,
}

impl Network {
    /// Validates and canonicalizes a design with an explicit resolution.
    pub fn from_parts(
        h: usize,
        r: usize,
        users: Vec<SortedSubset>,
        classes: Vec<Vec<usize>>,
    ) -> Result<Self> {
        check_users(h, r, &users)?;
        check_classes(h, &users, &classes)?;

        let mut order: Vec<usize> = (0..users.len()).collect();
        order.sort_by(|&a, &b| users[a].cmp(&users[b]));
        let mut new_index = vec![0; users.len()];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = new;
        }
        let users: Vec<SortedSubset> = order.iter().map(|&old| users[old].clone()).collect();
        let mut classes: Vec<Vec<usize>> = classes
            .into_iter()
            .map(|c| {
                let mut c: Vec<usize> = c.into_iter().map(|u| new_index[u]).collect();
                c.sort_unstable();
                c
            })
            .collect();
        classes.sort();

        let mut class_of = vec![0; users.len()];
        for (label, class) in classes.iter().enumerate() {
            for &u in class {
                class_of[u] = label + 1;
            }
        }
        let neighborhoods = (1..=h)
            .map(|i| (0..users.len()).filter(|&u| users[u].contains(i)).collect())
            .collect();

        let net = Self {
            h,
            r,
            users,
            classes,
            class_of,
            neighborhoods,
        };
        net.verify()?;
        Ok(net)
    }

    /// Re-checks every structural invariant from scratch.
    pub fn verify(&self) -> Result<()> {
        check_users(self.h, self.r, &self.users)?;
        check_classes(self.h, &self.users, &self.classes)?;
        if !(self.k() * self.r).is_multiple_of(self.h) {
            return Err(Error::InvalidTopology(format!(
                "K*r = {} is not divisible by h = {}",
                self.k() * self.r,
                self.h
            )));
        }
        let kt = self.k_tilde();
        if kt != self.classes.len() {
            return Err(Error::InvalidTopology(format!(
                "K*r/h = {kt} but there are {} classes",
                self.classes.len()
            )));
        }
        for i in 1..=self.h {
            let hood = &self.neighborhoods[i - 1];
            let labels: BTreeSet<usize> = hood.iter().map(|&u| self.class_of[u]).collect();
            if hood.len() != kt || labels != (1..=kt).collect() {
                return Err(Error::InvalidTopology(format!(
                    "relay {i} does not see every class exactly once"
                )));
            }
        }
        Ok(())
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Number of users.
    pub fn k(&self) -> usize {
        self.users.len()
    }

    /// Users per relay, equal to the number of parallel classes.
    pub fn k_tilde(&self) -> usize {
        self.k() * self.r / self.h
    }

    pub fn users(&self) -> &[SortedSubset] {
        &self.users
    }

    pub fn user(&self, u: usize) -> &SortedSubset {
        &self.users[u]
    }

    /// Parallel classes as sorted lists of user indices.
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// Class label of user `u`, in `1..=k_tilde()`.
    pub fn class_of(&self, u: usize) -> usize {
        self.class_of[u]
    }

    /// Users attached to relay `i`, by ascending index.
    pub fn relay_neighborhood(&self, i: usize) -> Result<&[usize]> {
        if i == 0 || i > self.h {
            return Err(Error::InvalidArgument(format!(
                "relay {i} outside 1..={}",
                self.h
            )));
        }
        Ok(&self.neighborhoods[i - 1])
    }

    /// The unique user of class `class` attached to relay `i`.
    pub fn neighbor_in_class(&self, i: usize, class: usize) -> usize {
        *self.neighborhoods[i - 1]
            .iter()
            .find(|&&u| self.class_of[u] == class)
            .expect("every relay sees every class")
    }

    pub fn index_of(&self, subset: &SortedSubset) -> Option<usize> {
        self.users.binary_search(subset).ok()
    }
}

/// The full combination network on `C(h, r)` users, resolved by a Baranyai partition.
pub fn combination_network(h: usize, r: usize) -> Result<Network> {
    if r == 0 || r > h {
        return Err(Error::InvalidArgument(format!(
            "combination network needs 1 <= r <= h, got h = {h}, r = {r}"
        )));
    }
    if !h.is_multiple_of(r) {
        return Err(Error::NotResolvable(format!(
            "r = {r} does not divide h = {h}, so the {h}-choose-{r} network has no parallel classes"
        )));
    }
    let users = enumerate_subsets(h, r as i64)?;
    let blocks = baranyai_partition(h, r)?;
    let classes = blocks
        .iter()
        .map(|class| {
            class
                .iter()
                .map(|b| users.binary_search(b).expect("every block is an r-subset"))
                .collect()
        })
        .collect();
    Network::from_parts(h, r, users, classes)
}

/// A user-supplied design; when `classes` is `None` a resolution is searched for.
pub fn custom_network(
    h: usize,
    r: usize,
    users: Vec<SortedSubset>,
    classes: Option<Vec<Vec<usize>>>,
) -> Result<Network> {
    check_users(h, r, &users)?;
    let classes = match classes {
        Some(c) => c,
        None => resolve::find_resolution(h, r, &users)?,
    };
    Network::from_parts(h, r, users, classes)
}

fn check_users(h: usize, r: usize, users: &[SortedSubset]) -> Result<()> {
    if h == 0 || r == 0 || r > h {
        return Err(Error::InvalidTopology(format!(
            "need 1 <= r <= h, got h = {h}, r = {r}"
        )));
    }
    if users.is_empty() {
        return Err(Error::InvalidTopology("no users".into()));
    }
    let mut seen = BTreeSet::new();
    for u in users {
        if u.len() != r {
            return Err(Error::InvalidTopology(format!(
                "user {u} has {} relays, expected {r}",
                u.len()
            )));
        }
        if u.max_element().is_some_and(|m| m > h) {
            return Err(Error::InvalidTopology(format!(
                "user {u} names a relay above {h}"
            )));
        }
        if !seen.insert(u) {
            return Err(Error::InvalidTopology(format!("duplicate user {u}")));
        }
    }
    Ok(())
}

fn check_classes(h: usize, users: &[SortedSubset], classes: &[Vec<usize>]) -> Result<()> {
    let mut owner = vec![None; users.len()];
    for (label, class) in classes.iter().enumerate() {
        let mut covered = vec![false; h + 1];
        for &u in class {
            let Some(slot) = owner.get_mut(u) else {
                return Err(Error::InvalidTopology(format!(
                    "class {} references unknown user index {u}",
                    label + 1
                )));
            };
            if slot.is_some() {
                return Err(Error::InvalidTopology(format!(
                    "user {} appears in more than one class",
                    users[u]
                )));
            }
            *slot = Some(label);
            for &e in users[u].elements() {
                if covered[e] {
                    return Err(Error::InvalidTopology(format!(
                        "class {} is not pairwise disjoint at relay {e}",
                        label + 1
                    )));
                }
                covered[e] = true;
            }
        }
        if covered[1..].iter().any(|c| !c) {
            return Err(Error::InvalidTopology(format!(
                "class {} does not cover all {h} relays",
                label + 1
            )));
        }
    }
    if let Some(u) = owner.iter().position(Option::is_none) {
        return Err(Error::InvalidTopology(format!(
            "user {} is in no class",
            users[u]
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[usize]) -> SortedSubset {
        SortedSubset::new(v.to_vec()).unwrap()
    }

    fn class_sets(net: &Network) -> Vec<Vec<SortedSubset>> {
        net.classes()
            .iter()
            .map(|c| c.iter().map(|&u| net.user(u).clone()).collect())
            .collect()
    }

    #[test]
    fn four_choose_two() {
        let net = combination_network(4, 2).unwrap();
        assert_eq!((net.k(), net.k_tilde()), (6, 3));
        assert_eq!(
            class_sets(&net),
            vec![
                vec![s(&[1, 2]), s(&[3, 4])],
                vec![s(&[1, 3]), s(&[2, 4])],
                vec![s(&[1, 4]), s(&[2, 3])],
            ]
        );
    }

    #[test]
    fn six_choose_two() {
        let net = combination_network(6, 2).unwrap();
        assert_eq!((net.k(), net.k_tilde()), (15, 5));
        assert!(net.classes().iter().all(|c| c.len() == 3));
    }

    #[test]
    fn three_choose_two_is_not_resolvable() {
        assert!(matches!(
            combination_network(3, 2),
            Err(Error::NotResolvable(_))
        ));
    }

    #[test]
    fn neighborhoods() {
        let net = combination_network(4, 2).unwrap();
        let hood: Vec<_> = net
            .relay_neighborhood(1)
            .unwrap()
            .iter()
            .map(|&u| net.user(u).clone())
            .collect();
        assert_eq!(hood, vec![s(&[1, 2]), s(&[1, 3]), s(&[1, 4])]);
        assert!(net.relay_neighborhood(0).is_err());
        assert!(net.relay_neighborhood(5).is_err());

        let tiny = combination_network(2, 2).unwrap();
        assert_eq!(tiny.relay_neighborhood(2).unwrap(), &[0]);
        assert_eq!(tiny.user(0), &s(&[1, 2]));
    }

    #[test]
    fn every_relay_sees_each_class_once() {
        for (h, r) in [(4, 2), (6, 2), (6, 3), (8, 4), (9, 3)] {
            let net = combination_network(h, r).unwrap();
            for i in 1..=h {
                let mut labels: Vec<_> = net
                    .relay_neighborhood(i)
                    .unwrap()
                    .iter()
                    .map(|&u| net.class_of(u))
                    .collect();
                labels.sort_unstable();
                assert_eq!(labels, (1..=net.k_tilde()).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn custom_single_class() {
        let net =
            custom_network(4, 2, vec![s(&[1, 2]), s(&[3, 4])], Some(vec![vec![0, 1]])).unwrap();
        assert_eq!(net.k_tilde(), 1);
    }

    #[test]
    fn custom_search_finds_example_design() {
        let users = vec![
            s(&[1, 2, 3]),
            s(&[4, 5, 6]),
            s(&[7, 8, 9]),
            s(&[1, 4, 7]),
            s(&[2, 5, 8]),
            s(&[3, 6, 9]),
        ];
        let net = custom_network(9, 3, users, None).unwrap();
        assert_eq!(
            class_sets(&net),
            vec![
                vec![s(&[1, 2, 3]), s(&[4, 5, 6]), s(&[7, 8, 9])],
                vec![s(&[1, 4, 7]), s(&[2, 5, 8]), s(&[3, 6, 9])],
            ]
        );
    }

    #[test]
    fn custom_rejects_triangle() {
        let users = enumerate_subsets(3, 2).unwrap();
        assert!(matches!(
            custom_network(3, 2, users, None),
            Err(Error::NotResolvable(_))
        ));
    }

    #[test]
    fn custom_rejects_malformed_input() {
        let dup = vec![s(&[1, 2]), s(&[1, 2])];
        assert!(matches!(
            custom_network(4, 2, dup, None),
            Err(Error::InvalidTopology(_))
        ));
        let wrong_size = vec![s(&[1, 2, 3]), s(&[4])];
        assert!(custom_network(4, 2, wrong_size, None).is_err());
        let out_of_range = vec![s(&[1, 5]), s(&[2, 3])];
        assert!(custom_network(4, 2, out_of_range, None).is_err());
        let overlapping = vec![s(&[1, 2]), s(&[2, 3]), s(&[3, 4]), s(&[1, 4])];
        assert!(matches!(
            custom_network(
                4,
                2,
                overlapping.clone(),
                Some(vec![vec![0, 1], vec![2, 3]])
            ),
            Err(Error::InvalidTopology(_))
        ));
        // same users, valid resolution supplied
        assert!(custom_network(4, 2, overlapping, Some(vec![vec![0, 2], vec![1, 3]])).is_ok());
    }

    #[test]
    fn canonical_form_is_construction_independent() {
        let users = vec![s(&[3, 4]), s(&[2, 3]), s(&[1, 2]), s(&[1, 4])];
        let a = custom_network(4, 2, users.clone(), Some(vec![vec![1, 3], vec![0, 2]])).unwrap();
        let b = custom_network(4, 2, users, None).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.classes(), &[vec![0, 3], vec![1, 2]]);
    }
}
