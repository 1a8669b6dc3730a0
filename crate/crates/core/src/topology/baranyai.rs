//! Partitions of all `r`-subsets of `[h]` into parallel classes.
//!
//! For `r = 2` this is the circle-method 1-factorization of `K_h`. For other
//! divisors the classes are grown one ground element at a time: after
//! processing elements `1..=k` every class holds `h/r` partial blocks, and a
//! partial block `S` occurs `C(h-k, r-|S|)` times over all classes. Extending
//! one block per class by element `k+1` is an integral max-flow problem whose
//! fractional solution is known to exist, so an integral one does too.

use std::collections::BTreeMap;

use super::maxflow::FlowNetwork;
use crate::combinatorics::{binomial, SortedSubset};
use crate::{Error, Result};

pub fn baranyai_partition(h: usize, r: usize) -> Result<Vec<Vec<SortedSubset>>> {
    if r == 0 || r > h {
        return Err(Error::InvalidArgument(format!(
            "block size r = {r} must satisfy 1 <= r <= h = {h}"
        )));
    }
    if !h.is_multiple_of(r) {
        return Err(Error::InvalidArgument(format!(
            "r = {r} does not divide h = {h}"
        )));
    }
    if h > 64 {
        return Err(Error::InvalidArgument(format!(
            "h = {h} exceeds the supported ground set of 64"
        )));
    }
    let mut classes = if r == 2 {
        round_robin(h)
    } else {
        flow_construction(h, r)?
    };
    for class in &mut classes {
        class.sort();
    }
    classes.sort();
    Ok(classes)
}

fn round_robin(h: usize) -> Vec<Vec<SortedSubset>> {
    let rounds = h - 1;
    (0..rounds)
        .map(|k| {
            let mut class = vec![pair(k, h - 1)];
            for i in 1..h / 2 {
                class.push(pair((k + i) % rounds, (k + rounds - i) % rounds));
            }
            class
        })
        .collect()
}

fn pair(a: usize, b: usize) -> SortedSubset {
    SortedSubset::new(vec![a + 1, b + 1]).expect("distinct vertices")
}

fn flow_construction(h: usize, r: usize) -> Result<Vec<Vec<SortedSubset>>> {
    let class_count = binomial(h as u64 - 1, r as i64 - 1)? as usize;
    let blocks_per_class = h / r;
    let mut classes: Vec<Vec<u64>> = vec![vec![0u64; blocks_per_class]; class_count];

    for element in 0..h {
        let remaining = (h - element - 1) as u64;
        // distinct partial blocks present at this stage
        let mut subset_node: BTreeMap<u64, usize> = BTreeMap::new();
        for class in &classes {
            for &b in class {
                let next = subset_node.len();
                subset_node.entry(b).or_insert(next);
            }
        }
        let source = 0;
        let sink = 1;
        let class_base = 2;
        let subset_base = class_base + class_count;
        let mut g = FlowNetwork::new(subset_base + subset_node.len());

        let mut choice_edges: Vec<Vec<(u64, usize)>> = Vec::with_capacity(class_count);
        for (j, class) in classes.iter().enumerate() {
            g.add_edge(source, class_base + j, 1);
            let mut mult: BTreeMap<u64, i64> = BTreeMap::new();
            for &b in class {
                *mult.entry(b).or_default() += 1;
            }
            let edges = mult
                .into_iter()
                .map(|(b, m)| {
                    (
                        b,
                        g.add_edge(class_base + j, subset_base + subset_node[&b], m),
                    )
                })
                .collect();
            choice_edges.push(edges);
        }
        for (&b, &node) in &subset_node {
            let size = b.count_ones() as i64;
            let demand = binomial(remaining, r as i64 - size - 1)?;
            g.add_edge(subset_base + node, sink, demand as i64);
        }

        let flow = g.max_flow(source, sink);
        if flow != class_count as i64 {
            return Err(Error::InvalidArgument(format!(
                "partition flow saturated {flow} of {class_count} classes at element {}",
                element + 1
            )));
        }
        for (class, edges) in classes.iter_mut().zip(&choice_edges) {
            let (chosen, _) = edges
                .iter()
                .find(|(_, id)| g.flow_on(*id) == 1)
                .expect("unit flow leaves every class");
            let slot = class
                .iter_mut()
                .find(|b| **b == *chosen)
                .expect("chosen block exists in class");
            *slot |= 1 << element;
        }
    }

    Ok(classes
        .into_iter()
        .map(|class| class.into_iter().map(mask_to_subset).collect())
        .collect())
}

fn mask_to_subset(mask: u64) -> SortedSubset {
    let elements = (0..64)
        .filter(|b| mask >> b & 1 == 1)
        .map(|b| b + 1)
        .collect();
    SortedSubset::new(elements).expect("mask bits are distinct")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::enumerate_subsets;
    use std::collections::BTreeSet;

    fn check(h: usize, r: usize) {
        let classes = baranyai_partition(h, r).unwrap();
        assert_eq!(
            classes.len() as u64,
            binomial(h as u64 - 1, r as i64 - 1).unwrap(),
            "class count for ({h},{r})"
        );
        let mut seen = BTreeSet::new();
        for class in &classes {
            assert_eq!(class.len(), h / r);
            let mut covered: Vec<usize> =
                class.iter().flat_map(|b| b.elements().to_vec()).collect();
            covered.sort_unstable();
            assert_eq!(covered, (1..=h).collect::<Vec<_>>());
            for b in class {
                assert_eq!(b.len(), r);
                assert!(seen.insert(b.clone()), "{b} repeated");
            }
        }
        let all: BTreeSet<_> = enumerate_subsets(h, r as i64)
            .unwrap()
            .into_iter()
            .collect();
        assert_eq!(seen, all);
    }

    #[test]
    fn round_robin_k4_matches_the_classic_factorization() {
        let classes = baranyai_partition(4, 2).unwrap();
        let s = |v: &[usize]| SortedSubset::new(v.to_vec()).unwrap();
        assert_eq!(
            classes,
            vec![
                vec![s(&[1, 2]), s(&[3, 4])],
                vec![s(&[1, 3]), s(&[2, 4])],
                vec![s(&[1, 4]), s(&[2, 3])],
            ]
        );
    }

    #[test]
    fn degenerate_single_block() {
        let classes = baranyai_partition(2, 2).unwrap();
        assert_eq!(classes, vec![vec![SortedSubset::new(vec![1, 2]).unwrap()]]);
        assert_eq!(baranyai_partition(5, 5).unwrap().len(), 1);
        assert_eq!(baranyai_partition(5, 1).unwrap().len(), 1);
    }

    #[test]
    fn triples_of_six() {
        check(6, 3);
        assert_eq!(baranyai_partition(6, 3).unwrap().len(), 10);
    }

    #[test]
    fn exhaustive_up_to_ten() {
        for h in 1..=10 {
            for r in 1..=h {
                if h % r == 0 {
                    check(h, r);
                }
            }
        }
    }

    #[test]
    fn rejects_non_divisor() {
        assert!(matches!(
            baranyai_partition(3, 2),
            Err(Error::InvalidArgument(_))
        ));
        assert!(baranyai_partition(4, 0).is_err());
        assert!(baranyai_partition(4, 5).is_err());
    }
}

#[cfg(test)]
mod flow_tests {
    use super::*;

    #[test]
    fn flow_route_also_handles_pairs() {
        for h in [2, 4, 6, 8] {
            let classes = flow_construction(h, 2).unwrap();
            assert_eq!(classes.len(), h - 1);
            let mut all: Vec<_> = classes.into_iter().flatten().collect();
            all.sort();
            all.dedup();
            assert_eq!(all.len() as u64, binomial(h as u64, 2).unwrap());
        }
    }
}
