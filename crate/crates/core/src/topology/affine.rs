use super::Network;
use crate::combinatorics::SortedSubset;
use crate::{Error, Result};

/// The affine plane AG(2, q) as a network: points are relays, lines are users.
///
/// Point `(x, y)` of `Z_q x Z_q` is relay `q*x + y + 1`. The parallel classes
/// are the `q` slope classes `y = a*x + b` and the vertical class `x = b`.
pub fn affine_plane(q: usize) -> Result<Network> {
    if !is_prime(q) {
        return Err(Error::InvalidArgument(format!(
            "affine planes need a prime order, got {q}"
        )));
    }
    let point = |x: usize, y: usize| q * x + y + 1;
    let mut users = Vec::with_capacity(q * (q + 1));
    let mut classes = Vec::with_capacity(q + 1);
    for a in 0..q {
        let mut class = Vec::with_capacity(q);
        for b in 0..q {
            let line = (0..q).map(|x| point(x, (a * x + b) % q)).collect();
            class.push(users.len());
            users.push(SortedSubset::new(line)?);
        }
        classes.push(class);
    }
    let mut vertical = Vec::with_capacity(q);
    for b in 0..q {
        vertical.push(users.len());
        users.push(SortedSubset::new((0..q).map(|y| point(b, y)).collect())?);
    }
    classes.push(vertical);
    Network::from_parts(q * q, q, users, classes)
}

fn is_prime(q: usize) -> bool {
    q >= 2
        && (2..)
            .take_while(|d| d * d <= q)
            .all(|d| !q.is_multiple_of(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::combination_network;

    fn s(v: &[usize]) -> SortedSubset {
        SortedSubset::new(v.to_vec()).unwrap()
    }

    #[test]
    fn order_two_is_four_choose_two() {
        let plane = affine_plane(2).unwrap();
        let comb = combination_network(4, 2).unwrap();
        assert_eq!(plane.users(), comb.users());
        plane.verify().unwrap();
    }

    #[test]
    fn order_three_contains_the_grid_design() {
        let plane = affine_plane(3).unwrap();
        assert_eq!((plane.h(), plane.k(), plane.k_tilde()), (9, 12, 4));
        let class_of = |blocks: &[&[usize]]| {
            let labels: Vec<_> = blocks
                .iter()
                .map(|b| plane.class_of(plane.index_of(&s(b)).unwrap()))
                .collect();
            assert!(labels.windows(2).all(|w| w[0] == w[1]));
            labels[0]
        };
        let vertical = class_of(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        let flat = class_of(&[&[1, 4, 7], &[2, 5, 8], &[3, 6, 9]]);
        assert_ne!(vertical, flat);
        assert_eq!(plane.classes()[vertical - 1].len(), 3);
        for i in 1..=9 {
            assert_eq!(plane.relay_neighborhood(i).unwrap().len(), 4);
        }
    }

    #[test]
    fn lines_meet_in_one_point_across_classes() {
        for q in [2, 3, 5, 7] {
            let plane = affine_plane(q).unwrap();
            assert_eq!((plane.k(), plane.k_tilde()), (q * (q + 1), q + 1));
            for a in 0..plane.k() {
                for b in a + 1..plane.k() {
                    let common = plane
                        .user(a)
                        .elements()
                        .iter()
                        .filter(|e| plane.user(b).contains(**e))
                        .count();
                    if plane.class_of(a) == plane.class_of(b) {
                        assert_eq!(common, 0);
                    } else {
                        assert_eq!(common, 1);
                    }
                }
            }
        }
    }

    #[test]
    fn composite_orders_rejected() {
        for q in [0, 1, 4, 6, 9] {
            assert!(matches!(affine_plane(q), Err(Error::InvalidArgument(_))));
        }
    }
}
