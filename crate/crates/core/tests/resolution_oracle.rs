//! The backtracking resolver against brute-force class labelings.

use proptest::prelude::*;
use relaycache::combinatorics::{enumerate_subsets, SortedSubset};
use relaycache::topology::custom_network;
use relaycache::Error;

/// Tries every map from users to class labels.
fn brute_force_resolvable(h: usize, r: usize, users: &[SortedSubset]) -> bool {
    if !(users.len() * r).is_multiple_of(h) {
        return false;
    }
    let classes = users.len() * r / h;
    let total = (classes as u64).pow(users.len() as u32);
    (0..total).any(|mut code| {
        let mut cover = vec![vec![0usize; h + 1]; classes];
        for u in users {
            let c = (code % classes as u64) as usize;
            code /= classes as u64;
            for &e in u.elements() {
                cover[c][e] += 1;
            }
        }
        cover.iter().all(|c| c[1..].iter().all(|&n| n == 1))
    })
}

fn design(h: usize, r: usize) -> impl Strategy<Value = Vec<SortedSubset>> {
    let all = enumerate_subsets(h, r as i64).unwrap();
    let per_class = h / r;
    let max_k = match (h, r) {
        (6, 2) => 9,
        (6, 3) => 8,
        _ => all.len(),
    };
    proptest::sample::subsequence(all.clone(), 1..=max_k)
        .prop_filter("multiple of h/r users", move |v| v.len() % per_class == 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn resolver_agrees_with_brute_force_pairs_of_four(users in design(4, 2)) {
        check(4, 2, users)?;
    }

    #[test]
    fn resolver_agrees_with_brute_force_pairs_of_six(users in design(6, 2)) {
        check(6, 2, users)?;
    }

    #[test]
    fn resolver_agrees_with_brute_force_triples_of_six(users in design(6, 3)) {
        check(6, 3, users)?;
    }
}

fn check(h: usize, r: usize, users: Vec<SortedSubset>) -> Result<(), TestCaseError> {
    let expected = brute_force_resolvable(h, r, &users);
    match custom_network(h, r, users, None) {
        Ok(net) => {
            prop_assert!(expected);
            prop_assert!(net.verify().is_ok());
        }
        Err(Error::NotResolvable(_)) => prop_assert!(!expected),
        Err(e) => return Err(TestCaseError::fail(format!("unexpected error {e}"))),
    }
    Ok(())
}
