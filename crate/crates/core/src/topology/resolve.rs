//! Exact backtracking search for a parallel-class partition.

use crate::combinatorics::SortedSubset;
use crate::{Error, Result};

pub(super) fn find_resolution(
    h: usize,
    r: usize,
    users: &[SortedSubset],
) -> Result<Vec<Vec<usize>>> {
    if !(users.len() * r).is_multiple_of(h) {
        return Err(Error::NotResolvable(format!(
            "{} users of size {r} cannot split into classes covering {h} relays",
            users.len()
        )));
    }
    if h > 128 {
        return Err(Error::InvalidArgument(format!(
            "resolution search supports h <= 128, got {h}"
        )));
    }
    let masks: Vec<u128> = users
        .iter()
        .map(|u| u.elements().iter().fold(0u128, |m, &e| m | 1 << (e - 1)))
        .collect();
    let degree = users.len() * r / h;
    for i in 0..h {
        let d = masks.iter().filter(|m| *m >> i & 1 == 1).count();
        if d != degree {
            return Err(Error::NotResolvable(format!(
                "relay {} has degree {d}, a resolvable design needs {degree}",
                i + 1
            )));
        }
    }

    let full = if h == 128 {
        u128::MAX
    } else {
        (1u128 << h) - 1
    };
    let mut search = Search {
        masks: &masks,
        full,
        used: vec![false; users.len()],
        classes: Vec::new(),
    };
    if search.next_class() {
        Ok(search.classes)
    } else {
        Err(Error::NotResolvable(
            "no partition into parallel classes exists".into(),
        ))
    }
}

struct Search<'a> {
    masks: &'a [u128],
    full: u128,
    used: Vec<bool>,
    classes: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn next_class(&mut self) -> bool {
        // the smallest unused user must open the next class
        let Some(first) = self.used.iter().position(|u| !u) else {
            return true;
        };
        self.used[first] = true;
        self.classes.push(vec![first]);
        if self.fill(self.masks[first]) {
            return true;
        }
        self.classes.pop();
        self.used[first] = false;
        false
    }

    fn fill(&mut self, covered: u128) -> bool {
        if covered == self.full {
            return self.next_class();
        }
        let point = (!covered).trailing_zeros();
        for u in 0..self.masks.len() {
            let m = self.masks[u];
            if self.used[u] || m >> point & 1 == 0 || m & covered != 0 {
                continue;
            }
            self.used[u] = true;
            self.classes.last_mut().unwrap().push(u);
            if self.fill(covered | m) {
                return true;
            }
            self.classes.last_mut().unwrap().pop();
            self.used[u] = false;
        }
        false
    }
}
