//! Class-based placement and per-relay XOR delivery.
//!
//! With `t = K̃M/N`, file `n` is cut into `r * C(K̃, t)` equal subfiles
//! `W^l_{n,T}` laid out `T`-major in [`enumerate_subsets`] order, then by part
//! `l`. A user of class `c` stores every subfile whose `T` contains `c`.
//!
//! Relay `i` sees exactly one user per class, and each of them wants the part
//! `l = position of i in V`. For every `(t+1)`-subset `C` of classes the
//! server sends relay `i` the XOR of `W^{l_V}_{d_V, C \ {c_V}}` over the users
//! `V` below `i` whose class is in `C`; the relay forwards it to those users.

use std::collections::BTreeMap;

use super::{
    check_reception, grid_index, subfile_size, xor_into, CacheState, DemandVector, FileLibrary,
    Placement, Reception, Signal, SignalLabel, SubfileKey, Term, TransmissionLog,
};
use crate::combinatorics::{binomial, enumerate_subsets, position_in, SortedSubset};
use crate::topology::Network;
use crate::{Error, Rational, Result};

/// Subfile layout shared by the proposed and routing schemes.
pub(crate) struct ClassLayout {
    pub(crate) subsets: Vec<SortedSubset>,
    pub(crate) position: BTreeMap<SortedSubset, usize>,
    pub(crate) r: usize,
    pub(crate) size: usize,
}

impl ClassLayout {
    pub(crate) fn new(k_tilde: usize, t: usize, r: usize, lib: &FileLibrary) -> Result<Self> {
        let subsets = enumerate_subsets(k_tilde, t as i64)?;
        let count = (r as u64)
            .checked_mul(binomial(k_tilde as u64, t as i64)?)
            .ok_or_else(|| Error::Overflow("subpacketization".into()))?;
        let size = subfile_size(lib, count)?;
        let position = subsets
            .iter()
            .cloned()
            .enumerate()
            .map(|(p, s)| (s, p))
            .collect();
        Ok(Self {
            subsets,
            position,
            r,
            size,
        })
    }

    pub(crate) fn chunk<'a>(
        &self,
        lib: &'a FileLibrary,
        n: usize,
        subset: &SortedSubset,
        part: usize,
    ) -> &'a [u8] {
        let idx = self.position[subset] * self.r + (part - 1);
        &lib.file(n)[idx * self.size..(idx + 1) * self.size]
    }
}

pub(crate) fn class_t(cache: &CacheState, net: &Network) -> Result<usize> {
    match cache.placement() {
        Placement::Class { t } if cache.user_count() == net.k() => Ok(t),
        _ => Err(Error::InvalidArgument(
            "cache was not filled by class-based placement for this network".into(),
        )),
    }
}

pub fn proposed_place(net: &Network, lib: &FileLibrary, memory: Rational) -> Result<CacheState> {
    let kt = net.k_tilde();
    let t = grid_index(memory, lib.n(), kt)?;
    let layout = ClassLayout::new(kt, t, net.r(), lib)?;
    let users = (0..net.k())
        .map(|u| {
            let class = net.class_of(u);
            let mut store = BTreeMap::new();
            for n in 1..=lib.n() {
                for subset in layout.subsets.iter().filter(|s| s.contains(class)) {
                    for part in 1..=net.r() {
                        store.insert(
                            SubfileKey::Class {
                                file: n,
                                subset: subset.clone(),
                                part,
                            },
                            layout.chunk(lib, n, subset, part).to_vec(),
                        );
                    }
                }
            }
            store
        })
        .collect();
    Ok(CacheState {
        placement: Placement::Class { t },
        memory,
        subfile_bytes: layout.size,
        users,
    })
}

pub fn proposed_deliver(
    net: &Network,
    lib: &FileLibrary,
    cache: &CacheState,
    demand: &DemandVector,
) -> Result<TransmissionLog> {
    demand.check(net, lib)?;
    let t = class_t(cache, net)?;
    let kt = net.k_tilde();
    let layout = ClassLayout::new(kt, t, net.r(), lib)?;
    let mut log = TransmissionLog::with_edges(net);
    if t + 1 > kt {
        return Ok(log);
    }
    let groups = enumerate_subsets(kt, t as i64 + 1)?;
    for i in 1..=net.h() {
        for classes in &groups {
            let mut payload = vec![0u8; layout.size];
            let mut terms = Vec::with_capacity(classes.len());
            let mut receivers = Vec::with_capacity(classes.len());
            for &c in classes.elements() {
                let v = net.neighbor_in_class(i, c);
                let part = position_in(net.user(v), i)?;
                let subset = classes.without(c);
                let file = demand.get(v);
                xor_into(&mut payload, layout.chunk(lib, file, &subset, part));
                terms.push(Term {
                    user: net.user(v).clone(),
                    file,
                    subset,
                    part,
                });
                receivers.push(v);
            }
            let signal = Signal {
                label: SignalLabel::Coded {
                    relay: i,
                    classes: classes.clone(),
                    terms,
                },
                payload,
            };
            for v in receivers {
                log.relay_edges
                    .get_mut(&(i, v))
                    .expect("edge opened")
                    .push(signal.clone());
            }
            log.server_edges
                .get_mut(&i)
                .expect("edge opened")
                .push(signal);
        }
    }
    Ok(log)
}

/// Rebuilds file `wanted` at user `u` from its cache and the coded signals of its relays.
pub fn proposed_decode(
    net: &Network,
    u: usize,
    cache: &CacheState,
    wanted: usize,
    reception: &Reception<'_>,
) -> Result<Vec<u8>> {
    let t = class_t(cache, net)?;
    check_reception(net, u, reception)?;
    let me = net.user(u);
    let store = cache.user(u);
    let mut recovered: BTreeMap<(SortedSubset, usize), Vec<u8>> = BTreeMap::new();
    for (&relay, signals) in reception {
        for signal in signals.iter() {
            let SignalLabel::Coded { terms, .. } = &signal.label else {
                return Err(Error::Decode(format!(
                    "unexpected signal {} from relay {relay}",
                    signal.label
                )));
            };
            let mut value = signal.payload.clone();
            let mut mine = None;
            for term in terms {
                if &term.user == me {
                    mine = Some(term);
                    continue;
                }
                let key = SubfileKey::Class {
                    file: term.file,
                    subset: term.subset.clone(),
                    part: term.part,
                };
                let side = store.get(&key).ok_or_else(|| {
                    Error::Decode(format!("user {me} lacks side information {key}"))
                })?;
                xor_into(&mut value, side);
            }
            let mine = mine.ok_or_else(|| {
                Error::Decode(format!("signal {} not addressed to {me}", signal.label))
            })?;
            if mine.file != wanted {
                return Err(Error::Decode(format!(
                    "signal carries file {} for {me}",
                    mine.file
                )));
            }
            recovered.insert((mine.subset.clone(), mine.part), value);
        }
    }
    assemble_class_file(net, u, cache, t, wanted, &mut recovered)
}

/// Concatenates cached and recovered parts in layout order.
pub(crate) fn assemble_class_file(
    net: &Network,
    u: usize,
    cache: &CacheState,
    t: usize,
    wanted: usize,
    recovered: &mut BTreeMap<(SortedSubset, usize), Vec<u8>>,
) -> Result<Vec<u8>> {
    let class = net.class_of(u);
    let store = cache.user(u);
    let mut out = Vec::new();
    for subset in enumerate_subsets(net.k_tilde(), t as i64)? {
        for part in 1..=net.r() {
            if subset.contains(class) {
                let key = SubfileKey::Class {
                    file: wanted,
                    subset: subset.clone(),
                    part,
                };
                let bytes = store
                    .get(&key)
                    .ok_or_else(|| Error::Decode(format!("cache is missing {key}")))?;
                out.extend_from_slice(bytes);
            } else {
                let bytes = recovered.remove(&(subset.clone(), part)).ok_or_else(|| {
                    Error::Decode(format!(
                        "user {} never received W[n={wanted},T={subset},l={part}]",
                        net.user(u)
                    ))
                })?;
                out.extend_from_slice(&bytes);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::combination_network;

    fn q(n: i128) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn example_placement() {
        let net = combination_network(4, 2).unwrap();
        let lib = FileLibrary::random(6, 6 * 8 * 4, 3).unwrap();
        let cache = proposed_place(&net, &lib, q(2)).unwrap();
        assert_eq!(cache.placement(), Placement::Class { t: 1 });
        assert_eq!(cache.subfile_bytes(), 4);
        let one = SortedSubset::new(vec![1]).unwrap();
        for v in [[1, 2], [3, 4]] {
            let u = net
                .index_of(&SortedSubset::new(v.to_vec()).unwrap())
                .unwrap();
            let keys: Vec<_> = cache.user(u).keys().cloned().collect();
            assert_eq!(keys.len(), 12);
            for n in 1..=6 {
                for part in 1..=2 {
                    assert!(keys.contains(&SubfileKey::Class {
                        file: n,
                        subset: one.clone(),
                        part
                    }));
                }
            }
            assert_eq!(cache.cached_bits(u), 2 * lib.bits());
        }
    }

    #[test]
    fn empty_and_full_caches() {
        let net = combination_network(4, 2).unwrap();
        let lib = FileLibrary::random(6, 48, 3).unwrap();
        let empty = proposed_place(&net, &lib, q(0)).unwrap();
        assert!((0..6).all(|u| empty.user(u).is_empty()));
        let full = proposed_place(&net, &lib, q(6)).unwrap();
        assert!((0..6).all(|u| full.cached_bits(u) == 6 * lib.bits()));
    }

    #[test]
    fn placement_errors() {
        let net = combination_network(4, 2).unwrap();
        let lib = FileLibrary::random(6, 40, 3).unwrap();
        assert!(matches!(
            proposed_place(&net, &lib, q(1)),
            Err(Error::GridViolation { .. })
        ));
        assert!(matches!(
            proposed_place(&net, &lib, q(2)),
            Err(Error::Subpacketization {
                bytes: 5,
                divisor: 6
            })
        ));
    }

    #[test]
    fn every_demand_decodes_when_everything_is_cached() {
        let net = combination_network(4, 2).unwrap();
        let lib = FileLibrary::random(2, 16, 1).unwrap();
        let cache = proposed_place(&net, &lib, q(2)).unwrap();
        let demand = DemandVector::from_index(11, 6, 2).unwrap();
        let log = proposed_deliver(&net, &lib, &cache, &demand).unwrap();
        assert!(log.is_empty());
        for u in 0..6 {
            let got =
                proposed_decode(&net, u, &cache, demand.get(u), &log.reception(&net, u)).unwrap();
            assert_eq!(got, lib.file(demand.get(u)));
        }
    }

    #[test]
    fn missing_relay_is_reported() {
        let net = combination_network(4, 2).unwrap();
        let lib = FileLibrary::random(6, 48 * 8, 1).unwrap();
        let cache = proposed_place(&net, &lib, q(2)).unwrap();
        let demand = DemandVector::distinct(6, 6).unwrap();
        let log = proposed_deliver(&net, &lib, &cache, &demand).unwrap();
        let mut rx = log.reception(&net, 0);
        rx.remove(&2);
        assert_eq!(
            proposed_decode(&net, 0, &cache, 1, &rx),
            Err(Error::IncompleteReception { relay: 2 })
        );
    }

    #[test]
    fn demand_shape_checked() {
        let net = combination_network(4, 2).unwrap();
        let lib = FileLibrary::random(6, 48, 1).unwrap();
        let cache = proposed_place(&net, &lib, q(0)).unwrap();
        let short = DemandVector::new(vec![1, 2], 6).unwrap();
        assert!(matches!(
            proposed_deliver(&net, &lib, &cache, &short),
            Err(Error::DemandMismatch(_))
        ));
        let too_big = DemandVector::new(vec![7; 6], 7).unwrap();
        assert!(proposed_deliver(&net, &lib, &cache, &too_big).is_err());
    }
}
