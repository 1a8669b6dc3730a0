//! Centralized coded multicast plus MDS coding across the server edges.
//!
//! Users are labeled `1..=K` by index. With `t' = KM/N`, file `n` splits into
//! `C(K, t')` subfiles `W_{n,S}` and user `k` caches those with `k` in `S`.
//! For every `(t'+1)`-subset `S` the signal `X_S` is the XOR of
//! `W_{d_k, S \ {k}}` over `k` in `S`; it is cut into `r` parts, coded into
//! `h` pieces, and piece `i` goes to relay `i`, which forwards it to all of its
//! users.

use std::collections::BTreeMap;

use super::{
    check_reception, grid_index, subfile_size, xor_into, CacheState, DemandVector, FileLibrary,
    Placement, Reception, Signal, SignalLabel, SubfileKey, TransmissionLog,
};
use crate::combinatorics::{binomial, enumerate_subsets, SortedSubset};
use crate::erasure::ErasureCode;
use crate::topology::Network;
use crate::{Error, Rational, Result};

struct UserLayout {
    position: BTreeMap<SortedSubset, usize>,
    size: usize,
}

impl UserLayout {
    fn new(k: usize, t: usize, r: usize, lib: &FileLibrary) -> Result<Self> {
        let subsets = enumerate_subsets(k, t as i64)?;
        let count = binomial(k as u64, t as i64)?;
        // each subfile must also split evenly into r parts
        let divisor = count
            .checked_mul(r as u64)
            .ok_or_else(|| Error::Overflow("subpacketization".into()))?;
        subfile_size(lib, divisor)?;
        let size = lib.file_bytes() / count as usize;
        let position = subsets
            .into_iter()
            .enumerate()
            .map(|(p, s)| (s, p))
            .collect();
        Ok(Self { position, size })
    }

    fn chunk<'a>(&self, lib: &'a FileLibrary, n: usize, subset: &SortedSubset) -> &'a [u8] {
        let idx = self.position[subset];
        &lib.file(n)[idx * self.size..(idx + 1) * self.size]
    }
}

fn users_t(cache: &CacheState, net: &Network) -> Result<usize> {
    match cache.placement() {
        Placement::Users { t } if cache.user_count() == net.k() => Ok(t),
        _ => Err(Error::InvalidArgument(
            "cache was not filled by user-subset placement for this network".into(),
        )),
    }
}

fn check_code(net: &Network, code: &ErasureCode) -> Result<()> {
    if code.n() != net.h() || code.k() != net.r() {
        return Err(Error::CodeShape(format!(
            "need an ({}, {}) code, got ({}, {})",
            net.h(),
            net.r(),
            code.n(),
            code.k()
        )));
    }
    Ok(())
}

pub fn cmcnc_place(net: &Network, lib: &FileLibrary, memory: Rational) -> Result<CacheState> {
    let k = net.k();
    let t = grid_index(memory, lib.n(), k)?;
    let layout = UserLayout::new(k, t, net.r(), lib)?;
    let mut users = vec![Vec::new(); k];
    for n in 1..=lib.n() {
        for subset in layout.position.keys() {
            for &label in subset.elements() {
                users[label - 1].push((
                    SubfileKey::Users {
                        file: n,
                        subset: subset.clone(),
                    },
                    layout.chunk(lib, n, subset).to_vec(),
                ));
            }
        }
    }
    Ok(CacheState {
        placement: Placement::Users { t },
        memory,
        subfile_bytes: layout.size,
        users: users.into_iter().map(BTreeMap::from_iter).collect(),
    })
}

pub fn cmcnc_deliver(
    net: &Network,
    lib: &FileLibrary,
    cache: &CacheState,
    demand: &DemandVector,
    code: &ErasureCode,
) -> Result<TransmissionLog> {
    demand.check(net, lib)?;
    check_code(net, code)?;
    let k = net.k();
    let t = users_t(cache, net)?;
    let layout = UserLayout::new(k, t, net.r(), lib)?;
    let mut log = TransmissionLog::with_edges(net);
    if t + 1 > k {
        return Ok(log);
    }
    for group in enumerate_subsets(k, t as i64 + 1)? {
        let mut x = vec![0u8; layout.size];
        let mut demands = Vec::with_capacity(group.len());
        for &label in group.elements() {
            let file = demand.get(label - 1);
            demands.push(file);
            xor_into(&mut x, layout.chunk(lib, file, &group.without(label)));
        }
        let pieces = code.encode_padded(&x)?;
        for (idx, piece) in pieces.into_iter().enumerate() {
            let relay = idx + 1;
            let signal = Signal {
                label: SignalLabel::Multicast {
                    users: group.clone(),
                    demands: demands.clone(),
                    piece: relay,
                    source_bytes: layout.size,
                },
                payload: piece,
            };
            for &v in net.relay_neighborhood(relay)? {
                log.relay_edges
                    .get_mut(&(relay, v))
                    .expect("edge opened")
                    .push(signal.clone());
            }
            log.server_edges
                .get_mut(&relay)
                .expect("edge opened")
                .push(signal);
        }
    }
    Ok(log)
}

pub fn cmcnc_decode(
    net: &Network,
    u: usize,
    cache: &CacheState,
    wanted: usize,
    reception: &Reception<'_>,
    code: &ErasureCode,
) -> Result<Vec<u8>> {
    check_code(net, code)?;
    let t = users_t(cache, net)?;
    check_reception(net, u, reception)?;
    let label = u + 1;
    let store = cache.user(u);

    struct Pending<'s> {
        demands: &'s [usize],
        source_bytes: usize,
        pieces: Vec<(usize, Vec<u8>)>,
    }
    let mut groups: BTreeMap<&SortedSubset, Pending<'_>> = BTreeMap::new();
    for signals in reception.values() {
        for signal in signals.iter() {
            let SignalLabel::Multicast {
                users,
                demands,
                piece,
                source_bytes,
            } = &signal.label
            else {
                return Err(Error::Decode(format!("unexpected signal {}", signal.label)));
            };
            if !users.contains(label) {
                continue;
            }
            groups
                .entry(users)
                .or_insert_with(|| Pending {
                    demands,
                    source_bytes: *source_bytes,
                    pieces: Vec::new(),
                })
                .pieces
                .push((*piece, signal.payload.clone()));
        }
    }

    let mut recovered: BTreeMap<SortedSubset, Vec<u8>> = BTreeMap::new();
    for (group, pending) in groups {
        let mut x = code.decode_padded(&pending.pieces, pending.source_bytes)?;
        for (&other, &file) in group.elements().iter().zip(pending.demands) {
            if other == label {
                if file != wanted {
                    return Err(Error::Decode(format!(
                        "signal for {group} carries file {file}"
                    )));
                }
                continue;
            }
            let key = SubfileKey::Users {
                file,
                subset: group.without(other),
            };
            let side = store.get(&key).ok_or_else(|| {
                Error::Decode(format!("user {label} lacks side information {key}"))
            })?;
            xor_into(&mut x, side);
        }
        recovered.insert(group.without(label), x);
    }

    let mut out =
        Vec::with_capacity(cache.subfile_bytes() * binomial(net.k() as u64, t as i64)? as usize);
    for subset in enumerate_subsets(net.k(), t as i64)? {
        if subset.contains(label) {
            let key = SubfileKey::Users {
                file: wanted,
                subset,
            };
            let bytes = store
                .get(&key)
                .ok_or_else(|| Error::Decode(format!("cache is missing {key}")))?;
            out.extend_from_slice(bytes);
        } else {
            let bytes = recovered.remove(&subset).ok_or_else(|| {
                Error::Decode(format!(
                    "user {label} never received W[n={wanted},S={subset}]"
                ))
            })?;
            out.extend_from_slice(&bytes);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::combination_network;

    #[test]
    fn placement_counts() {
        let net = combination_network(4, 2).unwrap();
        // r * C(6, 2) = 30 byte divisor
        let lib = FileLibrary::random(6, 30 * 8, 2).unwrap();
        let cache = cmcnc_place(&net, &lib, Rational::from_integer(2)).unwrap();
        assert_eq!(cache.placement(), Placement::Users { t: 2 });
        for u in 0..6 {
            assert_eq!(cache.user(u).len(), 6 * 5);
            assert_eq!(cache.cached_bits(u), 2 * lib.bits());
        }
        let none = cmcnc_place(&net, &lib, Rational::from_integer(0)).unwrap();
        assert!((0..6).all(|u| none.user(u).is_empty()));
    }

    #[test]
    fn divisibility_includes_the_part_split() {
        let net = combination_network(4, 2).unwrap();
        let lib = FileLibrary::random(6, 15 * 8, 2).unwrap();
        assert!(matches!(
            cmcnc_place(&net, &lib, Rational::from_integer(2)),
            Err(Error::Subpacketization { divisor: 30, .. })
        ));
    }

    #[test]
    fn code_shape_checked() {
        let net = combination_network(4, 2).unwrap();
        let lib = FileLibrary::random(6, 30 * 8, 2).unwrap();
        let cache = cmcnc_place(&net, &lib, Rational::from_integer(2)).unwrap();
        let demand = DemandVector::distinct(6, 6).unwrap();
        let wrong = ErasureCode::new(4, 3).unwrap();
        assert!(matches!(
            cmcnc_deliver(&net, &lib, &cache, &demand, &wrong),
            Err(Error::CodeShape(_))
        ));
    }

    #[test]
    fn distinct_demands_round_trip() {
        let net = combination_network(4, 2).unwrap();
        let lib = FileLibrary::random(6, 30 * 8, 2).unwrap();
        let code = ErasureCode::new(4, 2).unwrap();
        let cache = cmcnc_place(&net, &lib, Rational::from_integer(2)).unwrap();
        let demand = DemandVector::distinct(6, 6).unwrap();
        let log = cmcnc_deliver(&net, &lib, &cache, &demand, &code).unwrap();
        assert!(log.relays_are_local());
        // R1 = R2 = 2/3
        assert_eq!(log.max_server_edge_bits() * 3, 2 * lib.bits());
        assert_eq!(log.max_relay_edge_bits() * 3, 2 * lib.bits());
        for u in 0..6 {
            let got = cmcnc_decode(
                &net,
                u,
                &cache,
                demand.get(u),
                &log.reception(&net, u),
                &code,
            )
            .unwrap();
            assert_eq!(got, lib.file(u + 1));
        }
    }
}
