//! Uncoded delivery on top of class-based placement.
//!
//! User `V` is missing `W^l_{d_V,T}` for every `T` not containing its class;
//! part `l` travels through relay `V[l]`, so relay `i` forwards to `V` the
//! missing subfiles whose part is the position of `i` in `V`.

use std::collections::BTreeMap;

use super::proposed::{assemble_class_file, class_t, ClassLayout};
use super::{
    check_reception, CacheState, DemandVector, FileLibrary, Reception, Signal, SignalLabel,
    TransmissionLog,
};
use crate::combinatorics::position_in;
use crate::topology::Network;
use crate::{Error, Result};

pub fn routing_deliver(
    net: &Network,
    lib: &FileLibrary,
    cache: &CacheState,
    demand: &DemandVector,
) -> Result<TransmissionLog> {
    demand.check(net, lib)?;
    let t = class_t(cache, net)?;
    let layout = ClassLayout::new(net.k_tilde(), t, net.r(), lib)?;
    let mut log = TransmissionLog::with_edges(net);
    for i in 1..=net.h() {
        for &v in net.relay_neighborhood(i)? {
            let user = net.user(v);
            let part = position_in(user, i)?;
            let file = demand.get(v);
            let class = net.class_of(v);
            for subset in layout.subsets.iter().filter(|s| !s.contains(class)) {
                let signal = Signal {
                    label: SignalLabel::Routed {
                        relay: i,
                        user: user.clone(),
                        file,
                        subset: subset.clone(),
                        part,
                    },
                    payload: layout.chunk(lib, file, subset, part).to_vec(),
                };
                log.relay_edges
                    .get_mut(&(i, v))
                    .expect("edge opened")
                    .push(signal.clone());
                log.server_edges
                    .get_mut(&i)
                    .expect("edge opened")
                    .push(signal);
            }
        }
    }
    Ok(log)
}

pub fn routing_decode(
    net: &Network,
    u: usize,
    cache: &CacheState,
    wanted: usize,
    reception: &Reception<'_>,
) -> Result<Vec<u8>> {
    let t = class_t(cache, net)?;
    check_reception(net, u, reception)?;
    let me = net.user(u);
    let mut recovered = BTreeMap::new();
    for signals in reception.values() {
        for signal in signals.iter() {
            match &signal.label {
                SignalLabel::Routed {
                    user,
                    file,
                    subset,
                    part,
                    ..
                } if user == me && *file == wanted => {
                    recovered.insert((subset.clone(), *part), signal.payload.clone());
                }
                other => {
                    return Err(Error::Decode(format!("unexpected signal {other} at {me}")));
                }
            }
        }
    }
    assemble_class_file(net, u, cache, t, wanted, &mut recovered)
}
