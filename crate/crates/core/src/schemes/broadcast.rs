//! Uncoded prefix caching with MDS-coded broadcast of every file.
//!
//! Each user stores the first `MF/N` bits of every file. The remaining bits
//! of each file are cut into `r` parts and coded into `h` pieces; piece `i`
//! of every file goes to relay `i`, which forwards to each user the piece of
//! the file it asked for.

use std::collections::BTreeMap;

use super::{
    check_reception, CacheState, DemandVector, FileLibrary, Placement, Reception, Signal,
    SignalLabel, SubfileKey, TransmissionLog,
};
use crate::erasure::ErasureCode;
use crate::topology::Network;
use crate::{Error, Rational, Result};

fn prefix_bytes(cache: &CacheState, net: &Network) -> Result<usize> {
    match cache.placement() {
        Placement::Prefix { prefix_bytes } if cache.user_count() == net.k() => Ok(prefix_bytes),
        _ => Err(Error::InvalidArgument(
            "cache was not filled by prefix placement for this network".into(),
        )),
    }
}

pub fn broadcast_place(net: &Network, lib: &FileLibrary, memory: Rational) -> Result<CacheState> {
    let n = Rational::from_integer(lib.n() as i128);
    if memory < Rational::from_integer(0) || memory > n {
        return Err(Error::InvalidArgument(format!(
            "storage M = {memory} outside [0, {}]",
            lib.n()
        )));
    }
    let prefix = memory / n * Rational::from_integer(lib.file_bytes() as i128);
    if !prefix.is_integer() {
        let fraction = memory / n;
        return Err(Error::Subpacketization {
            bytes: lib.file_bytes(),
            divisor: *fraction.denom() as usize,
        });
    }
    let prefix = prefix.to_integer() as usize;
    let store: BTreeMap<SubfileKey, Vec<u8>> = if prefix == 0 {
        BTreeMap::new()
    } else {
        (1..=lib.n())
            .map(|file| {
                (
                    SubfileKey::Prefix { file },
                    lib.file(file)[..prefix].to_vec(),
                )
            })
            .collect()
    };
    Ok(CacheState {
        placement: Placement::Prefix {
            prefix_bytes: prefix,
        },
        memory,
        subfile_bytes: prefix,
        users: vec![store; net.k()],
    })
}

pub fn broadcast_mds_deliver(
    net: &Network,
    lib: &FileLibrary,
    cache: &CacheState,
    demand: &DemandVector,
    code: &ErasureCode,
) -> Result<TransmissionLog> {
    demand.check(net, lib)?;
    if code.n() != net.h() || code.k() != net.r() {
        return Err(Error::CodeShape(format!(
            "need an ({}, {}) code, got ({}, {})",
            net.h(),
            net.r(),
            code.n(),
            code.k()
        )));
    }
    let prefix = prefix_bytes(cache, net)?;
    let mut log = TransmissionLog::with_edges(net);
    if prefix == lib.file_bytes() {
        return Ok(log);
    }
    let mut coded: Vec<Vec<Signal>> = Vec::with_capacity(lib.n());
    for file in 1..=lib.n() {
        let rest = &lib.file(file)[prefix..];
        let pieces = code.encode_padded(rest)?;
        coded.push(
            pieces
                .into_iter()
                .enumerate()
                .map(|(idx, payload)| Signal {
                    label: SignalLabel::Broadcast {
                        file,
                        piece: idx + 1,
                        source_bytes: rest.len(),
                    },
                    payload,
                })
                .collect(),
        );
    }
    for i in 1..=net.h() {
        let edge = log.server_edges.get_mut(&i).expect("edge opened");
        edge.extend(coded.iter().map(|pieces| pieces[i - 1].clone()));
        for &v in net.relay_neighborhood(i)? {
            let signal = coded[demand.get(v) - 1][i - 1].clone();
            log.relay_edges
                .get_mut(&(i, v))
                .expect("edge opened")
                .push(signal);
        }
    }
    Ok(log)
}

pub fn broadcast_decode(
    net: &Network,
    u: usize,
    cache: &CacheState,
    wanted: usize,
    reception: &Reception<'_>,
    code: &ErasureCode,
) -> Result<Vec<u8>> {
    let prefix = prefix_bytes(cache, net)?;
    check_reception(net, u, reception)?;
    let mut out = match cache.user(u).get(&SubfileKey::Prefix { file: wanted }) {
        Some(p) => p.clone(),
        None if prefix == 0 => Vec::new(),
        None => {
            return Err(Error::Decode(format!(
                "cache is missing the prefix of file {wanted}"
            )))
        }
    };
    let mut pieces = Vec::with_capacity(net.r());
    let mut true_len = None;
    for signals in reception.values() {
        for signal in signals.iter() {
            match &signal.label {
                SignalLabel::Broadcast {
                    file,
                    piece,
                    source_bytes,
                } if *file == wanted => {
                    pieces.push((*piece, signal.payload.clone()));
                    true_len = Some(*source_bytes);
                }
                other => return Err(Error::Decode(format!("unexpected signal {other}"))),
            }
        }
    }
    if let Some(len) = true_len {
        out.extend(code.decode_padded(&pieces, len)?);
    }
    Ok(out)
}
