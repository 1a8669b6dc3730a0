//! Every signal on every edge, in canonical order.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::combinatorics::SortedSubset;
use crate::topology::Network;

/// One summand of a coded signal: `W^part_{file, subset}` wanted by `user`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    /// Relay set of the user that decodes this term.
    pub user: SortedSubset,
    pub file: usize,
    pub subset: SortedSubset,
    pub part: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SignalLabel {
    /// XOR of `terms`, sent to `relay` for the class subset `classes`.
    Coded {
        relay: usize,
        classes: SortedSubset,
        terms: Vec<Term>,
    },
    /// An uncoded subfile for one user, routed through `relay`.
    Routed {
        relay: usize,
        user: SortedSubset,
        file: usize,
        subset: SortedSubset,
        part: usize,
    },
    /// Piece `piece` of the MDS-coded multicast signal for user subset `users`.
    Multicast {
        users: SortedSubset,
        demands: Vec<usize>,
        piece: usize,
        source_bytes: usize,
    },
    /// Piece `piece` of the MDS-coded uncached remainder of `file`.
    Broadcast {
        file: usize,
        piece: usize,
        source_bytes: usize,
    },
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "W[n={},V={},T={},l={}]",
            self.file, self.user, self.subset, self.part
        )
    }
}

impl fmt::Display for SignalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignalLabel::Coded {
                relay,
                classes,
                terms,
            } => {
                write!(f, "proposed relay={relay} C={classes} ")?;
                for (idx, t) in terms.iter().enumerate() {
                    if idx > 0 {
                        f.write_str("+")?;
                    }
                    write!(f, "{t}")?;
                }
                Ok(())
            }
            SignalLabel::Routed {
                relay,
                user,
                file,
                subset,
                part,
            } => write!(
                f,
                "routing relay={relay} V={user} W[n={file},T={subset},l={part}]"
            ),
            SignalLabel::Multicast {
                users,
                demands,
                piece,
                source_bytes,
            } => {
                write!(f, "cmcnc S={users} d=")?;
                for (idx, d) in demands.iter().enumerate() {
                    f.write_str(if idx == 0 { "[" } else { "," })?;
                    write!(f, "{d}")?;
                }
                write!(f, "] piece={piece} len={source_bytes}")
            }
            SignalLabel::Broadcast {
                file,
                piece,
                source_bytes,
            } => write!(f, "broadcast n={file} piece={piece} len={source_bytes}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signal {
    pub label: SignalLabel,
    pub payload: Vec<u8>,
}

impl Signal {
    pub fn bits(&self) -> u64 {
        self.payload.len() as u64 * 8
    }
}

/// Signals received by one user, keyed by the relay they came through.
pub type Reception<'a> = BTreeMap<usize, &'a [Signal]>;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TransmissionLog {
    /// Relay id to the signals on the server edge into that relay.
    pub server_edges: BTreeMap<usize, Vec<Signal>>,
    /// `(relay, user index)` to the signals on that relay-to-user edge.
    pub relay_edges: BTreeMap<(usize, usize), Vec<Signal>>,
}

#[derive(Serialize)]
struct Record {
    edge: String,
    label: String,
    bits: u64,
    payload: String,
}

impl TransmissionLog {
    /// Opens server and relay edges for every relay, with no signals yet.
    pub(crate) fn with_edges(net: &Network) -> Self {
        let mut log = Self::default();
        for i in 1..=net.h() {
            log.server_edges.insert(i, Vec::new());
            for &u in net.relay_neighborhood(i).expect("relay in range") {
                log.relay_edges.insert((i, u), Vec::new());
            }
        }
        log
    }

    pub fn is_empty(&self) -> bool {
        self.server_edges.values().all(Vec::is_empty)
            && self.relay_edges.values().all(Vec::is_empty)
    }

    pub fn server_edge_bits(&self, relay: usize) -> u64 {
        self.server_edges
            .get(&relay)
            .map_or(0, |s| s.iter().map(Signal::bits).sum())
    }

    pub fn relay_edge_bits(&self, relay: usize, user: usize) -> u64 {
        self.relay_edges
            .get(&(relay, user))
            .map_or(0, |s| s.iter().map(Signal::bits).sum())
    }

    pub fn max_server_edge_bits(&self) -> u64 {
        self.server_edges
            .keys()
            .map(|&i| self.server_edge_bits(i))
            .max()
            .unwrap_or(0)
    }

    pub fn max_relay_edge_bits(&self) -> u64 {
        self.relay_edges
            .keys()
            .map(|&(i, u)| self.relay_edge_bits(i, u))
            .max()
            .unwrap_or(0)
    }

    /// True when every server edge carries the same number of bits, and likewise every relay edge.
    pub fn is_edge_symmetric(&self) -> bool {
        let same = |mut it: Box<dyn Iterator<Item = u64> + '_>| {
            let first = it.next();
            it.all(|b| Some(b) == first)
        };
        same(Box::new(
            self.server_edges.keys().map(|&i| self.server_edge_bits(i)),
        )) && same(Box::new(
            self.relay_edges
                .keys()
                .map(|&(i, u)| self.relay_edge_bits(i, u)),
        ))
    }

    /// Every relay-edge signal is a verbatim copy of a signal on that relay's server edge.
    pub fn relays_are_local(&self) -> bool {
        let inbound: BTreeMap<usize, HashSet<&Signal>> = self
            .server_edges
            .iter()
            .map(|(&i, sigs)| (i, sigs.iter().collect()))
            .collect();
        self.relay_edges.iter().all(|(&(i, _), sigs)| {
            inbound
                .get(&i)
                .is_some_and(|set| sigs.iter().all(|s| set.contains(s)))
                || sigs.is_empty()
        })
    }

    /// What user `u` hears from each of its relays.
    pub fn reception(&self, net: &Network, u: usize) -> Reception<'_> {
        net.user(u)
            .elements()
            .iter()
            .filter_map(|&i| self.relay_edges.get(&(i, u)).map(|s| (i, s.as_slice())))
            .collect()
    }

    /// One JSON record per line: server edges by relay, then relay edges by (relay, user).
    pub fn to_jsonl(&self, net: &Network) -> String {
        let mut out = String::new();
        let mut emit = |edge: String, s: &Signal| {
            let rec = Record {
                edge,
                label: s.label.to_string(),
                bits: s.bits(),
                payload: hex::encode(&s.payload),
            };
            out.push_str(&serde_json::to_string(&rec).expect("record serializes"));
            out.push('\n');
        };
        for (i, sigs) in &self.server_edges {
            for s in sigs {
                emit(format!("S->{i}"), s);
            }
        }
        for ((i, u), sigs) in &self.relay_edges {
            for s in sigs {
                emit(format!("{i}->{}", net.user(*u)), s);
            }
        }
        out
    }

    /// SHA-256 of [`Self::to_jsonl`], hex encoded.
    pub fn digest(&self, net: &Network) -> String {
        hex::encode(Sha256::digest(self.to_jsonl(net).as_bytes()))
    }
}
