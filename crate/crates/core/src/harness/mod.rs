//! End-to-end runs and rate accounting.
//!
//! A run places caches, delivers for one demand vector, decodes at every user
//! and measures the worst server edge and worst relay edge in units of the
//! file size. Measured and closed-form rates are both exact rationals and are
//! compared for equality.

mod envelope;
mod rates;
mod sweep;
mod verify;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::combinatorics::binomial;
use crate::erasure::ErasureCode;
use crate::schemes::broadcast::{broadcast_decode, broadcast_mds_deliver, broadcast_place};
use crate::schemes::cmcnc::{cmcnc_decode, cmcnc_deliver, cmcnc_place};
use crate::schemes::proposed::{proposed_decode, proposed_deliver, proposed_place};
use crate::schemes::routing::{routing_decode, routing_deliver};
use crate::schemes::{CacheState, DemandVector, FileLibrary, Placement, TransmissionLog};
use crate::topology::Network;
use crate::{Error, Rational, Result};

pub use envelope::{memory_sharing_envelope, Envelope, MemoryShare};
pub use rates::{
    binary_entropy_nats, comparison_ratios, formula_rates, theorem1_rate, to_f64, ComparisonRatios,
    Params,
};
pub use sweep::{auto_file_bytes, required_divisor, rows_to_csv, sweep, SweepRow, CSV_HEADER};
pub use verify::{verify_all_demands, VerificationReport, VerifyMode, EXHAUSTIVE_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeId {
    Proposed,
    Routing,
    Cmcnc,
    BroadcastMds,
}

impl SchemeId {
    pub const ALL: [SchemeId; 4] = [
        SchemeId::Proposed,
        SchemeId::Routing,
        SchemeId::Cmcnc,
        SchemeId::BroadcastMds,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeId::Proposed => "proposed",
            SchemeId::Routing => "routing",
            SchemeId::Cmcnc => "cmcnc",
            SchemeId::BroadcastMds => "broadcast-mds",
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown scheme {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RateSource {
    Formula,
    Measured,
}

/// `(M, R1, R2)` with rates in units of the file size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RatePoint {
    #[serde(serialize_with = "ser_rational")]
    pub memory: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub r1: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub r2: Rational,
    pub subpacketization: Option<u64>,
    pub source: RateSource,
}

impl RatePoint {
    /// Same rates and subpacketization, ignoring the source tag.
    pub fn agrees_with(&self, other: &RatePoint) -> bool {
        self.memory == other.memory
            && self.r1 == other.r1
            && self.r2 == other.r2
            && self.subpacketization == other.subpacketization
    }
}

pub(crate) fn ser_rational<S: serde::Serializer>(
    x: &Rational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchemeReport {
    pub scheme: SchemeId,
    pub measured: RatePoint,
    pub formula: RatePoint,
    pub decode_ok: bool,
    /// Users whose decoded file differed, with the reason.
    pub failures: Vec<(usize, String)>,
    pub demand: DemandVector,
    pub log_digest: String,
    pub edge_symmetric: bool,
    pub relays_local: bool,
}

impl SchemeReport {
    pub fn matches_formula(&self) -> bool {
        self.measured.agrees_with(&self.formula)
    }
}

/// Placement done once, reusable across demand vectors.
#[derive(Debug, Clone)]
pub struct Prepared<'a> {
    pub net: &'a Network,
    pub lib: &'a FileLibrary,
    pub scheme: SchemeId,
    pub cache: CacheState,
    code: Option<ErasureCode>,
    formula: RatePoint,
}

impl<'a> Prepared<'a> {
    pub fn new(
        net: &'a Network,
        lib: &'a FileLibrary,
        memory: Rational,
        scheme: SchemeId,
    ) -> Result<Self> {
        let cache = match scheme {
            SchemeId::Proposed | SchemeId::Routing => proposed_place(net, lib, memory)?,
            SchemeId::Cmcnc => cmcnc_place(net, lib, memory)?,
            SchemeId::BroadcastMds => broadcast_place(net, lib, memory)?,
        };
        let code = match scheme {
            SchemeId::Cmcnc | SchemeId::BroadcastMds => Some(ErasureCode::new(net.h(), net.r())?),
            _ => None,
        };
        let params = Params::new(net.k(), net.h(), net.r(), lib.n())?;
        let formula = formula_rates(scheme, &params, memory)?;
        Ok(Self {
            net,
            lib,
            scheme,
            cache,
            code,
            formula,
        })
    }

    pub fn deliver(&self, demand: &DemandVector) -> Result<TransmissionLog> {
        let (net, lib, cache) = (self.net, self.lib, &self.cache);
        match self.scheme {
            SchemeId::Proposed => proposed_deliver(net, lib, cache, demand),
            SchemeId::Routing => routing_deliver(net, lib, cache, demand),
            SchemeId::Cmcnc => cmcnc_deliver(net, lib, cache, demand, self.code()),
            SchemeId::BroadcastMds => broadcast_mds_deliver(net, lib, cache, demand, self.code()),
        }
    }

    pub fn decode(&self, log: &TransmissionLog, u: usize, wanted: usize) -> Result<Vec<u8>> {
        let rx = log.reception(self.net, u);
        let (net, cache) = (self.net, &self.cache);
        match self.scheme {
            SchemeId::Proposed => proposed_decode(net, u, cache, wanted, &rx),
            SchemeId::Routing => routing_decode(net, u, cache, wanted, &rx),
            SchemeId::Cmcnc => cmcnc_decode(net, u, cache, wanted, &rx, self.code()),
            SchemeId::BroadcastMds => broadcast_decode(net, u, cache, wanted, &rx, self.code()),
        }
    }

    fn code(&self) -> &ErasureCode {
        self.code
            .as_ref()
            .expect("coded schemes carry an erasure code")
    }

    fn measured_subpacketization(&self) -> Result<u64> {
        let r = self.net.r() as u64;
        Ok(match self.cache.placement() {
            Placement::Class { t } => r * binomial(self.net.k_tilde() as u64, t as i64)?,
            Placement::Users { t } => r * binomial(self.net.k() as u64, t as i64)?,
            Placement::Prefix { .. } => r,
        })
    }

    pub fn run(&self, demand: &DemandVector) -> Result<(SchemeReport, TransmissionLog)> {
        let log = self.deliver(demand)?;
        let mut failures = Vec::new();
        for u in 0..self.net.k() {
            let wanted = demand.get(u);
            match self.decode(&log, u, wanted) {
                Ok(bytes) if bytes == self.lib.file(wanted) => {}
                Ok(_) => failures.push((u, "decoded file differs".to_string())),
                Err(e) => failures.push((u, e.to_string())),
            }
        }
        let bits = self.lib.bits() as i128;
        let measured = RatePoint {
            memory: self.cache.memory(),
            r1: Rational::new(log.max_server_edge_bits() as i128, bits),
            r2: Rational::new(log.max_relay_edge_bits() as i128, bits),
            subpacketization: Some(self.measured_subpacketization()?),
            source: RateSource::Measured,
        };
        let report = SchemeReport {
            scheme: self.scheme,
            measured,
            formula: self.formula,
            decode_ok: failures.is_empty(),
            failures,
            demand: demand.clone(),
            log_digest: log.digest(self.net),
            edge_symmetric: log.is_edge_symmetric(),
            relays_local: log.relays_are_local(),
        };
        Ok((report, log))
    }
}

/// Place, deliver and decode once; returns the report and the full log.
pub fn simulate(
    net: &Network,
    lib: &FileLibrary,
    memory: Rational,
    demand: &DemandVector,
    scheme: SchemeId,
) -> Result<(SchemeReport, TransmissionLog)> {
    Prepared::new(net, lib, memory, scheme)?.run(demand)
}

pub fn run_scheme(
    net: &Network,
    lib: &FileLibrary,
    memory: Rational,
    demand: &DemandVector,
    scheme: SchemeId,
) -> Result<SchemeReport> {
    simulate(net, lib, memory, demand, scheme).map(|(report, _)| report)
}
