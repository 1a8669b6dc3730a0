use rayon::prelude::*;
use serde::Serialize;

use super::{Prepared, RatePoint, SchemeId};
use crate::schemes::{DemandVector, FileLibrary};
use crate::topology::Network;
use crate::{Error, Rational, Result};

/// Largest demand space enumerated in exhaustive mode.
pub const EXHAUSTIVE_CAP: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyMode {
    Exhaustive,
    Sampled { seed: u64, count: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub scheme: SchemeId,
    #[serde(serialize_with = "super::ser_rational")]
    pub memory: Rational,
    pub mode: VerifyMode,
    pub runs: usize,
    pub passed: usize,
    /// Demand vectors for which some user failed to decode.
    pub failures: Vec<DemandVector>,
    pub max_server_edge_bits: u64,
    pub max_relay_edge_bits: u64,
    /// Every run produced the same measured rates.
    pub rates_demand_independent: bool,
    /// Every run's measured rates equal the closed form.
    pub formula_agrees: bool,
}

impl VerificationReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn summary(&self) -> String {
        format!("{}/{}", self.passed, self.runs)
    }
}

fn demand_vectors(net: &Network, n_files: usize, mode: VerifyMode) -> Result<Vec<DemandVector>> {
    match mode {
        VerifyMode::Exhaustive => {
            let total = (n_files as u64)
                .checked_pow(net.k() as u32)
                .filter(|&t| t <= EXHAUSTIVE_CAP)
                .ok_or_else(|| Error::ExhaustiveCap {
                    cap: EXHAUSTIVE_CAP,
                    requested: format!("{n_files}^{}", net.k()),
                })?;
            (0..total)
                .map(|idx| DemandVector::from_index(idx, net.k(), n_files))
                .collect()
        }
        VerifyMode::Sampled { seed, count } => (0..count as u64)
            .map(|j| DemandVector::seeded(net.k(), n_files, seed.wrapping_add(j)))
            .collect(),
    }
}

/// Runs `scheme` on every demand vector the mode selects and checks every user.
pub fn verify_all_demands(
    net: &Network,
    lib: &FileLibrary,
    memory: Rational,
    scheme: SchemeId,
    mode: VerifyMode,
) -> Result<VerificationReport> {
    let demands = demand_vectors(net, lib.n(), mode)?;
    let prepared = Prepared::new(net, lib, memory, scheme)?;
    let outcomes: Vec<(bool, RatePoint, u64, u64)> = demands
        .par_iter()
        .map(|d| {
            let (report, log) = prepared.run(d)?;
            Ok((
                report.decode_ok,
                report.measured,
                log.max_server_edge_bits(),
                log.max_relay_edge_bits(),
            ))
        })
        .collect::<Result<_>>()?;

    let failures = demands
        .iter()
        .zip(&outcomes)
        .filter(|(_, o)| !o.0)
        .map(|(d, _)| d.clone())
        .collect::<Vec<_>>();
    let first = outcomes.first().map(|o| o.1);
    Ok(VerificationReport {
        scheme,
        memory,
        mode,
        runs: outcomes.len(),
        passed: outcomes.len() - failures.len(),
        failures,
        max_server_edge_bits: outcomes.iter().map(|o| o.2).max().unwrap_or(0),
        max_relay_edge_bits: outcomes.iter().map(|o| o.3).max().unwrap_or(0),
        rates_demand_independent: outcomes.iter().all(|o| Some(o.1) == first),
        formula_agrees: outcomes.iter().all(|o| o.1.agrees_with(&prepared.formula)),
    })
}
