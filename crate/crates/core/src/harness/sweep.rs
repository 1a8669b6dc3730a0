//! Storage sweeps and their CSV form.

use num_integer::Integer;
use rayon::prelude::*;

use super::rates::to_f64;
use super::{Prepared, SchemeId};
use crate::combinatorics::binomial;
use crate::schemes::{grid_index, DemandVector, FileLibrary};
use crate::topology::Network;
use crate::{Error, Rational, Result};

pub const CSV_HEADER: &str =
    "scheme,h,r,K,Ktilde,N,M,R1_formula,R1_measured,R2_formula,R2_measured,subpacketization,decode_ok";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRow {
    pub scheme: SchemeId,
    pub h: usize,
    pub r: usize,
    pub k: usize,
    pub k_tilde: usize,
    pub n: usize,
    pub memory: Rational,
    pub r1_formula: Rational,
    pub r1_measured: Rational,
    pub r2_formula: Rational,
    pub r2_measured: Rational,
    pub subpacketization: Option<u64>,
    pub decode_ok: bool,
}

/// Bytes every file size must be a multiple of for `scheme` to run at `memory`.
pub fn required_divisor(
    net: &Network,
    n_files: usize,
    memory: Rational,
    scheme: SchemeId,
) -> Result<u64> {
    let r = net.r() as u64;
    let overflow = || Error::Overflow("file size divisor".into());
    match scheme {
        SchemeId::Proposed | SchemeId::Routing => {
            let t = grid_index(memory, n_files, net.k_tilde())?;
            binomial(net.k_tilde() as u64, t as i64)?
                .checked_mul(r)
                .ok_or_else(overflow)
        }
        SchemeId::Cmcnc => {
            let t = grid_index(memory, n_files, net.k())?;
            binomial(net.k() as u64, t as i64)?
                .checked_mul(r)
                .ok_or_else(overflow)
        }
        SchemeId::BroadcastMds => {
            let n = Rational::from_integer(n_files as i128);
            if memory < Rational::from_integer(0) || memory > n {
                return Err(Error::InvalidArgument(format!(
                    "storage M = {memory} outside [0, {n_files}]"
                )));
            }
            let fraction = memory / n;
            (*fraction.denom() as u64)
                .checked_mul(r)
                .ok_or_else(overflow)
        }
    }
}

/// Smallest file size in bytes that every `(memory, scheme)` cell can use.
pub fn auto_file_bytes(
    net: &Network,
    n_files: usize,
    memories: &[Rational],
    schemes: &[SchemeId],
) -> Result<usize> {
    let mut acc: u64 = 1;
    for &m in memories {
        for &s in schemes {
            let d = required_divisor(net, n_files, m, s)?;
            let g = acc.gcd(&d);
            acc = (acc / g)
                .checked_mul(d)
                .ok_or_else(|| Error::Overflow("file size lcm".into()))?;
        }
    }
    usize::try_from(acc).map_err(|_| Error::Overflow("file size".into()))
}

/// Runs every scheme at every storage level for one demand vector.
pub fn sweep(
    net: &Network,
    lib: &FileLibrary,
    memories: &[Rational],
    schemes: &[SchemeId],
    demand: &DemandVector,
) -> Result<Vec<SweepRow>> {
    let cells: Vec<(SchemeId, Rational)> = schemes
        .iter()
        .flat_map(|&s| memories.iter().map(move |&m| (s, m)))
        .collect();
    cells
        .par_iter()
        .map(|&(scheme, memory)| {
            let (report, _) = Prepared::new(net, lib, memory, scheme)?.run(demand)?;
            Ok(SweepRow {
                scheme,
                h: net.h(),
                r: net.r(),
                k: net.k(),
                k_tilde: net.k_tilde(),
                n: lib.n(),
                memory,
                r1_formula: report.formula.r1,
                r1_measured: report.measured.r1,
                r2_formula: report.formula.r2,
                r2_measured: report.measured.r2,
                subpacketization: report.formula.subpacketization,
                decode_ok: report.decode_ok,
            })
        })
        .collect()
}

fn decimal(x: Rational) -> String {
    format!("{:?}", to_f64(x))
}

pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let fields = [
            row.scheme.name().to_string(),
            row.h.to_string(),
            row.r.to_string(),
            row.k.to_string(),
            row.k_tilde.to_string(),
            row.n.to_string(),
            row.memory.to_string(),
            decimal(row.r1_formula),
            decimal(row.r1_measured),
            decimal(row.r2_formula),
            decimal(row.r2_measured),
            row.subpacketization
                .map_or_else(String::new, |s| s.to_string()),
            row.decode_ok.to_string(),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::combination_network;

    #[test]
    fn auto_size_for_the_six_relay_sweep() {
        let net = combination_network(6, 2).unwrap();
        let grid: Vec<_> = (0..=5).map(|j| Rational::from_integer(10 * j)).collect();
        assert_eq!(
            auto_file_bytes(&net, 50, &grid, &[SchemeId::Proposed]).unwrap(),
            20
        );
        assert_eq!(
            auto_file_bytes(&net, 50, &grid, &SchemeId::ALL).unwrap(),
            20020
        );
    }

    #[test]
    fn off_grid_divisor_is_an_error() {
        let net = combination_network(4, 2).unwrap();
        assert!(matches!(
            required_divisor(&net, 6, Rational::from_integer(1), SchemeId::Proposed),
            Err(Error::GridViolation { .. })
        ));
        assert_eq!(
            required_divisor(&net, 6, Rational::from_integer(1), SchemeId::Cmcnc).unwrap(),
            12
        );
        assert_eq!(
            required_divisor(&net, 6, Rational::from_integer(1), SchemeId::BroadcastMds).unwrap(),
            12
        );
    }

    #[test]
    fn csv_shape() {
        let net = combination_network(4, 2).unwrap();
        let lib = FileLibrary::random(6, 6 * 8, 0).unwrap();
        let demand = DemandVector::distinct(6, 6).unwrap();
        let rows = sweep(
            &net,
            &lib,
            &[Rational::from_integer(2)],
            &[SchemeId::Proposed],
            &demand,
        )
        .unwrap();
        let csv = rows_to_csv(&rows);
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(
            lines[1],
            "proposed,4,2,6,3,6,2,0.5,0.5,0.3333333333333333,0.3333333333333333,6,true"
        );
    }
}
