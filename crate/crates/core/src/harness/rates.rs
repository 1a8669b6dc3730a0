//! Closed-form rates, the memory-shared achievable rate, and comparison ratios.

use super::envelope::memory_sharing_envelope;
use super::{RatePoint, RateSource, SchemeId};
use crate::combinatorics::binomial;
use crate::{Error, Rational, Result};

/// Network and library shape needed by the closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Params {
    pub users: usize,
    pub relays: usize,
    pub fan_in: usize,
    pub files: usize,
}

impl Params {
    pub fn new(users: usize, relays: usize, fan_in: usize, files: usize) -> Result<Self> {
        if users == 0 || relays == 0 || fan_in == 0 || files == 0 {
            return Err(Error::InvalidArgument(
                "K, h, r and N must be positive".into(),
            ));
        }
        if !(users * fan_in).is_multiple_of(relays) {
            return Err(Error::InvalidArgument(format!(
                "K*r = {} is not divisible by h = {relays}",
                users * fan_in
            )));
        }
        Ok(Self {
            users,
            relays,
            fan_in,
            files,
        })
    }

    pub fn k_tilde(&self) -> usize {
        self.users * self.fan_in / self.relays
    }

    fn fraction(&self, memory: Rational) -> Result<Rational> {
        let n = int(self.files);
        if memory < int(0) || memory > n {
            return Err(Error::InvalidArgument(format!(
                "storage M = {memory} outside [0, {}]",
                self.files
            )));
        }
        Ok(memory / n)
    }
}

fn int(v: usize) -> Rational {
    Rational::from_integer(v as i128)
}

/// `parts * m` when it is an integer.
fn grid_t(parts: usize, m: Rational) -> Option<usize> {
    let t = int(parts) * m;
    t.is_integer().then(|| t.to_integer() as usize)
}

/// `X(1-m)/(r(1+Xm))`, the coded multicast load for replication over `X` groups.
fn multicast_load(groups: usize, fan_in: usize, m: Rational) -> Rational {
    let one = int(1);
    int(groups) * (one - m) / (int(fan_in) * (one + int(groups) * m))
}

fn multicast_envelope(
    groups: usize,
    fan_in: usize,
    p: &Params,
    memory: Rational,
) -> Result<Rational> {
    let m = p.fraction(memory)?;
    if grid_t(groups, m).is_some() {
        return Ok(multicast_load(groups, fan_in, m));
    }
    let points: Vec<_> = (0..=groups)
        .map(|j| {
            let mj = Rational::new(j as i128, groups as i128);
            (mj * int(p.files), multicast_load(groups, fan_in, mj))
        })
        .collect();
    memory_sharing_envelope(&points)?.eval(memory)
}

/// Table rates for `scheme` at storage `memory`.
///
/// Off the scheme's grid the coded schemes report the memory-sharing envelope
/// of their grid points and no subpacketization.
pub fn formula_rates(scheme: SchemeId, p: &Params, memory: Rational) -> Result<RatePoint> {
    let m = p.fraction(memory)?;
    let one = int(1);
    let r = p.fan_in;
    let kt = p.k_tilde();
    let uncoded_r2 = (one - m) / int(r);
    let class_subpack = || {
        grid_t(kt, m)
            .map(|t| binomial(kt as u64, t as i64).map(|c| c * r as u64))
            .transpose()
    };
    let (r1, r2, subpacketization) = match scheme {
        SchemeId::Proposed => (
            multicast_envelope(kt, r, p, memory)?,
            uncoded_r2,
            class_subpack()?,
        ),
        SchemeId::Routing => (
            int(p.users) * (one - m) / int(p.relays),
            uncoded_r2,
            class_subpack()?,
        ),
        SchemeId::Cmcnc => {
            let load = multicast_envelope(p.users, r, p, memory)?;
            let sub = grid_t(p.users, m)
                .map(|t| binomial(p.users as u64, t as i64).map(|c| c * r as u64))
                .transpose()?;
            (load, load, sub)
        }
        SchemeId::BroadcastMds => (
            int(p.files) * (one - m) / int(r),
            uncoded_r2,
            Some(r as u64),
        ),
    };
    Ok(RatePoint {
        memory,
        r1,
        r2,
        subpacketization,
        source: RateSource::Formula,
    })
}

/// Best achievable pair: the better of class-based coded
/// delivery and broadcast at each grid point, memory-shared in between.
pub fn theorem1_rate(p: &Params, memory: Rational) -> Result<RatePoint> {
    let m = p.fraction(memory)?;
    let kt = p.k_tilde();
    let r = p.fan_in;
    let broadcast = |mj: Rational| int(p.files) * (int(1) - mj) / int(r);
    let points: Vec<_> = (0..=kt)
        .map(|j| {
            let mj = Rational::new(j as i128, kt as i128);
            let coded = multicast_load(kt, r, mj);
            (mj * int(p.files), coded.min(broadcast(mj)))
        })
        .collect();
    let r1 = memory_sharing_envelope(&points)?.eval(memory)?;
    Ok(RatePoint {
        memory,
        r1,
        r2: (int(1) - m) / int(r),
        subpacketization: grid_t(kt, m)
            .map(|t| binomial(kt as u64, t as i64).map(|c| c * r as u64))
            .transpose()?,
        source: RateSource::Formula,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonRatios {
    /// Proposed over CM-CNC server-edge rate, `(1/K + m) / (1/K̃ + m)`.
    pub r1_ratio: Rational,
    /// Proposed over CM-CNC relay-edge rate, `1/K + m`.
    pub r2_ratio: Rational,
    /// `C(K̃, K̃m) / C(K, Km)`, when `M` is on both grids.
    pub subpack_ratio_exact: Option<Rational>,
    /// `exp(-K (1 - r/h) H_e(m))`.
    pub subpack_ratio_approx: f64,
}

pub fn comparison_ratios(p: &Params, memory: Rational) -> Result<ComparisonRatios> {
    let m = p.fraction(memory)?;
    let kt = p.k_tilde();
    let k = p.users;
    let inv = |x: usize| Rational::new(1, x as i128);
    let subpack_ratio_exact = match (grid_t(kt, m), grid_t(k, m)) {
        (Some(t), Some(tp)) => {
            let num = binomial(kt as u64, t as i64)?;
            let den = binomial(k as u64, tp as i64)?;
            Some(Rational::new(num as i128, den as i128))
        }
        _ => None,
    };
    let m_f = *m.numer() as f64 / *m.denom() as f64;
    let exponent =
        -(k as f64) * (1.0 - p.fan_in as f64 / p.relays as f64) * binary_entropy_nats(m_f)?;
    Ok(ComparisonRatios {
        r1_ratio: (inv(k) + m) / (inv(kt) + m),
        r2_ratio: inv(k) + m,
        subpack_ratio_exact,
        subpack_ratio_approx: exponent.exp(),
    })
}

/// `-p ln p - (1-p) ln(1-p)`, with `0 ln 0 = 0`.
pub fn binary_entropy_nats(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!(
            "probability {p} outside [0, 1]"
        )));
    }
    let term = |x: f64| if x == 0.0 { 0.0 } else { -x * x.ln() };
    Ok(term(p) + term(1.0 - p))
}

pub fn to_f64(x: Rational) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}
