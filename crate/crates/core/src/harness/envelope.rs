//! Lower convex envelope of `(M, rate)` corner points.

use crate::{Error, Rational, Result};

/// Piecewise-linear lower convex envelope over a set of corner points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Envelope {
    corners: Vec<(Rational, Rational)>,
}

/// How a storage level splits between two envelope corners.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MemoryShare {
    pub lower: (Rational, Rational),
    pub upper: (Rational, Rational),
    /// Fraction of the file served at the `lower` corner.
    pub lower_weight: Rational,
    pub value: Rational,
}

pub fn memory_sharing_envelope(points: &[(Rational, Rational)]) -> Result<Envelope> {
    if points.is_empty() {
        return Err(Error::InvalidArgument(
            "envelope needs at least one point".into(),
        ));
    }
    if points.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(Error::InvalidArgument(
            "envelope points must have strictly increasing M".into(),
        ));
    }
    let mut hull: Vec<(Rational, Rational)> = Vec::with_capacity(points.len());
    for &p in points {
        while hull.len() >= 2 {
            let (o, a) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (a.0 - o.0) * (p.1 - o.1) - (a.1 - o.1) * (p.0 - o.0);
            if cross > Rational::from_integer(0) {
                break;
            }
            hull.pop();
        }
        hull.push(p);
    }
    Ok(Envelope { corners: hull })
}

impl Envelope {
    pub fn corners(&self) -> &[(Rational, Rational)] {
        &self.corners
    }

    pub fn domain(&self) -> (Rational, Rational) {
        (self.corners[0].0, self.corners[self.corners.len() - 1].0)
    }

    pub fn share(&self, m: Rational) -> Result<MemoryShare> {
        let (lo, hi) = self.domain();
        if m < lo || m > hi {
            return Err(Error::InvalidArgument(format!(
                "M = {m} outside the envelope domain [{lo}, {hi}]"
            )));
        }
        let one = Rational::from_integer(1);
        if self.corners.len() == 1 {
            let c = self.corners[0];
            return Ok(MemoryShare {
                lower: c,
                upper: c,
                lower_weight: one,
                value: c.1,
            });
        }
        let seg = self
            .corners
            .windows(2)
            .find(|w| m <= w[1].0)
            .expect("m lies in the domain");
        let (a, b) = (seg[0], seg[1]);
        let lower_weight = (b.0 - m) / (b.0 - a.0);
        Ok(MemoryShare {
            lower: a,
            upper: b,
            lower_weight,
            value: lower_weight * a.1 + (one - lower_weight) * b.1,
        })
    }

    pub fn eval(&self, m: Rational) -> Result<Rational> {
        Ok(self.share(m)?.value)
    }
}
