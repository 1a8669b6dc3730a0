//! Systematic `(n, k)` MDS erasure code over GF(2^8).
//!
//! The generator stacks the `k x k` identity on an `(n-k) x k` Cauchy matrix
//! `1 / (x_i + y_j)` with `x_i = i` and `y_j = n - k + j`. Every square
//! submatrix of a Cauchy matrix is nonsingular, which makes every `k`-row
//! selection of the generator invertible.

mod gf256;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::enumerate_subsets;
use crate::{Error, Result};

pub use gf256::Gf256;

/// Largest code length for which every row subset is checked at construction.
const EXHAUSTIVE_CHECK_LIMIT: usize = 12;
const SPOT_CHECKS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErasureCode {
    n: usize,
    k: usize,
    /// `n` rows of `k` coefficients.
    generator: Vec<Vec<Gf256>>,
}

impl ErasureCode {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k == 0 || k > n || n > 255 {
            return Err(Error::InvalidArgument(format!(
                "erasure code needs 1 <= k <= n <= 255, got n = {n}, k = {k}"
            )));
        }
        let mut generator: Vec<Vec<Gf256>> = (0..k)
            .map(|i| (0..k).map(|j| Gf256::from((i == j) as u8)).collect())
            .collect();
        for i in 0..n - k {
            let x = Gf256::from(i as u8);
            generator.push(
                (0..k)
                    .map(|j| (x + Gf256::from((n - k + j) as u8)).inv())
                    .collect(),
            );
        }
        let code = Self { n, k, generator };
        code.check_mds()?;
        Ok(code)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn generator(&self) -> &[Vec<Gf256>] {
        &self.generator
    }

    fn check_mds(&self) -> Result<()> {
        let rows: Vec<Vec<usize>> = if self.n <= EXHAUSTIVE_CHECK_LIMIT {
            enumerate_subsets(self.n, self.k as i64)?
                .into_iter()
                .map(|s| s.elements().iter().map(|e| e - 1).collect())
                .collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64((self.n * 256 + self.k) as u64);
            (0..SPOT_CHECKS)
                .map(|_| {
                    let mut v = sample(&mut rng, self.n, self.k).into_vec();
                    v.sort_unstable();
                    v
                })
                .collect()
        };
        for sel in rows {
            if self.inverse_of_rows(&sel).is_none() {
                return Err(Error::Decode(format!(
                    "generator rows {sel:?} are singular"
                )));
            }
        }
        Ok(())
    }

    /// Encodes `k` equal-length data pieces into `n` pieces; the first `k` are the data.
    pub fn encode(&self, data: &[Vec<u8>]) -> Result<Vec<Vec<u8>>> {
        if data.len() != self.k {
            return Err(Error::InvalidArgument(format!(
                "expected {} data pieces, got {}",
                self.k,
                data.len()
            )));
        }
        let len = data[0].len();
        if data.iter().any(|d| d.len() != len) {
            return Err(Error::InvalidArgument(
                "data pieces differ in length".into(),
            ));
        }
        let mut out: Vec<Vec<u8>> = data.to_vec();
        for row in &self.generator[self.k..] {
            out.push(combine(row, data, len));
        }
        Ok(out)
    }

    /// Recovers the data from exactly `k` pieces, each tagged with its 1-based index.
    pub fn decode(&self, pieces: &[(usize, Vec<u8>)]) -> Result<Vec<Vec<u8>>> {
        if pieces.len() != self.k {
            return Err(Error::InvalidArgument(format!(
                "decoding needs exactly {} pieces, got {}",
                self.k,
                pieces.len()
            )));
        }
        let mut rows: Vec<usize> = Vec::with_capacity(self.k);
        for (idx, _) in pieces {
            if *idx == 0 || *idx > self.n {
                return Err(Error::InvalidArgument(format!(
                    "piece index {idx} outside 1..={}",
                    self.n
                )));
            }
            if rows.contains(&(idx - 1)) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate piece index {idx}"
                )));
            }
            rows.push(idx - 1);
        }
        let len = pieces[0].1.len();
        if pieces.iter().any(|(_, p)| p.len() != len) {
            return Err(Error::InvalidArgument("pieces differ in length".into()));
        }
        if rows.iter().enumerate().all(|(pos, &r)| r == pos) {
            return Ok(pieces.iter().map(|(_, p)| p.clone()).collect());
        }
        let inverse = self
            .inverse_of_rows(&rows)
            .expect("every k rows of a Cauchy systematic generator are invertible");
        let payloads: Vec<Vec<u8>> = pieces.iter().map(|(_, p)| p.clone()).collect();
        Ok(inverse
            .iter()
            .map(|row| combine(row, &payloads, len))
            .collect())
    }

    /// Splits `bytes` into `k` zero-padded pieces and encodes them.
    ///
    /// The caller keeps `bytes.len()` to strip the padding on decode.
    pub fn encode_padded(&self, bytes: &[u8]) -> Result<Vec<Vec<u8>>> {
        let piece = bytes.len().div_ceil(self.k);
        let data: Vec<Vec<u8>> = (0..self.k)
            .map(|j| {
                let mut p = vec![0u8; piece];
                let lo = (j * piece).min(bytes.len());
                let hi = ((j + 1) * piece).min(bytes.len());
                p[..hi - lo].copy_from_slice(&bytes[lo..hi]);
                p
            })
            .collect();
        self.encode(&data)
    }

    /// Inverse of [`Self::encode_padded`]; `true_len` is the original byte length.
    pub fn decode_padded(&self, pieces: &[(usize, Vec<u8>)], true_len: usize) -> Result<Vec<u8>> {
        let mut out: Vec<u8> = self.decode(pieces)?.concat();
        if out.len() < true_len {
            return Err(Error::Decode(format!(
                "decoded {} bytes, expected at least {true_len}",
                out.len()
            )));
        }
        out.truncate(true_len);
        Ok(out)
    }

    fn inverse_of_rows(&self, rows: &[usize]) -> Option<Vec<Vec<Gf256>>> {
        let k = self.k;
        let mut a: Vec<Vec<Gf256>> = rows.iter().map(|&r| self.generator[r].clone()).collect();
        let mut inv: Vec<Vec<Gf256>> = (0..k)
            .map(|i| (0..k).map(|j| Gf256::from((i == j) as u8)).collect())
            .collect();
        for col in 0..k {
            let pivot = (col..k).find(|&r| a[r][col] != Gf256::ZERO)?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let scale = a[col][col].inv();
            for j in 0..k {
                a[col][j] = a[col][j] * scale;
                inv[col][j] = inv[col][j] * scale;
            }
            for r in 0..k {
                if r != col && a[r][col] != Gf256::ZERO {
                    let f = a[r][col];
                    for j in 0..k {
                        let (ac, ic) = (a[col][j], inv[col][j]);
                        a[r][j] = a[r][j] + f * ac;
                        inv[r][j] = inv[r][j] + f * ic;
                    }
                }
            }
        }
        Some(inv)
    }
}

fn combine(coeffs: &[Gf256], pieces: &[Vec<u8>], len: usize) -> Vec<u8> {
    let mut out = vec![0u8; len];
    for (c, p) in coeffs.iter().zip(pieces) {
        if *c == Gf256::ZERO {
            continue;
        }
        for (o, &b) in out.iter_mut().zip(p) {
            *o ^= (*c * Gf256::from(b)).value();
        }
    }
    out
}
