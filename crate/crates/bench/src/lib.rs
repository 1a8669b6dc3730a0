//! Fixtures shared by the criterion benches.

use relaycache::schemes::{DemandVector, FileLibrary};
use relaycache::topology::{combination_network, Network};
use relaycache::Result;

/// A combination network with a seeded library of `file_bytes`-byte files and seeded demands.
pub fn fixture(
    h: usize,
    r: usize,
    n_files: usize,
    file_bytes: usize,
) -> Result<(Network, FileLibrary, DemandVector)> {
    let net = combination_network(h, r)?;
    let lib = FileLibrary::random(n_files, file_bytes as u64 * 8, 42)?;
    let demand = DemandVector::seeded(net.k(), n_files, 7)?;
    Ok((net, lib, demand))
}
