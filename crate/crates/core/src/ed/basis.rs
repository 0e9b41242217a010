//! Occupation-number basis with per-mode and total boson cutoffs.
//!
//! Mode 0 is the photon, modes 1..=N the atoms. States are packed into a
//! `u64` with eight bits per mode, most significant first, so sorted keys are
//! in lexicographic order of the occupation vectors.

use crate::error::{Error, Result};
use serde::Serialize;

pub const MAX_MODES: usize = 8;
pub const MAX_PER_MODE: usize = 255;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(total: usize) -> Parity {
        if total.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl std::fmt::Display for Parity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

#[derive(Debug, Clone)]
pub struct BasisIndex {
    n_modes: usize,
    per_mode: usize,
    total: usize,
    parity: Parity,
    keys: Vec<u64>,
}

fn shift(n_modes: usize, mode: usize) -> u32 {
    8 * (n_modes - 1 - mode) as u32
}

impl BasisIndex {
    /// Enumerates every occupation vector of `n_modes` modes with each entry
    /// at most `per_mode`, sum at most `total`, and sum of the given parity.
    /// Fails if the sector would hold more than `limit` states.
    pub fn new(n_modes: usize, per_mode: usize, total: usize, parity: Parity, limit: usize) -> Result<Self> {
        if n_modes == 0 || n_modes > MAX_MODES {
            return Err(Error::InvalidParameter(format!("mode count must be 1..={MAX_MODES}, got {n_modes}")));
        }
        if per_mode > MAX_PER_MODE {
            return Err(Error::InvalidParameter(format!("per-mode cutoff must be at most {MAX_PER_MODE}")));
        }
        if per_mode > total {
            return Err(Error::InvalidParameter(format!(
                "per-mode cutoff {per_mode} exceeds total cutoff {total}"
            )));
        }
        let mut keys = Vec::new();
        let mut occ = vec![0usize; n_modes];
        enumerate(&mut occ, 0, 0, per_mode, total, parity, &mut keys, limit)?;
        Ok(BasisIndex { n_modes, per_mode, total, parity, keys })
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn per_mode(&self) -> usize {
        self.per_mode
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn key(&self, index: usize) -> u64 {
        self.keys[index]
    }

    /// Occupation of `mode` in a packed key.
    pub fn occupation(&self, key: u64, mode: usize) -> usize {
        ((key >> shift(self.n_modes, mode)) & 0xff) as usize
    }

    pub fn state(&self, index: usize) -> Vec<usize> {
        (0..self.n_modes).map(|m| self.occupation(self.keys[index], m)).collect()
    }

    pub fn encode(&self, occ: &[usize]) -> Option<u64> {
        if occ.len() != self.n_modes || occ.iter().any(|&n| n > MAX_PER_MODE) {
            return None;
        }
        Some(occ.iter().fold(0u64, |k, &n| (k << 8) | n as u64))
    }

    /// Key with the occupation of `mode` replaced by `n`.
    pub fn with_occupation(&self, key: u64, mode: usize, n: usize) -> u64 {
        let s = shift(self.n_modes, mode);
        (key & !(0xff << s)) | ((n as u64) << s)
    }

    pub fn index_of_key(&self, key: u64) -> Option<usize> {
        self.keys.binary_search(&key).ok()
    }

    pub fn index_of(&self, occ: &[usize]) -> Option<usize> {
        self.index_of_key(self.encode(occ)?)
    }

    pub fn total_of(&self, key: u64) -> usize {
        (0..self.n_modes).map(|m| self.occupation(key, m)).sum()
    }
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    occ: &mut [usize],
    mode: usize,
    used: usize,
    per_mode: usize,
    total: usize,
    parity: Parity,
    keys: &mut Vec<u64>,
    limit: usize,
) -> Result<()> {
    if mode == occ.len() {
        if Parity::of(used) == parity {
            if keys.len() == limit {
                return Err(Error::BasisTooLarge { dim: limit + 1, limit });
            }
            keys.push(occ.iter().fold(0u64, |k, &n| (k << 8) | n as u64));
        }
        return Ok(());
    }
    for n in 0..=per_mode.min(total - used) {
        occ[mode] = n;
        enumerate(occ, mode + 1, used + n, per_mode, total, parity, keys, limit)?;
    }
    occ[mode] = 0;
    Ok(())
}
