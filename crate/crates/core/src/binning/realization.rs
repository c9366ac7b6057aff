//! Random bin maps.
//!
//! The bin of sequence `i` under map `(user j, kind k)` is the `i`-th 64-bit
//! word of the ChaCha8 stream `(seed, Binning, 2 (j - 1) + k)`, masked to the
//! (power-of-two) bin count, with `k = 0` for the key bin `W_j` and `k = 1`
//! for the public bin `F_j`. Bins are 0-based. Because every word is
//! addressable, small maps are tabulated while large ones are evaluated on
//! demand, and both agree exactly.

use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::params::{BinCounts, ProtocolParams};
use crate::caps::Caps;
use crate::error::Result;
use crate::rng::{stream, Domain};
use crate::seq;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BinKind {
    Key = 0,
    Public = 1,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BinningRealization {
    pub n: usize,
    pub seed: u64,
    pub alph_u: [usize; 2],
    pub counts: BinCounts,
    /// Tables indexed `2 (j - 1) + kind`, when materialized.
    tables: Option<[Vec<u32>; 4]>,
}

fn stream_index(user: usize, kind: BinKind) -> u64 {
    2 * (user as u64 - 1) + kind as u64
}

fn count_of(counts: &BinCounts, user: usize, kind: BinKind) -> usize {
    match kind {
        BinKind::Key => counts.w[user - 1],
        BinKind::Public => counts.f[user - 1],
    }
}

impl BinningRealization {
    /// Bin maps evaluated on demand; no size limit.
    pub fn lazy(params: &ProtocolParams) -> Result<Self> {
        params.validate()?;
        Ok(BinningRealization {
            n: params.n,
            seed: params.seed,
            alph_u: [params.aux.alph_u1(), params.aux.alph_u2()],
            counts: params.counts()?,
            tables: None,
        })
    }

    pub fn is_tabulated(&self) -> bool {
        self.tables.is_some()
    }

    /// Number of sequences of user `j`.
    pub fn num_seqs(&self, user: usize) -> usize {
        self.alph_u[user - 1].pow(self.n as u32)
    }

    /// Bin of sequence `index` of user `j` (0-based).
    pub fn bin(&self, user: usize, kind: BinKind, index: usize) -> usize {
        if let Some(t) = &self.tables {
            return t[stream_index(user, kind) as usize][index] as usize;
        }
        let mut rng = stream(self.seed, Domain::Binning, stream_index(user, kind));
        rng.set_word_pos(2 * index as u128);
        (rng.next_u64() as usize) & (count_of(&self.counts, user, kind) - 1)
    }

    pub fn key_bin(&self, user: usize, index: usize) -> usize {
        self.bin(user, BinKind::Key, index)
    }

    pub fn public_bin(&self, user: usize, index: usize) -> usize {
        self.bin(user, BinKind::Public, index)
    }

    /// Whole map for one user and kind, in sequence order.
    pub fn table(&self, user: usize, kind: BinKind) -> Vec<usize> {
        match &self.tables {
            Some(t) => t[stream_index(user, kind) as usize].iter().map(|&b| b as usize).collect(),
            None => generate(self.seed, user, kind, self.num_seqs(user), count_of(&self.counts, user, kind))
                .into_iter()
                .map(|b| b as usize)
                .collect(),
        }
    }
}

fn generate(seed: u64, user: usize, kind: BinKind, len: usize, count: usize) -> Vec<u32> {
    let mut rng = stream(seed, Domain::Binning, stream_index(user, kind));
    let mask = (count - 1) as u64;
    (0..len).map(|_| (rng.next_u64() & mask) as u32).collect()
}

/// Tabulated bin maps for `params`; fails when a source exceeds the cap.
pub fn sample_binning(params: &ProtocolParams, caps: &Caps) -> Result<BinningRealization> {
    let mut b = BinningRealization::lazy(params)?;
    let l1 = seq::count(b.alph_u[0], b.n, caps)?;
    let l2 = seq::count(b.alph_u[1], b.n, caps)?;
    let c = b.counts;
    b.tables = Some([
        generate(b.seed, 1, BinKind::Key, l1, c.w[0]),
        generate(b.seed, 1, BinKind::Public, l1, c.f[0]),
        generate(b.seed, 2, BinKind::Key, l2, c.w[1]),
        generate(b.seed, 2, BinKind::Public, l2, c.f[1]),
    ]);
    Ok(b)
}
