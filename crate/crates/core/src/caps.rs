//! Enumeration limits shared by every exact computation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper limits on the size of exhaustive enumerations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Maximum number of wiretapper strategies enumerated.
    pub max_strategies: u64,
    /// Maximum number of atoms in any tabulated distribution.
    pub max_atoms: u64,
    /// Maximum number of source sequences |U_j|^n per user for exact tabulation.
    pub max_source_seqs: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_strategies: 1_000_000,
            max_atoms: 10_000_000,
            max_source_seqs: 4096,
        }
    }
}

impl Caps {
    pub fn check_strategies(&self, required: u128) -> Result<()> {
        check("strategy enumeration", required, self.max_strategies)
    }

    pub fn check_atoms(&self, required: u128) -> Result<()> {
        check("distribution tabulation", required, self.max_atoms)
    }

    pub fn check_source(&self, required: u128) -> Result<()> {
        check("source sequence tabulation", required, self.max_source_seqs)
    }
}

fn check(what: &'static str, required: u128, cap: u64) -> Result<()> {
    if required > cap as u128 {
        Err(Error::CapExceeded {
            what,
            required,
            cap: cap as u128,
        })
    } else {
        Ok(())
    }
}

/// `base^exp` as u128, saturating on overflow.
pub fn pow_sat(base: usize, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}
