use serde::{Deserialize, Serialize};

use crate::channels::{AuxInput, MacWiretapSpec};
use crate::error::{Error, Result};

/// Key rates `R1, R2` and public-message rates `R1~, R2~`, in bits per symbol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rates {
    pub r1: f64,
    pub r2: f64,
    pub r1_pub: f64,
    pub r2_pub: f64,
}

impl Rates {
    pub fn new(r1: f64, r2: f64, r1_pub: f64, r2_pub: f64) -> Self {
        Rates { r1, r2, r1_pub, r2_pub }
    }

    pub fn key(&self, user: usize) -> f64 {
        if user == 1 {
            self.r1
        } else {
            self.r2
        }
    }

    pub fn public(&self, user: usize) -> f64 {
        if user == 1 {
            self.r1_pub
        } else {
            self.r2_pub
        }
    }

    pub fn validate(&self) -> Result<()> {
        for r in [self.r1, self.r2, self.r1_pub, self.r2_pub] {
            if !(r.is_finite() && r >= 0.0) {
                return Err(Error::InvalidParameter(format!("rate {r} must be finite and nonnegative")));
            }
        }
        Ok(())
    }
}

/// Largest supported bin-count exponent.
pub const MAX_BIN_BITS: u32 = 31;

/// `ceil(n * rate)`, ignoring representation error below 1e-9.
pub fn bin_bits(n: usize, rate: f64) -> Result<u32> {
    let e = (n as f64 * rate - 1e-9).ceil().max(0.0);
    if e > MAX_BIN_BITS as f64 {
        return Err(Error::InvalidParameter(format!(
            "rate {rate} at n = {n} needs 2^{e} bins, above 2^{MAX_BIN_BITS}"
        )));
    }
    Ok(e as u32)
}

/// Everything that determines one protocol instance.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolParams {
    pub n: usize,
    pub rates: Rates,
    pub seed: u64,
    pub aux: AuxInput,
    pub spec: MacWiretapSpec,
}

/// Bin counts `W~_j = 2^ceil(n R_j)` and `F~_j = 2^ceil(n R~_j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinCounts {
    pub w: [usize; 2],
    pub f: [usize; 2],
}

impl BinCounts {
    pub fn from_rates(n: usize, rates: &Rates) -> Result<Self> {
        rates.validate()?;
        let c = |r: f64| bin_bits(n, r).map(|e| 1usize << e);
        Ok(BinCounts {
            w: [c(rates.r1)?, c(rates.r2)?],
            f: [c(rates.r1_pub)?, c(rates.r2_pub)?],
        })
    }

    /// `W~_j F~_j`.
    pub fn user_total(&self, user: usize) -> usize {
        self.w[user - 1] * self.f[user - 1]
    }

    /// `W~_1 W~_2 F~_1 F~_2`.
    pub fn total(&self) -> usize {
        self.user_total(1) * self.user_total(2)
    }

    /// Rates actually realized, `log2(count) / n`.
    pub fn effective_rates(&self, n: usize) -> Rates {
        let r = |c: usize| (c as f64).log2() / n as f64;
        Rates::new(r(self.w[0]), r(self.w[1]), r(self.f[0]), r(self.f[1]))
    }
}

impl ProtocolParams {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameter("blocklength must be positive".into()));
        }
        self.rates.validate()?;
        self.spec.validate()?;
        self.aux.check_against(&self.spec)
    }

    pub fn counts(&self) -> Result<BinCounts> {
        BinCounts::from_rates(self.n, &self.rates)
    }
}
