use serde::{Deserialize, Serialize};

use super::entropy::{worst_closed_form, LetterEntropies};
use crate::binning::BinCounts;
use crate::channels::Model;
use crate::error::{Error, Result};
use crate::info::{binary_entropy, Bits};

/// Which `eps~` enters the threshold choice.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EpsConvention {
    /// One common `eps~ = max_j eps~_j` for both users.
    #[default]
    Max,
    /// User `j` uses its own `eps~_j`.
    PerUser,
}

/// Thresholds and slack parameters of the two binning lemmas.
///
/// `gamma12` bounds `-log p(u1 | u2, z)` and `gamma21` bounds
/// `-log p(u2 | u1, z)`. `eps~` is derived from the bin counts on demand.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemmaParams {
    pub gamma1: Bits,
    pub gamma2: Bits,
    pub gamma12: Bits,
    pub gamma21: Bits,
    pub delta: f64,
    pub epsilon: f64,
    #[serde(default)]
    pub convention: EpsConvention,
}

impl LemmaParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta < 0.5) {
            return Err(Error::InvalidParameter(format!("delta = {} outside (0, 1/2)", self.delta)));
        }
        if !(0.0..=1.0).contains(&self.epsilon) {
            return Err(Error::InvalidParameter(format!("epsilon = {} outside [0, 1]", self.epsilon)));
        }
        let g = [self.gamma1, self.gamma2, self.gamma12, self.gamma21];
        if g.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("thresholds must be finite".into()));
        }
        Ok(())
    }

    /// `gamma_j`.
    pub fn gamma(&self, user: usize) -> Bits {
        if user == 1 {
            self.gamma1
        } else {
            self.gamma2
        }
    }

    /// Threshold on `-log p(u_i | u_j, z)` with `i != j`, paired with user `j`.
    pub fn gamma_cond(&self, user: usize) -> Bits {
        if user == 1 {
            self.gamma21
        } else {
            self.gamma12
        }
    }

    /// `eps~_j = eps + (delta + delta^2) log2(W~_j F~_j) + H_b(delta^2)`.
    pub fn eps_tilde_per_user(&self, counts: &BinCounts) -> [f64; 2] {
        eps_tilde_per_user(self.epsilon, self.delta, counts)
    }

    /// `max_j eps~_j`.
    pub fn eps_tilde(&self, counts: &BinCounts) -> f64 {
        let e = self.eps_tilde_per_user(counts);
        e[0].max(e[1])
    }

    /// Violation threshold `2 eps~` of the leakage event.
    pub fn threshold(&self, counts: &BinCounts) -> f64 {
        2.0 * self.eps_tilde(counts)
    }
}

pub fn eps_tilde_per_user(epsilon: f64, delta: f64, counts: &BinCounts) -> [f64; 2] {
    let d2 = delta * delta;
    let hb = binary_entropy(d2.clamp(0.0, 1.0)).unwrap_or(0.0);
    [1, 2].map(|j| epsilon + (delta + d2) * (counts.user_total(j) as f64).log2() + hb)
}

/// Thresholds with slack `s_j`: `gamma_j = (1 - s_j) min_S H(U_j|Z_S)` and
/// `gamma_ij = (1 - s_j) min_S H(U_i|U_j,Z_S)`, using the closed forms.
pub fn slack_gammas(le: &LetterEntropies, model: Model, n: usize, mu: usize, slack: [f64; 2]) -> [Bits; 4] {
    let w = worst_closed_form(le, model, n, mu);
    [
        (1.0 - slack[0]) * w.h_u1_z,
        (1.0 - slack[1]) * w.h_u2_z,
        // gamma12 belongs to user 2's set
        (1.0 - slack[1]) * w.h_u1_u2z,
        (1.0 - slack[0]) * w.h_u2_u1z,
    ]
}

/// Parameters with thresholds set from `eps~` under the chosen convention.
#[allow(clippy::too_many_arguments)]
pub fn proof_params(
    le: &LetterEntropies,
    model: Model,
    n: usize,
    mu: usize,
    counts: &BinCounts,
    epsilon: f64,
    delta: f64,
    convention: EpsConvention,
) -> Result<LemmaParams> {
    let per = eps_tilde_per_user(epsilon, delta, counts);
    let slack = match convention {
        EpsConvention::Max => [per[0].max(per[1]); 2],
        EpsConvention::PerUser => per,
    };
    let g = slack_gammas(le, model, n, mu, slack);
    let p = LemmaParams {
        gamma1: g[0],
        gamma2: g[1],
        gamma12: g[2],
        gamma21: g[3],
        delta,
        epsilon,
        convention,
    };
    p.validate()?;
    Ok(p)
}

/// Source-only thresholds `gamma_j = n (1 - eps_j) H(U_j)`.
pub fn source_gammas(le: &LetterEntropies, n: usize, eps: [f64; 2]) -> [Bits; 2] {
    [0, 1].map(|j| n as f64 * (1.0 - eps[j]) * le.h_u[j])
}
