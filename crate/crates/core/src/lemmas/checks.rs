//! Monte-Carlo checks of the two binning lemmas over independent binning
//! draws. Every distribution inside a draw is exact; only the binning is
//! random.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dsets::{dset_prob, source_set_prob, DSetKind};
use super::params::LemmaParams;
use crate::adversary::{enumerate_strategies, strategy_count, ZAlphabet};
use crate::binning::{leakage_max, sample_binning, tv_uniform, user_tv, BinCounts, ProtocolParams, Rates};
use crate::caps::Caps;
use crate::channels::{AuxInput, MacWiretapSpec};
use crate::error::{Error, Result};
use crate::info::Bits;
use crate::rng::{derive_seed, Domain};
use crate::stats::{mean_ci, wilson, Interval};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundStatus {
    Satisfied,
    Violated,
    /// The right-hand side is at least the largest value the left-hand side
    /// can take, so the inequality holds trivially.
    Vacuous,
    /// The lemma's hypothesis fails; no claim is made.
    PreconditionFailed,
}

impl BoundStatus {
    /// True unless the inequality was observed to fail.
    pub fn holds(self) -> bool {
        matches!(self, BoundStatus::Satisfied | BoundStatus::Vacuous)
    }
}

/// One binning setup shared by the lemma checks.
#[derive(Debug, Clone, PartialEq)]
pub struct DrawSetup {
    pub n: usize,
    pub rates: Rates,
    pub aux: AuxInput,
    pub spec: MacWiretapSpec,
    pub seed: u64,
}

impl DrawSetup {
    /// Parameters of draw `d`, with its own derived seed.
    pub fn draw(&self, d: u64) -> ProtocolParams {
        ProtocolParams {
            n: self.n,
            rates: self.rates,
            seed: derive_seed(self.seed, Domain::Draws, d),
            aux: self.aux.clone(),
            spec: self.spec.clone(),
        }
    }

    pub fn counts(&self) -> Result<BinCounts> {
        BinCounts::from_rates(self.n, &self.rates)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma1Report {
    pub n: usize,
    pub counts: BinCounts,
    pub gamma: [Bits; 2],
    pub draws: u64,
    pub mean_tv: f64,
    pub ci95: Interval,
    pub max_tv: f64,
    /// `P(U_j not in D_gamma_j)` per user.
    pub atypical: [f64; 2],
    pub rhs: f64,
    /// Draws where `V(P_WF, unif) <= V(P_W1F1, unif1) + V(P_W2F2, unif2)`.
    pub triangle_holds: u64,
    pub status: BoundStatus,
    pub satisfied: bool,
}

/// Right-hand side `sum_j P(U_j not in D_gamma_j) + sqrt(W~_j F~_j 2^-gamma_j) / 2`.
pub fn lemma1_rhs(aux: &AuxInput, n: usize, counts: &BinCounts, gamma: [Bits; 2], caps: &Caps) -> Result<([f64; 2], f64)> {
    let mut atyp = [0.0; 2];
    let mut rhs = 0.0;
    for j in 0..2 {
        atyp[j] = 1.0 - source_set_prob(aux.p_u(j + 1), n, gamma[j], caps)?;
        rhs += atyp[j] + 0.5 * (counts.user_total(j + 1) as f64 * (-gamma[j]).exp2()).sqrt();
    }
    Ok((atyp, rhs))
}

pub fn lemma1_check(setup: &DrawSetup, gamma: [Bits; 2], draws: u64, caps: &Caps) -> Result<Lemma1Report> {
    if draws == 0 {
        return Err(Error::InvalidParameter("at least one binning draw is needed".into()));
    }
    let counts = setup.counts()?;
    let (atypical, rhs) = lemma1_rhs(&setup.aux, setup.n, &counts, gamma, caps)?;
    let per_draw: Vec<(f64, bool)> = (0..draws)
        .into_par_iter()
        .map(|d| {
            let b = sample_binning(&setup.draw(d), caps)?;
            let tv = tv_uniform(&b, &setup.aux, caps)?;
            let sum = user_tv(&b, &setup.aux, 1, caps)? + user_tv(&b, &setup.aux, 2, caps)?;
            Ok((tv, tv <= sum + 1e-12))
        })
        .collect::<Result<_>>()?;
    let tvs: Vec<f64> = per_draw.iter().map(|x| x.0).collect();
    let (mean_tv, ci95) = mean_ci(&tvs);
    let status = if rhs >= 1.0 {
        BoundStatus::Vacuous
    } else if mean_tv <= rhs {
        BoundStatus::Satisfied
    } else {
        BoundStatus::Violated
    };
    Ok(Lemma1Report {
        n: setup.n,
        counts,
        gamma,
        draws,
        mean_tv,
        ci95,
        max_tv: tvs.iter().copied().fold(0.0, f64::max),
        atypical,
        rhs,
        triangle_holds: per_draw.iter().filter(|x| x.1).count() as u64,
        status,
        satisfied: status.holds(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma2Report {
    pub n: usize,
    pub mu: usize,
    pub counts: BinCounts,
    pub params: LemmaParams,
    pub eps_tilde: f64,
    pub threshold: Bits,
    /// Smallest `P(D_j^S)` over strategies, per user.
    pub min_prob_in_d: [f64; 2],
    pub precondition: bool,
    pub num_strategies: u128,
    /// `log2` of the right-hand side (may exceed 0 when vacuous).
    pub log2_rhs: f64,
    pub rhs: f64,
    pub draws: u64,
    pub violations: u64,
    pub frequency: f64,
    pub ci95: Interval,
    pub max_leakage: Bits,
    pub status: BoundStatus,
    pub satisfied: bool,
}

fn ln_sum_exp(a: f64, b: f64) -> f64 {
    let m = a.max(b);
    if m == f64::NEG_INFINITY {
        m
    } else {
        m + ((a - m).exp() + (b - m).exp()).ln()
    }
}

/// Natural log of `|S| |Z|^n min_{(i,j)} { exp(-e^2 (1-d) 2^g_j / (3 W~_j F~_j))
/// + exp(-e^2 (1-d) 2^g_ij / (3 W~_i F~_i)) }`.
pub fn lemma2_ln_rhs(params: &LemmaParams, counts: &BinCounts, num_strategies: u128, z_size: usize, n: usize) -> f64 {
    let c = params.epsilon * params.epsilon * (1.0 - params.delta) / 3.0;
    let term = |gamma: f64, user: usize| -c * gamma.exp2() / counts.user_total(user) as f64;
    // (i, j) = (2, 1): user 1's set; (1, 2): user 2's set
    let order21 = ln_sum_exp(term(params.gamma1, 1), term(params.gamma21, 2));
    let order12 = ln_sum_exp(term(params.gamma2, 2), term(params.gamma12, 1));
    (num_strategies as f64).ln() + n as f64 * (z_size as f64).ln() + order21.min(order12)
}

pub fn lemma2_check(setup: &DrawSetup, params: &LemmaParams, mu: usize, draws: u64, caps: &Caps) -> Result<Lemma2Report> {
    params.validate()?;
    if draws == 0 {
        return Err(Error::InvalidParameter("at least one binning draw is needed".into()));
    }
    let spec = &setup.spec;
    let counts = setup.counts()?;
    let strategies: Vec<_> = enumerate_strategies(spec.model, setup.n, mu, caps)?.collect();
    let reports = strategies
        .par_iter()
        .map(|s| dset_prob(DSetKind::DJ, params, s, &setup.aux, spec, caps))
        .collect::<Result<Vec<_>>>()?;
    let min_prob = [0, 1].map(|j| reports.iter().map(|r| r.prob_in_d[j]).fold(1.0f64, f64::min));
    let precondition = reports.iter().all(|r| r.satisfied);
    let num_strategies = strategy_count(spec.model, setup.n, mu);
    let z = ZAlphabet::for_spec(spec)?.size();
    let ln_rhs = lemma2_ln_rhs(params, &counts, num_strategies, z, setup.n);
    let rhs = ln_rhs.exp();
    let eps_tilde = params.eps_tilde(&counts);
    let threshold = params.threshold(&counts);
    let mut report = Lemma2Report {
        n: setup.n,
        mu,
        counts,
        params: *params,
        eps_tilde,
        threshold,
        min_prob_in_d: min_prob,
        precondition,
        num_strategies,
        log2_rhs: ln_rhs / std::f64::consts::LN_2,
        rhs,
        draws: 0,
        violations: 0,
        frequency: 0.0,
        ci95: wilson(0, 0),
        max_leakage: 0.0,
        status: BoundStatus::PreconditionFailed,
        satisfied: false,
    };
    if !precondition {
        return Ok(report);
    }
    let leaks: Vec<f64> = (0..draws)
        .into_par_iter()
        .map(|d| {
            let b = sample_binning(&setup.draw(d), caps)?;
            Ok(leakage_max(&b, &setup.aux, spec, mu, caps)?.leakage)
        })
        .collect::<Result<_>>()?;
    let violations = leaks.iter().filter(|&&l| l >= threshold).count() as u64;
    let frequency = violations as f64 / draws as f64;
    report.draws = draws;
    report.violations = violations;
    report.frequency = frequency;
    report.ci95 = wilson(violations, draws);
    report.max_leakage = leaks.iter().copied().fold(0.0, f64::max);
    report.status = if rhs >= 1.0 {
        BoundStatus::Vacuous
    } else if frequency <= rhs {
        BoundStatus::Satisfied
    } else {
        BoundStatus::Violated
    };
    report.satisfied = report.status.holds();
    Ok(report)
}
