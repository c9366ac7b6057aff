//! End-to-end protocol runs: exact leakage for every strategy and a
//! Monte-Carlo estimate of the decoding error.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::decode::Decoder;
use super::joint::{strategy_leakage, LeakageValues};
use super::params::{BinCounts, ProtocolParams, Rates};
use super::realization::{sample_binning, BinKind, BinningRealization};
use crate::adversary::{enumerate_strategies, mu_for, Strategy};
use crate::caps::Caps;
use crate::channels::{concat_aux, AuxInput, MacWiretapSpec, Pmf};
use crate::error::Result;
use crate::rng::{stream, Domain, CHUNK};
use crate::seq;
use crate::stats::{wilson, Interval};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyLeakage {
    pub strategy: Strategy,
    pub label: String,
    pub leakage: f64,
    pub mi_wz: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeakageMax {
    pub strategy: Strategy,
    pub leakage: f64,
    pub mi_wz: f64,
    /// Largest `I(W; Z)` over strategies (possibly for another strategy).
    pub max_mi_wz: f64,
    pub table: Vec<StrategyLeakage>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorEstimate {
    pub trials: u64,
    pub errors: u64,
    pub error_prob: f64,
    pub ci95: Interval,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolRun {
    pub n: usize,
    pub mu: usize,
    pub counts: BinCounts,
    pub effective_rates: Rates,
    pub error: ErrorEstimate,
    pub leakage_by_strategy: Vec<StrategyLeakage>,
    pub max_leakage: StrategyLeakage,
    pub tv_uniform: f64,
}

/// Exact leakage for every strategy with `mu` taps, in enumeration order,
/// and the first maximizer.
pub fn leakage_max(
    binning: &BinningRealization,
    aux: &AuxInput,
    spec: &MacWiretapSpec,
    mu: usize,
    caps: &Caps,
) -> Result<LeakageMax> {
    let strategies: Vec<Strategy> = enumerate_strategies(spec.model, binning.n, mu, caps)?.collect();
    let values: Vec<LeakageValues> = strategies
        .par_iter()
        .map(|s| strategy_leakage(binning, s, aux, spec, caps))
        .collect::<Result<_>>()?;
    let table: Vec<StrategyLeakage> = strategies
        .into_iter()
        .zip(values)
        .map(|(s, v)| StrategyLeakage {
            label: s.label(),
            strategy: s,
            leakage: v.leakage,
            mi_wz: v.mi_wz,
        })
        .collect();
    let best = table
        .iter()
        .fold(&table[0], |acc, x| if x.leakage > acc.leakage { x } else { acc });
    Ok(LeakageMax {
        strategy: best.strategy.clone(),
        leakage: best.leakage,
        mi_wz: best.mi_wz,
        max_mi_wz: table.iter().map(|t| t.mi_wz).fold(0.0, f64::max),
        table: table.clone(),
    })
}

/// `V(P_{W1W2F1F2}, unif)` from the two per-user bin distributions.
pub fn tv_uniform(binning: &BinningRealization, aux: &AuxInput, caps: &Caps) -> Result<f64> {
    let parts = [user_wf(binning, aux, 1, caps)?, user_wf(binning, aux, 2, caps)?];
    let u = 1.0 / binning.counts.total() as f64;
    let mut tv = 0.0;
    for &a in &parts[0] {
        for &b in &parts[1] {
            tv += (a * b - u).abs();
        }
    }
    Ok(0.5 * tv)
}

/// `P(w_j, f_j)` flattened as `w * F~_j + f`.
pub fn user_wf(binning: &BinningRealization, aux: &AuxInput, user: usize, caps: &Caps) -> Result<Vec<f64>> {
    let p = seq::iid_probs(aux.p_u(user), binning.n, caps)?;
    let c = binning.counts;
    let nf = c.f[user - 1];
    let wt = binning.table(user, BinKind::Key);
    let ft = binning.table(user, BinKind::Public);
    let mut out = vec![0.0; c.user_total(user)];
    for (a, &pa) in p.iter().enumerate() {
        out[wt[a] * nf + ft[a]] += pa;
    }
    Ok(out)
}

/// `V(P_{W_jF_j}, unif_j)`.
pub fn user_tv(binning: &BinningRealization, aux: &AuxInput, user: usize, caps: &Caps) -> Result<f64> {
    let v = user_wf(binning, aux, user, caps)?;
    let u = 1.0 / v.len() as f64;
    Ok(0.5 * v.iter().map(|p| (p - u).abs()).sum::<f64>())
}

fn draw<R: Rng + ?Sized>(rng: &mut R, p: &Pmf) -> usize {
    let r: f64 = rng.random();
    let mut acc = 0.0;
    for (i, &q) in p.probs().iter().enumerate() {
        acc += q;
        if r < acc {
            return i;
        }
    }
    // rounding left a sliver above the cumulative sum: take the last atom with mass
    p.probs().iter().rposition(|&q| q > 0.0).unwrap_or(0)
}

/// Monte-Carlo decoding error over `trials` source/channel draws, split into
/// chunks of [`CHUNK`] trials with one random stream per chunk.
pub fn estimate_error(
    binning: &BinningRealization,
    aux: &AuxInput,
    spec: &MacWiretapSpec,
    trials: u64,
    seed: u64,
    caps: &Caps,
) -> Result<ErrorEstimate> {
    let dec = Decoder::new(binning, aux, spec, caps)?;
    let k = concat_aux(aux, spec)?;
    let n = binning.n;
    let (nu1, nu2) = (aux.alph_u1(), aux.alph_u2());
    let chunks = trials.div_ceil(CHUNK);
    let errors: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| -> Result<u64> {
            let mut rng = stream(seed, Domain::Decoding, c);
            let m = CHUNK.min(trials - c * CHUNK);
            let (mut u1, mut u2, mut y) = (vec![0; n], vec![0; n], vec![0; n]);
            let mut errs = 0;
            for _ in 0..m {
                for i in 0..n {
                    u1[i] = draw(&mut rng, &aux.p_u1);
                    u2[i] = draw(&mut rng, &aux.p_u2);
                    y[i] = draw(&mut rng, k.row(u1[i] * nu2 + u2[i]));
                }
                let (a, b) = (seq::index(&u1, nu1), seq::index(&u2, nu2));
                let (f1, f2) = (binning.public_bin(1, a), binning.public_bin(2, b));
                if dec.decode_indices(&y, f1, f2)? != (a, b) {
                    errs += 1;
                }
            }
            Ok(errs)
        })
        .collect::<Result<Vec<u64>>>()?
        .into_iter()
        .sum();
    Ok(ErrorEstimate {
        trials,
        errors,
        error_prob: if trials == 0 { 0.0 } else { errors as f64 / trials as f64 },
        ci95: wilson(errors, trials),
    })
}

/// Samples the binning from `params.seed`, tabulates the leakage of every
/// strategy with `floor(alpha n)` taps exactly and estimates the decoding
/// error from `trials` draws.
pub fn run_protocol(params: &ProtocolParams, trials: u64, caps: &Caps) -> Result<ProtocolRun> {
    let binning = sample_binning(params, caps)?;
    let mu = mu_for(params.spec.alpha, params.n);
    let lm = leakage_max(&binning, &params.aux, &params.spec, mu, caps)?;
    let error = estimate_error(&binning, &params.aux, &params.spec, trials, params.seed, caps)?;
    let max_leakage = lm
        .table
        .iter()
        .find(|t| t.strategy == lm.strategy)
        .cloned()
        .expect("maximizer comes from the table");
    Ok(ProtocolRun {
        n: params.n,
        mu,
        counts: binning.counts,
        effective_rates: binning.counts.effective_rates(params.n),
        error,
        tv_uniform: tv_uniform(&binning, &params.aux, caps)?,
        leakage_by_strategy: lm.table,
        max_leakage,
    })
}
