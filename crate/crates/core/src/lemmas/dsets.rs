//! Exact probabilities of the self-information sets used by the binning
//! lemmas.
//!
//! The sources are i.i.d. and the wiretapper's channel is memoryless, so
//! every self-information is a sum of independent per-position terms. The
//! probabilities are computed by walking the product of per-position atoms.

use serde::{Deserialize, Serialize};

use super::params::LemmaParams;
use crate::adversary::{ObservationModel, Strategy};
use crate::caps::Caps;
use crate::channels::{AuxInput, MacWiretapSpec, Pmf};
use crate::error::Result;
use crate::info::Bits;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DSetKind {
    /// `-log p(u_j) > gamma_j`.
    Lemma1,
    /// `-log p(u_j | z) > gamma_j`.
    GammaJ,
    /// `-log p(u_i | u_j, z) > gamma_ij`, `i != j`.
    GammaIJ,
    /// Both of the above.
    DJ,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypicalReport {
    pub kind: DSetKind,
    /// Strategy label, empty for the source-only set.
    pub strategy: String,
    /// Probability of the set for user 1 and user 2.
    pub prob_in_d: [f64; 2],
    /// Required probability `1 - delta^2`.
    pub bound_rhs: f64,
    pub satisfied: bool,
}

/// Per-position atoms `(p, [s1, s2, s12, s21])` of the self-informations
/// `-log p(u1|z)`, `-log p(u2|z)`, `-log p(u1|u2,z)`, `-log p(u2|u1,z)`.
type Atom = (f64, [f64; 4]);

fn nlog(x: f64) -> f64 {
    if x >= 1.0 {
        0.0
    } else {
        -x.log2()
    }
}

fn position_atoms(obs: &ObservationModel, aux: &AuxInput, i: usize) -> Vec<Atom> {
    let l = &obs.letters[i];
    let (nu1, nu2) = (obs.nu[0], obs.nu[1]);
    let nz = l.codes.len();
    let (p1, p2) = (aux.p_u1.probs(), aux.p_u2.probs());
    let mut pz = vec![0.0; nz];
    let mut p1z = vec![0.0; nu1 * nz];
    let mut p2z = vec![0.0; nu2 * nz];
    for a in 0..nu1 {
        for b in 0..nu2 {
            for &(z, q) in &l.rows[a * nu2 + b] {
                let p = p1[a] * p2[b] * q;
                pz[z] += p;
                p1z[a * nz + z] += p;
                p2z[b * nz + z] += p;
            }
        }
    }
    let mut out = Vec::new();
    for a in 0..nu1 {
        for b in 0..nu2 {
            for &(z, q) in &l.rows[a * nu2 + b] {
                let p = p1[a] * p2[b] * q;
                if p <= 0.0 {
                    continue;
                }
                out.push((
                    p,
                    [
                        nlog(p1z[a * nz + z] / pz[z]),
                        nlog(p2z[b * nz + z] / pz[z]),
                        nlog(p / p2z[b * nz + z]),
                        nlog(p / p1z[a * nz + z]),
                    ],
                ));
            }
        }
    }
    out
}

/// Visits every sequence of atoms with its product probability and summed
/// values.
fn walk<const K: usize, F: FnMut(f64, &[f64; K])>(levels: &[Vec<(f64, [f64; K])>], f: &mut F) {
    fn rec<const K: usize, F: FnMut(f64, &[f64; K])>(
        levels: &[Vec<(f64, [f64; K])>],
        p: f64,
        acc: [f64; K],
        f: &mut F,
    ) {
        match levels.split_first() {
            None => f(p, &acc),
            Some((head, rest)) => {
                for (q, s) in head {
                    let mut next = acc;
                    for k in 0..K {
                        next[k] += s[k];
                    }
                    rec(rest, p * q, next, f);
                }
            }
        }
    }
    rec(levels, 1.0, [0.0; K], f);
}

fn check_walk<T>(levels: &[Vec<T>], caps: &Caps) -> Result<()> {
    let atoms = levels
        .iter()
        .fold(1u128, |acc, l| acc.saturating_mul(l.len() as u128));
    caps.check_atoms(atoms)
}

/// `P(-log p(U_j^n) > gamma)` for an i.i.d. source.
pub fn source_set_prob(p: &Pmf, n: usize, gamma: Bits, caps: &Caps) -> Result<f64> {
    let atoms: Vec<(f64, [f64; 1])> = p
        .probs()
        .iter()
        .filter(|&&q| q > 0.0)
        .map(|&q| (q, [nlog(q)]))
        .collect();
    let levels = vec![atoms; n];
    check_walk(&levels, caps)?;
    let mut inside = 0.0;
    walk(&levels, &mut |q, s: &[f64; 1]| {
        if s[0] > gamma {
            inside += q;
        }
    });
    Ok(inside.min(1.0))
}

/// Probabilities of the wiretap sets of `kind` for users 1 and 2 under `strat`.
pub fn wiretap_set_probs(
    kind: DSetKind,
    params: &LemmaParams,
    strat: &Strategy,
    aux: &AuxInput,
    spec: &MacWiretapSpec,
    caps: &Caps,
) -> Result<[f64; 2]> {
    let obs = ObservationModel::new(strat, aux, spec)?;
    let levels: Vec<Vec<Atom>> = (0..obs.n()).map(|i| position_atoms(&obs, aux, i)).collect();
    check_walk(&levels, caps)?;
    let g = [params.gamma1, params.gamma2];
    // user 1 pairs with -log p(u2|u1,z), user 2 with -log p(u1|u2,z)
    let gc = [params.gamma21, params.gamma12];
    let cond_idx = [3, 2];
    let mut inside = [0.0; 2];
    walk(&levels, &mut |q, s: &[f64; 4]| {
        for j in 0..2 {
            let a = s[j] > g[j];
            let b = s[cond_idx[j]] > gc[j];
            let hit = match kind {
                DSetKind::GammaJ => a,
                DSetKind::GammaIJ => b,
                DSetKind::DJ => a && b,
                DSetKind::Lemma1 => unreachable!("handled by source_set_prob"),
            };
            if hit {
                inside[j] += q;
            }
        }
    });
    Ok(inside.map(|x| x.min(1.0)))
}

/// Probability of the `kind` set per user, compared with `1 - delta^2`.
/// `strat` is ignored for [`DSetKind::Lemma1`].
pub fn dset_prob(
    kind: DSetKind,
    params: &LemmaParams,
    strat: &Strategy,
    aux: &AuxInput,
    spec: &MacWiretapSpec,
    caps: &Caps,
) -> Result<TypicalReport> {
    params.validate()?;
    let (prob_in_d, label) = match kind {
        DSetKind::Lemma1 => (
            [
                source_set_prob(&aux.p_u1, strat.n, params.gamma1, caps)?,
                source_set_prob(&aux.p_u2, strat.n, params.gamma2, caps)?,
            ],
            String::new(),
        ),
        _ => (wiretap_set_probs(kind, params, strat, aux, spec, caps)?, strat.label()),
    };
    let bound_rhs = 1.0 - params.delta * params.delta;
    Ok(TypicalReport {
        kind,
        strategy: label,
        prob_in_d,
        bound_rhs,
        satisfied: prob_in_d.iter().all(|&p| p >= bound_rhs),
    })
}

/// `P(-log p(U^n) <= threshold)` summed over type classes, without
/// enumerating sequences.
pub fn atypical_prob_by_types(p: &Pmf, n: usize, threshold: Bits) -> f64 {
    let probs: Vec<f64> = p.probs().iter().copied().filter(|&q| q > 0.0).collect();
    let k = probs.len();
    let ln_fact: Vec<f64> = (0..=n)
        .scan(0.0, |acc, i| {
            if i > 0 {
                *acc += (i as f64).ln();
            }
            Some(*acc)
        })
        .collect();
    let mut counts = vec![0usize; k];
    let mut total = 0.0;
    compositions(&mut counts, 0, n, &mut |c| {
        let info: f64 = c.iter().zip(&probs).map(|(&m, &q)| m as f64 * nlog(q)).sum();
        if info <= threshold {
            let ln_mult = ln_fact[n] - c.iter().map(|&m| ln_fact[m]).sum::<f64>();
            let ln_p: f64 = c.iter().zip(&probs).map(|(&m, &q)| m as f64 * q.ln()).sum();
            total += (ln_mult + ln_p).exp();
        }
    });
    total.min(1.0)
}

fn compositions<F: FnMut(&[usize])>(c: &mut Vec<usize>, i: usize, left: usize, f: &mut F) {
    if c.is_empty() {
        return;
    }
    if i == c.len() - 1 {
        c[i] = left;
        f(c);
        return;
    }
    for m in 0..=left {
        c[i] = m;
        compositions(c, i + 1, left - m, f);
    }
}

/// Exact atypicality probabilities `P(-log p(U^n) <= (1 - eps) n H(U))` over
/// `ns`, with a least-squares fit of their base-2 logarithm against `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayProfile {
    pub ns: Vec<usize>,
    pub probs: Vec<f64>,
    /// Fitted exponent (slope of `log2 P` per symbol) and its 95% half-width.
    pub slope: f64,
    pub slope_half_width: f64,
    pub intercept: f64,
    pub nonincreasing: bool,
}

pub fn atypical_decay(p: &Pmf, eps: f64, ns: &[usize]) -> DecayProfile {
    let h = crate::info::entropy(p);
    let probs: Vec<f64> = ns
        .iter()
        .map(|&n| atypical_prob_by_types(p, n, (1.0 - eps) * n as f64 * h))
        .collect();
    let fit: Vec<(f64, f64)> = ns
        .iter()
        .zip(&probs)
        .filter(|(_, &q)| q > 0.0)
        .map(|(&n, &q)| (n as f64, q.log2()))
        .collect();
    let (slope, intercept, half) = if fit.len() >= 3 {
        let (x, y): (Vec<f64>, Vec<f64>) = fit.into_iter().unzip();
        crate::stats::linear_fit(&x, &y)
    } else {
        (f64::NAN, f64::NAN, f64::NAN)
    };
    DecayProfile {
        ns: ns.to_vec(),
        nonincreasing: probs.windows(2).all(|w| w[1] <= w[0] + 1e-15),
        probs,
        slope,
        slope_half_width: half,
        intercept,
    }
}
