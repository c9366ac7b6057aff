//! Exact distributions of `(W1, W2, F1, F2, Z)` induced by a bin map, a
//! source distribution and a wiretapper strategy.

use serde::{Deserialize, Serialize};

use super::params::BinCounts;
use super::realization::{BinKind, BinningRealization};
use crate::adversary::{ObservationModel, Strategy};
use crate::caps::Caps;
use crate::channels::{AuxInput, Joint, MacWiretapSpec};
use crate::error::{Error, Result};
use crate::info::Bits;
use crate::seq;

/// `P(w1, w2, f1, f2, z)` with `z` a compact observation index.
#[derive(Debug, Clone, PartialEq)]
pub struct InducedJoint {
    pub counts: BinCounts,
    pub z_size: usize,
    /// Row-major over `[W1, W2, F1, F2, Z]`.
    pub probs: Vec<f64>,
    /// Canonical `Z^n` index of each compact index.
    pub z_canonical: Vec<u128>,
}

/// `D(P_WFZ || unif x P_Z)` and `I(W1, W2; Z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LeakageValues {
    pub leakage: Bits,
    pub mi_wz: Bits,
}

/// The two sides of the chain-rule split of the leakage:
/// `total = conditional + first_user`, with
/// `conditional = E_Z D(P_{WF|Z} || P_{W1F1|Z} x unif_2)` and
/// `first_user = D(P_{W1F1Z} || unif_1 x P_Z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KlDecomposition {
    pub total: Bits,
    pub conditional: Bits,
    pub first_user: Bits,
}

fn plogq(p: f64, ratio: f64) -> f64 {
    if p > 0.0 {
        p * ratio.log2()
    } else {
        0.0
    }
}

impl InducedJoint {
    fn dims(&self) -> [usize; 5] {
        let c = &self.counts;
        [c.w[0], c.w[1], c.f[0], c.f[1], self.z_size]
    }

    #[inline]
    fn idx(&self, w1: usize, w2: usize, f1: usize, f2: usize, z: usize) -> usize {
        let [_, nw2, nf1, nf2, nz] = self.dims();
        (((w1 * nw2 + w2) * nf1 + f1) * nf2 + f2) * nz + z
    }

    /// Calls `f(w1, w2, f1, f2, z, p)` on every atom.
    fn for_each<F: FnMut(usize, usize, usize, usize, usize, f64)>(&self, mut f: F) {
        let [nw1, nw2, nf1, nf2, nz] = self.dims();
        let mut k = 0;
        for w1 in 0..nw1 {
            for w2 in 0..nw2 {
                for f1 in 0..nf1 {
                    for f2 in 0..nf2 {
                        for z in 0..nz {
                            f(w1, w2, f1, f2, z, self.probs[k]);
                            k += 1;
                        }
                    }
                }
            }
        }
    }

    pub fn as_joint(&self) -> Result<Joint> {
        Joint::with_tolerance(self.dims().to_vec(), self.probs.clone(), 1e-9)
    }

    pub fn z_marginal(&self) -> Vec<f64> {
        let mut pz = vec![0.0; self.z_size];
        for (k, &p) in self.probs.iter().enumerate() {
            pz[k % self.z_size] += p;
        }
        pz
    }

    /// `(canonical z, P(z))` for every compact index.
    pub fn z_marginal_canonical(&self) -> Vec<(u128, f64)> {
        self.z_canonical.iter().copied().zip(self.z_marginal()).collect()
    }

    /// `P(w1, w2, f1, f2)` flattened.
    pub fn wf_marginal(&self) -> Vec<f64> {
        self.probs.chunks(self.z_size).map(|c| c.iter().sum()).collect()
    }

    /// `D(P_WFZ || unif x P_Z) = log N - H(W, F | Z)`.
    pub fn leakage(&self) -> Bits {
        let pz = self.z_marginal();
        let n = self.counts.total() as f64;
        let mut d = 0.0;
        for (k, &p) in self.probs.iter().enumerate() {
            d += plogq(p, p * n / pz[k % self.z_size]);
        }
        d.max(0.0)
    }

    /// `I(W1, W2; Z)`.
    pub fn mi_wz(&self) -> Bits {
        let [nw1, nw2, _, _, nz] = self.dims();
        let mut pwz = vec![0.0; nw1 * nw2 * nz];
        self.for_each(|w1, w2, _, _, z, p| pwz[(w1 * nw2 + w2) * nz + z] += p);
        let pz = self.z_marginal();
        let mut pw = vec![0.0; nw1 * nw2];
        for (k, &p) in pwz.iter().enumerate() {
            pw[k / nz] += p;
        }
        let mut i = 0.0;
        for (k, &p) in pwz.iter().enumerate() {
            i += plogq(p, p / (pw[k / nz] * pz[k % nz]));
        }
        i.max(0.0)
    }

    pub fn leakage_values(&self) -> LeakageValues {
        LeakageValues {
            leakage: self.leakage(),
            mi_wz: self.mi_wz(),
        }
    }

    /// `V(P_{W1W2F1F2}, unif)`.
    pub fn tv_uniform(&self) -> f64 {
        let u = 1.0 / self.counts.total() as f64;
        0.5 * self.wf_marginal().iter().map(|p| (p - u).abs()).sum::<f64>()
    }

    /// `P(w_j, f_j)` flattened as `w * F~_j + f`.
    pub fn user_wf(&self, user: usize) -> Vec<f64> {
        let c = self.counts;
        let mut out = vec![0.0; c.user_total(user)];
        let nf = c.f[user - 1];
        self.for_each(|w1, w2, f1, f2, _, p| {
            let k = if user == 1 { w1 * nf + f1 } else { w2 * nf + f2 };
            out[k] += p;
        });
        out
    }

    /// `V(P_{W_jF_j}, unif_j)`.
    pub fn user_tv(&self, user: usize) -> f64 {
        let v = self.user_wf(user);
        let u = 1.0 / v.len() as f64;
        0.5 * v.iter().map(|p| (p - u).abs()).sum::<f64>()
    }

    pub fn kl_decomposition(&self) -> KlDecomposition {
        let c = self.counts;
        let (nw2, nf1, nf2, nz) = (c.w[1], c.f[0], c.f[1], self.z_size);
        // P(w1, f1, z)
        let mut p1z = vec![0.0; c.w[0] * nf1 * nz];
        self.for_each(|w1, _, f1, _, z, p| p1z[(w1 * nf1 + f1) * nz + z] += p);
        let pz = self.z_marginal();
        let n2 = (nw2 * nf2) as f64;
        let n1 = (c.w[0] * nf1) as f64;
        let mut conditional = 0.0;
        self.for_each(|w1, _, f1, _, z, p| {
            // P(wf|z) / (P(w1f1|z) / N2) = P(wfz) N2 / P(w1f1z)
            conditional += plogq(p, p * n2 / p1z[(w1 * nf1 + f1) * nz + z]);
        });
        let mut first_user = 0.0;
        for (k, &p) in p1z.iter().enumerate() {
            first_user += plogq(p, p * n1 / pz[k % nz]);
        }
        KlDecomposition {
            total: self.leakage(),
            conditional,
            first_user,
        }
    }
}

/// Exact induced joint for one strategy, enumerating every pair of source
/// sequences.
pub fn induced_joint(
    binning: &BinningRealization,
    strat: &Strategy,
    aux: &AuxInput,
    spec: &MacWiretapSpec,
    caps: &Caps,
) -> Result<InducedJoint> {
    check_match(binning, strat, aux)?;
    let obs = ObservationModel::new(strat, aux, spec)?;
    let n = binning.n;
    let p1 = seq::iid_probs(&aux.p_u1, n, caps)?;
    let p2 = seq::iid_probs(&aux.p_u2, n, caps)?;
    let z_size = obs.compact_size();
    let c = binning.counts;
    caps.check_atoms(z_size.saturating_mul(c.total() as u128))?;
    let z_size = z_size as usize;
    let (w1t, f1t) = (binning.table(1, BinKind::Key), binning.table(1, BinKind::Public));
    let (w2t, f2t) = (binning.table(2, BinKind::Key), binning.table(2, BinKind::Public));
    let mut j = InducedJoint {
        counts: c,
        z_size,
        probs: vec![0.0; c.total() * z_size],
        z_canonical: (0..z_size).map(|k| obs.canonical_of_compact(k)).collect(),
    };
    let (nu1, nu2) = (aux.alph_u1(), aux.alph_u2());
    let (mut d1, mut d2) = (vec![0; n], vec![0; n]);
    for (a, &pa) in p1.iter().enumerate() {
        if pa == 0.0 {
            continue;
        }
        seq::digits(a, nu1, &mut d1);
        for (b, &pb) in p2.iter().enumerate() {
            if pb == 0.0 {
                continue;
            }
            seq::digits(b, nu2, &mut d2);
            let base = j.idx(w1t[a], w2t[b], f1t[a], f2t[b], 0);
            let pab = pa * pb;
            let probs = &mut j.probs;
            obs.for_each_z(&d1, &d2, |z, q| probs[base + z] += pab * q);
        }
    }
    Ok(j)
}

fn check_match(binning: &BinningRealization, strat: &Strategy, aux: &AuxInput) -> Result<()> {
    if strat.n != binning.n {
        return Err(Error::DimensionMismatch(format!(
            "strategy for n = {} applied to a binning with n = {}",
            strat.n, binning.n
        )));
    }
    if binning.alph_u != [aux.alph_u1(), aux.alph_u2()] {
        return Err(Error::DimensionMismatch("binning and auxiliary alphabets differ".into()));
    }
    Ok(())
}

/// `P(w_j, f_j, a_j)` for one user, where `a_j` is the part of the
/// observation driven by user `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct UserPart {
    pub wf: usize,
    pub z_size: usize,
    /// Row-major over `[W_j F_j, A_j]`.
    pub probs: Vec<f64>,
}

impl UserPart {
    /// `log(W~F~) - H(W, F | A)`.
    fn leakage(&self) -> Bits {
        let mut pz = vec![0.0; self.z_size];
        for (k, &p) in self.probs.iter().enumerate() {
            pz[k % self.z_size] += p;
        }
        let n = self.wf as f64;
        let d: f64 = self
            .probs
            .iter()
            .enumerate()
            .map(|(k, &p)| plogq(p, p * n / pz[k % self.z_size]))
            .sum();
        d.max(0.0)
    }

    /// `I(W; A)` where `W = wf / nf`.
    fn mi_wz(&self, nf: usize) -> Bits {
        let nw = self.wf / nf;
        let nz = self.z_size;
        let mut pwz = vec![0.0; nw * nz];
        for (k, &p) in self.probs.iter().enumerate() {
            pwz[(k / nz) / nf * nz + k % nz] += p;
        }
        let mut pw = vec![0.0; nw];
        let mut pz = vec![0.0; nz];
        for (k, &p) in pwz.iter().enumerate() {
            pw[k / nz] += p;
            pz[k % nz] += p;
        }
        let i: f64 = pwz
            .iter()
            .enumerate()
            .map(|(k, &p)| plogq(p, p / (pw[k / nz] * pz[k % nz])))
            .sum();
        i.max(0.0)
    }
}

/// For the first and third models the induced joint is a product of one
/// factor per user, and both the leakage and `I(W; Z)` add over users.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitJoint {
    pub parts: [UserPart; 2],
    pub counts: BinCounts,
}

impl SplitJoint {
    pub fn leakage_values(&self) -> LeakageValues {
        LeakageValues {
            leakage: self.parts[0].leakage() + self.parts[1].leakage(),
            mi_wz: self.parts[0].mi_wz(self.counts.f[0]) + self.parts[1].mi_wz(self.counts.f[1]),
        }
    }
}

pub fn split_joint(
    binning: &BinningRealization,
    obs: &ObservationModel,
    aux: &AuxInput,
    caps: &Caps,
) -> Result<SplitJoint> {
    check_match(binning, &obs.strategy, aux)?;
    let n = binning.n;
    let c = binning.counts;
    let part = |user: usize| -> Result<UserPart> {
        let z_size = obs
            .user_size(user)
            .ok_or_else(|| Error::WrongModel("observation does not split by user".into()))?;
        let wf = c.user_total(user);
        caps.check_atoms((wf as u128).saturating_mul(z_size as u128))?;
        let p = seq::iid_probs(aux.p_u(user), n, caps)?;
        let wt = binning.table(user, BinKind::Key);
        let ft = binning.table(user, BinKind::Public);
        let nf = c.f[user - 1];
        let mut probs = vec![0.0; wf * z_size];
        let mut d = vec![0; n];
        for (a, &pa) in p.iter().enumerate() {
            if pa == 0.0 {
                continue;
            }
            seq::digits(a, aux.alph_u(user), &mut d);
            let base = (wt[a] * nf + ft[a]) * z_size;
            obs.for_each_user_z(user, &d, |z, q| probs[base + z] += pa * q);
        }
        Ok(UserPart { wf, z_size, probs })
    };
    Ok(SplitJoint {
        parts: [part(1)?, part(2)?],
        counts: c,
    })
}

/// Leakage values for one strategy, using the per-user product form when the
/// model allows it.
pub fn strategy_leakage(
    binning: &BinningRealization,
    strat: &Strategy,
    aux: &AuxInput,
    spec: &MacWiretapSpec,
    caps: &Caps,
) -> Result<LeakageValues> {
    let obs = ObservationModel::new(strat, aux, spec)?;
    if obs.split.is_some() {
        Ok(split_joint(binning, &obs, aux, caps)?.leakage_values())
    } else {
        Ok(induced_joint(binning, strat, aux, spec, caps)?.leakage_values())
    }
}
