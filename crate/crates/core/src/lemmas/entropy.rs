//! Conditional entropies of the sources given the wiretapper's observation:
//! closed forms from single-letter quantities and exact n-letter enumeration.

use serde::{Deserialize, Serialize};

use crate::adversary::{enumerate_strategies, ObservationModel, Strategy};
use crate::caps::Caps;
use crate::channels::{joint_full, var, AuxInput, Joint, MacWiretapSpec, Model};
use crate::error::{Error, Result};
use crate::info::{cond_entropy, entropy_of, joint_entropy, Bits, EntropyAcc};
use crate::seq;

/// `H(U1|Z)`, `H(U2|Z)`, `H(U1|U2,Z)`, `H(U2|U1,Z)` for one strategy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyValues {
    pub h_u1_z: Bits,
    pub h_u2_z: Bits,
    pub h_u1_u2z: Bits,
    pub h_u2_u1z: Bits,
}

impl EntropyValues {
    pub fn as_array(&self) -> [Bits; 4] {
        [self.h_u1_z, self.h_u2_z, self.h_u1_u2z, self.h_u2_u1z]
    }

    fn from_array(a: [Bits; 4]) -> Self {
        EntropyValues {
            h_u1_z: a[0],
            h_u2_z: a[1],
            h_u1_u2z: a[2],
            h_u2_u1z: a[3],
        }
    }

    pub fn max_abs_diff(&self, other: &EntropyValues) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Value of `H(U_j|Z)` (`given_other = false`) or `H(U_i|U_j,Z)` with
    /// `i = user` (`given_other = true`).
    pub fn get(&self, user: usize, given_other: bool) -> Bits {
        match (user, given_other) {
            (1, false) => self.h_u1_z,
            (2, false) => self.h_u2_z,
            (1, true) => self.h_u1_u2z,
            _ => self.h_u2_u1z,
        }
    }
}

/// Single-letter entropies the closed forms are built from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LetterEntropies {
    /// `H(U_j)`.
    pub h_u: [Bits; 2],
    /// `H(U_j|X_j)`.
    pub h_u_x: [Bits; 2],
    /// `H(U_j|X1+X2)` (second model only).
    pub h_u_s: Option<[Bits; 2]>,
    /// `H(U_i|U_j,X1+X2)` indexed by `i` (second model only).
    pub h_u_us: Option<[Bits; 2]>,
    /// `H(U_j|V)` (generalized model only).
    pub h_u_v: Option<[Bits; 2]>,
    /// `H(U_i|U_j,V)` indexed by `i` (generalized model only).
    pub h_u_uv: Option<[Bits; 2]>,
}

const U: [usize; 2] = [var::U1, var::U2];
const X: [usize; 2] = [var::X1, var::X2];

fn with_sum(j: &Joint, spec: &MacWiretapSpec) -> Result<(Joint, usize)> {
    let js = j.with_derived(&[var::X1, var::X2], spec.alph_sum(), |x| x[0] + x[1])?;
    let s = js.num_vars() - 1;
    Ok((js, s))
}

impl LetterEntropies {
    pub fn new(aux: &AuxInput, spec: &MacWiretapSpec) -> Result<Self> {
        let j = joint_full(aux, spec)?;
        let h_u = [joint_entropy(&j, &[U[0]])?, joint_entropy(&j, &[U[1]])?];
        let h_u_x = [cond_entropy(&j, &[U[0]], &[X[0]])?, cond_entropy(&j, &[U[1]], &[X[1]])?];
        let (mut h_u_s, mut h_u_us, mut h_u_v, mut h_u_uv) = (None, None, None, None);
        match spec.model {
            Model::Model2 => {
                let (js, s) = with_sum(&j, spec)?;
                h_u_s = Some([cond_entropy(&js, &[U[0]], &[s])?, cond_entropy(&js, &[U[1]], &[s])?]);
                h_u_us = Some([
                    cond_entropy(&js, &[U[0]], &[U[1], s])?,
                    cond_entropy(&js, &[U[1]], &[U[0], s])?,
                ]);
            }
            Model::Generalized => {
                let v = var::V;
                h_u_v = Some([cond_entropy(&j, &[U[0]], &[v])?, cond_entropy(&j, &[U[1]], &[v])?]);
                h_u_uv = Some([
                    cond_entropy(&j, &[U[0]], &[U[1], v])?,
                    cond_entropy(&j, &[U[1]], &[U[0], v])?,
                ]);
            }
            _ => {}
        }
        Ok(LetterEntropies {
            h_u,
            h_u_x,
            h_u_s,
            h_u_us,
            h_u_v,
            h_u_uv,
        })
    }
}

/// Closed forms for a strategy with `mu_j` taps on user `j` (first model) or
/// `mu` taps in total (other models), at blocklength `n`.
pub fn closed_form(le: &LetterEntropies, model: Model, n: usize, strat: &Strategy) -> EntropyValues {
    let nf = n as f64;
    let mu = strat.mu() as f64;
    let mut out = [0.0; 4];
    for j in 0..2 {
        let i = 1 - j;
        let (hz, hcond) = match model {
            Model::Model1 => {
                let mj = strat.taps_on(j as u8 + 1) as f64;
                let mi = strat.taps_on(i as u8 + 1) as f64;
                (
                    mj * le.h_u_x[j] + (nf - mj) * le.h_u[j],
                    mi * le.h_u_x[i] + (nf - mi) * le.h_u[i],
                )
            }
            Model::Model2 => {
                let s = le.h_u_s.expect("second-model entropies");
                let us = le.h_u_us.expect("second-model entropies");
                (mu * s[j] + (nf - mu) * le.h_u[j], mu * us[i] + (nf - mu) * le.h_u[i])
            }
            Model::Model3 => (
                mu * le.h_u_x[j] + (nf - mu) * le.h_u[j],
                mu * le.h_u_x[i] + (nf - mu) * le.h_u[i],
            ),
            Model::Generalized => {
                let v = le.h_u_v.expect("generalized entropies");
                let uv = le.h_u_uv.expect("generalized entropies");
                (mu * le.h_u_x[j] + (nf - mu) * v[j], mu * le.h_u_x[i] + (nf - mu) * uv[i])
            }
        };
        out[j] = hz;
        // H(U_i | U_j, Z) is stored under i
        out[2 + i] = hcond;
    }
    EntropyValues::from_array(out)
}

fn ent_table(t: &[f64]) -> f64 {
    entropy_of(t).max(0.0)
}

/// Exact entropies by enumerating every `(u1^n, u2^n, z)`.
pub fn brute_force(obs: &ObservationModel, aux: &AuxInput, caps: &Caps) -> Result<EntropyValues> {
    let n = obs.n();
    let p1 = seq::iid_probs(&aux.p_u1, n, caps)?;
    let p2 = seq::iid_probs(&aux.p_u2, n, caps)?;
    let zc = obs.compact_size();
    caps.check_atoms(zc.saturating_mul(p1.len().max(p2.len()) as u128))?;
    let zc = zc as usize;
    let (nu1, nu2) = (aux.alph_u1(), aux.alph_u2());
    let mut t1 = vec![0.0; p1.len() * zc];
    let mut t2 = vec![0.0; p2.len() * zc];
    let mut h_all = EntropyAcc::default();
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
            let pab = pa * pb;
            obs.for_each_z(&d1, &d2, |z, q| {
                let p = pab * q;
                if p > 0.0 {
                    h_all.add(p);
                    t1[a * zc + z] += p;
                    t2[b * zc + z] += p;
                }
            });
        }
    }
    let mut pz = vec![0.0; zc];
    for (k, &p) in t1.iter().enumerate() {
        pz[k % zc] += p;
    }
    let (h1z, h2z, hz) = (ent_table(&t1), ent_table(&t2), ent_table(&pz));
    Ok(EntropyValues {
        h_u1_z: (h1z - hz).max(0.0),
        h_u2_z: (h2z - hz).max(0.0),
        h_u1_u2z: (h_all.value() - h2z).max(0.0),
        h_u2_u1z: (h_all.value() - h1z).max(0.0),
    })
}

/// Exact entropies for the first and third models using the per-user split
/// `Z = (A1, A2)`: `H(U_j|Z) = H(U_i|U_j,Z) = H(U_j|A_j)` for the matching
/// user, since `(U1, A1)` and `(U2, A2)` are independent.
pub fn brute_force_split(obs: &ObservationModel, aux: &AuxInput, caps: &Caps) -> Result<EntropyValues> {
    let n = obs.n();
    let mut h = [0.0; 2];
    for (j, hj) in h.iter_mut().enumerate() {
        let user = j + 1;
        let za = obs
            .user_size(user)
            .ok_or_else(|| Error::WrongModel("observation does not split by user".into()))?;
        let p = seq::iid_probs(aux.p_u(user), n, caps)?;
        caps.check_atoms((p.len() as u128).saturating_mul(za as u128))?;
        let mut t = vec![0.0; p.len() * za];
        let mut d = vec![0; n];
        for (a, &pa) in p.iter().enumerate() {
            if pa == 0.0 {
                continue;
            }
            seq::digits(a, aux.alph_u(user), &mut d);
            obs.for_each_user_z(user, &d, |z, q| t[a * za + z] += pa * q);
        }
        let mut pz = vec![0.0; za];
        for (k, &q) in t.iter().enumerate() {
            pz[k % za] += q;
        }
        *hj = (ent_table(&t) - ent_table(&pz)).max(0.0);
    }
    Ok(EntropyValues {
        h_u1_z: h[0],
        h_u2_z: h[1],
        h_u1_u2z: h[0],
        h_u2_u1z: h[1],
    })
}

/// Which strategy the entropies refer to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StrategyChoice {
    Given(Strategy),
    /// The entropy-minimizing strategy with `mu` taps, separately per target.
    Worst { mu: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub model: Model,
    pub n: usize,
    pub closed_form: EntropyValues,
    pub brute_force: EntropyValues,
    pub max_abs_diff: f64,
    /// For the worst case: per target, the first minimizing strategy found
    /// by exhaustive search.
    pub minimizers: Option<Vec<Strategy>>,
    /// For the worst case: per target, whether a strategy that puts every
    /// tap on the target's user attains the exhaustive minimum (within 1e-9).
    pub attained_by_full_taps: Option<[bool; 4]>,
}

/// Strategy putting all `mu` taps on `user` (first `mu` positions).
pub fn full_tap_strategy(model: Model, n: usize, mu: usize, user: u8) -> Strategy {
    Strategy {
        model,
        n,
        positions: (1..=mu).collect(),
        decisions: (model == Model::Model1).then(|| vec![user; mu]),
    }
}

/// Brute force through the per-user split when the model has one.
pub fn brute_force_auto(obs: &ObservationModel, aux: &AuxInput, caps: &Caps) -> Result<EntropyValues> {
    if obs.split.is_some() {
        brute_force_split(obs, aux, caps)
    } else {
        brute_force(obs, aux, caps)
    }
}

pub fn entropy_given_wiretap(
    aux: &AuxInput,
    spec: &MacWiretapSpec,
    n: usize,
    choice: &StrategyChoice,
    caps: &Caps,
) -> Result<EntropyReport> {
    let le = LetterEntropies::new(aux, spec)?;
    let model = spec.model;
    match choice {
        StrategyChoice::Given(s) => {
            if s.n != n {
                return Err(Error::DimensionMismatch(format!("strategy for n = {} at n = {n}", s.n)));
            }
            let closed = closed_form(&le, model, n, s);
            let obs = ObservationModel::new(s, aux, spec)?;
            let brute = brute_force(&obs, aux, caps)?;
            Ok(EntropyReport {
                model,
                n,
                closed_form: closed,
                brute_force: brute,
                max_abs_diff: closed.max_abs_diff(&brute),
                minimizers: None,
                attained_by_full_taps: None,
            })
        }
        StrategyChoice::Worst { mu } => {
            let mu = *mu;
            // target k: 0 -> H(U1|Z), 1 -> H(U2|Z), 2 -> H(U1|U2,Z), 3 -> H(U2|U1,Z)
            let target_user: [u8; 4] = [1, 2, 1, 2];
            let closed: [f64; 4] = std::array::from_fn(|k| {
                let s = full_tap_strategy(model, n, mu, target_user[k]);
                closed_form(&le, model, n, &s).as_array()[k]
            });
            let mut best = [f64::INFINITY; 4];
            let mut best_full = [f64::INFINITY; 4];
            let mut arg: Vec<Option<Strategy>> = vec![None; 4];
            for s in enumerate_strategies(model, n, mu, caps)? {
                let obs = ObservationModel::new(&s, aux, spec)?;
                let v = brute_force_auto(&obs, aux, caps)?.as_array();
                for k in 0..4 {
                    if v[k] < best[k] {
                        best[k] = v[k];
                        arg[k] = Some(s.clone());
                    }
                    if s.taps_on(target_user[k]) == mu && v[k] < best_full[k] {
                        best_full[k] = v[k];
                    }
                }
            }
            let closed = EntropyValues::from_array(closed);
            let brute = EntropyValues::from_array(best);
            let attained = [0, 1, 2, 3].map(|k| best_full[k] <= best[k] + 1e-9);
            Ok(EntropyReport {
                model,
                n,
                closed_form: closed,
                brute_force: brute,
                max_abs_diff: closed.max_abs_diff(&brute),
                minimizers: Some(arg.into_iter().map(|s| s.expect("at least one strategy")).collect()),
                attained_by_full_taps: Some(attained),
            })
        }
    }
}

/// Closed-form minimum over strategies with `mu` taps, per target.
pub fn worst_closed_form(le: &LetterEntropies, model: Model, n: usize, mu: usize) -> EntropyValues {
    let target_user: [u8; 4] = [1, 2, 1, 2];
    EntropyValues::from_array(std::array::from_fn(|k| {
        let s = full_tap_strategy(model, n, mu, target_user[k]);
        closed_form(le, model, n, &s).as_array()[k]
    }))
}
