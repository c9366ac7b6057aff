//! The wiretapper's channel `p(z^n | u1^n, u2^n)` as a product of per-position
//! kernels.
//!
//! Each position keeps only the output codes it can produce, so observations
//! are indexed compactly by a mixed radix over these per-position lists. For
//! the first and third models the observation also splits into one part
//! driven by each user, which the leakage and entropy code exploits.

use super::strategy::Strategy;
use super::zalphabet::ZAlphabet;
use crate::caps::{pow_sat, Caps};
use crate::channels::{concat_aux_wtap, AuxInput, CondKernel, MacWiretapSpec, Model, Pmf};
use crate::error::{Error, Result};
use crate::seq;

/// Sparse `p(z | u1, u2)` at one position, over the codes it can produce.
#[derive(Debug, Clone, PartialEq)]
pub struct LetterChannel {
    /// Canonical codes with positive probability, ascending.
    pub codes: Vec<usize>,
    /// Row `u1 * |U2| + u2`: `(local code index, probability)` with positive probabilities.
    pub rows: Vec<Vec<(usize, f64)>>,
}

/// Sparse `p(a | u_j)` for the part of one position driven by user `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct UserLetter {
    pub size: usize,
    pub rows: Vec<Vec<(usize, f64)>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObservationModel {
    pub alphabet: ZAlphabet,
    pub strategy: Strategy,
    pub nu: [usize; 2],
    pub letters: Vec<LetterChannel>,
    /// Per-user factors, present for the first and third models.
    pub split: Option<[Vec<UserLetter>; 2]>,
}

fn sparse(row: &[f64]) -> Vec<(usize, f64)> {
    row.iter()
        .enumerate()
        .filter(|(_, &p)| p > 0.0)
        .map(|(i, &p)| (i, p))
        .collect()
}

impl ObservationModel {
    pub fn new(strat: &Strategy, aux: &AuxInput, spec: &MacWiretapSpec) -> Result<Self> {
        strat.validate()?;
        aux.check_against(spec)?;
        if strat.model != spec.model {
            return Err(Error::WrongModel(format!(
                "strategy is for {} but the spec is {}",
                strat.model, spec.model
            )));
        }
        let alphabet = ZAlphabet::for_spec(spec)?;
        let (nu1, nu2) = (aux.alph_u1(), aux.alph_u2());
        let (nx1, nx2) = (spec.alph_x1, spec.alph_x2);
        let zsize = alphabet.size();
        let wtap: Option<CondKernel> = match spec.model {
            Model::Generalized => Some(concat_aux_wtap(aux, spec)?),
            _ => None,
        };

        // dense single-letter kernel for each kind of position
        let letter = |tap: Option<u8>| -> Vec<Vec<f64>> {
            let mut rows = vec![vec![0.0; zsize]; nu1 * nu2];
            for u1 in 0..nu1 {
                for u2 in 0..nu2 {
                    let row = &mut rows[u1 * nu2 + u2];
                    match (spec.model, tap) {
                        (Model::Generalized, None) => {
                            let w = wtap.as_ref().expect("built above");
                            row[..alphabet.nv].copy_from_slice(w.row(u1 * nu2 + u2).probs());
                        }
                        (_, None) => row[0] = 1.0,
                        (Model::Model1, Some(1)) => {
                            for x in 0..nx1 {
                                row[1 + x] += aux.k_x1_u1.prob(u1, x);
                            }
                        }
                        (Model::Model1, Some(_)) => {
                            for x in 0..nx2 {
                                row[1 + nx1 + x] += aux.k_x2_u2.prob(u2, x);
                            }
                        }
                        (m, Some(_)) => {
                            for x1 in 0..nx1 {
                                for x2 in 0..nx2 {
                                    let p = aux.k_x1_u1.prob(u1, x1) * aux.k_x2_u2.prob(u2, x2);
                                    let code = match m {
                                        Model::Model2 => 1 + x1 + x2,
                                        Model::Model3 => 1 + x1 * nx2 + x2,
                                        _ => alphabet.nv + x1 * nx2 + x2,
                                    };
                                    row[code] += p;
                                }
                            }
                        }
                    }
                }
            }
            rows
        };

        let taps = strat.tap_map();
        let letters = taps
            .iter()
            .map(|&tap| {
                let dense = letter(tap);
                let codes: Vec<usize> = (0..zsize)
                    .filter(|&c| dense.iter().any(|r| r[c] > 0.0))
                    .collect();
                let mut local = vec![usize::MAX; zsize];
                for (k, &c) in codes.iter().enumerate() {
                    local[c] = k;
                }
                let rows = dense
                    .iter()
                    .map(|r| sparse(r).into_iter().map(|(c, p)| (local[c], p)).collect())
                    .collect();
                LetterChannel { codes, rows }
            })
            .collect();

        let split = match spec.model {
            Model::Model1 | Model::Model3 => {
                let user = |j: u8| -> Vec<UserLetter> {
                    let k = aux.k_x_u(j as usize);
                    taps.iter()
                        .map(|&tap| {
                            let seen = match tap {
                                None => false,
                                Some(0) => true,
                                Some(t) => t == j,
                            };
                            if seen {
                                UserLetter {
                                    size: k.output_size(),
                                    rows: k.rows().iter().map(|r| sparse(r.probs())).collect(),
                                }
                            } else {
                                UserLetter {
                                    size: 1,
                                    rows: vec![vec![(0, 1.0)]; k.num_rows()],
                                }
                            }
                        })
                        .collect()
                };
                Some([user(1), user(2)])
            }
            _ => None,
        };

        Ok(ObservationModel {
            alphabet,
            strategy: strat.clone(),
            nu: [nu1, nu2],
            letters,
            split,
        })
    }

    pub fn n(&self) -> usize {
        self.letters.len()
    }

    /// Number of compact observation indices.
    pub fn compact_size(&self) -> u128 {
        self.letters
            .iter()
            .fold(1u128, |acc, l| acc.saturating_mul(l.codes.len() as u128))
    }

    /// Canonical index in `0..|Z|^n` of compact index `c`.
    pub fn canonical_of_compact(&self, mut c: usize) -> u128 {
        let z = self.alphabet.size() as u128;
        let mut digits = vec![0usize; self.n()];
        for (i, l) in self.letters.iter().enumerate().rev() {
            digits[i] = l.codes[c % l.codes.len()];
            c /= l.codes.len();
        }
        digits.iter().fold(0u128, |acc, &d| acc * z + d as u128)
    }

    /// Calls `f(compact z, p(z | u1, u2))` for every `z` with positive
    /// probability, in increasing order of `z`.
    pub fn for_each_z<F: FnMut(usize, f64)>(&self, u1: &[usize], u2: &[usize], mut f: F) {
        let rows: Vec<&[(usize, f64)]> = self
            .letters
            .iter()
            .enumerate()
            .map(|(i, l)| l.rows[u1[i] * self.nu[1] + u2[i]].as_slice())
            .collect();
        let radix: Vec<usize> = self.letters.iter().map(|l| l.codes.len()).collect();
        walk(&rows, &radix, 0, 0, 1.0, &mut f);
    }

    /// Size of user `j`'s observation part (first and third models only).
    pub fn user_size(&self, j: usize) -> Option<usize> {
        self.split
            .as_ref()
            .map(|s| s[j - 1].iter().map(|l| l.size).product())
    }

    /// Calls `f(a, p(a | u_j))` over user `j`'s observation part.
    pub fn for_each_user_z<F: FnMut(usize, f64)>(&self, j: usize, u: &[usize], mut f: F) {
        let split = self.split.as_ref().expect("observation does not split by user");
        let letters = &split[j - 1];
        let rows: Vec<&[(usize, f64)]> = letters
            .iter()
            .enumerate()
            .map(|(i, l)| l.rows[u[i]].as_slice())
            .collect();
        let radix: Vec<usize> = letters.iter().map(|l| l.size).collect();
        walk(&rows, &radix, 0, 0, 1.0, &mut f);
    }

    /// Canonical index of the observation made of user parts `a` and `b`.
    pub fn canonical_of_split(&self, mut a: usize, mut b: usize) -> u128 {
        let split = self.split.as_ref().expect("observation does not split by user");
        let n = self.n();
        let (mut da, mut db) = (vec![0; n], vec![0; n]);
        for i in (0..n).rev() {
            da[i] = a % split[0][i].size;
            a /= split[0][i].size;
            db[i] = b % split[1][i].size;
            b /= split[1][i].size;
        }
        let nx1 = self.alphabet.nx1;
        let nx2 = self.alphabet.nx2;
        let z = self.alphabet.size() as u128;
        let taps = self.strategy.tap_map();
        (0..n).fold(0u128, |acc, i| {
            let code = match (self.alphabet.model, taps[i]) {
                (_, None) => 0,
                (Model::Model1, Some(1)) => 1 + da[i],
                (Model::Model1, Some(_)) => 1 + nx1 + db[i],
                _ => 1 + da[i] * nx2 + db[i],
            };
            acc * z + code as u128
        })
    }
}

fn walk<F: FnMut(usize, f64)>(
    rows: &[&[(usize, f64)]],
    radix: &[usize],
    i: usize,
    acc: usize,
    p: f64,
    f: &mut F,
) {
    if i == rows.len() {
        f(acc, p);
        return;
    }
    for &(c, q) in rows[i] {
        walk(rows, radix, i + 1, acc * radix[i] + c, p * q, f);
    }
}

/// Dense `p(z^n | u1^n, u2^n)` with rows indexed `u1 * |U2|^n + u2` and
/// outputs by canonical index.
pub fn observation_kernel(
    strat: &Strategy,
    aux: &AuxInput,
    spec: &MacWiretapSpec,
    caps: &Caps,
) -> Result<CondKernel> {
    let obs = ObservationModel::new(strat, aux, spec)?;
    let n = strat.n;
    let (nu1, nu2) = (aux.alph_u1(), aux.alph_u2());
    let r1 = seq::count(nu1, n, caps)?;
    let r2 = seq::count(nu2, n, caps)?;
    let out = pow_sat(obs.alphabet.size(), n);
    caps.check_atoms(out.saturating_mul((r1 * r2) as u128))?;
    let out = out as usize;
    let (mut d1, mut d2) = (vec![0; n], vec![0; n]);
    let mut rows = Vec::with_capacity(r1 * r2);
    for a in 0..r1 {
        seq::digits(a, nu1, &mut d1);
        for b in 0..r2 {
            seq::digits(b, nu2, &mut d2);
            let mut row = vec![0.0; out];
            obs.for_each_z(&d1, &d2, |c, p| row[obs.canonical_of_compact(c) as usize] += p);
            rows.push(Pmf::with_tolerance(row, 1e-9)?);
        }
    }
    CondKernel::new(vec![r1, r2], rows)
}
