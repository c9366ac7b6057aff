//! Reference computations for the integration and acceptance tests. They
//! share no code with the library beyond its data types and the `observe`
//! map applied to explicit symbol sequences.

#![allow(dead_code)]

use std::collections::HashMap;

use mawtc::adversary::{observe, Strategy, ZSymbol};
use mawtc::binning::{BinKind, BinningRealization};
use mawtc::channels::{AuxInput, CondKernel, MacWiretapSpec, Model, Pmf};
use rand::Rng;

pub fn entropy(p: impl IntoIterator<Item = f64>) -> f64 {
    p.into_iter().filter(|&x| x > 0.0).map(|x| -x * x.log2()).sum()
}

/// Sparse joint over tuples of symbols.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub atoms: HashMap<Vec<usize>, f64>,
}

impl Table {
    pub fn add(&mut self, key: Vec<usize>, p: f64) {
        if p > 0.0 {
            *self.atoms.entry(key).or_insert(0.0) += p;
        }
    }

    pub fn h(&self, vars: &[usize]) -> f64 {
        let mut m: HashMap<Vec<usize>, f64> = HashMap::new();
        for (k, &p) in &self.atoms {
            *m.entry(vars.iter().map(|&v| k[v]).collect()).or_insert(0.0) += p;
        }
        entropy(m.into_values())
    }

    /// `H(a | b)`.
    pub fn hc(&self, a: &[usize], b: &[usize]) -> f64 {
        let ab: Vec<usize> = a.iter().chain(b).copied().collect();
        self.h(&ab) - self.h(b)
    }

    /// `I(a; b | c)`.
    pub fn mi(&self, a: &[usize], b: &[usize], c: &[usize]) -> f64 {
        let ac: Vec<usize> = a.iter().chain(c).copied().collect();
        self.hc(b, c) - self.hc(b, &ac)
    }

    pub fn total(&self) -> f64 {
        self.atoms.values().sum()
    }
}

pub const U1: usize = 0;
pub const U2: usize = 1;
pub const X1: usize = 2;
pub const X2: usize = 3;
pub const Y: usize = 4;
pub const V: usize = 5;
pub const S: usize = 6;

/// Single-letter joint of `(U1, U2, X1, X2, Y, V, X1 + X2)`; `V = 0` when the
/// spec has no wiretap channel.
pub fn letter_table(aux: &AuxInput, spec: &MacWiretapSpec) -> Table {
    let mut t = Table::default();
    let nv = spec.alph_v.unwrap_or(1);
    for u1 in 0..aux.alph_u1() {
        for u2 in 0..aux.alph_u2() {
            for x1 in 0..spec.alph_x1 {
                for x2 in 0..spec.alph_x2 {
                    let base = aux.p_u1.prob(u1)
                        * aux.p_u2.prob(u2)
                        * aux.k_x1_u1.prob(u1, x1)
                        * aux.k_x2_u2.prob(u2, x2);
                    let row = x1 * spec.alph_x2 + x2;
                    for y in 0..spec.alph_y {
                        for v in 0..nv {
                            let pv = spec.wtap.as_ref().map_or(1.0, |k| k.prob(row, v));
                            t.add(vec![u1, u2, x1, x2, y, v, x1 + x2], base * spec.main.prob(row, y) * pv);
                        }
                    }
                }
            }
        }
    }
    t
}

/// Reference `(R1, R2, R1 + R2)` bounds for each model.
pub fn oracle_bounds(aux: &AuxInput, spec: &MacWiretapSpec, model: Model) -> [f64; 3] {
    let t = letter_table(aux, spec);
    let a = spec.alpha;
    let main = [t.mi(&[U1], &[Y], &[U2]), t.mi(&[U2], &[Y], &[U1]), t.mi(&[U1, U2], &[Y], &[])];
    let pen = match model {
        Model::Model1 | Model::Model3 => [
            a * t.mi(&[U1], &[X1], &[]),
            a * t.mi(&[U2], &[X2], &[]),
            a * t.mi(&[U1, U2], &[X1, X2], &[]),
        ],
        Model::Model2 => [
            a * t.mi(&[U1], &[S], &[]),
            a * t.mi(&[U2], &[S], &[]),
            a * t.mi(&[U1, U2], &[S], &[]),
        ],
        Model::Generalized => [
            t.mi(&[U1], &[V], &[]) + a * t.mi(&[U1], &[X1], &[V]),
            t.mi(&[U2], &[V], &[]) + a * t.mi(&[U2], &[X2], &[V]),
            t.mi(&[U1, U2], &[V], &[]) + a * t.mi(&[U1, U2], &[X1, X2], &[V]),
        ],
    };
    [main[0] - pen[0], main[1] - pen[1], main[2] - pen[2]]
}

/// The wiretap-channel region with no taps.
pub fn oracle_mac_wiretap(aux: &AuxInput, spec: &MacWiretapSpec) -> [f64; 3] {
    let t = letter_table(aux, spec);
    [
        t.mi(&[U1], &[Y], &[U2]) - t.mi(&[U1], &[V], &[]),
        t.mi(&[U2], &[Y], &[U1]) - t.mi(&[U2], &[V], &[]),
        t.mi(&[U1, U2], &[Y], &[]) - t.mi(&[U1, U2], &[V], &[]),
    ]
}

/// All sequences over `0..base` of length `n`, first position most significant.
pub fn sequences(base: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|s| {
                (0..base).map(move |x| {
                    let mut t = s.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

fn seq_prob(seq: &[usize], p: &Pmf) -> f64 {
    seq.iter().map(|&u| p.prob(u)).product()
}

fn channel_prob(input: &[usize], output: &[usize], k: &CondKernel) -> f64 {
    input.iter().zip(output).map(|(&a, &b)| k.prob(a, b)).product()
}

/// `(i, x^n, P(x^n | u^n))` for every source index `i` and input sequence `x^n`.
fn user_paths(aux: &AuxInput, user: usize, n: usize) -> Vec<(usize, Vec<usize>, f64)> {
    let (p, k) = (aux.p_u(user), aux.k_x_u(user));
    let xs = sequences(k.output_size(), n);
    let mut out = Vec::new();
    for (i, u) in sequences(p.support_size(), n).iter().enumerate() {
        let pu = seq_prob(u, p);
        for x in &xs {
            let q = pu * channel_prob(u, x, k);
            if q > 0.0 {
                out.push((i, x.clone(), q));
            }
        }
    }
    out
}

/// Observation key: one small integer per position, so the table stays a
/// `Vec<usize>` map.
fn symbol_code(z: &ZSymbol) -> usize {
    match *z {
        ZSymbol::Erased => 0,
        ZSymbol::Single { user, x } => 1 + 2 * x + (user as usize - 1),
        ZSymbol::Sum { s } => 100 + s,
        ZSymbol::Pair { x1, x2 } => 1000 + 32 * x1 + x2,
        ZSymbol::V { v } => 10_000 + v,
    }
}

/// Joint of `(u1 index, u2 index, z^n)` by enumerating every source and input
/// sequence and, for the generalized model, every wiretap output.
pub fn source_z_table(aux: &AuxInput, spec: &MacWiretapSpec, strat: &Strategy) -> Table {
    let n = strat.n;
    let p1 = user_paths(aux, 1, n);
    let p2 = user_paths(aux, 2, n);
    let vs = spec.alph_v.map(|nv| sequences(nv, n));
    let mut t = Table::default();
    for (a, x1, q1) in &p1 {
        for (b, x2, q2) in &p2 {
            let q = q1 * q2;
            match (&vs, &spec.wtap) {
                (Some(vs), Some(k)) if spec.model == Model::Generalized => {
                    for v in vs {
                        let pv: f64 = (0..n).map(|i| k.prob(x1[i] * spec.alph_x2 + x2[i], v[i])).product();
                        if pv > 0.0 {
                            let z = observe(x1, x2, Some(v), strat).unwrap();
                            let mut key = vec![*a, *b];
                            key.extend(z.symbols.iter().map(symbol_code));
                            t.add(key, q * pv);
                        }
                    }
                }
                _ => {
                    let z = observe(x1, x2, None, strat).unwrap();
                    let mut key = vec![*a, *b];
                    key.extend(z.symbols.iter().map(symbol_code));
                    t.add(key, q);
                }
            }
        }
    }
    t
}

/// `[H(U1|Z), H(U2|Z), H(U1|U2,Z), H(U2|U1,Z)]` from a source/observation table.
pub fn oracle_entropies(t: &Table, n: usize) -> [f64; 4] {
    let z: Vec<usize> = (2..2 + n).collect();
    let with = |v: usize| -> Vec<usize> { std::iter::once(v).chain(z.iter().copied()).collect() };
    [t.hc(&[0], &z), t.hc(&[1], &z), t.hc(&[0], &with(1)), t.hc(&[1], &with(0))]
}

/// Joint of `(w1, w2, f1, f2, z^n)` under a tabulated binning: entries 0..4
/// are the bins, the rest is the observation.
pub fn wfz_table(src: &Table, binning: &BinningRealization) -> Table {
    let tabs = [
        binning.table(1, BinKind::Key),
        binning.table(2, BinKind::Key),
        binning.table(1, BinKind::Public),
        binning.table(2, BinKind::Public),
    ];
    let mut t = Table::default();
    for (k, &p) in &src.atoms {
        let (a, b) = (k[0], k[1]);
        let mut key = vec![tabs[0][a], tabs[1][b], tabs[2][a], tabs[3][b]];
        key.extend_from_slice(&k[2..]);
        t.add(key, p);
    }
    t
}

/// `D(P_WFZ || unif x P_Z)` for a table from [`wfz_table`].
pub fn oracle_leakage(t: &Table, num_bins: usize, n: usize) -> f64 {
    let z: Vec<usize> = (4..4 + n).collect();
    (num_bins as f64).log2() - t.hc(&[0, 1, 2, 3], &z)
}

/// `I(W1, W2; Z)` for a table from [`wfz_table`].
pub fn oracle_mi_wz(t: &Table, n: usize) -> f64 {
    let z: Vec<usize> = (4..4 + n).collect();
    t.mi(&[0, 1], &z, &[])
}

/// `(total, conditional, first user)` terms of the chain-rule split, each
/// written as an entropy difference.
pub fn oracle_decomposition(t: &Table, user_bins: [usize; 2], n: usize) -> (f64, f64, f64) {
    let z: Vec<usize> = (4..4 + n).collect();
    let first: Vec<usize> = [0usize, 2].iter().copied().chain(z.iter().copied()).collect();
    let total = ((user_bins[0] * user_bins[1]) as f64).log2() - t.hc(&[0, 1, 2, 3], &z);
    let conditional = (user_bins[1] as f64).log2() - t.hc(&[1, 3], &first);
    let first_user = (user_bins[0] as f64).log2() - t.hc(&[0, 2], &z);
    (total, conditional, first_user)
}

/// Pascal's triangle.
pub fn pascal(n: usize) -> Vec<Vec<u128>> {
    let mut rows: Vec<Vec<u128>> = vec![vec![1]];
    for i in 1..=n {
        let prev = &rows[i - 1];
        let mut r = vec![1u128; i + 1];
        for k in 1..i {
            r[k] = prev[k - 1] + prev[k];
        }
        rows.push(r);
    }
    rows
}

pub fn random_pmf<R: Rng>(rng: &mut R, k: usize) -> Pmf {
    let w: Vec<f64> = (0..k).map(|_| -rng.random::<f64>().max(1e-300).ln()).collect();
    let s: f64 = w.iter().sum();
    Pmf::with_tolerance(w.iter().map(|x| x / s).collect(), 1e-12).unwrap()
}

pub fn random_kernel<R: Rng>(rng: &mut R, shape: Vec<usize>, out: usize) -> CondKernel {
    let rows = (0..shape.iter().product::<usize>()).map(|_| random_pmf(rng, out)).collect();
    CondKernel::new(shape, rows).unwrap()
}

pub fn random_aux<R: Rng>(rng: &mut R, nu: (usize, usize), nx: (usize, usize)) -> AuxInput {
    AuxInput::new(
        random_pmf(rng, nu.0),
        random_kernel(rng, vec![nu.0], nx.0),
        random_pmf(rng, nu.1),
        random_kernel(rng, vec![nu.1], nx.1),
    )
    .unwrap()
}

/// Noiseless `Y = (X1, X2)` over binary inputs.
pub fn noiseless_pair(model: Model, alpha: f64, wtap: Option<CondKernel>) -> MacWiretapSpec {
    let main = CondKernel::deterministic(vec![2, 2], 4, |d| 2 * d[0] + d[1]).unwrap();
    MacWiretapSpec::new(model, alpha, main, wtap).unwrap()
}

/// Binary inputs, `V = X1 xor X2` through a BSC(0.2).
pub fn xor_wtap() -> CondKernel {
    CondKernel::from_rows(
        vec![2, 2],
        vec![vec![0.8, 0.2], vec![0.2, 0.8], vec![0.2, 0.8], vec![0.8, 0.2]],
        1e-12,
    )
    .unwrap()
}

/// The natural binary spec for each model.
pub fn binary_spec(model: Model, alpha: f64) -> MacWiretapSpec {
    match model {
        Model::Generalized => noiseless_pair(model, alpha, Some(xor_wtap())),
        m => noiseless_pair(m, alpha, None),
    }
}
