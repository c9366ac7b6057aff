//! Search over auxiliary distributions.
//!
//! Sample `i` of a search depends only on `(seed, i)`: indices 0..=2 are
//! fixed seeds (both users direct and uniform, then each user alone), the
//! rest are drawn from the flat Dirichlet and then sharpened by a random
//! power so that near-deterministic kernels are also explored. A run with a
//! larger budget therefore evaluates a superset of the auxiliaries of a
//! smaller run.

use rand::seq::IndexedRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::formulas::{bounds_mac_wiretap, region_for};
use super::hull::RegionHull;
use super::poly::RegionPoly;
use crate::channels::random::random_pmf;
use crate::channels::{AuxInput, CondKernel, MacWiretapSpec, Pmf};
use crate::error::{Error, Result};
use crate::rng::{stream, Domain};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    /// Number of auxiliary inputs evaluated before refinement.
    pub budget: usize,
    pub seed: u64,
    /// `(|U1|, |U2|)`; defaults to `(|X1|, |X2|)`.
    pub alph_u: Option<(usize, usize)>,
    /// Rounds of block coordinate ascent on hull-supporting samples.
    pub refine_rounds: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: 1000,
            seed: 0,
            alph_u: None,
            refine_rounds: 0,
        }
    }
}

/// Which per-auxiliary region a search takes the hull of.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    /// The region of `spec.model` at `spec.alpha`.
    #[default]
    Theorem,
    /// The wiretap region with no tapped positions (needs `p(v|x1,x2)`).
    MacWiretap,
}

impl Quantity {
    pub fn region(self, aux: &AuxInput, spec: &MacWiretapSpec) -> Result<RegionPoly> {
        match self {
            Quantity::Theorem => region_for(aux, spec),
            Quantity::MacWiretap => Ok(bounds_mac_wiretap(aux, spec)?.clamp()),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Quantity::Theorem => "theorem",
            Quantity::MacWiretap => "mac-wiretap",
        }
    }
}

/// Number of fixed seeds at the start of every search.
pub const FIXED_SEEDS: usize = 3;

/// Directions used by the refinement step.
const DIRECTIONS: [(f64, f64); 5] = [(1.0, 0.0), (0.75, 0.25), (0.5, 0.5), (0.25, 0.75), (0.0, 1.0)];

const SHARPEN: [f64; 4] = [1.0, 2.0, 4.0, 8.0];

/// `u -> u mod |X|` with uniform `U`.
fn direct_block(nu: usize, nx: usize) -> (Pmf, CondKernel) {
    let k = CondKernel::deterministic(vec![nu], nx, |d| d[0] % nx).expect("valid deterministic map");
    (Pmf::uniform(nu), k)
}

/// `U` carries nothing and `X` is uniform noise.
fn silent_block(nu: usize, nx: usize) -> (Pmf, CondKernel) {
    (
        Pmf::point(nu, 0),
        CondKernel::constant(vec![nu], Pmf::uniform(nx)).expect("valid constant kernel"),
    )
}

fn build(b1: (Pmf, CondKernel), b2: (Pmf, CondKernel)) -> AuxInput {
    AuxInput::new(b1.0, b1.1, b2.0, b2.1).expect("block shapes agree")
}

fn sharpened<R: Rng + ?Sized>(rng: &mut R, k: usize, power: f64) -> Pmf {
    let p = random_pmf(rng, k);
    if power == 1.0 {
        return p;
    }
    let w: Vec<f64> = p.probs().iter().map(|x| x.powf(power)).collect();
    let total: f64 = w.iter().sum();
    Pmf::with_tolerance(w.iter().map(|x| x / total).collect(), 1e-12).expect("normalized")
}

fn sampled_block<R: Rng + ?Sized>(rng: &mut R, nu: usize, nx: usize) -> (Pmf, CondKernel) {
    let power = *SHARPEN.choose(rng).expect("non-empty");
    let p = sharpened(rng, nu, 1.0);
    let rows = (0..nu).map(|_| sharpened(rng, nx, power)).collect();
    (p, CondKernel::new(vec![nu], rows).expect("shapes agree"))
}

/// The `index`-th auxiliary input of a search.
pub fn aux_sample(spec: &MacWiretapSpec, opts: &SearchOptions, index: usize) -> AuxInput {
    let (nx1, nx2) = (spec.alph_x1, spec.alph_x2);
    let (nu1, nu2) = opts.alph_u.unwrap_or((nx1, nx2));
    match index {
        0 => build(direct_block(nu1, nx1), direct_block(nu2, nx2)),
        1 => build(direct_block(nu1, nx1), silent_block(nu2, nx2)),
        2 => build(silent_block(nu1, nx1), direct_block(nu2, nx2)),
        i => {
            let mut rng = stream(opts.seed, Domain::AuxSearch, i as u64);
            let b1 = sampled_block(&mut rng, nu1, nx1);
            let b2 = sampled_block(&mut rng, nu2, nx2);
            build(b1, b2)
        }
    }
}

/// Region for each of the first `budget` samples, in index order.
pub fn evaluate_samples(
    spec: &MacWiretapSpec,
    opts: &SearchOptions,
    quantity: Quantity,
) -> Result<Vec<(AuxInput, RegionPoly)>> {
    (0..opts.budget)
        .into_par_iter()
        .map(|i| {
            let aux = aux_sample(spec, opts, i);
            let r = quantity.region(&aux, spec)?;
            Ok((aux, r))
        })
        .collect()
}

/// Mixes one block of `aux` towards a random distribution.
fn perturb<R: Rng + ?Sized>(rng: &mut R, aux: &AuxInput, block: usize, step: f64) -> AuxInput {
    let mix = |p: &Pmf, q: &Pmf| {
        let v = p
            .probs()
            .iter()
            .zip(q.probs())
            .map(|(a, b)| (1.0 - step) * a + step * b)
            .collect();
        Pmf::with_tolerance(v, 1e-12).expect("convex combination")
    };
    let mut out = aux.clone();
    match block {
        0 => out.p_u1 = mix(&aux.p_u1, &random_pmf(rng, aux.alph_u1())),
        1 => out.p_u2 = mix(&aux.p_u2, &random_pmf(rng, aux.alph_u2())),
        2 | 3 => {
            let k = if block == 2 { &aux.k_x1_u1 } else { &aux.k_x2_u2 };
            let rows = k
                .rows()
                .iter()
                .map(|r| mix(r, &random_pmf(rng, k.output_size())))
                .collect();
            let nk = CondKernel::new(k.input_shape().to_vec(), rows).expect("shapes agree");
            if block == 2 {
                out.k_x1_u1 = nk;
            } else {
                out.k_x2_u2 = nk;
            }
        }
        _ => unreachable!("four blocks"),
    }
    out
}

/// Convex hull of the regions of the first `opts.budget` samples, optionally
/// refined by block coordinate ascent along a few fixed directions.
pub fn optimize_hull(spec: &MacWiretapSpec, opts: &SearchOptions) -> Result<RegionHull> {
    optimize_hull_of(spec, opts, Quantity::Theorem)
}

pub fn optimize_hull_of(spec: &MacWiretapSpec, opts: &SearchOptions, quantity: Quantity) -> Result<RegionHull> {
    if opts.budget == 0 {
        return Err(Error::InvalidParameter("search budget must be at least 1".into()));
    }
    if let Some((a, b)) = opts.alph_u {
        if a == 0 || b == 0 {
            return Err(Error::InvalidParameter("auxiliary alphabets must be non-empty".into()));
        }
    }
    spec.validate()?;
    let mut evaluated = evaluate_samples(spec, opts, quantity)?;

    for round in 0..opts.refine_rounds {
        let mut rng = stream(opts.seed, Domain::Refine, round as u64);
        let step = 0.5 / (round as f64 + 1.0);
        for &(w1, w2) in &DIRECTIONS {
            let (best_id, best_val) = evaluated
                .iter()
                .enumerate()
                .map(|(i, (_, r))| (i, r.support(w1, w2)))
                .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
            let mut current = evaluated[best_id].0.clone();
            let mut current_val = best_val;
            for block in 0..4 {
                let cand = perturb(&mut rng, &current, block, step);
                let r = quantity.region(&cand, spec)?;
                let val = r.support(w1, w2);
                evaluated.push((cand.clone(), r));
                if val > current_val {
                    current = cand;
                    current_val = val;
                }
            }
        }
    }

    let polys: Vec<(usize, RegionPoly)> = evaluated.iter().enumerate().map(|(i, (_, r))| (i, *r)).collect();
    Ok(RegionHull::from_polys(&polys).with_provenance(|i| evaluated[i].0.clone()))
}
