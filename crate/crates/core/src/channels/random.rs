//! Random valid distributions, drawn from the flat Dirichlet.

use rand::Rng;
use rand_distr::{Distribution, Exp1};

use super::pmf::{CondKernel, Pmf};
use super::spec::{AuxInput, MacWiretapSpec, Model};
use crate::error::Result;

/// Uniform draw from the probability simplex over `k` symbols.
pub fn random_pmf<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Pmf {
    let mut w: Vec<f64> = (0..k).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    Pmf::with_tolerance(w, 1e-12).expect("normalized draw")
}

pub fn random_kernel<R: Rng + ?Sized>(rng: &mut R, input_shape: Vec<usize>, out: usize) -> CondKernel {
    let rows = input_shape.iter().product::<usize>();
    let rows = (0..rows).map(|_| random_pmf(rng, out)).collect();
    CondKernel::new(input_shape, rows).expect("shapes agree")
}

pub fn random_aux<R: Rng + ?Sized>(
    rng: &mut R,
    alph_u: (usize, usize),
    alph_x: (usize, usize),
) -> AuxInput {
    AuxInput {
        p_u1: random_pmf(rng, alph_u.0),
        k_x1_u1: random_kernel(rng, vec![alph_u.0], alph_x.0),
        p_u2: random_pmf(rng, alph_u.1),
        k_x2_u2: random_kernel(rng, vec![alph_u.1], alph_x.1),
    }
}

/// Random main (and, if `alph_v` is given, wiretap) channel.
pub fn random_spec<R: Rng + ?Sized>(
    rng: &mut R,
    model: Model,
    alpha: f64,
    alph_x: (usize, usize),
    alph_y: usize,
    alph_v: Option<usize>,
) -> Result<MacWiretapSpec> {
    let main = random_kernel(rng, vec![alph_x.0, alph_x.1], alph_y);
    let wtap = alph_v.map(|v| random_kernel(rng, vec![alph_x.0, alph_x.1], v));
    MacWiretapSpec::new(model, alpha, main, wtap)
}
