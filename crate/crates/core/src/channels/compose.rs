use super::pmf::{CondKernel, Joint, Pmf};
use super::spec::{AuxInput, MacWiretapSpec, Model};
use crate::error::{Error, Result};

/// Variable positions in [`joint_full`].
pub mod var {
    pub const U1: usize = 0;
    pub const U2: usize = 1;
    pub const X1: usize = 2;
    pub const X2: usize = 3;
    pub const Y: usize = 4;
    /// Present only when the spec carries a wiretap channel.
    pub const V: usize = 5;
}

/// Tolerance for tables built by summing products of validated rows.
const COMPOSE_TOL: f64 = 1e-12;

/// `p(out | u1, u2) = sum_{x1,x2} p(x1|u1) p(x2|u2) k(out | x1, x2)`.
pub fn concat_kernel(aux: &AuxInput, kernel: &CondKernel) -> Result<CondKernel> {
    let (x1, x2) = (aux.k_x1_u1.output_size(), aux.k_x2_u2.output_size());
    if kernel.input_shape() != [x1, x2] {
        return Err(Error::DimensionMismatch(format!(
            "kernel input {:?} does not match auxiliary outputs ({x1}, {x2})",
            kernel.input_shape()
        )));
    }
    let (nu1, nu2) = (aux.alph_u1(), aux.alph_u2());
    let out = kernel.output_size();
    let mut rows = Vec::with_capacity(nu1 * nu2);
    for u1 in 0..nu1 {
        let r1 = aux.k_x1_u1.row(u1).probs();
        for u2 in 0..nu2 {
            let r2 = aux.k_x2_u2.row(u2).probs();
            let mut row = vec![0.0; out];
            for (a, &pa) in r1.iter().enumerate() {
                if pa == 0.0 {
                    continue;
                }
                for (b, &pb) in r2.iter().enumerate() {
                    if pb == 0.0 {
                        continue;
                    }
                    let w = pa * pb;
                    for (y, &py) in kernel.row(a * x2 + b).probs().iter().enumerate() {
                        row[y] += w * py;
                    }
                }
            }
            rows.push(Pmf::with_tolerance(row, COMPOSE_TOL)?);
        }
    }
    CondKernel::new(vec![nu1, nu2], rows)
}

/// `p(y | u1, u2)` through the main channel.
pub fn concat_aux(aux: &AuxInput, spec: &MacWiretapSpec) -> Result<CondKernel> {
    aux.check_against(spec)?;
    concat_kernel(aux, &spec.main)
}

/// `p(v | u1, u2)` through the wiretapper's channel.
pub fn concat_aux_wtap(aux: &AuxInput, spec: &MacWiretapSpec) -> Result<CondKernel> {
    aux.check_against(spec)?;
    let w = spec
        .wtap
        .as_ref()
        .ok_or_else(|| Error::WrongModel("spec has no wiretap channel".into()))?;
    concat_kernel(aux, w)
}

/// Joint over `(U1, U2, X1, X2, Y[, V])` from the product of factors; see [`var`].
pub fn joint_full(aux: &AuxInput, spec: &MacWiretapSpec) -> Result<Joint> {
    aux.check_against(spec)?;
    let (nu1, nu2) = (aux.alph_u1(), aux.alph_u2());
    let (nx1, nx2, ny) = (spec.alph_x1, spec.alph_x2, spec.alph_y);
    let nv = spec.alph_v.unwrap_or(1);
    let mut dims = vec![nu1, nu2, nx1, nx2, ny];
    if spec.wtap.is_some() {
        dims.push(nv);
    }
    let mut probs = Vec::with_capacity(dims.iter().product());
    for u1 in 0..nu1 {
        for u2 in 0..nu2 {
            let pu = aux.p_u1.prob(u1) * aux.p_u2.prob(u2);
            for x1 in 0..nx1 {
                let p1 = pu * aux.k_x1_u1.prob(u1, x1);
                for x2 in 0..nx2 {
                    let p12 = p1 * aux.k_x2_u2.prob(u2, x2);
                    let row = x1 * nx2 + x2;
                    for y in 0..ny {
                        let py = p12 * spec.main.prob(row, y);
                        match &spec.wtap {
                            Some(w) => {
                                for v in 0..nv {
                                    probs.push(py * w.prob(row, v));
                                }
                            }
                            None => probs.push(py),
                        }
                    }
                }
            }
        }
    }
    Joint::with_tolerance(dims, probs, COMPOSE_TOL)
}

/// Deterministic `(x1, x2) -> x1 + x2` over integer alphabets.
pub fn sum_kernel(x1: usize, x2: usize) -> CondKernel {
    CondKernel::deterministic(vec![x1, x2], x1 + x2 - 1, |d| d[0] + d[1])
        .expect("sum kernel is well-formed")
}

/// The superposition tap of the second attack model.
pub fn superpose(spec: &MacWiretapSpec) -> Result<CondKernel> {
    if spec.model != Model::Model2 {
        return Err(Error::WrongModel(format!(
            "superposition tap is defined for model2, spec is {}",
            spec.model
        )));
    }
    Ok(sum_kernel(spec.alph_x1, spec.alph_x2))
}
