//! Binning-rate constraints behind each region and their elimination.
//!
//! With key rate `R_j` and public rate `R~_j`, the constraints are
//!
//! * keys and public messages fit in the source: `R_j + R~_j <= K_j = H(U_j)`;
//! * decodability: `R~_1 >= A_1`, `R~_2 >= A_2`, `R~_1 + R~_2 >= A_12`;
//! * secrecy: `R_j + R~_j <= B_j`, and `R_1 + R~_1 + R_2 + R~_2 <= B_12`
//!   when the model has a joint term.
//!
//! Eliminating `R~` leaves `R_j <= min(K_j, B_j) - A_j` and
//! `R_1 + R_2 <= min(M_1 + M_2, B_12) - A_12` with `M_j = min(K_j, B_j)`.

use serde::{Deserialize, Serialize};

use crate::binning::Rates;
use crate::channels::{joint_full, var, AuxInput, MacWiretapSpec, Model};
use crate::error::Result;
use crate::info::{cond_entropy, joint_entropy, Bits};
use crate::regions::{bounds_for, bounds_mac_wiretap, RegionBounds};

const U1: usize = var::U1;
const U2: usize = var::U2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateConstraints {
    /// `H(U_j)`.
    pub k: [Bits; 2],
    /// `H(U_1|U_2,Y)`, `H(U_2|U_1,Y)`.
    pub a: [Bits; 2],
    /// `H(U_1,U_2|Y)`.
    pub a12: Bits,
    /// Per-user secrecy thresholds.
    pub b: [Bits; 2],
    /// Joint secrecy threshold, absent for the first model.
    pub b12: Option<Bits>,
}

impl RateConstraints {
    pub fn new(aux: &AuxInput, spec: &MacWiretapSpec) -> Result<Self> {
        let j = joint_full(aux, spec)?;
        let al = spec.alpha;
        let k = [joint_entropy(&j, &[U1])?, joint_entropy(&j, &[U2])?];
        let a = [
            cond_entropy(&j, &[U1], &[U2, var::Y])?,
            cond_entropy(&j, &[U2], &[U1, var::Y])?,
        ];
        let a12 = cond_entropy(&j, &[U1, U2], &[var::Y])?;
        let mix = |tapped: Bits, free: Bits| al * tapped + (1.0 - al) * free;
        let (b, b12) = match spec.model {
            Model::Model1 | Model::Model3 => {
                let b = [
                    mix(cond_entropy(&j, &[U1], &[var::X1])?, k[0]),
                    mix(cond_entropy(&j, &[U2], &[var::X2])?, k[1]),
                ];
                let b12 = (spec.model == Model::Model3).then(|| b[0] + b[1]);
                (b, b12)
            }
            Model::Model2 => {
                let js = j.with_derived(&[var::X1, var::X2], spec.alph_sum(), |x| x[0] + x[1])?;
                let s = js.num_vars() - 1;
                let b = [
                    mix(cond_entropy(&js, &[U1], &[s])?, k[0]),
                    mix(cond_entropy(&js, &[U2], &[s])?, k[1]),
                ];
                let b12 = mix(cond_entropy(&js, &[U1, U2], &[s])?, joint_entropy(&j, &[U1, U2])?);
                (b, Some(b12))
            }
            Model::Generalized => {
                let v = var::V;
                let b = [
                    mix(cond_entropy(&j, &[U1], &[var::X1])?, cond_entropy(&j, &[U1], &[v])?),
                    mix(cond_entropy(&j, &[U2], &[var::X2])?, cond_entropy(&j, &[U2], &[v])?),
                ];
                let b12 = mix(
                    cond_entropy(&j, &[U1, U2], &[var::X1, var::X2])?,
                    cond_entropy(&j, &[U1, U2], &[v])?,
                );
                (b, Some(b12))
            }
        };
        Ok(RateConstraints { k, a, a12, b, b12 })
    }

    /// `min(K_j, B_j)`.
    pub fn m(&self, user: usize) -> Bits {
        self.k[user - 1].min(self.b[user - 1])
    }

    /// Bounds on `(R1, R2, R1 + R2)` left after eliminating the public rates.
    pub fn eliminate(&self) -> RegionBounds {
        let (m1, m2) = (self.m(1), self.m(2));
        let joint = self.b12.map_or(m1 + m2, |b| b.min(m1 + m2));
        let mut sum = joint - self.a12;
        if let Some(b12) = self.b12 {
            sum = sum.min(b12 - self.a[0] - self.a[1]);
        }
        RegionBounds {
            r1: m1 - self.a[0],
            r2: m2 - self.a[1],
            sum,
        }
    }

    /// Public rates meeting the decodability constraints with equality on the
    /// sum, and key rates `R_j = max(0, M_j - R~_j + margin)`. A negative
    /// margin lands inside the secrecy constraints, a positive one outside.
    pub fn operating_point(&self, margin: f64) -> Rates {
        let extra = (self.a12 - self.a[0] - self.a[1]).max(0.0) / 2.0;
        let pubs = [self.a[0] + extra, self.a[1] + extra];
        let key = |j: usize| (self.m(j + 1) - pubs[j] + margin).max(0.0);
        Rates::new(key(0), key(1), pubs[0], pubs[1])
    }

    /// Largest amount by which `rates` break a constraint (`<= 0` when all hold).
    pub fn violation(&self, rates: &Rates) -> f64 {
        let t = [rates.r1 + rates.r1_pub, rates.r2 + rates.r2_pub];
        let mut v = f64::NEG_INFINITY;
        for ((t, k), b) in t.iter().zip(&self.k).zip(&self.b) {
            v = v.max(t - k).max(t - b);
        }
        v = v
            .max(self.a[0] - rates.r1_pub)
            .max(self.a[1] - rates.r2_pub)
            .max(self.a12 - rates.r1_pub - rates.r2_pub);
        if let Some(b12) = self.b12 {
            v = v.max(t[0] + t[1] - b12);
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateConstraintReport {
    pub model: Model,
    pub alpha: f64,
    pub constraints: RateConstraints,
    pub derived: RegionBounds,
    pub theorem: RegionBounds,
    pub max_abs_diff: f64,
    pub agrees: bool,
    /// Difference to the untapped wiretap region, generalized model at `alpha = 0` only.
    pub mac_wiretap_diff: Option<f64>,
}

pub const AGREEMENT_TOL: f64 = 1e-9;

pub fn rate_constraint_report(aux: &AuxInput, spec: &MacWiretapSpec) -> Result<RateConstraintReport> {
    let constraints = RateConstraints::new(aux, spec)?;
    let derived = constraints.eliminate();
    let theorem = bounds_for(aux, spec)?;
    let max_abs_diff = derived.max_abs_diff(&theorem);
    let mac_wiretap_diff = if spec.model == Model::Generalized && spec.alpha == 0.0 {
        Some(derived.max_abs_diff(&bounds_mac_wiretap(aux, spec)?))
    } else {
        None
    };
    Ok(RateConstraintReport {
        model: spec.model,
        alpha: spec.alpha,
        constraints,
        derived,
        theorem,
        max_abs_diff,
        agrees: max_abs_diff <= AGREEMENT_TOL,
        mac_wiretap_diff,
    })
}
