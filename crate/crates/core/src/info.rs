//! Shannon information quantities on finite tables. All logarithms are base 2
//! and `0 log 0 = 0`.

use crate::channels::{Joint, Pmf};
use crate::error::{Error, Result};

/// Information in bits.
pub type Bits = f64;

fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        p * p.log2()
    } else {
        0.0
    }
}

/// Neumaier compensated sum, for long sums of small terms.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// `-p log2 p` accumulated with [`CompensatedSum`].
#[derive(Debug, Clone, Copy, Default)]
pub struct EntropyAcc(CompensatedSum);

impl EntropyAcc {
    pub fn add(&mut self, p: f64) {
        self.0.add(-plogp(p));
    }

    pub fn value(&self) -> Bits {
        self.0.value()
    }
}

/// Entropy of a slice of probabilities (need not be normalized to 1; used
/// for sub-probability masses too).
pub fn entropy_of(probs: &[f64]) -> Bits {
    let mut acc = EntropyAcc::default();
    probs.iter().for_each(|&p| acc.add(p));
    acc.value()
}

pub fn entropy(p: &Pmf) -> Bits {
    entropy_of(p.probs()).max(0.0)
}

/// `H_b(x) = -x log x - (1-x) log(1-x)`.
pub fn binary_entropy(x: f64) -> Result<Bits> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::OutOfRange(format!("binary entropy argument {x}")));
    }
    Ok(-(plogp(x) + plogp(1.0 - x)))
}

fn check_groups(joint: &Joint, groups: &[&[usize]]) -> Result<()> {
    let n = joint.num_vars();
    let mut seen = vec![false; n];
    for g in groups {
        for &v in *g {
            if v >= n {
                return Err(Error::InvalidSplit(format!(
                    "variable {v} out of range for {n} variables"
                )));
            }
            if seen[v] {
                return Err(Error::InvalidSplit(format!(
                    "variable {v} appears in more than one group"
                )));
            }
            seen[v] = true;
        }
    }
    Ok(())
}

/// `H(vars)`.
pub fn joint_entropy(joint: &Joint, vars: &[usize]) -> Result<Bits> {
    check_groups(joint, &[vars])?;
    if vars.is_empty() {
        return Ok(0.0);
    }
    Ok(entropy_of(joint.marginal(vars)?.probs()).max(0.0))
}

fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut v = a.to_vec();
    v.extend_from_slice(b);
    v
}

/// `H(target | given)`.
pub fn cond_entropy(joint: &Joint, target: &[usize], given: &[usize]) -> Result<Bits> {
    check_groups(joint, &[target, given])?;
    if target.is_empty() {
        return Err(Error::InvalidSplit("empty target group".into()));
    }
    let h = joint_entropy(joint, &union(target, given))? - joint_entropy(joint, given)?;
    Ok(h.max(0.0))
}

/// `I(a; b)`.
pub fn mutual_info(joint: &Joint, a: &[usize], b: &[usize]) -> Result<Bits> {
    cond_mutual_info(joint, a, b, &[])
}

/// `I(a; b | given)`.
pub fn cond_mutual_info(joint: &Joint, a: &[usize], b: &[usize], given: &[usize]) -> Result<Bits> {
    check_groups(joint, &[a, b, given])?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidSplit("mutual information needs two non-empty groups".into()));
    }
    let ag = union(a, given);
    let bg = union(b, given);
    let abg = union(&ag, b);
    let i = joint_entropy(joint, &ag)? + joint_entropy(joint, &bg)?
        - joint_entropy(joint, &abg)?
        - joint_entropy(joint, given)?;
    // clamp rounding noise around zero
    Ok(if i.abs() < 1e-14 { 0.0 } else { i })
}

/// `D(p || q)` in bits; `f64::INFINITY` when `p` is not absolutely continuous
/// with respect to `q`.
pub fn kl_divergence(p: &Pmf, q: &Pmf) -> Result<Bits> {
    kl_of(p.probs(), q.probs())
}

pub fn kl_of(p: &[f64], q: &[f64]) -> Result<Bits> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch(format!(
            "divergence between supports of size {} and {}",
            p.len(),
            q.len()
        )));
    }
    let mut d = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        if a > 0.0 {
            if b <= 0.0 {
                return Ok(f64::INFINITY);
            }
            d += a * (a / b).log2();
        }
    }
    Ok(d.max(0.0))
}

/// `V(p, q) = (1/2) sum |p - q|`.
pub fn total_variation(p: &Pmf, q: &Pmf) -> Result<f64> {
    tv_of(p.probs(), q.probs())
}

pub fn tv_of(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch(format!(
            "total variation between supports of size {} and {}",
            p.len(),
            q.len()
        )));
    }
    Ok(0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>())
}
