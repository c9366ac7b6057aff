//! Length-n sequences over `0..base`, indexed row-major with position 1 most
//! significant.

use crate::caps::{pow_sat, Caps};
use crate::channels::Pmf;
use crate::error::Result;

/// Writes the digits of sequence `index` into `out` (length n).
pub fn digits(mut index: usize, base: usize, out: &mut [usize]) {
    for d in out.iter_mut().rev() {
        *d = index % base;
        index /= base;
    }
}

pub fn index(digits: &[usize], base: usize) -> usize {
    digits.iter().fold(0, |acc, &d| acc * base + d)
}

/// Number of sequences, after checking the per-source cap.
pub fn count(base: usize, n: usize, caps: &Caps) -> Result<usize> {
    let c = pow_sat(base, n);
    caps.check_source(c)?;
    Ok(c as usize)
}

/// `p(u^n) = prod_i p(u_i)` for every sequence, in index order.
pub fn iid_probs(p: &Pmf, n: usize, caps: &Caps) -> Result<Vec<f64>> {
    let base = p.support_size();
    let total = count(base, n, caps)?;
    let mut out = vec![1.0; 1];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * base);
        for &q in &out {
            next.extend(p.probs().iter().map(|&a| q * a));
        }
        out = next;
    }
    debug_assert_eq!(out.len(), total);
    Ok(out)
}

/// All sequences as digit vectors, in index order.
pub fn all(base: usize, n: usize, caps: &Caps) -> Result<Vec<Vec<usize>>> {
    let total = count(base, n, caps)?;
    Ok((0..total)
        .map(|i| {
            let mut d = vec![0; n];
            digits(i, base, &mut d);
            d
        })
        .collect())
}
