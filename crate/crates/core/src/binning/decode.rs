//! Maximum a posteriori Slepian-Wolf decoding from the public bins and `y^n`.

use super::realization::{BinKind, BinningRealization};
use crate::caps::Caps;
use crate::channels::{concat_aux, AuxInput, MacWiretapSpec};
use crate::error::{Error, Result};
use crate::seq;

/// Precomputed buckets and log-probabilities for repeated decoding.
#[derive(Debug, Clone)]
pub struct Decoder {
    n: usize,
    nu: [usize; 2],
    ny: usize,
    /// Sequences of user `j` grouped by public bin, each list ascending.
    buckets: [Vec<Vec<u32>>; 2],
    /// `log2 p(u^n)` per sequence.
    log_p: [Vec<f64>; 2],
    /// Digits of every sequence, flattened.
    digits: [Vec<u8>; 2],
    /// `log2 p(y | u1, u2)` at `(u1 * |U2| + u2) * |Y| + y`.
    log_k: Vec<f64>,
}

fn log2_or_neg_inf(p: f64) -> f64 {
    if p > 0.0 {
        p.log2()
    } else {
        f64::NEG_INFINITY
    }
}

impl Decoder {
    /// The decoder enumerates every source sequence, so the sequence count is
    /// checked against the atom cap rather than the tabulation cap.
    pub fn new(binning: &BinningRealization, aux: &AuxInput, spec: &MacWiretapSpec, caps: &Caps) -> Result<Self> {
        let n = binning.n;
        let nu = [aux.alph_u1(), aux.alph_u2()];
        if binning.alph_u != nu {
            return Err(Error::DimensionMismatch("binning and auxiliary alphabets differ".into()));
        }
        if nu.iter().any(|&k| k > 256) {
            return Err(Error::InvalidParameter("auxiliary alphabets above 256 are not supported by the decoder".into()));
        }
        let k = concat_aux(aux, spec)?;
        let ny = spec.alph_y;
        let log_k = (0..nu[0] * nu[1])
            .flat_map(|r| k.row(r).probs().iter().map(|&p| log2_or_neg_inf(p)).collect::<Vec<_>>())
            .collect();
        let mut buckets: [Vec<Vec<u32>>; 2] = [Vec::new(), Vec::new()];
        let mut log_p: [Vec<f64>; 2] = [Vec::new(), Vec::new()];
        let mut digits: [Vec<u8>; 2] = [Vec::new(), Vec::new()];
        for j in 0..2 {
            let count = crate::caps::pow_sat(nu[j], n);
            caps.check_atoms(count)?;
            let count = count as usize;
            let pu = aux.p_u(j + 1);
            let mut b = vec![Vec::new(); binning.counts.f[j]];
            let mut lp = Vec::with_capacity(count);
            let mut dg = Vec::with_capacity(count * n);
            let mut d = vec![0; n];
            let table = binning.is_tabulated().then(|| binning.table(j + 1, BinKind::Public));
            for s in 0..count {
                seq::digits(s, nu[j], &mut d);
                let f = match &table {
                    Some(t) => t[s],
                    None => binning.public_bin(j + 1, s),
                };
                b[f].push(s as u32);
                lp.push(d.iter().map(|&u| log2_or_neg_inf(pu.prob(u))).sum());
                dg.extend(d.iter().map(|&u| u as u8));
            }
            buckets[j] = b;
            log_p[j] = lp;
            digits[j] = dg;
        }
        Ok(Decoder {
            n,
            nu,
            ny,
            buckets,
            log_p,
            digits,
            log_k,
        })
    }

    /// Indices of the MAP pair among sequences with public bins `(f1, f2)`;
    /// ties go to the lexicographically smallest pair.
    pub fn decode_indices(&self, y: &[usize], f1: usize, f2: usize) -> Result<(usize, usize)> {
        if y.len() != self.n || y.iter().any(|&s| s >= self.ny) {
            return Err(Error::DimensionMismatch("received sequence does not fit the channel".into()));
        }
        let n = self.n;
        let nu2 = self.nu[1];
        let mut best: Option<(usize, usize)> = None;
        let mut best_score = f64::NEG_INFINITY;
        for &a in &self.buckets[0][f1] {
            let a = a as usize;
            let la = self.log_p[0][a];
            if la == f64::NEG_INFINITY {
                continue;
            }
            let da = &self.digits[0][a * n..(a + 1) * n];
            for &b in &self.buckets[1][f2] {
                let b = b as usize;
                let mut s = la + self.log_p[1][b];
                let db = &self.digits[1][b * n..(b + 1) * n];
                for i in 0..n {
                    s += self.log_k[(da[i] as usize * nu2 + db[i] as usize) * self.ny + y[i]];
                }
                if s > best_score {
                    best_score = s;
                    best = Some((a, b));
                }
            }
        }
        best.ok_or_else(|| Error::InvalidParameter("no source pair is consistent with the bins and y".into()))
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// MAP estimate `(u1^n, u2^n)` given `y^n` and the public bins.
pub fn sw_decode(
    y: &[usize],
    f1: usize,
    f2: usize,
    binning: &BinningRealization,
    aux: &AuxInput,
    spec: &MacWiretapSpec,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let dec = Decoder::new(binning, aux, spec, &Caps::default())?;
    let (a, b) = dec.decode_indices(y, f1, f2)?;
    let (mut d1, mut d2) = (vec![0; binning.n], vec![0; binning.n]);
    seq::digits(a, aux.alph_u1(), &mut d1);
    seq::digits(b, aux.alph_u2(), &mut d2);
    Ok((d1, d2))
}
