use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance on `|sum - 1|` when validating a distribution.
pub const DEFAULT_TOL: f64 = 1e-12;

/// A probability mass function over `0..support_size`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Pmf {
    probs: Vec<f64>,
}

impl Pmf {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(probs, DEFAULT_TOL)
    }

    pub fn with_tolerance(probs: Vec<f64>, tol: f64) -> Result<Self> {
        validate(&probs, tol)?;
        Ok(Pmf { probs })
    }

    pub fn uniform(k: usize) -> Self {
        assert!(k > 0, "uniform distribution over an empty alphabet");
        Pmf {
            probs: vec![1.0 / k as f64; k],
        }
    }

    /// Point mass at `at`.
    pub fn point(k: usize, at: usize) -> Self {
        assert!(at < k, "point mass outside the alphabet");
        let mut probs = vec![0.0; k];
        probs[at] = 1.0;
        Pmf { probs }
    }

    pub fn support_size(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, i: usize) -> f64 {
        self.probs[i]
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.probs
    }
}

impl TryFrom<Vec<f64>> for Pmf {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Pmf::new(v)
    }
}

impl From<Pmf> for Vec<f64> {
    fn from(p: Pmf) -> Self {
        p.probs
    }
}

fn validate(probs: &[f64], tol: f64) -> Result<()> {
    if probs.is_empty() {
        return Err(Error::InvalidPmf("empty support".into()));
    }
    let mut sum = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        if !p.is_finite() || p < 0.0 {
            return Err(Error::InvalidPmf(format!("entry {i} is {p}")));
        }
        sum += p;
    }
    if (sum - 1.0).abs() > tol {
        return Err(Error::InvalidPmf(format!(
            "entries sum to {sum}, tolerance {tol}"
        )));
    }
    Ok(())
}

/// A conditional distribution `p(out | in)`; inputs may be tuples, flattened
/// row-major over `input_shape`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CondKernel {
    input_shape: Vec<usize>,
    output_size: usize,
    rows: Vec<Pmf>,
}

impl CondKernel {
    pub fn new(input_shape: Vec<usize>, rows: Vec<Pmf>) -> Result<Self> {
        let expected: usize = input_shape.iter().product();
        if input_shape.is_empty() || expected == 0 {
            return Err(Error::DimensionMismatch("kernel with empty input".into()));
        }
        if rows.len() != expected {
            return Err(Error::DimensionMismatch(format!(
                "kernel has {} rows, input shape {:?} needs {}",
                rows.len(),
                input_shape,
                expected
            )));
        }
        let output_size = rows[0].support_size();
        if rows.iter().any(|r| r.support_size() != output_size) {
            return Err(Error::DimensionMismatch("rows of unequal length".into()));
        }
        Ok(CondKernel {
            input_shape,
            output_size,
            rows,
        })
    }

    /// Builds a kernel from raw rows, validating each with tolerance `tol`.
    pub fn from_rows(input_shape: Vec<usize>, rows: Vec<Vec<f64>>, tol: f64) -> Result<Self> {
        let rows = rows
            .into_iter()
            .map(|r| Pmf::with_tolerance(r, tol))
            .collect::<Result<Vec<_>>>()?;
        Self::new(input_shape, rows)
    }

    /// Deterministic kernel `in -> f(in)`.
    pub fn deterministic<F>(input_shape: Vec<usize>, output_size: usize, f: F) -> Result<Self>
    where
        F: Fn(&[usize]) -> usize,
    {
        let total: usize = input_shape.iter().product();
        let mut digits = vec![0; input_shape.len()];
        let mut rows = Vec::with_capacity(total);
        for flat in 0..total {
            unflatten(flat, &input_shape, &mut digits);
            let out = f(&digits);
            if out >= output_size {
                return Err(Error::DimensionMismatch(format!(
                    "deterministic map sends {digits:?} to {out}, outside 0..{output_size}"
                )));
            }
            rows.push(Pmf::point(output_size, out));
        }
        Self::new(input_shape, rows)
    }

    pub fn identity(k: usize) -> Self {
        Self::deterministic(vec![k], k, |d| d[0]).expect("identity kernel")
    }

    /// Binary symmetric channel with crossover `p`.
    pub fn bsc(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::OutOfRange(format!("crossover {p}")));
        }
        Self::from_rows(vec![2], vec![vec![1.0 - p, p], vec![p, 1.0 - p]], DEFAULT_TOL)
    }

    /// Kernel whose every row is `row`.
    pub fn constant(input_shape: Vec<usize>, row: Pmf) -> Result<Self> {
        let total = input_shape.iter().product();
        Self::new(input_shape, vec![row; total])
    }

    pub fn input_shape(&self) -> &[usize] {
        &self.input_shape
    }

    pub fn output_size(&self) -> usize {
        self.output_size
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Pmf] {
        &self.rows
    }

    pub fn row(&self, flat: usize) -> &Pmf {
        &self.rows[flat]
    }

    pub fn prob(&self, flat: usize, out: usize) -> f64 {
        self.rows[flat].prob(out)
    }

    /// Flat row index of an input tuple.
    pub fn row_index(&self, input: &[usize]) -> usize {
        flatten(input, &self.input_shape)
    }

    pub fn is_deterministic(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.probs().iter().filter(|&&p| p > 0.0).count() == 1)
    }
}

/// A joint distribution over several finite variables, stored row-major
/// (last variable fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct Joint {
    dims: Vec<usize>,
    probs: Vec<f64>,
}

impl Joint {
    pub fn new(dims: Vec<usize>, probs: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(dims, probs, DEFAULT_TOL)
    }

    pub fn with_tolerance(dims: Vec<usize>, probs: Vec<f64>, tol: f64) -> Result<Self> {
        let total: usize = dims.iter().product();
        if dims.is_empty() || total != probs.len() {
            return Err(Error::DimensionMismatch(format!(
                "dims {:?} need {} atoms, got {}",
                dims,
                total,
                probs.len()
            )));
        }
        validate(&probs, tol)?;
        Ok(Joint { dims, probs })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_vars(&self) -> usize {
        self.dims.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, index: &[usize]) -> f64 {
        self.probs[flatten(index, &self.dims)]
    }

    pub fn as_pmf(&self) -> Pmf {
        Pmf {
            probs: self.probs.clone(),
        }
    }

    /// Marginal over `vars`, in the order given.
    pub fn marginal(&self, vars: &[usize]) -> Result<Joint> {
        for (k, &v) in vars.iter().enumerate() {
            if v >= self.dims.len() {
                return Err(Error::InvalidSplit(format!(
                    "variable {v} out of range for {} variables",
                    self.dims.len()
                )));
            }
            if vars[..k].contains(&v) {
                return Err(Error::InvalidSplit(format!("variable {v} repeated")));
            }
        }
        if vars.is_empty() {
            return Ok(Joint {
                dims: vec![1],
                probs: vec![self.probs.iter().sum()],
            });
        }
        let out_dims: Vec<usize> = vars.iter().map(|&v| self.dims[v]).collect();
        let mut out = vec![0.0; out_dims.iter().product()];
        let mut digits = vec![0usize; self.dims.len()];
        for &p in &self.probs {
            if p != 0.0 {
                let mut idx = 0;
                for &v in vars {
                    idx = idx * self.dims[v] + digits[v];
                }
                out[idx] += p;
            }
            increment(&mut digits, &self.dims);
        }
        Ok(Joint {
            dims: out_dims,
            probs: out,
        })
    }

    /// Appends a variable computed deterministically from `inputs`.
    pub fn with_derived<F>(&self, inputs: &[usize], size: usize, f: F) -> Result<Joint>
    where
        F: Fn(&[usize]) -> usize,
    {
        if inputs.iter().any(|&v| v >= self.dims.len()) {
            return Err(Error::InvalidSplit("derived variable input out of range".into()));
        }
        let mut dims = self.dims.clone();
        dims.push(size);
        let mut probs = vec![0.0; self.probs.len() * size];
        let mut digits = vec![0usize; self.dims.len()];
        let mut args = vec![0usize; inputs.len()];
        for (flat, &p) in self.probs.iter().enumerate() {
            for (a, &v) in args.iter_mut().zip(inputs) {
                *a = digits[v];
            }
            let d = f(&args);
            if d >= size {
                return Err(Error::DimensionMismatch(format!(
                    "derived value {d} outside 0..{size}"
                )));
            }
            probs[flat * size + d] = p;
            increment(&mut digits, &self.dims);
        }
        Ok(Joint { dims, probs })
    }
}

/// Row-major index of `digits` within `shape`.
pub fn flatten(digits: &[usize], shape: &[usize]) -> usize {
    debug_assert_eq!(digits.len(), shape.len());
    digits
        .iter()
        .zip(shape)
        .fold(0, |acc, (&d, &s)| acc * s + d)
}

/// Inverse of [`flatten`].
pub fn unflatten(mut flat: usize, shape: &[usize], digits: &mut [usize]) {
    for k in (0..shape.len()).rev() {
        digits[k] = flat % shape[k];
        flat /= shape[k];
    }
}

fn increment(digits: &mut [usize], shape: &[usize]) {
    for k in (0..shape.len()).rev() {
        digits[k] += 1;
        if digits[k] < shape[k] {
            return;
        }
        digits[k] = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_pmfs() {
        assert!(Pmf::new(vec![]).is_err());
        assert!(Pmf::new(vec![0.5, 0.6]).is_err());
        assert!(Pmf::new(vec![1.5, -0.5]).is_err());
        assert!(Pmf::new(vec![f64::NAN, 1.0]).is_err());
        assert!(Pmf::new(vec![0.25, 0.75]).is_ok());
        assert!(Pmf::with_tolerance(vec![0.5, 0.5 + 1e-10], 1e-9).is_ok());
    }

    #[test]
    fn pmf_serde_validates() {
        let p: Pmf = serde_json::from_str("[0.5, 0.5]").unwrap();
        assert_eq!(p.probs(), &[0.5, 0.5]);
        assert!(serde_json::from_str::<Pmf>("[0.5, 0.4]").is_err());
    }

    #[test]
    fn kernel_shape_checks() {
        let rows = vec![Pmf::uniform(2); 3];
        assert!(CondKernel::new(vec![2, 2], rows).is_err());
        let k = CondKernel::deterministic(vec![2, 3], 4, |d| d[0] + d[1]).unwrap();
        assert_eq!(k.num_rows(), 6);
        assert_eq!(k.prob(k.row_index(&[1, 2]), 3), 1.0);
        assert!(k.is_deterministic());
        assert!(CondKernel::deterministic(vec![2], 1, |d| d[0]).is_err());
    }

    #[test]
    fn marginal_and_derived() {
        // p(a,b) on 2x3
        let j = Joint::new(vec![2, 3], vec![0.1, 0.2, 0.1, 0.3, 0.2, 0.1]).unwrap();
        let a = j.marginal(&[0]).unwrap();
        assert!((a.probs()[0] - 0.4).abs() < 1e-15);
        let ba = j.marginal(&[1, 0]).unwrap();
        assert_eq!(ba.dims(), &[3, 2]);
        assert!((ba.prob(&[1, 1]) - 0.2).abs() < 1e-15);
        let s = j.with_derived(&[0, 1], 4, |d| d[0] + d[1]).unwrap();
        let sm = s.marginal(&[2]).unwrap();
        assert!((sm.probs()[1] - 0.5).abs() < 1e-15);
        assert!(j.marginal(&[0, 0]).is_err());
        assert!(j.marginal(&[2]).is_err());
    }

    #[test]
    fn flatten_roundtrip() {
        let shape = [3, 4, 2];
        let mut d = [0; 3];
        for flat in 0..24 {
            unflatten(flat, &shape, &mut d);
            assert_eq!(flatten(&d, &shape), flat);
        }
    }
}
