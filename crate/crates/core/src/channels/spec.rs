use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::pmf::{CondKernel, Pmf, DEFAULT_TOL};
use crate::error::{Error, Result};

/// Wiretapper attack model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// Taps one user's symbol per chosen position.
    Model1,
    /// Taps the integer sum `x1 + x2` per chosen position.
    Model2,
    /// Taps both users' symbols per chosen position.
    Model3,
    /// Model 3 taps plus the output of a noisy MAC `p(v|x1,x2)` elsewhere.
    Generalized,
}

impl Model {
    pub const ALL: [Model; 4] = [Model::Model1, Model::Model2, Model::Model3, Model::Generalized];

    pub fn short_name(self) -> &'static str {
        match self {
            Model::Model1 => "1",
            Model::Model2 => "2",
            Model::Model3 => "3",
            Model::Generalized => "g",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Model::Model1 => "model1",
            Model::Model2 => "model2",
            Model::Model3 => "model3",
            Model::Generalized => "generalized",
        };
        f.write_str(s)
    }
}

impl FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "1" | "model1" => Ok(Model::Model1),
            "2" | "model2" => Ok(Model::Model2),
            "3" | "model3" => Ok(Model::Model3),
            "g" | "gen" | "generalized" => Ok(Model::Generalized),
            other => Err(Error::InvalidParameter(format!("unknown model '{other}'"))),
        }
    }
}

/// The pair of discrete memoryless channels and the tapping setup.
#[derive(Debug, Clone, PartialEq)]
pub struct MacWiretapSpec {
    pub alph_x1: usize,
    pub alph_x2: usize,
    pub alph_y: usize,
    pub alph_v: Option<usize>,
    /// `p(y | x1, x2)`.
    pub main: CondKernel,
    /// `p(v | x1, x2)`; required for [`Model::Generalized`].
    pub wtap: Option<CondKernel>,
    pub model: Model,
    /// Fraction of tapped positions.
    pub alpha: f64,
}

impl MacWiretapSpec {
    /// Builds a spec with alphabets read off the kernels.
    pub fn new(model: Model, alpha: f64, main: CondKernel, wtap: Option<CondKernel>) -> Result<Self> {
        let shape = main.input_shape();
        if shape.len() != 2 {
            return Err(Error::DimensionMismatch(
                "main channel must take (x1, x2)".into(),
            ));
        }
        let spec = MacWiretapSpec {
            alph_x1: shape[0],
            alph_x2: shape[1],
            alph_y: main.output_size(),
            alph_v: wtap.as_ref().map(|k| k.output_size()),
            main,
            wtap,
            model,
            alpha,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.alpha) || self.alpha.is_nan() {
            return Err(Error::OutOfRange(format!("alpha {} not in [0,1]", self.alpha)));
        }
        let xs = [self.alph_x1, self.alph_x2];
        if self.main.input_shape() != xs || self.main.output_size() != self.alph_y {
            return Err(Error::DimensionMismatch(format!(
                "main channel shape {:?} -> {} does not match alphabets {:?} -> {}",
                self.main.input_shape(),
                self.main.output_size(),
                xs,
                self.alph_y
            )));
        }
        match (&self.wtap, self.alph_v) {
            (Some(w), Some(v)) => {
                if w.input_shape() != xs || w.output_size() != v {
                    return Err(Error::DimensionMismatch(
                        "wiretap channel shape does not match alphabets".into(),
                    ));
                }
            }
            (None, None) => {
                if self.model == Model::Generalized {
                    return Err(Error::WrongModel(
                        "generalized model requires a wiretap channel p(v|x1,x2)".into(),
                    ));
                }
            }
            _ => {
                return Err(Error::DimensionMismatch(
                    "wiretap kernel and v alphabet must both be present or both absent".into(),
                ))
            }
        }
        Ok(())
    }

    /// Same channels, different attack model and tapping fraction.
    pub fn with_model(&self, model: Model, alpha: f64) -> Result<Self> {
        let mut s = self.clone();
        s.model = model;
        s.alpha = alpha;
        s.validate()?;
        Ok(s)
    }

    /// Sum alphabet size for the superposition tap.
    pub fn alph_sum(&self) -> usize {
        self.alph_x1 + self.alph_x2 - 1
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SpecFile = serde_json::from_str(text)?;
        file.into_spec()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&SpecFile::from_spec(self))?)
    }
}

/// On-disk channel spec.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpecFile {
    pub model: Model,
    pub alpha: f64,
    pub alphabets: Alphabets,
    /// `main[x1][x2][y]`.
    pub main: Vec<Vec<Vec<f64>>>,
    /// `wtap[x1][x2][v]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wtap: Option<Vec<Vec<Vec<f64>>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Alphabets {
    pub x1: usize,
    pub x2: usize,
    pub y: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<usize>,
}

impl SpecFile {
    pub fn into_spec(self) -> Result<MacWiretapSpec> {
        let a = &self.alphabets;
        let main = nested_kernel(&self.main, a.x1, a.x2, a.y, "main")?;
        let wtap = match (&self.wtap, a.v) {
            (Some(w), Some(v)) => Some(nested_kernel(w, a.x1, a.x2, v, "wtap")?),
            (None, None) => None,
            (Some(_), None) => {
                return Err(Error::DimensionMismatch(
                    "wtap given without alphabets.v".into(),
                ))
            }
            (None, Some(_)) => {
                return Err(Error::DimensionMismatch(
                    "alphabets.v given without wtap".into(),
                ))
            }
        };
        let spec = MacWiretapSpec {
            alph_x1: a.x1,
            alph_x2: a.x2,
            alph_y: a.y,
            alph_v: a.v,
            main,
            wtap,
            model: self.model,
            alpha: self.alpha,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_spec(spec: &MacWiretapSpec) -> Self {
        SpecFile {
            model: spec.model,
            alpha: spec.alpha,
            alphabets: Alphabets {
                x1: spec.alph_x1,
                x2: spec.alph_x2,
                y: spec.alph_y,
                v: spec.alph_v,
            },
            main: to_nested(&spec.main, spec.alph_x1, spec.alph_x2),
            wtap: spec
                .wtap
                .as_ref()
                .map(|w| to_nested(w, spec.alph_x1, spec.alph_x2)),
        }
    }
}

fn nested_kernel(
    table: &[Vec<Vec<f64>>],
    x1: usize,
    x2: usize,
    out: usize,
    name: &str,
) -> Result<CondKernel> {
    if table.len() != x1 || table.iter().any(|r| r.len() != x2) {
        return Err(Error::DimensionMismatch(format!(
            "{name} must be a {x1} x {x2} x {out} array"
        )));
    }
    let mut rows = Vec::with_capacity(x1 * x2);
    for plane in table {
        for row in plane {
            if row.len() != out {
                return Err(Error::DimensionMismatch(format!(
                    "{name} rows must have length {out}"
                )));
            }
            rows.push(Pmf::with_tolerance(row.clone(), DEFAULT_TOL).map_err(|e| {
                Error::InvalidPmf(format!("{name}: {e}"))
            })?);
        }
    }
    CondKernel::new(vec![x1, x2], rows)
}

fn to_nested(k: &CondKernel, x1: usize, x2: usize) -> Vec<Vec<Vec<f64>>> {
    (0..x1)
        .map(|a| {
            (0..x2)
                .map(|b| k.row(a * x2 + b).probs().to_vec())
                .collect()
        })
        .collect()
}

/// Auxiliary (channel-prefixing) distributions `p(u1) p(x1|u1) p(u2) p(x2|u2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuxInput {
    pub p_u1: Pmf,
    pub k_x1_u1: CondKernel,
    pub p_u2: Pmf,
    pub k_x2_u2: CondKernel,
}

impl AuxInput {
    pub fn new(p_u1: Pmf, k_x1_u1: CondKernel, p_u2: Pmf, k_x2_u2: CondKernel) -> Result<Self> {
        for (p, k, j) in [(&p_u1, &k_x1_u1, 1), (&p_u2, &k_x2_u2, 2)] {
            if k.input_shape() != [p.support_size()] {
                return Err(Error::DimensionMismatch(format!(
                    "p(x{j}|u{j}) input shape {:?} does not match |U{j}| = {}",
                    k.input_shape(),
                    p.support_size()
                )));
            }
        }
        Ok(AuxInput {
            p_u1,
            k_x1_u1,
            p_u2,
            k_x2_u2,
        })
    }

    /// `U_j = X_j`, uniform.
    pub fn identity(x1: usize, x2: usize) -> Self {
        AuxInput {
            p_u1: Pmf::uniform(x1),
            k_x1_u1: CondKernel::identity(x1),
            p_u2: Pmf::uniform(x2),
            k_x2_u2: CondKernel::identity(x2),
        }
    }

    /// `U_j = X_j` with the given input distributions.
    pub fn direct(p_x1: Pmf, p_x2: Pmf) -> Self {
        let (a, b) = (p_x1.support_size(), p_x2.support_size());
        AuxInput {
            p_u1: p_x1,
            k_x1_u1: CondKernel::identity(a),
            p_u2: p_x2,
            k_x2_u2: CondKernel::identity(b),
        }
    }

    /// Uniform `U_j` observed through binary symmetric channels to `X_j`.
    pub fn binary_bsc(p1: f64, p2: f64) -> Result<Self> {
        AuxInput::new(
            Pmf::uniform(2),
            CondKernel::bsc(p1)?,
            Pmf::uniform(2),
            CondKernel::bsc(p2)?,
        )
    }

    pub fn alph_u1(&self) -> usize {
        self.p_u1.support_size()
    }

    pub fn alph_u2(&self) -> usize {
        self.p_u2.support_size()
    }

    pub fn alph_u(&self, user: usize) -> usize {
        if user == 1 {
            self.alph_u1()
        } else {
            self.alph_u2()
        }
    }

    pub fn p_u(&self, user: usize) -> &Pmf {
        if user == 1 {
            &self.p_u1
        } else {
            &self.p_u2
        }
    }

    pub fn k_x_u(&self, user: usize) -> &CondKernel {
        if user == 1 {
            &self.k_x1_u1
        } else {
            &self.k_x2_u2
        }
    }

    pub fn check_against(&self, spec: &MacWiretapSpec) -> Result<()> {
        if self.k_x1_u1.output_size() != spec.alph_x1 || self.k_x2_u2.output_size() != spec.alph_x2
        {
            return Err(Error::DimensionMismatch(format!(
                "auxiliary outputs ({}, {}) do not match channel inputs ({}, {})",
                self.k_x1_u1.output_size(),
                self.k_x2_u2.output_size(),
                spec.alph_x1,
                spec.alph_x2
            )));
        }
        Ok(())
    }
}
