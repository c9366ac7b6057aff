//! Wiretapper output symbols and their canonical integer codes.
//!
//! | model       | code 0 | further codes                                         |
//! |-------------|--------|-------------------------------------------------------|
//! | 1           | `?`    | `1 + x` for user 1, `1 + |X1| + x` for user 2          |
//! | 2           | `?`    | `1 + s` for the sum `s = x1 + x2`                      |
//! | 3           | `?`    | `1 + x1 |X2| + x2`                                     |
//! | generalized | `v=0`  | `v` for `v < |V|`, then `|V| + x1 |X2| + x2`           |
//!
//! A length-n observation is coded row-major with position 1 most significant.

use serde::{Deserialize, Serialize};

use super::strategy::Strategy;
use crate::channels::{MacWiretapSpec, Model};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ZSymbol {
    Erased,
    /// One user's symbol together with the tapped user (1 or 2).
    Single { user: u8, x: usize },
    Sum { s: usize },
    Pair { x1: usize, x2: usize },
    V { v: usize },
}

impl std::fmt::Display for ZSymbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ZSymbol::Erased => write!(f, "?"),
            ZSymbol::Single { user, x } => write!(f, "{x}@user{user}"),
            ZSymbol::Sum { s } => write!(f, "{s}"),
            ZSymbol::Pair { x1, x2 } => write!(f, "({x1},{x2})"),
            ZSymbol::V { v } => write!(f, "v{v}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZAlphabet {
    pub model: Model,
    pub nx1: usize,
    pub nx2: usize,
    /// `|V|` for the generalized model, otherwise 0.
    pub nv: usize,
}

impl ZAlphabet {
    pub fn for_spec(spec: &MacWiretapSpec) -> Result<Self> {
        let nv = match spec.model {
            Model::Generalized => spec
                .alph_v
                .ok_or_else(|| Error::WrongModel("generalized model needs a wiretap channel".into()))?,
            _ => 0,
        };
        Ok(ZAlphabet {
            model: spec.model,
            nx1: spec.alph_x1,
            nx2: spec.alph_x2,
            nv,
        })
    }

    pub fn size(&self) -> usize {
        match self.model {
            Model::Model1 => 1 + self.nx1 + self.nx2,
            Model::Model2 => self.nx1 + self.nx2,
            Model::Model3 => 1 + self.nx1 * self.nx2,
            Model::Generalized => self.nv + self.nx1 * self.nx2,
        }
    }

    pub fn encode(&self, z: ZSymbol) -> Result<usize> {
        let bad = || Error::InvalidParameter(format!("symbol {z} is not in the {} alphabet", self.model));
        let code = match (self.model, z) {
            (Model::Model1 | Model::Model2 | Model::Model3, ZSymbol::Erased) => 0,
            (Model::Model1, ZSymbol::Single { user: 1, x }) if x < self.nx1 => 1 + x,
            (Model::Model1, ZSymbol::Single { user: 2, x }) if x < self.nx2 => 1 + self.nx1 + x,
            (Model::Model2, ZSymbol::Sum { s }) if s + 1 < self.nx1 + self.nx2 => 1 + s,
            (Model::Model3, ZSymbol::Pair { x1, x2 }) if x1 < self.nx1 && x2 < self.nx2 => {
                1 + x1 * self.nx2 + x2
            }
            (Model::Generalized, ZSymbol::V { v }) if v < self.nv => v,
            (Model::Generalized, ZSymbol::Pair { x1, x2 }) if x1 < self.nx1 && x2 < self.nx2 => {
                self.nv + x1 * self.nx2 + x2
            }
            _ => return Err(bad()),
        };
        Ok(code)
    }

    pub fn decode(&self, code: usize) -> Result<ZSymbol> {
        if code >= self.size() {
            return Err(Error::OutOfRange(format!("code {code} outside alphabet of size {}", self.size())));
        }
        Ok(match self.model {
            Model::Model1 => match code {
                0 => ZSymbol::Erased,
                c if c <= self.nx1 => ZSymbol::Single { user: 1, x: c - 1 },
                c => ZSymbol::Single { user: 2, x: c - 1 - self.nx1 },
            },
            Model::Model2 => match code {
                0 => ZSymbol::Erased,
                c => ZSymbol::Sum { s: c - 1 },
            },
            Model::Model3 => match code {
                0 => ZSymbol::Erased,
                c => ZSymbol::Pair { x1: (c - 1) / self.nx2, x2: (c - 1) % self.nx2 },
            },
            Model::Generalized => {
                if code < self.nv {
                    ZSymbol::V { v: code }
                } else {
                    let c = code - self.nv;
                    ZSymbol::Pair { x1: c / self.nx2, x2: c % self.nx2 }
                }
            }
        })
    }
}

/// What the wiretapper sees over one block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Observation {
    pub symbols: Vec<ZSymbol>,
}

impl Observation {
    pub fn codes(&self, alph: &ZAlphabet) -> Result<Vec<usize>> {
        self.symbols.iter().map(|&z| alph.encode(z)).collect()
    }
}

impl std::fmt::Display for Observation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.symbols.iter().map(|z| z.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Applies `strat` to the transmitted sequences (and, for the generalized
/// model, the wiretap channel output `v`).
pub fn observe(x1: &[usize], x2: &[usize], v: Option<&[usize]>, strat: &Strategy) -> Result<Observation> {
    let n = strat.n;
    if x1.len() != n || x2.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "sequences of length {} and {} for blocklength {n}",
            x1.len(),
            x2.len()
        )));
    }
    let v = match (strat.model, v) {
        (Model::Generalized, None) => {
            return Err(Error::InvalidParameter("generalized model needs the wiretap output v".into()))
        }
        (Model::Generalized, Some(v)) if v.len() != n => {
            return Err(Error::DimensionMismatch(format!("v has length {} for blocklength {n}", v.len())))
        }
        (Model::Generalized, Some(v)) => Some(v),
        (_, Some(_)) => {
            return Err(Error::InvalidParameter(format!("{} observations take no v", strat.model)))
        }
        (_, None) => None,
    };
    let taps = strat.tap_map();
    let symbols = (0..n)
        .map(|i| match (strat.model, taps[i]) {
            (Model::Generalized, None) => ZSymbol::V { v: v.expect("checked")[i] },
            (_, None) => ZSymbol::Erased,
            (Model::Model1, Some(1)) => ZSymbol::Single { user: 1, x: x1[i] },
            (Model::Model1, Some(_)) => ZSymbol::Single { user: 2, x: x2[i] },
            (Model::Model2, Some(_)) => ZSymbol::Sum { s: x1[i] + x2[i] },
            (Model::Model3 | Model::Generalized, Some(_)) => ZSymbol::Pair { x1: x1[i], x2: x2[i] },
        })
        .collect();
    Ok(Observation { symbols })
}
