use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::channels::Model;
use crate::error::{Error, Result};

/// A wiretapper strategy: the tapped positions (1-based, increasing) and,
/// for the first model, which user is tapped at each of them (1 or 2).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Strategy {
    pub model: Model,
    pub n: usize,
    pub positions: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decisions: Option<Vec<u8>>,
}

impl Strategy {
    pub fn new(model: Model, n: usize, positions: Vec<usize>, decisions: Option<Vec<u8>>) -> Result<Self> {
        let s = Strategy {
            model,
            n,
            positions,
            decisions,
        };
        s.validate()?;
        Ok(s)
    }

    /// The strategy that taps nothing.
    pub fn empty(model: Model, n: usize) -> Self {
        Strategy {
            model,
            n,
            positions: Vec::new(),
            decisions: if model == Model::Model1 { Some(Vec::new()) } else { None },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.positions.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidParameter("tap positions must be strictly increasing".into()));
        }
        if let Some(&p) = self.positions.iter().find(|&&p| p == 0 || p > self.n) {
            return Err(Error::OutOfRange(format!("tap position {p} outside [1, {}]", self.n)));
        }
        match (&self.decisions, self.model) {
            (Some(d), Model::Model1) => {
                if d.len() != self.positions.len() {
                    return Err(Error::InvalidParameter(format!(
                        "{} decisions for {} tapped positions",
                        d.len(),
                        self.positions.len()
                    )));
                }
                if d.iter().any(|&u| u != 1 && u != 2) {
                    return Err(Error::InvalidParameter("decisions must be 1 or 2".into()));
                }
            }
            (None, Model::Model1) => {
                return Err(Error::InvalidParameter("model1 strategies need user decisions".into()))
            }
            (Some(_), m) => {
                return Err(Error::InvalidParameter(format!("{m} strategies carry no decisions")))
            }
            (None, _) => {}
        }
        Ok(())
    }

    pub fn mu(&self) -> usize {
        self.positions.len()
    }

    /// Number of positions tapped on `user` (every tapped position counts
    /// for both users outside the first model).
    pub fn taps_on(&self, user: u8) -> usize {
        match &self.decisions {
            Some(d) => d.iter().filter(|&&u| u == user).count(),
            None => self.positions.len(),
        }
    }

    /// Per position (0-based): `None` if untapped, `Some(0)` if tapped with no
    /// user choice, `Some(j)` if the first-model wiretapper taps user `j`.
    pub fn tap_map(&self) -> Vec<Option<u8>> {
        let mut m = vec![None; self.n];
        for (k, &p) in self.positions.iter().enumerate() {
            m[p - 1] = Some(self.decisions.as_ref().map_or(0, |d| d[k]));
        }
        m
    }

    /// Compact label such as `{1,3}` or `{1:u2,3:u1}`.
    pub fn label(&self) -> String {
        let parts: Vec<String> = match &self.decisions {
            Some(d) => self
                .positions
                .iter()
                .zip(d)
                .map(|(p, u)| format!("{p}:u{u}"))
                .collect(),
            None => self.positions.iter().map(|p| p.to_string()).collect(),
        };
        format!("{{{}}}", parts.join(","))
    }
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `C(n, mu) * 2^mu` for the first model, `C(n, mu)` otherwise.
pub fn strategy_count(model: Model, n: usize, mu: usize) -> u128 {
    let c = binomial(n, mu);
    if model == Model::Model1 {
        c.saturating_mul(1u128 << mu.min(127))
    } else {
        c
    }
}

/// `floor(alpha * n)`, robust to representation error such as `0.3 * 10`.
pub fn mu_for(alpha: f64, n: usize) -> usize {
    ((alpha * n as f64) + 1e-9).floor().max(0.0) as usize
}

/// Lexicographic stream of all strategies: position sets in lexicographic
/// order and, within one set, decision sequences in lexicographic order.
#[derive(Debug, Clone)]
pub struct Strategies {
    model: Model,
    n: usize,
    combo: Vec<usize>,
    decisions: Vec<u8>,
    done: bool,
}

impl Iterator for Strategies {
    type Item = Strategy;

    fn next(&mut self) -> Option<Strategy> {
        if self.done {
            return None;
        }
        let out = Strategy {
            model: self.model,
            n: self.n,
            positions: self.combo.clone(),
            decisions: (self.model == Model::Model1).then(|| self.decisions.clone()),
        };
        self.advance();
        Some(out)
    }
}

impl Strategies {
    fn advance(&mut self) {
        if self.model == Model::Model1 {
            for k in (0..self.decisions.len()).rev() {
                if self.decisions[k] == 1 {
                    self.decisions[k] = 2;
                    self.decisions[k + 1..].iter_mut().for_each(|d| *d = 1);
                    return;
                }
            }
            self.decisions.iter_mut().for_each(|d| *d = 1);
        }
        let mu = self.combo.len();
        for k in (0..mu).rev() {
            if self.combo[k] < self.n - (mu - 1 - k) {
                self.combo[k] += 1;
                for t in k + 1..mu {
                    self.combo[t] = self.combo[t - 1] + 1;
                }
                return;
            }
        }
        self.done = true;
    }
}

/// All strategies for `(model, n, mu)` after checking the enumeration cap.
pub fn enumerate_strategies(model: Model, n: usize, mu: usize, caps: &Caps) -> Result<Strategies> {
    if mu > n {
        return Err(Error::OutOfRange(format!("mu = {mu} exceeds n = {n}")));
    }
    caps.check_strategies(strategy_count(model, n, mu))?;
    Ok(Strategies {
        model,
        n,
        combo: (1..=mu).collect(),
        decisions: vec![1; mu],
        done: false,
    })
}
