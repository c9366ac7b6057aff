//! Simulation of the multiplicative Chernoff bound for sums of independent
//! bounded variables: `P(sum U_i >= (1 + eps) m) <= exp(-eps^2 m / (3 b))`
//! when `U_i` lies in `[0, b]` and `sum E U_i <= m`.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{stream, Domain, CHUNK};
use crate::stats::{wilson, Interval};

/// A finitely supported variable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub values: Vec<f64>,
    pub probs: Vec<f64>,
}

impl Component {
    pub fn point(v: f64) -> Self {
        Component {
            values: vec![v],
            probs: vec![1.0],
        }
    }

    /// `b` with probability `p`, else 0.
    pub fn scaled_bernoulli(p: f64, b: f64) -> Self {
        Component {
            values: vec![0.0, b],
            probs: vec![1.0 - p, p],
        }
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().zip(&self.probs).map(|(v, p)| v * p).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChernoffSpec {
    pub components: Vec<Component>,
    /// Common support bound `b`.
    pub b: f64,
    /// Mean bound `m`; the sum of component means when absent.
    #[serde(default)]
    pub m_bar: Option<f64>,
}

impl ChernoffSpec {
    pub fn iid(count: usize, c: Component, b: f64) -> Self {
        ChernoffSpec {
            components: vec![c; count],
            b,
            m_bar: None,
        }
    }

    pub fn mean_sum(&self) -> f64 {
        self.components.iter().map(Component::mean).sum()
    }

    pub fn m_bar(&self) -> f64 {
        self.m_bar.unwrap_or_else(|| self.mean_sum())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.b > 0.0 && self.b.is_finite()) {
            return Err(Error::InvalidParameter(format!("support bound b = {} must be positive", self.b)));
        }
        if self.components.is_empty() {
            return Err(Error::InvalidParameter("no components".into()));
        }
        for (i, c) in self.components.iter().enumerate() {
            if c.values.len() != c.probs.len() || c.values.is_empty() {
                return Err(Error::DimensionMismatch(format!("component {i}: values and probabilities differ in length")));
            }
            if let Some(v) = c.values.iter().find(|v| !(0.0..=self.b).contains(*v)) {
                return Err(Error::OutOfRange(format!("component {i}: value {v} outside [0, {}]", self.b)));
            }
            let total: f64 = c.probs.iter().sum();
            if c.probs.iter().any(|p| *p < 0.0) || (total - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidPmf(format!("component {i}: probabilities do not form a distribution")));
            }
        }
        if self.mean_sum() > self.m_bar() * (1.0 + 1e-12) {
            return Err(Error::InvalidParameter(format!(
                "sum of means {} exceeds the mean bound {}",
                self.mean_sum(),
                self.m_bar()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChernoffReport {
    pub epsilon: f64,
    pub m_bar: f64,
    pub b: f64,
    pub trials: u64,
    pub exceed: u64,
    pub empirical: f64,
    pub ci95: Interval,
    pub bound: f64,
    pub satisfied: bool,
}

pub fn chernoff_bound(epsilon: f64, m_bar: f64, b: f64) -> f64 {
    (-epsilon * epsilon * m_bar / (3.0 * b)).exp()
}

/// Empirical tail `P(sum U_i >= (1 + eps) m)` over `trials` draws.
pub fn chernoff_variant_check(spec: &ChernoffSpec, epsilon: f64, trials: u64, seed: u64) -> Result<ChernoffReport> {
    spec.validate()?;
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::InvalidParameter(format!("epsilon = {epsilon} outside [0, 1]")));
    }
    let samplers = spec
        .components
        .iter()
        .map(|c| {
            WeightedIndex::new(&c.probs).map_err(|e| Error::InvalidPmf(format!("component weights: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let m_bar = spec.m_bar();
    let level = (1.0 + epsilon) * m_bar;
    let chunks = trials.div_ceil(CHUNK);
    let exceed: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream(seed, Domain::Concentration, c);
            let len = CHUNK.min(trials - c * CHUNK);
            let mut hits = 0u64;
            for _ in 0..len {
                let sum: f64 = samplers
                    .iter()
                    .zip(&spec.components)
                    .map(|(s, comp)| comp.values[s.sample(&mut rng)])
                    .sum();
                if sum >= level {
                    hits += 1;
                }
            }
            hits
        })
        .sum();
    let empirical = if trials == 0 { 0.0 } else { exceed as f64 / trials as f64 };
    let bound = chernoff_bound(epsilon, m_bar, spec.b);
    Ok(ChernoffReport {
        epsilon,
        m_bar,
        b: spec.b,
        trials,
        exceed,
        empirical,
        ci95: wilson(exceed, trials),
        bound,
        satisfied: empirical <= bound,
    })
}
