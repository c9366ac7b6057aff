use serde::{Deserialize, Serialize};

use crate::info::Bits;

/// A rate pair `(R1, R2)` in bits per channel use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePair {
    pub r1: Bits,
    pub r2: Bits,
}

impl RatePair {
    pub fn new(r1: Bits, r2: Bits) -> Self {
        RatePair { r1, r2 }
    }

    pub fn scale(self, s: f64) -> Self {
        RatePair::new(self.r1 * s, self.r2 * s)
    }
}

/// Unclamped right-hand sides `(a, b, c)` of
/// `R1 <= a, R2 <= b, R1 + R2 <= c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionBounds {
    pub r1: Bits,
    pub r2: Bits,
    pub sum: Bits,
}

impl RegionBounds {
    pub fn max_abs_diff(&self, other: &RegionBounds) -> f64 {
        (self.r1 - other.r1)
            .abs()
            .max((self.r2 - other.r2).abs())
            .max((self.sum - other.sum).abs())
    }

    /// True when every bound of `self` is at most the matching bound of `other` + `tol`.
    pub fn dominated_by(&self, other: &RegionBounds, tol: f64) -> bool {
        self.r1 <= other.r1 + tol && self.r2 <= other.r2 + tol && self.sum <= other.sum + tol
    }

    pub fn clamp(self) -> RegionPoly {
        RegionPoly {
            r1_max: self.r1.max(0.0),
            r2_max: self.r2.max(0.0),
            sum_max: self.sum.max(0.0),
        }
    }
}

/// The pentagon `{0 <= R1 <= a, 0 <= R2 <= b, R1 + R2 <= c}` with
/// nonnegative `a, b, c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionPoly {
    pub r1_max: Bits,
    pub r2_max: Bits,
    pub sum_max: Bits,
}

const DEDUP_TOL: f64 = 1e-12;

impl RegionPoly {
    pub fn scaled(&self, s: f64) -> RegionPoly {
        RegionPoly {
            r1_max: self.r1_max * s,
            r2_max: self.r2_max * s,
            sum_max: self.sum_max * s,
        }
    }

    /// Vertices in counterclockwise order starting at the origin, without
    /// duplicates. Between one (the origin) and five points.
    pub fn corners(&self) -> Vec<RatePair> {
        let c = self.sum_max;
        let a = self.r1_max.min(c);
        let b = self.r2_max.min(c);
        let candidates = [
            RatePair::new(0.0, 0.0),
            RatePair::new(a, 0.0),
            RatePair::new(a, b.min(c - a)),
            RatePair::new(a.min(c - b), b),
            RatePair::new(0.0, b),
        ];
        let mut out: Vec<RatePair> = Vec::with_capacity(5);
        for p in candidates {
            let dup = out
                .iter()
                .any(|q| (q.r1 - p.r1).abs() <= DEDUP_TOL && (q.r2 - p.r2).abs() <= DEDUP_TOL);
            if !dup {
                out.push(p);
            }
        }
        out
    }

    pub fn contains(&self, p: RatePair, tol: f64) -> bool {
        self.violation(p) <= tol
    }

    /// Largest amount by which `p` breaks one of the five half-planes
    /// (`<= 0` inside).
    pub fn violation(&self, p: RatePair) -> f64 {
        (p.r1 - self.r1_max)
            .max(p.r2 - self.r2_max)
            .max(p.r1 + p.r2 - self.sum_max)
            .max(-p.r1)
            .max(-p.r2)
    }

    /// Largest weighted rate `w1 R1 + w2 R2` over the pentagon.
    pub fn support(&self, w1: f64, w2: f64) -> f64 {
        self.corners()
            .iter()
            .map(|p| w1 * p.r1 + w2 * p.r2)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}
