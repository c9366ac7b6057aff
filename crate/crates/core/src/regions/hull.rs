use serde::{Deserialize, Serialize};

use super::poly::{RatePair, RegionPoly};
use crate::channels::AuxInput;

/// Tolerance used by [`check_inclusion`].
pub const INCLUSION_TOL: f64 = 1e-9;

/// A hull vertex and the auxiliary sample whose pentagon contributed it.
/// `aux_id` is `None` only for the origin when no pentagon supplies it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HullVertex {
    pub r1: f64,
    pub r2: f64,
    pub aux_id: Option<usize>,
}

impl HullVertex {
    pub fn pair(&self) -> RatePair {
        RatePair::new(self.r1, self.r2)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuxRecord {
    pub aux_id: usize,
    pub aux: AuxInput,
}

/// Convex hull of a family of pentagons, counterclockwise from the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionHull {
    pub vertices: Vec<HullVertex>,
    /// One record per distinct `aux_id` among the vertices, sorted by id.
    pub provenance: Vec<AuxRecord>,
}

impl RegionHull {
    /// Hull of `polys`, where `polys[k] = (aux_id, pentagon)`.
    pub fn from_polys(polys: &[(usize, RegionPoly)]) -> Self {
        let mut pts: Vec<HullVertex> = vec![HullVertex {
            r1: 0.0,
            r2: 0.0,
            aux_id: None,
        }];
        for (id, p) in polys {
            for c in p.corners() {
                pts.push(HullVertex {
                    r1: c.r1,
                    r2: c.r2,
                    aux_id: Some(*id),
                });
            }
        }
        RegionHull {
            vertices: convex_hull(pts),
            provenance: Vec::new(),
        }
    }

    /// Attaches the auxiliary inputs referenced by the vertices.
    pub fn with_provenance<F>(mut self, lookup: F) -> Self
    where
        F: Fn(usize) -> AuxInput,
    {
        let mut ids: Vec<usize> = self.vertices.iter().filter_map(|v| v.aux_id).collect();
        ids.sort_unstable();
        ids.dedup();
        self.provenance = ids
            .into_iter()
            .map(|aux_id| AuxRecord {
                aux_id,
                aux: lookup(aux_id),
            })
            .collect();
        self
    }

    /// Largest `w1 R1 + w2 R2` over the hull.
    pub fn support(&self, w1: f64, w2: f64) -> f64 {
        self.vertices
            .iter()
            .map(|v| w1 * v.r1 + w2 * v.r2)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest `R1 + R2` over the hull.
    pub fn max_sum_rate(&self) -> f64 {
        self.support(1.0, 1.0)
    }
}

/// Shared view of pentagons and hulls for inclusion checks.
pub trait Region {
    fn vertex_pairs(&self) -> Vec<RatePair>;
    /// `<= 0` inside; positive values measure how far outside `p` lies.
    fn violation(&self, p: RatePair) -> f64;
}

impl Region for RegionPoly {
    fn vertex_pairs(&self) -> Vec<RatePair> {
        self.corners()
    }

    fn violation(&self, p: RatePair) -> f64 {
        RegionPoly::violation(self, p)
    }
}

impl Region for RegionHull {
    fn vertex_pairs(&self) -> Vec<RatePair> {
        self.vertices.iter().map(HullVertex::pair).collect()
    }

    fn violation(&self, p: RatePair) -> f64 {
        let v: Vec<RatePair> = self.vertex_pairs();
        polygon_violation(&v, p)
    }
}

/// Signed distance-like violation of a convex CCW polygon (max over edges of
/// the outward offset); for degenerate polygons, Euclidean distance.
pub fn polygon_violation(v: &[RatePair], p: RatePair) -> f64 {
    match v.len() {
        0 => f64::INFINITY,
        1 => dist(v[0], p),
        2 => seg_dist(v[0], v[1], p),
        m => (0..m)
            .map(|k| {
                let (a, b) = (v[k], v[(k + 1) % m]);
                let (ex, ey) = (b.r1 - a.r1, b.r2 - a.r2);
                let len = (ex * ex + ey * ey).sqrt();
                // outward normal of a CCW edge is (ey, -ex)
                (ey * (p.r1 - a.r1) - ex * (p.r2 - a.r2)) / len
            })
            .fold(f64::NEG_INFINITY, f64::max),
    }
}

fn dist(a: RatePair, b: RatePair) -> f64 {
    ((a.r1 - b.r1).powi(2) + (a.r2 - b.r2).powi(2)).sqrt()
}

fn seg_dist(a: RatePair, b: RatePair, p: RatePair) -> f64 {
    let (ex, ey) = (b.r1 - a.r1, b.r2 - a.r2);
    let len2 = ex * ex + ey * ey;
    if len2 == 0.0 {
        return dist(a, p);
    }
    let t = (((p.r1 - a.r1) * ex + (p.r2 - a.r2) * ey) / len2).clamp(0.0, 1.0);
    dist(RatePair::new(a.r1 + t * ex, a.r2 + t * ey), p)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InclusionReport {
    pub included: bool,
    /// Largest violation of `outer` over the vertices of `inner`, at least 0.
    pub max_violation: f64,
}

/// Whether every vertex of `inner` lies in `outer` within [`INCLUSION_TOL`].
pub fn check_inclusion(inner: &dyn Region, outer: &dyn Region) -> InclusionReport {
    let max_violation = inner
        .vertex_pairs()
        .into_iter()
        .map(|p| outer.violation(p))
        .fold(0.0, f64::max);
    InclusionReport {
        included: max_violation <= INCLUSION_TOL,
        max_violation,
    }
}

fn cross(o: &HullVertex, a: &HullVertex, b: &HullVertex) -> f64 {
    (a.r1 - o.r1) * (b.r2 - o.r2) - (a.r2 - o.r2) * (b.r1 - o.r1)
}

/// Andrew's monotone chain. Points are sorted by `(r1, r2, aux_id)` first,
/// so equal points keep the smallest id and the output does not depend on
/// input order. Collinear points are dropped. The result is rotated to start
/// at the lowest-then-leftmost vertex, which is the origin for down-closed
/// families.
pub fn convex_hull(mut pts: Vec<HullVertex>) -> Vec<HullVertex> {
    pts.sort_by(|a, b| {
        a.r1.total_cmp(&b.r1)
            .then(a.r2.total_cmp(&b.r2))
            .then(a.aux_id.cmp(&b.aux_id))
    });
    pts.dedup_by(|b, a| (a.r1 - b.r1).abs() <= 1e-12 && (a.r2 - b.r2).abs() <= 1e-12);
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<HullVertex> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 1e-15 {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<HullVertex> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 1e-15 {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    let start = lower
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.r2.total_cmp(&b.r2).then(a.r1.total_cmp(&b.r1)))
        .map(|(i, _)| i)
        .unwrap_or(0);
    lower.rotate_left(start);
    lower
}
