//! Versioned CSV and JSON output for hulls.

use serde::{Deserialize, Serialize};

use super::hull::RegionHull;
use crate::channels::Model;

pub const SCHEMA_VERSION: u32 = 1;
pub const HULL_CSV_COLUMNS: &str = "alpha,model,R1,R2,aux_id";

/// The per-auxiliary bounds behind a hull, as text for file headers.
pub fn region_formula(model: Model) -> &'static str {
    match model {
        Model::Model1 | Model::Model3 => {
            "R1<=I(U1;Y|U2)-alpha*I(U1;X1); R2<=I(U2;Y|U1)-alpha*I(U2;X2); \
             R1+R2<=I(U1U2;Y)-alpha*I(U1U2;X1X2)"
        }
        Model::Model2 => {
            "R1<=I(U1;Y|U2)-alpha*I(U1;X1+X2); R2<=I(U2;Y|U1)-alpha*I(U2;X1+X2); \
             R1+R2<=I(U1U2;Y)-alpha*I(U1U2;X1+X2)"
        }
        Model::Generalized => {
            "R1<=I(U1;Y|U2)-I(U1;V)-alpha*I(U1;X1|V); R2<=I(U2;Y|U1)-I(U2;V)-alpha*I(U2;X2|V); \
             R1+R2<=I(U1U2;Y)-I(U1U2;V)-alpha*I(U1U2;X1X2|V)"
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HullReport {
    pub schema_version: u32,
    pub quantity: String,
    pub model: Model,
    pub alpha: f64,
    pub budget: usize,
    pub seed: u64,
    pub refine_rounds: usize,
    pub max_sum_rate: f64,
    pub hull: RegionHull,
}

/// One CSV block for a hull; `with_header` adds the metadata comment lines
/// and the column row.
pub fn hull_csv(hull: &RegionHull, alpha: f64, model: Model, with_header: bool) -> String {
    let mut out = String::new();
    if with_header {
        out.push_str(&format!("# schema_version={SCHEMA_VERSION}\n"));
        out.push_str("# rows: vertices of the convex hull of per-auxiliary pentagons, counterclockwise from the origin\n");
        out.push_str(&format!("# bounds: {}\n", region_formula(model)));
        out.push_str("# units: bits per channel use; aux_id empty for the origin\n");
        out.push_str(HULL_CSV_COLUMNS);
        out.push('\n');
    }
    for v in &hull.vertices {
        let id = v.aux_id.map(|i| i.to_string()).unwrap_or_default();
        out.push_str(&format!("{},{},{},{},{}\n", alpha, model, v.r1, v.r2, id));
    }
    out
}
