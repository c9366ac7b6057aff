//! Achievable rate regions, their convex hulls and inclusion checks.

mod export;
mod formulas;
mod hull;
mod optimize;
mod poly;

pub use export::{hull_csv, region_formula, HullReport, HULL_CSV_COLUMNS, SCHEMA_VERSION};
pub use formulas::{
    bounds_for, bounds_generalized, bounds_mac_wiretap, bounds_model1, bounds_model2, bounds_model3,
    region_for, region_generalized, region_model1, region_model2, region_model3,
};
pub use hull::{
    check_inclusion, convex_hull, polygon_violation, AuxRecord, HullVertex, InclusionReport, Region,
    RegionHull, INCLUSION_TOL,
};
pub use optimize::{aux_sample, evaluate_samples, optimize_hull, optimize_hull_of, Quantity, SearchOptions, FIXED_SEEDS};
pub use poly::{RatePair, RegionBounds, RegionPoly};
