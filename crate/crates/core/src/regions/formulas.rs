//! Per-auxiliary bounds for each attack model.
//!
//! All four regions share the main-channel terms
//! `I(U1;Y|U2)`, `I(U2;Y|U1)`, `I(U1,U2;Y)` and differ in what the
//! wiretapper's taps cost:
//!
//! | model       | penalty on R1                        |
//! |-------------|--------------------------------------|
//! | 1 and 3     | `alpha I(U1;X1)`                     |
//! | 2           | `alpha I(U1;X1+X2)`                  |
//! | generalized | `I(U1;V) + alpha I(U1;X1|V)`         |
//!
//! and analogously for R2 and the sum rate.

use crate::channels::{joint_full, var, AuxInput, Joint, MacWiretapSpec, Model};
use crate::error::{Error, Result};
use crate::info::{cond_mutual_info, mutual_info, Bits};

use super::poly::{RegionBounds, RegionPoly};

const U1: &[usize] = &[var::U1];
const U2: &[usize] = &[var::U2];
const U12: &[usize] = &[var::U1, var::U2];
const X1: &[usize] = &[var::X1];
const X2: &[usize] = &[var::X2];
const X12: &[usize] = &[var::X1, var::X2];
const Y: &[usize] = &[var::Y];
const V: &[usize] = &[var::V];

/// `I(U1;Y|U2)`, `I(U2;Y|U1)`, `I(U1,U2;Y)`.
fn main_terms(j: &Joint) -> Result<[Bits; 3]> {
    Ok([
        cond_mutual_info(j, U1, Y, U2)?,
        cond_mutual_info(j, U2, Y, U1)?,
        mutual_info(j, U12, Y)?,
    ])
}

fn subtract(main: [Bits; 3], pen: [Bits; 3]) -> RegionBounds {
    RegionBounds {
        r1: main[0] - pen[0],
        r2: main[1] - pen[1],
        sum: main[2] - pen[2],
    }
}

/// Raw bounds when the wiretapper sees each tapped user symbol directly.
fn direct_tap_bounds(aux: &AuxInput, spec: &MacWiretapSpec) -> Result<RegionBounds> {
    let j = joint_full(aux, spec)?;
    let a = spec.alpha;
    let pen = [
        a * mutual_info(&j, U1, X1)?,
        a * mutual_info(&j, U2, X2)?,
        a * mutual_info(&j, U12, X12)?,
    ];
    Ok(subtract(main_terms(&j)?, pen))
}

/// Unclamped bounds of the first attack model.
pub fn bounds_model1(aux: &AuxInput, spec: &MacWiretapSpec) -> Result<RegionBounds> {
    direct_tap_bounds(aux, spec)
}

/// Unclamped bounds of the third attack model. The formula coincides with
/// the first model's.
pub fn bounds_model3(aux: &AuxInput, spec: &MacWiretapSpec) -> Result<RegionBounds> {
    direct_tap_bounds(aux, spec)
}

/// Unclamped bounds of the superposition model.
pub fn bounds_model2(aux: &AuxInput, spec: &MacWiretapSpec) -> Result<RegionBounds> {
    let j = joint_full(aux, spec)?;
    let s_size = spec.alph_sum();
    let js = j.with_derived(X12, s_size, |x| x[0] + x[1])?;
    let s = &[js.num_vars() - 1][..];
    let a = spec.alpha;
    let pen = [
        a * mutual_info(&js, U1, s)?,
        a * mutual_info(&js, U2, s)?,
        a * mutual_info(&js, U12, s)?,
    ];
    Ok(subtract(main_terms(&j)?, pen))
}

/// Unclamped bounds of the generalized model.
pub fn bounds_generalized(aux: &AuxInput, spec: &MacWiretapSpec) -> Result<RegionBounds> {
    if spec.wtap.is_none() {
        return Err(Error::WrongModel(
            "generalized region needs a wiretap channel p(v|x1,x2)".into(),
        ));
    }
    let j = joint_full(aux, spec)?;
    let a = spec.alpha;
    let pen = [
        mutual_info(&j, U1, V)? + a * cond_mutual_info(&j, U1, X1, V)?,
        mutual_info(&j, U2, V)? + a * cond_mutual_info(&j, U2, X2, V)?,
        mutual_info(&j, U12, V)? + a * cond_mutual_info(&j, U12, X12, V)?,
    ];
    Ok(subtract(main_terms(&j)?, pen))
}

/// The multiple-access wiretap region without any tapped positions:
/// `I(U1;Y|U2) - I(U1;V)`, `I(U2;Y|U1) - I(U2;V)`, `I(U1,U2;Y) - I(U1,U2;V)`.
pub fn bounds_mac_wiretap(aux: &AuxInput, spec: &MacWiretapSpec) -> Result<RegionBounds> {
    if spec.wtap.is_none() {
        return Err(Error::WrongModel("needs a wiretap channel p(v|x1,x2)".into()));
    }
    let j = joint_full(aux, spec)?;
    let pen = [
        mutual_info(&j, U1, V)?,
        mutual_info(&j, U2, V)?,
        mutual_info(&j, U12, V)?,
    ];
    Ok(subtract(main_terms(&j)?, pen))
}

/// Unclamped bounds for `spec.model`.
pub fn bounds_for(aux: &AuxInput, spec: &MacWiretapSpec) -> Result<RegionBounds> {
    match spec.model {
        Model::Model1 => bounds_model1(aux, spec),
        Model::Model2 => bounds_model2(aux, spec),
        Model::Model3 => bounds_model3(aux, spec),
        Model::Generalized => bounds_generalized(aux, spec),
    }
}

pub fn region_model1(aux: &AuxInput, spec: &MacWiretapSpec) -> Result<RegionPoly> {
    Ok(bounds_model1(aux, spec)?.clamp())
}

pub fn region_model2(aux: &AuxInput, spec: &MacWiretapSpec) -> Result<RegionPoly> {
    Ok(bounds_model2(aux, spec)?.clamp())
}

pub fn region_model3(aux: &AuxInput, spec: &MacWiretapSpec) -> Result<RegionPoly> {
    Ok(bounds_model3(aux, spec)?.clamp())
}

pub fn region_generalized(aux: &AuxInput, spec: &MacWiretapSpec) -> Result<RegionPoly> {
    Ok(bounds_generalized(aux, spec)?.clamp())
}

/// Region for `spec.model`.
pub fn region_for(aux: &AuxInput, spec: &MacWiretapSpec) -> Result<RegionPoly> {
    Ok(bounds_for(aux, spec)?.clamp())
}
