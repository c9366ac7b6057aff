mod common;

use common::{oracle_bounds, oracle_mac_wiretap, random_aux, random_kernel};
use mawtc::channels::{CondKernel, MacWiretapSpec, Model, Pmf, SpecFile};
use mawtc::regions::{
    bounds_for, bounds_mac_wiretap, check_inclusion, optimize_hull, optimize_hull_of, region_for, Quantity,
    RegionBounds, SearchOptions,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn as_array(b: RegionBounds) -> [f64; 3] {
    [b.r1, b.r2, b.sum]
}

fn max_diff(a: [f64; 3], b: [f64; 3]) -> f64 {
    (0..3).map(|k| (a[k] - b[k]).abs()).fold(0.0, f64::max)
}

fn random_spec(rng: &mut ChaCha8Rng, model: Model, alpha: f64, nx: (usize, usize), ny: usize) -> MacWiretapSpec {
    let main = random_kernel(rng, vec![nx.0, nx.1], ny);
    let wtap = (model == Model::Generalized).then(|| random_kernel(rng, vec![nx.0, nx.1], 3));
    MacWiretapSpec::new(model, alpha, main, wtap).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bounds_match_the_reference(seed in any::<u64>(), alpha in 0.0f64..=1.0,
                                  nu1 in 1usize..4, nu2 in 1usize..4, nx1 in 2usize..4, nx2 in 2usize..4, ny in 2usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for model in [Model::Model1, Model::Model2, Model::Model3, Model::Generalized] {
            let spec = random_spec(&mut rng, model, alpha, (nx1, nx2), ny);
            let aux = random_aux(&mut rng, (nu1, nu2), (nx1, nx2));
            let lib = as_array(bounds_for(&aux, &spec).unwrap());
            prop_assert!(max_diff(lib, oracle_bounds(&aux, &spec, model)) < 1e-10, "{model:?}");
            if model == Model::Generalized {
                let mw = as_array(bounds_mac_wiretap(&aux, &spec).unwrap());
                prop_assert!(max_diff(mw, oracle_mac_wiretap(&aux, &spec)) < 1e-10);
            }
        }
    }

    #[test]
    fn bounds_shrink_with_alpha(seed in any::<u64>(), a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for model in [Model::Model1, Model::Model2, Model::Generalized] {
            let s = random_spec(&mut rng, model, lo, (2, 2), 3);
            let aux = random_aux(&mut rng, (2, 2), (2, 2));
            let small = bounds_for(&aux, &s.with_model(model, hi).unwrap()).unwrap();
            let large = bounds_for(&aux, &s).unwrap();
            prop_assert!(small.dominated_by(&large, 1e-12));
        }
    }
}

#[test]
fn known_noiseless_values() {
    let spec = common::noiseless_pair(Model::Model2, 0.5, None);
    let p = region_for(&mawtc::channels::AuxInput::identity(2, 2), &spec).unwrap();
    assert!((p.r1_max - 0.75).abs() < 1e-12);
    assert!((p.sum_max - 1.25).abs() < 1e-12);
}

#[test]
fn constant_wiretap_output_reduces_to_direct_taps() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let main = random_kernel(&mut rng, vec![3, 2], 4);
        let gen = MacWiretapSpec::new(
            Model::Generalized,
            0.35,
            main.clone(),
            Some(CondKernel::constant(vec![3, 2], Pmf::point(2, 1)).unwrap()),
        )
        .unwrap();
        let m3 = MacWiretapSpec::new(Model::Model3, 0.35, main, None).unwrap();
        let aux = random_aux(&mut rng, (2, 3), (3, 2));
        let d = as_array(bounds_for(&aux, &gen).unwrap());
        assert!(max_diff(d, as_array(bounds_for(&aux, &m3).unwrap())) < 1e-12);
    }
}

#[test]
fn spec_files_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let spec = random_spec(&mut rng, Model::Generalized, 0.2, (2, 3), 3);
    let text = spec.to_json().unwrap();
    let back = MacWiretapSpec::from_json(&text).unwrap();
    assert_eq!(back, spec);
    let file: SpecFile = serde_json::from_str(&text).unwrap();
    assert_eq!(file.alphabets.v, Some(3));
}

#[test]
fn malformed_spec_files_are_rejected() {
    let bad = r#"{"model":"model1","alpha":0.5,"alphabets":{"x1":2,"x2":2,"y":2},
                 "main":[[[0.5,0.5],[1.0,0.0]],[[0.2,0.7],[0.0,1.0]]]}"#;
    assert!(MacWiretapSpec::from_json(bad).is_err());
    let no_v = r#"{"model":"generalized","alpha":0.5,"alphabets":{"x1":1,"x2":1,"y":1},"main":[[[1.0]]]}"#;
    assert!(MacWiretapSpec::from_json(no_v).is_err());
    let alpha = r#"{"model":"model2","alpha":1.5,"alphabets":{"x1":1,"x2":1,"y":1},"main":[[[1.0]]]}"#;
    assert!(MacWiretapSpec::from_json(alpha).is_err());
}

#[test]
fn hull_contains_every_sampled_pentagon() {
    let spec = common::noiseless_pair(Model::Model1, 0.25, None);
    let opts = SearchOptions { budget: 40, seed: 3, ..Default::default() };
    let hull = optimize_hull(&spec, &opts).unwrap();
    for i in 0..opts.budget {
        let aux = mawtc::regions::aux_sample(&spec, &opts, i);
        let p = region_for(&aux, &spec).unwrap();
        assert!(check_inclusion(&p, &hull).included);
    }
    // identity inputs are sample 0 and reach (0.75, 0.75)
    assert!(hull.max_sum_rate() >= 1.5 - 1e-12);
}

#[test]
fn model_hulls_are_nested() {
    let m1 = common::noiseless_pair(Model::Model1, 0.5, None);
    let m2 = m1.with_model(Model::Model2, 0.5).unwrap();
    let opts = SearchOptions { budget: 60, seed: 8, ..Default::default() };
    let h1 = optimize_hull(&m1, &opts).unwrap();
    let h2 = optimize_hull(&m2, &opts).unwrap();
    assert!(check_inclusion(&h1, &h2).included);
}

#[test]
fn mac_wiretap_hull_needs_a_wiretap_channel() {
    let spec = common::noiseless_pair(Model::Generalized, 0.0, Some(common::xor_wtap()));
    let opts = SearchOptions { budget: 30, seed: 1, ..Default::default() };
    let a = optimize_hull_of(&spec, &opts, Quantity::MacWiretap).unwrap();
    let b = optimize_hull_of(&spec, &opts, Quantity::Theorem).unwrap();
    assert_eq!(a.vertices, b.vertices);
    let plain = common::noiseless_pair(Model::Model1, 0.0, None);
    assert!(optimize_hull_of(&plain, &opts, Quantity::MacWiretap).is_err());
}
