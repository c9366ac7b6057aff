//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test --release --test acceptance` (the test profile is
//! already optimized, so plain `cargo test` works too).

mod common;

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use common::{oracle_bounds, oracle_decomposition, oracle_mac_wiretap, random_aux, random_kernel, source_z_table, wfz_table};
use mawtc::adversary::{binomial, enumerate_strategies, mu_for, strategy_count, Strategy};
use mawtc::binning::{
    estimate_error, induced_joint, leakage_max, sample_binning, BinCounts, ProtocolParams, Rates,
};
use mawtc::channels::{AuxInput, CondKernel, MacWiretapSpec, Model, Pmf};
use mawtc::lemmas::{
    chernoff_variant_check, entropy_given_wiretap, lemma1_check, lemma2_check, proof_params, BoundStatus,
    ChernoffSpec, Component, DrawSetup, EpsConvention, LetterEntropies, RateConstraints, StrategyChoice,
};
use mawtc::regions::{
    bounds_generalized, bounds_mac_wiretap, bounds_model1, bounds_model2, bounds_model3, check_inclusion,
    region_model1, region_model2, region_model3, RegionBounds,
};
use mawtc::stats::wilson;
use mawtc::Caps;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::Value;

const MODELS: [Model; 4] = [Model::Model1, Model::Model2, Model::Model3, Model::Generalized];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn arr(b: RegionBounds) -> [f64; 3] {
    [b.r1, b.r2, b.sum]
}

fn diff(a: [f64; 3], b: [f64; 3]) -> f64 {
    (0..3).map(|k| (a[k] - b[k]).abs()).fold(0.0, f64::max)
}

fn random_channel(rng: &mut ChaCha8Rng, nx: (usize, usize)) -> CondKernel {
    let ny = rng.random_range(2..=4);
    random_kernel(rng, vec![nx.0, nx.1], ny)
}

const ALPHAS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

/// The 200 x 5 x 3 sweep shared by the first two criteria.
fn sweep_instances() -> Vec<(AuxInput, CondKernel, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut out = Vec::new();
    for _ in 0..3 {
        let nx = (rng.random_range(2..=3), rng.random_range(2..=3));
        let main = random_channel(&mut rng, nx);
        for _ in 0..200 {
            let nu = (rng.random_range(2..=3), rng.random_range(2..=3));
            let aux = random_aux(&mut rng, nu, nx);
            for &a in &ALPHAS {
                out.push((aux.clone(), main.clone(), a));
            }
        }
    }
    out
}

fn c1_model_equality() -> Outcome {
    let inst = sweep_instances();
    let (mut eq, mut ora) = (0.0f64, 0.0f64);
    for (aux, main, a) in &inst {
        let s1 = MacWiretapSpec::new(Model::Model1, *a, main.clone(), None).unwrap();
        let s3 = MacWiretapSpec::new(Model::Model3, *a, main.clone(), None).unwrap();
        let p1 = region_model1(aux, &s1).unwrap();
        let p3 = region_model3(aux, &s3).unwrap();
        eq = eq.max(diff([p1.r1_max, p1.r2_max, p1.sum_max], [p3.r1_max, p3.r2_max, p3.sum_max]));
        let b1 = arr(bounds_model1(aux, &s1).unwrap());
        eq = eq.max(diff(b1, arr(bounds_model3(aux, &s3).unwrap())));
        ora = ora.max(diff(b1, oracle_bounds(aux, &s1, Model::Model1)));
    }
    outcome(
        eq <= 1e-12 && ora <= 1e-10,
        format!("{} instances, max |model1 - model3| = {eq:.1e}, max |model1 - reference| = {ora:.1e}", inst.len()),
    )
}

fn c2_inclusion() -> Outcome {
    let inst = sweep_instances();
    let (mut worst, mut all_incl, mut ora) = (f64::NEG_INFINITY, true, 0.0f64);
    for (aux, main, a) in &inst {
        let s1 = MacWiretapSpec::new(Model::Model1, *a, main.clone(), None).unwrap();
        let s2 = MacWiretapSpec::new(Model::Model2, *a, main.clone(), None).unwrap();
        let b1 = arr(bounds_model1(aux, &s1).unwrap());
        let b2 = arr(bounds_model2(aux, &s2).unwrap());
        ora = ora.max(diff(b2, oracle_bounds(aux, &s2, Model::Model2)));
        for k in 0..3 {
            worst = worst.max(b1[k] - b2[k]);
        }
        let r1 = region_model1(aux, &s1).unwrap();
        let r2 = region_model2(aux, &s2).unwrap();
        all_incl &= check_inclusion(&r1, &r2).included;
    }
    outcome(
        worst <= 1e-9 && all_incl && ora <= 1e-10,
        format!(
            "{} instances, max (bound1 - bound2) = {worst:.1e}, all included = {all_incl}, max |model2 - reference| = {ora:.1e}",
            inst.len()
        ),
    )
}

fn c3_degenerations() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let (mut const_v, mut alpha0, mut ora) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..50 {
        let nx = (rng.random_range(2..=3), rng.random_range(2..=3));
        let main = random_channel(&mut rng, nx);
        let nv = rng.random_range(1..=3);
        let row = common::random_pmf(&mut rng, nv);
        let a = rng.random_range(0.0..=1.0);
        let nu = (rng.random_range(2..=3), rng.random_range(2..=3));
        let aux = random_aux(&mut rng, nu, nx);
        let g = MacWiretapSpec::new(
            Model::Generalized,
            a,
            main.clone(),
            Some(CondKernel::constant(vec![nx.0, nx.1], row).unwrap()),
        )
        .unwrap();
        let m3 = MacWiretapSpec::new(Model::Model3, a, main.clone(), None).unwrap();
        let bg = arr(bounds_generalized(&aux, &g).unwrap());
        const_v = const_v.max(diff(bg, arr(bounds_model3(&aux, &m3).unwrap())));
        ora = ora.max(diff(bg, oracle_bounds(&aux, &m3, Model::Model3)));
    }
    for _ in 0..50 {
        let nx = (rng.random_range(2..=3), rng.random_range(2..=3));
        let main = random_channel(&mut rng, nx);
        let nv = rng.random_range(2..=3);
        let wtap = random_kernel(&mut rng, vec![nx.0, nx.1], nv);
        let nu = (rng.random_range(2..=3), rng.random_range(2..=3));
        let aux = random_aux(&mut rng, nu, nx);
        let g = MacWiretapSpec::new(Model::Generalized, 0.0, main, Some(wtap)).unwrap();
        let bg = arr(bounds_generalized(&aux, &g).unwrap());
        alpha0 = alpha0.max(diff(bg, arr(bounds_mac_wiretap(&aux, &g).unwrap())));
        ora = ora.max(diff(bg, oracle_mac_wiretap(&aux, &g)));
    }
    outcome(
        const_v <= 1e-12 && alpha0 <= 1e-12 && ora <= 1e-10,
        format!(
            "constant V: max diff {const_v:.1e}; alpha = 0: max diff {alpha0:.1e}; max |library - reference| = {ora:.1e}"
        ),
    )
}

fn c4_closed_forms() -> Outcome {
    let aux = AuxInput::binary_bsc(0.1, 0.25).unwrap();
    let caps = Caps::default();
    let mut worst = 0.0f64;
    let mut count = 0usize;
    for model in MODELS {
        let spec = common::binary_spec(model, 0.5);
        for n in 2..=6 {
            let strategies: Vec<Strategy> =
                (0..=n).flat_map(|mu| enumerate_strategies(model, n, mu, &caps).unwrap()).collect();
            count += strategies.len();
            let d = strategies
                .par_iter()
                .map(|s| {
                    entropy_given_wiretap(&aux, &spec, n, &StrategyChoice::Given(s.clone()), &caps)
                        .unwrap()
                        .max_abs_diff
                })
                .reduce(|| 0.0, f64::max);
            worst = worst.max(d);
        }
    }
    outcome(worst <= 1e-9, format!("{count} strategies, max |closed form - enumeration| = {worst:.1e}"))
}

fn c5_worst_strategy() -> Outcome {
    let caps = Caps::default();
    let spec = common::binary_spec(Model::Model1, 0.5);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let auxes = [
        AuxInput::binary_bsc(0.1, 0.25).unwrap(),
        random_aux(&mut rng, (2, 2), (2, 2)),
        random_aux(&mut rng, (2, 2), (2, 2)),
    ];
    let cases: Vec<(usize, usize, usize)> = (0..auxes.len())
        .flat_map(|a| (1..=8).flat_map(move |n| (0..=n).map(move |mu| (a, n, mu))))
        .collect();
    let results: Vec<(bool, f64)> = cases
        .par_iter()
        .map(|&(a, n, mu)| {
            let r = entropy_given_wiretap(&auxes[a], &spec, n, &StrategyChoice::Worst { mu }, &caps).unwrap();
            (r.attained_by_full_taps.unwrap().iter().all(|&b| b), r.max_abs_diff)
        })
        .collect();
    let attained = results.iter().filter(|r| r.0).count();
    let gap = results.iter().map(|r| r.1).fold(0.0, f64::max);
    outcome(
        attained == results.len() && gap <= 1e-9,
        format!(
            "{attained}/{} (aux, n, mu) cases attain the minimum with all taps on one user; max |closed-form minimum - exhaustive minimum| = {gap:.1e}",
            results.len()
        ),
    )
}

fn c6_decomposition() -> Outcome {
    let caps = Caps::default();
    let aux = AuxInput::binary_bsc(0.1, 0.25).unwrap();
    let n = 4;
    let rates = Rates::new(0.25, 0.5, 0.25, 0.25);
    let mut worst_identity = 0.0f64;
    let mut worst_oracle = 0.0f64;
    let mut joints = 0usize;
    for model in MODELS {
        let spec = common::binary_spec(model, 0.5);
        let strategies: Vec<Strategy> =
            (0..=n).flat_map(|mu| enumerate_strategies(model, n, mu, &caps).unwrap()).collect();
        let tables: Vec<_> = strategies.par_iter().map(|s| source_z_table(&aux, &spec, s)).collect();
        let res: Vec<(f64, f64)> = (0..50u64)
            .into_par_iter()
            .flat_map_iter(|seed| {
                let p = ProtocolParams { n, rates, seed, aux: aux.clone(), spec: spec.clone() };
                let b = sample_binning(&p, &caps).unwrap();
                let per_user = [b.counts.user_total(1), b.counts.user_total(2)];
                strategies
                    .iter()
                    .zip(&tables)
                    .map(|(s, t)| {
                        let d = induced_joint(&b, s, &aux, &spec, &caps).unwrap().kl_decomposition();
                        let (tot, cond, first) = oracle_decomposition(&wfz_table(t, &b), per_user, n);
                        let id = (d.total - d.conditional - d.first_user).abs();
                        let ora = (d.total - tot).abs().max((d.conditional - cond).abs()).max((d.first_user - first).abs());
                        (id, ora)
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        joints += res.len();
        for (a, b) in res {
            worst_identity = worst_identity.max(a);
            worst_oracle = worst_oracle.max(b);
        }
    }
    outcome(
        worst_identity <= 1e-9 && worst_oracle <= 1e-9,
        format!(
            "{joints} (binning, strategy) pairs, max |total - conditional - first| = {worst_identity:.1e}, max |library - reference| = {worst_oracle:.1e}"
        ),
    )
}

fn c7_lemma1() -> Outcome {
    let caps = Caps::default();
    let spec = common::binary_spec(Model::Model3, 0.5);
    let skew = AuxInput::direct(Pmf::new(vec![0.6, 0.4]).unwrap(), Pmf::new(vec![0.6, 0.4]).unwrap());
    let points = [
        ("uniform, R = R~ = 0.2", AuxInput::identity(2, 2), Rates::new(0.2, 0.2, 0.2, 0.2)),
        ("uniform, R = 0.3, R~ = 0.2", AuxInput::identity(2, 2), Rates::new(0.3, 0.3, 0.2, 0.2)),
        ("Bernoulli(0.4), R = R~ = 0.1", skew, Rates::new(0.1, 0.1, 0.1, 0.1)),
    ];
    let eps = 0.1;
    let mut pass = true;
    let mut parts = Vec::new();
    for (label, aux, rates) in points {
        let le = LetterEntropies::new(&aux, &spec).unwrap();
        let mut means = Vec::new();
        for n in [6usize, 10] {
            let eff = BinCounts::from_rates(n, &rates).unwrap().effective_rates(n);
            let inside = (0..2).all(|j| eff.key(j + 1) + eff.public(j + 1) < (1.0 - eps) * le.h_u[j]);
            let gamma = [0, 1].map(|j| (1.0 - eps) * n as f64 * le.h_u[j]);
            let setup = DrawSetup { n, rates, aux: aux.clone(), spec: spec.clone(), seed: 11 };
            let r = lemma1_check(&setup, gamma, 1000, &caps).unwrap();
            pass &= inside && r.status == BoundStatus::Satisfied;
            parts.push(format!("{label} n={n}: mean TV {:.3} <= rhs {:.3}", r.mean_tv, r.rhs));
            means.push(r.mean_tv);
        }
        pass &= means[1] < means[0];
    }
    outcome(pass, parts.join("; "))
}

fn chernoff_sets() -> Vec<(String, ChernoffSpec, f64)> {
    let mut v: Vec<(String, ChernoffSpec, f64)> = [
        (50usize, 0.5, 0.02, 0.5),
        (100, 0.1, 1.0, 0.5),
        (20, 0.3, 0.5, 1.0),
        (200, 0.05, 0.1, 0.3),
        (10, 0.9, 1.0, 0.1),
        (80, 0.25, 0.25, 0.2),
        (30, 0.5, 2.0, 0.7),
    ]
    .into_iter()
    .map(|(count, p, b, eps)| {
        (
            format!("{count} x Bernoulli({p}) * {b}, eps {eps}"),
            ChernoffSpec::iid(count, Component::scaled_bernoulli(p, b), b),
            eps,
        )
    })
    .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mixed: Vec<Component> = (0..40)
        .map(|_| {
            let vals = vec![0.0, rng.random_range(0.0..0.5), rng.random_range(0.5..1.0)];
            let p = common::random_pmf(&mut rng, 3);
            Component { values: vals, probs: p.into_vec() }
        })
        .collect();
    let mean: f64 = mixed.iter().map(Component::mean).sum();
    v.push(("40 three-point variables in [0, 1], eps 0.4".into(), ChernoffSpec { components: mixed.clone(), b: 1.0, m_bar: None }, 0.4));
    v.push((
        "same with a loose mean bound, eps 0.2".into(),
        ChernoffSpec { components: mixed, b: 1.0, m_bar: Some(1.2 * mean) },
        0.2,
    ));
    v.push((
        "60 uniform points {0, 0.5, 1}, eps 0.25".into(),
        ChernoffSpec::iid(60, Component { values: vec![0.0, 0.5, 1.0], probs: vec![1.0 / 3.0; 3] }, 1.0),
        0.25,
    ));
    v
}

/// Whole bits per user for a total rate target, rounded inward or outward.
fn bits(n: usize, rate: f64, inward: bool) -> f64 {
    let x = n as f64 * rate;
    let b = if inward { (x + 1e-9).floor() } else { (x - 1e-9).ceil() };
    b.max(0.0) / n as f64
}

/// Key and public rates with `R_j + R~_j` at `B_j + margin` (snapped to whole
/// bits, away from the threshold) and `R~_j` at the decodability threshold.
fn secrecy_rates(rc: &RateConstraints, n: usize, margin: f64) -> Rates {
    let inward = margin < 0.0;
    let mut r = [0.0; 4];
    for j in 0..2 {
        let pubr = bits(n, rc.a[j], false);
        let total = bits(n, rc.b[j].min(rc.k[j]) + margin, inward).max(pubr);
        r[j] = total - pubr;
        r[2 + j] = pubr;
    }
    Rates::new(r[0], r[1], r[2], r[3])
}

fn c8_lemma2() -> Outcome {
    let sets = chernoff_sets();
    let mut ok = 0;
    let mut tight = f64::NEG_INFINITY;
    for (i, (_, spec, eps)) in sets.iter().enumerate() {
        let r = chernoff_variant_check(spec, *eps, 100_000, i as u64).unwrap();
        if r.satisfied {
            ok += 1;
        }
        tight = tight.max(r.empirical / r.bound);
    }
    let caps = Caps::default();
    let aux = AuxInput::identity(2, 2);
    let spec = common::binary_spec(Model::Model3, 0.5);
    let n = 6;
    let mu = mu_for(spec.alpha, n);
    let rc = RateConstraints::new(&aux, &spec).unwrap();
    let rates = secrecy_rates(&rc, n, -0.15);
    let setup = DrawSetup { n, rates, aux: aux.clone(), spec: spec.clone(), seed: 3 };
    let counts = setup.counts().unwrap();
    let le = LetterEntropies::new(&aux, &spec).unwrap();
    let params = proof_params(&le, Model::Model3, n, mu, &counts, 0.1, 0.1, EpsConvention::Max).unwrap();
    let r = lemma2_check(&setup, &params, mu, 500, &caps).unwrap();
    let lemma_ok = match r.status {
        BoundStatus::Satisfied => r.rhs < 1.0 && r.frequency <= r.rhs,
        BoundStatus::Vacuous => r.rhs >= 1.0,
        _ => false,
    };
    outcome(
        ok == sets.len() && lemma_ok,
        format!(
            "Chernoff {ok}/{} sets below the bound (largest empirical/bound {tight:.3}); \
             n=6 model 3 at rates ({:.3}, {:.3}, {:.3}, {:.3}): {:?}, {}/{} draws with leakage >= {:.3}, rhs = 2^{:.1}, max leakage {:.3}",
            sets.len(),
            rates.r1,
            rates.r2,
            rates.r1_pub,
            rates.r2_pub,
            r.status,
            r.violations,
            r.draws,
            r.threshold,
            r.log2_rhs,
            r.max_leakage
        ),
    )
}

fn bsc_pair(model: Model, alpha: f64) -> MacWiretapSpec {
    let rows: Vec<Vec<f64>> = (0..4)
        .map(|x| {
            let (a, b) = (x / 2, x % 2);
            (0..4)
                .map(|y| {
                    let f = |u: usize, v: usize| if u == v { 0.9 } else { 0.1 };
                    f(a, y / 2) * f(b, y % 2)
                })
                .collect()
        })
        .collect();
    MacWiretapSpec::new(model, alpha, CondKernel::from_rows(vec![2, 2], rows, 1e-12).unwrap(), None).unwrap()
}

fn c9_protocol() -> Outcome {
    let caps = Caps::default();
    let aux = AuxInput::identity(2, 2);
    let mut pass = true;
    let mut parts = Vec::new();

    // (a) decoding error against the public rate
    let spec = bsc_pair(Model::Model1, 0.5);
    let rc = RateConstraints::new(&aux, &spec).unwrap();
    for n in [4usize, 6] {
        let mut arms = Vec::new();
        for margin in [0.2, -0.2] {
            let pubr = [0, 1].map(|j| bits(n, rc.a[j] + margin, margin < 0.0));
            let rates = Rates::new(0.0, 0.0, pubr[0], pubr[1]);
            let per: Vec<(u64, u64)> = (0..20u64)
                .into_par_iter()
                .map(|seed| {
                    let p = ProtocolParams { n, rates, seed, aux: aux.clone(), spec: spec.clone() };
                    let b = sample_binning(&p, &caps).unwrap();
                    let e = estimate_error(&b, &aux, &spec, 500, seed, &caps).unwrap();
                    (e.errors, e.trials)
                })
                .collect();
            let (errs, trials) = per.iter().fold((0, 0), |a, x| (a.0 + x.0, a.1 + x.1));
            arms.push((pubr[0], wilson(errs, trials), errs as f64 / trials as f64));
        }
        let sep = arms[0].1.hi < arms[1].1.lo;
        pass &= sep;
        parts.push(format!(
            "n={n} error: R~={:.3} -> {:.3} [{:.3}, {:.3}] vs R~={:.3} -> {:.3} [{:.3}, {:.3}]",
            arms[0].0, arms[0].2, arms[0].1.lo, arms[0].1.hi, arms[1].0, arms[1].2, arms[1].1.lo, arms[1].1.hi
        ));
    }

    // (b) worst-strategy leakage against the secrecy constraints
    let spec = common::noiseless_pair(Model::Model1, 0.5, None);
    let rc = RateConstraints::new(&aux, &spec).unwrap();
    for n in [4usize, 6] {
        let mu = mu_for(spec.alpha, n);
        let mut means = Vec::new();
        for margin in [-0.15, 0.15] {
            let rates = secrecy_rates(&rc, n, margin);
            let leaks: Vec<f64> = (0..50u64)
                .into_par_iter()
                .map(|seed| {
                    let p = ProtocolParams { n, rates, seed: 1000 + seed, aux: aux.clone(), spec: spec.clone() };
                    let b = sample_binning(&p, &caps).unwrap();
                    leakage_max(&b, &aux, &spec, mu, &caps).unwrap().leakage
                })
                .collect();
            means.push((rates.r1 + rates.r1_pub, leaks.iter().sum::<f64>() / leaks.len() as f64));
        }
        pass &= means[0].1 < means[1].1;
        parts.push(format!(
            "n={n} leakage: R+R~={:.3} -> {:.3} vs R+R~={:.3} -> {:.3}",
            means[0].0, means[0].1, means[1].0, means[1].1
        ));
    }
    outcome(pass, parts.join("; "))
}

fn c10_combinatorics() -> Outcome {
    let tri = common::pascal(12);
    let caps = Caps::default();
    let mut pass = true;
    let mut checked = 0;
    for model in MODELS {
        for n in 0..=12 {
            for mu in 0..=n {
                let expect = if model == Model::Model1 { tri[n][mu] << mu } else { tri[n][mu] };
                let listed = enumerate_strategies(model, n, mu, &caps).unwrap().count() as u128;
                pass &= listed == expect && strategy_count(model, n, mu) == expect && binomial(n, mu) == tri[n][mu];
                if model == Model::Model1 && n > 0 {
                    // 2^{(1 + alpha) n} with alpha n = mu
                    pass &= expect < 1u128 << (n + mu);
                }
                checked += 1;
            }
        }
    }
    outcome(pass, format!("{checked} (model, n, mu) triples enumerated and counted"))
}

fn mawtc(dir: &Path, args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_mawtc")).current_dir(dir).args(args).output().expect("binary runs")
}

fn c11_reproducibility() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let runs: [(&str, Vec<&str>); 4] = [
        ("region", vec!["region", "--alpha", "0.25,0.5", "--budget", "200", "--refine", "2", "--model", "model2"]),
        ("sim", vec!["sim", "--builtin", "bsc-pair", "--n", "5", "--trials", "3000", "--seed", "9"]),
        ("sweep", vec!["sweep", "--n", "3,4", "--alpha", "0.25,0.5", "--trials", "500", "--seed", "2"]),
        ("verify", vec!["verify", "lemma1", "--n", "8", "--draws", "300", "--seed", "4"]),
    ];
    let mut pass = true;
    let mut files = 0;
    for (name, args) in &runs {
        let src = format!("{name}-j1");
        let mut a = vec!["--jobs", "1", "--out", src.as_str()];
        a.extend(args.iter().copied());
        let o = mawtc(dir, &a);
        if !o.status.success() {
            return outcome(false, format!("{name} failed: {}", String::from_utf8_lossy(&o.stderr)));
        }
        let manifest = format!("{src}/manifest.json");
        for jobs in ["2", "4", "0"] {
            let out = format!("{name}-j{jobs}");
            let o = mawtc(dir, &["--jobs", jobs, "--out", out.as_str(), "replay", manifest.as_str()]);
            let report: Value = serde_json::from_slice(&o.stdout).unwrap_or(Value::Null);
            pass &= o.status.success() && report["identical"] == true;
            let m: Value = serde_json::from_str(&std::fs::read_to_string(dir.join(&manifest)).unwrap()).unwrap();
            let mut names: Vec<String> = vec!["manifest.json".into()];
            collect_outputs(&m, "", &mut names, dir.join(&src).as_path());
            for f in names {
                let a = std::fs::read(dir.join(&src).join(&f)).unwrap();
                let b = std::fs::read(dir.join(&out).join(&f)).unwrap_or_default();
                pass &= a == b;
                files += 1;
            }
        }
    }
    outcome(pass, format!("{} commands replayed with --jobs 2, 4 and 0; {files} files byte-identical", runs.len()))
}

/// Output files listed in a manifest, including nested sweep points.
fn collect_outputs(m: &Value, prefix: &str, out: &mut Vec<String>, root: &Path) {
    for f in m["outputs"].as_array().into_iter().flatten() {
        let name = format!("{prefix}{}", f["file"].as_str().unwrap());
        if name.ends_with("manifest.json") && name != "manifest.json" {
            let sub: Value = serde_json::from_str(&std::fs::read_to_string(root.join(&name)).unwrap()).unwrap();
            let p = name.trim_end_matches("manifest.json").to_string();
            collect_outputs(&sub, &p, out, root);
        }
        out.push(name);
    }
}

/// Name, check and time limit in seconds.
type Criterion = (&'static str, fn() -> Outcome, u64);

fn main() {
    let criteria: [Criterion; 11] = [
        ("model 1 region equals model 3 region", c1_model_equality, 10),
        ("model 1 region inside model 2 region", c2_inclusion, 10),
        ("generalized region degenerations", c3_degenerations, 5),
        ("closed-form entropies match enumeration", c4_closed_forms, 60),
        ("worst strategy taps a single user", c5_worst_strategy, 30),
        ("leakage chain-rule decomposition", c6_decomposition, 60),
        ("binning uniformity bound", c7_lemma1, 300),
        ("concentration and leakage bounds", c8_lemma2, 300),
        ("error and leakage trends", c9_protocol, 600),
        ("strategy counts", c10_combinatorics, 1),
        ("replay reproducibility", c11_reproducibility, 60),
    ];
    let mut failed = 0;
    for (i, (name, f, limit)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = f();
        let el = t.elapsed();
        let in_time = el <= Duration::from_secs(*limit);
        let pass = o.pass && in_time;
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} [{}] {name} ({:.2} s, limit {limit} s): {}",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            el.as_secs_f64(),
            o.detail
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
