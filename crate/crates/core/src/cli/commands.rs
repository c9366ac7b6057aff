use std::fs;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::Serialize;

use super::args::*;
use super::builtin::{builtin, DEFAULT_BUILTIN};
use super::output::{csv_field, csv_header, Outputs};
use crate::adversary::{enumerate_strategies, mu_for, Strategy};
use crate::binning::{
    estimate_error, induced_joint, leakage_max, sample_binning, tv_uniform, BinCounts, ErrorEstimate, ProtocolParams,
    Rates, StrategyLeakage,
};
use crate::caps::Caps;
use crate::channels::{AuxInput, MacWiretapSpec, Model, Pmf, SpecFile};
use crate::error::{Error, Result};
use crate::lemmas::{
    atypical_decay, chernoff_variant_check, entropy_given_wiretap, lemma1_check, lemma2_check, proof_params,
    rate_constraint_report, source_gammas, ChernoffSpec, Component, DrawSetup, EpsConvention, LetterEntropies,
    RateConstraints, StrategyChoice,
};
use crate::regions::{optimize_hull_of, region_formula, HullReport, Quantity, SearchOptions, HULL_CSV_COLUMNS, SCHEMA_VERSION};

/// Shared state of one invocation.
#[derive(Debug, Clone)]
pub struct Ctx {
    pub caps: Caps,
    pub out: PathBuf,
    /// Spec recorded in a manifest being replayed; replaces any path or builtin.
    pub spec_override: Option<SpecFile>,
}

impl Ctx {
    fn load(&self, args: &ChannelArgs, alpha: Option<f64>) -> Result<(SpecFile, MacWiretapSpec)> {
        let file = match (&self.spec_override, &args.spec, &args.builtin) {
            (Some(f), _, _) => f.clone(),
            (None, Some(path), _) => serde_json::from_str(&read_file(path)?)?,
            (None, None, Some(name)) => builtin(name)?,
            (None, None, None) => builtin(DEFAULT_BUILTIN)?,
        };
        let base = file.clone().into_spec()?;
        let spec = base.with_model(args.model.unwrap_or(base.model), alpha.unwrap_or(base.alpha))?;
        Ok((file, spec))
    }
}

/// Reads a file, naming it in the error.
pub fn read_file(path: &std::path::Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())).into())
}

fn floats(s: &str, what: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidParameter(format!("{what}: '{t}' is not a number")))
        })
        .collect()
}

pub fn parse_rates(s: &str) -> Result<Rates> {
    match floats(s, "rates")?.as_slice() {
        &[a, b, c, d] => {
            let r = Rates::new(a, b, c, d);
            r.validate()?;
            Ok(r)
        }
        v => Err(Error::InvalidParameter(format!("rates need four values R1,R2,R~1,R~2, got {}", v.len()))),
    }
}

pub fn parse_aux(s: &str, spec: &MacWiretapSpec) -> Result<AuxInput> {
    let aux = if s == "identity" {
        AuxInput::identity(spec.alph_x1, spec.alph_x2)
    } else if let Some(rest) = s.strip_prefix("bsc:") {
        match floats(rest, "aux")?.as_slice() {
            &[p1, p2] => AuxInput::binary_bsc(p1, p2)?,
            _ => return Err(Error::InvalidParameter("bsc aux needs two crossover probabilities".into())),
        }
    } else {
        serde_json::from_str(&read_file(std::path::Path::new(s))?)?
    };
    aux.check_against(spec)?;
    Ok(aux)
}

/// `1,3` or `1:1,3:2` (position:user).
pub fn parse_strategy(s: &str, model: Model, n: usize) -> Result<Strategy> {
    let mut positions = Vec::new();
    let mut decisions = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let bad = || Error::InvalidParameter(format!("cannot parse strategy entry '{part}'"));
        match part.split_once(':') {
            Some((p, u)) => {
                positions.push(p.parse().map_err(|_| bad())?);
                decisions.push(u.trim_start_matches('u').parse().map_err(|_| bad())?);
            }
            None => positions.push(part.parse().map_err(|_| bad())?),
        }
    }
    let decisions = (model == Model::Model1).then_some(decisions);
    Strategy::new(model, n, positions, decisions)
}

fn parse_pair(s: &str) -> Result<(usize, usize)> {
    let v: Vec<usize> = s
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| Error::InvalidParameter(format!("'{t}' is not a size"))))
        .collect::<Result<_>>()?;
    match v.as_slice() {
        &[a, b] => Ok((a, b)),
        _ => Err(Error::InvalidParameter("expected two sizes".into())),
    }
}

#[derive(Serialize)]
struct Versioned<'a, T: Serialize> {
    schema_version: u32,
    check: &'a str,
    report: T,
}

fn versioned<T: Serialize>(out: &mut Outputs, check: &str, report: T) -> Result<()> {
    out.add_json(
        &format!("verify-{check}.json"),
        &Versioned {
            schema_version: SCHEMA_VERSION,
            check,
            report,
        },
    )
}

const MAC_WIRETAP_FORMULA: &str = "R1<=I(U1;Y|U2)-I(U1;V); R2<=I(U2;Y|U1)-I(U2;V); R1+R2<=I(U1U2;Y)-I(U1U2;V)";

pub fn cmd_region(ctx: &Ctx, args: &RegionArgs) -> Result<(SpecFile, Outputs)> {
    let (file, spec) = ctx.load(&args.channel, None)?;
    let alphas = if args.alpha.is_empty() { vec![spec.alpha] } else { args.alpha.clone() };
    let quantity = match args.quantity.as_str() {
        "mac-wiretap" => Quantity::MacWiretap,
        _ => Quantity::Theorem,
    };
    let opts = SearchOptions {
        budget: args.budget,
        seed: args.seed,
        alph_u: args.alph_u.as_deref().map(parse_pair).transpose()?,
        refine_rounds: args.refine,
    };
    let formula = match quantity {
        Quantity::Theorem => region_formula(spec.model),
        Quantity::MacWiretap => MAC_WIRETAP_FORMULA,
    };
    let mut csv = csv_header(
        &[
            ("schema_version", SCHEMA_VERSION.to_string()),
            ("quantity", quantity.name().to_string()),
            ("bounds", formula.to_string()),
            ("rows", "vertices of the convex hull of per-auxiliary pentagons, counterclockwise from the origin".into()),
            ("units", "bits per channel use; aux_id empty for the origin".into()),
        ],
        HULL_CSV_COLUMNS,
    );
    let mut reports = Vec::new();
    for &a in &alphas {
        let s = spec.with_model(spec.model, a)?;
        let hull = optimize_hull_of(&s, &opts, quantity)?;
        for v in &hull.vertices {
            let id = v.aux_id.map(|i| i.to_string()).unwrap_or_default();
            csv.push_str(&format!("{},{},{},{},{}\n", a, s.model, v.r1, v.r2, id));
        }
        reports.push(HullReport {
            schema_version: SCHEMA_VERSION,
            quantity: quantity.name().to_string(),
            model: s.model,
            alpha: a,
            budget: opts.budget,
            seed: opts.seed,
            refine_rounds: opts.refine_rounds,
            max_sum_rate: hull.max_sum_rate(),
            hull,
        });
    }
    let mut out = Outputs::new(&ctx.out);
    out.add("region.csv", csv);
    out.add_json("region.json", &reports)?;
    Ok((file, out))
}

#[derive(Debug, Clone, Serialize)]
pub struct SimReport {
    pub schema_version: u32,
    pub model: Model,
    pub alpha: f64,
    pub n: usize,
    pub mu: usize,
    pub seed: u64,
    pub rates: Rates,
    pub counts: BinCounts,
    pub effective_rates: Rates,
    pub num_strategies: usize,
    pub error: ErrorEstimate,
    pub max_leakage: StrategyLeakage,
    pub max_mi_wz: f64,
    pub tv_uniform: f64,
}

pub const LEAKAGE_CSV_COLUMNS: &str = "strategy,leakage,mi_wz";

pub fn cmd_sim(ctx: &Ctx, args: &SimArgs, dir: PathBuf) -> Result<(SpecFile, Outputs, SimReport)> {
    let (file, spec) = ctx.load(&args.channel, args.alpha)?;
    let aux = parse_aux(&args.aux, &spec)?;
    let mu = args.mu.unwrap_or_else(|| mu_for(spec.alpha, args.n));
    let params = ProtocolParams {
        n: args.n,
        rates: parse_rates(&args.rates)?,
        seed: args.seed,
        aux,
        spec,
    };
    params.validate()?;
    let binning = sample_binning(&params, &ctx.caps)?;
    let (aux, spec) = (&params.aux, &params.spec);
    let lm = leakage_max(&binning, aux, spec, mu, &ctx.caps)?;
    let error = estimate_error(&binning, aux, spec, args.trials, args.seed, &ctx.caps)?;
    let max_leakage = lm
        .table
        .iter()
        .find(|t| t.strategy == lm.strategy)
        .cloned()
        .expect("maximizer comes from the table");
    let report = SimReport {
        schema_version: SCHEMA_VERSION,
        model: spec.model,
        alpha: spec.alpha,
        n: params.n,
        mu,
        seed: params.seed,
        rates: params.rates,
        counts: binning.counts,
        effective_rates: binning.counts.effective_rates(params.n),
        num_strategies: lm.table.len(),
        error,
        max_leakage,
        max_mi_wz: lm.max_mi_wz,
        tv_uniform: tv_uniform(&binning, aux, &ctx.caps)?,
    };
    let mut csv = csv_header(
        &[
            ("schema_version", SCHEMA_VERSION.to_string()),
            ("leakage", "D(P_{W1W2F1F2Z} || uniform x P_Z) in bits".into()),
            ("mi_wz", "I(W1,W2;Z) in bits".into()),
            ("rows", format!("every strategy with {mu} tapped positions out of {}, in enumeration order", params.n)),
        ],
        LEAKAGE_CSV_COLUMNS,
    );
    for t in &lm.table {
        csv.push_str(&format!("{},{},{}\n", csv_field(&t.label), t.leakage, t.mi_wz));
    }
    let mut out = Outputs::new(&dir);
    out.add_json("sim.json", &report)?;
    out.add("leakage.csv", csv);
    Ok((file, out, report))
}

pub const SWEEP_CSV_COLUMNS: &str =
    "point,alpha,n,mu,R1,R2,R1_pub,R2_pub,error_prob,error_lo,error_hi,max_leakage,max_mi_wz,tv_uniform";

pub fn cmd_sweep(ctx: &Ctx, args: &SweepArgs) -> Result<(SpecFile, Outputs)> {
    if args.n.is_empty() || args.rates.is_empty() {
        return Err(Error::InvalidParameter("sweep needs at least one n and one rate point".into()));
    }
    let alphas: Vec<Option<f64>> = if args.alpha.is_empty() {
        vec![None]
    } else {
        args.alpha.iter().map(|&a| Some(a)).collect()
    };
    let mut out = Outputs::new(&ctx.out);
    let mut csv = csv_header(
        &[
            ("schema_version", SCHEMA_VERSION.to_string()),
            ("rows", "one protocol run per point; details in point-NNNN/".into()),
            ("error", "Monte-Carlo decoding error with Wilson 95% interval".into()),
            ("max_leakage", "largest D(P_{W1W2F1F2Z} || uniform x P_Z) over strategies, bits".into()),
        ],
        SWEEP_CSV_COLUMNS,
    );
    let mut file = None;
    let mut k = 0usize;
    for &alpha in &alphas {
        for &n in &args.n {
            for rates in &args.rates {
                let point = SimArgs {
                    channel: args.channel.clone(),
                    alpha,
                    n,
                    mu: args.mu,
                    rates: rates.clone(),
                    trials: args.trials,
                    seed: args.seed,
                    aux: args.aux.clone(),
                };
                let name = format!("point-{k:04}");
                let (f, sub, r) = cmd_sim(ctx, &point, ctx.out.join(&name))?;
                csv.push_str(&format!(
                    "{k},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                    r.alpha,
                    r.n,
                    r.mu,
                    r.rates.r1,
                    r.rates.r2,
                    r.rates.r1_pub,
                    r.rates.r2_pub,
                    r.error.error_prob,
                    r.error.ci95.lo,
                    r.error.ci95.hi,
                    r.max_leakage.leakage,
                    r.max_mi_wz,
                    r.tv_uniform
                ));
                out.add_nested(&name, sub, &ctx.caps, &f, &Command::Sim(point))?;
                file = Some(f);
                k += 1;
            }
        }
    }
    out.add("sweep.csv", csv);
    Ok((file.expect("at least one point"), out))
}

#[derive(Serialize)]
struct DecompositionReport {
    n: usize,
    mu: usize,
    draws: u64,
    strategies: usize,
    /// Largest `|total - conditional - first_user|`.
    max_abs_error: f64,
    /// Largest `I(W;Z) - D` (should not be positive).
    max_mi_excess: f64,
    max_leakage: f64,
    holds: bool,
}

pub fn cmd_verify(ctx: &Ctx, cmd: &VerifyCmd) -> Result<(SpecFile, Outputs)> {
    let mut out = Outputs::new(&ctx.out);
    let caps = &ctx.caps;
    let file = match cmd {
        VerifyCmd::Lemma1(a) => {
            let (file, spec) = ctx.load(&a.channel, None)?;
            let aux = parse_aux(&a.aux, &spec)?;
            let le = LetterEntropies::new(&aux, &spec)?;
            let gamma = source_gammas(&le, a.n, [a.eps; 2]);
            let setup = DrawSetup {
                n: a.n,
                rates: parse_rates(&a.rates)?,
                aux,
                spec,
                seed: a.seed,
            };
            versioned(&mut out, "lemma1", lemma1_check(&setup, gamma, a.draws, caps)?)?;
            file
        }
        VerifyCmd::Lemma2(a) => {
            let (file, spec) = ctx.load(&a.channel, a.alpha)?;
            let aux = parse_aux(&a.aux, &spec)?;
            let mu = a.mu.unwrap_or_else(|| mu_for(spec.alpha, a.n));
            let rates = match &a.rates {
                Some(r) => parse_rates(r)?,
                None => RateConstraints::new(&aux, &spec)?.operating_point(a.margin),
            };
            let counts = BinCounts::from_rates(a.n, &rates)?;
            let le = LetterEntropies::new(&aux, &spec)?;
            let convention = if a.convention == "per-user" { EpsConvention::PerUser } else { EpsConvention::Max };
            let params = proof_params(&le, spec.model, a.n, mu, &counts, a.epsilon, a.delta, convention)?;
            let setup = DrawSetup {
                n: a.n,
                rates,
                aux,
                spec,
                seed: a.seed,
            };
            versioned(&mut out, "lemma2", lemma2_check(&setup, &params, mu, a.draws, caps)?)?;
            file
        }
        VerifyCmd::Chernoff(a) => {
            let spec = ChernoffSpec::iid(a.count, Component::scaled_bernoulli(a.p, a.b), a.b);
            versioned(&mut out, "chernoff", chernoff_variant_check(&spec, a.eps, a.trials, a.seed)?)?;
            builtin(DEFAULT_BUILTIN)?
        }
        VerifyCmd::Entropy(a) => {
            let (file, spec) = ctx.load(&a.channel, a.alpha)?;
            let aux = parse_aux(&a.aux, &spec)?;
            let choice = match &a.strategy {
                Some(s) => StrategyChoice::Given(parse_strategy(s, spec.model, a.n)?),
                None => StrategyChoice::Worst {
                    mu: a.mu.unwrap_or_else(|| mu_for(spec.alpha, a.n)),
                },
            };
            versioned(&mut out, "entropy", entropy_given_wiretap(&aux, &spec, a.n, &choice, caps)?)?;
            file
        }
        VerifyCmd::Rates(a) => {
            let (file, spec) = ctx.load(&a.channel, a.alpha)?;
            let aux = parse_aux(&a.aux, &spec)?;
            versioned(&mut out, "rates", rate_constraint_report(&aux, &spec)?)?;
            file
        }
        VerifyCmd::Decomposition(a) => {
            let (file, spec) = ctx.load(&a.channel, a.alpha)?;
            let aux = parse_aux(&a.aux, &spec)?;
            let mu = a.mu.unwrap_or_else(|| mu_for(spec.alpha, a.n));
            let strategies: Vec<Strategy> = enumerate_strategies(spec.model, a.n, mu, caps)?.collect();
            let setup = DrawSetup {
                n: a.n,
                rates: parse_rates(&a.rates)?,
                aux,
                spec,
                seed: a.seed,
            };
            let per_draw: Vec<[f64; 3]> = (0..a.draws)
                .into_par_iter()
                .map(|d| {
                    let b = sample_binning(&setup.draw(d), caps)?;
                    let mut acc = [0.0f64, f64::NEG_INFINITY, 0.0];
                    for s in &strategies {
                        let j = induced_joint(&b, s, &setup.aux, &setup.spec, caps)?;
                        let kd = j.kl_decomposition();
                        acc[0] = acc[0].max((kd.total - kd.conditional - kd.first_user).abs());
                        acc[1] = acc[1].max(j.mi_wz() - kd.total);
                        acc[2] = acc[2].max(kd.total);
                    }
                    Ok(acc)
                })
                .collect::<Result<_>>()?;
            let fold = |k: usize, init: f64| per_draw.iter().map(|x| x[k]).fold(init, f64::max);
            let max_abs_error = fold(0, 0.0);
            let max_mi_excess = fold(1, f64::NEG_INFINITY);
            let report = DecompositionReport {
                n: a.n,
                mu,
                draws: a.draws,
                strategies: strategies.len(),
                max_abs_error,
                max_mi_excess,
                max_leakage: fold(2, 0.0),
                holds: max_abs_error <= 1e-9 && max_mi_excess <= 1e-9,
            };
            versioned(&mut out, "decomposition", report)?;
            file
        }
        VerifyCmd::Decay(a) => {
            let p = Pmf::new(vec![1.0 - a.p, a.p])?;
            versioned(&mut out, "decay", atypical_decay(&p, a.eps, &a.ns))?;
            builtin(DEFAULT_BUILTIN)?
        }
    };
    Ok((file, out))
}
