//! Command-line arguments. Every command struct is serializable so that the
//! run manifest can record it and `replay` can run it again.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::channels::Model;

#[derive(Debug, Parser)]
#[command(name = "mawtc", version, about = "Rate regions and random-binning experiments for wiretapped multiple-access channels")]
pub struct Cli {
    /// Worker threads; 0 uses every core. Outputs do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// Output directory.
    #[arg(long, global = true, default_value = "mawtc-out")]
    pub out: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Convex hull of the achievable region for each alpha.
    Region(RegionArgs),
    /// One protocol instance: exact leakage per strategy and decoding error.
    Sim(SimArgs),
    /// Numerical checks of the proof machinery.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Protocol runs over alpha x n x rates, one directory per point.
    Sweep(SweepArgs),
    /// Re-run a manifest and compare the outputs byte for byte.
    #[serde(skip)]
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ChannelArgs {
    /// Channel spec file (JSON).
    #[arg(long, conflicts_with = "builtin")]
    pub spec: Option<PathBuf>,
    /// Bundled channel spec: noiseless-pair, noiseless-adder, bsc-pair,
    /// superposition-wiretap or generalized-v.
    #[arg(long)]
    pub builtin: Option<String>,
    /// Attack model: 1, 2, 3 or g. Defaults to the spec's.
    #[arg(long)]
    pub model: Option<Model>,
}

pub fn parse_alpha(s: &str) -> Result<f64, String> {
    let a: f64 = s.trim().parse().map_err(|_| format!("'{s}' is not a number"))?;
    if (0.0..=1.0).contains(&a) {
        Ok(a)
    } else {
        Err(format!("alpha {a} outside [0, 1]"))
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct RegionArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    /// Comma-separated tapping fractions. Defaults to the spec's.
    #[arg(long, value_delimiter = ',', value_parser = parse_alpha)]
    pub alpha: Vec<f64>,
    /// Auxiliary samples per alpha.
    #[arg(long, default_value_t = 1000)]
    pub budget: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Rounds of local refinement after sampling.
    #[arg(long, default_value_t = 0)]
    pub refine: usize,
    /// Auxiliary alphabet sizes `|U1|,|U2|`; defaults to the input alphabets.
    #[arg(long)]
    pub alph_u: Option<String>,
    /// Region to compute.
    #[arg(long, default_value = "theorem", value_parser = ["theorem", "mac-wiretap"])]
    pub quantity: String,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SimArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    /// Tapping fraction. Defaults to the spec's.
    #[arg(long, value_parser = parse_alpha)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    /// Tapped positions; defaults to floor(alpha n).
    #[arg(long)]
    pub mu: Option<usize>,
    /// `R1,R2,R~1,R~2` in bits per symbol.
    #[arg(long, default_value = "0.25,0.25,0.25,0.25")]
    pub rates: String,
    /// Monte-Carlo decoding trials.
    #[arg(long, default_value_t = 2000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Auxiliary input: `identity`, `bsc:P1,P2` or a JSON file.
    #[arg(long, default_value = "identity")]
    pub aux: String,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SweepArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[arg(long, value_delimiter = ',', value_parser = parse_alpha)]
    pub alpha: Vec<f64>,
    /// Comma-separated blocklengths.
    #[arg(long, value_delimiter = ',', default_value = "4")]
    pub n: Vec<usize>,
    #[arg(long)]
    pub mu: Option<usize>,
    /// Rate points `R1,R2,R~1,R~2`; repeat the flag for several points.
    #[arg(long, default_value = "0.25,0.25,0.25,0.25")]
    pub rates: Vec<String>,
    #[arg(long, default_value_t = 2000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "identity")]
    pub aux: String,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ReplayArgs {
    /// Manifest written by an earlier run.
    pub manifest: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "kebab-case")]
pub enum VerifyCmd {
    /// Mean distance of the bin indices from uniform against its bound.
    Lemma1(Lemma1Args),
    /// Frequency of large wiretapper leakage against its bound.
    Lemma2(Lemma2Args),
    /// Chernoff tail for sums of scaled Bernoulli variables.
    Chernoff(ChernoffArgs),
    /// Closed-form conditional entropies against exact enumeration.
    Entropy(EntropyArgs),
    /// Binning-rate constraints and their elimination.
    Rates(RatesArgs),
    /// Chain-rule split of the leakage over binnings and strategies.
    Decomposition(DecompositionArgs),
    /// Exact atypicality probabilities of a binary source over n.
    Decay(DecayArgs),
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct Lemma1Args {
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[arg(long, default_value = "identity")]
    pub aux: String,
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    #[arg(long, default_value = "0.3,0.3,0.3,0.3")]
    pub rates: String,
    /// Slack in `gamma_j = n (1 - eps) H(U_j)`.
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[arg(long, default_value_t = 1000)]
    pub draws: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct Lemma2Args {
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[arg(long, value_parser = parse_alpha)]
    pub alpha: Option<f64>,
    #[arg(long, default_value = "identity")]
    pub aux: String,
    #[arg(long, default_value_t = 6)]
    pub n: usize,
    #[arg(long)]
    pub mu: Option<usize>,
    /// Rates; defaults to the operating point at `--margin` from the secrecy constraints.
    #[arg(long)]
    pub rates: Option<String>,
    #[arg(long, default_value_t = -0.15, allow_hyphen_values = true)]
    pub margin: f64,
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    /// `max` or `per-user`.
    #[arg(long, default_value = "max", value_parser = ["max", "per-user"])]
    pub convention: String,
    #[arg(long, default_value_t = 500)]
    pub draws: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ChernoffArgs {
    /// Number of summands.
    #[arg(long, default_value_t = 50)]
    pub count: usize,
    /// Probability that a summand equals `b`.
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    #[arg(long, default_value_t = 0.02)]
    pub b: f64,
    #[arg(long, default_value_t = 0.5)]
    pub eps: f64,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct EntropyArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[arg(long, value_parser = parse_alpha)]
    pub alpha: Option<f64>,
    #[arg(long, default_value = "bsc:0.1,0.25")]
    pub aux: String,
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    #[arg(long)]
    pub mu: Option<usize>,
    /// Tapped positions such as `1,3`, or `1:1,3:2` with user choices for
    /// the first model. Without it the worst strategy is searched.
    #[arg(long)]
    pub strategy: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct RatesArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[arg(long, value_parser = parse_alpha)]
    pub alpha: Option<f64>,
    #[arg(long, default_value = "identity")]
    pub aux: String,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct DecompositionArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[arg(long, value_parser = parse_alpha)]
    pub alpha: Option<f64>,
    #[arg(long, default_value = "identity")]
    pub aux: String,
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    #[arg(long)]
    pub mu: Option<usize>,
    #[arg(long, default_value = "0.25,0.25,0.25,0.25")]
    pub rates: String,
    #[arg(long, default_value_t = 50)]
    pub draws: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct DecayArgs {
    /// `P(U = 1)` of the binary source.
    #[arg(long, default_value_t = 0.2)]
    pub p: f64,
    #[arg(long, default_value_t = 0.2)]
    pub eps: f64,
    #[arg(long, value_delimiter = ',', default_value = "4,5,6,7,8,9,10,11,12")]
    pub ns: Vec<usize>,
}
