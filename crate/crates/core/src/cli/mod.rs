//! The `mawtc` command-line front end.
//!
//! Every run writes its outputs and a `manifest.json` recording the command,
//! the loaded channel spec, the caps and a SHA-256 digest per output file.
//! `mawtc replay` re-runs a manifest and checks the digests.
//!
//! Errors are printed to stderr as a single JSON object
//! `{"error": {"kind": ..., "message": ...}}` with exit code 1 (runtime) or
//! 2 (usage).

mod args;
mod builtin;
mod commands;
mod output;

use std::ffi::OsString;
use std::path::Path;

use clap::Parser;
use serde::Serialize;

pub use args::*;
pub use builtin::{builtin, builtin_names, BUILTINS, DEFAULT_BUILTIN};
pub use commands::{cmd_region, cmd_sim, cmd_sweep, cmd_verify, parse_aux, parse_rates, parse_strategy, Ctx, SimReport};
pub use output::{sha256_hex, Manifest, OutputDigest, Outputs, MANIFEST_FILE};

use crate::caps::Caps;
use crate::error::{Error, Result};

pub const ENV_MAX_STRATEGIES: &str = "MAWTC_MAX_STRATEGIES";
pub const ENV_MAX_ATOMS: &str = "MAWTC_MAX_ATOMS";
pub const ENV_MAX_SOURCE_SEQS: &str = "MAWTC_MAX_SOURCE_SEQS";

pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
/// A replay finished but produced different bytes.
pub const EXIT_MISMATCH: i32 = 3;

/// Default caps with environment overrides applied.
pub fn caps_from_env() -> Result<Caps> {
    let mut caps = Caps::default();
    for (var, slot) in [
        (ENV_MAX_STRATEGIES, &mut caps.max_strategies),
        (ENV_MAX_ATOMS, &mut caps.max_atoms),
        (ENV_MAX_SOURCE_SEQS, &mut caps.max_source_seqs),
    ] {
        if let Ok(v) = std::env::var(var) {
            *slot = v
                .trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("{var}='{v}' is not a non-negative integer")))?;
        }
    }
    Ok(caps)
}

#[derive(Debug, Serialize)]
pub struct ReplayFile {
    pub file: String,
    pub expected: String,
    pub actual: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct ReplayReport {
    pub identical: bool,
    pub manifest_identical: bool,
    pub mismatched: Vec<ReplayFile>,
}

/// Runs `command` and writes its outputs; returns the manifest path.
fn execute(ctx: &Ctx, command: &Command) -> Result<std::path::PathBuf> {
    let (file, out) = match command {
        Command::Region(a) => cmd_region(ctx, a)?,
        Command::Sim(a) => {
            let (f, o, _) = cmd_sim(ctx, a, ctx.out.clone())?;
            (f, o)
        }
        Command::Verify(v) => cmd_verify(ctx, v)?,
        Command::Sweep(a) => cmd_sweep(ctx, a)?,
        Command::Replay(_) => return Err(Error::InvalidParameter("a manifest cannot record a replay".into())),
    };
    out.finish(&ctx.caps, &file, command)
}

fn replay(ctx: &Ctx, manifest_path: &Path) -> Result<ReplayReport> {
    let manifest = Manifest::load(manifest_path)?;
    let src_dir = manifest_path.parent().unwrap_or(Path::new("."));
    if let (Ok(a), Ok(b)) = (src_dir.canonicalize(), ctx.out.canonicalize()) {
        if a == b {
            return Err(Error::InvalidParameter(
                "replay would overwrite the original outputs; pass a different --out".into(),
            ));
        }
    }
    let rctx = Ctx {
        caps: manifest.caps,
        out: ctx.out.clone(),
        spec_override: Some(manifest.spec.clone()),
    };
    let new_path = execute(&rctx, &manifest.command)?;
    let fresh = Manifest::load(&new_path)?;
    let mut mismatched = Vec::new();
    for o in &manifest.outputs {
        let actual = fresh.outputs.iter().find(|f| f.file == o.file).map(|f| f.sha256.clone());
        if actual.as_deref() != Some(o.sha256.as_str()) {
            mismatched.push(ReplayFile {
                file: o.file.clone(),
                expected: o.sha256.clone(),
                actual,
            });
        }
    }
    let manifest_identical = std::fs::read(manifest_path)? == std::fs::read(&new_path)?;
    Ok(ReplayReport {
        identical: mismatched.is_empty() && manifest_identical && fresh.outputs.len() == manifest.outputs.len(),
        manifest_identical,
        mismatched,
    })
}

fn error_json(kind: &str, message: &str) -> String {
    serde_json::json!({ "error": { "kind": kind, "message": message } }).to_string()
}

fn run_cli(cli: Cli) -> Result<i32> {
    let ctx = Ctx {
        caps: caps_from_env()?,
        out: cli.out.clone(),
        spec_override: None,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    pool.install(|| match &cli.command {
        Command::Replay(r) => {
            let report = replay(&ctx, &r.manifest)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(if report.identical { 0 } else { EXIT_MISMATCH })
        }
        other => {
            let path = execute(&ctx, other)?;
            println!("{}", path.display());
            Ok(0)
        }
    })
}

/// Entry point shared by the binary and the tests; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = e.print();
                    0
                }
                _ => {
                    eprintln!("{}", error_json("usage", &e.to_string()));
                    EXIT_USAGE
                }
            };
        }
    };
    match run_cli(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", error_json(e.kind(), &e.to_string()));
            EXIT_RUNTIME
        }
    }
}
