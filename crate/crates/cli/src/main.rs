//! Command-line front end: runs registered claims at a chosen truncation
//! degree and emits human-readable or JSON reports. Exit status is 0 iff
//! every requested claim passes; configuration problems exit with 2.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use annrel_core::claims::{self, RunOptions};
use annrel_core::lie::{CartanType, SignConvention};
use annrel_core::report::VerificationReport;

#[derive(Parser)]
#[command(
    name = "annrel",
    version,
    about = "Exact finite-degree verification of annihilating-field relation identities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run claims against the kernel oracles and print one report per claim.
    Verify(VerifyArgs),
    /// List the registered claim ids with their anchors.
    ListClaims {
        /// Emit a machine-readable JSON array instead of text.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Args)]
struct VerifyArgs {
    /// Cartan type, e.g. A1, A2, C2, G2.
    #[arg(long = "type")]
    cartan: Option<String>,
    /// Level (a positive integer).
    #[arg(long)]
    level: Option<i64>,
    /// Truncation degree for the graded comparisons.
    #[arg(long)]
    degree: Option<usize>,
    /// Claim id; repeat the flag to run several.
    #[arg(long = "claim")]
    claims: Vec<String>,
    /// Output format.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Directory for the advisory slice cache (env ANNREL_CACHE_DIR also works).
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Run the requested claims concurrently, one thread each.
    #[arg(long)]
    parallel: bool,
    /// Use the flipped structure-constant sign convention.
    #[arg(long)]
    flip_signs: bool,
    /// Optional TOML config file; explicit flags win over its keys.
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Config-file mirror of the verify flags.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    #[serde(rename = "type")]
    cartan: Option<String>,
    level: Option<i64>,
    degree: Option<usize>,
    claims: Option<Vec<String>>,
    format: Option<String>,
    cache_dir: Option<PathBuf>,
    parallel: Option<bool>,
    flip_signs: Option<bool>,
}

struct RunConfig {
    cartan: CartanType,
    level: i64,
    degree: usize,
    claims: Vec<String>,
    format: Format,
    cache_dir: Option<PathBuf>,
    parallel: bool,
    convention: SignConvention,
}

fn resolve_config(args: VerifyArgs) -> Result<RunConfig> {
    let file: FileConfig = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read config file {}", path.display()))?;
            toml::from_str(&text)
                .with_context(|| format!("cannot parse config file {}", path.display()))?
        }
        None => FileConfig::default(),
    };

    let type_str = args
        .cartan
        .or(file.cartan)
        .ok_or_else(|| anyhow!("missing --type (e.g. --type A1)"))?;
    let cartan: CartanType = type_str.parse().map_err(|e| {
        anyhow!("{e}; supported: A<l> (l >= 1), B<l>/C<l> (l >= 2), D<l> (l >= 4), E6-E8, F4, G2")
    })?;
    let level = args
        .level
        .or(file.level)
        .ok_or_else(|| anyhow!("missing --level"))?;
    if level < 1 {
        bail!("level must be a positive integer, got {level}");
    }
    let degree = args
        .degree
        .or(file.degree)
        .ok_or_else(|| anyhow!("missing --degree"))?;
    let claims_list = if args.claims.is_empty() {
        file.claims.unwrap_or_default()
    } else {
        args.claims
    };
    if claims_list.is_empty() {
        bail!("no claims requested; pass --claim <id> (see list-claims)");
    }
    for id in &claims_list {
        let info = claims::find_claim(id)
            .ok_or_else(|| anyhow!("unknown claim {id:?}; see list-claims"))?;
        let min = (level + claims::min_cutoff_offset(info.id, cartan)) as usize;
        if degree < min {
            bail!(
                "claim {} needs --degree >= {min} at level {level} (degree < k+{}), got {degree}",
                info.id,
                claims::min_cutoff_offset(info.id, cartan)
            );
        }
    }
    let format = match args.format {
        Some(f) => f,
        None => match file.format.as_deref() {
            Some("json") => Format::Json,
            Some("human") | None => Format::Human,
            Some(other) => bail!("unknown format {other:?}; use human or json"),
        },
    };
    let cache_dir = args
        .cache_dir
        .or_else(|| std::env::var_os(annrel_core::cache::CACHE_ENV_VAR).map(PathBuf::from))
        .or(file.cache_dir);
    let convention = if args.flip_signs || file.flip_signs.unwrap_or(false) {
        SignConvention::Flipped
    } else {
        SignConvention::Standard
    };
    Ok(RunConfig {
        cartan,
        level,
        degree,
        claims: claims_list,
        format,
        cache_dir,
        parallel: args.parallel || file.parallel.unwrap_or(false),
        convention,
    })
}

fn run_verify(cfg: RunConfig) -> Result<bool> {
    let options = RunOptions {
        convention: cfg.convention,
        cache_dir: cfg.cache_dir.clone(),
    };
    let reports: Vec<Result<VerificationReport, claims::ClaimError>> = if cfg.parallel {
        std::thread::scope(|scope| {
            let handles: Vec<_> = cfg
                .claims
                .iter()
                .map(|id| {
                    let options = options.clone();
                    scope.spawn(move || {
                        claims::run_claim_with(id, cfg.cartan, cfg.level, cfg.degree, &options)
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        })
    } else {
        cfg.claims
            .iter()
            .map(|id| claims::run_claim_with(id, cfg.cartan, cfg.level, cfg.degree, &options))
            .collect()
    };

    let mut all_pass = true;
    for result in reports {
        let report = result.map_err(|e| anyhow!("{e}"))?;
        all_pass &= report.passed();
        match cfg.format {
            Format::Json => println!("{}", report.to_json()),
            Format::Human => print!("{}", report.render_human()),
        }
    }
    Ok(all_pass)
}

fn list_claims(json: bool) {
    if json {
        let entries: Vec<serde_json::Value> = claims::CLAIMS
            .iter()
            .map(|c| {
                serde_json::json!({
                    "id": c.id,
                    "anchor": c.anchor,
                    "description": c.description,
                })
            })
            .collect();
        println!("{}", serde_json::Value::Array(entries));
    } else {
        for c in claims::CLAIMS {
            println!("{:<22} {:<32} {}", c.id, c.anchor, c.description);
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::ListClaims { json } => {
            list_claims(json);
            ExitCode::SUCCESS
        }
        Command::Verify(args) => match resolve_config(args).and_then(run_verify) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::FAILURE,
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::from(2)
            }
        },
    }
}
