use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use nrpolar_core::sim::{self, CodeSpec, RunConfig};
use nrpolar_core::{selftest, Error, SnrKind};

#[derive(Parser)]
#[command(
    name = "nrpolar",
    version,
    about = "5G NR polar codes with distributed-CRC list decoding"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte-Carlo BLER / early-termination sweep.
    Simulate(SimulateArgs),
    /// Print the code layout (information set, CRC positions, interleaver) as JSON.
    Inspect(CodeArgs),
    /// Run the built-in consistency checks.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct CodeArgs {
    /// Built-in code: pbch, pdcch_a or pdcch_b.
    #[arg(long, conflicts_with_all = ["n", "a"])]
    preset: Option<String>,
    /// Block length N (with --a).
    #[arg(long, requires = "a")]
    n: Option<usize>,
    /// Message length A (with --n); the 24-bit CRC is appended.
    #[arg(long, requires = "n")]
    a: Option<usize>,
}

impl CodeArgs {
    fn code_spec(&self) -> Result<Option<CodeSpec>> {
        Ok(match (&self.preset, self.n, self.a) {
            (Some(p), _, _) => Some(CodeSpec::preset(p)?),
            (None, Some(n), Some(a)) => Some(CodeSpec::nr(&format!("nr_{n}_{a}"), n, a)),
            _ => None,
        })
    }
}

#[derive(Args)]
struct SimulateArgs {
    /// TOML or JSON run configuration; flags below override its fields.
    #[arg(long, short)]
    config: Option<PathBuf>,
    #[command(flatten)]
    code: CodeArgs,
    /// Decoders as variant:L, comma separated (variants: plain, ck, cr, cs).
    #[arg(long, short)]
    decoders: Option<String>,
    /// SNR points in dB, comma separated.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        conflicts_with = "snr_range"
    )]
    snr: Option<Vec<f64>>,
    /// SNR grid as start:stop:step in dB.
    #[arg(long, allow_hyphen_values = true)]
    snr_range: Option<String>,
    /// What the SNR refers to: esn0 or ebn0.
    #[arg(long)]
    snr_kind: Option<SnrKind>,
    #[arg(long)]
    seed: Option<u64>,
    /// Upper bound on frames per SNR point.
    #[arg(long)]
    max_frames: Option<u64>,
    /// Stop a point once every decoder has this many frame errors.
    #[arg(long)]
    min_errors: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Directory for summary.csv, et_by_crc_index.csv and manifest.json.
    #[arg(long, short, env = "NRPOLAR_OUT_DIR")]
    out_dir: Option<PathBuf>,
    /// Do not print per-point progress.
    #[arg(long, short)]
    quiet: bool,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Only run checks whose name contains this string.
    #[arg(long)]
    filter: Option<String>,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(args) => simulate(args),
        Command::Inspect(args) => inspect(args),
        Command::Selftest(args) => run_selftest(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            let invariant = e
                .chain()
                .any(|c| matches!(c.downcast_ref::<Error>(), Some(Error::Invariant(_))));
            ExitCode::from(if invariant { 3 } else { 1 })
        }
    }
}

fn build_config(args: &SimulateArgs) -> Result<RunConfig> {
    let mut cfg = match &args.config {
        Some(path) => {
            RunConfig::load(path).with_context(|| format!("loading {}", path.display()))?
        }
        None => {
            let code = args.code.code_spec()?.unwrap_or(CodeSpec::preset("pbch")?);
            RunConfig::new(code, Vec::new(), Vec::new())
        }
    };
    if args.config.is_some() {
        if let Some(code) = args.code.code_spec()? {
            cfg.code = code;
        }
    }
    if let Some(d) = &args.decoders {
        cfg.decoders = sim::parse_decoders(d)?;
    }
    if let Some(snr) = &args.snr {
        cfg.snr_db = snr.clone();
    }
    if let Some(range) = &args.snr_range {
        let parts: Vec<f64> = range
            .split(':')
            .map(|t| t.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .with_context(|| format!("parsing --snr-range {range:?}"))?;
        let [start, stop, step] = parts[..] else {
            bail!("--snr-range expects start:stop:step");
        };
        cfg.snr_db = sim::snr_range(start, stop, step)?;
    }
    if let Some(kind) = args.snr_kind {
        cfg.snr_kind = kind;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(m) = args.max_frames {
        cfg.max_frames = m;
    }
    if let Some(m) = args.min_errors {
        cfg.min_frame_errors = m;
    }
    if args.threads.is_some() {
        cfg.threads = args.threads;
    }
    if args.out_dir.is_some() {
        cfg.out_dir = args.out_dir.clone();
    }
    if cfg.decoders.is_empty() {
        bail!("no decoders given (use --decoders, e.g. ck:8,cr:8,cs:8)");
    }
    if cfg.snr_db.is_empty() {
        bail!("no SNR points given (use --snr or --snr-range)");
    }
    Ok(cfg)
}

fn simulate(args: SimulateArgs) -> Result<ExitCode> {
    let cfg = build_config(&args)?;
    cfg.validate()?;
    let quiet = args.quiet;
    let result = sim::run_sweep_with(&cfg, |p| {
        if !quiet {
            eprintln!(
                "{:<8} {:>7.2} dB  frames {:>9}  errors {:>6}  bler {:.3e}  eps {:.4}",
                p.decoder.to_string(),
                p.snr_db,
                p.stats.frames,
                p.stats.e_tot,
                p.stats.bler(),
                p.stats.epsilon(),
            );
        }
    })?;
    let dir = cfg.out_dir.clone().unwrap_or_else(|| PathBuf::from("."));
    let files = sim::write_outputs(&result, &dir)?;
    println!("{}", files.summary.display());
    println!("{}", files.per_crc.display());
    println!("{}", files.manifest.display());
    Ok(ExitCode::SUCCESS)
}

fn inspect(args: CodeArgs) -> Result<ExitCode> {
    let spec = args.code_spec()?.unwrap_or(CodeSpec::preset("pbch")?);
    let code = spec.build()?;
    println!("{}", serde_json::to_string_pretty(&code.summary())?);
    Ok(ExitCode::SUCCESS)
}

fn run_selftest(args: SelftestArgs) -> Result<ExitCode> {
    let reports = selftest::run(args.seed, args.filter.as_deref());
    if reports.is_empty() {
        bail!(
            "no check matches {:?}; available: {}",
            args.filter.unwrap_or_default(),
            selftest::check_names().join(", ")
        );
    }
    if args.json {
        println!("{}", serde_json::to_string_pretty(&reports)?);
    } else {
        for r in &reports {
            let mark = if r.passed { "ok  " } else { "FAIL" };
            println!("{mark} {:<30} {}", r.name, r.detail);
        }
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        eprintln!("{failed} check(s) failed");
        ExitCode::from(3)
    })
}
