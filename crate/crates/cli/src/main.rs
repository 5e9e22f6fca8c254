use anyhow::Context;
use clap::{Parser, Subcommand};
use sl3cusp_cli::config::{parse_kinds, parse_list};
use sl3cusp_cli::{cmd_dims, cmd_export, cmd_hecke, verify, ExportFormat, ExportTable, RunConfig};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "sl3cusp", version, about = "Cuspidal cohomology and Hecke eigenvalues for Γ₀(3,p)")]
struct Cli {
    /// Plain-text `key = value` config file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides SL3CUSP_OUT and the config file).
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Worker threads (overrides SL3CUSP_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Use the randomized blackbox solver instead of elimination.
    #[arg(long, global = true)]
    wiedemann: bool,
    /// Repeat for more detail (-v per-operator timing, -vv everything).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Cuspidal dimensions for primes in [min, max).
    Dims {
        #[arg(long)]
        min: u32,
        #[arg(long)]
        max: u32,
        /// Comma-separated moduli.
        #[arg(long)]
        q: Option<String>,
        /// CSV path (default: <out-dir>/dims.csv).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Hecke eigenvalues at one level.
    Hecke {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        lmax: Option<u32>,
        /// Operator kinds, e.g. `E,F`.
        #[arg(long)]
        ops: Option<String>,
        /// Comma-separated moduli, tried in order.
        #[arg(long)]
        q: Option<String>,
        /// JSON path (default: <out-dir>/hecke/p<P>.json).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the invariant suites; exits nonzero on failure.
    Verify {
        /// Also run the full pipeline at p = 521.
        #[arg(long)]
        deep: bool,
    },
    /// Print stored results.
    Export {
        #[arg(long, value_enum)]
        format: ExportFormat,
        #[arg(long, value_enum, default_value = "dims")]
        table: ExportTable,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn config(cli: &Cli) -> anyhow::Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.config {
        cfg.load_file(path)?;
    }
    cfg.apply_env()?;
    if let Some(dir) = &cli.out_dir {
        cfg.out_dir = dir.clone();
    }
    if let Some(t) = cli.threads {
        cfg.threads = t;
    }
    if cli.wiedemann {
        cfg.solver = sl3cusp_cli::config::SolverChoice::Wiedemann;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let mut cfg = config(&cli)?;
    match cli.cmd {
        Cmd::Dims { min, max, q, out } => {
            (cfg.min, cfg.max) = (min, max);
            if let Some(q) = q {
                cfg.moduli = parse_list("q", &q)?;
            }
            let recs = cmd_dims(&cfg, out.as_deref())?;
            let nonzero: Vec<u32> = recs.iter().filter(|r| r.dim_u > 0).map(|r| r.p).collect();
            log::info!("{} rows; nonzero at {nonzero:?}", recs.len());
        }
        Cmd::Hecke { p, lmax, ops, q, out } => {
            if let Some(l) = lmax {
                cfg.lmax = l;
            }
            if let Some(ops) = ops {
                cfg.kinds = parse_kinds(&ops)?;
            }
            if let Some(q) = q {
                cfg.moduli = parse_list("q", &q)?;
            }
            let rec = cmd_hecke(&cfg, p, out.as_deref())?;
            println!("{}", serde_json::to_string_pretty(&rec)?);
        }
        Cmd::Verify { deep } => {
            let report = verify::run(&cfg, deep)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            return Ok(report.passed);
        }
        Cmd::Export { format, table, out } => {
            let bytes = cmd_export(&cfg, format, table)?;
            match out {
                Some(path) => sl3cusp_cli::record::write_atomic(&path, &bytes).with_context(|| path.display().to_string())?,
                None => std::io::stdout().write_all(&bytes)?,
            }
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "info",
        1 => "debug",
        _ => "trace",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
