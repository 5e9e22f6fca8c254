use crate::config::{ConfigError, RunConfig};
use crate::record::*;
use rayon::prelude::*;
use sl3cusp::arith::primes_in;
use sl3cusp::exactla::Fq;
use sl3cusp::lift::LiftError;
use sl3cusp::pipeline::{run_level, LevelConfig, PipelineError};
use sl3cusp::wspaces::{level_dims, SpaceError};
use sl3cusp::PrimeLevel;
use std::path::{Path, PathBuf};
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("p = {p}: {source}")]
    Level { p: u32, source: sl3cusp::projective::ProjectiveError },
    #[error("p = {p}, q = {q}: {source}")]
    Space { p: u32, q: u32, source: SpaceError },
    #[error("p = {p}, q = {q}: {source}")]
    Pipeline { p: u32, q: u32, source: PipelineError },
    #[error("p = {p}: dimensions differ across moduli: {dims:?}")]
    Disagree { p: u32, dims: Vec<QDim> },
    #[error("p = {p}: cuspidal dimension is {dim}, the Hecke phase needs 2")]
    Precondition { p: u32, dim: usize },
    #[error("p = {p}: no configured modulus splits the Hecke algebra (tried {tried:?})")]
    NoModulus { p: u32, tried: Vec<u32> },
    #[error("{}{path}: {source}", .p.map(|p| format!("p = {p}: ")).unwrap_or_default())]
    Io { p: Option<u32>, path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Thread(#[from] rayon::ThreadPoolBuildError),
}

fn io(p: Option<u32>, path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { p, path: path.to_path_buf(), source }
}

fn level(p: u32) -> Result<PrimeLevel, CliError> {
    PrimeLevel::new(p as u64).map_err(|source| CliError::Level { p, source })
}

/// Runs `f` on a pool sized by the thread budget.
pub fn with_pool<T: Send>(cfg: &RunConfig, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build()?;
    Ok(pool.install(f))
}

/// Dimensions at `(p, q)`, from disk when already computed.
pub fn dims_at(cfg: &RunConfig, p: u32, q: u32) -> Result<DimRecord, CliError> {
    let path = dims_path(&cfg.out_dir, p, q);
    if let Some(rec) = read_json::<DimRecord>(&path).filter(|r| r.p == p && r.q == q) {
        log::debug!("p={p} q={q}: reusing {}", path.display());
        return Ok(rec);
    }
    let field = Fq::new(q as u64).map_err(|_| ConfigError::BadModulus(q))?;
    let t = Instant::now();
    let d = level_dims(level(p)?, field, cfg.solver()).map_err(|source| CliError::Space { p, q, source })?;
    let rec = DimRecord {
        p,
        q,
        dim_u: d.dim_u,
        dim_w_mod_imbeta: d.dim_w_mod_im_beta(),
        config_hash: cfg.hash(),
        seed: cfg.seed,
        millis: t.elapsed().as_millis(),
    };
    write_json(&path, &rec).map_err(io(Some(p), &path))?;
    log::info!("p={p} q={q} dim_U={} dim_W/imβ={} ({} ms)", rec.dim_u, rec.dim_w_mod_imbeta, rec.millis);
    Ok(rec)
}

pub fn dims_csv(records: &[DimRecord]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["p", "q", "dim_u", "dim_w_mod_imbeta"])?;
    for r in records {
        w.write_record([r.p.to_string(), r.q.to_string(), r.dim_u.to_string(), r.dim_w_mod_imbeta.to_string()])?;
    }
    w.into_inner().map_err(|e| CliError::Csv(e.into_error().into()))
}

/// One row per `(p, q)` with `p` prime in `[min, max)`, sorted.
pub fn cmd_dims(cfg: &RunConfig, out: Option<&Path>) -> Result<Vec<DimRecord>, CliError> {
    cfg.validate()?;
    let pairs: Vec<(u32, u32)> = primes_in(cfg.min as u64, cfg.max as u64)
        .into_iter()
        .flat_map(|p| cfg.moduli.iter().map(move |&q| (p as u32, q)))
        .collect();
    let mut records = with_pool(cfg, || {
        pairs.par_iter().map(|&(p, q)| dims_at(cfg, p, q)).collect::<Result<Vec<_>, _>>()
    })??;
    records.sort_by_key(|r| (r.p, r.q));
    let path = out.map(Path::to_path_buf).unwrap_or_else(|| cfg.out_dir.join("dims.csv"));
    let bytes = dims_csv(&records)?;
    if std::fs::read(&path).ok().as_deref() != Some(&bytes[..]) {
        write_atomic(&path, &bytes).map_err(io(None, &path))?;
    }
    Ok(records)
}

/// Full Hecke record at `p`. Moduli are tried in order; a modulus over which
/// no operator splits is skipped and noted.
pub fn cmd_hecke(cfg: &RunConfig, p: u32, out: Option<&Path>) -> Result<LevelRecord, CliError> {
    let mut cfg = cfg.clone();
    (cfg.min, cfg.max) = (p, p + 1);
    cfg.validate()?;
    let path = out.map(Path::to_path_buf).unwrap_or_else(|| hecke_path(&cfg.out_dir, p));
    let hash = cfg.hash();
    if let Some(rec) = read_json::<LevelRecord>(&path).filter(|r| r.p == p && r.config_hash == hash) {
        log::info!("p={p}: reusing {}", path.display());
        return Ok(rec);
    }
    let dims: Vec<QDim> = cfg
        .moduli
        .iter()
        .map(|&q| dims_at(&cfg, p, q).map(|r| QDim { q, dim: r.dim_u }))
        .collect::<Result<_, _>>()?;
    if dims.iter().any(|d| d.dim != dims[0].dim) {
        return Err(CliError::Disagree { p, dims });
    }
    if dims[0].dim != 2 {
        return Err(CliError::Precondition { p, dim: dims[0].dim });
    }
    let mut tried = Vec::new();
    let mut notes = Vec::new();
    for &q in &cfg.moduli {
        tried.push(q);
        let lc = LevelConfig { q, lmax: cfg.lmax, kinds: cfg.kinds.clone(), solver: cfg.solver() };
        let t = Instant::now();
        match with_pool(&cfg, || run_level(level(p)?, &lc).map_err(|source| CliError::Pipeline { p, q, source }))? {
            Err(CliError::Pipeline { source: PipelineError::Lift(LiftError::NoSplitOperator), .. }) => {
                log::warn!("p={p} q={q}: no operator splits over F_q, trying the next modulus");
                notes.push(format!("q={q}: no operator splits over F_q"));
            }
            Err(e) => return Err(e),
            Ok(result) => {
                for e in &result.entries {
                    log::debug!("p={p} {} {} ms", e.op, e.millis);
                }
                let rec = level_record(&result, dims, tried, notes, hash, cfg.seed);
                write_json(&path, &rec).map_err(io(Some(p), &path))?;
                log::info!(
                    "p={p} q={q} D={} reference {} {} operators in {:.1} s",
                    rec.d,
                    rec.reference,
                    rec.entries.len(),
                    t.elapsed().as_secs_f64()
                );
                return Ok(rec);
            }
        }
    }
    Err(CliError::NoModulus { p, tried })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ExportFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ExportTable {
    Dims,
    Eigen,
}

/// Collects everything under the output directory.
pub fn cmd_export(cfg: &RunConfig, format: ExportFormat, table: ExportTable) -> Result<Vec<u8>, CliError> {
    let dims_dir = cfg.out_dir.join("dims");
    let hecke_dir = cfg.out_dir.join("hecke");
    let mut dims: Vec<DimRecord> = read_all(&dims_dir).map_err(io(None, &dims_dir))?;
    dims.sort_by_key(|r| (r.p, r.q));
    let mut levels: Vec<LevelRecord> = read_all(&hecke_dir).map_err(io(None, &hecke_dir))?;
    levels.sort_by_key(|r| r.p);
    match format {
        ExportFormat::Json => {
            let v = serde_json::json!({ "dims": dims, "levels": levels });
            let mut bytes = serde_json::to_vec_pretty(&v).expect("records serialize");
            bytes.push(b'\n');
            Ok(bytes)
        }
        ExportFormat::Csv if table == ExportTable::Dims => dims_csv(&dims),
        ExportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["p", "D", "l", "op", "c0", "c1", "trace", "const", "a", "b", "status"])?;
            for r in &levels {
                for e in &r.entries {
                    w.write_record([
                        r.p.to_string(),
                        r.d.to_string(),
                        e.l.to_string(),
                        e.op.clone(),
                        e.charpoly_red[0].to_string(),
                        e.charpoly_red[1].to_string(),
                        e.lift.trace.to_string(),
                        e.lift.constant.to_string(),
                        e.eig.a.to_string(),
                        e.eig.b.to_string(),
                        e.status.clone(),
                    ])?;
                }
            }
            w.into_inner().map_err(|e| CliError::Csv(e.into_error().into()))
        }
    }
}
