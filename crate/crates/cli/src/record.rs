//! Persisted artifacts and their atomic writes.

use serde::{de::DeserializeOwned, Deserialize, Serialize};
use sl3cusp::hecke::HeckeKind;
use sl3cusp::lift::LocalFactor;
use sl3cusp::pipeline::{EntryResult, LevelResult, LiftPath};
use std::io::Write;
use std::path::{Path, PathBuf};

/// Dimensions at one `(p, q)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimRecord {
    pub p: u32,
    pub q: u32,
    pub dim_u: usize,
    pub dim_w_mod_imbeta: usize,
    pub config_hash: String,
    pub seed: u64,
    pub millis: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lift {
    pub trace: i64,
    #[serde(rename = "const")]
    pub constant: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Eig {
    pub a: i64,
    pub b: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryRecord {
    pub l: u32,
    pub op: String,
    pub charpoly_red: [u32; 2],
    pub lift: Lift,
    pub eig: Eig,
    pub status: String,
    pub millis: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QDim {
    pub q: u32,
    pub dim: usize,
}

/// `1 − e X + f ℓ X² − ℓ³ X³`, coefficients as `(a, b)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorRecord {
    pub l: u32,
    pub coeffs: [Eig; 4],
    pub f_is_conjugate_of_e: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub p: u32,
    /// Moduli tried for the Hecke phase, in order; the last one succeeded.
    pub q_used: Vec<u32>,
    pub dim: usize,
    #[serde(rename = "D")]
    pub d: i64,
    pub dims: Vec<QDim>,
    pub reference: String,
    pub entries: Vec<EntryRecord>,
    pub local_factors: Vec<FactorRecord>,
    pub notes: Vec<String>,
    pub config_hash: String,
    pub seed: u64,
}

impl LevelRecord {
    pub fn entry(&self, op: &str, l: u32) -> Option<&EntryRecord> {
        self.entries.iter().find(|e| e.op == op && e.l == l)
    }
}

pub fn entry_record(e: &EntryResult) -> EntryRecord {
    EntryRecord {
        l: e.op.ell,
        op: kind_name(e.op.kind).into(),
        charpoly_red: e.charpoly_red,
        lift: Lift { trace: e.charpoly.trace, constant: e.charpoly.constant },
        eig: Eig { a: e.eigenvalue.value.a, b: e.eigenvalue.value.b },
        status: match e.path {
            LiftPath::PolyChecked => "poly_checked",
            LiftPath::TraceOnly => "trace_only",
        }
        .into(),
        millis: e.millis,
    }
}

fn factor_record(f: &LocalFactor) -> FactorRecord {
    FactorRecord {
        l: f.ell,
        coeffs: f.coeffs.map(|c| Eig { a: c.a, b: c.b }),
        f_is_conjugate_of_e: f.f_is_conjugate_of_e,
    }
}

pub fn kind_name(k: HeckeKind) -> &'static str {
    match k {
        HeckeKind::E => "E",
        HeckeKind::F => "F",
    }
}

pub fn level_record(r: &LevelResult, dims: Vec<QDim>, q_used: Vec<u32>, notes: Vec<String>, hash: String, seed: u64) -> LevelRecord {
    LevelRecord {
        p: r.p,
        q_used,
        dim: r.dim,
        d: r.field.d,
        dims,
        reference: r.reference.to_string(),
        entries: r.entries.iter().map(entry_record).collect(),
        local_factors: r.local_factors.iter().map(factor_record).collect(),
        notes,
        config_hash: hash,
        seed,
    }
}

pub fn dims_path(out: &Path, p: u32, q: u32) -> PathBuf {
    out.join("dims").join(format!("p{p}_q{q}.json"))
}

pub fn hecke_path(out: &Path, p: u32) -> PathBuf {
    out.join("hecke").join(format!("p{p}.json"))
}

/// Write to a temporary file in the target directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> std::io::Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(std::io::Error::other)?;
    bytes.push(b'\n');
    write_atomic(path, &bytes)
}

/// `None` when the file is missing or unreadable; the caller recomputes.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Option<T> {
    let text = std::fs::read_to_string(path).ok()?;
    serde_json::from_str(&text).ok()
}

/// All records of one kind under `dir`, sorted by file name.
pub fn read_all<T: DeserializeOwned>(dir: &Path) -> std::io::Result<Vec<T>> {
    if !dir.exists() {
        return Ok(Vec::new());
    }
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    Ok(paths.iter().filter_map(|p| read_json(p)).collect())
}
