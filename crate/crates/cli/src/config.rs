//! Run configuration: defaults, a plain `key = value` file, then overrides.

use sha2::{Digest, Sha256};
use sl3cusp::arith::is_prime;
use sl3cusp::exactla::Solver;
use sl3cusp::hecke::HeckeKind;
use std::path::{Path, PathBuf};
use thiserror::Error;

pub const THREADS_ENV: &str = "SL3CUSP_THREADS";
pub const OUT_ENV: &str = "SL3CUSP_OUT";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}:{line}: expected `key = value`")]
    Syntax { path: String, line: usize },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("bad value `{value}` for `{key}`")]
    BadValue { key: String, value: String },
    #[error("modulus {0} is not an odd prime")]
    BadModulus(u32),
    #[error("modulus {q} collides with {what} {q}")]
    Collision { q: u32, what: &'static str },
    #[error("empty modulus list")]
    NoModuli,
    #[error("reading {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverChoice {
    Elimination,
    Wiedemann,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Prime range `[min, max)`.
    pub min: u32,
    pub max: u32,
    pub moduli: Vec<u32>,
    pub lmax: u32,
    pub kinds: Vec<HeckeKind>,
    pub solver: SolverChoice,
    pub seed: u64,
    /// 0 means rayon's default.
    pub threads: usize,
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            min: 2,
            max: 300,
            moduli: vec![12379, 31991, 13001],
            lmax: 47,
            kinds: vec![HeckeKind::E, HeckeKind::F],
            solver: SolverChoice::Elimination,
            seed: 0x5eed,
            threads: 0,
            out_dir: PathBuf::from("sl3cusp-out"),
        }
    }
}

fn bad(key: &str, value: &str) -> ConfigError {
    ConfigError::BadValue { key: key.into(), value: value.into() }
}

pub fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>, ConfigError> {
    value.split(',').map(|s| s.trim().parse().map_err(|_| bad(key, value))).collect()
}

pub fn parse_kinds(value: &str) -> Result<Vec<HeckeKind>, ConfigError> {
    value
        .split(',')
        .map(|s| match s.trim() {
            "E" | "e" => Ok(HeckeKind::E),
            "F" | "f" => Ok(HeckeKind::F),
            _ => Err(bad("ops", value)),
        })
        .collect()
}

impl RunConfig {
    /// Defaults, then environment overrides.
    pub fn from_env() -> Result<Self, ConfigError> {
        let mut cfg = RunConfig::default();
        cfg.apply_env()?;
        Ok(cfg)
    }

    pub fn apply_env(&mut self) -> Result<(), ConfigError> {
        if let Ok(v) = std::env::var(THREADS_ENV) {
            self.set("threads", &v)?;
        }
        if let Ok(v) = std::env::var(OUT_ENV) {
            self.set("out", &v)?;
        }
        Ok(())
    }

    pub fn load_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or(ConfigError::Syntax { path: path.display().to_string(), line: i + 1 })?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let num = |v: &str| v.parse::<u64>().map_err(|_| bad(key, v));
        match key {
            "min" => self.min = num(value)? as u32,
            "max" => self.max = num(value)? as u32,
            "moduli" | "q" => self.moduli = parse_list(key, value)?,
            "lmax" => self.lmax = num(value)? as u32,
            "ops" => self.kinds = parse_kinds(value)?,
            "solver" => {
                self.solver = match value {
                    "elimination" => SolverChoice::Elimination,
                    "wiedemann" => SolverChoice::Wiedemann,
                    _ => return Err(bad(key, value)),
                }
            }
            "seed" => self.seed = num(value)?,
            "threads" => self.threads = num(value)? as usize,
            "out" => self.out_dir = PathBuf::from(value),
            _ => return Err(ConfigError::UnknownKey(key.into())),
        }
        Ok(())
    }

    pub fn solver(&self) -> Solver {
        match self.solver {
            SolverChoice::Elimination => Solver::Elimination,
            SolverChoice::Wiedemann => Solver::Wiedemann { seed: self.seed },
        }
    }

    /// Moduli must be odd primes distinct from every level in range and
    /// every Hecke prime.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.moduli.is_empty() {
            return Err(ConfigError::NoModuli);
        }
        for &q in &self.moduli {
            if q < 3 || !is_prime(q as u64) {
                return Err(ConfigError::BadModulus(q));
            }
            if (self.min..self.max).contains(&q) {
                return Err(ConfigError::Collision { q, what: "level" });
            }
            if q <= self.lmax {
                return Err(ConfigError::Collision { q, what: "Hecke prime" });
            }
        }
        Ok(())
    }

    /// SHA-256 over the settings that affect results (not threads or paths).
    pub fn hash(&self) -> String {
        let kinds: Vec<String> = self.kinds.iter().map(|k| k.to_string()).collect();
        let text = format!(
            "moduli={:?};lmax={};ops={};solver={:?};seed={}",
            self.moduli,
            self.lmax,
            kinds.join(","),
            self.solver,
            self.seed
        );
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_overrides_defaults() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        std::fs::write(&path, "# sweep\nmin = 50\nmax=100\nmoduli = 12379, 31991\nops = E\nsolver = wiedemann\n").unwrap();
        let mut cfg = RunConfig::default();
        cfg.load_file(&path).unwrap();
        assert_eq!((cfg.min, cfg.max), (50, 100));
        assert_eq!(cfg.moduli, vec![12379, 31991]);
        assert_eq!(cfg.kinds, vec![HeckeKind::E]);
        assert_eq!(cfg.solver(), Solver::Wiedemann { seed: cfg.seed });
        cfg.validate().unwrap();
    }

    #[test]
    fn rejects_bad_input() {
        let mut cfg = RunConfig::default();
        assert!(matches!(cfg.set("colour", "red"), Err(ConfigError::UnknownKey(_))));
        assert!(cfg.set("lmax", "x").is_err());
        cfg.moduli = vec![12378];
        assert!(matches!(cfg.validate(), Err(ConfigError::BadModulus(12378))));
        cfg.max = 10;
        cfg.moduli = vec![41];
        assert!(matches!(cfg.validate(), Err(ConfigError::Collision { what: "Hecke prime", .. })));
        cfg.moduli = vec![12379];
        cfg.max = 20000;
        assert!(matches!(cfg.validate(), Err(ConfigError::Collision { what: "level", .. })));
    }

    #[test]
    fn hash_ignores_threads_and_paths() {
        let a = RunConfig::default();
        let mut b = a.clone();
        b.threads = 7;
        b.out_dir = PathBuf::from("/elsewhere");
        assert_eq!(a.hash(), b.hash());
        b.lmax = 13;
        assert_ne!(a.hash(), b.hash());
    }
}
