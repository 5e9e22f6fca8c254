//! Invariant suites over small levels, reported as JSON.

use crate::compare::compare;
use crate::config::{ConfigError, RunConfig};
use crate::record::{level_record, QDim};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sl3cusp::exactla::dense::{mat2_mul, rank_dense};
use sl3cusp::exactla::{Fq, Solver};
use sl3cusp::hecke::*;
use sl3cusp::modsym::*;
use sl3cusp::pipeline::{run_level, LevelConfig};
use sl3cusp::published::{eigen_table, LEVEL_DIMENSIONS};
use sl3cusp::wspaces::*;
use sl3cusp::{PrimeLevel, ProjectiveSpace};
use std::time::Instant;

const SMALL: [u64; 6] = [2, 3, 5, 7, 11, 13];
const SPOT: u64 = 53;
const SYMBOL_CASES: usize = 200;
const ANNIHILATION_SAMPLES: usize = 120;

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub checks: usize,
    pub detail: String,
    pub millis: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub passed: bool,
    pub config_hash: String,
    pub seed: u64,
    pub suites: Vec<SuiteResult>,
}

type Outcome = Result<usize, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

struct Ctx {
    field: Fq,
    seed: u64,
}

impl Ctx {
    fn level(&self, p: u64) -> PrimeLevel {
        PrimeLevel::new(p).expect("suite levels are prime")
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }

    fn random_w0(&self, p: u64, rng: &mut ChaCha8Rng) -> W0Function {
        let sys = build_w0_system(self.level(p), self.field).expect("valid level");
        let x = random_combination(&sys.kernel(Solver::Elimination), sys.orbits.nvars(), self.field, rng);
        W0Function { level: self.level(p), field: self.field, values: sys.orbits.expand(&x, self.field) }
    }

    fn random_w(&self, p: u64, rng: &mut ChaCha8Rng) -> WFunction {
        let sys = build_w_system(self.level(p), self.field).expect("valid level");
        let x = random_combination(&sys.kernel(Solver::Elimination), sys.orbits.nvars(), self.field, rng);
        WFunction { level: self.level(p), field: self.field, values: sys.orbits.expand(&x, self.field) }
    }
}

fn relations(c: &Ctx) -> Outcome {
    let mut n = 0;
    for p in SMALL.into_iter().chain([SPOT]) {
        let l = c.level(p);
        for f in build_w_system(l, c.field).map_err(|e| e.to_string())?.w_basis(Solver::Elimination) {
            ensure(is_in_w(&f), || format!("p={p}: W basis vector breaks a relation"))?;
            n += 1;
        }
        for f in build_u_system(l, c.field).map_err(|e| e.to_string())?.w_basis(Solver::Elimination) {
            ensure(is_in_u(&f), || format!("p={p}: U basis vector breaks a relation"))?;
            n += 1;
        }
    }
    Ok(n)
}

/// `dim W = dim U + 2 dim W₀`, injectivity of `(g, h) ↦ αg + βh`, and the
/// published dimensions at the spot level.
fn dimensions(c: &Ctx) -> Outcome {
    let mut n = 0;
    for p in SMALL.into_iter().chain([SPOT]) {
        let l = c.level(p);
        let d = level_dims(l, c.field, Solver::Elimination).map_err(|e| e.to_string())?;
        let dim_w = build_w_system(l, c.field).map_err(|e| e.to_string())?.nullity(Solver::Elimination);
        ensure(dim_w == d.dim_u + 2 * d.dim_w0, || format!("p={p}: dim W = {dim_w}, U = {}, W0 = {}", d.dim_u, d.dim_w0))?;
        let w0 = build_w0_system(l, c.field).map_err(|e| e.to_string())?.w0_basis(Solver::Elimination);
        let mut images: Vec<Vec<u32>> = w0.iter().map(|g| apply_alpha(g).values).collect();
        images.extend(w0.iter().map(|g| apply_beta(g).values));
        let k = images.len();
        ensure(rank_dense(images, c.field) == k, || format!("p={p}: α ⊕ β is not injective"))?;
        if let Some(&(_, wb, u)) = LEVEL_DIMENSIONS.iter().find(|t| t.0 as u64 == p) {
            ensure((d.dim_u, d.dim_w_mod_im_beta()) == (u, wb), || format!("p={p}: dims {d:?}"))?;
        } else {
            ensure(d.dim_u == 0, || format!("p={p}: dim U = {}", d.dim_u))?;
        }
        n += 3;
    }
    Ok(n)
}

fn annihilation(c: &Ctx) -> Outcome {
    let mut rng = c.rng(1);
    let levels = [11u64, SPOT];
    let mut n = 0;
    while n < ANNIHILATION_SAMPLES {
        let p = levels[n % levels.len()];
        let l = c.level(p);
        let space = ProjectiveSpace::new(l);
        let f = apply_alpha(&c.random_w0(p, &mut rng)).add(&apply_beta(&c.random_w0(p, &mut rng)));
        ensure(!f.is_zero(), || format!("p={p}: sampled zero"))?;
        let (x, y, z) = (rng.gen_range(1..p as i64), rng.gen_range(1..p as i64), rng.gen_range(1..p as i64));
        let r = make_r(x, y, z, l).map_err(|e| e.to_string())?;
        ensure(pair(&r, &f, &space) == 0, || format!("p={p}: R({x},{y},{z}) does not kill αg + βh"))?;
        n += 1;
    }
    Ok(n)
}

/// The joint kernel of all `R` inside `W` is `im α ⊕ im β`, with
/// `f = α(Cf) + β(Df)` on it.
fn decomposition(c: &Ctx) -> Outcome {
    let mut n = 0;
    for p in [5u64, 7, 11, 13, SPOT] {
        let l = c.level(p);
        let kernel = build_ann_system(l, c.field).map_err(|e| e.to_string())?.w_basis(Solver::Elimination);
        let dim_w0 = build_w0_system(l, c.field).map_err(|e| e.to_string())?.nullity(Solver::Elimination);
        ensure(kernel.len() == 2 * dim_w0, || format!("p={p}: joint kernel {} vs 2·{dim_w0}", kernel.len()))?;
        for f in &kernel {
            let g = apply_c(f).map_err(|e| e.to_string())?;
            let h = apply_d(f).map_err(|e| e.to_string())?;
            ensure(is_in_w0(&g) && is_in_w0(&h), || format!("p={p}: C or D leaves W0"))?;
            ensure(&apply_alpha(&g).add(&apply_beta(&h)) == f, || format!("p={p}: f ≠ α(Cf) + β(Df)"))?;
            n += 1;
        }
    }
    Ok(n)
}

fn random_matrix(rng: &mut ChaCha8Rng) -> Mat3 {
    let mut m = [[0i64; 3]; 3];
    for x in m.iter_mut().flatten() {
        *x = rng.gen_range(-15..=15);
    }
    m
}

fn elementary_product(rng: &mut ChaCha8Rng) -> Mat3 {
    let mut g: Mat3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    for _ in 0..rng.gen_range(1..8) {
        let (i, j) = (rng.gen_range(0..3), rng.gen_range(0..3));
        if i != j {
            let mut e: Mat3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
            e[i][j] = rng.gen_range(-4..=4);
            g = mat3_mul(&g, &e);
        }
    }
    g
}

/// Path independence, row scaling, alternation and the cocycle relation,
/// each on `SYMBOL_CASES` random matrices, evaluated on random elements of W.
fn symbols(c: &Ctx) -> Outcome {
    let mut rng = c.rng(2);
    let p = SPOT;
    let space = ProjectiveSpace::new(c.level(p));
    let fs: Vec<WFunction> = (0..4).map(|_| c.random_w(p, &mut rng)).collect();
    ensure(fs.iter().all(|g| !g.is_zero()), || format!("W = 0 at p={p}"))?;
    let f = c.field;
    let value = |m: &Mat3, choice: VectorChoice| -> Result<Vec<u32>, String> {
        match ModularSymbol::normalize(m) {
            Err(_) => Ok(vec![0; fs.len()]),
            Ok(s) => {
                let sum = reduce_with(&s, choice).map_err(|e| format!("{m:?}: {e}"))?;
                Ok(fs.iter().map(|g| evaluate(&sum, g, &space)).collect())
            }
        }
    };
    let neg = |v: Vec<u32>| -> Vec<u32> { v.into_iter().map(|x| f.neg(x)).collect() };
    for _ in 0..SYMBOL_CASES {
        let m = random_matrix(&mut rng);
        let base = value(&m, VectorChoice::Canonical)?;
        ensure(base == value(&m, VectorChoice::Reversed)?, || format!("path dependence at {m:?}"))?;

        let i = rng.gen_range(0..3);
        let k = [-3i64, -2, -1, 2, 3, 5][rng.gen_range(0..6)];
        let mut scaled = m;
        scaled[i] = m[i].map(|x| x * k);
        ensure(base == value(&scaled, VectorChoice::Canonical)?, || format!("row scaling by {k} at {m:?}"))?;

        let j = (i + rng.gen_range(1..3)) % 3;
        let mut swapped = m;
        swapped.swap(i, j);
        ensure(base == neg(value(&swapped, VectorChoice::Canonical)?), || format!("not alternating at {m:?}"))?;

        let g = elementary_product(&mut rng);
        let v = loop {
            let v = [rng.gen_range(-6..=6), rng.gen_range(-6..=6), rng.gen_range(-6..=6)];
            if v != [0, 0, 0] {
                break v;
            }
        };
        let mut total = vec![0u32; fs.len()];
        for r in 0..3 {
            let mut h = g;
            h[r] = v;
            for (t, x) in total.iter_mut().zip(value(&h, VectorChoice::Canonical)?) {
                *t = f.add(*t, x);
            }
        }
        ensure(value(&g, VectorChoice::Canonical)? == total, || format!("cocycle fails at {g:?}, v = {v:?}"))?;
    }
    Ok(4 * SYMBOL_CASES)
}

fn random_gamma(p: i64, rng: &mut ChaCha8Rng) -> Mat3 {
    let mut g: Mat3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    for _ in 0..6 {
        let i = rng.gen_range(0..3);
        let j = (i + rng.gen_range(1..3)) % 3;
        let k = if j == 0 { p * rng.gen_range(-1..=1) } else { rng.gen_range(-3..=3) };
        let mut e: Mat3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        e[i][j] = k;
        g = mat3_mul(&g, &e);
    }
    g
}

/// Commutativity and representative invariance at `ℓ ∈ {2, 3}`, then the
/// Ramanujan bound on every eigenvalue at the spot level.
fn hecke(c: &Ctx) -> Outcome {
    let l = c.level(SPOT);
    let basis = build_u_system(l, c.field).map_err(|e| e.to_string())?.w_basis(Solver::Elimination);
    let ctx = HeckeContext::new(basis).map_err(|e| e.to_string())?;
    let ops: Vec<HeckeOp> =
        [2, 3].into_iter().flat_map(|ell| [HeckeKind::E, HeckeKind::F].map(|kind| HeckeOp { kind, ell })).collect();
    let mats = ops.iter().map(|&op| ctx.matrix(op).map(|m| m.mat)).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?;
    let mut n = 0;
    for (a, oa) in mats.iter().zip(&ops) {
        for (b, ob) in mats.iter().zip(&ops) {
            ensure(mat2_mul(a, b, c.field) == mat2_mul(b, a, c.field), || format!("{oa} and {ob} do not commute"))?;
            n += 1;
        }
    }
    let mut rng = c.rng(3);
    for &op in &ops {
        let reps = coset_reps(op, l).map_err(|e| e.to_string())?;
        let moved = CosetReps { op, mats: reps.mats.iter().map(|b| mat3_mul(b, &random_gamma(SPOT as i64, &mut rng))).collect() };
        for r in &ctx.rpair.ops {
            for f in &ctx.basis {
                let x = pair_hecke(r, f, &reps, &ctx.space).map_err(|e| e.to_string())?;
                let y = pair_hecke(r, f, &moved, &ctx.space).map_err(|e| e.to_string())?;
                ensure(x == y, || format!("{op}: result depends on the coset representatives"))?;
                n += 1;
            }
        }
    }
    let result = run_level(l, &LevelConfig { lmax: 13, ..LevelConfig::new(c.field.q()) }).map_err(|e| e.to_string())?;
    for e in &result.entries {
        ensure(e.eigenvalue.satisfies_ramanujan(result.field.d), || format!("{} = {:?} breaks the bound", e.op, e.eigenvalue.value))?;
        n += 1;
    }
    Ok(n)
}

/// The 521 pipeline against the published table, up to conjugation.
fn deep_521(c: &Ctx, cfg: &RunConfig) -> Outcome {
    let table = eigen_table(521).expect("table present");
    let result = run_level(c.level(521), &LevelConfig { solver: cfg.solver(), ..LevelConfig::new(table.q) })
        .map_err(|e| e.to_string())?;
    for e in &result.entries {
        ensure(e.eigenvalue.satisfies_ramanujan(result.field.d), || format!("{} breaks the bound", e.op))?;
    }
    let rec = level_record(&result, vec![QDim { q: table.q, dim: 2 }], vec![table.q], vec![], cfg.hash(), cfg.seed);
    let ells: Vec<u32> = table.rows.iter().map(|r| r.ell).collect();
    let cmp = compare(&rec, table, &ells);
    ensure(cmp.ok(), || format!("{cmp:?}"))?;
    Ok(result.entries.len() + ells.len())
}

fn run_suite(name: &'static str, f: impl FnOnce() -> Outcome) -> SuiteResult {
    let t = Instant::now();
    let outcome = f();
    let millis = t.elapsed().as_millis();
    let r = match outcome {
        Ok(checks) => SuiteResult { name, passed: true, checks, detail: String::new(), millis },
        Err(detail) => SuiteResult { name, passed: false, checks: 0, detail, millis },
    };
    log::info!("{name}: {} ({} checks, {} ms) {}", if r.passed { "pass" } else { "FAIL" }, r.checks, r.millis, r.detail);
    r
}

/// Runs every suite; `deep` adds the full pipeline at 521.
pub fn run(cfg: &RunConfig, deep: bool) -> Result<Report, ConfigError> {
    let q = *cfg.moduli.first().ok_or(ConfigError::NoModuli)?;
    let field = Fq::new(q as u64).map_err(|_| ConfigError::BadModulus(q))?;
    let c = Ctx { field, seed: cfg.seed };
    let mut suites = vec![
        run_suite("relations", || relations(&c)),
        run_suite("dimensions", || dimensions(&c)),
        run_suite("annihilation", || annihilation(&c)),
        run_suite("decomposition", || decomposition(&c)),
        run_suite("symbols", || symbols(&c)),
        run_suite("hecke", || hecke(&c)),
    ];
    if deep {
        suites.push(run_suite("deep_521", || deep_521(&c, cfg)));
    }
    Ok(Report { passed: suites.iter().all(|s| s.passed), config_hash: cfg.hash(), seed: cfg.seed, suites })
}
