use sl3cusp_cli::record::{dims_path, hecke_path, read_json, DimRecord, LevelRecord};
use sl3cusp_cli::{cmd_dims, cmd_export, cmd_hecke, CliError, ExportFormat, ExportTable, RunConfig};
use std::path::Path;

fn config(dir: &Path, min: u32, max: u32) -> RunConfig {
    RunConfig { min, max, moduli: vec![12379], out_dir: dir.to_path_buf(), ..RunConfig::default() }
}

#[test]
fn empty_range_gives_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let recs = cmd_dims(&config(dir.path(), 24, 29), None).unwrap();
    assert!(recs.is_empty());
    let csv = std::fs::read_to_string(dir.path().join("dims.csv")).unwrap();
    assert_eq!(csv, "p,q,dim_u,dim_w_mod_imbeta\n");
}

#[test]
fn sweep_below_100() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("table.csv");
    let recs = cmd_dims(&config(dir.path(), 2, 100), Some(&out)).unwrap();
    assert_eq!(recs.len(), 25);
    let nonzero: Vec<(u32, usize, usize)> =
        recs.iter().filter(|r| r.dim_u > 0).map(|r| (r.p, r.dim_u, r.dim_w_mod_imbeta)).collect();
    assert_eq!(nonzero, vec![(53, 2, 6), (61, 2, 6), (79, 2, 8), (89, 2, 9)]);
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 26);
    assert!(csv.contains("\n53,12379,2,6\n"));
}

#[test]
fn rerun_is_a_noop() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), 50, 62);
    cmd_dims(&cfg, None).unwrap();
    let files = [dims_path(dir.path(), 53, 12379), dir.path().join("dims.csv")];
    let before: Vec<_> = files.iter().map(|f| std::fs::metadata(f).unwrap().modified().unwrap()).collect();
    let first = std::fs::read(&files[1]).unwrap();
    std::thread::sleep(std::time::Duration::from_millis(20));
    cmd_dims(&cfg, None).unwrap();
    let after: Vec<_> = files.iter().map(|f| std::fs::metadata(f).unwrap().modified().unwrap()).collect();
    assert_eq!(before, after);
    assert_eq!(first, std::fs::read(&files[1]).unwrap());
}

#[test]
fn stored_record_is_reused() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), 61, 62);
    let path = dims_path(dir.path(), 61, 12379);
    let mut fake: DimRecord = {
        cmd_dims(&cfg, None).unwrap();
        read_json(&path).unwrap()
    };
    fake.dim_u = 99;
    sl3cusp_cli::record::write_json(&path, &fake).unwrap();
    assert_eq!(cmd_dims(&cfg, None).unwrap()[0].dim_u, 99);
}

#[test]
fn hecke_needs_a_cuspidal_pair() {
    let dir = tempfile::tempdir().unwrap();
    let err = cmd_hecke(&config(dir.path(), 0, 0), 59, None).unwrap_err();
    assert!(matches!(err, CliError::Precondition { p: 59, dim: 0 }), "{err}");
}

#[test]
fn bad_modulus_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config(dir.path(), 2, 10);
    cfg.moduli = vec![12381];
    assert!(matches!(cmd_dims(&cfg, None), Err(CliError::Config(_))));
}

#[test]
fn hecke_at_53_round_trips_through_export() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config(dir.path(), 0, 0);
    cfg.lmax = 7;
    let rec = cmd_hecke(&cfg, 53, None).unwrap();
    assert_eq!(rec.dim, 2);
    assert_eq!(rec.q_used, vec![12379]);
    assert_eq!(rec.entries.len(), 8);
    assert_eq!(rec.config_hash, cfg.hash());
    let stored: LevelRecord = read_json(&hecke_path(dir.path(), 53)).unwrap();
    assert_eq!(stored, rec);

    let json: serde_json::Value = serde_json::from_slice(&cmd_export(&cfg, ExportFormat::Json, ExportTable::Dims).unwrap()).unwrap();
    assert_eq!(json["levels"][0]["p"], 53);
    assert_eq!(json["levels"][0]["entries"][0]["op"], "E");
    assert!(json["levels"][0]["entries"][0]["lift"]["const"].is_i64());
    assert!(json["levels"][0]["D"].is_i64());
    let csv = String::from_utf8(cmd_export(&cfg, ExportFormat::Csv, ExportTable::Eigen).unwrap()).unwrap();
    assert_eq!(csv.lines().count(), 9);
    assert!(csv.starts_with("p,D,l,op,c0,c1,trace,const,a,b,status\n53,"));
}

#[test]
fn nonsplit_modulus_is_skipped_and_recorded() {
    // Pick a modulus that leaves D non-square, then one that splits it.
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config(dir.path(), 0, 0);
    cfg.lmax = 7;
    let d = cmd_hecke(&cfg, 53, None).unwrap().d;
    let is_square = |q: u64| sl3cusp::arith::pow_mod(d.rem_euclid(q as i64) as u64, (q - 1) / 2, q) == 1;
    let primes = sl3cusp::arith::primes_in(20000, 21000);
    let bad = *primes.iter().find(|&&q| !is_square(q)).unwrap() as u32;
    let good = *primes.iter().find(|&&q| is_square(q)).unwrap() as u32;
    let dir2 = tempfile::tempdir().unwrap();
    cfg.out_dir = dir2.path().to_path_buf();
    cfg.moduli = vec![bad, good];
    let rec = cmd_hecke(&cfg, 53, None).unwrap();
    assert_eq!(rec.q_used, vec![bad, good]);
    assert_eq!(rec.notes.len(), 1);
    assert_eq!(rec.d, d);
}
