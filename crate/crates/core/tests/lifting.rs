//! Lifting reduced characteristic polynomials and eigenvalues.

use proptest::prelude::*;
use sl3cusp::exactla::{Fq, PolyFq};
use sl3cusp::hecke::{HeckeKind, HeckeOp};
use sl3cusp::lift::*;
use sl3cusp::published::{EIGEN_TABLES, P521};

fn fq() -> Fq {
    Fq::new(12379).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    /// Any a + b√D inside the Ramanujan disc is recovered from its reduction and trace.
    #[test]
    fn eigenvalue_roundtrip(ell in prop::sample::select(vec![2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]),
                            a in -141i64..=141, b in -100i64..=100, d in prop::sample::select(vec![-1i64, -2])) {
        let e = QuadInt::new(a, b);
        prop_assume!(e.norm(d) <= 9 * (ell as i64).pow(2));
        // the moduli used for the two fields in practice
        let f = if d == -2 { fq() } else { Fq::new(13001).unwrap() };
        let k = QuadField::new(d, f).unwrap();
        let op = HeckeOp { kind: HeckeKind::E, ell };
        let got = lift_eigenvalue_with_trace(e.reduce(k, f), op, 2 * a, k, f).unwrap();
        prop_assert_eq!(got.value, e);
        prop_assert!(got.satisfies_ramanujan(d));
        // conjugate-pair closure
        let poly = got.charpoly(d);
        prop_assert_eq!(poly.trace, 2 * a);
        prop_assert_eq!(poly.constant, a * a - d * b * b);
        let conj = e.conj().reduce(k, f);
        prop_assert_eq!(f.add(e.reduce(k, f), conj), f.from_i64(poly.trace));
        prop_assert_eq!(f.mul(e.reduce(k, f), conj), f.from_i64(poly.constant));
    }

    /// Accepted polynomial lifts reduce back to their input.
    #[test]
    fn charpoly_roundtrip(ell in prop::sample::select(vec![2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]),
                          c0 in 0u32..12379, c1 in 0u32..12379) {
        let f = fq();
        if let Ok(l) = lift_charpoly(&PolyFq::new(vec![c0, c1, 1]), ell, f) {
            prop_assert_eq!(l.reduce(f), [c0, c1]);
            prop_assert!(l.trace.abs() <= 6 * ell as i64);
            prop_assert!(l.constant >= 0 && l.constant <= 9 * (ell as i64).pow(2));
        }
    }
}

#[test]
fn published_rows_lift_back() {
    for t in EIGEN_TABLES {
        let f = Fq::new(t.q as u64).unwrap();
        let k = QuadField::new(t.d, f).unwrap();
        for r in t.rows {
            let op = HeckeOp { kind: HeckeKind::E, ell: r.ell };
            let e = QuadInt::new(r.a, r.b);
            let got = lift_eigenvalue_with_trace(e.reduce(k, f), op, -r.c1, k, f).unwrap();
            assert_eq!(got.value, e, "p={} ℓ={}", t.p, r.ell);
            if 9 * r.ell * r.ell < t.q {
                let poly = lift_charpoly(&PolyFq::new(vec![f.from_i64(r.c0), f.from_i64(r.c1), 1]), r.ell, f).unwrap();
                assert_eq!((poly.trace, poly.constant), (-r.c1, r.c0));
            }
        }
    }
}

#[test]
fn field_from_small_primes_at_521() {
    let polys: Vec<LiftedCharPoly> =
        P521.rows.iter().filter(|r| r.ell <= 37).map(|r| LiftedCharPoly { ell: r.ell, trace: -r.c1, constant: r.c0 }).collect();
    assert_eq!(detect_field(&polys, fq()).unwrap().d, -2);
    let f13001 = Fq::new(13001).unwrap();
    let p1433 = EIGEN_TABLES.iter().find(|t| t.p == 1433).unwrap();
    let polys: Vec<LiftedCharPoly> =
        p1433.rows.iter().map(|r| LiftedCharPoly { ell: r.ell, trace: -r.c1, constant: r.c0 }).collect();
    assert_eq!(detect_field(&polys, f13001).unwrap().d, -1);
}

#[test]
fn large_ell_needs_the_trace() {
    // ℓ = 41 at 521: the eigenvalue alone does not single out 32√-2 - 29
    let f = fq();
    let k = QuadField::new(-2, f).unwrap();
    let lambda = QuadInt::new(-29, 32).reduce(k, f);
    let cands = eigenvalue_candidates(lambda, 41, k, f);
    assert!(cands.contains(&(-29, 32)));
    let op = HeckeOp { kind: HeckeKind::E, ell: 41 };
    if cands.len() > 1 {
        assert!(matches!(lift_eigenvalue(lambda, op, k, f), Err(LiftError::MultiLift { .. })));
    }
    assert_eq!(lift_eigenvalue_with_trace(lambda, op, -58, k, f).unwrap().value, QuadInt::new(-29, 32));
}
