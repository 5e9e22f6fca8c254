//! Hecke matrices on the cuspidal space at small levels.

mod common;

use common::{field, level, random_w0};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sl3cusp::exactla::dense::mat2_mul;
use sl3cusp::exactla::{charpoly_2x2, Solver};
use sl3cusp::hecke::*;
use sl3cusp::modsym::{mat3_mul, Mat3};
use sl3cusp::wspaces::*;
use sl3cusp::ProjectiveSpace;

fn context(p: u64) -> HeckeContext {
    let basis = build_u_system(level(p), field()).unwrap().w_basis(Solver::Elimination);
    HeckeContext::new(basis).unwrap()
}

/// Random element of Γ₀(3,p): a product of elementary matrices, with the
/// entries below the (1,1) position in the first column kept ≡ 0 mod p.
fn random_gamma<R: Rng>(p: i64, rng: &mut R) -> Mat3 {
    let mut g: Mat3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    for _ in 0..6 {
        let (i, j) = loop {
            let (i, j) = (rng.gen_range(0..3), rng.gen_range(0..3));
            if i != j {
                break (i, j);
            }
        };
        let k = if j == 0 { p * rng.gen_range(-1..=1) } else { rng.gen_range(-3..=3) };
        let mut e: Mat3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        e[i][j] = k;
        g = mat3_mul(&g, &e);
    }
    g
}

#[test]
fn operators_commute_at_53() {
    let ctx = context(53);
    let f = field();
    let mats: Vec<_> = [(HeckeKind::E, 2), (HeckeKind::E, 3), (HeckeKind::F, 2), (HeckeKind::F, 3), (HeckeKind::E, 5)]
        .iter()
        .map(|&(kind, ell)| ctx.matrix(HeckeOp { kind, ell }).unwrap().mat)
        .collect();
    for a in &mats {
        for b in &mats {
            assert_eq!(mat2_mul(a, b, f), mat2_mul(b, a, f));
        }
    }
}

#[test]
fn representative_choice_does_not_matter() {
    let ctx = context(53);
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for ell in [2u32, 3] {
        for kind in [HeckeKind::E, HeckeKind::F] {
            let op = HeckeOp { kind, ell };
            let reps = coset_reps(op, ctx.level).unwrap();
            let moved = CosetReps { op, mats: reps.mats.iter().map(|b| mat3_mul(b, &random_gamma(53, &mut rng))).collect() };
            for r in &ctx.rpair.ops {
                for f in &ctx.basis {
                    assert_eq!(
                        pair_hecke(r, f, &reps, &ctx.space).unwrap(),
                        pair_hecke(r, f, &moved, &ctx.space).unwrap(),
                        "{op}"
                    );
                }
            }
        }
    }
}

#[test]
fn hecke_images_of_noncuspidal_functions_are_annihilated() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for p in [11u64, 37] {
        let l = level(p);
        let space = ProjectiveSpace::new(l);
        for ell in [2u32, 3] {
            let reps = coset_reps(HeckeOp { kind: HeckeKind::E, ell }, l).unwrap();
            for _ in 0..3 {
                let f = apply_alpha(&random_w0(p, &mut rng)).add(&apply_beta(&random_w0(p, &mut rng)));
                let r = make_r(rng.gen_range(1..p as i64), rng.gen_range(1..p as i64), rng.gen_range(1..p as i64), l).unwrap();
                assert_eq!(pair_hecke(&r, &f, &reps, &space).unwrap(), 0, "p={p} ℓ={ell}");
            }
        }
    }
}

#[test]
fn r_pair_selection_errors() {
    let ctx = context(53);
    let l = ctx.level;
    assert_eq!(select_r_pair(&[], &ctx.space).unwrap_err(), HeckeError::DimMismatch(0));
    let degenerate = [ctx.basis[0].clone(), WFunction::zero(l, field())];
    assert_eq!(select_r_pair(&degenerate, &ctx.space).unwrap_err(), HeckeError::Exhausted);
    let m = ctx.rpair.pairing;
    assert!(sl3cusp::exactla::dense::mat2_inv(&m, field()).is_some());
}

#[test]
fn e2_at_521_is_unipotent_mod_q() {
    let ctx = context(521);
    let m = ctx.matrix(HeckeOp { kind: HeckeKind::E, ell: 2 }).unwrap();
    let f = field();
    let cp = charpoly_2x2(&m.mat, f);
    assert_eq!(cp.coeffs, vec![1, f.from_i64(-2), 1]);
    let m3 = ctx.matrix(HeckeOp { kind: HeckeKind::E, ell: 3 }).unwrap();
    assert_eq!(charpoly_2x2(&m3.mat, f).coeffs, vec![3, 2, 1]);
}
