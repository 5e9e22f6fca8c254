//! The operators R_{x,y,z} kill exactly the non-cuspidal part of W.

mod common;

use common::{field, level, random_w, random_w0};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sl3cusp::exactla::Solver;
use sl3cusp::hecke::*;
use sl3cusp::wspaces::*;
use sl3cusp::ProjectiveSpace;

#[test]
fn r_annihilates_alpha_and_beta_images() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut samples = 0;
    for p in [11u64, 13, 37, 53] {
        let space = ProjectiveSpace::new(level(p));
        for _ in 0..8 {
            let f = apply_alpha(&random_w0(p, &mut rng)).add(&apply_beta(&random_w0(p, &mut rng)));
            for _ in 0..5 {
                let (x, y, z) = (rng.gen_range(1..p as i64), rng.gen_range(1..p as i64), rng.gen_range(1..p as i64));
                let r = make_r(x, y, z, level(p)).unwrap();
                assert_eq!(pair(&r, &f, &space), 0, "p={p} R=({x},{y},{z})");
                samples += 1;
            }
        }
    }
    assert!(samples >= 100);
}

#[test]
fn r_kills_beta_images_for_every_triple() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let p = 11u64;
    let space = ProjectiveSpace::new(level(p));
    let f = apply_beta(&random_w0(p, &mut rng));
    for x in 1..p as i64 {
        for y in 1..p as i64 {
            for z in 1..p as i64 {
                assert_eq!(pair(&make_r(x, y, z, level(p)).unwrap(), &f, &space), 0);
            }
        }
    }
}

#[test]
fn joint_kernel_is_the_noncuspidal_part() {
    for p in [5u64, 7, 11, 13, 37] {
        let l = level(p);
        let sys = build_ann_system(l, field()).unwrap();
        let kernel = sys.w_basis(Solver::Elimination);
        let dim_w0 = build_w0_system(l, field()).unwrap().nullity(Solver::Elimination);
        assert_eq!(kernel.len(), 2 * dim_w0, "p={p}");
        for f in &kernel {
            let c = apply_c(f).unwrap();
            let d = apply_d(f).unwrap();
            assert!(is_in_w0(&c) && is_in_w0(&d), "p={p}");
            assert_eq!(&apply_alpha(&c).add(&apply_beta(&d)), f, "p={p}");
        }
    }
}

#[test]
fn pairing_against_a_cusp_form_is_the_four_point_sum() {
    let l = level(53);
    let space = ProjectiveSpace::new(l);
    let basis = build_u_system(l, field()).unwrap().w_basis(Solver::Elimination);
    let r = make_r(1, 2, 3, l).unwrap();
    let inv2 = space.inv(2) as i64;
    for f in &basis {
        let fq = field();
        let direct = fq.sub(
            fq.add(fq.add(f.at(&space, 1, 1, 2), f.at(&space, 1, 2, 3)), f.at(&space, 1, 3, 1)),
            f.at(&space, 1, 2 * inv2, 3 * inv2),
        );
        assert_eq!(pair(&r, f, &space), direct);
    }
}

#[test]
fn pairing_of_zero_is_zero() {
    let l = level(13);
    let space = ProjectiveSpace::new(l);
    let r = make_r(2, 5, 7, l).unwrap();
    assert_eq!(pair(&r, &WFunction::zero(l, field()), &space), 0);
    let reps = coset_reps(HeckeOp { kind: HeckeKind::E, ell: 2 }, l).unwrap();
    assert_eq!(pair_hecke(&r, &WFunction::zero(l, field()), &reps, &space).unwrap(), 0);
}

#[test]
fn random_w_is_not_annihilated_when_cusp_forms_exist() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let p = 53u64;
    let space = ProjectiveSpace::new(level(p));
    let f = random_w(p, &mut rng);
    let hit = (1..20i64).any(|z| pair(&make_r(2, 4, z + 3, level(p)).unwrap(), &f, &space) != 0);
    assert!(hit);
}
