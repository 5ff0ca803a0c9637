use pentapod_core::exactpoly::{rat, rat_int, MPoly, Rational};
use pentapod_core::geometry::*;
use pentapod_core::parallel::Execution;
use pentapod_core::selfmotion::*;
use pentapod_core::study::SymbolicDesign;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn params() -> BaseParams {
    BaseParams::ints(0, 1, 2, 3).unwrap()
}

fn legs() -> Vec<NumLeg> {
    numeric_legs(&worked_design())
}

fn hexapod() -> HexapodDesign {
    duporcq_hexapod(&worked_design(), Kappa::K2).unwrap()
}

#[test]
fn g_divides_and_recomposes() {
    let d = SymbolicDesign::generic().specialize(Some(&params()), Some(&AffineMap2::identity()), None);
    let g = derive_g(&d).unwrap();
    let ke = pentapod_core::study::compute_ke(&d).unwrap().substitute(&[("e0", MPoly::zero())]);
    let s = &(&MPoly::var("e1").pow(2) + &MPoly::var("e2").pow(2)) + &MPoly::var("e3").pow(2);
    assert_eq!(&s * &g, ke);
}

#[test]
fn g3_proportional_to_b2_u2sq_u3() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut ratio = None;
    let mut n = 0;
    while n < 10 {
        let p = BaseParams::new(
            rat(rng.random_range(-6..=6), rng.random_range(1..=3)),
            rat(rng.random_range(-6..=6), rng.random_range(1..=3)),
            rat(rng.random_range(-6..=6), rng.random_range(1..=3)),
            rat(rng.random_range(-6..=6), rng.random_range(1..=3)),
        );
        let Ok(p) = p else { continue };
        n += 1;
        let d = SymbolicDesign::generic().specialize(Some(&p), Some(&AffineMap2::identity()), None);
        let g = derive_g(&d).unwrap();
        let r = g.coeff(&[("R3", 1)]).div_exact(&g3_analogue(&d)).unwrap();
        assert!(r.is_constant());
        match &ratio {
            None => ratio = Some(r),
            Some(r0) => assert_eq!(&r, r0),
        }
    }
}

#[test]
fn g_generic_term_count_is_reported() {
    let d = SymbolicDesign::generic().specialize(None, Some(&AffineMap2::identity()), None);
    let g = derive_g(&d).unwrap();
    println!("G terms: {}", g.num_terms());
    assert!(g.has_var("R3"));
}

#[test]
fn motion_radii_oracles() {
    let r = motion_radii(&params(), &rat_int(1), &rat_int(18)).unwrap();
    assert_eq!(r, [rat_int(1), rat_int(18), rat(18, 25), rat_int(1), rat_int(18)]);
    for h2 in [1, 4] {
        let r = motion_radii(&params(), &rat_int(1 + h2), &rat_int(18 + h2)).unwrap();
        assert_eq!(r[2], rat(18, 25) + rat_int(h2));
    }
    assert!(matches!(motion_radii(&params(), &rat_int(0), &rat_int(17)), Err(SelfMotionError::Unrealizable(_))));
    let bad = [rat_int(1), rat_int(18), rat(18, 25), rat_int(2), rat_int(18)];
    assert!(matches!(check_motion_radii(&bad), Err(SelfMotionError::Unrealizable(_))));
}

#[test]
fn h_conditions_vanish_iff_symmetric_radii() {
    let d = SymbolicDesign::generic().specialize(Some(&params()), None, None);
    let (h1, h2) = h_conditions(&d);
    let at = |p: &MPoly, r: [i64; 5]| {
        let s: Vec<(&str, MPoly)> = pentapod_core::study::RADII.iter().zip(r).map(|(v, x)| (*v, MPoly::int(x))).collect();
        p.substitute(&s)
    };
    assert!(at(&h1, [1, 18, 7, 1, 18]).is_zero() && at(&h2, [1, 18, 7, 1, 18]).is_zero());
    for r in [[1, 18, 7, 2, 18], [1, 18, 7, 1, 17], [3, 5, 7, 4, 6]] {
        assert!(!(at(&h1, r).is_zero() && at(&h2, r).is_zero()), "{r:?}");
    }
}

#[test]
fn half_turn_sample() {
    let s = sample_pose(&legs(), [0.0, 0.0, 1.0], &Tolerances::default()).unwrap();
    assert!(s.max_residual() <= 1e-12);
    assert!(s.f0abs <= 1e-12);
    assert_eq!(s.fiber_dim, 2);
}

#[test]
fn tilted_sample() {
    let tol = Tolerances::default();
    let l = legs();
    let th = 0.5 * reachable_theta(&l, 0.7, &tol);
    let e = [th.sin() * 0.7f64.cos(), th.sin() * 0.7f64.sin(), th.cos()];
    let s = sample_pose(&l, e, &tol).unwrap();
    assert!(s.max_residual() <= 1e-9 * 19.0);
    assert!(s.f0abs <= 1e-12);
    assert_eq!(s.fiber_dim, 1);
}

#[test]
fn perturbed_radius_is_inconsistent() {
    let mut l = legs();
    l[1].r2 += 1e-3;
    let r = sample_pose(&l, [0.0, 0.0, 1.0], &Tolerances::default());
    assert!(matches!(r, Err(SelfMotionError::InconsistentSystem { .. })), "{r:?}");
}

#[test]
fn verify_grid_of_100() {
    let tol = Tolerances::default();
    let l = hexapod_legs(&hexapod());
    assert!((l[5].r2 - 0.72).abs() < 1e-15);
    for exec in [Execution::Parallel, Execution::Sequential] {
        let rep = verify_selfmotion(&l, 100, &tol, exec);
        assert!(rep.failures.is_empty(), "{:?}", rep.failures);
        assert_eq!(rep.samples.len(), 100);
        assert!(rep.max_leg_residual <= 1e-9, "{}", rep.max_leg_residual);
        assert!(rep.max_f0 <= 1e-12, "{}", rep.max_f0);
        let t = rep.tangent.as_ref().unwrap();
        assert_eq!(t.rank, 2);
        assert!(t.angle > 1e-3);
        assert!(rep.ok(&tol, &l));
    }
}

#[test]
fn parallel_and_sequential_agree() {
    let tol = Tolerances::default();
    let l = legs();
    let a = verify_selfmotion(&l, 20, &tol, Execution::Parallel);
    let b = verify_selfmotion(&l, 20, &tol, Execution::Sequential);
    assert_eq!(a.samples, b.samples);
}

#[test]
fn non_duporcq_fails_at_first_sample() {
    let d = worked_design();
    let base = d.base_planar().unwrap();
    let plat = build_platform(&base, Kappa::K2, &AffineMap2::new(rat_int(2), rat_int(0), rat_int(1)).unwrap()).unwrap();
    let bad = PentapodDesign::planar(&base, &plat, d.radii2.clone());
    let rep = verify_selfmotion(&numeric_legs(&bad), 10, &Tolerances::default(), Execution::Sequential);
    assert!(rep.failures[0].starts_with("sample 0"), "{:?}", rep.failures);
}

#[test]
fn translational_submotion_worked() {
    let rep = translational_submotion(&worked_design(), 24, &Tolerances::default()).unwrap();
    assert_eq!(rep.rank, 1);
    assert_eq!(rep.direction, ["3", "2", "0"].map(String::from));
    assert_eq!(rep.differences[0], ["3", "2", "0"].map(String::from));
    assert_eq!(rep.differences[2], ["0", "0", "0"].map(String::from));
    assert_eq!(rep.differences[3], ["3", "2", "0"].map(String::from));
    assert!(rep.max_residual <= 1e-9);
    assert!(rep.max_plane_offset <= 1e-12);
    assert!(rep.radius > 0.0);
}

#[test]
fn translational_rank_too_high() {
    let d = worked_design();
    let base = d.base_planar().unwrap();
    let plat = build_platform(&base, Kappa::K2, &AffineMap2::new(rat_int(2), rat_int(1), rat_int(3)).unwrap()).unwrap();
    let bad = PentapodDesign::planar(&base, &plat, d.radii2.clone());
    assert!(matches!(translational_submotion(&bad, 4, &Tolerances::default()), Err(SelfMotionError::RankTooHigh(_))));
}

#[test]
fn similarity_bond_worked() {
    let b = similarity_bond_direction(&worked_design()).unwrap();
    let pts = |p: &PlanarPoint| (p.x.clone(), p.y.clone());
    let set = |a: &PlanarPoint, c: &PlanarPoint| {
        let mut v = vec![pts(a), pts(c)];
        v.sort();
        v
    };
    let want = |x: (i64, i64, i64, i64), y: (i64, i64, i64, i64)| {
        let mut v = vec![(rat(x.0, x.1), rat(x.2, x.3)), (rat(y.0, y.1), rat(y.2, y.3))];
        v.sort();
        v
    };
    assert_eq!(set(&b.m3p, &b.m3pp), want((-2, 1, -1, 1), (-1, 2, 0, 1)));
    assert_eq!(set(&b.big_m3p, &b.big_m3pp), want((4, 5, 6, 5), (1, 5, 4, 5)));
    assert!(b.g_collinear && b.big_g_collinear && b.parallel);
    assert_eq!(b.g_direction, PlanarPoint::new(rat_int(1), rat(2, 3)));
    // same direction as the translational sub-motion
    let t = translational_submotion(&worked_design(), 4, &Tolerances::default()).unwrap();
    let d: Vec<Rational> = t.direction.iter().map(|s| pentapod_core::exactpoly::parse_rational(s).unwrap()).collect();
    assert!(parallel(&b.g_direction, &PlanarPoint::new(d[0].clone(), d[1].clone())));
}

#[test]
fn projected_bond_conic() {
    let b = projected_bonds();
    assert_eq!(b.degree, 2);
    assert!(b.witnesses_on_n0);
    assert_eq!(b.witnesses[0], ["0", "1", "i", "0"].map(String::from));
    let rep = verify_selfmotion(&legs(), 10, &Tolerances::default(), Execution::Sequential);
    assert!(rep.samples.iter().all(|s| s.pose.norm() > 0.5));
}

#[test]
fn architectural_singularity() {
    let l = hexapod_legs(&hexapod());
    assert!(arch_singularity_check(&l, 100, 1) <= 1e-9);
    let mut moved = l.clone();
    moved[5].platform[0] += 0.1;
    assert!(arch_singularity_check(&moved, 100, 1) > 1e-6);
}

#[test]
fn removed_leg_stays_on_length() {
    // the sixth leg is driven only by the other five and keeps its length
    let rep = verify_selfmotion(&hexapod_legs(&hexapod()), 30, &Tolerances::default(), Execution::Parallel);
    for s in &rep.samples {
        assert!(s.leg_residuals[5].abs() <= 1e-9);
    }
}

#[test]
fn trajectory_csv_shape() {
    let h = trajectory_header();
    assert_eq!(h.len(), 17);
    assert_eq!(h[0], "t1");
    assert_eq!(h[16], "res6");
    let rep = verify_selfmotion(&legs(), 1, &Tolerances::default(), Execution::Sequential);
    assert_eq!(rep.samples.len(), 1);
    let row = trajectory_row(&rep.samples[0]);
    assert_eq!(row.len(), 17);
    assert_eq!(row[16], "");
}

