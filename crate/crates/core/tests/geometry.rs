use std::collections::BTreeSet;

use pentapod_core::exactpoly::{rat, rat_int, Rational};
use pentapod_core::geometry::*;
use proptest::prelude::*;

fn pt(x: i64, y: i64) -> PlanarPoint {
    PlanarPoint::int(x, y)
}

fn worked_base() -> [PlanarPoint; 5] {
    canonical_base(&BaseParams::ints(0, 1, 2, 3).unwrap()).unwrap().points
}

#[test]
fn canonical_base_worked_values() {
    let cb = canonical_base(&BaseParams::ints(0, 1, 2, 3).unwrap()).unwrap();
    assert_eq!(cb.points[2], pt(-1, 0));
    assert_eq!(cb.u1, rat_int(-16));
    assert_eq!(cb.u2, rat_int(5));
    assert_eq!(cb.u3, rat_int(1));
}

#[test]
fn equal_b_is_degenerate() {
    assert!(matches!(BaseParams::ints(0, 2, 3, 2), Err(GeometryError::DegenerateBase(_))));
    assert!(matches!(BaseParams::ints(0, 0, 3, 2), Err(GeometryError::DegenerateBase(_))));
}

/// Nondegeneracy values against direct geometric predicates on the five points.
fn oracle(a4: Rational, b4: Rational, a5: Rational, b5: Rational) {
    let p = BaseParams { a4: a4.clone(), b4: b4.clone(), a5: a5.clone(), b5: b5.clone() };
    let m1 = pt(0, 0);
    let m2 = pt(1, 0);
    let m4 = PlanarPoint::new(a4, b4);
    let m5 = PlanarPoint::new(a5, b5);
    let m3 = line_meet(&m1, &m2, &m4, &m5).expect("finite M3");
    let u1_zero = m3 == m1 || m3 == m2;
    let u2_zero = parallel(&m5.sub(&m1), &m4.sub(&m2));
    let u3_zero = parallel(&m4.sub(&m1), &m5.sub(&m2));
    assert_eq!(p.u1() == rat_int(0), u1_zero);
    assert_eq!(p.u2() == rat_int(0), u2_zero);
    assert_eq!(p.u3() == rat_int(0), u3_zero);
}

#[test]
fn nondegeneracy_values_match_predicates() {
    oracle(rat_int(0), rat_int(1), rat_int(2), rat_int(3));
    // A5 moved onto A4: M3 = M1
    oracle(rat_int(0), rat_int(1), rat_int(0), rat_int(3));
    // M3 = M2
    oracle(rat_int(1), rat_int(1), rat_int(1), rat_int(3));
    // U2 = 0: B4 A5 + B5 - A4 B5 = 0
    oracle(rat_int(3), rat_int(2), rat_int(-1), rat_int(-1));
    // U3 = 0: B4 A5 - B4 - A4 B5 = 0
    oracle(rat_int(1), rat_int(2), rat_int(3), rat_int(4));
}

proptest! {
    #[test]
    fn nondegeneracy_random(a4 in -6i64..7, b4 in -6i64..7, a5 in -6i64..7, b5 in -6i64..7, d in 1i64..4) {
        prop_assume!(b4 != b5);
        oracle(rat(a4, d), rat(b4, d), rat(a5, 1), rat(b5, d));
    }

    #[test]
    fn tv_ratio_affine_invariant(
        xa in -9i64..10, ya in -9i64..10, dx in -5i64..6, dy in -5i64..6, rn in -7i64..8, rd in 1i64..5,
        l in prop::array::uniform4(-4i64..5), tx in -5i64..6, ty in -5i64..6,
    ) {
        prop_assume!(dx != 0 || dy != 0);
        prop_assume!(l[0] * l[3] - l[1] * l[2] != 0);
        let x = pt(xa, ya);
        let y = x.add(&pt(dx, dy));
        let r = rat(rn, rd);
        let z = x.add(&y.sub(&x).scale(&r));
        prop_assert_eq!(tv_ratio(&x, &y, &z).unwrap(), r.clone());
        let f = |p: &PlanarPoint| PlanarPoint::new(
            rat_int(l[0]) * &p.x + rat_int(l[1]) * &p.y + rat_int(tx),
            rat_int(l[2]) * &p.x + rat_int(l[3]) * &p.y + rat_int(ty),
        );
        prop_assert_eq!(tv_ratio(&f(&x), &f(&y), &f(&z)).unwrap(), r);
    }
}

#[test]
fn tv_ratio_examples() {
    assert_eq!(tv_ratio(&pt(0, 0), &pt(1, 0), &pt(-1, 0)).unwrap(), rat_int(-1));
    let (x, y) = (pt(2, 5), pt(-1, 3));
    assert_eq!(tv_ratio(&x, &y, &x).unwrap(), rat_int(0));
    assert_eq!(tv_ratio(&x, &y, &y).unwrap(), rat_int(1));
    assert_eq!(tv_ratio(&x, &y, &pt(0, 0)), Err(GeometryError::NotCollinear));
    assert_eq!(tv_ratio(&x, &x, &y), Err(GeometryError::CoincidentBase));
}

#[test]
fn kappa2_identity_platform() {
    let base = worked_base();
    let plat = build_platform(&base, Kappa::K2, &AffineMap2::identity()).unwrap();
    assert_eq!(plat, [pt(0, 1), pt(2, 3), PlanarPoint::ratio(2, 5, 3, 5), pt(0, 0), pt(1, 0)]);
    // m3 two ways: closed form and M1M5 ∩ M2M4
    let p = BaseParams::ints(0, 1, 2, 3).unwrap();
    assert_eq!(m3_closed_form(&p, &AffineMap2::identity()), plat[2]);
    assert_eq!(line_meet(&base[0], &base[4], &base[1], &base[3]).unwrap(), plat[2]);
}

#[test]
fn kappa2_identity_is_opposite_relabeling() {
    let base = worked_base();
    let plat = build_platform(&base, Kappa::K2, &AffineMap2::identity()).unwrap();
    // M1..M5 and the quadrilateral's sixth vertex, against the platform plus the sixth platform point
    let hex = duporcq_hexapod(&worked_design(), Kappa::K2).unwrap();
    let mut b: BTreeSet<PlanarPoint> = base.iter().cloned().collect();
    b.insert(planar(&hex.m6_base).unwrap());
    let mut m: BTreeSet<PlanarPoint> = plat.iter().cloned().collect();
    m.insert(planar(&hex.m6_platform).unwrap());
    assert_eq!(b, m);
    // the four anchors are shared as unordered sets
    let b4: BTreeSet<_> = [0, 1, 3, 4].iter().map(|&k| base[k].clone()).collect();
    let m4: BTreeSet<_> = [0, 1, 3, 4].iter().map(|&k| plat[k].clone()).collect();
    assert_eq!(b4, m4);
}

#[test]
fn kappa2_general_matches_closed_form() {
    let p = BaseParams::new(rat(1, 3), rat_int(2), rat(-1, 2), rat(5, 7)).unwrap();
    let base = canonical_base(&p).unwrap().points;
    let a = AffineMap2::new(rat(3, 2), rat(-2, 3), rat(5, 4)).unwrap();
    let plat = build_platform(&base, Kappa::K2, &a).unwrap();
    assert_eq!(plat[2], m3_closed_form(&p, &a));
    assert!(collinear(&plat[1], &plat[3], &plat[2]));
    assert!(collinear(&plat[0], &plat[4], &plat[2]));
}

#[test]
fn kappa3_platform() {
    let base = worked_base();
    let plat = build_platform(&base, Kappa::K3, &AffineMap2::identity()).unwrap();
    assert_eq!(plat, [pt(2, 3), pt(0, 1), pt(0, -3), pt(1, 0), pt(0, 0)]);
    assert!(collinear(&plat[0], &plat[3], &plat[2]));
    assert!(collinear(&plat[1], &plat[4], &plat[2]));
}

#[test]
fn affine_map_invariants() {
    assert!(AffineMap2::new(rat_int(0), rat_int(1), rat_int(1)).is_err());
    assert!(AffineMap2::new(rat_int(-1), rat_int(1), rat_int(1)).is_err());
    assert!(AffineMap2::new(rat_int(1), rat_int(1), rat_int(0)).is_err());
}

#[test]
fn hexapod_sixth_pair() {
    let hex = duporcq_hexapod(&worked_design(), Kappa::K2).unwrap();
    assert_eq!(hex.m6_base, PlanarPoint::ratio(2, 5, 3, 5).lift());
    assert_eq!(hex.m6_platform, pt(-1, 0).lift());
    let d = worked_design();
    // m6 = M3 and M6 = m3
    assert_eq!(hex.m6_platform, d.base[2]);
    assert_eq!(hex.m6_base, d.platform[2]);
}

#[test]
fn hexapod_kappa3() {
    let base = worked_base();
    let plat = build_platform(&base, Kappa::K3, &AffineMap2::identity()).unwrap();
    let d = PentapodDesign::planar(&base, &plat, std::array::from_fn(|_| rat_int(1)));
    let hex = duporcq_hexapod(&d, Kappa::K3).unwrap();
    // M6 = M1M4 ∩ M2M5
    assert_eq!(hex.m6_base, pt(0, -3).lift());
    assert_eq!(hex.m6_platform, pt(-1, 0).lift());
}

#[test]
fn noncongruent_is_not_duporcq() {
    let base = worked_base();
    let a = AffineMap2::new(rat_int(2), rat_int(0), rat_int(1)).unwrap();
    let plat = build_platform(&base, Kappa::K2, &a).unwrap();
    let d = PentapodDesign::planar(&base, &plat, std::array::from_fn(|_| rat_int(1)));
    assert!(matches!(duporcq_hexapod(&d, Kappa::K2), Err(GeometryError::NotDuporcq(_))));
}

#[test]
fn candidates_on_worked_base() {
    let base = worked_base();
    let cands = reconstruct_candidates(&base);
    let tags: Vec<&str> = cands.iter().map(|c| c.tag).collect();
    assert_eq!(tags, ["1a", "1b", "2a", "2bi", "2bii", "3a", "3bi", "3bii"]);
    let slots: BTreeSet<&str> = cands.iter().map(|c| c.slot).collect();
    assert_eq!(slots.len(), 6);
    let get = |t: &str| cands.iter().find(|c| c.tag == t).unwrap().platform.clone().unwrap();
    assert_eq!(get("1a"), base);
    assert_eq!(get("2bi"), build_platform(&base, Kappa::K2, &AffineMap2::identity()).unwrap());
    assert_eq!(get("3bi"), build_platform(&base, Kappa::K3, &AffineMap2::identity()).unwrap());
    let c1b = get("1b");
    assert_eq!(c1b[1], PlanarPoint::ratio(1, 2, 1, 2));
    assert_eq!(c1b[4], PlanarPoint::ratio(2, 3, 1, 1));
    assert_eq!(c1b[2], pt(1, 1));
    let c2a = get("2a");
    assert_eq!((c2a[1].clone(), c2a[4].clone()), (PlanarPoint::ratio(2, 3, 1, 1), PlanarPoint::ratio(1, 2, 1, 2)));
    let c2bii = get("2bii");
    assert_eq!(c2bii[1], PlanarPoint::ratio(-1, 2, 1, 2));
    assert_eq!(c2bii[4], PlanarPoint::ratio(-2, 3, 0, 1));
    assert_eq!(c2bii[2], PlanarPoint::ratio(-2, 5, 2, 5));
    for c in &cands {
        assert!(c.triples_ok, "{}", c.tag);
    }
    assert!(cands[0].closure_ok);
}

#[test]
fn design_json_round_trip() {
    let d = worked_design();
    let j = serde_json::to_string(&DesignJson::from_design(&d)).unwrap();
    assert!(j.contains("\"18/25\""));
    assert_eq!(parse_design_json(&j).unwrap(), d);
    assert!(matches!(parse_design_json("{\"base\": 3}"), Err(GeometryError::Schema(_))));
    let bad = j.replace("\"18/25\"", "\"x\"");
    assert!(matches!(parse_design_json(&bad), Err(GeometryError::Schema(_))));
}

#[test]
fn affine_match_detects_affinity() {
    let base = worked_base();
    let a = AffineMap2::new(rat_int(2), rat(1, 3), rat_int(-1)).unwrap();
    let img: Vec<PlanarPoint> = base.iter().map(|p| a.apply(p).add(&pt(3, -2))).collect();
    assert!(affine_match(&base, &img));
    let mut bent = img.clone();
    bent[2] = bent[2].add(&pt(0, 1));
    assert!(!affine_match(&base, &bent));
}
