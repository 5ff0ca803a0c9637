//! Planar pentapod and hexapod designs: canonical base, kappa platforms,
//! complete quadrilaterals, affine ratios and the parallel-line reconstructions.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exactpoly::{parse_rational, rat, rat_int, rat_to_f64, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error("degenerate base: {0}")]
    DegenerateBase(String),
    #[error("degenerate platform: {0}")]
    DegeneratePlatform(String),
    #[error("invalid affine map: {0}")]
    InvalidAffineMap(String),
    #[error("points are not collinear")]
    NotCollinear,
    #[error("reference points coincide")]
    CoincidentBase,
    #[error("not a Duporcq pentapod: {0}")]
    NotDuporcq(String),
    #[error("design is not planar (all z must be 0)")]
    NonPlanar,
    #[error("schema error: {0}")]
    Schema(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlanarPoint {
    pub x: Rational,
    pub y: Rational,
}

pub type Point3 = [Rational; 3];

/// Serialized as ["p/q", "p/q"].
impl Serialize for PlanarPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.x.to_string(), self.y.to_string()].serialize(s)
    }
}

impl PlanarPoint {
    pub fn new(x: Rational, y: Rational) -> Self {
        PlanarPoint { x, y }
    }

    pub fn int(x: i64, y: i64) -> Self {
        PlanarPoint { x: rat_int(x), y: rat_int(y) }
    }

    pub fn ratio(xn: i64, xd: i64, yn: i64, yd: i64) -> Self {
        PlanarPoint { x: rat(xn, xd), y: rat(yn, yd) }
    }

    pub fn sub(&self, o: &PlanarPoint) -> PlanarPoint {
        PlanarPoint { x: &self.x - &o.x, y: &self.y - &o.y }
    }

    pub fn add(&self, o: &PlanarPoint) -> PlanarPoint {
        PlanarPoint { x: &self.x + &o.x, y: &self.y + &o.y }
    }

    pub fn scale(&self, s: &Rational) -> PlanarPoint {
        PlanarPoint { x: &self.x * s, y: &self.y * s }
    }

    pub fn dot(&self, o: &PlanarPoint) -> Rational {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn cross(&self, o: &PlanarPoint) -> Rational {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn norm2(&self) -> Rational {
        self.dot(self)
    }

    pub fn lift(&self) -> Point3 {
        [self.x.clone(), self.y.clone(), Rational::zero()]
    }

    pub fn to_f64(&self) -> [f64; 2] {
        [rat_to_f64(&self.x), rat_to_f64(&self.y)]
    }
}

pub fn planar(p: &Point3) -> Result<PlanarPoint, GeometryError> {
    if !p[2].is_zero() {
        return Err(GeometryError::NonPlanar);
    }
    Ok(PlanarPoint::new(p[0].clone(), p[1].clone()))
}

pub fn collinear(a: &PlanarPoint, b: &PlanarPoint, c: &PlanarPoint) -> bool {
    b.sub(a).cross(&c.sub(a)).is_zero()
}

pub fn parallel(d: &PlanarPoint, e: &PlanarPoint) -> bool {
    d.cross(e).is_zero()
}

/// Intersection of the lines p + s d and q + t e; None if parallel or undefined.
pub fn intersect(p: &PlanarPoint, d: &PlanarPoint, q: &PlanarPoint, e: &PlanarPoint) -> Option<PlanarPoint> {
    let den = d.cross(e);
    if den.is_zero() {
        return None;
    }
    let s = q.sub(p).cross(e) / den;
    Some(p.add(&d.scale(&s)))
}

/// Intersection of line ab with line cd.
pub fn line_meet(a: &PlanarPoint, b: &PlanarPoint, c: &PlanarPoint, d: &PlanarPoint) -> Option<PlanarPoint> {
    intersect(a, &b.sub(a), c, &d.sub(c))
}

/// Affine ratio r with z = x + r (y - x).
pub fn tv_ratio(x: &PlanarPoint, y: &PlanarPoint, z: &PlanarPoint) -> Result<Rational, GeometryError> {
    if x == y {
        return Err(GeometryError::CoincidentBase);
    }
    if !collinear(x, y, z) {
        return Err(GeometryError::NotCollinear);
    }
    let d = y.sub(x);
    Ok(z.sub(x).dot(&d) / d.norm2())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseParams {
    pub a4: Rational,
    pub b4: Rational,
    pub a5: Rational,
    pub b5: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalBase {
    pub points: [PlanarPoint; 5],
    pub u1: Rational,
    pub u2: Rational,
    pub u3: Rational,
}

impl BaseParams {
    pub fn new(a4: Rational, b4: Rational, a5: Rational, b5: Rational) -> Result<Self, GeometryError> {
        let p = BaseParams { a4, b4, a5, b5 };
        p.check()?;
        Ok(p)
    }

    pub fn ints(a4: i64, b4: i64, a5: i64, b5: i64) -> Result<Self, GeometryError> {
        Self::new(rat_int(a4), rat_int(b4), rat_int(a5), rat_int(b5))
    }

    /// (B4 A5 - A4 B5)
    pub fn x(&self) -> Rational {
        &self.b4 * &self.a5 - &self.a4 * &self.b5
    }

    pub fn u1(&self) -> Rational {
        let x = self.x();
        (&self.b4 - &self.b5) * &x * (&x - &self.b4 + &self.b5)
    }

    pub fn u2(&self) -> Rational {
        &self.b4 * &self.a5 + &self.b5 - &self.a4 * &self.b5
    }

    pub fn u3(&self) -> Rational {
        &self.b4 * &self.a5 - &self.b4 - &self.a4 * &self.b5
    }

    /// A = A5 - A4 + 1
    pub fn a(&self) -> Rational {
        &self.a5 - &self.a4 + Rational::one()
    }

    /// B = B4 - B5
    pub fn b(&self) -> Rational {
        &self.b4 - &self.b5
    }

    fn check(&self) -> Result<(), GeometryError> {
        let bad = |s: &str| Err(GeometryError::DegenerateBase(s.to_string()));
        if (&self.b4 * &self.b5).is_zero() {
            return bad("B4*B5 = 0");
        }
        if self.b4 == self.b5 {
            return bad("B4 = B5 puts M3 at infinity");
        }
        if self.u1().is_zero() {
            return bad("U1 = 0: M3 coincides with M1 or M2");
        }
        if self.u2().is_zero() {
            return bad("U2 = 0");
        }
        if self.u3().is_zero() {
            return bad("U3 = 0");
        }
        Ok(())
    }
}

pub fn canonical_base(params: &BaseParams) -> Result<CanonicalBase, GeometryError> {
    params.check()?;
    let m3x = params.x() / params.b();
    let points = [
        PlanarPoint::int(0, 0),
        PlanarPoint::int(1, 0),
        PlanarPoint::new(m3x, Rational::zero()),
        PlanarPoint::new(params.a4.clone(), params.b4.clone()),
        PlanarPoint::new(params.a5.clone(), params.b5.clone()),
    ];
    Ok(CanonicalBase { points, u1: params.u1(), u2: params.u2(), u3: params.u3() })
}

/// Reads (A4, B4, A5, B5) back from a base in canonical position.
pub fn canonical_params(base: &[PlanarPoint; 5]) -> Result<BaseParams, GeometryError> {
    if base[0] != PlanarPoint::int(0, 0) || base[1] != PlanarPoint::int(1, 0) || !base[2].y.is_zero() {
        return Err(GeometryError::DegenerateBase("base is not in canonical position".into()));
    }
    let p = BaseParams::new(base[3].x.clone(), base[3].y.clone(), base[4].x.clone(), base[4].y.clone())?;
    if canonical_base(&p)?.points != *base {
        return Err(GeometryError::DegenerateBase("M3 is not the meet of M1M2 and M4M5".into()));
    }
    Ok(p)
}

/// The affine map of a kappa_2 platform over a canonical base, if the platform is one.
pub fn kappa2_map(base: &[PlanarPoint; 5], platform: &[PlanarPoint; 5]) -> Result<AffineMap2, GeometryError> {
    let not = || GeometryError::NotDuporcq("platform is not a kappa_2 image of the base".into());
    let b4 = &base[3].y;
    if !platform[3].x.is_zero() || !platform[3].y.is_zero() || !platform[4].y.is_zero() {
        return Err(not());
    }
    let mu1 = platform[4].x.clone();
    let mu3 = &platform[0].y / b4;
    let mu2 = (&platform[0].x - &mu1 * &base[3].x) / b4;
    let a = AffineMap2::new(mu1, mu2, mu3).map_err(|_| not())?;
    if build_platform(base, Kappa::K2, &a)? != *platform {
        return Err(not());
    }
    Ok(a)
}

/// Upper-triangular linear part [[mu1, mu2], [0, mu3]].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap2 {
    pub mu1: Rational,
    pub mu2: Rational,
    pub mu3: Rational,
}

impl AffineMap2 {
    pub fn new(mu1: Rational, mu2: Rational, mu3: Rational) -> Result<Self, GeometryError> {
        if (&mu1 * &mu3).is_zero() {
            return Err(GeometryError::InvalidAffineMap("mu1*mu3 = 0".into()));
        }
        if !mu1.is_positive() {
            return Err(GeometryError::InvalidAffineMap("mu1 must be positive".into()));
        }
        Ok(AffineMap2 { mu1, mu2, mu3 })
    }

    pub fn identity() -> Self {
        AffineMap2 { mu1: Rational::one(), mu2: Rational::zero(), mu3: Rational::one() }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn apply(&self, p: &PlanarPoint) -> PlanarPoint {
        PlanarPoint { x: &self.mu1 * &p.x + &self.mu2 * &p.y, y: &self.mu3 * &p.y }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kappa {
    K2,
    K3,
}

fn distinct(points: &[PlanarPoint]) -> bool {
    (0..points.len()).all(|i| (i + 1..points.len()).all(|j| points[i] != points[j]))
}

/// Platform of a reconstruction-2 (K2) or reconstruction-3 (K3) design.
pub fn build_platform(base: &[PlanarPoint; 5], kappa: Kappa, a: &AffineMap2) -> Result<[PlanarPoint; 5], GeometryError> {
    let img = |k: usize| a.apply(&base[k]);
    let (m1, m2, m4, m5) = match kappa {
        Kappa::K2 => (img(3), img(4), img(0), img(1)),
        Kappa::K3 => (img(4), img(3), img(1), img(0)),
    };
    let m3 = match kappa {
        Kappa::K2 => line_meet(&m2, &m4, &m1, &m5),
        Kappa::K3 => line_meet(&m1, &m4, &m2, &m5),
    }
    .ok_or_else(|| GeometryError::DegeneratePlatform("m3 at infinity".into()))?;
    let out = [m1, m2, m3, m4, m5];
    if !distinct(&out) {
        return Err(GeometryError::DegeneratePlatform("coincident platform anchors".into()));
    }
    Ok(out)
}

/// The closed-form third platform anchor of a kappa_2 platform over the canonical base.
pub fn m3_closed_form(params: &BaseParams, a: &AffineMap2) -> PlanarPoint {
    let u2 = params.u2();
    PlanarPoint {
        x: &params.b4 * (&params.a5 * &a.mu1 + &params.b5 * &a.mu2) / &u2,
        y: &params.b4 * &params.b5 * &a.mu3 / &u2,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PentapodDesign {
    pub base: [Point3; 5],
    pub platform: [Point3; 5],
    pub radii2: [Rational; 5],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HexapodDesign {
    pub pentapod: PentapodDesign,
    pub m6_base: Point3,
    pub m6_platform: Point3,
}

impl PentapodDesign {
    pub fn planar(base: &[PlanarPoint; 5], platform: &[PlanarPoint; 5], radii2: [Rational; 5]) -> Self {
        PentapodDesign {
            base: std::array::from_fn(|k| base[k].lift()),
            platform: std::array::from_fn(|k| platform[k].lift()),
            radii2,
        }
    }

    pub fn base_planar(&self) -> Result<[PlanarPoint; 5], GeometryError> {
        let v: Vec<PlanarPoint> = self.base.iter().map(planar).collect::<Result<_, _>>()?;
        Ok(v.try_into().unwrap())
    }

    pub fn platform_planar(&self) -> Result<[PlanarPoint; 5], GeometryError> {
        let v: Vec<PlanarPoint> = self.platform.iter().map(planar).collect::<Result<_, _>>()?;
        Ok(v.try_into().unwrap())
    }
}

/// Base (0,1,2,3), identity kappa_2 and leg lengths² (1, 18, 18/25, 1, 18).
pub fn worked_design() -> PentapodDesign {
    let base = canonical_base(&BaseParams::ints(0, 1, 2, 3).unwrap()).unwrap().points;
    let platform = build_platform(&base, Kappa::K2, &AffineMap2::identity()).unwrap();
    PentapodDesign::planar(&base, &platform, [rat_int(1), rat_int(18), rat(18, 25), rat_int(1), rat_int(18)])
}

/// Checks the collinearity pattern of the base: M1,M2,M3 and M3,M4,M5 collinear, points distinct,
/// and M3 is the only point shared by the two lines.
pub fn check_base_pattern(base: &[PlanarPoint; 5]) -> Result<(), GeometryError> {
    if !distinct(base) {
        return Err(GeometryError::DegenerateBase("base points not pairwise distinct".into()));
    }
    if !collinear(&base[0], &base[1], &base[2]) || !collinear(&base[2], &base[3], &base[4]) {
        return Err(GeometryError::DegenerateBase("M1,M2,M3 and M3,M4,M5 must be collinear".into()));
    }
    if collinear(&base[0], &base[1], &base[3]) || collinear(&base[0], &base[1], &base[4]) {
        return Err(GeometryError::DegenerateBase("four collinear base points".into()));
    }
    Ok(())
}

/// Pairing of opposite vertices and the completing lines for each reconstruction type.
struct QuadLabels {
    /// base index -> platform index for the four anchors 1,2,4,5 (0-based)
    pairs: [(usize, usize); 4],
    /// lines whose intersection gives M6 (0-based base indices)
    m6_lines: ((usize, usize), (usize, usize)),
}

fn quad_labels(kappa: Kappa) -> QuadLabels {
    match kappa {
        Kappa::K2 => QuadLabels { pairs: [(0, 3), (1, 4), (3, 0), (4, 1)], m6_lines: ((0, 4), (1, 3)) },
        Kappa::K3 => QuadLabels { pairs: [(0, 4), (1, 3), (3, 1), (4, 0)], m6_lines: ((0, 3), (1, 4)) },
    }
}

/// Completes a Duporcq pentapod to the hexapod of two congruent complete quadrilaterals.
pub fn duporcq_hexapod(design: &PentapodDesign, kappa: Kappa) -> Result<HexapodDesign, GeometryError> {
    let b = design.base_planar()?;
    let p = design.platform_planar()?;
    check_base_pattern(&b)?;
    let lab = quad_labels(kappa);
    for (i, &(bi, pi)) in lab.pairs.iter().enumerate() {
        for &(bj, pj) in &lab.pairs[i + 1..] {
            if b[bi].sub(&b[bj]).norm2() != p[pi].sub(&p[pj]).norm2() {
                return Err(GeometryError::NotDuporcq("quadrilaterals are not congruent".into()));
            }
        }
    }
    let ((a1, a2), (c1, c2)) = lab.m6_lines;
    let m6_base = line_meet(&b[a1], &b[a2], &b[c1], &b[c2])
        .ok_or_else(|| GeometryError::NotDuporcq("completing lines are parallel".into()))?;
    // the platform images of the completing lines must meet in m3
    let img = |k: usize| lab.pairs.iter().find(|(bi, _)| *bi == k).unwrap().1;
    let on1 = collinear(&p[img(a1)], &p[img(a2)], &p[2]);
    let on2 = collinear(&p[img(c1)], &p[img(c2)], &p[2]);
    if !(on1 && on2) {
        return Err(GeometryError::NotDuporcq("m3 is not the opposite vertex of M6".into()));
    }
    // m6 is the platform vertex in the role of M3: intersection of the images of M1M2 and M4M5
    let m6 = line_meet(&p[img(0)], &p[img(1)], &p[img(3)], &p[img(4)])
        .ok_or_else(|| GeometryError::NotDuporcq("platform lines are parallel".into()))?;
    Ok(HexapodDesign { pentapod: design.clone(), m6_base: m6_base.lift(), m6_platform: m6.lift() })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    /// one of 1a, 1b, 2a, 2bi, 2bii, 3a, 3bi, 3bii
    pub tag: &'static str,
    /// the (a)/(b) slot of the case tree the candidate belongs to
    pub slot: &'static str,
    pub platform: Option<[PlanarPoint; 5]>,
    /// the remaining parallelism condition holds
    pub closure_ok: bool,
    /// the collinear triples of the case hold
    pub triples_ok: bool,
}

/// One parallel-line rule: point `target` = (line through anchor a parallel to base line) ∩ (...)
struct Rule {
    target: usize,
    through_a: usize,
    dir_a: (usize, usize),
    through_b: usize,
    dir_b: (usize, usize),
}

struct CaseSpec {
    tag: &'static str,
    slot: &'static str,
    anchors: [(usize, usize); 2],
    rules: [Rule; 2],
    m3_lines: ((usize, usize), (usize, usize)),
    closure: ((usize, usize), (usize, usize)),
}

const fn rule(target: usize, through_a: usize, dir_a: (usize, usize), through_b: usize, dir_b: (usize, usize)) -> Rule {
    Rule { target, through_a, dir_a, through_b, dir_b }
}

// indices are 0-based: 0=1, 1=2, 2=3, 3=4, 4=5
fn case_specs() -> Vec<CaseSpec> {
    let mut v = vec![
        CaseSpec {
            tag: "1a",
            slot: "1a",
            anchors: [(0, 0), (3, 3)],
            rules: [rule(1, 0, (0, 1), 3, (1, 3)), rule(4, 3, (3, 4), 0, (0, 4))],
            m3_lines: ((0, 1), (3, 4)),
            closure: ((1, 4), (1, 4)),
        },
        CaseSpec {
            tag: "1b",
            slot: "1b",
            anchors: [(0, 0), (3, 3)],
            rules: [rule(1, 0, (3, 4), 3, (1, 3)), rule(4, 3, (0, 1), 0, (0, 4))],
            m3_lines: ((0, 1), (3, 4)),
            closure: ((1, 4), (1, 4)),
        },
        CaseSpec {
            tag: "2a",
            slot: "2a",
            anchors: [(0, 3), (3, 0)],
            rules: [rule(1, 0, (0, 1), 3, (0, 4)), rule(4, 3, (3, 4), 0, (1, 3))],
            m3_lines: ((0, 4), (1, 3)),
            closure: ((1, 4), (1, 4)),
        },
        CaseSpec {
            tag: "2bi",
            slot: "2b",
            anchors: [(0, 3), (3, 0)],
            rules: [rule(1, 0, (3, 4), 3, (0, 4)), rule(4, 3, (0, 1), 0, (1, 3))],
            m3_lines: ((0, 4), (1, 3)),
            closure: ((1, 4), (1, 4)),
        },
        CaseSpec {
            tag: "2bii",
            slot: "2b",
            anchors: [(0, 3), (3, 0)],
            rules: [rule(1, 0, (3, 4), 3, (1, 3)), rule(4, 3, (0, 1), 0, (0, 4))],
            m3_lines: ((0, 4), (1, 3)),
            closure: ((1, 4), (1, 4)),
        },
    ];
    let swap = |k: usize| match k {
        3 => 4,
        4 => 3,
        k => k,
    };
    let sp = |(a, b): (usize, usize)| (swap(a), swap(b));
    let third: Vec<CaseSpec> = v[2..]
        .iter()
        .map(|c| CaseSpec {
            tag: match c.tag {
                "2a" => "3a",
                "2bi" => "3bi",
                _ => "3bii",
            },
            slot: if c.slot == "2a" { "3a" } else { "3b" },
            anchors: [(swap(c.anchors[0].0), swap(c.anchors[0].1)), (swap(c.anchors[1].0), swap(c.anchors[1].1))],
            rules: [
                rule(swap(c.rules[0].target), swap(c.rules[0].through_a), sp(c.rules[0].dir_a), swap(c.rules[0].through_b), sp(c.rules[0].dir_b)),
                rule(swap(c.rules[1].target), swap(c.rules[1].through_a), sp(c.rules[1].dir_a), swap(c.rules[1].through_b), sp(c.rules[1].dir_b)),
            ],
            m3_lines: (sp(c.m3_lines.0), sp(c.m3_lines.1)),
            closure: (sp(c.closure.0), sp(c.closure.1)),
        })
        .collect();
    v.extend(third);
    v
}

fn build_candidate(base: &[PlanarPoint; 5], spec: &CaseSpec) -> Option<[PlanarPoint; 5]> {
    let mut pts: [Option<PlanarPoint>; 5] = Default::default();
    for (plat, b) in spec.anchors {
        pts[plat] = Some(base[b].clone());
    }
    for r in &spec.rules {
        let pa = pts[r.through_a].clone()?;
        let pb = pts[r.through_b].clone()?;
        let da = base[r.dir_a.1].sub(&base[r.dir_a.0]);
        let db = base[r.dir_b.1].sub(&base[r.dir_b.0]);
        pts[r.target] = Some(intersect(&pa, &da, &pb, &db)?);
    }
    let ((a, b), (c, d)) = spec.m3_lines;
    let get = |k: usize| pts[k].clone();
    let m3 = line_meet(&get(a)?, &get(b)?, &get(c)?, &get(d)?)?;
    pts[2] = Some(m3);
    let out: [PlanarPoint; 5] = std::array::from_fn(|k| pts[k].clone().unwrap());
    if !distinct(&out) {
        return None;
    }
    Some(out)
}

/// All parallel-line candidates of the case tree, in the order 1a, 1b, 2a, 2bi, 2bii, 3a, 3bi, 3bii.
pub fn reconstruct_candidates(base: &[PlanarPoint; 5]) -> Vec<Candidate> {
    case_specs()
        .iter()
        .map(|spec| {
            let platform = build_candidate(base, spec);
            let (closure_ok, triples_ok) = match &platform {
                None => (false, false),
                Some(p) => {
                    let ((a, b), (c, d)) = spec.closure;
                    let closure = parallel(&p[b].sub(&p[a]), &base[d].sub(&base[c]));
                    let ((x1, x2), (y1, y2)) = spec.m3_lines;
                    let triples = collinear(&p[x1], &p[x2], &p[2]) && collinear(&p[y1], &p[y2], &p[2]);
                    (closure, triples)
                }
            };
            Candidate { tag: spec.tag, slot: spec.slot, platform, closure_ok, triples_ok }
        })
        .collect()
}

/// True if one affine map of the plane sends every src_k to dst_k.
pub fn affine_match(src: &[PlanarPoint], dst: &[PlanarPoint]) -> bool {
    assert_eq!(src.len(), dst.len());
    // pick a non-degenerate frame among the source points
    let n = src.len();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let u = src[j].sub(&src[i]);
                let w = src[k].sub(&src[i]);
                let det = u.cross(&w);
                if det.is_zero() {
                    continue;
                }
                let du = dst[j].sub(&dst[i]);
                let dw = dst[k].sub(&dst[i]);
                return src.iter().zip(dst).all(|(s, d)| {
                    let r = s.sub(&src[i]);
                    // r = a u + b w
                    let a = r.cross(&w) / &det;
                    let b = u.cross(&r) / &det;
                    let img = dst[i].add(&du.scale(&a)).add(&dw.scale(&b));
                    img == *d
                });
            }
        }
    }
    false
}

// ---------------------------------------------------------------- JSON I/O

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct SixthJson {
    #[serde(rename = "M")]
    pub base: Vec<String>,
    #[serde(rename = "m")]
    pub platform: Vec<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct DesignJson {
    pub base: Vec<Vec<String>>,
    pub platform: Vec<Vec<String>>,
    pub radii2: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sixth: Option<SixthJson>,
}

fn point3_from(v: &[String]) -> Result<Point3, GeometryError> {
    if v.len() != 3 {
        return Err(GeometryError::Schema(format!("point needs 3 coordinates, got {}", v.len())));
    }
    let c: Vec<Rational> = v
        .iter()
        .map(|s| parse_rational(s).map_err(|e| GeometryError::Schema(e.to_string())))
        .collect::<Result<_, _>>()?;
    Ok([c[0].clone(), c[1].clone(), c[2].clone()])
}

fn point3_str(p: &Point3) -> Vec<String> {
    p.iter().map(|c| c.to_string()).collect()
}

impl DesignJson {
    pub fn from_design(d: &PentapodDesign) -> Self {
        DesignJson {
            base: d.base.iter().map(point3_str).collect(),
            platform: d.platform.iter().map(point3_str).collect(),
            radii2: d.radii2.iter().map(|r| r.to_string()).collect(),
            sixth: None,
        }
    }

    pub fn from_hexapod(h: &HexapodDesign) -> Self {
        let mut j = Self::from_design(&h.pentapod);
        j.sixth = Some(SixthJson { base: point3_str(&h.m6_base), platform: point3_str(&h.m6_platform) });
        j
    }

    pub fn to_design(&self) -> Result<PentapodDesign, GeometryError> {
        if self.base.len() != 5 || self.platform.len() != 5 || self.radii2.len() != 5 {
            return Err(GeometryError::Schema("base, platform and radii2 need 5 entries each".into()));
        }
        let base: Vec<Point3> = self.base.iter().map(|p| point3_from(p)).collect::<Result<_, _>>()?;
        let platform: Vec<Point3> = self.platform.iter().map(|p| point3_from(p)).collect::<Result<_, _>>()?;
        let radii2: Vec<Rational> = self
            .radii2
            .iter()
            .map(|s| parse_rational(s).map_err(|e| GeometryError::Schema(e.to_string())))
            .collect::<Result<_, _>>()?;
        if radii2.iter().any(|r| r.is_negative()) {
            return Err(GeometryError::Schema("radii2 must be nonnegative".into()));
        }
        Ok(PentapodDesign {
            base: base.try_into().unwrap(),
            platform: platform.try_into().unwrap(),
            radii2: radii2.try_into().unwrap(),
        })
    }

    pub fn sixth_pair(&self) -> Result<Option<(Point3, Point3)>, GeometryError> {
        match &self.sixth {
            None => Ok(None),
            Some(s) => Ok(Some((point3_from(&s.base)?, point3_from(&s.platform)?))),
        }
    }
}

pub fn parse_design_json(text: &str) -> Result<PentapodDesign, GeometryError> {
    let j: DesignJson = serde_json::from_str(text).map_err(|e| GeometryError::Schema(e.to_string()))?;
    j.to_design()
}
