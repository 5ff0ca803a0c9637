//! Duporcq self-motion: radius conditions, the line-symmetric pose sampler and the
//! checks built on it.

use nalgebra::{DMatrix, Vector4};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::exactpoly::{rat_to_f64, GaussRational, MPoly, Rational};
use crate::geometry::{
    collinear, tv_ratio, AffineMap2, BaseParams, GeometryError, HexapodDesign, PentapodDesign, PlanarPoint,
    Point3,
};
use crate::parallel::{par_map, Execution};
use crate::study::{
    compute_ke, qmul, sphere_residual, StudyError, StudyPose, SymbolicDesign, E, RADII,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SelfMotionError {
    #[error("K_e at e0 = 0 is not divisible by e1^2+e2^2+e3^2")]
    NotDivisible,
    #[error("unrealizable radii: {0}")]
    Unrealizable(String),
    #[error("inconsistent system: residual {residual:e} exceeds {tol:e}")]
    InconsistentSystem { residual: f64, tol: f64 },
    #[error("no real pose for this orientation")]
    NoRealPose,
    #[error("difference vectors have rank {0} > 1")]
    RankTooHigh(usize),
    #[error("construction degenerate: {0}")]
    ConstructionDegenerate(String),
    #[error(transparent)]
    Study(#[from] StudyError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Sampler tolerances.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    /// relative to 1 + max r²
    pub leg: f64,
    pub f0: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { leg: 1e-9, f0: 1e-12 }
    }
}

// radius conditions

/// G with K_e|_{e0=0} = (e1²+e2²+e3²) G, for a design with mu = identity.
pub fn derive_g(design: &SymbolicDesign) -> Result<MPoly, SelfMotionError> {
    let ke = compute_ke(design)?;
    let k0 = ke.substitute(&[("e0", MPoly::zero())]);
    let s = crate::exactpoly::sum(E[1..].iter().map(|v| MPoly::var(v).pow(2)));
    let g = k0.div_exact(&s).ok_or(SelfMotionError::NotDivisible)?;
    if E.iter().any(|v| g.has_var(v)) {
        return Err(SelfMotionError::NotDivisible);
    }
    Ok(g)
}

pub fn g3_analogue(design: &SymbolicDesign) -> MPoly {
    &(&design.b().pow(2) * &design.u2().pow(2)) * &design.u3()
}

/// h1, h2; both vanish exactly when r1² = r4² and r2² = r5².
pub fn h_conditions(design: &SymbolicDesign) -> (MPoly, MPoly) {
    let r = &design.radii;
    let d25 = &r[1] - &r[4];
    let d41 = &r[3] - &r[0];
    let h1 = &(&d25 * &design.a4) + &(&d41 * &(&design.a5 - &MPoly::one()));
    let h2 = &(&d25 * &design.b4) + &(&d41 * &design.b5);
    (h1, h2)
}

/// Squared radii on the self-motion: r4² = r1², r5² = r2² and r3² from G = 0.
pub fn motion_radii(params: &BaseParams, r1: &Rational, r2: &Rational) -> Result<[Rational; 5], SelfMotionError> {
    let d = SymbolicDesign::generic().specialize(Some(params), Some(&AffineMap2::identity()), None);
    let g = derive_g(&d)?;
    let r = |x: &Rational| MPoly::rational(x.clone());
    let g = g.substitute(&[(RADII[0], r(r1)), (RADII[3], r(r1)), (RADII[1], r(r2)), (RADII[4], r(r2))]);
    let g3 = g.coeff(&[(RADII[2], 1)]);
    let g0 = g.coeff(&[(RADII[2], 0)]);
    if !g3.is_constant() || g3.is_zero() || !g0.is_constant() {
        return Err(SelfMotionError::Unrealizable("G is not linear in r3²".into()));
    }
    let r3 = -(g0.constant_term().re / g3.constant_term().re);
    if r3.is_negative() {
        return Err(SelfMotionError::Unrealizable(format!("r3² = {r3} < 0")));
    }
    for (k, x) in [r1, r2].iter().enumerate() {
        if x.is_negative() {
            return Err(SelfMotionError::Unrealizable(format!("r{}² < 0", k + 1)));
        }
    }
    Ok([r1.clone(), r2.clone(), r3, r1.clone(), r2.clone()])
}

/// Refuses radii violating r1² = r4², r2² = r5², or negative squares.
pub fn check_motion_radii(radii: &[Rational; 5]) -> Result<(), SelfMotionError> {
    if radii[0] != radii[3] {
        return Err(SelfMotionError::Unrealizable("r1² ≠ r4²".into()));
    }
    if radii[1] != radii[4] {
        return Err(SelfMotionError::Unrealizable("r2² ≠ r5²".into()));
    }
    if radii.iter().any(|r| r.is_negative()) {
        return Err(SelfMotionError::Unrealizable("negative squared radius".into()));
    }
    Ok(())
}

// numeric legs

/// A leg in floating point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NumLeg {
    pub base: [f64; 3],
    pub platform: [f64; 3],
    pub r2: f64,
}

fn to_f64(p: &Point3) -> [f64; 3] {
    [rat_to_f64(&p[0]), rat_to_f64(&p[1]), rat_to_f64(&p[2])]
}

pub fn numeric_legs(design: &PentapodDesign) -> Vec<NumLeg> {
    (0..5)
        .map(|k| NumLeg { base: to_f64(&design.base[k]), platform: to_f64(&design.platform[k]), r2: rat_to_f64(&design.radii2[k]) })
        .collect()
}

/// Sixth leg whose squared length is read off at the half-turn pose.
pub fn sixth_leg(h: &HexapodDesign) -> NumLeg {
    let base = to_f64(&h.m6_base);
    let platform = to_f64(&h.m6_platform);
    let rt = crate::study::displacement(&StudyPose::new([0.0, 0.0, 0.0, 1.0], [0.0; 4])).unwrap();
    let x = crate::study::apply_displacement(&rt, &platform);
    let r2 = (0..3).map(|k| (x[k] - base[k]).powi(2)).sum();
    NumLeg { base, platform, r2 }
}

fn pure(p: &[f64; 3]) -> [f64; 4] {
    [0.0, p[0], p[1], p[2]]
}

/// e m - M e for a unit e.
fn anchor_quat(e: &[f64; 4], leg: &NumLeg) -> [f64; 4] {
    let a = qmul(e, &pure(&leg.platform));
    let b = qmul(&pure(&leg.base), e);
    std::array::from_fn(|k| a[k] - b[k])
}

/// A pose on the motion with its residuals.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MotionSample {
    pub t1: f64,
    pub t2: f64,
    pub pose: StudyPose,
    pub translation: [f64; 3],
    /// squared leg length minus r², legs 1..5 then the sixth if present
    pub leg_residuals: Vec<f64>,
    pub f0abs: f64,
    /// dimension of the affine solution set of S = Δ2 = Δ4 = 0 in f
    pub fiber_dim: usize,
}

impl MotionSample {
    pub fn max_residual(&self) -> f64 {
        self.leg_residuals.iter().fold(0.0, |m, r| m.max(r.abs()))
    }
}

/// Absolute leg-residual bound: the relative tolerance scaled by 1 + max r².
pub fn leg_tol(legs: &[NumLeg], tol: &Tolerances) -> f64 {
    tol.leg * (1.0 + legs.iter().fold(0.0f64, |m, l| m.max(l.r2)))
}

/// Solves S = Δ2 = .. = Δ5 = 0 with e0 = 0 and intersects the solution set with the first sphere.
/// On a circle the point nearest the origin is taken; on a line, the intersection point with
/// the smaller residual over all legs.
pub fn sample_pose(legs: &[NumLeg], e: [f64; 3], tol: &Tolerances) -> Result<MotionSample, SelfMotionError> {
    let n = (e[0] * e[0] + e[1] * e[1] + e[2] * e[2]).sqrt();
    if n == 0.0 {
        return Err(SelfMotionError::NoRealPose);
    }
    let eq = [0.0, e[0] / n, e[1] / n, e[2] / n];
    let a: Vec<[f64; 4]> = legs.iter().map(|l| anchor_quat(&eq, l)).collect();
    let c: Vec<f64> = legs.iter().zip(&a).map(|(l, ai)| ai.iter().map(|x| x * x).sum::<f64>() - l.r2).collect();
    let mut rows = vec![eq];
    let mut rhs = vec![0.0];
    for i in 1..legs.len().min(5) {
        rows.push(std::array::from_fn(|k| 4.0 * (a[0][k] - a[i][k])));
        rhs.push(c[i] - c[0]);
    }
    let am = DMatrix::from_fn(rows.len(), 4, |r, k| rows[r][k]);
    let b = nalgebra::DVector::from_vec(rhs);
    let svd = am.clone().svd(true, true);
    let (u, vt) = (svd.u.as_ref().expect("u"), svd.v_t.as_ref().expect("v_t"));
    let smax = svd.singular_values.iter().fold(0.0f64, |m, x| m.max(*x));
    let mut fp = Vector4::zeros();
    let mut null: Vec<Vector4<f64>> = Vec::new();
    for k in 0..4 {
        let v: Vector4<f64> = Vector4::from_fn(|i, _| vt[(k, i)]);
        let sv = if k < svd.singular_values.len() { svd.singular_values[k] } else { 0.0 };
        if sv > 1e-9 * smax {
            fp += v * (u.column(k).dot(&b) / sv);
        } else {
            null.push(v);
        }
    }
    let lin_tol = leg_tol(legs, tol);
    let lin_res = (&am * nalgebra::DVector::from_column_slice(fp.as_slice()) - &b).amax();
    if lin_res > lin_tol {
        return Err(SelfMotionError::InconsistentSystem { residual: lin_res, tol: lin_tol });
    }
    // sphere ‖f + a1/2‖² = r1²/4 intersected with fp + span(null)
    let center = Vector4::from_fn(|i, _| -a[0][i] / 2.0);
    let proj = |x: Vector4<f64>| null.iter().fold(Vector4::zeros(), |acc, v| acc + v * v.dot(&x));
    let p = fp + proj(center - fp);
    let rho2 = legs[0].r2 / 4.0 - (center - p).norm_squared();
    if rho2 < -lin_tol {
        return Err(SelfMotionError::NoRealPose);
    }
    let rho = rho2.max(0.0).sqrt();
    // candidates on the sphere: the point nearest the origin, and on a line also the far one
    let q = fp - p;
    let dir = if q.norm() > 1e-14 { q / q.norm() } else { null.first().copied().unwrap_or_else(Vector4::zeros) };
    let mut cands = vec![p + dir * rho];
    if null.len() == 1 && rho > 0.0 {
        cands.push(p - dir * rho);
    }
    let eval = |f: &Vector4<f64>| {
        let pose = StudyPose::new(eq, [f[0], f[1], f[2], f[3]]);
        let res: Vec<f64> = legs.iter().map(|l| sphere_residual(&pose, &l.base, &l.platform, l.r2)).collect();
        let worst = res.iter().fold(0.0f64, |m, r| m.max(r.abs()));
        (pose, res, worst)
    };
    let (pose, residuals, worst) = cands
        .iter()
        .map(eval)
        .min_by(|a, b| a.2.partial_cmp(&b.2).unwrap_or(std::cmp::Ordering::Equal))
        .expect("at least one candidate");
    if worst > lin_tol {
        return Err(SelfMotionError::InconsistentSystem { residual: worst, tol: lin_tol });
    }
    let f = pose.f;
    let t = qmul(&pose.f, &[eq[0], -eq[1], -eq[2], -eq[3]]);
    Ok(MotionSample {
        t1: 0.0,
        t2: 0.0,
        pose,
        translation: [2.0 * t[1], 2.0 * t[2], 2.0 * t[3]],
        leg_residuals: residuals,
        f0abs: f[0].abs(),
        fiber_dim: null.len(),
    })
}

// grid

fn direction(theta: f64, phi: f64) -> [f64; 3] {
    [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
}

/// Largest polar angle (from the half-turn axis) reachable along azimuth phi.
pub fn reachable_theta(legs: &[NumLeg], phi: f64, tol: &Tolerances) -> f64 {
    let ok = |th: f64| sample_pose(&legs[..5], direction(th, phi), tol).is_ok();
    let steps = 64;
    let top = std::f64::consts::FRAC_PI_2;
    let mut lo = 0.0;
    let mut hi = None;
    for k in 1..=steps {
        let th = top * k as f64 / steps as f64;
        if ok(th) {
            lo = th;
        } else {
            hi = Some(th);
            break;
        }
    }
    let Some(mut hi) = hi else { return top };
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653;
const CAP_SCALE: f64 = 0.92;

/// Grid parameters (theta, phi): sample 0 is the half-turn, the rest a Fibonacci spiral
/// inside the reachable cap.
pub fn grid(legs: &[NumLeg], n: usize, tol: &Tolerances, exec: Execution) -> Vec<(f64, f64)> {
    par_map(exec, &(0..n).collect::<Vec<_>>(), |&k| {
        if k == 0 {
            return (0.0, 0.0);
        }
        let phi = (k as f64 * GOLDEN_ANGLE) % std::f64::consts::TAU;
        let s = ((k as f64 - 0.5) / (n as f64 - 1.0).max(1.0)).sqrt();
        (CAP_SCALE * s * reachable_theta(legs, phi, tol), phi)
    })
}

pub fn sample_at(legs: &[NumLeg], theta: f64, phi: f64, tol: &Tolerances) -> Result<MotionSample, SelfMotionError> {
    let mut s = sample_pose(&legs[..5], direction(theta, phi), tol)?;
    s.t1 = theta;
    s.t2 = phi;
    for l in &legs[5..] {
        s.leg_residuals.push(sphere_residual(&s.pose, &l.base, &l.platform, l.r2));
    }
    Ok(s)
}

#[derive(Clone, Debug, Serialize)]
pub struct TangentWitness {
    pub theta: f64,
    pub phi: f64,
    pub rank: usize,
    /// angle between the two finite-difference tangents, radians
    pub angle: f64,
    pub singular_values: [f64; 2],
}

/// Two finite-difference tangents of the pose map at an interior grid point.
pub fn tangent_witness(legs: &[NumLeg], theta: f64, phi: f64, tol: &Tolerances) -> Result<TangentWitness, SelfMotionError> {
    let h = 1e-5;
    let p = sample_at(legs, theta, phi, tol)?.pose.as_array();
    let pa = sample_at(legs, theta + h, phi, tol)?.pose.as_array();
    let pb = sample_at(legs, theta, phi + h, tol)?.pose.as_array();
    let m = DMatrix::from_fn(8, 2, |r, c| if c == 0 { (pa[r] - p[r]) / h } else { (pb[r] - p[r]) / h });
    let sv = m.clone().svd(false, false).singular_values;
    let (s0, s1) = (sv[0].max(sv[1]), sv[0].min(sv[1]));
    let rank = if s1 > 1e-6 * s0 { 2 } else if s0 > 0.0 { 1 } else { 0 };
    let (ta, tb) = (m.column(0), m.column(1));
    let cos = (ta.dot(&tb) / (ta.norm() * tb.norm())).abs().min(1.0);
    Ok(TangentWitness { theta, phi, rank, angle: cos.acos(), singular_values: [s0, s1] })
}

#[derive(Clone, Debug, Serialize)]
pub struct SelfMotionReport {
    pub samples: Vec<MotionSample>,
    pub max_leg_residual: f64,
    pub max_f0: f64,
    pub tangent: Option<TangentWitness>,
    pub failures: Vec<String>,
    /// fiber dimensions seen over the grid, with counts
    pub fiber_dims: Vec<(usize, usize)>,
    pub sixth_r2: Option<f64>,
}

impl SelfMotionReport {
    pub fn ok(&self, tol: &Tolerances, legs: &[NumLeg]) -> bool {
        self.failures.is_empty()
            && self.max_leg_residual <= leg_tol(legs, tol)
            && self.max_f0 <= tol.f0
            && self.tangent.as_ref().is_some_and(|t| t.rank == 2 && t.angle > 1e-3)
    }
}

/// Samples the motion over the grid; failures are collected rather than raised.
pub fn verify_selfmotion(legs: &[NumLeg], n: usize, tol: &Tolerances, exec: Execution) -> SelfMotionReport {
    let n = n.max(1);
    let mut failures = Vec::new();
    if let Err(e) = sample_at(legs, 0.0, 0.0, tol) {
        failures.push(format!("sample 0: {e}"));
        return SelfMotionReport {
            samples: Vec::new(),
            max_leg_residual: f64::NAN,
            max_f0: f64::NAN,
            tangent: None,
            failures,
            fiber_dims: Vec::new(),
            sixth_r2: legs.get(5).map(|l| l.r2),
        };
    }
    let params = grid(legs, n, tol, exec);
    let results = par_map(exec, &params, |&(th, ph)| sample_at(legs, th, ph, tol));
    let mut samples = Vec::new();
    for (k, r) in results.into_iter().enumerate() {
        match r {
            Ok(s) => samples.push(s),
            Err(e) => failures.push(format!("sample {k}: {e}")),
        }
    }
    let max_leg_residual = samples.iter().fold(0.0f64, |m, s| m.max(s.max_residual()));
    let max_f0 = samples.iter().fold(0.0f64, |m, s| m.max(s.f0abs));
    let mut dims = std::collections::BTreeMap::new();
    for s in &samples {
        *dims.entry(s.fiber_dim).or_insert(0) += 1;
    }
    let phi = GOLDEN_ANGLE;
    let th = 0.5 * reachable_theta(legs, phi, tol);
    let tangent = match tangent_witness(legs, th, phi, tol) {
        Ok(t) => Some(t),
        Err(e) => {
            failures.push(format!("tangent witness: {e}"));
            None
        }
    };
    SelfMotionReport {
        samples,
        max_leg_residual,
        max_f0,
        tangent,
        failures,
        fiber_dims: dims.into_iter().collect(),
        sixth_r2: legs.get(5).map(|l| l.r2),
    }
}

/// Trajectory rows: t1,t2,e1,e2,e3,f1,f2,f3,tx,ty,tz,res1..res6.
pub fn trajectory_header() -> Vec<String> {
    let mut h: Vec<String> = ["t1", "t2", "e1", "e2", "e3", "f1", "f2", "f3", "tx", "ty", "tz"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    h.extend((1..=6).map(|k| format!("res{k}")));
    h
}

pub fn trajectory_row(s: &MotionSample) -> Vec<String> {
    let mut row: Vec<String> = [s.t1, s.t2, s.pose.e[1], s.pose.e[2], s.pose.e[3], s.pose.f[1], s.pose.f[2], s.pose.f[3]]
        .iter()
        .chain(s.translation.iter())
        .map(|x| format!("{x:e}"))
        .collect();
    for k in 0..6 {
        row.push(s.leg_residuals.get(k).map(|x| format!("{x:e}")).unwrap_or_default());
    }
    row
}

// translational sub-motion

#[derive(Clone, Debug, Serialize)]
pub struct TranslationalReport {
    /// (Mi - R mi) - (M1 - R m1) at the half-turn, exact
    pub differences: Vec<[String; 3]>,
    pub rank: usize,
    pub direction: [String; 3],
    pub center: [f64; 3],
    pub radius: f64,
    pub max_residual: f64,
    /// max |<t - center, d>| over the sampled translations
    pub max_plane_offset: f64,
}

fn half_turn(p: &Point3) -> Point3 {
    [-p[0].clone(), -p[1].clone(), p[2].clone()]
}

fn sub3(a: &Point3, b: &Point3) -> Point3 {
    std::array::from_fn(|k| &a[k] - &b[k])
}

fn rank_of(vs: &[Point3]) -> usize {
    let rows: Vec<Vec<GaussRational>> =
        vs.iter().map(|v| v.iter().map(|x| GaussRational::real(x.clone())).collect()).collect();
    crate::exactpoly::linalg::rank(&rows)
}

/// The translations at the half-turn orientation keeping all legs: a circle in a plane
/// orthogonal to the common difference direction.
pub fn translational_submotion(design: &PentapodDesign, n: usize, tol: &Tolerances) -> Result<TranslationalReport, SelfMotionError> {
    let v: Vec<Point3> = (0..5).map(|k| sub3(&design.base[k], &half_turn(&design.platform[k]))).collect();
    let d: Vec<Point3> = v.iter().map(|x| sub3(x, &v[0])).collect();
    let rank = rank_of(&d[1..]);
    if rank > 1 {
        return Err(SelfMotionError::RankTooHigh(rank));
    }
    let dir = d[1..]
        .iter()
        .find(|x| x.iter().any(|c| !c.is_zero()))
        .cloned()
        .ok_or_else(|| SelfMotionError::ConstructionDegenerate("all difference vectors vanish".into()))?;
    let df = to_f64(&dir);
    let dn = (df.iter().map(|x| x * x).sum::<f64>()).sqrt();
    let u: [f64; 3] = df.map(|x| x / dn);
    // <w, u> = alpha on every sphere, w = t - v1
    let r1 = rat_to_f64(&design.radii2[0]);
    let mut alpha = None;
    for k in 1..5 {
        let lam = to_f64(&d[k]).iter().zip(&u).map(|(a, b)| a * b).sum::<f64>();
        let rk = rat_to_f64(&design.radii2[k]);
        if lam.abs() < 1e-14 {
            if (rk - r1).abs() > leg_tol(&numeric_legs(design), tol) {
                return Err(SelfMotionError::InconsistentSystem { residual: (rk - r1).abs(), tol: tol.leg });
            }
            continue;
        }
        let a = (lam * lam - rk + r1) / (2.0 * lam);
        match alpha {
            None => alpha = Some(a),
            Some(a0) => {
                if ((a0 - a) as f64).abs() > 1e-9 * (1.0 + a0.abs()) {
                    return Err(SelfMotionError::InconsistentSystem { residual: (a0 - a).abs(), tol: 1e-9 });
                }
            }
        }
    }
    let alpha = alpha.unwrap_or(0.0);
    let rho2 = r1 - alpha * alpha;
    if rho2 < 0.0 {
        return Err(SelfMotionError::NoRealPose);
    }
    let v1 = to_f64(&v[0]);
    let center: [f64; 3] = std::array::from_fn(|k| v1[k] + alpha * u[k]);
    // orthonormal basis of the plane orthogonal to u
    let helper = if u[2].abs() < 0.9 { [0.0, 0.0, 1.0] } else { [1.0, 0.0, 0.0] };
    let cross = |a: [f64; 3], b: [f64; 3]| [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
    let p = cross(u, helper);
    let pn = p.iter().map(|x| x * x).sum::<f64>().sqrt();
    let p = p.map(|x| x / pn);
    let q = cross(u, p);
    let rho = rho2.sqrt();
    let legs = numeric_legs(design);
    let e = [0.0, 0.0, 0.0, 1.0];
    let mut max_res = 0.0f64;
    let mut max_off = 0.0f64;
    for k in 0..n.max(1) {
        let s = std::f64::consts::TAU * k as f64 / n.max(1) as f64;
        let t: [f64; 3] = std::array::from_fn(|i| center[i] + rho * (s.cos() * p[i] + s.sin() * q[i]));
        // f = t e / 2 for unit e
        let f = qmul(&pure(&t), &e).map(|x| x / 2.0);
        let pose = StudyPose::new(e, f);
        for l in &legs {
            max_res = max_res.max(sphere_residual(&pose, &l.base, &l.platform, l.r2).abs());
        }
        let off: f64 = (0..3).map(|i| (t[i] - center[i]) * u[i]).sum();
        max_off = max_off.max(off.abs());
    }
    Ok(TranslationalReport {
        differences: d[1..].iter().map(|x| x.clone().map(|c| c.to_string())).collect(),
        rank,
        direction: dir.map(|c| c.to_string()),
        center,
        radius: rho,
        max_residual: max_res,
        max_plane_offset: max_off,
    })
}

// similarity bond

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimilarityBond {
    pub m3p: PlanarPoint,
    pub m3pp: PlanarPoint,
    pub big_m3p: PlanarPoint,
    pub big_m3pp: PlanarPoint,
    pub g_collinear: bool,
    pub big_g_collinear: bool,
    pub g_direction: PlanarPoint,
    pub big_g_direction: PlanarPoint,
    pub parallel: bool,
}

/// Lines (i, j) among anchors 1, 2, 4, 5 passing through the third anchor.
fn lines_through_third(pts: &[PlanarPoint; 5]) -> Vec<(usize, usize)> {
    let idx = [0, 1, 3, 4];
    let mut out = Vec::new();
    for a in 0..4 {
        for b in a + 1..4 {
            let (i, j) = (idx[a], idx[b]);
            if collinear(&pts[i], &pts[j], &pts[2]) {
                out.push((i, j));
            }
        }
    }
    out
}

/// Points on the two lines of `dst` that copy the affine ratio of the third anchor of `src`.
fn transfer(src: &[PlanarPoint; 5], dst: &[PlanarPoint; 5]) -> Result<[PlanarPoint; 2], SelfMotionError> {
    let lines = lines_through_third(src);
    if lines.len() != 2 {
        return Err(SelfMotionError::ConstructionDegenerate(format!(
            "third anchor lies on {} anchor lines",
            lines.len()
        )));
    }
    let pt = |(i, j): (usize, usize)| -> Result<PlanarPoint, SelfMotionError> {
        let r = tv_ratio(&src[i], &src[j], &src[2])?;
        if dst[i] == dst[j] {
            return Err(SelfMotionError::ConstructionDegenerate("coincident anchors".into()));
        }
        Ok(dst[i].add(&dst[j].sub(&dst[i]).scale(&r)))
    };
    Ok([pt(lines[0])?, pt(lines[1])?])
}

fn primitive_direction(d: &PlanarPoint) -> PlanarPoint {
    // scale so the first nonzero coordinate is 1
    let s = if !d.x.is_zero() { d.x.clone() } else { d.y.clone() };
    if s.is_zero() {
        return d.clone();
    }
    d.scale(&(Rational::from_integer(1.into()) / s))
}

pub fn similarity_bond_direction(design: &PentapodDesign) -> Result<SimilarityBond, SelfMotionError> {
    let base = design.base_planar()?;
    let plat = design.platform_planar()?;
    let [m3p, m3pp] = transfer(&base, &plat)?;
    let [big_m3p, big_m3pp] = transfer(&plat, &base)?;
    let g_collinear = collinear(&plat[2], &m3p, &m3pp);
    let big_g_collinear = collinear(&base[2], &big_m3p, &big_m3pp);
    let g = primitive_direction(&m3pp.sub(&m3p));
    let gg = primitive_direction(&big_m3pp.sub(&big_m3p));
    let parallel = crate::geometry::parallel(&g, &gg);
    Ok(SimilarityBond {
        m3p,
        m3pp,
        big_m3p,
        big_m3pp,
        g_collinear,
        big_g_collinear,
        g_direction: g,
        big_g_direction: gg,
        parallel,
    })
}

// projected bonds

#[derive(Clone, Debug, Serialize)]
pub struct ProjectedBonds {
    /// (e1, e2, e3)(s) on the conic e1²+e2²+e3² = 0, e0 = 0
    pub parametrization: [String; 3],
    pub degree: u32,
    pub witnesses: Vec<[String; 4]>,
    pub witnesses_on_n0: bool,
}

pub fn projected_bonds() -> ProjectedBonds {
    let s = MPoly::var("s");
    let one = MPoly::one();
    let i = MPoly::constant(GaussRational::i());
    let par = [&one - &s.pow(2), &i * &(&one + &s.pow(2)), &MPoly::int(2) * &s];
    let n = crate::exactpoly::sum(par.iter().map(|p| p * p));
    let mut witnesses = Vec::new();
    let mut ok = n.is_zero();
    for k in 0..3 {
        let v: Vec<GaussRational> = par.iter().map(|p| p.eval_scalar(&[("s", GaussRational::from_int(k))])).collect();
        let nn = v.iter().fold(GaussRational::zero(), |acc, x| &acc + &(x * x));
        ok &= nn.is_zero();
        witnesses.push(["0".to_string(), v[0].to_string(), v[1].to_string(), v[2].to_string()]);
    }
    ProjectedBonds {
        degree: par.iter().map(|p| p.total_degree()).max().unwrap_or(0),
        parametrization: par.map(|p| p.to_string()),
        witnesses,
        witnesses_on_n0: ok,
    }
}

// architectural singularity

/// Max over random poses of σ_min / σ_max of the 6x6 Plücker matrix of the legs.
pub fn arch_singularity_check(legs: &[NumLeg], n_poses: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..n_poses {
        let mut e: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let en = e.iter().map(|x| x * x).sum::<f64>().sqrt();
        e.iter_mut().for_each(|x| *x /= en);
        let t: [f64; 3] = std::array::from_fn(|_| rng.random_range(-2.0..2.0));
        let f = qmul(&pure(&t), &e).map(|x| x / 2.0);
        let rt = crate::study::displacement(&StudyPose::new(e, f)).expect("unit e");
        let m = DMatrix::from_fn(legs.len(), 6, |r, c| {
            let l = &legs[r];
            let x = crate::study::apply_displacement(&rt, &l.platform);
            let d = [x[0] - l.base[0], x[1] - l.base[1], x[2] - l.base[2]];
            let b = l.base;
            let mo = [b[1] * d[2] - b[2] * d[1], b[2] * d[0] - b[0] * d[2], b[0] * d[1] - b[1] * d[0]];
            if c < 3 {
                d[c]
            } else {
                mo[c - 3]
            }
        });
        let sv = m.svd(false, false).singular_values;
        let smax = sv.iter().fold(0.0f64, |a, b| a.max(*b));
        let smin = sv.iter().fold(f64::INFINITY, |a, b| a.min(*b));
        worst = worst.max(smin / smax);
    }
    worst
}

/// Numeric legs of a hexapod, the sixth radius read at the half-turn.
pub fn hexapod_legs(h: &HexapodDesign) -> Vec<NumLeg> {
    let mut legs = numeric_legs(&h.pentapod);
    legs.push(sixth_leg(h));
    legs
}

