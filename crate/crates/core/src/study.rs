//! Study parameters, sphere conditions and the elimination pipeline over the
//! canonical kappa_2 design.
//!
//! Variables: e0..e3, f0..f3 (Study parameters), A4, B4, A5, B5 (base),
//! mu1, mu2, mu3 (affine part of kappa_2), R1..R5 (squared leg lengths).

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;
use thiserror::Error;

use crate::exactpoly::linalg;
use crate::exactpoly::{
    determinant, gcd_many, resultant, GaussRational, MPoly, PolyError, Rational,
};
use crate::geometry::{AffineMap2, BaseParams, Point3};

pub const E: [&str; 4] = ["e0", "e1", "e2", "e3"];
pub const F: [&str; 4] = ["f0", "f1", "f2", "f3"];
pub const RADII: [&str; 5] = ["R1", "R2", "R3", "R4", "R5"];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StudyError {
    #[error("exceptional pose: N = 0 describes a bond, not a displacement")]
    ExceptionalPose,
    #[error("pose violates the Study condition (S = {0:e})")]
    StudyViolation(f64),
    #[error("combination still depends on f: {0}")]
    NotFFree(String),
    #[error("division failed: {0}")]
    NotDivisible(String),
    #[error("tangency ansatz solvable in branch {branch}: {detail}")]
    AnsatzSolvable { branch: String, detail: String },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Homogeneous Study parameters with real entries.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StudyPose {
    pub e: [f64; 4],
    pub f: [f64; 4],
}

pub type Quat = [f64; 4];

pub fn qmul(a: &Quat, b: &Quat) -> Quat {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

fn qconj(a: &Quat) -> Quat {
    [a[0], -a[1], -a[2], -a[3]]
}

fn pure(p: &[f64; 3]) -> Quat {
    [0.0, p[0], p[1], p[2]]
}

impl StudyPose {
    pub fn new(e: [f64; 4], f: [f64; 4]) -> Self {
        StudyPose { e, f }
    }

    pub fn study(&self) -> f64 {
        (0..4).map(|k| self.e[k] * self.f[k]).sum()
    }

    pub fn norm(&self) -> f64 {
        self.e.iter().map(|x| x * x).sum()
    }

    /// Scales so that N = 1.
    pub fn normalized(&self) -> StudyPose {
        let s = self.norm().sqrt();
        StudyPose { e: self.e.map(|x| x / s), f: self.f.map(|x| x / s) }
    }

    pub fn as_array(&self) -> [f64; 8] {
        let mut out = [0.0; 8];
        out[..4].copy_from_slice(&self.e);
        out[4..].copy_from_slice(&self.f);
        out
    }
}

/// Rotation matrix and translation of a pose.
pub fn displacement(pose: &StudyPose) -> Result<([[f64; 3]; 3], [f64; 3]), StudyError> {
    let n = pose.norm();
    if n <= 1e-300 {
        return Err(StudyError::ExceptionalPose);
    }
    let fnorm: f64 = pose.f.iter().map(|x| x * x).sum::<f64>().sqrt();
    let s = pose.study();
    if s.abs() > 1e-12 * (n + n.sqrt() * fnorm) {
        return Err(StudyError::StudyViolation(s));
    }
    let [e0, e1, e2, e3] = pose.e;
    let r = [
        [e0 * e0 + e1 * e1 - e2 * e2 - e3 * e3, 2.0 * (e1 * e2 - e0 * e3), 2.0 * (e1 * e3 + e0 * e2)],
        [2.0 * (e1 * e2 + e0 * e3), e0 * e0 - e1 * e1 + e2 * e2 - e3 * e3, 2.0 * (e2 * e3 - e0 * e1)],
        [2.0 * (e1 * e3 - e0 * e2), 2.0 * (e2 * e3 + e0 * e1), e0 * e0 - e1 * e1 - e2 * e2 + e3 * e3],
    ]
    .map(|row| row.map(|x| x / n));
    let t = qmul(&pose.f, &qconj(&pose.e));
    Ok((r, [2.0 * t[1] / n, 2.0 * t[2] / n, 2.0 * t[3] / n]))
}

pub fn apply_displacement(rt: &([[f64; 3]; 3], [f64; 3]), p: &[f64; 3]) -> [f64; 3] {
    let (r, t) = rt;
    std::array::from_fn(|i| r[i][0] * p[0] + r[i][1] * p[1] + r[i][2] * p[2] + t[i])
}

/// ‖e m + 2 f - M e‖² - r² N, i.e. N (‖R m + t - M‖² - r²).
pub fn sphere_residual(pose: &StudyPose, base: &[f64; 3], platform: &[f64; 3], r2: f64) -> f64 {
    let a = qmul(&pose.e, &pure(platform));
    let b = qmul(&pure(base), &pose.e);
    let v: Quat = std::array::from_fn(|k| a[k] + 2.0 * pose.f[k] - b[k]);
    v.iter().map(|x| x * x).sum::<f64>() - r2 * pose.norm()
}

// symbolic side

pub type QuatPoly = [MPoly; 4];

pub fn qmul_poly(a: &QuatPoly, b: &QuatPoly) -> QuatPoly {
    let p = |i: usize, j: usize| &a[i] * &b[j];
    [
        &(&(&p(0, 0) - &p(1, 1)) - &p(2, 2)) - &p(3, 3),
        &(&(&p(0, 1) + &p(1, 0)) + &p(2, 3)) - &p(3, 2),
        &(&(&p(0, 2) - &p(1, 3)) + &p(2, 0)) + &p(3, 1),
        &(&(&p(0, 3) + &p(1, 2)) - &p(2, 1)) + &p(3, 0),
    ]
}

pub fn e_quat() -> QuatPoly {
    E.map(MPoly::var)
}

pub fn f_quat() -> QuatPoly {
    F.map(MPoly::var)
}

pub fn study_poly() -> MPoly {
    crate::exactpoly::sum((0..4).map(|k| &MPoly::var(E[k]) * &MPoly::var(F[k])))
}

pub fn norm_poly() -> MPoly {
    crate::exactpoly::sum(E.iter().map(|v| MPoly::var(v).pow(2)))
}

/// Cleared sphere condition ‖e m + 2 f - M e‖² - r2 N for polynomial anchors.
pub fn sphere_condition(base: &[MPoly; 3], platform: &[MPoly; 3], r2: &MPoly) -> MPoly {
    scaled_condition(base, platform, r2, &MPoly::one())
}

/// Condition with anchors already multiplied by `scale`; the translation part is scaled to match.
fn scaled_condition(base: &[MPoly; 3], platform: &[MPoly; 3], r2: &MPoly, scale: &MPoly) -> MPoly {
    let e = e_quat();
    let f = f_quat();
    let pm = [MPoly::zero(), platform[0].clone(), platform[1].clone(), platform[2].clone()];
    let pb = [MPoly::zero(), base[0].clone(), base[1].clone(), base[2].clone()];
    let a = qmul_poly(&e, &pm);
    let b = qmul_poly(&pb, &e);
    let two = &MPoly::int(2) * scale;
    let v: Vec<MPoly> = (0..4).map(|k| &(&a[k] + &(&two * &f[k])) - &b[k]).collect();
    &crate::exactpoly::sum(v.iter().map(|x| x * x)) - &(r2 * &norm_poly())
}

/// One leg with anchors multiplied through by `scale`.
#[derive(Clone, Debug)]
pub struct Leg {
    pub base: [MPoly; 3],
    pub platform: [MPoly; 3],
    pub r2: MPoly,
    pub scale: MPoly,
}

impl Leg {
    /// Cleared condition, equal to scale² times the unscaled one.
    pub fn condition(&self) -> MPoly {
        scaled_condition(&self.base, &self.platform, &(&self.r2 * &self.scale.pow(2)), &self.scale)
    }

    pub fn from_points(base: &Point3, platform: &Point3, r2: &Rational) -> Leg {
        let lift = |p: &Point3| p.clone().map(MPoly::rational);
        Leg { base: lift(base), platform: lift(platform), r2: MPoly::rational(r2.clone()), scale: MPoly::one() }
    }
}

/// Numerator of Q1 - Qi, the f-quadratic parts cancel.
pub fn delta(legs: &[Leg], i: usize) -> MPoly {
    let q1 = legs[0].condition();
    let qi = legs[i - 1].condition();
    let s = legs[i - 1].scale.pow(2);
    &(&q1 * &s) - &qi
}

/// Canonical kappa_2 design whose entries may be symbols or numbers.
#[derive(Clone, Debug)]
pub struct SymbolicDesign {
    pub a4: MPoly,
    pub b4: MPoly,
    pub a5: MPoly,
    pub b5: MPoly,
    pub mu: [MPoly; 3],
    pub radii: [MPoly; 5],
}

impl SymbolicDesign {
    pub fn generic() -> Self {
        SymbolicDesign {
            a4: MPoly::var("A4"),
            b4: MPoly::var("B4"),
            a5: MPoly::var("A5"),
            b5: MPoly::var("B5"),
            mu: ["mu1", "mu2", "mu3"].map(MPoly::var),
            radii: RADII.map(MPoly::var),
        }
    }

    /// Replaces the given groups by numbers, leaving the others symbolic.
    pub fn specialize(&self, base: Option<&BaseParams>, mu: Option<&AffineMap2>, radii: Option<&[Rational; 5]>) -> Self {
        let mut out = self.clone();
        if let Some(p) = base {
            out.a4 = MPoly::rational(p.a4.clone());
            out.b4 = MPoly::rational(p.b4.clone());
            out.a5 = MPoly::rational(p.a5.clone());
            out.b5 = MPoly::rational(p.b5.clone());
        }
        if let Some(m) = mu {
            out.mu = [m.mu1.clone(), m.mu2.clone(), m.mu3.clone()].map(MPoly::rational);
        }
        if let Some(r) = radii {
            out.radii = r.clone().map(MPoly::rational);
        }
        out
    }

    pub fn x(&self) -> MPoly {
        &(&self.b4 * &self.a5) - &(&self.a4 * &self.b5)
    }

    pub fn b(&self) -> MPoly {
        &self.b4 - &self.b5
    }

    pub fn a(&self) -> MPoly {
        &(&self.a5 - &self.a4) + &MPoly::one()
    }

    pub fn u1(&self) -> MPoly {
        let x = self.x();
        &(&self.b() * &x) * &(&x - &self.b())
    }

    pub fn u2(&self) -> MPoly {
        &self.x() + &self.b5
    }

    pub fn u3(&self) -> MPoly {
        &self.x() - &self.b4
    }

    fn apply_mu(&self, x: &MPoly, y: &MPoly) -> [MPoly; 3] {
        [&(&self.mu[0] * x) + &(&self.mu[1] * y), &self.mu[2] * y, MPoly::zero()]
    }

    /// Legs in order 1..5; leg 3 is scaled by B U2 to clear both denominators.
    pub fn legs(&self) -> [Leg; 5] {
        let z = MPoly::zero;
        let o = MPoly::one;
        let base = [
            [z(), z(), z()],
            [o(), z(), z()],
            [&self.x() * &self.u2(), z(), z()],
            [self.a4.clone(), self.b4.clone(), z()],
            [self.a5.clone(), self.b5.clone(), z()],
        ];
        let scale3 = &self.b() * &self.u2();
        let m3 = [
            &(&self.b() * &self.b4) * &(&(&self.a5 * &self.mu[0]) + &(&self.b5 * &self.mu[1])),
            &(&(&self.b() * &self.b4) * &self.b5) * &self.mu[2],
            z(),
        ];
        let platform = [
            self.apply_mu(&self.a4, &self.b4),
            self.apply_mu(&self.a5, &self.b5),
            m3,
            self.apply_mu(&z(), &z()),
            self.apply_mu(&o(), &z()),
        ];
        let scales = [o(), o(), scale3, o(), o()];
        std::array::from_fn(|k| Leg {
            base: base[k].clone(),
            platform: platform[k].clone(),
            r2: self.radii[k].clone(),
            scale: scales[k].clone(),
        })
    }

    /// Weights w2..w5 of the f-free combination of the Δ's.
    pub fn ke_weights(&self) -> [MPoly; 4] {
        let (u1, u2, u3) = (self.u1(), self.u2(), self.u3());
        let u12 = &u1 * &u2;
        [
            &(&(&(&self.b4 * &self.b5) * &self.b()) * &self.x()) * &u2,
            u3,
            &self.b5 * &u12,
            -&(&self.b4 * &u12),
        ]
    }
}

pub fn is_f_free(p: &MPoly) -> bool {
    F.iter().all(|v| !p.has_var(v))
}

/// The f-free quadric obtained from Δ2..Δ5.
pub fn compute_ke(design: &SymbolicDesign) -> Result<MPoly, StudyError> {
    let legs = design.legs();
    let w = design.ke_weights();
    let k = crate::exactpoly::sum((2..=5).map(|i| &w[i - 2] * &delta(&legs, i)));
    if !is_f_free(&k) {
        let leftover = F.iter().filter(|v| k.has_var(v)).cloned().collect::<Vec<_>>().join(",");
        return Err(StudyError::NotFFree(leftover));
    }
    Ok(k)
}

/// Coefficient of e_i e_j (i ≤ j) in a quadric form.
pub fn quad_coeff(q: &MPoly, i: usize, j: usize) -> MPoly {
    let mut key = vec![0u32; 4];
    key[i] += 1;
    key[j] += 1;
    q.coeffs_in(&E).remove(&key).unwrap_or_else(MPoly::zero)
}

/// Coefficient of e0 e3 divided by B4 B5 U1 U2.
pub fn e0e3_ratio(design: &SymbolicDesign, ke: &MPoly) -> Result<MPoly, StudyError> {
    let c = quad_coeff(ke, 0, 3);
    let d = &(&(&design.b4 * &design.b5) * &design.u1()) * &design.u2();
    c.div_exact(&d).ok_or_else(|| StudyError::NotDivisible("e0e3 coefficient by B4 B5 U1 U2".into()))
}

/// The rank-drop quadric T and its four coefficients.
#[derive(Clone, Debug)]
pub struct TForm {
    /// ε01, ε02, ε23, ε13
    pub epsilons: [MPoly; 4],
    pub t: MPoly,
}

pub fn t_form(design: &SymbolicDesign) -> TForm {
    let (a, b) = (design.a(), design.b());
    let [m1, m2, m3] = design.mu.clone();
    let one = MPoly::one();
    let eps01 = &(&m3 * &(&one + &m1)) * &b;
    let eps02 = &(&(&m1 * &a) * &(&m3 + &one)) - &(&m2 * &b);
    let eps23 = &(&m3 * &(&one - &m1)) * &b;
    let eps13 = &(&(&m1 * &a) * &(&m3 - &one)) + &(&m2 * &b);
    let e = E.map(MPoly::var);
    let t = crate::exactpoly::sum([
        &eps01 * &(&e[0] * &e[1]),
        &eps02 * &(&e[0] * &e[2]),
        &eps23 * &(&e[2] * &e[3]),
        &eps13 * &(&e[1] * &e[3]),
    ]);
    TForm { epsilons: [eps01, eps02, eps23, eps13], t }
}

/// Rows S, Δ2..Δ5; columns f0..f3.
pub fn f_coefficient_matrix(design: &SymbolicDesign) -> Vec<Vec<MPoly>> {
    let legs = design.legs();
    let mut rows = vec![study_poly()];
    rows.extend((2..=5).map(|i| delta(&legs, i)));
    rows.iter().map(|r| F.iter().map(|v| r.coeff(&[(v, 1)])).collect()).collect()
}

/// The five maximal minors with the quotients minor / (N T).
#[derive(Clone, Debug)]
pub struct RankDrop {
    pub t: TForm,
    pub minors: Vec<MPoly>,
    pub cofactors: Vec<MPoly>,
}

pub fn rank_drop_t(design: &SymbolicDesign) -> Result<RankDrop, StudyError> {
    let m = f_coefficient_matrix(design);
    let t = t_form(design);
    let nt = &norm_poly() * &t.t;
    let mut minors = Vec::new();
    let mut cofactors = Vec::new();
    for skip in 0..5 {
        let rows: Vec<Vec<MPoly>> = (0..5).filter(|r| *r != skip).map(|r| m[r].clone()).collect();
        let d = determinant(&rows);
        let q = d
            .div_exact(&nt)
            .ok_or_else(|| StudyError::NotDivisible(format!("minor without row {skip} by N T")))?;
        if E.iter().any(|v| q.has_var(v)) {
            return Err(StudyError::NotDivisible(format!("cofactor of minor {skip} depends on e")));
        }
        minors.push(d);
        cofactors.push(q);
    }
    Ok(RankDrop { t, minors, cofactors })
}

/// Exact rank of the f-coefficient matrix at a rational e.
pub fn f_rank_at(matrix: &[Vec<MPoly>], e: &[Rational; 4]) -> usize {
    let asg: Vec<(&str, GaussRational)> = (0..4).map(|k| (E[k], GaussRational::real(e[k].clone()))).collect();
    let num: Vec<Vec<GaussRational>> =
        matrix.iter().map(|row| row.iter().map(|p| p.eval_scalar(&asg)).collect()).collect();
    linalg::rank(&num)
}

/// F1 and F2 as forms in e1, e2.
pub fn f1_f2(design: &SymbolicDesign) -> (MPoly, MPoly) {
    let (a, b) = (design.a(), design.b());
    let [m1, m2, m3] = design.mu.clone();
    let (e1, e2) = (MPoly::var("e1"), MPoly::var("e2"));
    let (c1, c2) = f1_coefficients(&a, &b, &design.mu);
    let f1 = &(&c1 * &(&e2.pow(2) - &e1.pow(2))) + &(&c2 * &(&e1 * &e2));
    let one = MPoly::one();
    let f2 = crate::exactpoly::sum([
        &(&(&one + &m1) * &(&m3 - &one)) * &e1.pow(2),
        &(&(&one + &m3) * &(&m1 - &one)) * &e2.pow(2),
        &(&MPoly::int(-2) * &m2) * &(&e1 * &e2),
    ]);
    (f1, f2)
}

fn f1_coefficients(a: &MPoly, b: &MPoly, mu: &[MPoly; 3]) -> (MPoly, MPoly) {
    let [m1, m2, m3] = mu;
    let c1 = &(&b.pow(2) * m2) - &(&(a * b) * &(m1 + m3));
    let two = MPoly::int(2);
    let c2 = &two * &(&(&(&a.pow(2) * m1) - &(&b.pow(2) * m3)) - &(&(a * b) * m2));
    (c1, c2)
}

/// F2 vanishes identically exactly at mu = (1, 0, 1).
pub fn f2_identically_zero(mu: &AffineMap2) -> bool {
    let d = SymbolicDesign::generic().specialize(None, Some(mu), None);
    f1_f2(&d).1.is_zero()
}

/// Elimination of mu2 from the two coefficients of F1.
#[derive(Clone, Debug, Serialize)]
pub struct F1Report {
    /// Res_mu2 of the two coefficients
    pub resultant: String,
    /// resultant / (B² mu3 (A² + B²)) is this constant
    pub constant: String,
    /// coefficient of e1 e2 after B = 0
    pub at_b_zero: String,
    /// true when only A = B = 0 remains over the reals
    pub forces_a_b_zero: bool,
}

pub fn f1_contradiction() -> Result<F1Report, StudyError> {
    let (a, b) = (MPoly::var("A"), MPoly::var("B"));
    let mu = ["mu1", "mu2", "mu3"].map(MPoly::var);
    let (c1, c2) = f1_coefficients(&a, &b, &mu);
    let r = resultant(&c1, &c2, "mu2")?;
    let core = &(&b.pow(2) * &mu[2]) * &(&a.pow(2) + &b.pow(2));
    let k = r.div_exact(&core).filter(|k| k.is_constant());
    let at_b0 = c2.substitute(&[("B", MPoly::zero())]);
    // A² mu1 with mu1 > 0 vanishes only at A = 0
    let ok = k.is_some() && at_b0.div_exact(&(&a.pow(2) * &mu[0])).is_some_and(|q| q.is_constant());
    Ok(F1Report {
        resultant: r.to_string(),
        constant: k.map(|k| k.to_string()).unwrap_or_default(),
        at_b_zero: at_b0.to_string(),
        forces_a_b_zero: ok,
    })
}

// tangency ansatz W = K + ν N + (Σ νi ei)²

#[derive(Clone, Debug, Serialize)]
pub struct BranchReport {
    pub branch: String,
    /// (unknown, value) pairs fixed along the way, with the coefficient that fixed them
    pub forced: Vec<(String, String, String)>,
    /// first coefficient of W that cannot vanish
    pub contradiction: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnsatzReport {
    pub branches: Vec<BranchReport>,
}

fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer().sqrt(), r.denom().sqrt());
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

fn wname(i: usize, j: usize) -> String {
    let mut ex = [0; 4];
    ex[i] += 1;
    ex[j] += 1;
    format!("W{}{}{}{}", ex[0], ex[1], ex[2], ex[3])
}

/// Unknown values during a branch: Some(value) once fixed.
type Nus = [Option<MPoly>; 5];

fn nu_name(k: usize) -> String {
    if k == 4 {
        "nu".into()
    } else {
        format!("nu{k}")
    }
}

/// W_ij as a polynomial once the needed unknowns are known.
fn w_coeff(k: &[[MPoly; 4]; 4], nus: &Nus, i: usize, j: usize) -> Option<MPoly> {
    let nu_i = nus[i].clone()?;
    let nu_j = nus[j].clone()?;
    if i == j {
        let nu = nus[4].clone()?;
        Some(&(&k[i][i] + &nu) + &nu_i.pow(2))
    } else {
        Some(&k[i][j] + &(&MPoly::int(2) * &(&nu_i * &nu_j)))
    }
}

fn run_branch(k: &[[MPoly; 4]; 4], zero: [usize; 2], free: [usize; 2], name: &str) -> Result<BranchReport, Vec<BranchReport>> {
    let mut forced = Vec::new();
    let mut nus: Nus = Default::default();
    for z in zero {
        nus[z] = Some(MPoly::zero());
        forced.push((nu_name(z), "0".into(), "branch".into()));
    }
    // W_pp = K_pp + nu for the zero partner p of each free index; indices pair as 0-1 and 2-3
    let p0 = free[0] ^ 1;
    nus[4] = Some(-&k[p0][p0]);
    forced.push(("nu".into(), nus[4].clone().unwrap().to_string(), wname(p0, p0)));
    let mut choices: Vec<(usize, Vec<MPoly>)> = Vec::new();
    for f in free {
        let p = f ^ 1;
        let diff = format!("{} - {}", wname(f, f), wname(p, p));
        let sq = &k[p][p] - &k[f][f];
        if sq.is_zero() {
            nus[f] = Some(MPoly::zero());
            forced.push((nu_name(f), "0".into(), diff));
        } else if sq.is_constant() {
            match sq.constant_term().is_real().then(|| rational_sqrt(&sq.constant_term().re)).flatten() {
                Some(r) => choices.push((f, vec![MPoly::rational(r.clone()), MPoly::rational(-r)])),
                None => {
                    return Ok(BranchReport { branch: name.into(), forced, contradiction: format!("{diff} (no rational root)") })
                }
            }
        } else {
            return Ok(BranchReport { branch: name.into(), forced, contradiction: format!("unresolved {}", nu_name(f)) });
        }
    }
    // enumerate sign choices
    let mut assignments: Vec<Nus> = vec![nus.clone()];
    for (f, vals) in &choices {
        assignments = assignments
            .into_iter()
            .flat_map(|a| {
                vals.iter().map(move |v| {
                    let mut b = a.clone();
                    b[*f] = Some(v.clone());
                    b
                })
            })
            .collect();
    }
    let mut first_failure = None;
    for a in &assignments {
        let mut failed = None;
        'outer: for i in 0..4 {
            for j in i..4 {
                let w = w_coeff(k, a, i, j).expect("all unknowns fixed");
                if !w.is_zero() {
                    failed = Some(wname(i, j));
                    break 'outer;
                }
            }
        }
        match failed {
            None => {
                let vals: Vec<String> =
                    (0..5).map(|q| format!("{}={}", nu_name(q), a[q].clone().unwrap())).collect();
                return Err(vec![BranchReport { branch: name.into(), forced, contradiction: vals.join(", ") }]);
            }
            Some(w) => {
                if first_failure.is_none() {
                    first_failure = Some(w);
                }
            }
        }
    }
    Ok(BranchReport { branch: name.into(), forced, contradiction: first_failure.unwrap_or_default() })
}

/// Follows the two branches forced by the vanishing mixed coefficients.
pub fn tangency_ansatz(ke: &MPoly) -> Result<AnsatzReport, StudyError> {
    let k: [[MPoly; 4]; 4] = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let (a, b) = (i.min(j), i.max(j));
            quad_coeff(ke, a, b)
        })
    });
    for (i, j) in [(0, 1), (0, 2), (1, 3), (2, 3)] {
        if !k[i][j].is_zero() {
            return Err(StudyError::NotDivisible(format!(
                "{} does not vanish, the branch split does not apply",
                wname(i, j)
            )));
        }
    }
    let mut branches = Vec::new();
    for (zero, free, name) in [([0, 3], [1, 2], "nu0=nu3=0"), ([1, 2], [0, 3], "nu1=nu2=0")] {
        match run_branch(&k, zero, free, name) {
            Ok(r) => branches.push(r),
            Err(r) => {
                return Err(StudyError::AnsatzSolvable { branch: r[0].branch.clone(), detail: r[0].contradiction.clone() })
            }
        }
    }
    Ok(AnsatzReport { branches })
}

// resultant chain

#[derive(Clone, Debug)]
pub struct ChainResult {
    pub gcd: MPoly,
    pub f1_multiplicity: u32,
    pub f2_multiplicity: u32,
    /// power of ε01 e1 + ε02 e2, the e0-coefficient of T on e3 = 0 (extraneous)
    pub extraneous_multiplicity: u32,
    /// gcd divided by the F1, F2 and extraneous powers
    pub cofactor: MPoly,
}

/// Res_e0 pairwise, then Res_e3 pairwise, then the gcd of the three.
pub fn resultant_chain(ke: &MPoly, t: &MPoly, n: &MPoly) -> Result<MPoly, StudyError> {
    let rk = resultant(t, n, "e0")?;
    let rt = resultant(ke, n, "e0")?;
    let rn = resultant(ke, t, "e0")?;
    let a = resultant(&rk, &rt, "e3")?;
    let b = resultant(&rk, &rn, "e3")?;
    let c = resultant(&rt, &rn, "e3")?;
    Ok(gcd_many([&a, &b, &c]))
}

fn strip_factor(p: &MPoly, f: &MPoly) -> (MPoly, u32) {
    let mut p = p.clone();
    let mut k = 0;
    if f.is_zero() || f.is_constant() || p.is_zero() {
        return (p, 0);
    }
    while let Some(q) = p.div_exact(f) {
        p = q;
        k += 1;
    }
    (p, k)
}

/// Chain for a fully specialised design.
pub fn chain_report(design: &SymbolicDesign) -> Result<ChainResult, StudyError> {
    let ke = compute_ke(design)?;
    let tf = t_form(design);
    let g = resultant_chain(&ke, &tf.t, &norm_poly())?;
    let (f1, f2) = f1_f2(design);
    let lin = &(&tf.epsilons[0] * &MPoly::var("e1")) + &(&tf.epsilons[1] * &MPoly::var("e2"));
    let (g1, m1) = strip_factor(&g, &f1);
    let (g2, m2) = strip_factor(&g1, &f2);
    let (g3, m3) = strip_factor(&g2, &lin);
    Ok(ChainResult { gcd: g, f1_multiplicity: m1, f2_multiplicity: m2, extraneous_multiplicity: m3, cofactor: g3 })
}

// report

#[derive(Clone, Debug, Serialize)]
pub struct KeSummary {
    pub terms: usize,
    pub e0e3_ratio: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TSummary {
    pub epsilons: [String; 4],
    pub t: String,
    pub minors_divisible: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct F1F2Summary {
    pub f1: String,
    pub f2: String,
    pub f2_identically_zero: bool,
    pub f1_identically_zero: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainSummary {
    pub gcd: String,
    pub factors: Vec<String>,
    pub identically_zero: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    #[serde(rename = "Ke")]
    pub ke: KeSummary,
    #[serde(rename = "T")]
    pub t: TSummary,
    #[serde(rename = "F1F2")]
    pub f1f2: F1F2Summary,
    pub ansatz: Result<AnsatzReport, String>,
    pub chain: ChainSummary,
    pub conclusion: String,
}

/// Full pipeline on a numeric base and affine map.
pub fn pipeline(params: &BaseParams, mu: &AffineMap2) -> Result<PipelineReport, StudyError> {
    let d = SymbolicDesign::generic().specialize(Some(params), Some(mu), None);
    let ke_sym = compute_ke(&d)?;
    let ratio = e0e3_ratio(&d, &ke_sym)?;
    let ansatz = tangency_ansatz(&ke_sym).map_err(|e| e.to_string());
    // radii are free in K_e; the remaining steps use a fixed numeric choice
    let radii = [1, 2, 3, 4, 5].map(|k| Rational::from_integer(BigInt::from(k)));
    let dn = d.specialize(None, None, Some(&radii));
    let rd = rank_drop_t(&dn);
    let t = t_form(&d);
    let (f1, f2) = f1_f2(&d);
    let chain = chain_report(&dn)?;
    let mut factors = Vec::new();
    if chain.f1_multiplicity > 0 {
        factors.push(format!("F1^{}", chain.f1_multiplicity));
    }
    if chain.f2_multiplicity > 0 {
        factors.push(format!("F2^{}", chain.f2_multiplicity));
    }
    if chain.extraneous_multiplicity > 0 {
        factors.push(format!("(eps01*e1 + eps02*e2)^{}", chain.extraneous_multiplicity));
    }
    if !chain.cofactor.is_zero() {
        factors.push(chain.cofactor.to_string());
    }
    let conclusion = if f2.is_zero() {
        "F2 vanishes identically: kappa_2 is the identity and the Duporcq self-motion exists"
    } else {
        "no 2-dimensional self-motion"
    };
    Ok(PipelineReport {
        ke: KeSummary { terms: ke_sym.num_terms(), e0e3_ratio: ratio.to_string() },
        t: TSummary {
            epsilons: t.epsilons.clone().map(|e| e.to_string()),
            t: t.t.to_string(),
            minors_divisible: rd.is_ok(),
        },
        f1f2: F1F2Summary {
            f1: f1.to_string(),
            f2: f2.to_string(),
            f2_identically_zero: f2.is_zero(),
            f1_identically_zero: f1.is_zero(),
        },
        ansatz,
        chain: ChainSummary {
            gcd: chain.gcd.to_string(),
            factors,
            identically_zero: chain.gcd.is_zero(),
        },
        conclusion: conclusion.into(),
    })
}
