//! Moebius pictures of planar 5-tuples: Del Pezzo coordinates, the extended
//! map at collinear-triple directions, line membership and profile curves.

use std::collections::BTreeSet;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::exactpoly::{gcd_many, rat, GaussRational, MPoly, Rational};
use crate::geometry::{collinear, Candidate, PlanarPoint};
use crate::parallel::{par_map, Execution};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MoebiusError {
    #[error("all Del Pezzo coordinates vanish (collinear-triple direction)")]
    AllZero,
    #[error("direction is not parallel to a line carrying exactly one collinear triple")]
    NotCollinearDirection,
    #[error("index pair must be distinct and in 1..=5")]
    BadIndex,
}

/// Point of the conic x²+y²+z²=0. For horizontal directions the third
/// component is left implicit: planar tuples never see it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConicDirection {
    pub c: [GaussRational; 2],
    pub c3: Option<GaussRational>,
    /// set for real horizontal projection directions
    pub horizontal: Option<PlanarPoint>,
}

impl ConicDirection {
    /// c(t) = (2t, 1 - t², i(1 + t²))
    pub fn from_t(t: &GaussRational) -> Self {
        let one = GaussRational::one();
        let t2 = t * t;
        ConicDirection {
            c: [t + t, &one - &t2],
            c3: Some(&GaussRational::i() * &(&one + &t2)),
            horizontal: None,
        }
    }

    /// Direction c with (Mi - Mj)·c = 0 exactly when Mi - Mj is parallel to d.
    pub fn horizontal(d: &PlanarPoint) -> Self {
        ConicDirection {
            c: [GaussRational::real(-d.y.clone()), GaussRational::real(d.x.clone())],
            c3: None,
            horizontal: Some(d.clone()),
        }
    }

    pub fn from_components(c: [GaussRational; 3]) -> Self {
        let [a, b, z] = c;
        ConicDirection { c: [a, b], c3: Some(z), horizontal: None }
    }

    /// c·c when all three components are known.
    pub fn self_dot(&self) -> Option<GaussRational> {
        let z = self.c3.as_ref()?;
        Some(&(&(&self.c[0] * &self.c[0]) + &(&self.c[1] * &self.c[1])) + &(z * z))
    }
}

/// Projected value of a planar point: M·c.
pub fn project(p: &PlanarPoint, c: &ConicDirection) -> GaussRational {
    &(&GaussRational::real(p.x.clone()) * &c.c[0]) + &(&GaussRational::real(p.y.clone()) * &c.c[1])
}

/// D_ij = (Mi - Mj)·c with 1-based indices.
pub fn dij(points: &[PlanarPoint; 5], c: &ConicDirection, i: usize, j: usize) -> Result<GaussRational, MoebiusError> {
    if i == j || !(1..=5).contains(&i) || !(1..=5).contains(&j) {
        return Err(MoebiusError::BadIndex);
    }
    Ok(project(&points[i - 1].sub(&points[j - 1]), c))
}

/// The D_ij factors of each φ (1-based pairs).
pub const PHI_FACTORS: [[(usize, usize); 5]; 6] = [
    [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)],
    [(1, 2), (2, 5), (1, 5), (3, 4), (3, 4)],
    [(1, 2), (2, 3), (1, 3), (4, 5), (4, 5)],
    [(2, 3), (3, 4), (2, 4), (1, 5), (1, 5)],
    [(3, 4), (4, 5), (3, 5), (1, 2), (1, 2)],
    [(1, 4), (4, 5), (1, 5), (2, 3), (2, 3)],
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DelPezzoPoint {
    #[serde(serialize_with = "ser_phi")]
    pub phi: [GaussRational; 6],
}

fn ser_phi<S: serde::Serializer>(phi: &[GaussRational; 6], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut q = s.serialize_seq(Some(6))?;
    for p in phi {
        q.serialize_element(&p.to_string())?;
    }
    q.end()
}

impl DelPezzoPoint {
    pub fn is_all_zero(&self) -> bool {
        self.phi.iter().all(|p| p.is_zero())
    }

    /// Projective equality over the complex rationals.
    pub fn proportional(&self, o: &DelPezzoPoint) -> bool {
        if self.is_all_zero() || o.is_all_zero() {
            return false;
        }
        (0..6).all(|k| (k + 1..6).all(|l| &self.phi[k] * &o.phi[l] == &self.phi[l] * &o.phi[k]))
    }

    pub fn zero_pattern(&self) -> [bool; 6] {
        std::array::from_fn(|k| self.phi[k].is_zero())
    }
}

fn phi_from_d(d: impl Fn(usize, usize) -> GaussRational) -> [GaussRational; 6] {
    std::array::from_fn(|k| {
        PHI_FACTORS[k].iter().fold(GaussRational::one(), |acc, &(i, j)| &acc * &d(i, j))
    })
}

/// Del Pezzo coordinates from five affine projected values.
pub fn del_pezzo_from_values(z: &[GaussRational; 5]) -> DelPezzoPoint {
    DelPezzoPoint { phi: phi_from_d(|i, j| &z[i - 1] - &z[j - 1]) }
}

pub fn del_pezzo(points: &[PlanarPoint; 5], c: &ConicDirection) -> Result<DelPezzoPoint, MoebiusError> {
    let z: [GaussRational; 5] = std::array::from_fn(|k| project(&points[k], c));
    let p = del_pezzo_from_values(&z);
    if p.is_all_zero() {
        return Err(MoebiusError::AllZero);
    }
    Ok(p)
}

/// Collinear triples of the tuple (1-based, sorted).
pub fn collinear_triples(points: &[PlanarPoint; 5]) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for a in 0..5 {
        for b in a + 1..5 {
            for c in b + 1..5 {
                if collinear(&points[a], &points[b], &points[c]) {
                    out.push([a + 1, b + 1, c + 1]);
                }
            }
        }
    }
    out
}

/// Extended map at a horizontal direction parallel to exactly one collinear triple.
///
/// Every vanishing D_ij is λ_ij·ℓ(c) for the common linear form ℓ(c) = u·c of the
/// triple's line; the φ with the lowest power of ℓ survive after division.
pub fn extended_del_pezzo(points: &[PlanarPoint; 5], dir: &PlanarPoint) -> Result<DelPezzoPoint, MoebiusError> {
    let triples: Vec<[usize; 3]> = collinear_triples(points)
        .into_iter()
        .filter(|t| points[t[1] - 1].sub(&points[t[0] - 1]).cross(dir).is_zero())
        .collect();
    if triples.len() != 1 {
        return Err(MoebiusError::NotCollinearDirection);
    }
    let t = triples[0];
    let u = points[t[1] - 1].sub(&points[t[0] - 1]);
    let c = ConicDirection::horizontal(dir);
    let in_triple = |i: usize, j: usize| t.contains(&i) && t.contains(&j);
    // λ_ij with Mi - Mj = λ_ij u
    let lambda = |i: usize, j: usize| -> Rational {
        let w = points[i - 1].sub(&points[j - 1]);
        w.dot(&u) / u.norm2()
    };
    let mut powers = [0usize; 6];
    let mut vals: [GaussRational; 6] = std::array::from_fn(|_| GaussRational::one());
    for (k, fac) in PHI_FACTORS.iter().enumerate() {
        for &(i, j) in fac {
            if in_triple(i, j) {
                powers[k] += 1;
                vals[k] = &vals[k] * &GaussRational::real(lambda(i, j));
            } else {
                let d = project(&points[i - 1].sub(&points[j - 1]), &c);
                vals[k] = &vals[k] * &d;
            }
        }
    }
    let min = *powers.iter().min().unwrap();
    let phi: [GaussRational; 6] =
        std::array::from_fn(|k| if powers[k] == min { vals[k].clone() } else { GaussRational::zero() });
    let out = DelPezzoPoint { phi };
    if out.is_all_zero() {
        return Err(MoebiusError::AllZero);
    }
    Ok(out)
}

/// del_pezzo, falling back to the extended map at horizontal collinear-triple directions.
pub fn picture(points: &[PlanarPoint; 5], c: &ConicDirection) -> Result<DelPezzoPoint, MoebiusError> {
    match del_pezzo(points, c) {
        Err(MoebiusError::AllZero) => match &c.horizontal {
            Some(d) => extended_del_pezzo(points, d),
            None => Err(MoebiusError::AllZero),
        },
        r => r,
    }
}

/// All {i,j} whose vanishing pattern matches: every φ containing D_ij is zero, the others not.
pub fn line_membership(p: &DelPezzoPoint) -> BTreeSet<(usize, usize)> {
    let z = p.zero_pattern();
    let mut out = BTreeSet::new();
    for i in 1..=5 {
        for j in i + 1..=5 {
            let ok = (0..6).all(|k| {
                let contains = PHI_FACTORS[k].iter().any(|&(a, b)| (a, b) == (i, j) || (b, a) == (i, j));
                contains == z[k]
            });
            if ok {
                out.insert((i, j));
            }
        }
    }
    out
}

pub fn same_picture(a: &[PlanarPoint; 5], b: &[PlanarPoint; 5], c: &ConicDirection) -> Result<bool, MoebiusError> {
    Ok(picture(a, c)?.proportional(&picture(b, c)?))
}

/// Ordered cross-ratio ((z1-z3)(z2-z4))/((z2-z3)(z1-z4)).
pub fn cross_ratio(z: [&GaussRational; 4]) -> Option<GaussRational> {
    let num = &(z[0] - z[2]) * &(z[1] - z[3]);
    let den = &(z[1] - z[2]) * &(z[0] - z[3]);
    if den.is_zero() {
        return None;
    }
    Some(&num / &den)
}

/// The six coloured directions of a base with the collinearity pattern M1M2M3, M3M4M5:
/// metallic ∥ M1M2, blue ∥ M4M5, green ∥ M2M5, orange ∥ M2M4, yellow ∥ M1M5, pink ∥ M1M4.
pub fn special_directions(base: &[PlanarPoint; 5]) -> Vec<(&'static str, PlanarPoint)> {
    let d = |i: usize, j: usize| base[j - 1].sub(&base[i - 1]);
    vec![
        ("metallic", d(1, 2)),
        ("blue", d(4, 5)),
        ("green", d(2, 5)),
        ("orange", d(2, 4)),
        ("yellow", d(1, 5)),
        ("pink", d(1, 4)),
    ]
}

/// Seeded Gaussian-rational parameters t = (a + b i)/den with b ≠ 0.
pub fn random_t_values(n: usize, seed: u64) -> Vec<GaussRational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let den = rng.random_range(1..=9i64);
            let a = rng.random_range(-20..=20i64);
            let mut b = rng.random_range(-20..=20i64);
            if b == 0 {
                b = 1;
            }
            GaussRational::new(rat(a, den), rat(b, den))
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct CandidateVerdict {
    pub tag: String,
    pub slot: String,
    pub accepted: bool,
    /// first failing check, if any
    pub reason: Option<String>,
}

/// Accepts the candidates whose pictures agree with the base at `n_random` random
/// directions and all six special directions.
pub fn validate_candidates(
    base: &[PlanarPoint; 5],
    candidates: &[Candidate],
    n_random: usize,
    seed: u64,
    exec: Execution,
) -> Vec<CandidateVerdict> {
    let ts = random_t_values(n_random, seed);
    let specials = special_directions(base);
    par_map(exec, candidates, |cand| {
        let verdict = |reason: Option<String>| CandidateVerdict {
            tag: cand.tag.to_string(),
            slot: cand.slot.to_string(),
            accepted: reason.is_none(),
            reason,
        };
        let Some(plat) = &cand.platform else {
            return verdict(Some("construction undefined".into()));
        };
        if !cand.triples_ok {
            return verdict(Some("collinear triples fail".into()));
        }
        if !cand.closure_ok {
            return verdict(Some("closure parallelism fails".into()));
        }
        for (name, d) in &specials {
            let c = ConicDirection::horizontal(d);
            let pb = picture(base, &c);
            let pc = picture(plat, &c);
            match (pb, pc) {
                (Ok(x), Ok(y)) if x.proportional(&y) => {}
                (Ok(x), Ok(y)) => {
                    return verdict(Some(format!(
                        "{name}: base on {:?}, candidate on {:?}",
                        line_membership(&x),
                        line_membership(&y)
                    )))
                }
                _ => return verdict(Some(format!("{name}: picture undefined"))),
            }
        }
        for t in &ts {
            let c = ConicDirection::from_t(t);
            match same_picture(base, plat, &c) {
                Ok(true) => {}
                _ => return verdict(Some(format!("random direction t={t}"))),
            }
        }
        verdict(None)
    })
}

/// Six profile polynomials in t with their common factor removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileCurve {
    pub components: [MPoly; 6],
    pub common_factor: MPoly,
}

pub fn phi_polynomials(points: &[PlanarPoint; 5]) -> [MPoly; 6] {
    let t = MPoly::var("t");
    let two_t = &t * &MPoly::int(2);
    let one_m = &MPoly::one() - &(&t * &t);
    let z: Vec<MPoly> = points
        .iter()
        .map(|p| &(&MPoly::rational(p.x.clone()) * &two_t) + &(&MPoly::rational(p.y.clone()) * &one_m))
        .collect();
    std::array::from_fn(|k| {
        PHI_FACTORS[k].iter().fold(MPoly::one(), |acc, &(i, j)| &acc * &(&z[i - 1] - &z[j - 1]))
    })
}

pub fn profile(points: &[PlanarPoint; 5]) -> ProfileCurve {
    let phis = phi_polynomials(points);
    let g = gcd_many(phis.iter());
    let components = std::array::from_fn(|k| phis[k].div_exact(&g).expect("gcd divides"));
    ProfileCurve { components, common_factor: g }
}

impl ProfileCurve {
    pub fn at(&self, t: &GaussRational) -> DelPezzoPoint {
        DelPezzoPoint { phi: std::array::from_fn(|k| self.components[k].eval_scalar(&[("t", t.clone())])) }
    }

    /// CSV rows: t, φ0..φ5 as complex-rational strings.
    pub fn csv(&self, ts: &[GaussRational]) -> String {
        let mut out = String::from("t,phi0,phi1,phi2,phi3,phi4,phi5\n");
        for t in ts {
            let p = self.at(t);
            let row: Vec<String> = std::iter::once(t.to_string()).chain(p.phi.iter().map(|x| x.to_string())).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// JSON-ready membership of the six special directions.
#[derive(Clone, Debug, Serialize)]
pub struct MembershipEntry {
    pub direction: String,
    pub lines: Vec<String>,
    pub extended: bool,
    pub phi: DelPezzoPoint,
}

pub fn membership_report(points: &[PlanarPoint; 5], dirs: &[(&'static str, PlanarPoint)]) -> Vec<MembershipEntry> {
    dirs.iter()
        .filter_map(|(name, d)| {
            let c = ConicDirection::horizontal(d);
            let (p, extended) = match del_pezzo(points, &c) {
                Ok(p) => (p, false),
                Err(_) => (extended_del_pezzo(points, d).ok()?, true),
            };
            let lines = line_membership(&p).iter().map(|(i, j)| format!("L{i}{j}")).collect();
            Some(MembershipEntry { direction: name.to_string(), lines, extended, phi: p })
        })
        .collect()
}
