use std::path::{Path, PathBuf};

use pentapod_core::exactpoly::{parse_rational, Rational};
use pentapod_core::geometry::*;
use pentapod_core::moebius::*;
use pentapod_core::parallel::Execution;
use pentapod_core::selfmotion::*;
use pentapod_core::study::pipeline;
use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;
use crate::svg;

pub struct RunConfig {
    pub seed: u64,
    pub samples: Option<usize>,
    pub tol: Tolerances,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    fn samples_or(&self, n: usize) -> usize {
        self.samples.unwrap_or(n)
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn load_design(path: &Path) -> Result<(PentapodDesign, DesignJson), CliError> {
    let j: DesignJson = serde_json::from_str(&read(path)?)?;
    let d = j.to_design()?;
    Ok((d, j))
}

fn emit_json<T: Serialize>(cfg: &RunConfig, v: &T) -> Result<(), CliError> {
    let s = serde_json::to_string_pretty(v).expect("serializable report");
    match &cfg.out {
        Some(p) => std::fs::write(p, s + "\n")?,
        None => println!("{s}"),
    }
    Ok(())
}

#[derive(Serialize)]
pub struct Classification {
    pub verdict: String,
    pub matched: Option<String>,
    #[serde(skip)]
    pub kappa: Option<Kappa>,
    pub candidates: Vec<CandidateVerdict>,
}

fn verdict_for(tag: &str, accepted: bool) -> (String, Option<Kappa>) {
    match (tag, accepted) {
        ("1a", true) => ("planar-affine".into(), None),
        ("2bi", true) => ("duporcq-rec2".into(), Some(Kappa::K2)),
        ("3bi", true) => ("duporcq-rec3".into(), Some(Kappa::K3)),
        (t, _) => (format!("invalid-case-{t}"), None),
    }
}

pub fn classify_design(d: &PentapodDesign, n_random: usize, seed: u64) -> Result<Classification, CliError> {
    let base = d.base_planar()?;
    let plat = d.platform_planar()?;
    check_base_pattern(&base)?;
    let cands = reconstruct_candidates(&base);
    let verdicts = validate_candidates(&base, &cands, n_random, seed, Execution::Parallel);
    let matches = |c: &Candidate| c.platform.as_ref().is_some_and(|p| affine_match(p, &plat));
    // accepted candidates win over rejected ones that happen to match too
    let hit = cands
        .iter()
        .zip(&verdicts)
        .filter(|(c, v)| v.accepted && matches(c))
        .chain(cands.iter().zip(&verdicts).filter(|(c, v)| !v.accepted && matches(c)))
        .next();
    let (verdict, kappa, matched) = match hit {
        Some((c, v)) => {
            let (verdict, kappa) = verdict_for(c.tag, v.accepted);
            (verdict, kappa, Some(c.tag.to_string()))
        }
        None => ("invalid-case-none".into(), None, None),
    };
    Ok(Classification { verdict, matched, kappa, candidates: verdicts })
}

pub fn classify(cfg: &RunConfig, design: &Path) -> Result<(), CliError> {
    let (d, _) = load_design(design)?;
    let c = classify_design(&d, cfg.samples_or(20), cfg.seed)?;
    emit_json(cfg, &c)
}

fn require_duporcq(d: &PentapodDesign, cfg: &RunConfig) -> Result<(Classification, Kappa), CliError> {
    let c = classify_design(d, 20, cfg.seed)?;
    match c.kappa {
        Some(k) => Ok((c, k)),
        None => Err(CliError::Degenerate(format!("not a Duporcq design (verdict {})", c.verdict))),
    }
}

/// Five legs, plus the completing sixth leg whenever the quadrilaterals close.
fn motion_legs(d: &PentapodDesign, j: &DesignJson, kappa: Kappa) -> Result<Vec<NumLeg>, CliError> {
    if let Some((m6, mm6)) = j.sixth_pair()? {
        return Ok(hexapod_legs(&HexapodDesign { pentapod: d.clone(), m6_base: m6, m6_platform: mm6 }));
    }
    Ok(match duporcq_hexapod(d, kappa) {
        Ok(h) => hexapod_legs(&h),
        Err(_) => numeric_legs(d),
    })
}

fn parse_rat(s: &str, what: &str) -> Result<Rational, CliError> {
    parse_rational(s).map_err(|e| CliError::Schema(format!("{what}: {e}")))
}

#[derive(Serialize)]
struct MotionSummary {
    verdict: String,
    radii2: Vec<String>,
    samples: usize,
    max_leg_residual: f64,
    max_f0: f64,
    tangent_rank: Option<usize>,
    fiber_dims: Vec<(usize, usize)>,
    sixth_r2: Option<f64>,
    failures: Vec<String>,
}

pub fn motion(cfg: &RunConfig, design: &Path, r1: Option<&str>, r2: Option<&str>) -> Result<(), CliError> {
    let (mut d, j) = load_design(design)?;
    let (c, kappa) = require_duporcq(&d, cfg)?;
    match (r1, r2) {
        (Some(a), Some(b)) => {
            let params = canonical_params(&d.base_planar()?)?;
            d.radii2 = motion_radii(&params, &parse_rat(a, "r1")?, &parse_rat(b, "r2")?)?;
        }
        (None, None) => check_motion_radii(&d.radii2)?,
        _ => return Err(CliError::Schema("give both --r1 and --r2 or neither".into())),
    }
    let legs = motion_legs(&d, &j, kappa)?;
    let rep = verify_selfmotion(&legs, cfg.samples_or(100), &cfg.tol, Execution::Parallel);
    if let Some(p) = &cfg.out {
        let mut w = csv::Writer::from_path(p)?;
        w.write_record(trajectory_header())?;
        for s in &rep.samples {
            w.write_record(trajectory_row(s))?;
        }
        w.flush()?;
    }
    let ok = rep.ok(&cfg.tol, &legs);
    let summary = MotionSummary {
        verdict: c.verdict,
        radii2: d.radii2.iter().map(|r| r.to_string()).collect(),
        samples: rep.samples.len(),
        max_leg_residual: rep.max_leg_residual,
        max_f0: rep.max_f0,
        tangent_rank: rep.tangent.as_ref().map(|t| t.rank),
        fiber_dims: rep.fiber_dims.clone(),
        sixth_r2: rep.sixth_r2,
        failures: rep.failures.clone(),
    };
    println!("{}", serde_json::to_string_pretty(&summary).expect("serializable report"));
    if ok {
        Ok(())
    } else {
        let first = rep.failures.first().cloned().unwrap_or_else(|| "residual or tangent check failed".into());
        Err(CliError::Inconsistent(first))
    }
}

fn json_rat(v: &Value, what: &str) -> Result<Rational, CliError> {
    match v {
        Value::String(s) => parse_rat(s, what),
        Value::Number(n) => parse_rat(&n.to_string(), what),
        _ => Err(CliError::Schema(format!("{what}: expected a rational"))),
    }
}

fn pipeline_input(v: &Value) -> Result<(BaseParams, AffineMap2), CliError> {
    if v.get("base").is_some() {
        let j: DesignJson = serde_json::from_value(v.clone())?;
        let d = j.to_design()?;
        let base = d.base_planar()?;
        let params = canonical_params(&base)?;
        let mu = kappa2_map(&base, &d.platform_planar()?)?;
        return Ok((params, mu));
    }
    let field = |k: &str| v.get(k).ok_or_else(|| CliError::Schema(format!("missing {k}"))).and_then(|x| json_rat(x, k));
    let params = BaseParams::new(field("A4")?, field("B4")?, field("A5")?, field("B5")?)?;
    let mu = match v.get("mu") {
        None => AffineMap2::identity(),
        Some(Value::Array(a)) if a.len() == 3 => {
            AffineMap2::new(json_rat(&a[0], "mu1")?, json_rat(&a[1], "mu2")?, json_rat(&a[2], "mu3")?)?
        }
        Some(_) => return Err(CliError::Schema("mu must be [mu1, mu2, mu3]".into())),
    };
    Ok((params, mu))
}

pub fn pipeline_cmd(cfg: &RunConfig, input: &Path) -> Result<(), CliError> {
    let v: Value = serde_json::from_str(&read(input)?)?;
    let (params, mu) = pipeline_input(&v)?;
    let rep = pipeline(&params, &mu)?;
    emit_json(cfg, &rep)
}

#[derive(Serialize)]
struct HexapodSummary {
    verdict: String,
    m6_base: Vec<String>,
    m6_platform: Vec<String>,
    r6_squared: f64,
    samples: usize,
    max_sixth_residual: f64,
    max_leg_residual: f64,
    plucker_rel_sigma_min: f64,
    failures: Vec<String>,
}

pub fn hexapod_check(cfg: &RunConfig, design: &Path) -> Result<(), CliError> {
    let (d, j) = load_design(design)?;
    let (c, kappa) = require_duporcq(&d, cfg)?;
    check_motion_radii(&d.radii2)?;
    let h = match j.sixth_pair()? {
        Some((m6, mm6)) => HexapodDesign { pentapod: d.clone(), m6_base: m6, m6_platform: mm6 },
        None => duporcq_hexapod(&d, kappa)?,
    };
    let legs = hexapod_legs(&h);
    let n = cfg.samples_or(100);
    let rep = verify_selfmotion(&legs, n, &cfg.tol, Execution::Parallel);
    let sixth = rep.samples.iter().fold(0.0f64, |m, s| m.max(s.leg_residuals[5].abs()));
    let sigma = arch_singularity_check(&legs, n, cfg.seed);
    let summary = HexapodSummary {
        verdict: c.verdict,
        m6_base: h.m6_base.iter().map(|x| x.to_string()).collect(),
        m6_platform: h.m6_platform.iter().map(|x| x.to_string()).collect(),
        r6_squared: legs[5].r2,
        samples: rep.samples.len(),
        max_sixth_residual: sixth,
        max_leg_residual: rep.max_leg_residual,
        plucker_rel_sigma_min: sigma,
        failures: rep.failures.clone(),
    };
    emit_json(cfg, &summary)?;
    let bound = leg_tol(&legs, &cfg.tol);
    if !rep.failures.is_empty() || rep.max_leg_residual > bound {
        return Err(CliError::Inconsistent("sixth leg does not follow the self-motion".into()));
    }
    if sigma > 1e-9 {
        return Err(CliError::Inconsistent(format!("leg lines independent: relative sigma_min {sigma:e}")));
    }
    Ok(())
}

#[derive(Serialize)]
struct ProfileSummary {
    points: String,
    common_factor: String,
    common_factor_degree: u32,
    component_degrees: Vec<u32>,
    membership: Vec<MembershipEntry>,
}

pub fn profile_cmd(cfg: &RunConfig, design: &Path, platform: bool) -> Result<(), CliError> {
    let (d, _) = load_design(design)?;
    let base = d.base_planar()?;
    let pts = if platform { d.platform_planar()? } else { base.clone() };
    let prof = profile(&pts);
    if let Some(p) = &cfg.out {
        std::fs::write(p, prof.csv(&random_t_values(cfg.samples_or(11), cfg.seed)))?;
    }
    let summary = ProfileSummary {
        points: if platform { "platform" } else { "base" }.into(),
        common_factor: prof.common_factor.to_string(),
        common_factor_degree: prof.common_factor.degree_in("t"),
        component_degrees: prof.components.iter().map(|c| c.degree_in("t")).collect(),
        membership: membership_report(&pts, &special_directions(&base)),
    };
    println!("{}", serde_json::to_string_pretty(&summary).expect("serializable report"));
    Ok(())
}

pub fn svg_cmd(cfg: &RunConfig, design: &Path) -> Result<(), CliError> {
    let (d, _) = load_design(design)?;
    let base = d.base_planar()?;
    let plat = d.platform_planar()?;
    let doc = svg::render(&base, &plat);
    match &cfg.out {
        Some(p) => std::fs::write(p, doc)?,
        None => print!("{doc}"),
    }
    Ok(())
}
