use super::poly::MPoly;

/// Greatest common divisor, normalized to leading coefficient 1 (0 for gcd(0,0)).
pub fn gcd(p: &MPoly, q: &MPoly) -> MPoly {
    gcd_raw(p, q).monic()
}

pub fn gcd_many<'a>(ps: impl IntoIterator<Item = &'a MPoly>) -> MPoly {
    let mut g = MPoly::zero();
    for p in ps {
        g = gcd_raw(&g, p);
        if g.is_constant() && !g.is_zero() {
            return MPoly::one();
        }
    }
    g.monic()
}

fn main_var(p: &MPoly, q: &MPoly) -> Option<String> {
    // first variable (in sorted order) that occurs in either input
    match (p.vars().first(), q.vars().first()) {
        (Some(a), Some(b)) => Some(if a <= b { a.clone() } else { b.clone() }),
        (Some(a), None) => Some(a.clone()),
        (None, Some(b)) => Some(b.clone()),
        (None, None) => None,
    }
}

fn gcd_raw(p: &MPoly, q: &MPoly) -> MPoly {
    if p.is_zero() {
        return q.clone();
    }
    if q.is_zero() {
        return p.clone();
    }
    if p.is_constant() || q.is_constant() {
        return MPoly::one();
    }
    let x = main_var(p, q).unwrap();
    let (cp, pp) = content_primitive(p, &x);
    let (cq, qq) = content_primitive(q, &x);
    let c = gcd_raw(&cp, &cq);
    let g = if pp.degree_in(&x) == 0 || qq.degree_in(&x) == 0 {
        MPoly::one()
    } else {
        prs_gcd(&pp, &qq, &x)
    };
    &c * &g
}

/// Content with respect to `x` (gcd of the coefficients) and the primitive part.
pub fn content_primitive(p: &MPoly, x: &str) -> (MPoly, MPoly) {
    if p.is_zero() {
        return (MPoly::zero(), MPoly::zero());
    }
    let coeffs = p.to_univariate(x);
    let mut c = MPoly::zero();
    for k in coeffs.iter().rev() {
        if k.is_zero() {
            continue;
        }
        c = gcd_raw(&c, k);
        if c.is_constant() {
            break;
        }
    }
    let c = if c.is_constant() { MPoly::one() } else { c.monic() };
    let pp = p.div_exact(&c).expect("content divides");
    (c, pp)
}

fn lc(coeffs: &[MPoly]) -> &MPoly {
    coeffs.last().unwrap()
}

fn trim(mut v: Vec<MPoly>) -> Vec<MPoly> {
    while v.len() > 1 && v.last().unwrap().is_zero() {
        v.pop();
    }
    v
}

/// Pseudo-remainder of a by b in the univariate representation.
fn prem(a: &[MPoly], b: &[MPoly]) -> Vec<MPoly> {
    let db = b.len() - 1;
    let mut r: Vec<MPoly> = a.to_vec();
    let lb = lc(b).clone();
    let mut steps = (a.len() as i64 - b.len() as i64 + 1).max(0) as u32;
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let dr = r.len() - 1;
        if dr < db {
            break;
        }
        let lr = lc(&r).clone();
        let shift = dr - db;
        let mut next: Vec<MPoly> = r.iter().map(|c| c * &lb).collect();
        for (k, c) in b.iter().enumerate() {
            next[k + shift] = &next[k + shift] - &(c * &lr);
        }
        next.pop();
        r = trim(next);
        steps = steps.saturating_sub(1);
        if r.len() == 1 && r[0].is_zero() {
            break;
        }
    }
    if steps > 0 {
        let f = lb.pow(steps);
        r = r.iter().map(|c| c * &f).collect();
    }
    r
}

fn deg(v: &[MPoly]) -> Option<usize> {
    if v.len() == 1 && v[0].is_zero() {
        None
    } else {
        Some(v.len() - 1)
    }
}

/// Subresultant PRS; inputs primitive in x with positive degree.
fn prs_gcd(p: &MPoly, q: &MPoly, x: &str) -> MPoly {
    let (mut a, mut b) = (p.to_univariate(x), q.to_univariate(x));
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    let mut g = MPoly::one();
    let mut h = MPoly::one();
    loop {
        let d = (a.len() - b.len()) as u32;
        let r = prem(&a, &b);
        match deg(&r) {
            None => break,
            Some(0) => return MPoly::one(),
            Some(_) => {}
        }
        let divisor = &g * &h.pow(d);
        let nb: Vec<MPoly> =
            r.iter().map(|c| c.div_exact(&divisor).expect("subresultant division is exact")).collect();
        a = b;
        b = nb;
        g = lc(&a).clone();
        h = if d == 0 {
            h
        } else {
            let num = g.pow(d);
            let den = h.pow(d - 1);
            num.div_exact(&den).expect("subresultant h update is exact")
        };
    }
    let bp = MPoly::from_univariate(&b, x);
    content_primitive(&bp, x).1
}
