use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::gauss::{GaussRational, Rational};

/// Exponent vector aligned with the owning polynomial's variable list.
pub type Monomial = Vec<u32>;

/// Sparse multivariate polynomial over the Gaussian rationals.
///
/// The variable list is always the sorted set of variables that occur with a
/// nonzero exponent, so two equal polynomials are structurally equal. Terms
/// are kept in lex order over that list; the last map entry is the leading term.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MPoly {
    vars: Arc<Vec<String>>,
    terms: BTreeMap<Monomial, GaussRational>,
}

impl Default for MPoly {
    fn default() -> Self {
        MPoly::zero()
    }
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly { vars: Arc::new(Vec::new()), terms: BTreeMap::new() }
    }

    pub fn constant(c: GaussRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        MPoly { vars: Arc::new(Vec::new()), terms }
    }

    pub fn one() -> Self {
        Self::constant(GaussRational::one())
    }

    pub fn int(n: i64) -> Self {
        Self::constant(GaussRational::from_int(n))
    }

    pub fn rational(r: Rational) -> Self {
        Self::constant(GaussRational::real(r))
    }

    pub fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![1], GaussRational::one());
        MPoly { vars: Arc::new(vec![name.to_string()]), terms }
    }

    /// Builds from (monomial over `vars`, coefficient) pairs; `vars` need not be sorted.
    pub fn from_terms(vars: &[&str], terms: impl IntoIterator<Item = (Monomial, GaussRational)>) -> Self {
        let mut acc = MPoly::zero();
        for (mon, c) in terms {
            let mut t = MPoly::constant(c);
            for (k, e) in mon.iter().enumerate() {
                if *e > 0 {
                    t = &t * &MPoly::var(vars[k]).pow(*e);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn constant_term(&self) -> GaussRational {
        let zero = vec![0; self.vars.len()];
        self.terms.get(&zero).cloned().unwrap_or_else(GaussRational::zero)
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.binary_search_by(|v| v.as_str().cmp(name)).ok()
    }

    pub fn has_var(&self, name: &str) -> bool {
        self.var_index(name).is_some()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().sum()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, name: &str) -> u32 {
        match self.var_index(name) {
            None => 0,
            Some(k) => self.terms.keys().map(|m| m[k]).max().unwrap_or(0),
        }
    }

    /// Total degree restricted to the given variables.
    pub fn degree_in_set(&self, names: &[&str]) -> u32 {
        let idx: Vec<usize> = names.iter().filter_map(|n| self.var_index(n)).collect();
        self.terms.keys().map(|m| idx.iter().map(|&k| m[k]).sum()).max().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<(&Monomial, &GaussRational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> GaussRational {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(GaussRational::zero)
    }

    /// Coefficient of a monomial given as (variable, exponent) pairs; other variables stay symbolic.
    pub fn coeff(&self, mono: &[(&str, u32)]) -> MPoly {
        let mut want: HashMap<usize, u32> = HashMap::new();
        for (n, e) in mono {
            match self.var_index(n) {
                Some(k) => {
                    want.insert(k, *e);
                }
                None => {
                    if *e > 0 {
                        return MPoly::zero();
                    }
                }
            }
        }
        let mut out = BTreeMap::new();
        for (m, c) in &self.terms {
            if want.iter().all(|(k, e)| m[*k] == *e) {
                let mut m2 = m.clone();
                for k in want.keys() {
                    m2[*k] = 0;
                }
                out.insert(m2, c.clone());
            }
        }
        MPoly { vars: self.vars.clone(), terms: out }.trimmed()
    }

    /// Coefficients with respect to the listed variables, keyed by their exponents.
    pub fn coeffs_in(&self, names: &[&str]) -> BTreeMap<Vec<u32>, MPoly> {
        let idx: Vec<Option<usize>> = names.iter().map(|n| self.var_index(n)).collect();
        let mut buckets: BTreeMap<Vec<u32>, BTreeMap<Monomial, GaussRational>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let key: Vec<u32> = idx.iter().map(|k| k.map_or(0, |k| m[k])).collect();
            let mut rest = m.clone();
            for k in idx.iter().flatten() {
                rest[*k] = 0;
            }
            buckets.entry(key).or_default().insert(rest, c.clone());
        }
        buckets
            .into_iter()
            .map(|(k, t)| (k, MPoly { vars: self.vars.clone(), terms: t }.trimmed()))
            .collect()
    }

    /// Univariate view in `name`: entry k is the coefficient of name^k.
    pub fn to_univariate(&self, name: &str) -> Vec<MPoly> {
        let d = self.degree_in(name) as usize;
        let mut out = vec![MPoly::zero(); d + 1];
        for (k, c) in self.coeffs_in(&[name]) {
            out[k[0] as usize] = c;
        }
        out
    }

    pub fn from_univariate(coeffs: &[MPoly], name: &str) -> MPoly {
        let x = MPoly::var(name);
        let mut acc = MPoly::zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * &x) + c;
        }
        acc
    }

    fn trimmed(mut self) -> Self {
        if self.terms.is_empty() {
            return MPoly::zero();
        }
        let n = self.vars.len();
        let used: Vec<bool> = (0..n).map(|k| self.terms.keys().any(|m| m[k] > 0)).collect();
        if used.iter().all(|u| *u) {
            return self;
        }
        let vars: Vec<String> =
            self.vars.iter().zip(&used).filter(|(_, u)| **u).map(|(v, _)| v.clone()).collect();
        let terms = std::mem::take(&mut self.terms)
            .into_iter()
            .map(|(m, c)| (m.into_iter().zip(&used).filter(|(_, u)| **u).map(|(e, _)| e).collect(), c))
            .collect();
        MPoly { vars: Arc::new(vars), terms }
    }

    /// Re-expresses the monomials over a superset variable list.
    fn embed(&self, vars: &Arc<Vec<String>>) -> BTreeMap<Monomial, GaussRational> {
        if Arc::ptr_eq(&self.vars, vars) || *self.vars == **vars {
            return self.terms.clone();
        }
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.binary_search(v).expect("variable missing from union"))
            .collect();
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut m2 = vec![0; vars.len()];
                for (k, e) in m.iter().enumerate() {
                    m2[map[k]] = *e;
                }
                (m2, c.clone())
            })
            .collect()
    }

    fn union_vars(a: &MPoly, b: &MPoly) -> Arc<Vec<String>> {
        if Arc::ptr_eq(&a.vars, &b.vars) || a.vars == b.vars {
            return a.vars.clone();
        }
        if b.vars.is_empty() {
            return a.vars.clone();
        }
        if a.vars.is_empty() {
            return b.vars.clone();
        }
        let set: BTreeSet<&String> = a.vars.iter().chain(b.vars.iter()).collect();
        Arc::new(set.into_iter().cloned().collect())
    }

    fn add_sub(&self, o: &MPoly, neg: bool) -> MPoly {
        let vars = Self::union_vars(self, o);
        let mut terms = self.embed(&vars);
        let other = if Arc::ptr_eq(&vars, &o.vars) { None } else { Some(o.embed(&vars)) };
        let src = other.as_ref().unwrap_or(&o.terms);
        for (m, c) in src {
            match terms.get_mut(m) {
                Some(t) => {
                    if neg {
                        *t -= c;
                    } else {
                        *t += c;
                    }
                    if t.is_zero() {
                        terms.remove(m);
                    }
                }
                None => {
                    terms.insert(m.clone(), if neg { -c } else { c.clone() });
                }
            }
        }
        MPoly { vars, terms }.trimmed()
    }

    fn mul_impl(&self, o: &MPoly) -> MPoly {
        if self.is_zero() || o.is_zero() {
            return MPoly::zero();
        }
        let vars = Self::union_vars(self, o);
        let a = self.embed(&vars);
        let b = o.embed(&vars);
        let mut terms: BTreeMap<Monomial, GaussRational> = BTreeMap::new();
        for (ma, ca) in &a {
            for (mb, cb) in &b {
                let m: Monomial = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                let c = ca * cb;
                match terms.get_mut(&m) {
                    Some(t) => {
                        *t += &c;
                    }
                    None => {
                        terms.insert(m, c);
                    }
                }
            }
        }
        terms.retain(|_, c| !c.is_zero());
        MPoly { vars, terms }.trimmed()
    }

    pub fn scale(&self, c: &GaussRational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut out = MPoly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                out = &out * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        out
    }

    pub fn conj(&self) -> MPoly {
        MPoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), c.conj())).collect() }
    }

    /// Partial evaluation; names absent from the polynomial are ignored.
    pub fn evaluate(&self, assignment: &[(&str, GaussRational)]) -> MPoly {
        let subs: Vec<(&str, MPoly)> =
            assignment.iter().map(|(n, v)| (*n, MPoly::constant(v.clone()))).collect();
        self.substitute(&subs)
    }

    /// Full evaluation to a scalar; panics if a variable is left unassigned.
    pub fn eval_scalar(&self, assignment: &[(&str, GaussRational)]) -> GaussRational {
        let p = self.evaluate(assignment);
        assert!(p.is_constant(), "unassigned variables {:?}", p.vars());
        p.constant_term()
    }

    pub fn eval_f64(&self, assignment: &HashMap<&str, f64>) -> f64 {
        let idx: Vec<f64> = self
            .vars
            .iter()
            .map(|v| *assignment.get(v.as_str()).unwrap_or_else(|| panic!("unassigned {v}")))
            .collect();
        let mut s = 0.0;
        for (m, c) in &self.terms {
            let mut t = super::gauss::rat_to_f64(&c.re);
            for (k, e) in m.iter().enumerate() {
                if *e > 0 {
                    t *= idx[k].powi(*e as i32);
                }
            }
            s += t;
        }
        s
    }

    /// Substitutes polynomials for variables simultaneously.
    pub fn substitute(&self, subs: &[(&str, MPoly)]) -> MPoly {
        let mut targets: Vec<Option<&MPoly>> = vec![None; self.vars.len()];
        let mut any = false;
        for (n, p) in subs {
            if let Some(k) = self.var_index(n) {
                targets[k] = Some(p);
                any = true;
            }
        }
        if !any {
            return self.clone();
        }
        let kept: Vec<usize> = (0..self.vars.len()).filter(|k| targets[*k].is_none()).collect();
        let kept_vars: Arc<Vec<String>> = Arc::new(kept.iter().map(|k| self.vars[*k].clone()).collect());
        // group terms by the exponents of substituted variables
        let mut groups: BTreeMap<Vec<u32>, BTreeMap<Monomial, GaussRational>> = BTreeMap::new();
        let sub_idx: Vec<usize> = (0..self.vars.len()).filter(|k| targets[*k].is_some()).collect();
        for (m, c) in &self.terms {
            let key: Vec<u32> = sub_idx.iter().map(|k| m[*k]).collect();
            let rest: Monomial = kept.iter().map(|k| m[*k]).collect();
            groups.entry(key).or_default().insert(rest, c.clone());
        }
        let mut cache: HashMap<(usize, u32), MPoly> = HashMap::new();
        let mut acc = MPoly::zero();
        for (key, rest) in groups {
            let mut factor = MPoly::one();
            for (j, e) in key.iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                let k = sub_idx[j];
                let pw = cache.entry((k, *e)).or_insert_with(|| targets[k].unwrap().pow(*e)).clone();
                factor = &factor * &pw;
            }
            let restp = MPoly { vars: kept_vars.clone(), terms: rest }.trimmed();
            acc = &acc + &(&factor * &restp);
        }
        acc
    }

    /// Exact quotient if `d` divides `self`, by lex leading-term division.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(MPoly::zero());
        }
        if d.is_constant() {
            let inv = d.constant_term().inv()?;
            return Some(self.scale(&inv));
        }
        let vars = Self::union_vars(self, d);
        let dv = d.embed(&vars);
        let (dm, dc) = dv.iter().next_back().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let dinv = dc.inv().unwrap();
        let mut rem = self.embed(&vars);
        let mut quot: BTreeMap<Monomial, GaussRational> = BTreeMap::new();
        while let Some((rm, rc)) = rem.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            if rm.iter().zip(&dm).any(|(a, b)| a < b) {
                return None;
            }
            let qm: Monomial = rm.iter().zip(&dm).map(|(a, b)| a - b).collect();
            let qc = &rc * &dinv;
            for (m, c) in &dv {
                let mm: Monomial = m.iter().zip(&qm).map(|(a, b)| a + b).collect();
                let prod = c * &qc;
                match rem.get_mut(&mm) {
                    Some(t) => {
                        *t -= &prod;
                        if t.is_zero() {
                            rem.remove(&mm);
                        }
                    }
                    None => {
                        rem.insert(mm, -prod);
                    }
                }
            }
            quot.insert(qm, qc);
        }
        Some(MPoly { vars, terms: quot }.trimmed())
    }

    /// Scales so the leading coefficient is 1 (zero stays zero).
    pub fn monic(&self) -> MPoly {
        match self.leading() {
            None => MPoly::zero(),
            Some((_, c)) => self.scale(&c.inv().unwrap()),
        }
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.is_real())
    }

    /// Partial derivative.
    pub fn diff(&self, name: &str) -> MPoly {
        let Some(k) = self.var_index(name) else { return MPoly::zero() };
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if m[k] > 0 {
                let mut m2 = m.clone();
                m2[k] -= 1;
                terms.insert(m2, c * &GaussRational::from_int(m[k] as i64));
            }
        }
        MPoly { vars: self.vars.clone(), terms }.trimmed()
    }
}

impl<'a> Add<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn add(self, o: &MPoly) -> MPoly {
        self.add_sub(o, false)
    }
}

impl<'a> Sub<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn sub(self, o: &MPoly) -> MPoly {
        self.add_sub(o, true)
    }
}

impl<'a> Mul<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn mul(self, o: &MPoly) -> MPoly {
        self.mul_impl(o)
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

macro_rules! owned_poly_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $m(self, o: MPoly) -> MPoly {
                (&self).$m(&o)
            }
        }
    };
}
owned_poly_binop!(Add, add);
owned_poly_binop!(Sub, sub);
owned_poly_binop!(Mul, mul);

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::text::format_poly(self))
    }
}

pub fn sum(items: impl IntoIterator<Item = MPoly>) -> MPoly {
    items.into_iter().fold(MPoly::zero(), |a, b| &a + &b)
}
