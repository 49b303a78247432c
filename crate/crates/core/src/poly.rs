//! Sparse multivariate polynomials over `Rat` with a per-variable integer grading.
//!
//! A `VarTable` registers the variables once; every `ExactPoly` holds an `Arc`
//! to its table, and mixed-table arithmetic is an error. The formal parameter
//! `b` (the connective-K parameter) is graded in degree -1, Chern-root
//! variables in degree +1. Truncation is always by total *root* degree: the
//! sum of exponents of positively-graded variables. Exponents of `b` are never
//! a truncation key.

use crate::error::{CoreError, Result};
use crate::rat::{binom_gen, Rat};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Registry of variable names and degrees. Immutable once built.
#[derive(Debug, PartialEq, Eq)]
pub struct VarTable {
    names: Vec<String>,
    degrees: Vec<i64>,
    beta: Option<usize>,
}

impl VarTable {
    /// Register variables with explicit degrees. A variable named `b` is
    /// recognized as the degree -1 formal parameter.
    pub fn new(vars: &[(&str, i64)]) -> Arc<Self> {
        let mut names = Vec::new();
        let mut degrees = Vec::new();
        let mut beta = None;
        for (i, (name, deg)) in vars.iter().enumerate() {
            assert!(
                !names.contains(&name.to_string()),
                "duplicate variable `{name}`"
            );
            if *name == "b" {
                assert_eq!(*deg, -1, "`b` must have degree -1");
                beta = Some(i);
            }
            names.push(name.to_string());
            degrees.push(*deg);
        }
        Arc::new(VarTable {
            names,
            degrees,
            beta,
        })
    }

    /// `b` in degree -1 followed by the given roots in degree +1.
    pub fn with_beta(roots: &[&str]) -> Arc<Self> {
        let mut vars: Vec<(&str, i64)> = vec![("b", -1)];
        vars.extend(roots.iter().map(|r| (*r, 1)));
        VarTable::new(&vars)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| CoreError::UnknownVariable(name.to_string()))
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.names[idx]
    }

    pub fn degree(&self, idx: usize) -> i64 {
        self.degrees[idx]
    }

    pub fn beta_index(&self) -> Option<usize> {
        self.beta
    }

    fn same(a: &Arc<VarTable>, b: &Arc<VarTable>) -> bool {
        Arc::ptr_eq(a, b) || a == b
    }
}

type Expt = Vec<u16>;

/// A sparse polynomial: map from dense exponent vectors to nonzero coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactPoly {
    vars: Arc<VarTable>,
    terms: BTreeMap<Expt, Rat>,
}

impl ExactPoly {
    pub fn zero(vars: &Arc<VarTable>) -> Self {
        ExactPoly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &Arc<VarTable>, c: Rat) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; vars.len()], c);
        }
        p
    }

    pub fn one(vars: &Arc<VarTable>) -> Self {
        Self::constant(vars, Rat::one())
    }

    pub fn var(vars: &Arc<VarTable>, name: &str) -> Result<Self> {
        let idx = vars.index_of(name)?;
        Ok(Self::var_idx(vars, idx))
    }

    pub fn var_idx(vars: &Arc<VarTable>, idx: usize) -> Self {
        let mut e = vec![0u16; vars.len()];
        e[idx] = 1;
        let mut p = Self::zero(vars);
        p.terms.insert(e, Rat::one());
        p
    }

    /// The `b` variable of this table.
    pub fn beta(vars: &Arc<VarTable>) -> Result<Self> {
        let idx = vars
            .beta_index()
            .ok_or_else(|| CoreError::UnknownVariable("b".into()))?;
        Ok(Self::var_idx(vars, idx))
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn constant_term(&self) -> Rat {
        self.terms
            .get(&vec![0u16; self.vars.len()])
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Expt, &Rat)> {
        self.terms.iter()
    }

    pub fn coefficients(&self) -> impl Iterator<Item = &Rat> {
        self.terms.values()
    }

    fn check_table(&self, other: &ExactPoly) -> Result<()> {
        if VarTable::same(&self.vars, &other.vars) {
            Ok(())
        } else {
            Err(CoreError::VarTableMismatch)
        }
    }

    fn insert(&mut self, e: Expt, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &ExactPoly) -> Result<ExactPoly> {
        self.check_table(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &ExactPoly) -> Result<ExactPoly> {
        self.check_table(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), -c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> ExactPoly {
        let mut out = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), -c);
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> ExactPoly {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        let mut out = Self::zero(&self.vars);
        for (e, k) in &self.terms {
            out.terms.insert(e.clone(), k * c);
        }
        out
    }

    pub fn mul(&self, other: &ExactPoly) -> Result<ExactPoly> {
        self.check_table(other)?;
        let mut out = Self::zero(&self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Expt = ea.iter().zip(eb.iter()).map(|(a, b)| a + b).collect();
                out.insert(e, ca * cb);
            }
        }
        Ok(out)
    }

    /// Multiply by a single variable power: cheap shift of exponent vectors.
    pub fn mul_var_pow(&self, idx: usize, pow: u16) -> ExactPoly {
        if pow == 0 {
            return self.clone();
        }
        let mut out = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            let mut e = e.clone();
            e[idx] += pow;
            out.terms.insert(e, c.clone());
        }
        out
    }

    pub fn pow(&self, mut n: u32) -> Result<ExactPoly> {
        let mut base = self.clone();
        let mut acc = Self::one(&self.vars);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Total root degree of a monomial: exponents of positively-graded
    /// variables weighted by their degree.
    pub fn root_degree(&self, e: &[u16]) -> i64 {
        e.iter()
            .enumerate()
            .map(|(i, k)| {
                let d = self.vars.degree(i);
                if d > 0 {
                    d * (*k as i64)
                } else {
                    0
                }
            })
            .sum()
    }

    /// Graded degree of a monomial, counting every variable (so `b` counts -1).
    pub fn graded_degree(&self, e: &[u16]) -> i64 {
        e.iter()
            .enumerate()
            .map(|(i, k)| self.vars.degree(i) * (*k as i64))
            .sum()
    }

    /// True when all monomials share one graded degree (the zero polynomial is
    /// homogeneous of any degree).
    pub fn is_homogeneous(&self) -> bool {
        let mut deg = None;
        for e in self.terms.keys() {
            let d = self.graded_degree(e);
            match deg {
                None => deg = Some(d),
                Some(d0) if d0 != d => return false,
                _ => {}
            }
        }
        true
    }

    /// Drop monomials whose total root degree exceeds `max_root_degree`.
    pub fn truncate(&self, max_root_degree: i64) -> ExactPoly {
        let mut out = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            if self.root_degree(e) <= max_root_degree {
                out.terms.insert(e.clone(), c.clone());
            }
        }
        out
    }

    /// Truncated multiplicative inverse of a series with invertible constant
    /// term. Requires every non-constant monomial to have root degree >= 1, so
    /// that the geometric expansion terminates under truncation.
    pub fn series_inverse(&self, max_root_degree: i64) -> Result<ExactPoly> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(CoreError::ZeroConstantTerm);
        }
        let zero_e = vec![0u16; self.vars.len()];
        for e in self.terms.keys() {
            if *e != zero_e && self.root_degree(e) < 1 {
                return Err(CoreError::NonPositiveRootDegree);
            }
        }
        // self = c0 (1 - r)  =>  inverse = (1/c0) sum r^k
        let inv_c0 = c0.recip();
        let mut r = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            if *e != zero_e {
                r.terms.insert(e.clone(), -(&(c * &inv_c0)));
            }
        }
        let mut acc = Self::one(&self.vars);
        let mut pow = Self::one(&self.vars);
        loop {
            pow = pow.mul(&r)?.truncate(max_root_degree);
            if pow.is_zero() {
                break;
            }
            acc = acc.add(&pow)?;
        }
        Ok(acc.scale(&inv_c0).truncate(max_root_degree))
    }

    /// Substitute polynomials for each variable. `images[i]` replaces variable
    /// `i`; all images must share one target table.
    pub fn substitute(&self, images: &[ExactPoly], target: &Arc<VarTable>) -> Result<ExactPoly> {
        assert_eq!(images.len(), self.vars.len());
        let mut out = ExactPoly::zero(target);
        for (e, c) in &self.terms {
            let mut term = ExactPoly::constant(target, c.clone());
            for (i, k) in e.iter().enumerate() {
                if *k > 0 {
                    term = term.mul(&images[i].pow(*k as u32)?)?;
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Exact division: returns `self / f`, or an error when `f` does not
    /// divide `self`. Uses leading-term reduction in the lexicographic order
    /// of the exponent map; exactness guarantees the algorithm never strands
    /// a term.
    pub fn exact_div(&self, f: &ExactPoly) -> Result<ExactPoly> {
        self.check_table(f)?;
        assert!(!f.is_zero(), "division by zero polynomial");
        let (lf_e, lf_c) = f.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())).unwrap();
        let mut rem = self.clone();
        let mut quot = Self::zero(&self.vars);
        while let Some((le, lc)) = rem.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
            let mut qe = vec![0u16; self.vars.len()];
            for i in 0..le.len() {
                if le[i] < lf_e[i] {
                    return Err(CoreError::NonPolynomialSum(format!("{f}")));
                }
                qe[i] = le[i] - lf_e[i];
            }
            let qc = &lc / &lf_c;
            let mut qterm = Self::zero(&self.vars);
            qterm.terms.insert(qe, qc);
            quot = quot.add(&qterm)?;
            rem = rem.sub(&qterm.mul(f)?)?;
        }
        Ok(quot)
    }

    /// Evaluate with `b = 0`: drop all monomials containing `b`.
    pub fn beta_zero(&self) -> ExactPoly {
        let Some(bi) = self.vars.beta_index() else {
            return self.clone();
        };
        let mut out = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            if e[bi] == 0 {
                out.terms.insert(e.clone(), c.clone());
            }
        }
        out
    }

    /// Set one variable to zero.
    pub fn set_var_zero(&self, idx: usize) -> ExactPoly {
        let mut out = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            if e[idx] == 0 {
                out.terms.insert(e.clone(), c.clone());
            }
        }
        out
    }

    /// Leading (lexicographically largest) monomial, for failure witnesses.
    pub fn leading(&self) -> Option<(String, Rat)> {
        self.terms
            .iter()
            .next_back()
            .map(|(e, c)| (self.monomial_string(e), c.clone()))
    }

    pub fn monomial_string(&self, e: &[u16]) -> String {
        let mut parts = Vec::new();
        for (i, k) in e.iter().enumerate() {
            match k {
                0 => {}
                1 => parts.push(self.vars.name(i).to_string()),
                _ => parts.push(format!("{}^{}", self.vars.name(i), k)),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Display for ExactPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let mono = self.monomial_string(e);
            if first {
                first = false;
                if mono == "1" {
                    write!(f, "{c}")?;
                } else if c.is_one() {
                    write!(f, "{mono}")?;
                } else if *c == Rat::from_int(-1) {
                    write!(f, "-{mono}")?;
                } else {
                    write!(f, "{c}*{mono}")?;
                }
            } else {
                let (sign, mag) = if c.is_negative() {
                    ("-", -c)
                } else {
                    ("+", c.clone())
                };
                if mono == "1" {
                    write!(f, " {sign} {mag}")?;
                } else if mag.is_one() {
                    write!(f, " {sign} {mono}")?;
                } else {
                    write!(f, " {sign} {mag}*{mono}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ExactPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `(1 - b t)^n` expanded to the root-degree bound, where `t` is a variable.
pub fn one_minus_beta_var_pow(
    vars: &Arc<VarTable>,
    t_idx: usize,
    n: i64,
    max_root_degree: i64,
) -> Result<ExactPoly> {
    let bi = vars
        .beta_index()
        .ok_or_else(|| CoreError::UnknownVariable("b".into()))?;
    let mut out = ExactPoly::zero(vars);
    let deg_t = vars.degree(t_idx).max(1);
    let kmax = if n >= 0 { n } else { max_root_degree / deg_t };
    for k in 0..=kmax {
        let c = binom_gen(n, k) * Rat::from_int(if k % 2 == 0 { 1 } else { -1 });
        if c.is_zero() {
            continue;
        }
        let mut e = vec![0u16; vars.len()];
        e[bi] = k as u16;
        e[t_idx] = k as u16;
        out.insert(e, c);
    }
    Ok(out.truncate(max_root_degree))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> Arc<VarTable> {
        VarTable::with_beta(&["x", "y"])
    }

    #[test]
    fn product_of_conjugates() {
        let t = table();
        let x = ExactPoly::var(&t, "x").unwrap();
        let y = ExactPoly::var(&t, "y").unwrap();
        let lhs = x.add(&y).unwrap().mul(&x.sub(&y).unwrap()).unwrap();
        let rhs = x.mul(&x).unwrap().sub(&y.mul(&y).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn truncate_by_root_degree() {
        let t = table();
        let x = ExactPoly::var(&t, "x").unwrap();
        let one = ExactPoly::one(&t);
        let p = one.add(&x).unwrap().add(&x.mul(&x).unwrap()).unwrap();
        let q = p.truncate(1);
        assert_eq!(q, one.add(&x).unwrap());
    }

    #[test]
    fn truncate_ignores_beta() {
        let t = table();
        let x = ExactPoly::var(&t, "x").unwrap();
        let b = ExactPoly::beta(&t).unwrap();
        let p = b.mul(&x).unwrap().mul(&x).unwrap(); // b x^2, root degree 2
        assert_eq!(p.truncate(2), p);
        assert!(p.truncate(1).is_zero());
    }

    #[test]
    fn inverse_geometric() {
        let t = table();
        let x = ExactPoly::var(&t, "x").unwrap();
        let one = ExactPoly::one(&t);
        let inv = one.add(&x).unwrap().series_inverse(2).unwrap();
        let expect = one
            .sub(&x)
            .unwrap()
            .add(&x.mul(&x).unwrap())
            .unwrap();
        assert_eq!(inv, expect);
    }

    #[test]
    fn inverse_constant() {
        let t = table();
        let two = ExactPoly::constant(&t, Rat::from_int(2));
        assert_eq!(
            two.series_inverse(5).unwrap(),
            ExactPoly::constant(&t, Rat::new(1, 2))
        );
    }

    #[test]
    fn inverse_one_plus_beta_x() {
        let t = table();
        let x = ExactPoly::var(&t, "x").unwrap();
        let b = ExactPoly::beta(&t).unwrap();
        let one = ExactPoly::one(&t);
        let p = one.add(&b.mul(&x).unwrap()).unwrap();
        let inv = p.series_inverse(3).unwrap();
        // 1 - bx + b^2x^2 - b^3x^3
        let bx = b.mul(&x).unwrap();
        let mut expect = one.clone();
        let mut pow = one.clone();
        for k in 1..=3 {
            pow = pow.mul(&bx).unwrap();
            let sgn = if k % 2 == 0 { 1 } else { -1 };
            expect = expect.add(&pow.scale(&Rat::from_int(sgn))).unwrap();
        }
        assert_eq!(inv, expect);
        // and p * inv == 1 up to root degree 3
        let prod = p.mul(&inv).unwrap().truncate(3);
        assert_eq!(prod, one);
    }

    #[test]
    fn zero_constant_term_rejected() {
        let t = table();
        let x = ExactPoly::var(&t, "x").unwrap();
        assert!(matches!(
            x.series_inverse(2),
            Err(CoreError::ZeroConstantTerm)
        ));
    }

    #[test]
    fn exact_division() {
        let t = table();
        let x = ExactPoly::var(&t, "x").unwrap();
        let y = ExactPoly::var(&t, "y").unwrap();
        let one = ExactPoly::one(&t);
        let f = x.sub(&y).unwrap();
        let p = x.mul(&x).unwrap().sub(&y.mul(&y).unwrap()).unwrap();
        assert_eq!(p.exact_div(&f).unwrap(), x.add(&y).unwrap());
        assert!(one.add(&x).unwrap().exact_div(&f).is_err());
    }

    #[test]
    fn mismatched_tables_rejected() {
        let t1 = table();
        let t2 = VarTable::with_beta(&["z"]);
        let a = ExactPoly::var(&t1, "x").unwrap();
        let b = ExactPoly::var(&t2, "z").unwrap();
        assert!(matches!(a.add(&b), Err(CoreError::VarTableMismatch)));
    }

    #[test]
    fn mul_commutative_associative_small() {
        let t = table();
        let x = ExactPoly::var(&t, "x").unwrap();
        let y = ExactPoly::var(&t, "y").unwrap();
        let b = ExactPoly::beta(&t).unwrap();
        let one = ExactPoly::one(&t);
        let polys = [
            one.add(&x).unwrap(),
            x.add(&y).unwrap().add(&b).unwrap(),
            y.mul(&y).unwrap().sub(&one).unwrap(),
        ];
        for p in &polys {
            for q in &polys {
                assert_eq!(p.mul(q).unwrap(), q.mul(p).unwrap());
                for r in &polys {
                    assert_eq!(
                        p.mul(q).unwrap().mul(r).unwrap(),
                        p.mul(&q.mul(r).unwrap()).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn truncation_ring_morphism() {
        let t = table();
        let x = ExactPoly::var(&t, "x").unwrap();
        let y = ExactPoly::var(&t, "y").unwrap();
        let one = ExactPoly::one(&t);
        let p = one.add(&x).unwrap().add(&y.mul(&y).unwrap()).unwrap();
        let q = one.add(&y).unwrap().add(&x.mul(&x).unwrap()).unwrap();
        let n = 2;
        // truncation idempotent and multiplicative onto the quotient
        assert_eq!(p.truncate(n).truncate(n), p.truncate(n));
        assert_eq!(
            p.mul(&q).unwrap().truncate(n),
            p.truncate(n).mul(&q.truncate(n)).unwrap().truncate(n)
        );
    }
}
