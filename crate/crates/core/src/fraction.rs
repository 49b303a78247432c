//! Rational-function identities by denominator clearing.
//!
//! Denominators are multisets drawn from a registered list of atomic factor
//! polynomials; no cancellation or GCD is ever performed. Sums of fractions
//! are verified (or assembled) by cross-multiplication against the atom list,
//! which keeps every step exact.

use crate::error::{CoreError, Result};
use crate::poly::{ExactPoly, VarTable};
use crate::rat::Rat;
use std::sync::Arc;

/// Registered atomic denominators for one computation.
#[derive(Clone)]
pub struct AtomSet {
    vars: Arc<VarTable>,
    atoms: Vec<ExactPoly>,
    names: Vec<String>,
}

impl AtomSet {
    pub fn new(vars: &Arc<VarTable>) -> Self {
        AtomSet {
            vars: vars.clone(),
            atoms: Vec::new(),
            names: Vec::new(),
        }
    }

    /// Register an atom (idempotent on equal polynomials) and return its id.
    pub fn register(&mut self, atom: ExactPoly) -> usize {
        assert!(!atom.is_zero(), "zero atom");
        if let Some(i) = self.atoms.iter().position(|a| *a == atom) {
            return i;
        }
        self.names.push(format!("{atom}"));
        self.atoms.push(atom);
        self.atoms.len() - 1
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atom(&self, id: usize) -> &ExactPoly {
        &self.atoms[id]
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }
}

/// `num / prod(atoms^mult)`, with the denominator stored as multiplicities
/// into an [`AtomSet`].
#[derive(Clone)]
pub struct FactoredFraction {
    pub num: ExactPoly,
    /// multiplicity of each atom id; length equals the atom set size at use time
    pub den: Vec<u32>,
}

impl FactoredFraction {
    pub fn from_poly(num: ExactPoly) -> Self {
        FactoredFraction {
            num,
            den: Vec::new(),
        }
    }

    pub fn new(num: ExactPoly, den: Vec<u32>) -> Self {
        FactoredFraction { num, den }
    }

    /// Multiply by `atom^mult` in the denominator.
    pub fn push_den(&mut self, atom_id: usize, mult: u32) {
        if self.den.len() <= atom_id {
            self.den.resize(atom_id + 1, 0);
        }
        self.den[atom_id] += mult;
    }

    /// Multiply the numerator by a polynomial.
    pub fn mul_num(&mut self, p: &ExactPoly) -> Result<()> {
        self.num = self.num.mul(p)?;
        Ok(())
    }
}

/// Outcome of a fraction-identity check: equal, or the first differing
/// monomial of the cross-multiplied difference with its coefficient.
#[derive(Debug)]
pub enum FractionCheck {
    Equal,
    Mismatch { monomial: String, coeff: Rat },
}

impl FractionCheck {
    pub fn is_equal(&self) -> bool {
        matches!(self, FractionCheck::Equal)
    }
}

fn pointwise_max(dens: &[&[u32]], len: usize) -> Vec<u32> {
    let mut out = vec![0u32; len];
    for d in dens {
        for (i, m) in d.iter().enumerate() {
            if *m > out[i] {
                out[i] = *m;
            }
        }
    }
    out
}

fn complement_product(atoms: &AtomSet, common: &[u32], den: &[u32]) -> Result<ExactPoly> {
    let mut p = ExactPoly::one(atoms.vars());
    for (id, target) in common.iter().enumerate() {
        let have = den.get(id).copied().unwrap_or(0);
        debug_assert!(have <= *target);
        for _ in have..*target {
            p = p.mul(atoms.atom(id))?;
        }
    }
    Ok(p)
}

/// Verify `sum_i summands[i] == rhs` as an exact identity, by clearing the
/// common denominator. No truncation and no cancellation: the check is a
/// polynomial equality after cross-multiplication.
pub fn fraction_sum_equals(
    atoms: &AtomSet,
    summands: &[FactoredFraction],
    rhs: &FactoredFraction,
) -> Result<FractionCheck> {
    let mut dens: Vec<&[u32]> = summands.iter().map(|s| s.den.as_slice()).collect();
    dens.push(rhs.den.as_slice());
    let common = pointwise_max(&dens, atoms.len());
    let mut lhs = ExactPoly::zero(atoms.vars());
    for s in summands {
        let comp = complement_product(atoms, &common, &s.den)?;
        lhs = lhs.add(&s.num.mul(&comp)?)?;
    }
    let rhs_poly = rhs.num.mul(&complement_product(atoms, &common, &rhs.den)?)?;
    let diff = lhs.sub(&rhs_poly)?;
    match diff.leading() {
        None => Ok(FractionCheck::Equal),
        Some((monomial, coeff)) => Ok(FractionCheck::Mismatch { monomial, coeff }),
    }
}

/// Sum fractions over the common denominator and divide out every atom,
/// asserting the result is a polynomial. This is the assembly step of the
/// localization pushforwards: a non-polynomial sum is a hard error.
pub fn sum_to_polynomial(atoms: &AtomSet, summands: &[FactoredFraction]) -> Result<ExactPoly> {
    let dens: Vec<&[u32]> = summands.iter().map(|s| s.den.as_slice()).collect();
    let common = pointwise_max(&dens, atoms.len());
    let mut num = ExactPoly::zero(atoms.vars());
    for s in summands {
        let comp = complement_product(atoms, &common, &s.den)?;
        num = num.add(&s.num.mul(&comp)?)?;
    }
    for (id, mult) in common.iter().enumerate() {
        for _ in 0..*mult {
            num = num.exact_div(atoms.atom(id)).map_err(|_| {
                CoreError::NonPolynomialSum(format!("{}", atoms.atom(id)))
            })?;
        }
    }
    Ok(num)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_identity() {
        let t = VarTable::with_beta(&["x"]);
        let atoms = AtomSet::new(&t);
        let x = ExactPoly::var(&t, "x").unwrap();
        let lhs = [FactoredFraction::from_poly(x.clone())];
        let rhs = FactoredFraction::from_poly(x);
        assert!(fraction_sum_equals(&atoms, &lhs, &rhs).unwrap().is_equal());
    }

    #[test]
    fn shared_denominator() {
        let t = VarTable::with_beta(&["z"]);
        let mut atoms = AtomSet::new(&t);
        let z = ExactPoly::var(&t, "z").unwrap();
        let b = ExactPoly::beta(&t).unwrap();
        let one = ExactPoly::one(&t);
        let a = atoms.register(one.add(&b.mul(&z).unwrap()).unwrap());
        let mut lhs = FactoredFraction::from_poly(one.clone());
        lhs.push_den(a, 1);
        let mut rhs = FactoredFraction::from_poly(one.clone());
        rhs.push_den(a, 1);
        assert!(fraction_sum_equals(&atoms, &[lhs], &rhs).unwrap().is_equal());
    }

    #[test]
    fn reordering_invariance_and_failure_witness() {
        let t = VarTable::with_beta(&["x", "y"]);
        let mut atoms = AtomSet::new(&t);
        let x = ExactPoly::var(&t, "x").unwrap();
        let y = ExactPoly::var(&t, "y").unwrap();
        let one = ExactPoly::one(&t);
        let ax = atoms.register(one.add(&x).unwrap());
        let ay = atoms.register(one.add(&y).unwrap());
        // 1/(1+x) + 1/(1+y) = (2+x+y)/((1+x)(1+y))
        let mut s1 = FactoredFraction::from_poly(one.clone());
        s1.push_den(ax, 1);
        let mut s2 = FactoredFraction::from_poly(one.clone());
        s2.push_den(ay, 1);
        let mut rhs = FactoredFraction::from_poly(
            ExactPoly::constant(&t, Rat::from_int(2))
                .add(&x)
                .unwrap()
                .add(&y)
                .unwrap(),
        );
        rhs.push_den(ax, 1);
        rhs.push_den(ay, 1);
        assert!(fraction_sum_equals(&atoms, &[s1.clone(), s2.clone()], &rhs)
            .unwrap()
            .is_equal());
        assert!(fraction_sum_equals(&atoms, &[s2.clone(), s1.clone()], &rhs)
            .unwrap()
            .is_equal());
        // and a failing variant reports a witness
        let bad = FactoredFraction::from_poly(one.clone());
        let check = fraction_sum_equals(&atoms, &[s1, s2], &bad).unwrap();
        assert!(!check.is_equal());
    }

    #[test]
    fn polynomial_assembly() {
        let t = VarTable::with_beta(&["x", "y"]);
        let mut atoms = AtomSet::new(&t);
        let x = ExactPoly::var(&t, "x").unwrap();
        let y = ExactPoly::var(&t, "y").unwrap();
        let one = ExactPoly::one(&t);
        let d = atoms.register(x.sub(&y).unwrap());
        // x/(x-y) + (-y)/(x-y) = 1
        let mut s1 = FactoredFraction::from_poly(x.clone());
        s1.push_den(d, 1);
        let mut s2 = FactoredFraction::from_poly(y.neg());
        s2.push_den(d, 1);
        let p = sum_to_polynomial(&atoms, &[s1.clone(), s2]).unwrap();
        assert_eq!(p, one);
        // x/(x-y) alone is not a polynomial
        assert!(sum_to_polynomial(&atoms, &[s1]).is_err());
    }
}
