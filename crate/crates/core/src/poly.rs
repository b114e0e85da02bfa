//! Sparse multivariate polynomials and linear forms over exact rationals.
//!
//! Variables are z_0, z_1, ... identified by index. Exponent vectors always
//! have the ambient length `nvars`; the residue engine works with at most a
//! handful of variables, so dense exponent vectors are the simplest correct
//! choice.

use std::collections::BTreeMap;

use crate::rat::{self, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Self::zero(nvars);
        if c != rat::zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, rat::one())
    }

    pub fn var(nvars: usize, i: usize, power: u32) -> Self {
        let mut e = vec![0; nvars];
        e[i] = power;
        let mut p = Self::zero(nvars);
        p.terms.insert(e, rat::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Some(c) when the polynomial is the constant c.
    pub fn as_constant(&self) -> Option<Rat> {
        if self.terms.is_empty() {
            return Some(rat::zero());
        }
        if self.terms.len() == 1 {
            let (e, c) = self.terms.iter().next().unwrap();
            if e.iter().all(|&x| x == 0) {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Rat) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c == rat::zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == rat::zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> MPoly {
        if *c == rat::zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        self.mul_trunc_var(other, None)
    }

    /// Product, optionally discarding monomials whose degree in `var` exceeds
    /// `max` (used by the residue expansion, which only needs low orders).
    pub fn mul_trunc_var(&self, other: &MPoly, cap: Option<(usize, u32)>) -> MPoly {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut terms: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                if let Some((v, max)) = cap {
                    if e1[v] + e2[v] > max {
                        continue;
                    }
                }
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let entry = terms.entry(e).or_insert_with(rat::zero);
                *entry += c1 * c2;
            }
        }
        terms.retain(|_, v| *v != rat::zero());
        MPoly {
            nvars: self.nvars,
            terms,
        }
    }

    pub fn mul_var_pow(&self, var: usize, power: u32) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = e.clone();
                    e[var] += power;
                    (e, c.clone())
                })
                .collect(),
        }
    }

    pub fn max_degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    /// Coefficient of var^power as a polynomial with that variable removed
    /// (exponent zeroed, ambient arity kept).
    pub fn coefficient_of(&self, var: usize, power: u32) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] == power {
                let mut e2 = e.clone();
                e2[var] = 0;
                out.add_term(e2, c.clone());
            }
        }
        out
    }

    /// Drops monomials with degree in `var` above `max`.
    pub fn truncate_var(&self, var: usize, max: u32) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[var] <= max)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Substitutes z_var by the degree-1 polynomial of `replacement` (which
    /// must not involve z_var).
    pub fn substitute_linear(&self, var: usize, replacement: &LinForm) -> MPoly {
        debug_assert!(replacement.coeff(var) == rat::zero());
        let rep = replacement.to_mpoly(self.nvars);
        let maxp = self.max_degree_in(var);
        let mut powers: Vec<MPoly> = Vec::with_capacity(maxp as usize + 1);
        powers.push(MPoly::one(self.nvars));
        for _ in 0..maxp {
            powers.push(powers.last().unwrap().mul(&rep));
        }
        let mut out = MPoly::zero(self.nvars);
        for p in 0..=maxp {
            let coeff = self.coefficient_of(var, p);
            if !coeff.is_zero() {
                out = out.add(&coeff.mul(&powers[p as usize]));
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> MPoly {
        let mut out = MPoly::one(self.nvars);
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }
}

/// Linear form sum_i coeffs[i] * z_i (no constant part).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinForm {
    coeffs: Vec<Rat>,
}

impl LinForm {
    pub fn zero(nvars: usize) -> Self {
        LinForm {
            coeffs: vec![rat::zero(); nvars],
        }
    }

    pub fn from_coeffs(coeffs: Vec<Rat>) -> Self {
        LinForm { coeffs }
    }

    pub fn nvars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs[i].clone()
    }

    pub fn set_coeff(&mut self, i: usize, c: Rat) {
        self.coeffs[i] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == rat::zero())
    }

    pub fn involves(&self, var: usize) -> bool {
        self.coeffs[var] != rat::zero()
    }

    /// Some((var, coeff)) when the form is c * z_var.
    pub fn single_var(&self) -> Option<(usize, Rat)> {
        let mut found = None;
        for (i, c) in self.coeffs.iter().enumerate() {
            if *c != rat::zero() {
                if found.is_some() {
                    return None;
                }
                found = Some((i, c.clone()));
            }
        }
        found
    }

    /// The form with the `var` component removed.
    pub fn without_var(&self, var: usize) -> LinForm {
        let mut f = self.clone();
        f.coeffs[var] = rat::zero();
        f
    }

    pub fn scale(&self, c: &Rat) -> LinForm {
        LinForm {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &LinForm) -> LinForm {
        LinForm {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn to_mpoly(&self, nvars: usize) -> MPoly {
        debug_assert_eq!(nvars, self.coeffs.len());
        let mut p = MPoly::zero(nvars);
        for (i, c) in self.coeffs.iter().enumerate() {
            if *c != rat::zero() {
                let mut e = vec![0; nvars];
                e[i] = 1;
                p.add_term(e, c.clone());
            }
        }
        p
    }

    /// Some(c) with other == self * c.
    pub fn proportional_to(&self, other: &LinForm) -> Option<Rat> {
        let pivot = self.coeffs.iter().position(|c| *c != rat::zero())?;
        if other.coeffs[pivot] == rat::zero() {
            return None;
        }
        let c = &other.coeffs[pivot] / &self.coeffs[pivot];
        for i in 0..self.coeffs.len() {
            if &self.coeffs[i] * &c != other.coeffs[i] {
                return None;
            }
        }
        Some(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::int;

    #[test]
    fn poly_basics() {
        let x = MPoly::var(2, 0, 1);
        let y = MPoly::var(2, 1, 1);
        let s = x.add(&y);
        let p = s.mul(&s);
        assert_eq!(p.num_terms(), 3);
        assert_eq!(p.coefficient_of(0, 1).coefficient_of(1, 1).as_constant(), Some(int(2)));
        let diff = p.add(&p.scale(&int(-1)));
        assert!(diff.is_zero());
    }

    #[test]
    fn substitute_linear_square() {
        // (z0 + z1)^2 with z0 -> -z1 gives 0
        let s = MPoly::var(2, 0, 1).add(&MPoly::var(2, 1, 1));
        let p = s.mul(&s);
        let rep = LinForm::from_coeffs(vec![int(0), int(-1)]);
        assert!(p.substitute_linear(0, &rep).is_zero());
    }

    #[test]
    fn proportionality() {
        let a = LinForm::from_coeffs(vec![int(2), int(-1), int(-1)]);
        let b = a.scale(&int(-3));
        assert_eq!(a.proportional_to(&b), Some(int(-3)));
        let c = LinForm::from_coeffs(vec![int(2), int(-1), int(0)]);
        assert_eq!(a.proportional_to(&c), None);
    }
}
