//! Factored rational functions and the iterated residue operator.
//!
//! A `RatFun` keeps its denominator factored as a monomial part plus a list of
//! linear forms with multiplicities. Every pole appearing in the localization
//! integrands is of that shape, so pole bookkeeping stays exact and cheap; the
//! numerator is the only thing ever expanded.
//!
//! `iterated_contour` consumes a `ContourSpec` naming, per variable, which
//! poles the contour encircles: always z = 0, and optionally the pole of one
//! designated linear factor (the "midpoint" factors of the chain integrands).
//! Designated poles are data, matched against denominator factors up front —
//! they are never inferred from the integrand.
//!
//! Evaluation enumerates the 2^f branches (each designated pole taken or not).
//! Within a branch the designated residues are simple poles and are resolved
//! first, in ascending variable order, by substitution; the remaining
//! variables are then integrated by extracting residues at zero, again in
//! ascending order. Collapsing the designated poles first is exactly the
//! manipulation that turns the chain representation into its ordered-partition
//! form, so both representations evaluate identically.

use crate::error::{Error, Result};
use crate::poly::{LinForm, MPoly};
use crate::rat::{self, Rat};

#[derive(Debug, Clone, PartialEq)]
pub struct DenFactor {
    pub form: LinForm,
    pub mult: u32,
    /// Variable whose contour encircles this factor's pole, if any.
    pub designated: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatFun {
    nvars: usize,
    num: MPoly,
    /// Denominator monomial part: den_pows[i] is the power of z_i.
    den_pows: Vec<u32>,
    factors: Vec<DenFactor>,
}

impl RatFun {
    pub fn new(nvars: usize, num: MPoly) -> Self {
        debug_assert_eq!(num.nvars(), nvars);
        RatFun {
            nvars,
            num,
            den_pows: vec![0; nvars],
            factors: Vec::new(),
        }
    }

    pub fn zero(nvars: usize) -> Self {
        Self::new(nvars, MPoly::zero(nvars))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den_pow(&self, var: usize) -> u32 {
        self.den_pows[var]
    }

    pub fn factors(&self) -> &[DenFactor] {
        &self.factors
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn scale(&mut self, c: &Rat) {
        self.num = self.num.scale(c);
    }

    pub fn mul_num(&mut self, p: &MPoly) {
        self.num = self.num.mul(p);
    }

    /// Divides by z_var^power.
    pub fn div_var_pow(&mut self, var: usize, power: u32) {
        self.den_pows[var] += power;
    }

    /// Multiplies by z_var^power (cancelling against the monomial denominator).
    pub fn mul_var_pow(&mut self, var: usize, power: u32) {
        let cancel = power.min(self.den_pows[var]);
        self.den_pows[var] -= cancel;
        if power > cancel {
            self.num = self.num.mul_var_pow(var, power - cancel);
        }
    }

    /// Divides by `form^mult`. Single-variable forms fold into the monomial
    /// part; genuine linear forms join the factor list.
    pub fn div_factor(&mut self, form: LinForm, mult: u32, designated: Option<usize>) {
        assert!(!form.is_zero(), "zero denominator factor");
        if mult == 0 {
            return;
        }
        if let Some((v, c)) = form.single_var() {
            self.num = self.num.scale(&rat::pow(&c.recip(), mult as i64));
            self.den_pows[v] += mult;
        } else {
            self.factors.push(DenFactor {
                form,
                mult,
                designated,
            });
        }
    }

    /// The denominator expanded to a single polynomial (tests and equality).
    pub fn den_expand(&self) -> MPoly {
        let mut den = MPoly::one(self.nvars);
        for (v, p) in self.den_pows.iter().enumerate() {
            if *p > 0 {
                den = den.mul(&MPoly::var(self.nvars, v, *p));
            }
        }
        for f in &self.factors {
            den = den.mul(&f.form.to_mpoly(self.nvars).pow(f.mult));
        }
        den
    }

    /// Equality by cross-multiplication.
    pub fn eq_ratfun(&self, other: &RatFun) -> bool {
        let lhs = self.num.mul(&other.den_expand());
        let rhs = other.num.mul(&self.den_expand());
        lhs == rhs
    }

    /// Sum over a common (concatenated) denominator; no gcd reduction.
    pub fn add_ratfun(&self, other: &RatFun) -> RatFun {
        let mut num = self.num.mul(&other.den_expand());
        num = num.add(&other.num.mul(&self.den_expand()));
        let mut out = RatFun::new(self.nvars, num);
        for (v, p) in self.den_pows.iter().enumerate() {
            out.den_pows[v] += p;
        }
        for (v, p) in other.den_pows.iter().enumerate() {
            out.den_pows[v] += p;
        }
        out.factors.extend(self.factors.iter().cloned());
        out.factors.extend(other.factors.iter().cloned());
        out
    }

    pub fn as_scalar(&self) -> Option<Rat> {
        if self.num.is_zero() {
            return Some(rat::zero());
        }
        if self.den_pows.iter().any(|p| *p > 0) || !self.factors.is_empty() {
            return None;
        }
        self.num.as_constant()
    }
}

/// Residue at z_var = 0: the coefficient of z_var^{-1} in the Laurent
/// expansion around z_var = 0, as a rational function of the remaining
/// variables.
pub fn residue_at_zero(f: &RatFun, var: usize) -> Result<RatFun> {
    residue_at_zero_stage(f, var, 0)
}

fn residue_at_zero_stage(f: &RatFun, var: usize, stage: usize) -> Result<RatFun> {
    let alpha = f.den_pows[var];
    if alpha == 0 || f.num.is_zero() {
        return Ok(RatFun::zero(f.nvars));
    }
    let target = alpha - 1;
    let mut g = f.num.truncate_var(var, target);
    let mut out = RatFun::zero(f.nvars);
    // descendant factors to attach afterwards: (form, mult, tag)
    let mut descendants: Vec<(LinForm, u32, Option<usize>)> = Vec::new();
    for fac in &f.factors {
        if !fac.form.involves(var) {
            descendants.push((fac.form.clone(), fac.mult, fac.designated));
            continue;
        }
        let a = fac.form.coeff(var);
        let w = fac.form.without_var(var);
        if w.is_zero() {
            return Err(Error::NonIsolatedPole { var, stage });
        }
        // 1/(a z + W)^g = sum_m C(g+m-1, m) (-a)^m z^m W^{-g-m}
        //              = [sum_m C(g+m-1, m) (-a)^m z^m W^{target-m}] / W^{g+target}
        let wmp = w.to_mpoly(f.nvars);
        let mut wpows: Vec<MPoly> = Vec::with_capacity(target as usize + 1);
        wpows.push(MPoly::one(f.nvars));
        for _ in 0..target {
            wpows.push(wpows.last().unwrap().mul(&wmp));
        }
        let mut p = MPoly::zero(f.nvars);
        for m in 0..=target {
            let c = Rat::from_integer(rat::binomial((fac.mult + m - 1) as u64, m as u64))
                * rat::pow(&-a.clone(), m as i64);
            let term = wpows[(target - m) as usize].scale(&c).mul_var_pow(var, m);
            p = p.add(&term);
        }
        g = g.mul_trunc_var(&p, Some((var, target)));
        descendants.push((w, fac.mult + target, fac.designated));
    }
    out.num = g.coefficient_of(var, target);
    for (v, p) in f.den_pows.iter().enumerate() {
        if v != var {
            out.den_pows[v] = *p;
        }
    }
    for (form, mult, tag) in descendants {
        out.div_factor(form, mult, tag);
    }
    Ok(out)
}

/// Simple-pole residue at z_var = point, where `point` is a linear form in the
/// other variables. Returns zero when no denominator factor vanishes on that
/// locus; rejects loci the denominator vanishes on to higher order.
pub fn residue_at_linear_pole(f: &RatFun, var: usize, point: &LinForm) -> Result<RatFun> {
    // locus factor: z_var - point
    let mut locus = point.scale(&-rat::one());
    locus.set_coeff(var, rat::one());
    let mut found: Option<usize> = None;
    for (i, fac) in f.factors.iter().enumerate() {
        if locus.proportional_to(&fac.form).is_some() {
            if found.is_some() || fac.mult > 1 {
                return Err(Error::HigherOrderPole { var, stage: 0 });
            }
            found = Some(i);
        }
    }
    match found {
        None => Ok(RatFun::zero(f.nvars)),
        Some(i) => residue_at_simple_factor(f, var, i, 0),
    }
}

fn residue_at_simple_factor(f: &RatFun, var: usize, idx: usize, stage: usize) -> Result<RatFun> {
    let fac = &f.factors[idx];
    debug_assert!(fac.form.involves(var));
    if fac.mult != 1 {
        return Err(Error::HigherOrderPole { var, stage });
    }
    let a = fac.form.coeff(var);
    let w = fac.form.without_var(var);
    // z_var -> -W/a; residue contributes 1/a.
    let rep = w.scale(&(-a.clone().recip()));
    let mut out = RatFun::new(f.nvars, f.num.substitute_linear(var, &rep));
    out.scale(&a.recip());
    for (v, p) in f.den_pows.iter().enumerate() {
        if v != var {
            out.den_pows[v] = *p;
        }
    }
    let alpha = f.den_pows[var];
    if alpha > 0 {
        // 1/z_var^alpha -> (-a)^alpha / W^alpha
        if w.is_zero() {
            return Err(Error::NonIsolatedPole { var, stage });
        }
        out.scale(&rat::pow(&-a.clone(), alpha as i64));
        out.div_factor(w.clone(), alpha, None);
    }
    for (j, other) in f.factors.iter().enumerate() {
        if j == idx {
            continue;
        }
        let newform = if other.form.involves(var) {
            let shifted = rep.scale(&other.form.coeff(var));
            other.form.without_var(var).add(&shifted)
        } else {
            other.form.clone()
        };
        if newform.is_zero() {
            return Err(Error::HigherOrderPole { var, stage });
        }
        out.div_factor(newform, other.mult, other.designated);
    }
    Ok(out)
}

/// Which poles the contour for one variable encircles.
#[derive(Debug, Clone, PartialEq)]
pub enum PoleSet {
    /// Residue at z = 0 only.
    Zero,
    /// z = 0 and the pole of the factor proportional to 2 z_var - z_left - z_right.
    ZeroAndMidpoint { left: usize, right: usize },
    /// z = 0 and the pole of the factor proportional to the given form.
    ZeroAndForm(LinForm),
}

#[derive(Debug, Clone)]
pub struct ContourSpec {
    stages: Vec<(usize, PoleSet)>,
}

impl ContourSpec {
    /// Stages must list variables in strictly ascending order; that is the
    /// integration order.
    pub fn new(stages: Vec<(usize, PoleSet)>) -> Self {
        for w in stages.windows(2) {
            assert!(w[0].0 < w[1].0, "contour variables must ascend");
        }
        ContourSpec { stages }
    }

    pub fn all_zero(nvars: usize) -> Self {
        Self::new((0..nvars).map(|v| (v, PoleSet::Zero)).collect())
    }

    pub fn stages(&self) -> &[(usize, PoleSet)] {
        &self.stages
    }

    fn designated_form(&self, var: usize, nvars: usize) -> Option<LinForm> {
        for (v, p) in &self.stages {
            if *v == var {
                return match p {
                    PoleSet::Zero => None,
                    PoleSet::ZeroAndMidpoint { left, right } => {
                        let mut f = LinForm::zero(nvars);
                        f.set_coeff(var, rat::int(2));
                        f.set_coeff(*left, rat::int(-1));
                        f.set_coeff(*right, rat::int(-1));
                        Some(f)
                    }
                    PoleSet::ZeroAndForm(f) => Some(f.clone()),
                };
            }
        }
        None
    }
}

/// Applies residue extraction variable by variable following `spec`, summing
/// over each variable's declared pole set; the result is a scalar.
pub fn iterated_contour(f: &RatFun, spec: &ContourSpec) -> Result<Rat> {
    let nvars = f.nvars;
    // Mark denominator factors matching each designated pole.
    let mut tagged = f.clone();
    let mut flagged: Vec<usize> = Vec::new();
    for (var, _) in spec.stages() {
        if let Some(form) = spec.designated_form(*var, nvars) {
            let mut hit = false;
            for fac in tagged.factors.iter_mut() {
                if form.proportional_to(&fac.form).is_some() {
                    fac.designated = Some(*var);
                    hit = true;
                }
            }
            if hit {
                flagged.push(*var);
            }
        }
    }
    let order: Vec<usize> = spec.stages().iter().map(|(v, _)| *v).collect();
    let mut total = rat::zero();
    for mask in 0..(1u32 << flagged.len()) {
        let subset: Vec<usize> = flagged
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, v)| *v)
            .collect();
        let mut work = tagged.clone();
        let mut dead = false;
        for (stage, v) in subset.iter().enumerate() {
            let idx = work
                .factors
                .iter()
                .position(|fac| fac.designated == Some(*v) && fac.form.involves(*v));
            match idx {
                None => {
                    dead = true;
                    break;
                }
                Some(i) => {
                    work = residue_at_simple_factor(&work, *v, i, stage)?;
                }
            }
        }
        if dead {
            continue;
        }
        for (stage, v) in order.iter().enumerate() {
            if subset.contains(v) {
                continue;
            }
            work = residue_at_zero_stage(&work, *v, stage)?;
            if work.is_zero() {
                break;
            }
        }
        match work.as_scalar() {
            Some(c) => total += c,
            None => panic!("iterated contour left a non-scalar remainder"),
        }
    }
    Ok(total)
}

/// e^k(z_i, z_j) = prod_{t=0}^{k} (t z_i + (k - t) z_j).
pub fn ek_poly(nvars: usize, k: u32, vi: usize, vj: usize) -> MPoly {
    let mut out = MPoly::one(nvars);
    for t in 0..=k {
        let mut f = LinForm::zero(nvars);
        f.set_coeff(vi, rat::int(t as i64));
        f.set_coeff(vj, rat::int((k - t) as i64));
        out = out.mul(&f.to_mpoly(nvars));
    }
    out
}

/// prod_a e^{k_a}(z_i, z_j): the edge factor for a complete intersection.
pub fn edge_poly(nvars: usize, degrees: &[u32], vi: usize, vj: usize) -> MPoly {
    let mut out = MPoly::one(nvars);
    for &k in degrees {
        out = out.mul(&ek_poly(nvars, k, vi, vj));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{frac, int};

    #[test]
    fn residue_one_over_z() {
        let mut f = RatFun::new(1, MPoly::one(1));
        f.div_var_pow(0, 1);
        assert_eq!(residue_at_zero(&f, 0).unwrap().as_scalar(), Some(int(1)));
    }

    #[test]
    fn residue_with_linear_factor() {
        // z_1 / (z^2 (z - z_1)) -> -1/z_1
        let mut f = RatFun::new(2, MPoly::var(2, 1, 1));
        f.div_var_pow(0, 2);
        f.div_factor(
            LinForm::from_coeffs(vec![int(1), int(-1)]),
            1,
            None,
        );
        let r = residue_at_zero(&f, 0).unwrap();
        let mut want = RatFun::new(2, MPoly::constant(2, int(-1)));
        want.div_var_pow(1, 1);
        assert!(r.eq_ratfun(&want));
    }

    #[test]
    fn residue_of_exact_derivative_vanishes() {
        // d/dz (z^2 z_1 + z) = 2 z z_1 + 1 has no 1/z part: residue 0.
        let g = MPoly::var(2, 0, 1)
            .mul(&MPoly::var(2, 1, 1))
            .scale(&int(2))
            .add(&MPoly::one(2));
        let f = RatFun::new(2, g);
        assert_eq!(residue_at_zero(&f, 0).unwrap().as_scalar(), Some(int(0)));
    }

    #[test]
    fn simple_linear_pole() {
        // 1/(2z - a - b) at z = (a+b)/2 -> 1/2 ; z/(2z - a - b) -> (a+b)/4
        let nv = 3;
        let mid = LinForm::from_coeffs(vec![int(0), frac(1, 2), frac(1, 2)]);
        let mut f = RatFun::new(nv, MPoly::one(nv));
        f.div_factor(LinForm::from_coeffs(vec![int(2), int(-1), int(-1)]), 1, None);
        let r = residue_at_linear_pole(&f, 0, &mid).unwrap();
        assert_eq!(r.as_scalar(), Some(frac(1, 2)));

        let mut g = RatFun::new(nv, MPoly::var(nv, 0, 1));
        g.div_factor(LinForm::from_coeffs(vec![int(2), int(-1), int(-1)]), 1, None);
        let r = residue_at_linear_pole(&g, 0, &mid).unwrap();
        let want = MPoly::var(nv, 1, 1).add(&MPoly::var(nv, 2, 1)).scale(&frac(1, 4));
        assert!(r.eq_ratfun(&RatFun::new(nv, want)));

        // pole-free locus: residue 0
        let h = RatFun::new(nv, MPoly::one(nv));
        assert_eq!(residue_at_linear_pole(&h, 0, &mid).unwrap().as_scalar(), Some(int(0)));
    }

    #[test]
    fn higher_order_pole_rejected() {
        let nv = 2;
        let mid = LinForm::from_coeffs(vec![int(0), frac(1, 2)]);
        let mut f = RatFun::new(nv, MPoly::one(nv));
        f.div_factor(LinForm::from_coeffs(vec![int(2), int(-1)]), 2, None);
        assert!(matches!(
            residue_at_linear_pole(&f, 0, &mid),
            Err(Error::HigherOrderPole { .. })
        ));
    }

    #[test]
    fn contour_product_of_simple_poles() {
        // 1/(z_0 z_1): residue 1
        let mut f = RatFun::new(2, MPoly::one(2));
        f.div_var_pow(0, 1);
        f.div_var_pow(1, 1);
        let spec = ContourSpec::all_zero(2);
        assert_eq!(iterated_contour(&f, &spec).unwrap(), int(1));
    }

    #[test]
    fn ek_diagonal_identity() {
        // e^k(z, z) = (k z)^{k+1}
        for k in [3u32, 5, 7] {
            let p = ek_poly(1, k, 0, 0);
            let want = MPoly::var(1, 0, k + 1).scale(&rat::pow(&int(k as i64), (k + 1) as i64));
            assert_eq!(p, want);
        }
    }

    #[test]
    fn contour_linearity() {
        // f = 1/(z0 z1), g = z1/(z0^2 (2 z1 - z0)) with the midpoint pole taken
        let mut f = RatFun::new(2, MPoly::one(2));
        f.div_var_pow(0, 1);
        f.div_var_pow(1, 1);
        let mut g = RatFun::new(2, MPoly::var(2, 1, 1));
        g.div_var_pow(0, 2);
        g.div_factor(LinForm::from_coeffs(vec![int(-1), int(2)]), 1, None);
        let spec = ContourSpec::new(vec![
            (0, PoleSet::Zero),
            (1, PoleSet::ZeroAndForm(LinForm::from_coeffs(vec![int(-1), int(2)]))),
        ]);
        let a = iterated_contour(&f, &spec).unwrap();
        let b = iterated_contour(&g, &spec).unwrap();
        let sum = iterated_contour(&f.add_ratfun(&g), &spec).unwrap();
        assert_eq!(sum, a + b);
    }
}
