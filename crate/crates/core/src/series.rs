//! Truncated graded formal series in q = e^x.
//!
//! Exponents are stored doubled, so an index `e` stands for q^{e/2}. Integer-graded
//! series only populate even indices. Every series carries its truncation order
//! (the largest doubled exponent that is known); coefficients beyond it are
//! unknown, not zero, and binary operations shrink to the common known range.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::rat::{self, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grading {
    Integer,
    Half,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedSeries {
    coeffs: BTreeMap<u64, Rat>,
    trunc: u64,
    grading: Grading,
}

impl GradedSeries {
    pub fn zero(grading: Grading, trunc: u64) -> Self {
        GradedSeries {
            coeffs: BTreeMap::new(),
            trunc,
            grading,
        }
    }

    pub fn constant(value: Rat, grading: Grading, trunc: u64) -> Self {
        let mut s = Self::zero(grading, trunc);
        s.set_coeff(0, value);
        s
    }

    pub fn one(grading: Grading, trunc: u64) -> Self {
        Self::constant(rat::one(), grading, trunc)
    }

    pub fn from_terms<I: IntoIterator<Item = (u64, Rat)>>(
        terms: I,
        grading: Grading,
        trunc: u64,
    ) -> Self {
        let mut s = Self::zero(grading, trunc);
        for (e, v) in terms {
            s.set_coeff(e, v);
        }
        s
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn trunc(&self) -> u64 {
        self.trunc
    }

    /// Coefficient of q^{e/2} (doubled index e). Absent indices below the
    /// truncation are exact zeros.
    pub fn coeff(&self, e: u64) -> Rat {
        debug_assert!(e <= self.trunc, "coefficient beyond truncation is unknown");
        self.coeffs.get(&e).cloned().unwrap_or_else(rat::zero)
    }

    pub fn set_coeff(&mut self, e: u64, value: Rat) {
        assert!(e <= self.trunc, "index beyond truncation");
        if self.grading == Grading::Integer {
            assert!(e % 2 == 0, "odd doubled index in an integer-graded series");
        }
        if value == rat::zero() {
            self.coeffs.remove(&e);
        } else {
            self.coeffs.insert(e, value);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&u64, &Rat)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Smallest stored exponent; `trunc + 1` for the (known-)zero series.
    pub fn valuation(&self) -> u64 {
        self.coeffs.keys().next().copied().unwrap_or(self.trunc + 1)
    }

    pub fn truncate_to(&self, trunc: u64) -> Self {
        let t = trunc.min(self.trunc);
        GradedSeries {
            coeffs: self.coeffs.range(..=t).map(|(e, v)| (*e, v.clone())).collect(),
            trunc: t,
            grading: self.grading,
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if *c == rat::zero() {
            return Self::zero(self.grading, self.trunc);
        }
        GradedSeries {
            coeffs: self.coeffs.iter().map(|(e, v)| (*e, v * c)).collect(),
            trunc: self.trunc,
            grading: self.grading,
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-rat::one())
    }

    /// Applies q d/dq with q = e^x: q^{e/2} picks up a factor e/2.
    pub fn diff_x(&self) -> Self {
        GradedSeries {
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, v)| (*e, v * rat::frac(*e as i64, 2)))
                .collect(),
            trunc: self.trunc,
            grading: self.grading,
        }
    }

    /// Multiplies by q^{shift/2} (doubled shift), extending the known range by
    /// the same amount.
    pub fn shift(&self, shift: u64) -> Self {
        let grading = if shift % 2 == 1 { Grading::Half } else { self.grading };
        GradedSeries {
            coeffs: self.coeffs.iter().map(|(e, v)| (e + shift, v.clone())).collect(),
            trunc: self.trunc + shift,
            grading,
        }
    }
}

fn join(a: Grading, b: Grading) -> Grading {
    if a == Grading::Half || b == Grading::Half {
        Grading::Half
    } else {
        Grading::Integer
    }
}

pub fn add(a: &GradedSeries, b: &GradedSeries) -> GradedSeries {
    let trunc = a.trunc.min(b.trunc);
    let mut out = GradedSeries::zero(join(a.grading, b.grading), trunc);
    for (e, v) in a.coeffs.range(..=trunc) {
        out.set_coeff(*e, v.clone());
    }
    for (e, v) in b.coeffs.range(..=trunc) {
        out.set_coeff(*e, out.coeff(*e) + v);
    }
    out
}

pub fn sub(a: &GradedSeries, b: &GradedSeries) -> GradedSeries {
    add(a, &b.neg())
}

/// Cauchy product. The product of a series known to order T1 with one of
/// valuation v2 is known to order T1 + v2, hence the truncation below.
pub fn mul(a: &GradedSeries, b: &GradedSeries) -> GradedSeries {
    let trunc = (a.trunc + b.valuation()).min(b.trunc + a.valuation());
    let mut coeffs: BTreeMap<u64, Rat> = BTreeMap::new();
    for (e1, v1) in &a.coeffs {
        for (e2, v2) in &b.coeffs {
            let e = e1 + e2;
            if e > trunc {
                break;
            }
            let slot = coeffs.entry(e).or_insert_with(rat::zero);
            *slot += v1 * v2;
        }
    }
    coeffs.retain(|_, v| *v != rat::zero());
    GradedSeries {
        coeffs,
        trunc,
        grading: join(a.grading, b.grading),
    }
}

/// Multiplicative inverse; requires a nonzero constant term.
pub fn invert(a: &GradedSeries) -> Result<GradedSeries> {
    let a0 = a.coeff(0);
    if a0 == rat::zero() {
        return Err(Error::ZeroConstantTerm);
    }
    let trunc = a.trunc;
    let mut inv: BTreeMap<u64, Rat> = BTreeMap::new();
    inv.insert(0, a0.recip());
    for n in 1..=trunc {
        let mut s = rat::zero();
        for (e, v) in a.coeffs.range(1..=n) {
            if let Some(c) = inv.get(&(n - e)) {
                s += v * c;
            }
        }
        if s != rat::zero() {
            inv.insert(n, -s / &a0);
        }
    }
    Ok(GradedSeries {
        coeffs: inv,
        trunc,
        grading: a.grading,
    })
}

pub fn div(a: &GradedSeries, b: &GradedSeries) -> Result<GradedSeries> {
    Ok(mul(a, &invert(b)?))
}

/// exp of a series with zero constant term.
pub fn exp(a: &GradedSeries) -> GradedSeries {
    assert!(a.coeff(0) == rat::zero(), "exp needs zero constant term");
    let mut out = GradedSeries::one(a.grading, a.trunc);
    let mut term = GradedSeries::one(a.grading, a.trunc);
    let mut n: i64 = 0;
    loop {
        n += 1;
        term = mul(&term, a).scale(&rat::frac(1, n));
        term = term.truncate_to(a.trunc);
        if term.is_zero() {
            break;
        }
        out = add(&out, &term);
    }
    out.truncate_to(a.trunc)
}

/// Substitutes x -> x + shift(q) into a series in q = e^x:
/// q^{e/2} -> q^{e/2} * exp(e * shift / 2). `shift` must be integer-graded
/// with zero constant term.
pub fn compose_shift(target: &GradedSeries, shift: &GradedSeries) -> GradedSeries {
    assert_eq!(shift.grading(), Grading::Integer);
    assert!(shift.coeff(0) == rat::zero());
    let trunc = target.trunc;
    let mut out = GradedSeries::zero(target.grading, trunc);
    for (e, v) in &target.coeffs {
        let factor = exp(&shift.truncate_to(trunc.saturating_sub(*e)).scale(&rat::frac(*e as i64, 2)));
        for (de, dv) in factor.iter() {
            let idx = e + de;
            if idx <= trunc {
                out.set_coeff(idx, out.coeff(idx) + v * dv);
            }
        }
    }
    out
}

/// Given t(x) = x + t_minus_x(e^x), computes target(x(t)) as a series in
/// e^{t/2}, where x(t) is the formal inverse of t(x).
///
/// The correction E(e^t) := x(t) - t solves E = -t_minus_x(e^{t+E}); it is
/// found by valuation-increasing fixed-point iteration.
pub fn invert_map(t_minus_x: &GradedSeries, target: &GradedSeries) -> Result<GradedSeries> {
    if t_minus_x.coeff(0) != rat::zero() {
        return Err(Error::NotAMirrorMap);
    }
    if t_minus_x.grading() != Grading::Integer {
        return Err(Error::NotAMirrorMap);
    }
    let mut e = GradedSeries::zero(Grading::Integer, t_minus_x.trunc());
    loop {
        let next = compose_shift(t_minus_x, &e).neg();
        if next == e {
            break;
        }
        e = next;
    }
    Ok(compose_shift(target, &e))
}

/// Polynomial in x whose coefficients are graded series: sum_i x^i * parts[i].
#[derive(Debug, Clone, PartialEq)]
pub struct LogSeries {
    parts: Vec<GradedSeries>,
}

impl LogSeries {
    pub fn new(parts: Vec<GradedSeries>) -> Self {
        assert!(!parts.is_empty());
        let mut s = LogSeries { parts };
        s.trim();
        s
    }

    pub fn from_series(s: GradedSeries) -> Self {
        LogSeries { parts: vec![s] }
    }

    fn trim(&mut self) {
        while self.parts.len() > 1 && self.parts.last().unwrap().is_zero() {
            self.parts.pop();
        }
    }

    pub fn parts(&self) -> &[GradedSeries] {
        &self.parts
    }

    pub fn part(&self, i: usize) -> Option<&GradedSeries> {
        self.parts.get(i)
    }

    pub fn x_degree(&self) -> usize {
        self.parts.len() - 1
    }

    /// The series part, provided every x^i (i >= 1) coefficient vanished.
    pub fn pure_series(&self, context: &'static str) -> Result<GradedSeries> {
        if self.parts.len() == 1 {
            Ok(self.parts[0].clone())
        } else {
            Err(Error::CancellationFailure { context })
        }
    }

    /// d/dx with q = e^x: acts termwise on series parts and lowers x-powers by
    /// the product rule.
    pub fn diff_x(&self) -> LogSeries {
        let mut parts: Vec<GradedSeries> = self.parts.iter().map(|p| p.diff_x()).collect();
        for i in 1..self.parts.len() {
            let lowered = self.parts[i].scale(&rat::int(i as i64));
            parts[i - 1] = add(&parts[i - 1], &lowered);
        }
        LogSeries::new(parts)
    }

    pub fn div_series(&self, b: &GradedSeries) -> Result<LogSeries> {
        let inv = invert(b)?;
        Ok(LogSeries::new(
            self.parts.iter().map(|p| mul(p, &inv)).collect(),
        ))
    }

    pub fn mul_series(&self, b: &GradedSeries) -> LogSeries {
        LogSeries::new(self.parts.iter().map(|p| mul(p, b)).collect())
    }

    pub fn add(&self, other: &LogSeries) -> LogSeries {
        let n = self.parts.len().max(other.parts.len());
        let mut parts = Vec::with_capacity(n);
        for i in 0..n {
            match (self.parts.get(i), other.parts.get(i)) {
                (Some(a), Some(b)) => parts.push(add(a, b)),
                (Some(a), None) => parts.push(a.clone()),
                (None, Some(b)) => parts.push(b.clone()),
                (None, None) => unreachable!(),
            }
        }
        LogSeries::new(parts)
    }

    pub fn scale(&self, c: &Rat) -> LogSeries {
        LogSeries::new(self.parts.iter().map(|p| p.scale(c)).collect())
    }

    /// Multiplies by q = e^x (doubled shift 2).
    pub fn shift_q(&self, shift: u64) -> LogSeries {
        LogSeries::new(self.parts.iter().map(|p| p.shift(shift)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{frac, int};

    fn qpow(e: u64, c: i64, trunc: u64) -> GradedSeries {
        GradedSeries::from_terms([(e, int(c))], Grading::Half, trunc)
    }

    #[test]
    fn mul_identity_and_binomial() {
        let one = GradedSeries::one(Grading::Integer, 8);
        let s = GradedSeries::from_terms([(0, int(1)), (2, int(1))], Grading::Integer, 8);
        assert_eq!(mul(&one, &s), s);
        let t = GradedSeries::from_terms([(0, int(1)), (2, int(-1))], Grading::Integer, 8);
        let p = mul(&s, &t);
        assert_eq!(p.coeff(0), int(1));
        assert_eq!(p.coeff(2), int(0));
        assert_eq!(p.coeff(4), int(-1));
    }

    #[test]
    fn invert_geometric() {
        let s = GradedSeries::from_terms([(0, int(1)), (2, int(1))], Grading::Integer, 10);
        let inv = invert(&s).unwrap();
        for d in 0..=5u64 {
            assert_eq!(inv.coeff(2 * d), int(if d % 2 == 0 { 1 } else { -1 }));
        }
        assert_eq!(mul(&s, &inv), GradedSeries::one(Grading::Integer, 10));
        let z = GradedSeries::from_terms([(2, int(1))], Grading::Integer, 4);
        assert_eq!(invert(&z), Err(Error::ZeroConstantTerm));
    }

    #[test]
    fn diff_x_halves() {
        assert!(GradedSeries::one(Grading::Half, 4).diff_x().is_zero());
        let s = qpow(1, 1, 5);
        assert_eq!(s.diff_x().coeff(1), frac(1, 2));
    }

    #[test]
    fn log_series_product_rule() {
        // x*q -> q + x*q
        let q = GradedSeries::from_terms([(2, int(1))], Grading::Integer, 6);
        let xs = LogSeries::new(vec![GradedSeries::zero(Grading::Integer, 6), q.clone()]);
        let d = xs.diff_x();
        assert_eq!(d.part(0).unwrap().coeff(2), int(1));
        assert_eq!(d.part(1).unwrap().coeff(2), int(1));
    }

    #[test]
    fn mul_truncation_tracks_valuation() {
        // a known to q^2 (doubled 4), b = q: product known to q^3.
        let a = GradedSeries::from_terms([(0, int(1))], Grading::Integer, 4);
        let b = GradedSeries::from_terms([(2, int(1))], Grading::Integer, 4);
        assert_eq!(mul(&a, &b).trunc(), 6);
    }

    #[test]
    fn invert_map_identity_and_first_order() {
        let target = GradedSeries::from_terms([(1, int(1)), (3, int(4))], Grading::Half, 7);
        let zero_shift = GradedSeries::zero(Grading::Integer, 6);
        assert_eq!(invert_map(&zero_shift, &target).unwrap(), target);

        // t - x = c q: q^{1/2} -> q^{1/2} (1 - (c/2) q + ...) in the t variable
        let c = int(3);
        let shift = GradedSeries::from_terms([(2, c.clone())], Grading::Integer, 6);
        let half = GradedSeries::from_terms([(1, int(1))], Grading::Half, 7);
        let inv = invert_map(&shift, &half).unwrap();
        assert_eq!(inv.coeff(1), int(1));
        assert_eq!(inv.coeff(3), -c / int(2));

        let bad = GradedSeries::from_terms([(0, int(1))], Grading::Integer, 6);
        assert_eq!(invert_map(&bad, &half), Err(Error::NotAMirrorMap));
    }

    #[test]
    fn invert_map_roundtrip() {
        let shift = GradedSeries::from_terms(
            [(2, int(5)), (4, frac(-7, 3)), (6, int(11))],
            Grading::Integer,
            8,
        );
        let target = GradedSeries::from_terms(
            [(1, int(2)), (3, frac(1, 2)), (5, int(-9)), (7, int(4))],
            Grading::Half,
            9,
        );
        let forward = invert_map(&shift, &target).unwrap();
        let back = compose_shift(&forward, &shift);
        assert_eq!(back, target.truncate_to(back.trunc()));
    }
}
