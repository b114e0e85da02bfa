//! Closed virtual structure constants.
//!
//! Two independent routes: the hypergeometric-solution recursion (cheap, used
//! for every Calabi-Yau table) and the iterated-residue representation (works
//! for any geometry and cross-checks the recursion).

use crate::error::{Error, Result};
use crate::geometry::GeometryData;
use crate::poly::{LinForm, MPoly};
use crate::rat::{self, Rat};
use crate::residue::{edge_poly, iterated_contour, ContourSpec, PoleSet, RatFun};
use crate::series::{GradedSeries, Grading, LogSeries};

// ---- truncated polynomials in the auxiliary variable y ----

fn ypoly_mul(a: &[Rat], b: &[Rat], jmax: usize) -> Vec<Rat> {
    let mut out = vec![rat::zero(); jmax + 1];
    for (i, ai) in a.iter().enumerate() {
        if *ai == rat::zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if i + j > jmax {
                break;
            }
            out[i + j] += ai * bj;
        }
    }
    out
}

fn ypoly_inv(a: &[Rat], jmax: usize) -> Vec<Rat> {
    assert!(a[0] != rat::zero());
    let mut out = vec![rat::zero(); jmax + 1];
    out[0] = a[0].recip();
    for m in 1..=jmax {
        let mut s = rat::zero();
        for i in 1..=m.min(a.len() - 1) {
            s += &a[i] * &out[m - i];
        }
        out[m] = -s / &a[0];
    }
    out
}

/// Taylor coefficients in y, through y^jmax, of
/// prod_a prod_{j=1}^{k_a d} (j + k_a y) / prod_{j=1}^{d} (j + y)^N.
fn hypergeometric_y(geom: &GeometryData, d: u64, jmax: usize) -> Vec<Rat> {
    let mut num = vec![rat::zero(); jmax + 1];
    num[0] = rat::one();
    for &k in geom.degrees() {
        for j in 1..=(k as u64 * d) {
            let lin = [rat::int(j as i64), rat::int(k as i64)];
            num = ypoly_mul(&num, &lin, jmax);
        }
    }
    let mut den = vec![rat::zero(); jmax + 1];
    den[0] = rat::one();
    for j in 1..=d {
        let lin = [rat::int(j as i64), rat::one()];
        for _ in 0..geom.n() {
            den = ypoly_mul(&den, &lin, jmax);
        }
    }
    ypoly_mul(&num, &ypoly_inv(&den, jmax), jmax)
}

/// w_j(x) = (1/j!) d^j/dy^j |_{y=0} of sum_d w(x, y) e^{(d+y)x}, as an
/// x-polynomial of degree j with series coefficients (truncated at q^dmax).
pub fn pf_solutions(geom: &GeometryData, j: u32, dmax: u64) -> LogSeries {
    let jmax = j as usize;
    let rows: Vec<Vec<Rat>> = (0..=dmax)
        .map(|d| hypergeometric_y(geom, d, jmax))
        .collect();
    let mut parts = Vec::with_capacity(jmax + 1);
    for i in 0..=jmax {
        let inv_fact = Rat::from_integer(rat::factorial(i as u64)).recip();
        let mut s = GradedSeries::zero(Grading::Integer, 2 * dmax);
        for (d, row) in rows.iter().enumerate() {
            let v = &row[jmax - i] * &inv_fact;
            if v != rat::zero() {
                s.set_coeff(2 * d as u64, v);
            }
        }
        parts.push(s);
    }
    LogSeries::new(parts)
}

/// The completed recursion table: L~_n(q) for n = 0 ..= N - m.
#[derive(Debug, Clone)]
pub struct VscTable {
    geometry: GeometryData,
    ltilde: Vec<GradedSeries>,
}

impl VscTable {
    pub fn geometry(&self) -> &GeometryData {
        &self.geometry
    }

    pub fn series(&self, n: u32) -> &GradedSeries {
        &self.ltilde[n as usize]
    }

    pub fn max_index(&self) -> u32 {
        self.ltilde.len() as u32 - 1
    }

    /// L~_n^{d}; d = 0 gives the leading 1.
    pub fn entry(&self, n: u32, d: u64) -> Rat {
        self.ltilde[n as usize].coeff(2 * d)
    }
}

/// Builds L~_0 ..= L~_{N-m} by the nested derivative/division chain applied to
/// the hypergeometric solutions. Every logarithmic part must cancel; a
/// survivor is an implementation bug, reported as CancellationFailure.
pub fn vsc_recursion(geom: &GeometryData, dmax: u64) -> Result<VscTable> {
    if !geom.is_calabi_yau() {
        return Err(Error::UnsupportedGeometry(
            "the virtual structure constant recursion is stated for Calabi-Yau targets".into(),
        ));
    }
    let top = geom.pf_order(); // formal w_{N-m} extends the solution basis
    let mut ltilde: Vec<GradedSeries> = Vec::with_capacity(top as usize + 1);
    let w0 = pf_solutions(geom, 0, dmax).pure_series("L~_0")?;
    ltilde.push(w0);
    for j in 1..=top {
        let wj = pf_solutions(geom, j, dmax);
        let mut v = wj.div_series(&ltilde[0])?;
        for t in 1..j {
            v = v.diff_x().div_series(&ltilde[t as usize])?;
        }
        let pure = v.diff_x().pure_series("virtual structure constant recursion")?;
        debug_assert_eq!(pure.coeff(0), rat::one());
        ltilde.push(pure);
    }
    Ok(VscTable {
        geometry: geom.clone(),
        ltilde,
    })
}

/// The residue integrand of the closed two-point function (the e^k-product
/// representation): variables z_0 ... z_d, measure dz_i / z_i^N, insertions
/// z_0^a and z_d^b, edge factors between consecutive variables and the
/// midpoint vertex factors in between. Negative a or b move to the
/// denominator (needed for n = 0 and n = N - m columns).
fn two_point_ratfun(geom: &GeometryData, a: i64, b: i64, d: u64) -> (RatFun, ContourSpec) {
    let nv = d as usize + 1;
    let m = geom.codim();
    let kprod = rat::int(geom.degree_product() as i64);
    let mut rf = RatFun::new(nv, MPoly::one(nv));
    for i in 0..nv {
        rf.div_var_pow(i, geom.n());
    }
    if a >= 0 {
        rf.mul_num(&MPoly::var(nv, 0, a as u32));
    } else {
        rf.div_var_pow(0, (-a) as u32);
    }
    if b >= 0 {
        rf.mul_num(&MPoly::var(nv, nv - 1, b as u32));
    } else {
        rf.div_var_pow(nv - 1, (-b) as u32);
    }
    for i in 1..nv {
        rf.mul_num(&edge_poly(nv, geom.degrees(), i - 1, i));
    }
    for i in 1..nv - 1 {
        rf.scale(&kprod.recip());
        rf.div_var_pow(i, m);
        let mut mid = LinForm::zero(nv);
        mid.set_coeff(i, rat::int(2));
        mid.set_coeff(i - 1, -rat::one());
        mid.set_coeff(i + 1, -rat::one());
        rf.div_factor(mid, 1, None);
    }
    let stages = (0..nv)
        .map(|i| {
            if i >= 1 && i + 1 < nv {
                (i, PoleSet::ZeroAndMidpoint { left: i - 1, right: i + 1 })
            } else {
                (i, PoleSet::Zero)
            }
        })
        .collect();
    (rf, ContourSpec::new(stages))
}

/// w(O_{h^a} O_{h^b})_{0,d} by localization. Vanishes off the dimension
/// selection a + b = N - 2 - m + (N - sum k) d.
pub fn closed_w(geom: &GeometryData, a: i64, b: i64, d: u64) -> Result<Rat> {
    assert!(d >= 1);
    let (rf, spec) = two_point_ratfun(geom, a, b, d);
    iterated_contour(&rf, &spec)
}

/// L~_n^{d} through the residue representation: (d / prod k) times the
/// two-point function at a = N - 1 - m - n, b = n - 1.
pub fn ltilde_residue(geom: &GeometryData, n: u32, d: u64) -> Result<Rat> {
    let a = geom.n() as i64 - 1 - geom.codim() as i64 - n as i64;
    let b = n as i64 - 1;
    let w = closed_w(geom, a, b, d)?;
    Ok(w * rat::frac(d as i64, geom.degree_product() as i64))
}

/// E^{N,k}_d(z_i, z_j): numerator product over j = 0..kd of
/// (j z_i + (kd - j) z_j)/d, denominator product over j = 1..d-1 of
/// ((j z_j + (d - j) z_i)/d)^N. Returns the numerator and the denominator
/// factor list.
pub(crate) fn e_function(
    nv: usize,
    n_amb: u32,
    degrees: &[u32],
    dpart: u64,
    vi: usize,
    vj: usize,
) -> (MPoly, Vec<(LinForm, u32)>) {
    let mut num = MPoly::one(nv);
    for &k in degrees {
        for j in 0..=(k as u64 * dpart) {
            let mut f = LinForm::zero(nv);
            f.set_coeff(vi, rat::frac(j as i64, dpart as i64));
            f.set_coeff(vj, rat::frac((k as u64 * dpart - j) as i64, dpart as i64));
            num = num.mul(&f.to_mpoly(nv));
        }
    }
    let mut dens = Vec::new();
    for j in 1..dpart {
        let mut f = LinForm::zero(nv);
        f.set_coeff(vj, rat::frac(j as i64, dpart as i64));
        f.set_coeff(vi, rat::frac((dpart - j) as i64, dpart as i64));
        dens.push((f, n_amb));
    }
    (num, dens)
}

pub(crate) fn compositions(d: u64) -> Vec<Vec<u64>> {
    if d == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=d {
        for mut rest in compositions(d - first) {
            let mut v = vec![first];
            v.append(&mut rest);
            out.push(v);
        }
    }
    out
}

/// The ordered-partition representation of L~_n^{d} (hypersurface N = k):
/// every contour is a plain residue at zero and the edges carry E-functions.
pub fn ltilde_ordered_partition(geom: &GeometryData, n: u32, d: u64) -> Result<Rat> {
    let k = geom.total_degree();
    let mut total = rat::zero();
    for sigma in compositions(d) {
        let l = sigma.len();
        let nv = l + 1;
        let mut rf = RatFun::new(nv, MPoly::one(nv));
        rf.scale(&rat::frac(d as i64, k as i64));
        for i in 0..nv {
            rf.div_var_pow(i, k);
        }
        let a = k as i64 - 2 - n as i64;
        if a >= 0 {
            rf.mul_num(&MPoly::var(nv, 0, a as u32));
        } else {
            rf.div_var_pow(0, (-a) as u32);
        }
        let b = n as i64 - 1;
        if b >= 0 {
            rf.mul_num(&MPoly::var(nv, nv - 1, b as u32));
        } else {
            rf.div_var_pow(nv - 1, (-b) as u32);
        }
        for (idx, dj) in sigma.iter().enumerate() {
            let (num, dens) = e_function(nv, geom.n(), geom.degrees(), *dj, idx, idx + 1);
            rf.mul_num(&num);
            for (f, mult) in dens {
                rf.div_factor(f, mult, None);
            }
            rf.scale(&rat::frac(1, *dj as i64));
        }
        for jj in 1..l {
            rf.scale(&rat::frac(1, k as i64));
            rf.div_var_pow(jj, 1);
            let mut f = LinForm::zero(nv);
            f.set_coeff(jj, rat::frac(1, sigma[jj - 1] as i64) + rat::frac(1, sigma[jj] as i64));
            f.set_coeff(jj - 1, rat::frac(-1, sigma[jj - 1] as i64));
            f.set_coeff(jj + 1, rat::frac(-1, sigma[jj] as i64));
            rf.div_factor(f, 1, None);
        }
        total += iterated_contour(&rf, &ContourSpec::all_zero(nv))?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{frac, int, parse};

    fn hyper(n: u32, k: u32) -> GeometryData {
        GeometryData::hypersurface(n, k).unwrap()
    }

    #[test]
    fn fundamental_period_quintic() {
        let w0 = pf_solutions(&hyper(5, 5), 0, 3).pure_series("w0").unwrap();
        assert_eq!(w0.coeff(0), int(1));
        assert_eq!(w0.coeff(2), int(120));
        assert_eq!(w0.coeff(4), int(113400));
        assert_eq!(w0.coeff(6), int(168168000));
    }

    #[test]
    fn logarithmic_solution_quintic() {
        // w_1 = x w_0 + (770 q + ...)
        let w1 = pf_solutions(&hyper(5, 5), 1, 2);
        assert_eq!(w1.x_degree(), 1);
        assert_eq!(w1.part(1).unwrap().coeff(0), int(1));
        assert_eq!(w1.part(1).unwrap().coeff(2), int(120));
        assert_eq!(w1.part(0).unwrap().coeff(2), int(770));
    }

    #[test]
    fn recursion_table_quintic() {
        let t = vsc_recursion(&hyper(5, 5), 3).unwrap();
        assert_eq!(t.max_index(), 4);
        for n in 0..=4 {
            assert_eq!(t.entry(n, 0), int(1));
        }
        // first column: w_1/w_0 - x has q-coefficient 770
        assert_eq!(t.entry(1, 1), int(770));
        let expect = [
            (0, 1, "120"), (0, 2, "113400"), (0, 3, "168168000"),
            (1, 1, "770"), (1, 2, "1435650"), (1, 3, "3225308000"),
            (2, 1, "1345"), (2, 2, "3296525"), (2, 3, "8940963625"),
            (3, 1, "770"), (3, 2, "1435650"), (3, 3, "3225308000"),
            (4, 1, "120"), (4, 2, "113400"), (4, 3, "168168000"),
        ];
        for (n, d, v) in expect {
            assert_eq!(t.entry(n, d), parse(v).unwrap(), "L~_{n}^{d}");
        }
    }

    #[test]
    fn recursion_rejects_non_cy() {
        assert!(vsc_recursion(&hyper(8, 7), 2).is_err());
    }

    #[test]
    fn closed_w_paper_values() {
        // Fano N = k + 1: w(O^{N-2} O^0)_{0,1} = k * k!
        assert_eq!(closed_w(&hyper(8, 7), 6, 0, 1).unwrap(), int(7 * 5040));
        // general type N = 8, k = 9 data
        assert_eq!(closed_w(&hyper(8, 9), 0, 4, 1).unwrap() / int(9), int(34138908));
        assert_eq!(
            closed_w(&hyper(8, 9), 0, 3, 2).unwrap() / int(9),
            int(8404934443598718)
        );
    }

    #[test]
    fn closed_w_dimension_selection() {
        let g = hyper(8, 9);
        assert_eq!(g.closed_selection(1), 4);
        for (a, b) in [(1, 1), (0, 3), (2, 4)] {
            if a + b != 4 {
                assert_eq!(closed_w(&g, a, b, 1).unwrap(), rat::zero());
            }
        }
    }

    #[test]
    fn residue_matches_recursion_small() {
        let g = hyper(5, 5);
        let t = vsc_recursion(&g, 2).unwrap();
        for d in 1..=2u64 {
            for n in 0..=4u32 {
                assert_eq!(
                    ltilde_residue(&g, n, d).unwrap(),
                    t.entry(n, d),
                    "n={n} d={d}"
                );
            }
        }
    }

    #[test]
    fn ordered_partition_matches_chain() {
        let g = hyper(5, 5);
        for d in 1..=2u64 {
            for n in 0..=4u32 {
                assert_eq!(
                    ltilde_ordered_partition(&g, n, d).unwrap(),
                    ltilde_residue(&g, n, d).unwrap()
                );
            }
        }
    }

    #[test]
    fn ci_residue_matches_ci_recursion() {
        let g = GeometryData::new(9, vec![3, 3, 3]).unwrap();
        let t = vsc_recursion(&g, 2).unwrap();
        for d in 1..=2u64 {
            for n in 0..=2u32 {
                assert_eq!(
                    ltilde_residue(&g, n, d).unwrap(),
                    t.entry(n, d),
                    "CI n={n} d={d}"
                );
            }
        }
    }

    #[test]
    fn mirror_map_identification() {
        // w(O^{k-3} O^0)_{0,1}/k = L~_1^{1} for the Calabi-Yau quintic
        let g = hyper(5, 5);
        let t = vsc_recursion(&g, 1).unwrap();
        let w = closed_w(&g, 2, 0, 1).unwrap();
        assert_eq!(w * frac(1, 5), t.entry(1, 1));
    }
}
