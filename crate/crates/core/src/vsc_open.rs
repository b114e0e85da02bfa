//! Open virtual structure constants: the disk analogue of the closed
//! two-point residues, with the half-degree disk-edge factor.

use crate::error::Result;
use crate::geometry::GeometryData;
use crate::poly::{LinForm, MPoly};
use crate::rat::{self, Rat};
use crate::residue::{edge_poly, iterated_contour, ContourSpec, PoleSet, RatFun};
use crate::vsc_closed::{compositions, e_function};

/// The disk-edge weight f^{N,k}_{2d-1}(z): a single monomial c * z^p, where p
/// may be negative for very negative first Chern class.
#[derive(Debug, Clone, PartialEq)]
pub struct FFactor {
    pub coeff: Rat,
    pub z_power: i64,
}

/// f^{N,k}_{2d-1}(z) = (2/(2d-1)) *
///   prod_a prod_{j=0}^{k_a d - (k_a+1)/2} ((k_a (2d-1) - 2j) z / (2d-1))
///   / prod_{j=1}^{d-1} ((2d-1-2j) z / (2d-1))^N.
pub fn f_factor(geom: &GeometryData, d_odd: u64) -> FFactor {
    assert!(d_odd % 2 == 1 && d_odd >= 1);
    let e = (d_odd + 1) / 2;
    let mut coeff = rat::frac(2, d_odd as i64);
    let mut z_power: i64 = 0;
    for &k in geom.degrees() {
        let k = k as u64;
        for j in 0..=(k * e - (k + 1) / 2) {
            coeff *= rat::frac((k * d_odd) as i64 - 2 * j as i64, d_odd as i64);
            z_power += 1;
        }
    }
    for j in 1..e {
        let lin = rat::frac(d_odd as i64 - 2 * j as i64, d_odd as i64);
        coeff /= rat::pow(&lin, geom.n() as i64);
        z_power -= geom.n() as i64;
    }
    FFactor { coeff, z_power }
}

/// Applies a signed monomial z_var^p to the numerator or denominator.
fn apply_power(rf: &mut RatFun, var: usize, p: i64) {
    if p >= 0 {
        rf.mul_num(&MPoly::var(rf.nvars(), var, p as u32));
    } else {
        rf.div_var_pow(var, (-p) as u32);
    }
}

/// The j-th summand of the open residue formula: variables z_0 .. z_j,
/// disk-edge factor of degree 2(d-j)-1 at z_0, a chain of j sphere edges, the
/// disk vertex factor, and midpoint vertex factors in between.
fn open_term(geom: &GeometryData, a: i64, d: u64, j: u64) -> (RatFun, ContourSpec) {
    let nv = j as usize + 1;
    let m = geom.codim();
    let kprod = rat::int(geom.degree_product() as i64);
    let e = d - j;
    let ff = f_factor(geom, 2 * e - 1);
    let mut rf = RatFun::new(nv, MPoly::one(nv));
    rf.scale(&ff.coeff);
    for i in 0..nv {
        rf.div_var_pow(i, geom.n());
    }
    apply_power(&mut rf, 0, ff.z_power);
    apply_power(&mut rf, nv - 1, a);
    for i in 1..nv {
        rf.mul_num(&edge_poly(nv, geom.degrees(), i - 1, i));
    }
    if j >= 1 {
        // disk vertex: 1/(prod_a (k_a z_0) * ((2e+1)/(2e-1) z_0 - z_1))
        rf.scale(&kprod.recip());
        rf.div_var_pow(0, m);
        let mut f = LinForm::zero(nv);
        f.set_coeff(0, rat::frac(2 * e as i64 + 1, 2 * e as i64 - 1));
        f.set_coeff(1, -rat::one());
        rf.div_factor(f, 1, None);
    }
    for i in 1..nv - 1 {
        rf.scale(&kprod.recip());
        rf.div_var_pow(i, m);
        let mut f = LinForm::zero(nv);
        f.set_coeff(i, rat::int(2));
        f.set_coeff(i - 1, -rat::one());
        f.set_coeff(i + 1, -rat::one());
        rf.div_factor(f, 1, None);
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

/// w_disk^{N,k}(O_{h^a})_{d_odd}: sum over j of the nested residues. Inputs
/// off the dimension selection give exactly zero.
pub fn open_vsc(geom: &GeometryData, a: i64, d_odd: u64) -> Result<Rat> {
    assert!(d_odd % 2 == 1 && d_odd >= 1);
    let d = (d_odd + 1) / 2;
    let mut total = rat::zero();
    for j in 0..d {
        let (rf, spec) = open_term(geom, a, d, j);
        total += iterated_contour(&rf, &spec)?;
    }
    Ok(total)
}

/// The ordered-partition representation of the same constant: sphere chains
/// indexed by compositions, E-function edges, and plain zero residues
/// everywhere. Kept as an independent route for cross-validation.
pub fn open_vsc_ordered_partition(geom: &GeometryData, a: i64, d_odd: u64) -> Result<Rat> {
    assert!(d_odd % 2 == 1 && d_odd >= 1);
    let d = (d_odd + 1) / 2;
    let m = geom.codim();
    let kprod = rat::int(geom.degree_product() as i64);
    let mut total = rat::zero();
    for j in 0..d {
        let e = d - j;
        for sigma in compositions(j) {
            let l = sigma.len();
            let nv = l + 1;
            let ff = f_factor(geom, 2 * e - 1);
            let mut rf = RatFun::new(nv, MPoly::one(nv));
            rf.scale(&ff.coeff);
            for i in 0..nv {
                rf.div_var_pow(i, geom.n());
            }
            apply_power(&mut rf, 0, ff.z_power);
            apply_power(&mut rf, nv - 1, a);
            for (idx, dj) in sigma.iter().enumerate() {
                let (num, dens) = e_function(nv, geom.n(), geom.degrees(), *dj, idx, idx + 1);
                rf.mul_num(&num);
                for (f, mult) in dens {
                    rf.div_factor(f, mult, None);
                }
                rf.scale(&rat::frac(1, *dj as i64));
            }
            if l >= 1 {
                rf.scale(&kprod.recip());
                rf.div_var_pow(0, m);
                let mut f = LinForm::zero(nv);
                f.set_coeff(
                    0,
                    rat::frac(2, 2 * e as i64 - 1) + rat::frac(1, sigma[0] as i64),
                );
                f.set_coeff(1, rat::frac(-1, sigma[0] as i64));
                rf.div_factor(f, 1, None);
            }
            for jj in 1..l {
                rf.scale(&kprod.recip());
                rf.div_var_pow(jj, m);
                let mut f = LinForm::zero(nv);
                f.set_coeff(
                    jj,
                    rat::frac(1, sigma[jj - 1] as i64) + rat::frac(1, sigma[jj] as i64),
                );
                f.set_coeff(jj - 1, rat::frac(-1, sigma[jj - 1] as i64));
                f.set_coeff(jj + 1, rat::frac(-1, sigma[jj] as i64));
                rf.div_factor(f, 1, None);
            }
            total += iterated_contour(&rf, &ContourSpec::all_zero(nv))?;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, parse};

    fn hyper(n: u32, k: u32) -> GeometryData {
        GeometryData::hypersurface(n, k).unwrap()
    }

    #[test]
    fn f_factor_leading_cases() {
        // degree-1 disk edge: 2 * k!! * z^{(k+1)/2} on the Calabi-Yau hypersurface
        let f = f_factor(&hyper(5, 5), 1);
        assert_eq!((f.coeff, f.z_power), (int(30), 3));
        let f = f_factor(&hyper(7, 7), 1);
        assert_eq!((f.coeff, f.z_power), (int(210), 4));
        // direct product evaluation at degree 3: 15!!/3^8 z^8 over (z/3)^5
        let f = f_factor(&hyper(5, 5), 3);
        assert_eq!((f.coeff, f.z_power), (int(50050), 3));
        // negative powers occur when N(d-1) outweighs the numerator
        let f = f_factor(&hyper(9, 7), 5);
        assert_eq!((f.coeff, f.z_power), (parse("4504254340836250").unwrap(), 0));
        // complete intersection form
        let ci = GeometryData::new(8, vec![3, 5]).unwrap();
        let f = f_factor(&ci, 3);
        assert_eq!((f.coeff, f.z_power), (int(5255250), 5));
    }

    #[test]
    fn open_vsc_paper_values() {
        assert_eq!(open_vsc(&hyper(7, 7), 2, 1).unwrap(), int(210));
        assert_eq!(open_vsc(&hyper(6, 5), 3, 3).unwrap(), int(8100));
        assert_eq!(open_vsc(&hyper(5, 3), 2, 1).unwrap(), int(6));
        assert_eq!(
            open_vsc(&hyper(8, 9), 1, 3).unwrap(),
            parse("90642729450").unwrap()
        );
    }

    #[test]
    fn off_dimension_vanishes() {
        assert_eq!(open_vsc(&hyper(8, 9), 2, 3).unwrap(), rat::zero());
        assert_eq!(open_vsc(&hyper(7, 7), 1, 1).unwrap(), rat::zero());
    }

    #[test]
    fn degree_one_is_single_residue() {
        // j = 0 only: residue of f_1(z) z^a / z^N
        let g = hyper(8, 7);
        let f = f_factor(&g, 1);
        assert_eq!(f.z_power, 4);
        assert_eq!(open_vsc(&g, 3, 1).unwrap(), f.coeff);
    }

    #[test]
    fn ordered_partition_agrees() {
        for (n, k, a, dodd) in [(7u32, 5u32, 2i64, 1u64), (6, 5, 3, 3), (8, 9, 1, 3)] {
            let g = hyper(n, k);
            assert_eq!(
                open_vsc_ordered_partition(&g, a, dodd).unwrap(),
                open_vsc(&g, a, dodd).unwrap(),
                "N={n} k={k}"
            );
        }
        let ci = GeometryData::new(8, vec![3, 5]).unwrap();
        assert_eq!(
            open_vsc_ordered_partition(&ci, 2, 3).unwrap(),
            open_vsc(&ci, 2, 3).unwrap()
        );
    }
}
