//! Target geometries: Fermat hypersurfaces and complete intersections in
//! projective space, with real Lagrangian boundary condition.

use crate::error::{Error, Result};

/// A degree-(k_1, ..., k_m) Fermat complete intersection in CP^{N-1}.
/// All defining degrees are odd; the hypersurface case is m = 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeometryData {
    n: u32,
    degrees: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeometryClass {
    CalabiYau,
    Fano,
    GeneralType,
}

impl GeometryData {
    pub fn new(n: u32, degrees: Vec<u32>) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::UnsupportedGeometry("empty degree list".into()));
        }
        if degrees.iter().any(|k| k % 2 == 0 || *k < 3) {
            return Err(Error::UnsupportedGeometry(
                "all defining degrees must be odd and >= 3".into(),
            ));
        }
        if (degrees.len() as u32) + 2 > n {
            return Err(Error::UnsupportedGeometry(
                "ambient dimension too small for the degree list".into(),
            ));
        }
        let mut degrees = degrees;
        degrees.sort_unstable();
        Ok(GeometryData { n, degrees })
    }

    pub fn hypersurface(n: u32, k: u32) -> Result<Self> {
        Self::new(n, vec![k])
    }

    /// Ambient CP^{N-1} parameter N.
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    /// Number of defining equations m.
    pub fn codim(&self) -> u32 {
        self.degrees.len() as u32
    }

    pub fn total_degree(&self) -> u32 {
        self.degrees.iter().sum()
    }

    pub fn degree_product(&self) -> u64 {
        self.degrees.iter().map(|k| *k as u64).product()
    }

    /// Complex dimension N - 1 - m of the target.
    pub fn dim(&self) -> u32 {
        self.n - 1 - self.codim()
    }

    pub fn class(&self) -> GeometryClass {
        let total = self.total_degree();
        if total == self.n {
            GeometryClass::CalabiYau
        } else if total < self.n {
            GeometryClass::Fano
        } else {
            GeometryClass::GeneralType
        }
    }

    pub fn is_calabi_yau(&self) -> bool {
        self.class() == GeometryClass::CalabiYau
    }

    /// First-Chern coefficient N - sum(k_a) per unit degree.
    pub fn fano_index(&self) -> i64 {
        self.n as i64 - self.total_degree() as i64
    }

    /// Order of the hypergeometric differential operator: N - m.
    pub fn pf_order(&self) -> u32 {
        self.n - self.codim()
    }

    /// Length of the derivative chain in the open generating function:
    /// (dim - 1)/2 for odd-dimensional targets.
    pub fn chain_length(&self) -> Result<u32> {
        let dim = self.dim();
        if dim % 2 == 0 {
            return Err(Error::UnsupportedGeometry(format!(
                "open B-model chain needs odd target dimension, got {dim}"
            )));
        }
        Ok((dim - 1) / 2)
    }

    /// Covering parameter D with target dimension 2D + 3.
    pub fn covering_d(&self) -> Result<u32> {
        let dim = self.dim();
        if dim % 2 == 0 || dim < 3 {
            return Err(Error::UnsupportedGeometry(format!(
                "multiple covering formula needs odd dimension >= 3, got {dim}"
            )));
        }
        Ok((dim - 3) / 2)
    }

    /// The cohomology power selected by the dimension axiom for a 1-point disk
    /// amplitude of odd degree `d_odd`: a = ((N - sum k)(2d-1) + N - m - 2)/2.
    /// None when that is not a non-negative integer.
    pub fn disk_insertion_power(&self, d_odd: u64) -> Option<u32> {
        let num = self.fano_index() * d_odd as i64 + self.n as i64 - self.codim() as i64 - 2;
        if num < 0 || num % 2 != 0 {
            None
        } else {
            Some((num / 2) as u32)
        }
    }

    /// Selection rule for the closed two-point function: a + b must equal
    /// N - 2 - m + (N - sum k) d.
    pub fn closed_selection(&self, d: u64) -> i64 {
        self.n as i64 - 2 - self.codim() as i64 + self.fano_index() * d as i64
    }
}
