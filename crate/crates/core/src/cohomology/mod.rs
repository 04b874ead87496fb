//! Exact Betti numbers, Čech bicomplexes and the reports built on them.

mod bicomplex;
mod reports;

pub use bicomplex::{build_bicomplex, cech_differential, global_complex_betti, total_betti, Bicomplex};
pub use reports::{
    de_rham_compare, euler_inclusion_exclusion, mv_report, row_exactness_check, CompareReport, MvReport, MvRow,
    RowExactness, Verdict,
};

use crate::complex::CellComplex;
use crate::linalg::Matrix;
use crate::{Error, Result};

/// Cochain complex `C^0 → C^1 → …` of finite-dimensional rational spaces.
/// `differentials[k]` maps degree `k` to `k + 1`.
#[derive(Clone, Debug)]
pub struct FreeComplex {
    pub dims: Vec<usize>,
    pub differentials: Vec<Matrix>,
}

impl FreeComplex {
    pub fn new(dims: Vec<usize>, differentials: Vec<Matrix>) -> Result<Self> {
        for (k, d) in differentials.iter().enumerate() {
            let rows = dims.get(k + 1).copied().unwrap_or(0);
            if d.cols() != dims[k] || d.rows() != rows {
                return Err(Error::precondition(format!("differential {k} has the wrong shape")));
            }
        }
        Ok(Self { dims, differentials })
    }

    /// Cellular cochain complex of a whole complex.
    pub fn cellular(complex: &CellComplex) -> Self {
        let top = complex.top_dimension().map_or(0, |t| t + 1);
        let dims: Vec<usize> = (0..top).map(|q| complex.cells_of_dim(q).len()).collect();
        let index = |q: usize, c: usize| complex.cells_of_dim(q).iter().position(|&x| x == c).unwrap();
        let differentials = (0..top.saturating_sub(1))
            .map(|q| {
                let entries = complex.cells_of_dim(q + 1).iter().enumerate().flat_map(|(r, &c)| {
                    complex
                        .faces(c)
                        .iter()
                        .map(move |&(f, s)| (r, index(q, f), crate::rational::q(s.into())))
                });
                Matrix::from_triplets(dims[q + 1], dims[q], entries)
            })
            .collect();
        Self { dims, differentials }
    }

    fn differential(&self, k: usize) -> Option<&Matrix> {
        self.differentials.get(k)
    }

    /// `b_q = dim ker d_q − rank d_{q−1}`; errors when `d_{q+1} d_q ≠ 0`.
    pub fn betti(&self) -> Result<Vec<usize>> {
        for k in 1..self.differentials.len() {
            if !self.differentials[k].mul(&self.differentials[k - 1]).is_zero() {
                return Err(Error::NotAComplex(k - 1));
            }
        }
        let ranks: Vec<usize> = (0..self.dims.len())
            .map(|k| self.differential(k).map_or(0, Matrix::rank))
            .collect();
        Ok((0..self.dims.len())
            .map(|q| self.dims[q] - ranks[q] - if q > 0 { ranks[q - 1] } else { 0 })
            .collect())
    }

    pub fn euler_characteristic(&self) -> i64 {
        alternating(&self.dims)
    }
}

pub(crate) fn alternating(v: &[usize]) -> i64 {
    v.iter()
        .enumerate()
        .map(|(q, &b)| if q % 2 == 0 { b as i64 } else { -(b as i64) })
        .sum()
}

/// Pads or trims to `max(top + 1, last nonzero + 1)` entries.
pub(crate) fn normalize_betti(mut v: Vec<usize>, top: usize) -> Vec<usize> {
    let last = v.iter().rposition(|&b| b != 0).map_or(0, |k| k + 1);
    v.resize(last.max(top + 1), 0);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn circle_and_sphere() {
        assert_eq!(FreeComplex::cellular(&fixtures::cycle_complex(3)).betti().unwrap(), vec![1, 1]);
        assert_eq!(FreeComplex::cellular(&fixtures::icosahedron()).betti().unwrap(), vec![1, 0, 1]);
        assert_eq!(FreeComplex::cellular(&fixtures::flat_torus(3)).betti().unwrap(), vec![1, 2, 1]);
    }

    #[test]
    fn two_points() {
        let c = FreeComplex::new(vec![2], vec![]).unwrap();
        assert_eq!(c.betti().unwrap(), vec![2]);
    }

    #[test]
    fn rank_nullity_identity() {
        let c = FreeComplex::cellular(&fixtures::icosahedron());
        assert_eq!(c.euler_characteristic(), alternating(&c.betti().unwrap()));
    }

    #[test]
    fn non_complex_is_rejected() {
        let one = crate::rational::q(1);
        let d0 = Matrix::from_triplets(1, 1, [(0, 0, one.clone())]);
        let d1 = Matrix::from_triplets(1, 1, [(0, 0, one)]);
        let c = FreeComplex::new(vec![1, 1, 1], vec![d0, d1]).unwrap();
        assert!(matches!(c.betti(), Err(Error::NotAComplex(0))));
        assert!(FreeComplex::new(vec![1, 2], vec![Matrix::zeros(1, 1)]).is_err());
    }

    #[test]
    fn normalization() {
        assert_eq!(normalize_betti(vec![1, 0, 0, 0], 1), vec![1, 0]);
        assert_eq!(normalize_betti(vec![1], 2), vec![1, 0, 0]);
        assert_eq!(normalize_betti(vec![1, 0, 2, 0], 0), vec![1, 0, 2]);
    }
}
