//! Sparse matrices over ℚ with exact Gaussian elimination.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::rational::Q;

type Row = Vec<(usize, Q)>;

/// Row-major sparse matrix; each row holds sorted `(column, nonzero)` pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Row>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn from_triplets(rows: usize, cols: usize, entries: impl IntoIterator<Item = (usize, usize, Q)>) -> Self {
        let mut acc: Vec<BTreeMap<usize, Q>> = vec![BTreeMap::new(); rows];
        for (r, c, v) in entries {
            assert!(r < rows && c < cols, "entry ({r},{c}) outside {rows}x{cols}");
            let slot = acc[r].entry(c).or_insert_with(Q::zero);
            *slot += v;
        }
        let data = acc
            .into_iter()
            .map(|m| m.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        Self { rows, cols, data }
    }

    /// Builds from dense column vectors of equal length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Q>]) -> Self {
        let entries = columns.iter().enumerate().flat_map(|(c, col)| {
            assert_eq!(col.len(), rows);
            col.iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(move |(r, v)| (r, c, v.clone()))
        });
        Self::from_triplets(rows, columns.len(), entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[(usize, Q)] {
        &self.data[r]
    }

    pub fn get(&self, r: usize, c: usize) -> Q {
        self.data[r]
            .binary_search_by_key(&c, |(k, _)| *k)
            .map_or_else(|_| Q::zero(), |i| self.data[r][i].1.clone())
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
                for (k, a) in row {
                    for (c, b) in &other.data[*k] {
                        *acc.entry(*c).or_insert_with(Q::zero) += a * b;
                    }
                }
                acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        Matrix {
            rows: self.rows,
            cols: other.cols,
            data,
        }
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len());
        self.data
            .iter()
            .map(|row| row.iter().fold(Q::zero(), |acc, (c, a)| acc + a * &v[*c]))
            .collect()
    }

    pub fn scale(&self, s: &Q) -> Matrix {
        if s.is_zero() {
            return Matrix::zeros(self.rows, self.cols);
        }
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|r| r.iter().map(|(c, v)| (*c, v * s)).collect())
                .collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| axpy(a, &Q::one(), b))
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// `[self; other]`
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// `[self | other]`
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                let mut r = a.clone();
                r.extend(b.iter().map(|(c, v)| (c + self.cols, v.clone())));
                r
            })
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols + other.cols,
            data,
        }
    }

    pub fn transpose(&self) -> Matrix {
        let entries = self
            .data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (*c, r, v.clone())));
        Matrix::from_triplets(self.cols, self.rows, entries)
    }

    /// Rank by forward elimination on leading entries.
    pub fn rank(&self) -> usize {
        let mut pivots: BTreeMap<usize, Row> = BTreeMap::new();
        for row in &self.data {
            let mut r = row.clone();
            while let Some((lead, a)) = r.first().cloned() {
                match pivots.get(&lead) {
                    Some(p) => r = axpy(&r, &-a, p),
                    None => {
                        let inv = a.recip();
                        let r: Row = r.into_iter().map(|(c, v)| (c, v * &inv)).collect();
                        pivots.insert(lead, r);
                        break;
                    }
                }
            }
        }
        pivots.len()
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Reduced row echelon form: `(pivot column, row)` with unit pivots,
    /// every pivot column cleared in all other rows.
    pub fn rref(&self) -> Vec<(usize, Row)> {
        let mut pivots: BTreeMap<usize, Row> = BTreeMap::new();
        for row in &self.data {
            let mut r = row.clone();
            while let Some((lead, a)) = r.first().cloned() {
                match pivots.get(&lead) {
                    Some(p) => r = axpy(&r, &-a, p),
                    None => {
                        let inv = a.recip();
                        pivots.insert(lead, r.into_iter().map(|(c, v)| (c, v * &inv)).collect());
                        break;
                    }
                }
            }
        }
        // back substitution, last pivot first
        let cols: Vec<usize> = pivots.keys().rev().copied().collect();
        for (k, &pc) in cols.iter().enumerate() {
            let pivot_row = pivots[&pc].clone();
            for &other in &cols[k + 1..] {
                let r = &pivots[&other];
                if let Ok(i) = r.binary_search_by_key(&pc, |(c, _)| *c) {
                    let a = r[i].1.clone();
                    let updated = axpy(r, &-a, &pivot_row);
                    pivots.insert(other, updated);
                }
            }
        }
        pivots.into_iter().collect()
    }

    /// Basis of the right null space as dense vectors.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let rref = self.rref();
        let pivot_cols: BTreeMap<usize, usize> = rref.iter().enumerate().map(|(k, (c, _))| (*c, k)).collect();
        (0..self.cols)
            .filter(|c| !pivot_cols.contains_key(c))
            .map(|free| {
                let mut v = vec![Q::zero(); self.cols];
                v[free] = Q::one();
                for (pc, row) in &rref {
                    if let Ok(i) = row.binary_search_by_key(&free, |(c, _)| *c) {
                        v[*pc] = -row[i].1.clone();
                    }
                }
                v
            })
            .collect()
    }
}

/// `x + a·y` for sorted sparse rows.
fn axpy(x: &[(usize, Q)], a: &Q, y: &[(usize, Q)]) -> Row {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j == y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i == x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push(x[i].clone());
            i += 1;
        } else if take_y {
            let v = a * &y[j].1;
            if !v.is_zero() {
                out.push((y[j].0, v));
            }
            j += 1;
        } else {
            let v = &x[i].1 + a * &y[j].1;
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}
