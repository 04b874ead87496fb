use std::collections::{BTreeMap, HashMap};

use super::{normalize_betti, FreeComplex};
use crate::adjunction::{fmt_tuple, AdjunctionSystem};
use crate::complex::CellSet;
use crate::flavor::{column_tuples, ClosedIntersection, IntersectionFlavor};
use crate::linalg::Matrix;
use crate::rational::q;
use crate::{Error, Result};

/// Čech–cellular double complex. Column `p` holds the tuples of arity
/// `p + 1`; `basis[p][q]` lists `(tuple, cell)` pairs with `cell` a
/// degree-`q` cell of the tuple's domain in piece `tuple[0]`.
#[derive(Clone, Debug)]
pub struct Bicomplex {
    pub flavor: &'static str,
    pub top: usize,
    pub columns: Vec<Vec<Vec<usize>>>,
    pub domains: BTreeMap<Vec<usize>, CellSet>,
    pub basis: Vec<Vec<Vec<(Vec<usize>, usize)>>>,
    /// `delta[p][q]`: `(p, q) → (p + 1, q)`.
    pub delta: Vec<Vec<Matrix>>,
    /// `d[p][q]`: `(p, q) → (p, q + 1)`.
    pub d: Vec<Vec<Matrix>>,
}

impl Bicomplex {
    pub fn dim(&self, p: usize, q: usize) -> usize {
        self.basis.get(p).and_then(|c| c.get(q)).map_or(0, Vec::len)
    }

    /// Cellular complex of column `p`.
    pub fn column(&self, p: usize) -> FreeComplex {
        FreeComplex {
            dims: (0..=self.top).map(|q| self.dim(p, q)).collect(),
            differentials: self.d[p].clone(),
        }
    }

    /// Total complex with `D = δ + (−1)^p d`.
    pub fn total(&self) -> FreeComplex {
        let pmax = self.columns.len();
        let degrees = pmax + self.top;
        // offsets[n][p] = start of block (p, n − p) inside C^n
        let mut offsets = vec![BTreeMap::new(); degrees];
        let mut dims = vec![0; degrees];
        for (n, off) in offsets.iter_mut().enumerate() {
            for p in 0..pmax {
                if n >= p && n - p <= self.top {
                    off.insert(p, dims[n]);
                    dims[n] += self.dim(p, n - p);
                }
            }
        }
        let mut differentials = Vec::new();
        for n in 0..degrees.saturating_sub(1) {
            let mut entries = Vec::new();
            for (&p, &src) in &offsets[n] {
                let qd = n - p;
                if qd < self.top {
                    let dst = offsets[n + 1][&p];
                    let sign = if p % 2 == 0 { q(1) } else { q(-1) };
                    let m = &self.d[p][qd];
                    for r in 0..m.rows() {
                        for (c, v) in m.row(r) {
                            entries.push((dst + r, src + c, v * &sign));
                        }
                    }
                }
                if p + 1 < pmax {
                    let dst = offsets[n + 1][&(p + 1)];
                    let m = &self.delta[p][qd];
                    for r in 0..m.rows() {
                        for (c, v) in m.row(r) {
                            entries.push((dst + r, src + c, v.clone()));
                        }
                    }
                }
            }
            differentials.push(Matrix::from_triplets(dims[n + 1], dims[n], entries));
        }
        FreeComplex { dims, differentials }
    }
}

fn domains(
    system: &AdjunctionSystem,
    flavor: &dyn IntersectionFlavor,
    columns: &[Vec<Vec<usize>>],
) -> BTreeMap<Vec<usize>, CellSet> {
    columns
        .iter()
        .flatten()
        .map(|t| (t.clone(), flavor.domain(system, t)))
        .collect()
}

fn basis(system: &AdjunctionSystem, tuples: &[Vec<usize>], domains: &BTreeMap<Vec<usize>, CellSet>, q: usize) -> Vec<(Vec<usize>, usize)> {
    tuples
        .iter()
        .flat_map(|t| {
            let p = system.piece(t[0]);
            domains[t]
                .iter()
                .filter(move |&c| p.dim(c) == q)
                .map(move |c| (t.clone(), c))
        })
        .collect()
}

fn index_of(basis: &[(Vec<usize>, usize)]) -> HashMap<(Vec<usize>, usize), usize> {
    basis.iter().cloned().enumerate().map(|(k, b)| (b, k)).collect()
}

/// `(δω)_T = Σ_α (−1)^{α+1} ω_{T∖α}` restricted to the domain of `T`, with
/// values transported from piece `(T∖α)[0]` into piece `T[0]`.
fn delta_matrix(
    system: &AdjunctionSystem,
    flavor: &dyn IntersectionFlavor,
    domains: &BTreeMap<Vec<usize>, CellSet>,
    source: &[(Vec<usize>, usize)],
    target: &[(Vec<usize>, usize)],
) -> Result<Matrix> {
    let col = index_of(source);
    let mut entries = Vec::new();
    for (r, (t, c)) in target.iter().enumerate() {
        for alpha in 0..t.len() {
            let mut face = t.clone();
            face.remove(alpha);
            let (from, to) = (t[0], face[0]);
            let moved = flavor
                .transport(system, from, to, *c)
                .filter(|m| domains[&face].contains(*m))
                .ok_or_else(|| {
                    Error::precondition(format!(
                        "domain of tuple {} is not contained in the domain of {} (cell `{}`)",
                        fmt_tuple(t),
                        fmt_tuple(&face),
                        system.piece(from).id(*c)
                    ))
                })?;
            let sign = if alpha % 2 == 0 { q(-1) } else { q(1) };
            entries.push((r, col[&(face, moved)], sign));
        }
    }
    Ok(Matrix::from_triplets(target.len(), source.len(), entries))
}

fn d_matrix(system: &AdjunctionSystem, source: &[(Vec<usize>, usize)], target: &[(Vec<usize>, usize)]) -> Matrix {
    let col = index_of(source);
    let mut entries = Vec::new();
    for (r, (t, c)) in target.iter().enumerate() {
        for &(f, s) in system.piece(t[0]).faces(*c) {
            entries.push((r, col[&(t.clone(), f)], q(s.into())));
        }
    }
    Matrix::from_triplets(target.len(), source.len(), entries)
}

/// Horizontal differential from column `p` to `p + 1` in degree `q`.
pub fn cech_differential(
    system: &AdjunctionSystem,
    p: usize,
    q: usize,
    flavor: &dyn IntersectionFlavor,
) -> Result<Matrix> {
    flavor.check(system, None)?;
    let columns = column_tuples(system.len(), Some(p + 2));
    let empty = Vec::new();
    let src_tuples = columns.get(p).unwrap_or(&empty);
    let dst_tuples = columns.get(p + 1).unwrap_or(&empty);
    let doms = domains(system, flavor, &columns);
    let src = basis(system, src_tuples, &doms, q);
    let dst = basis(system, dst_tuples, &doms, q);
    delta_matrix(system, flavor, &doms, &src, &dst)
}

fn assemble(system: &AdjunctionSystem, flavor: &dyn IntersectionFlavor, max_arity: Option<usize>) -> Result<Bicomplex> {
    let top = system.top_dimension().unwrap_or(0);
    let columns = column_tuples(system.len(), max_arity);
    let doms = domains(system, flavor, &columns);
    let basis: Vec<Vec<_>> = columns
        .iter()
        .map(|ts| (0..=top).map(|q| basis(system, ts, &doms, q)).collect())
        .collect();
    let mut delta = Vec::new();
    for p in 0..columns.len().saturating_sub(1) {
        delta.push(
            (0..=top)
                .map(|q| delta_matrix(system, flavor, &doms, &basis[p][q], &basis[p + 1][q]))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    let d = basis
        .iter()
        .map(|col| (0..top).map(|q| d_matrix(system, &col[q], &col[q + 1])).collect())
        .collect();
    Ok(Bicomplex {
        flavor: flavor.name(),
        top,
        columns,
        domains: doms,
        basis,
        delta,
        d,
    })
}

/// Builds the double complex and verifies `δ² = 0`, `d² = 0`, `δd = dδ`.
pub fn build_bicomplex(
    system: &AdjunctionSystem,
    flavor: &dyn IntersectionFlavor,
    max_arity: Option<usize>,
) -> Result<Bicomplex> {
    flavor.check(system, max_arity)?;
    let b = assemble(system, flavor, max_arity)?;
    let fail = |what: &str, p: usize, q: usize| {
        Err(Error::precondition(format!("{what} fails at column {p}, degree {q}")))
    };
    for p in 0..b.columns.len() {
        for q in 0..=b.top {
            if p + 2 < b.columns.len() && !b.delta[p + 1][q].mul(&b.delta[p][q]).is_zero() {
                return fail("δ² = 0", p, q);
            }
            if q + 2 <= b.top && !b.d[p][q + 1].mul(&b.d[p][q]).is_zero() {
                return fail("d² = 0", p, q);
            }
            if p + 1 < b.columns.len() && q < b.top {
                let dd = b.d[p + 1][q].mul(&b.delta[p][q]);
                let other = b.delta[p][q + 1].mul(&b.d[p][q]);
                if dd != other {
                    return fail("δd = dδ", p, q);
                }
            }
        }
    }
    Ok(b)
}

pub fn total_betti(b: &Bicomplex) -> Vec<usize> {
    let betti = b.total().betti().expect("total differential squares to zero");
    normalize_betti(betti, b.top)
}

/// Betti numbers of the complex of global cochains, from ranks of the
/// `p = 0 → 1` closed-intersection differential stacked with `d`.
pub fn global_complex_betti(system: &AdjunctionSystem) -> Result<Vec<usize>> {
    let b = assemble(system, &ClosedIntersection, Some(2))?;
    let top = b.top;
    let delta = |q: usize| {
        b.delta
            .first()
            .map(|m| m[q].clone())
            .unwrap_or_else(|| Matrix::zeros(0, b.dim(0, q)))
    };
    let stacked = |q: usize| {
        let dq = if q < top { b.d[0][q].clone() } else { Matrix::zeros(0, b.dim(0, q)) };
        delta(q).vstack(&dq)
    };
    let mut out = Vec::new();
    for q in 0..=top {
        let cocycles = stacked(q).nullity();
        let coboundaries = if q == 0 {
            0
        } else {
            delta(q - 1).nullity() - stacked(q - 1).nullity()
        };
        out.push(cocycles - coboundaries);
    }
    Ok(normalize_betti(out, top))
}
