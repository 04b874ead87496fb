//! Independent oracles shared by the integration and acceptance tests.
//! Nothing here uses the library's linear algebra or bicomplex code.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::Rng;

use nonhaus_core::adjunction::{AdjunctionSystem, GluingMap};
use nonhaus_core::cochain::GlobalCochain;
use nonhaus_core::complex::{Cell, CellComplex, CellSet};
use nonhaus_core::fixtures;
use nonhaus_core::rational::Q;

/// Dense Gaussian elimination over the rationals.
pub fn dense_rank(mut rows: Vec<Vec<Q>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank][c].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let f = rows[r][c].clone() / &pivot;
                for k in c..cols {
                    let sub = rows[rank][k].clone() * &f;
                    rows[r][k] -= sub;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Betti numbers from dense boundary data: `bd[q]` lists, for each
/// `q + 1` cell, `(q-cell index, sign)`.
pub fn betti_dense(dims: &[usize], bd: &[Vec<Vec<(usize, i64)>>]) -> Vec<usize> {
    let ranks: Vec<usize> = (0..dims.len())
        .map(|q| {
            if q + 1 >= dims.len() {
                return 0;
            }
            let rows: Vec<Vec<Q>> = bd[q]
                .iter()
                .map(|faces| {
                    let mut row = vec![Q::zero(); dims[q]];
                    for &(f, s) in faces {
                        row[f] += Q::from_integer(s.into());
                    }
                    row
                })
                .collect();
            dense_rank(rows)
        })
        .collect();
    (0..dims.len())
        .map(|q| dims[q] - ranks[q] - if q > 0 { ranks[q - 1] } else { 0 })
        .collect()
}

pub fn normalize(mut v: Vec<usize>, top: usize) -> Vec<usize> {
    let last = v.iter().rposition(|&b| b != 0).map_or(0, |k| k + 1);
    v.resize(last.max(top + 1), 0);
    v
}

/// Generic complex given by labelled cells with signed faces.
#[derive(Default)]
pub struct Builder {
    index: BTreeMap<String, (usize, usize)>,
    dims: Vec<usize>,
    faces: Vec<Vec<Vec<(usize, i64)>>>,
}

impl Builder {
    pub fn add(&mut self, id: String, dim: usize, faces: &[(String, i64)]) {
        if self.index.contains_key(&id) {
            return;
        }
        while self.dims.len() <= dim {
            self.dims.push(0);
            self.faces.push(Vec::new());
        }
        let k = self.dims[dim];
        self.dims[dim] += 1;
        self.index.insert(id, (dim, k));
        let mut row = Vec::new();
        for (f, s) in faces {
            let (fd, fk) = self.index[f];
            assert_eq!(fd + 1, dim);
            row.push((fk, *s));
        }
        if dim > 0 {
            self.faces[dim - 1].push(row);
        }
    }

    pub fn betti(&self) -> Vec<usize> {
        betti_dense(&self.dims, &self.faces)
    }
}

fn cells_by_dim(p: &CellComplex) -> Vec<usize> {
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by_key(|&k| p.dim(k));
    order
}

/// Quotient of the disjoint union of pieces by closure classes: the complex
/// whose cochains are exactly the global cochains.
pub fn closure_quotient_betti(s: &AdjunctionSystem) -> Vec<usize> {
    let classes = s.closure_cell_classes();
    let label = |p: usize, c: usize| format!("class{}", classes.class_of(p, c).unwrap());
    let mut b = Builder::default();
    let mut seen_faces: BTreeMap<String, Vec<(String, i64)>> = BTreeMap::new();
    let mut all: Vec<(usize, usize)> = Vec::new();
    for (i, p) in s.pieces().iter().enumerate() {
        for c in cells_by_dim(p) {
            all.push((i, c));
        }
    }
    all.sort_by_key(|&(i, c)| s.piece(i).dim(c));
    for (i, c) in all {
        let p = s.piece(i);
        let mut faces: Vec<(String, i64)> = p.faces(c).iter().map(|&(f, sg)| (label(i, f), sg as i64)).collect();
        faces.sort();
        let id = label(i, c);
        if let Some(prev) = seen_faces.get(&id) {
            assert_eq!(prev, &faces, "boundary depends on the representative of {id}");
            continue;
        }
        seen_faces.insert(id.clone(), faces.clone());
        b.add(id, p.dim(c), &faces);
    }
    normalize(b.betti(), s.top_dimension().unwrap_or(0))
}

/// Double mapping cylinder `M1 ∪ (K × I) ∪ M2` over the open-intersection
/// core `K` (declared, else the largest subcomplex of the region).
pub fn mapping_cylinder_betti(s: &AdjunctionSystem) -> Vec<usize> {
    assert_eq!(s.len(), 2);
    let p1 = s.piece(0);
    let region = s.region(0, 1);
    let core = s
        .cores()
        .get(&vec![0, 1])
        .cloned()
        .unwrap_or_else(|| p1.closed_core(&region));
    let g = s.gluing(0, 1);
    let mut b = Builder::default();
    for (i, p) in s.pieces().iter().enumerate() {
        for c in cells_by_dim(p) {
            let faces: Vec<(String, i64)> = p.faces(c).iter().map(|&(f, sg)| (format!("{i}:{}", p.id(f)), sg as i64)).collect();
            b.add(format!("{i}:{}", p.id(c)), p.dim(c), &faces);
        }
    }
    for c in cells_by_dim(p1) {
        if !core.contains(c) {
            continue;
        }
        let k = p1.dim(c);
        let image = g.unwrap().apply(c).unwrap();
        let sign: i64 = if k.is_multiple_of(2) { 1 } else { -1 };
        let mut faces = vec![
            (format!("1:{}", s.piece(1).id(image)), sign),
            (format!("0:{}", p1.id(c)), -sign),
        ];
        for &(f, sg) in p1.faces(c) {
            faces.push((format!("cyl:{}", p1.id(f)), sg as i64));
        }
        b.add(format!("cyl:{}", p1.id(c)), k + 1, &faces);
    }
    normalize(b.betti(), s.top_dimension().unwrap_or(0))
}

pub fn valid_fixtures() -> Vec<(&'static str, AdjunctionSystem)> {
    fixtures::catalog()
        .into_iter()
        .filter(|(n, _)| !n.starts_with("broken"))
        .map(|(n, f)| (n, f()))
        .collect()
}

pub fn random_q(rng: &mut impl Rng) -> Q {
    Q::new(rng.gen_range(-6i64..=6).into(), rng.gen_range(1i64..=4).into())
}

pub fn random_global(rng: &mut impl Rng, s: &AdjunctionSystem, degree: usize) -> GlobalCochain {
    GlobalCochain::from_closure_classes(s, degree, |_| random_q(rng))
}

/// A random simplicial block on at most four vertices; ids carry the block
/// name so blocks never collide.
fn random_block(rng: &mut impl Rng, name: &str) -> Vec<Cell> {
    let n = rng.gen_range(1..=4);
    let v = |a: usize| format!("{name}:v{a}");
    let e = |a: usize, b: usize| format!("{name}:e{a}{b}");
    let mut cells: Vec<Cell> = (0..n).map(|a| Cell::new(v(a), 0)).collect();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(0.6) {
                cells.push(Cell::with_faces(e(a, b), 1, [(v(a), -1), (v(b), 1)]));
                edges.push((a, b));
            }
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let all = [(a, b), (a, c), (b, c)].iter().all(|x| edges.contains(x));
                if all && rng.gen_bool(0.5) {
                    cells.push(Cell::with_faces(
                        format!("{name}:t{a}{b}{c}"),
                        2,
                        [(e(b, c), 1), (e(a, c), -1), (e(a, b), 1)],
                    ));
                }
            }
        }
    }
    cells
}

/// Pieces drawn from a pool of blocks and glued by id along shared blocks,
/// so every region is open and closed. Returns the system and the Betti
/// numbers of the union of the blocks in use, built directly.
pub fn random_clopen_system(rng: &mut impl Rng) -> (AdjunctionSystem, Vec<usize>) {
    let pool: Vec<Vec<Cell>> = (0..rng.gen_range(2..=5)).map(|k| random_block(rng, &format!("b{k}"))).collect();
    let npieces = rng.gen_range(1..=3);
    let mut choice: Vec<Vec<usize>> = Vec::new();
    for _ in 0..npieces {
        let mut picked = Vec::new();
        let mut size = 0;
        for (k, block) in pool.iter().enumerate() {
            if rng.gen_bool(0.6) && size + block.len() <= 40 {
                picked.push(k);
                size += block.len();
            }
        }
        if picked.is_empty() {
            picked.push(rng.gen_range(0..pool.len()));
        }
        choice.push(picked);
    }
    let pieces: Vec<CellComplex> = choice
        .iter()
        .map(|ks| CellComplex::new(ks.iter().flat_map(|&k| pool[k].clone()).collect()))
        .collect();
    let mut gluings = Vec::new();
    for i in 0..npieces {
        for j in 0..npieces {
            if i == j {
                continue;
            }
            let shared: Vec<String> = choice[i]
                .iter()
                .filter(|k| choice[j].contains(k))
                .flat_map(|&k| pool[k].iter().map(|c| c.id.clone()))
                .collect();
            if !shared.is_empty() {
                gluings.push(GluingMap::by_id((&pieces[i], &pieces[j]), (i, j), &shared).unwrap());
            }
        }
    }
    let names = (1..=npieces).map(|k| format!("M{k}")).collect();
    let system = AdjunctionSystem::new(names, pieces, gluings);

    let mut used: Vec<usize> = choice.concat();
    used.sort();
    used.dedup();
    let mut b = Builder::default();
    let mut cells: Vec<&Cell> = used.iter().flat_map(|&k| pool[k].iter()).collect();
    cells.sort_by_key(|c| c.dim);
    for c in cells {
        let faces: Vec<(String, i64)> = c.faces.iter().map(|(f, s)| (f.clone(), *s as i64)).collect();
        b.add(c.id.clone(), c.dim, &faces);
    }
    let top = system.top_dimension().unwrap_or(0);
    (system, normalize(b.betti(), top))
}

pub fn one() -> Q {
    Q::one()
}

pub fn set_of(p: &CellComplex, ids: &[&str]) -> CellSet {
    p.cell_set(ids.iter().copied()).unwrap()
}
