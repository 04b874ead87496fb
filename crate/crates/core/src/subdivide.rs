//! One round of edge subdivision on every piece of a system.

use std::collections::BTreeMap;

use crate::adjunction::{AdjunctionSystem, CoreAssignment, GluingMap};
use crate::cochain::{Cochain, GlobalCochain};
use crate::complex::{Cell, CellComplex, CellSet, Orientation};
use crate::rational::{q, Q};

/// Halves of one subdivided edge, in refined indices.
#[derive(Clone, Debug)]
struct Split {
    mid: usize,
    /// `(old endpoint, half attached to it)`
    halves: [(usize, usize); 2],
}

/// A refined system together with the cell correspondence.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub system: AdjunctionSystem,
    /// Per piece and old cell: the refined cells making it up.
    pub images: Vec<Vec<Vec<usize>>>,
    splits: Vec<BTreeMap<usize, Split>>,
}

fn refine_piece(p: &CellComplex) -> (CellComplex, Vec<Vec<usize>>, BTreeMap<usize, Split>) {
    let splittable = |e: usize| p.dim(e) == 1 && p.faces(e).len() == 2 && p.faces(e)[0].0 != p.faces(e)[1].0;
    let mut cells = Vec::new();
    for k in 0..p.len() {
        let c = p.cell(k);
        if splittable(k) {
            let [(a, sa), (b, sb)] = [p.faces(k)[0], p.faces(k)[1]];
            let mid = format!("{}#m", c.id);
            cells.push(Cell::new(mid.clone(), 0));
            cells.push(Cell::with_faces(format!("{}#1", c.id), 1, [(p.id(a).to_string(), sa), (mid.clone(), sb)]));
            cells.push(Cell::with_faces(format!("{}#2", c.id), 1, [(mid, sa), (p.id(b).to_string(), sb)]));
            continue;
        }
        let mut faces = Vec::new();
        for &(f, s) in p.faces(k) {
            if splittable(f) {
                faces.push((format!("{}#1", p.id(f)), s));
                faces.push((format!("{}#2", p.id(f)), s));
            } else {
                faces.push((p.id(f).to_string(), s));
            }
        }
        cells.push(Cell::with_faces(c.id.clone(), c.dim, faces));
    }
    let refined = CellComplex::new(cells);
    let look = |id: String| refined.lookup(&id).expect("refined cell exists");
    let mut images = Vec::new();
    let mut splits = BTreeMap::new();
    for k in 0..p.len() {
        let id = p.id(k);
        if splittable(k) {
            let (m, h1, h2) = (look(format!("{id}#m")), look(format!("{id}#1")), look(format!("{id}#2")));
            images.push(vec![h1, m, h2]);
            splits.insert(
                k,
                Split {
                    mid: m,
                    halves: [(p.faces(k)[0].0, h1), (p.faces(k)[1].0, h2)],
                },
            );
        } else {
            images.push(vec![look(id.to_string())]);
        }
    }
    (refined, images, splits)
}

fn refine_map(
    g: &GluingMap,
    images: &[Vec<Vec<usize>>],
    splits: &[BTreeMap<usize, Split>],
    map: &BTreeMap<usize, usize>,
) -> BTreeMap<usize, usize> {
    let (i, j) = (g.source, g.target);
    let mut out = BTreeMap::new();
    for (&a, &b) in map {
        match (splits[i].get(&a), splits[j].get(&b)) {
            (Some(sa), Some(sb)) => {
                out.insert(sa.mid, sb.mid);
                for &(end, half) in &sa.halves {
                    let image_end = g.closure_extension.get(&end).copied();
                    if let Some(&(_, other)) = sb.halves.iter().find(|(e, _)| Some(*e) == image_end) {
                        out.insert(half, other);
                    }
                }
            }
            _ => {
                for (x, y) in images[i][a].iter().zip(&images[j][b]) {
                    out.insert(*x, *y);
                }
            }
        }
    }
    out
}

fn image_set(images: &[Vec<usize>], set: &CellSet) -> CellSet {
    set.iter().flat_map(|k| images[k].iter().copied()).collect()
}

/// Splits every edge with two distinct endpoints at a new midpoint vertex.
/// Higher cells keep their incidence sign on both halves. Edge lengths are
/// dropped since 2-cells stop being triangles.
pub fn subdivide_edges(system: &AdjunctionSystem) -> Subdivision {
    let mut pieces = Vec::new();
    let mut images = Vec::new();
    let mut splits = Vec::new();
    for p in system.pieces() {
        let (r, im, sp) = refine_piece(p);
        pieces.push(r);
        images.push(im);
        splits.push(sp);
    }
    let gluings: Vec<GluingMap> = system
        .gluings()
        .chain(system.self_maps())
        .map(|g| {
            let cell_bijection = refine_map(g, &images, &splits, &g.cell_bijection);
            let closure_extension = refine_map(g, &images, &splits, &g.closure_extension);
            GluingMap {
                source: g.source,
                target: g.target,
                source_region: image_set(&images[g.source], &g.source_region),
                target_region: image_set(&images[g.target], &g.target_region),
                cell_bijection,
                closure_extension,
            }
        })
        .collect();
    let mut refined = AdjunctionSystem::new(system.names().to_vec(), pieces, gluings);
    if let Some(orientations) = system.orientations() {
        let o = orientations
            .iter()
            .enumerate()
            .map(|(i, o)| {
                let mut m = BTreeMap::new();
                for (k, im) in images[i].iter().enumerate() {
                    for &c in im {
                        if !splits[i].get(&k).is_some_and(|s| s.mid == c) {
                            m.insert(c, o.sign(k));
                        }
                    }
                }
                Orientation(m)
            })
            .collect();
        refined = refined.with_orientations(o);
    }
    let cores: CoreAssignment = system
        .cores()
        .iter()
        .map(|(t, core)| (t.clone(), image_set(&images[t[0]], core)))
        .collect();
    refined = refined.with_cores(cores);
    Subdivision {
        system: refined,
        images,
        splits,
    }
}

impl Subdivision {
    /// Transfers a global cochain: edge values split evenly between the
    /// halves, midpoints take the mean of the endpoint values, everything
    /// else is copied. Commutes with the coboundary from degree 0.
    pub fn cochain(&self, w: &GlobalCochain) -> GlobalCochain {
        let half = q(1) / q(2);
        let components = w
            .components
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let mut values: BTreeMap<usize, Q> = BTreeMap::new();
                for (&k, v) in &c.values {
                    match self.splits[i].get(&k) {
                        Some(s) => {
                            for &(_, h) in &s.halves {
                                values.insert(h, v * &half);
                            }
                        }
                        None => {
                            values.insert(self.images[i][k][0], v.clone());
                        }
                    }
                }
                if w.degree == 0 {
                    for s in self.splits[i].values() {
                        let mean = (c.value(s.halves[0].0) + c.value(s.halves[1].0)) * &half;
                        values.insert(s.mid, mean);
                    }
                }
                values.retain(|_, v| *v != q(0));
                Cochain {
                    owner: self.system.piece(i).all(),
                    degree: w.degree,
                    values,
                }
            })
            .collect();
        GlobalCochain {
            degree: w.degree,
            components,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::integrate;
    use crate::fixtures;

    #[test]
    fn refined_fixtures_stay_valid() {
        for (name, build) in fixtures::catalog() {
            if name.starts_with("broken") {
                continue;
            }
            let s = build();
            let r = subdivide_edges(&s);
            assert!(r.system.validate().is_valid(), "{name}: {}", r.system.validate());
            // a frontier edge contributes its two halves and its midpoint
            let expected: usize = s
                .hausdorff_pairs()
                .iter()
                .map(|h| r.images[h.left.0][s.piece(h.left.0).lookup(&h.left.1).unwrap()].len())
                .sum();
            assert_eq!(r.system.hausdorff_pairs().len(), expected, "{name}");
        }
    }

    #[test]
    fn integral_is_unchanged() {
        let s = fixtures::glued_circles();
        let w = GlobalCochain::from_closure_classes(&s, 1, |k| q(k as i64 - 4));
        let r = subdivide_edges(&s);
        assert_eq!(integrate(&s, &w).unwrap(), integrate(&r.system, &r.cochain(&w)).unwrap());
    }

    #[test]
    fn transfer_commutes_with_coboundary() {
        let s = fixtures::line_two_origins();
        let w = GlobalCochain::from_closure_classes(&s, 0, |k| q(k as i64 * 3 - 1));
        let r = subdivide_edges(&s);
        assert_eq!(r.cochain(&w.coboundary(&s).unwrap()), r.cochain(&w).coboundary(&r.system).unwrap());
    }
}
