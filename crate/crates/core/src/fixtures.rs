//! Builders for the reference systems shipped under `fixtures/`.
//!
//! Every builder returns a system that passes validation unless its name
//! says otherwise (`broken_*`).

use std::collections::BTreeMap;

use crate::adjunction::{AdjunctionSystem, CoreAssignment, GluingMap};
use crate::complex::{Cell, CellComplex, Sign};

/// Path on the integer vertices `lo..=hi`; edge `e(k,k+1)` runs from `vk` to `v(k+1)`.
pub fn path_complex(lo: i64, hi: i64) -> CellComplex {
    let mut cells: Vec<Cell> = (lo..=hi).map(|k| Cell::new(format!("v{k}"), 0)).collect();
    for k in lo..hi {
        cells.push(Cell::with_faces(
            edge_id(k),
            1,
            [(format!("v{k}"), -1), (format!("v{}", k + 1), 1)],
        ));
    }
    CellComplex::new(cells)
}

fn edge_id(k: i64) -> String {
    format!("e({},{})", k, k + 1)
}

/// Ids of the path cells lying in the union of open intervals.
fn open_intervals(p: &CellComplex, intervals: &[(i64, i64)]) -> Vec<String> {
    let mut ids = Vec::new();
    for &(lo, hi) in intervals {
        for k in lo..hi {
            if k > lo {
                ids.push(format!("v{k}"));
            }
            ids.push(edge_id(k));
        }
    }
    ids.retain(|id| p.lookup(id).is_some());
    ids.sort();
    ids.dedup();
    ids
}

/// Cycle with `n` vertices; edge `ek` runs from `vk` to `v(k+1 mod n)`.
pub fn cycle_complex(n: usize) -> CellComplex {
    let mut cells: Vec<Cell> = (0..n).map(|k| Cell::new(format!("v{k}"), 0)).collect();
    for k in 0..n {
        cells.push(Cell::with_faces(
            format!("e{k}"),
            1,
            [(format!("v{k}"), -1), (format!("v{}", (k + 1) % n), 1)],
        ));
    }
    CellComplex::new(cells)
}

/// Oriented surface from vertex-index triangles (each listed counter-clockwise).
pub fn surface_from_triangles(
    vertex_ids: &[String],
    triangles: &[[usize; 3]],
    triangle_ids: &[String],
    edge_name: impl Fn(usize, usize) -> String,
) -> CellComplex {
    let mut cells: Vec<Cell> = vertex_ids.iter().map(|v| Cell::new(v.clone(), 0)).collect();
    let mut edges: BTreeMap<(usize, usize), String> = BTreeMap::new();
    for t in triangles {
        for k in 0..3 {
            let (a, b) = (t[k], t[(k + 1) % 3]);
            let key = (a.min(b), a.max(b));
            edges.entry(key).or_insert_with(|| edge_name(key.0, key.1));
        }
    }
    for (&(a, b), id) in &edges {
        cells.push(Cell::with_faces(
            id.clone(),
            1,
            [(vertex_ids[a].clone(), -1), (vertex_ids[b].clone(), 1)],
        ));
    }
    for (t, id) in triangles.iter().zip(triangle_ids) {
        let faces: Vec<(String, Sign)> = (0..3)
            .map(|k| {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                let sign = if a < b { 1 } else { -1 };
                (edges[&(a.min(b), a.max(b))].clone(), sign)
            })
            .collect();
        cells.push(Cell::with_faces(id.clone(), 2, faces));
    }
    CellComplex::new(cells)
}

/// Regular icosahedron, outward oriented; ids `v0..v11`, `e{a}-{b}`, `t0..t19`.
pub fn icosahedron() -> CellComplex {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut pts = Vec::new();
    for s1 in [-1.0, 1.0] {
        for s2 in [-1.0, 1.0] {
            pts.push([0.0, s1, s2 * phi]);
            pts.push([s1, s2 * phi, 0.0]);
            pts.push([s2 * phi, 0.0, s1]);
        }
    }
    let dist2 = |a: [f64; 3], b: [f64; 3]| (0..3).map(|k| (a[k] - b[k]).powi(2)).sum::<f64>();
    let adjacent = |a: usize, b: usize| (dist2(pts[a], pts[b]) - 4.0).abs() < 1e-9;
    let mut triangles = Vec::new();
    for a in 0..12 {
        for b in a + 1..12 {
            for c in b + 1..12 {
                if adjacent(a, b) && adjacent(b, c) && adjacent(a, c) {
                    let (pa, pb, pc) = (pts[a], pts[b], pts[c]);
                    let u = [pb[0] - pa[0], pb[1] - pa[1], pb[2] - pa[2]];
                    let v = [pc[0] - pa[0], pc[1] - pa[1], pc[2] - pa[2]];
                    let n = [
                        u[1] * v[2] - u[2] * v[1],
                        u[2] * v[0] - u[0] * v[2],
                        u[0] * v[1] - u[1] * v[0],
                    ];
                    let outward = (0..3).map(|k| n[k] * (pa[k] + pb[k] + pc[k])).sum::<f64>() > 0.0;
                    triangles.push(if outward { [a, b, c] } else { [a, c, b] });
                }
            }
        }
    }
    assert_eq!(triangles.len(), 20);
    let vids: Vec<String> = (0..12).map(|k| format!("v{k}")).collect();
    let tids: Vec<String> = (0..20).map(|k| format!("t{k}")).collect();
    surface_from_triangles(&vids, &triangles, &tids, |a, b| format!("e{a}-{b}"))
}

/// Flat `n × n` torus, each square split along its rising diagonal.
///
/// Edges: `h{x}_{y}` (to `x+1`), `u{x}_{y}` (to `y+1`), `d{x}_{y}` (diagonal);
/// triangles `a{x}_{y}` below and `b{x}_{y}` above the diagonal.
pub fn flat_torus(n: usize) -> CellComplex {
    let v = |x: usize, y: usize| format!("v{}_{}", x % n, y % n);
    let mut cells = Vec::new();
    for y in 0..n {
        for x in 0..n {
            cells.push(Cell::new(v(x, y), 0));
        }
    }
    for y in 0..n {
        for x in 0..n {
            cells.push(Cell::with_faces(format!("h{x}_{y}"), 1, [(v(x, y), -1), (v(x + 1, y), 1)]));
            cells.push(Cell::with_faces(format!("u{x}_{y}"), 1, [(v(x, y), -1), (v(x, y + 1), 1)]));
            cells.push(Cell::with_faces(
                format!("d{x}_{y}"),
                1,
                [(v(x, y), -1), (v(x + 1, y + 1), 1)],
            ));
        }
    }
    for y in 0..n {
        for x in 0..n {
            let (x1, y1) = ((x + 1) % n, (y + 1) % n);
            cells.push(Cell::with_faces(
                format!("a{x}_{y}"),
                2,
                [
                    (format!("h{x}_{y}"), 1),
                    (format!("u{x1}_{y}"), 1),
                    (format!("d{x}_{y}"), -1),
                ],
            ));
            cells.push(Cell::with_faces(
                format!("b{x}_{y}"),
                2,
                [
                    (format!("d{x}_{y}"), 1),
                    (format!("h{x}_{y1}"), -1),
                    (format!("u{x}_{y}"), -1),
                ],
            ));
        }
    }
    CellComplex::new(cells)
}

fn names(n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("M{k}")).collect()
}

fn two_copies(p: CellComplex, region: &[String]) -> AdjunctionSystem {
    let g = GluingMap::by_id((&p, &p), (0, 1), region).expect("fixture ids exist");
    AdjunctionSystem::new(names(2), vec![p.clone(), p], vec![g]).with_uniform_orientations()
}

fn closed_core_of(s: &AdjunctionSystem, tuple: &[usize]) -> CoreAssignment {
    let p = s.piece(tuple[0]);
    let core = p.closed_core(&s.intersection_in(tuple[0], tuple));
    [(tuple.to_vec(), core)].into_iter().collect()
}

/// Two copies of the path on `-2..2` glued away from the origin.
pub fn line_two_origins() -> AdjunctionSystem {
    let p = path_complex(-2, 2);
    let region = open_intervals(&p, &[(-3, 0), (0, 3)]);
    let s = two_copies(p, &region);
    let cores = closed_core_of(&s, &[0, 1]);
    s.with_cores(cores)
}

/// Same pieces glued only on the outer ends `x < -1` and `x > 1`.
pub fn variant_n() -> AdjunctionSystem {
    let p = path_complex(-2, 2);
    let region = open_intervals(&p, &[(-3, -1), (1, 3)]);
    let s = two_copies(p, &region);
    let cores = closed_core_of(&s, &[0, 1]);
    s.with_cores(cores)
}

/// Two paths glued along the left half `x < 0`.
pub fn branched_line() -> AdjunctionSystem {
    let p = path_complex(-2, 2);
    let region = open_intervals(&p, &[(-3, 0)]);
    two_copies(p, &region)
}

/// Two 6-cycles glued along the open arc `e0 v1 e1 v2 e2`.
pub fn glued_circles() -> AdjunctionSystem {
    let p = cycle_complex(6);
    let region: Vec<String> = ["e0", "v1", "e1", "v2", "e2"].map(String::from).to_vec();
    two_copies(p, &region)
}

/// Control: two 6-cycles identified entirely.
pub fn glued_circles_clopen() -> AdjunctionSystem {
    let p = cycle_complex(6);
    let region: Vec<String> = p.cells().iter().map(|c| c.id.clone()).collect();
    two_copies(p, &region)
}

fn unit_lengths(p: &CellComplex, length: impl Fn(&str) -> f64) -> BTreeMap<usize, f64> {
    p.cells_of_dim(1).iter().map(|&e| (e, length(p.id(e)))).collect()
}

/// Two unit icosahedra glued along the open star of `v0`.
pub fn glued_icosahedra() -> AdjunctionSystem {
    let p = icosahedron();
    let star = p.star(&[p.lookup("v0").unwrap()].into_iter().collect());
    let region = p.ids(&star);
    let lengths = unit_lengths(&p, |_| 1.0);
    two_copies(p, &region).with_edge_lengths(vec![lengths.clone(), lengths])
}

/// Two flat 3×3 tori glued along the open star of the circle `y = 1`.
pub fn glued_flat_tori() -> AdjunctionSystem {
    let p = flat_torus(3);
    let circle = (0..3).map(|x| p.lookup(&format!("v{x}_1")).unwrap()).collect();
    let region = p.ids(&p.star(&circle));
    let lengths = unit_lengths(&p, |id| if id.starts_with('d') { 2f64.sqrt() } else { 1.0 });
    two_copies(p, &region).with_edge_lengths(vec![lengths.clone(), lengths])
}

/// A single unit icosahedron.
pub fn single_icosahedron() -> AdjunctionSystem {
    let p = icosahedron();
    let lengths = unit_lengths(&p, |_| 1.0);
    AdjunctionSystem::new(names(1), vec![p], vec![])
        .with_uniform_orientations()
        .with_edge_lengths(vec![lengths])
}

fn three_paths(regions: [&[(i64, i64)]; 3]) -> AdjunctionSystem {
    let p = path_complex(-3, 3);
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let mut gluings = Vec::new();
    for (&(i, j), iv) in pairs.iter().zip(regions) {
        if iv.is_empty() {
            continue;
        }
        let ids = open_intervals(&p, iv);
        gluings.push(GluingMap::by_id((&p, &p), (i, j), &ids).expect("fixture ids exist"));
    }
    AdjunctionSystem::new(names(3), vec![p.clone(), p.clone(), p], gluings).with_uniform_orientations()
}

/// Three paths on `-3..3` with `M12 = (-3,1)`, `M13 = (-1,3)`, `M23 = (-1,1)`;
/// satisfies the closure-intersection property.
pub fn three_lines() -> AdjunctionSystem {
    three_paths([&[(-3, 1)], &[(-1, 3)], &[(-1, 1)]])
}

/// `M12 = (-3,0)` and `M13 = (0,3)` share only the frontier vertex `v0`.
pub fn three_lines_touching() -> AdjunctionSystem {
    three_paths([&[(-3, 0)], &[(0, 3)], &[]])
}

/// Line with two origins whose reverse map is glued on a different region.
pub fn broken_symmetry() -> AdjunctionSystem {
    let p = path_complex(-2, 2);
    let forward = GluingMap::by_id((&p, &p), (0, 1), &open_intervals(&p, &[(-3, 0), (0, 3)])).unwrap();
    let back = GluingMap::by_id((&p, &p), (1, 0), &open_intervals(&p, &[(-3, -1), (1, 3)])).unwrap();
    AdjunctionSystem::new(names(2), vec![p.clone(), p], vec![forward, back])
}

/// Three two-point pieces; `f13` swaps the points while `f12`, `f23` do not.
pub fn broken_cocycle() -> AdjunctionSystem {
    let p = CellComplex::new(vec![Cell::new("a", 0), Cell::new("b", 0)]);
    let all = ["a", "b"];
    let id01 = GluingMap::by_id((&p, &p), (0, 1), &all).unwrap();
    let id12 = GluingMap::by_id((&p, &p), (1, 2), &all).unwrap();
    let swap = GluingMap::from_ids((&p, &p), (0, 2), None, &[("a", "b"), ("b", "a")], &[]).unwrap();
    AdjunctionSystem::new(names(3), vec![p.clone(), p.clone(), p], vec![id01, id12, swap])
}

/// Name → builder for every fixture that ships as JSON.
pub fn catalog() -> Vec<(&'static str, fn() -> AdjunctionSystem)> {
    vec![
        ("line_two_origins", line_two_origins),
        ("variant_n", variant_n),
        ("branched_line", branched_line),
        ("glued_circles", glued_circles),
        ("glued_circles_clopen", glued_circles_clopen),
        ("glued_icosahedra", glued_icosahedra),
        ("glued_flat_tori", glued_flat_tori),
        ("single_icosahedron", single_icosahedron),
        ("three_lines", three_lines),
        ("three_lines_touching", three_lines_touching),
        ("broken_symmetry", broken_symmetry),
        ("broken_cocycle", broken_cocycle),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builders_are_valid() {
        for (name, build) in catalog() {
            let r = build().validate();
            if name.starts_with("broken") {
                assert!(!r.is_valid(), "{name} should be invalid");
            } else {
                assert!(r.is_valid(), "{name}: {r}");
            }
        }
    }

    #[test]
    fn cell_counts() {
        let ico = icosahedron();
        assert_eq!(
            (ico.cells_of_dim(0).len(), ico.cells_of_dim(1).len(), ico.cells_of_dim(2).len()),
            (12, 30, 20)
        );
        let t = flat_torus(3);
        assert_eq!((t.cells_of_dim(0).len(), t.cells_of_dim(1).len(), t.cells_of_dim(2).len()), (9, 27, 18));
        assert!(t.validate().is_valid());
        assert_eq!(line_two_origins().region(0, 1).len(), 8);
    }
}
