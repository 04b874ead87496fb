//! Piecewise-flat metrics on triangulated surfaces: corner angles, angle
//! defects, frontier turning angles and the Gauss-Bonnet ledger.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::Serialize;

use crate::adjunction::{tuples, AdjunctionSystem};
use crate::cohomology::euler_inclusion_exclusion;
use crate::complex::{CellComplex, CellSet};
use crate::flavor::{ClosedIntersection, IntersectionFlavor};
use crate::validation::ValidationReport;
use crate::{Error, Result};

pub const TOLERANCE: f64 = 1e-9;

/// Angles opposite the sides `a`, `b`, `c`; half-angle form for accuracy on
/// thin triangles.
pub fn corner_angles(a: f64, b: f64, c: f64) -> [f64; 3] {
    let s = (a + b + c) / 2.0;
    let angle = |x: f64, y: f64, z: f64| 2.0 * ((s - y) * (s - z)).sqrt().atan2((s * (s - x)).sqrt());
    [angle(a, b, c), angle(b, c, a), angle(c, a, b)]
}

fn strict_triangle(a: f64, b: f64, c: f64) -> bool {
    a > 0.0 && b > 0.0 && c > 0.0 && a + b > c && b + c > a && c + a > b
}

/// A triangulated piece together with its edge lengths.
#[derive(Clone, Copy, Debug)]
pub struct MetricComplex<'a> {
    pub base: &'a CellComplex,
    pub lengths: &'a BTreeMap<usize, f64>,
}

impl<'a> MetricComplex<'a> {
    pub fn new(base: &'a CellComplex, lengths: &'a BTreeMap<usize, f64>) -> Self {
        Self { base, lengths }
    }

    /// `(vertex, opposite edge)` for the three corners of a triangle.
    fn corners(&self, t: usize) -> Option<[(usize, usize); 3]> {
        let p = self.base;
        let edges: Vec<usize> = p.faces(t).iter().map(|&(e, _)| e).collect();
        if p.dim(t) != 2 || edges.len() != 3 || edges.iter().any(|&e| p.dim(e) != 1) {
            return None;
        }
        let ends = |e: usize| -> Vec<usize> { p.faces(e).iter().map(|&(v, _)| v).collect() };
        let mut out = [(0, 0); 3];
        for (k, &e) in edges.iter().enumerate() {
            let (a, b) = (ends(edges[(k + 1) % 3]), ends(edges[(k + 2) % 3]));
            let shared: Vec<usize> = a.iter().copied().filter(|v| b.contains(v)).collect();
            if a.len() != 2 || b.len() != 2 || shared.len() != 1 || ends(e).contains(&shared[0]) {
                return None;
            }
            out[k] = (shared[0], e);
        }
        Some(out)
    }

    /// Corner angle of triangle `t` at each of its vertices.
    pub fn triangle_angles(&self, t: usize) -> Result<Vec<(usize, f64)>> {
        let corners = self
            .corners(t)
            .ok_or_else(|| Error::precondition(format!("`{}` is not a triangle", self.base.id(t))))?;
        let len = |e: usize| {
            self.lengths
                .get(&e)
                .copied()
                .ok_or_else(|| Error::precondition(format!("edge `{}` has no length", self.base.id(e))))
        };
        let [a, b, c] = [len(corners[0].1)?, len(corners[1].1)?, len(corners[2].1)?];
        let angles = corner_angles(a, b, c);
        Ok(corners.iter().zip(angles).map(|(&(v, _), x)| (v, x)).collect())
    }

    /// Sum of corner angles at each vertex over the triangles in `domain`.
    pub fn angle_sums(&self, domain: &CellSet) -> Result<BTreeMap<usize, f64>> {
        let mut sums = BTreeMap::new();
        for &t in self.base.cells_of_dim(2) {
            if domain.contains(t) {
                for (v, x) in self.triangle_angles(t)? {
                    *sums.entry(v).or_insert(0.0) += x;
                }
            }
        }
        Ok(sums)
    }
}

/// Triangle inequalities and length preservation by every gluing map,
/// frontier edges included.
pub fn validate_metric(system: &AdjunctionSystem) -> ValidationReport {
    let mut report = ValidationReport::new();
    let Some(lengths) = system.edge_lengths() else {
        report.push("metric", "system", "no edge lengths");
        return report;
    };
    for (i, p) in system.pieces().iter().enumerate() {
        let m = MetricComplex::new(p, &lengths[i]);
        let loc = |c: usize| format!("piece {} cell {}", i + 1, p.id(c));
        for &e in p.cells_of_dim(1) {
            match lengths[i].get(&e) {
                None => report.push("metric", loc(e), "edge has no length"),
                Some(&l) if !(l.is_finite() && l > 0.0) => report.push("metric", loc(e), "edge length must be positive"),
                _ => {}
            }
        }
        if p.top_dimension() != Some(2) {
            report.push("triangulation", format!("piece {}", i + 1), "piece is not two-dimensional");
        }
        for &t in p.cells_of_dim(2) {
            let Some(corners) = m.corners(t) else {
                report.push("triangulation", loc(t), "2-cell is not a triangle");
                continue;
            };
            let ls: Vec<f64> = corners.iter().map(|&(_, e)| lengths[i].get(&e).copied().unwrap_or(0.0)).collect();
            if !strict_triangle(ls[0], ls[1], ls[2]) {
                report.push(
                    "triangle-inequality",
                    loc(t),
                    format!("side lengths {}, {}, {} violate the strict triangle inequality", ls[0], ls[1], ls[2]),
                );
            }
        }
    }
    for g in system.gluings() {
        let (i, j) = (g.source, g.target);
        if i > j {
            continue;
        }
        let p = system.piece(i);
        for e in p.closure(&g.source_region).iter().filter(|&e| p.dim(e) == 1) {
            let Some(f) = g.apply_closure(e) else { continue };
            let (a, b) = (lengths[i].get(&e), lengths[j].get(&f));
            if let (Some(a), Some(b)) = (a, b) {
                if a != b {
                    report.push(
                        "isometry",
                        format!("piece {} cell {} -> piece {} cell {}", i + 1, p.id(e), j + 1, system.piece(j).id(f)),
                        format!("glued edge lengths differ: {a} vs {b}"),
                    );
                }
            }
        }
    }
    report
}

#[derive(Clone, Debug, Serialize)]
pub struct VertexDefect {
    pub piece: usize,
    pub vertex: String,
    pub defect: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Turning {
    pub vertex: String,
    pub angle: f64,
}

/// Curvature bookkeeping for one tuple's closed domain.
#[derive(Clone, Debug, Serialize)]
pub struct TupleLedger {
    pub tuple: Vec<usize>,
    /// Euler characteristic of the domain.
    pub chi: i64,
    pub interior_defects: f64,
    pub turning: Vec<Turning>,
    pub turning_total: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CurvatureLedger {
    /// One entry per glued vertex class; doubled frontier vertices appear
    /// once per copy.
    pub vertex_defects: Vec<VertexDefect>,
    pub tuples: Vec<TupleLedger>,
}

fn metric<'a>(system: &'a AdjunctionSystem, i: usize) -> Result<MetricComplex<'a>> {
    let lengths = system
        .edge_lengths()
        .ok_or_else(|| Error::precondition("system has no edge lengths"))?;
    Ok(MetricComplex::new(system.piece(i), &lengths[i]))
}

fn check_closed_surfaces(system: &AdjunctionSystem) -> Result<()> {
    validate_metric(system).into_result()?;
    for (i, p) in system.pieces().iter().enumerate() {
        for &e in p.cells_of_dim(1) {
            let n = p.cofaces(e).len();
            if n != 2 {
                return Err(Error::precondition(format!(
                    "piece {} is not a closed surface: edge `{}` bounds {n} triangles",
                    i + 1,
                    p.id(e)
                )));
            }
        }
        for &v in p.cells_of_dim(0) {
            if p.cofaces(v).is_empty() {
                return Err(Error::precondition(format!("piece {} has an isolated vertex `{}`", i + 1, p.id(v))));
            }
        }
    }
    Ok(())
}

/// Interior defects and boundary turnings of a face-closed domain that must
/// be a surface with boundary.
fn domain_ledger(system: &AdjunctionSystem, tuple: &[usize], domain: &CellSet) -> Result<TupleLedger> {
    let i0 = tuple[0];
    let p = system.piece(i0);
    let m = metric(system, i0)?;
    let sums = m.angle_sums(domain)?;
    let not_surface = |c: usize, why: &str| {
        Error::precondition(format!(
            "closure domain of {} is not a surface with boundary at `{}`: {why}",
            crate::adjunction::fmt_tuple(tuple),
            p.id(c)
        ))
    };
    let in_domain = |c: &(usize, i8)| domain.contains(c.0);
    let mut boundary_edges: BTreeMap<usize, usize> = BTreeMap::new();
    for e in domain.iter().filter(|&e| p.dim(e) == 1) {
        match p.cofaces(e).iter().filter(|c| in_domain(c)).count() {
            0 => return Err(not_surface(e, "edge without a triangle")),
            1 => {
                for &(v, _) in p.faces(e) {
                    *boundary_edges.entry(v).or_insert(0) += 1;
                }
            }
            _ => {}
        }
    }
    let mut interior = 0.0;
    let mut turning = Vec::new();
    for v in domain.iter().filter(|&v| p.dim(v) == 0) {
        let sum = sums.get(&v).copied().unwrap_or(0.0);
        let full = p.cofaces(v).iter().all(&in_domain);
        match boundary_edges.get(&v).copied().unwrap_or(0) {
            0 if full && sum > 0.0 => interior += 2.0 * PI - sum,
            0 => return Err(not_surface(v, "vertex is pinched")),
            2 => turning.push(Turning {
                vertex: p.id(v).to_string(),
                angle: PI - sum,
            }),
            _ => return Err(not_surface(v, "vertex meets more than two boundary edges")),
        }
    }
    let turning_total = turning.iter().map(|t| t.angle).fold(0.0, |a, b| a + b);
    Ok(TupleLedger {
        tuple: tuple.to_vec(),
        chi: p.euler_characteristic(domain),
        interior_defects: interior,
        turning,
        turning_total,
    })
}

/// Needs a valid metric on closed triangulated surfaces.
pub fn curvature_ledger(system: &AdjunctionSystem) -> Result<CurvatureLedger> {
    check_closed_surfaces(system)?;
    let classes = system.glued_cell_classes();
    let mut vertex_defects = Vec::new();
    let mut all_sums = Vec::new();
    for i in 0..system.len() {
        all_sums.push(metric(system, i)?.angle_sums(&system.piece(i).all())?);
    }
    for cl in &classes.classes {
        let (i, v) = cl[0];
        if system.piece(i).dim(v) == 0 {
            vertex_defects.push(VertexDefect {
                piece: i,
                vertex: system.piece(i).id(v).to_string(),
                defect: 2.0 * PI - all_sums[i][&v],
            });
        }
    }
    let mut ledgers = Vec::new();
    for t in tuples(system.len(), None) {
        let domain = ClosedIntersection.domain(system, &t);
        ledgers.push(domain_ledger(system, &t, &domain)?);
    }
    Ok(CurvatureLedger {
        vertex_defects,
        tuples: ledgers,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GaussBonnetReport {
    pub chi: i64,
    pub lhs: f64,
    /// Inclusion-exclusion of interior defect sums.
    pub curvature: f64,
    /// Alternating turning-angle sums over tuples of arity at least two.
    pub counterterms: f64,
    pub rhs: f64,
    pub residual: f64,
    pub ledger: CurvatureLedger,
}

impl GaussBonnetReport {
    pub fn balanced(&self) -> bool {
        self.residual.abs() <= TOLERANCE
    }
}

pub fn gauss_bonnet_report(system: &AdjunctionSystem) -> Result<GaussBonnetReport> {
    let ledger = curvature_ledger(system)?;
    let chi = euler_inclusion_exclusion(system);
    let sign = |t: &TupleLedger| if t.tuple.len() % 2 == 1 { 1.0 } else { -1.0 };
    let curvature: f64 = ledger.tuples.iter().map(|t| sign(t) * t.interior_defects).fold(0.0, |a, b| a + b);
    let counterterms: f64 = ledger
        .tuples
        .iter()
        .filter(|t| t.tuple.len() >= 2)
        .map(|t| sign(t) * t.turning_total)
        .fold(0.0, |a, b| a + b);
    let lhs = 2.0 * PI * chi as f64;
    let rhs = curvature + counterterms;
    Ok(GaussBonnetReport {
        chi,
        lhs,
        curvature,
        counterterms,
        rhs,
        residual: lhs - rhs,
        ledger,
    })
}
