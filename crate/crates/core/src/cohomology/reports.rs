use serde::Serialize;

use super::bicomplex::{build_bicomplex, global_complex_betti, total_betti, Bicomplex};
use super::alternating;
use crate::adjunction::{tuples, AdjunctionSystem};
use crate::flavor::{ClosedIntersection, IntersectionFlavor, OpenCore};
use crate::linalg::Matrix;
use crate::{Error, Result};

/// Exactness of `0 → Ω^q(M) → ⊕Ω^q(M_i) → ⊕Ω^q(closures) → … → 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowExactness {
    pub degree: usize,
    /// Dimensions of the nodes, starting with `Ω^q(M)`.
    pub dims: Vec<usize>,
    /// One flag per node after the leading zero.
    pub exact_at: Vec<bool>,
}

impl RowExactness {
    pub fn exact(&self) -> bool {
        self.exact_at.iter().all(|&b| b)
    }
}

/// Needs the closure-intersection property; the global space is counted
/// independently as the number of closure classes of degree `q`.
pub fn row_exactness_check(system: &AdjunctionSystem) -> Result<Vec<RowExactness>> {
    ClosedIntersection.check(system, None)?;
    let b = build_bicomplex(system, &ClosedIntersection, None)?;
    let classes = system.closure_cell_classes();
    let mut rows = Vec::new();
    for q in 0..=b.top {
        let global = classes
            .classes
            .iter()
            .filter(|cl| {
                let (p, c) = cl[0];
                system.piece(p).dim(c) == q
            })
            .count();
        let pmax = b.columns.len();
        let mut dims = vec![global];
        dims.extend((0..pmax).map(|p| b.dim(p, q)));
        let rank = |p: usize| if p + 1 < pmax { b.delta[p][q].rank() } else { 0 };
        let nullity = |p: usize| b.dim(p, q) - rank(p);
        // injectivity into column 0 is equality with the kernel of δ_0
        let mut exact_at = vec![global == nullity(0), global == nullity(0)];
        for p in 1..pmax {
            exact_at.push(rank(p - 1) == nullity(p));
        }
        rows.push(RowExactness { degree: q, dims, exact_at });
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MvRow {
    pub degree: usize,
    /// `dim H^q(M)` derived from the sequence.
    pub total: usize,
    /// `dim H^q(M_1) ⊕ H^q(M_2)`.
    pub pieces: usize,
    /// `dim H^q` of the intersection domain.
    pub intersection: usize,
    /// Rank of `ι* − f̄*` on cohomology.
    pub rank: usize,
    pub kernel: usize,
    /// Cokernel of the map in the previous degree.
    pub cokernel_prev: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MvReport {
    pub flavor: &'static str,
    pub rows: Vec<MvRow>,
    pub alternating_sum: i64,
    /// Derived `H^q(M)` agrees with the total complex.
    pub matches_total: bool,
}

fn induced_rank(b: &Bicomplex, q: usize) -> usize {
    let cocycles = if q < b.top {
        b.d[0][q].nullspace()
    } else {
        identity_basis(b.dim(0, q))
    };
    let images: Vec<Vec<_>> = cocycles.iter().map(|z| b.delta[0][q].mul_vec(z)).collect();
    let rows = b.dim(1, q);
    let image = Matrix::from_columns(rows, &images);
    let boundaries = if q == 0 { Matrix::zeros(rows, 0) } else { b.d[1][q - 1].clone() };
    image.hstack(&boundaries).rank() - boundaries.rank()
}

fn identity_basis(n: usize) -> Vec<Vec<crate::rational::Q>> {
    (0..n)
        .map(|k| {
            (0..n)
                .map(|j| if j == k { crate::rational::one() } else { crate::rational::zero() })
                .collect()
        })
        .collect()
}

/// Long exact sequence of a binary system in the chosen flavor.
pub fn mv_report(system: &AdjunctionSystem, flavor: &dyn IntersectionFlavor) -> Result<MvReport> {
    if system.len() != 2 {
        return Err(Error::precondition("Mayer-Vietoris report needs a binary system"));
    }
    let b = build_bicomplex(system, flavor, None)?;
    let a = b.column(0).betti()?;
    let c = b.column(1).betti()?;
    let ranks: Vec<usize> = (0..=b.top).map(|q| induced_rank(&b, q)).collect();
    let mut rows = Vec::new();
    let mut sequence = Vec::new();
    for q in 0..=b.top {
        let kernel = a[q] - ranks[q];
        let cokernel_prev = if q == 0 { 0 } else { c[q - 1] - ranks[q - 1] };
        let total = kernel + cokernel_prev;
        sequence.extend([total, a[q], c[q]]);
        rows.push(MvRow {
            degree: q,
            total,
            pieces: a[q],
            intersection: c[q],
            rank: ranks[q],
            kernel,
            cokernel_prev,
        });
    }
    let last_coker = c[b.top] - ranks[b.top];
    let mut derived: Vec<usize> = rows.iter().map(|r| r.total).collect();
    if last_coker > 0 {
        derived.push(last_coker);
        sequence.push(last_coker);
    }
    let matches_total = super::normalize_betti(derived, b.top) == total_betti(&b);
    Ok(MvReport {
        flavor: flavor.name(),
        rows,
        alternating_sum: alternating(&sequence),
        matches_total,
    })
}

/// `Σ_T (−1)^{|T|+1} χ(core of T)`, open-intersection cores.
pub fn euler_inclusion_exclusion(system: &AdjunctionSystem) -> i64 {
    tuples(system.len(), None)
        .into_iter()
        .map(|t| {
            let chi = system.piece(t[0]).euler_characteristic(&OpenCore.domain(system, &t));
            if t.len() % 2 == 1 {
                chi
            } else {
                -chi
            }
        })
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Equal,
    Unequal,
    /// The closed-intersection flavor is undefined for this system.
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompareReport {
    pub dr: Option<Vec<usize>>,
    pub dr_error: Option<String>,
    pub sing: Vec<usize>,
    pub global: Vec<usize>,
    pub verdict: Verdict,
    pub regions_regular_open: bool,
    pub unions_regular_open: bool,
    pub closure_intersection: bool,
}

pub fn de_rham_compare(system: &AdjunctionSystem) -> Result<CompareReport> {
    let sing = total_betti(&build_bicomplex(system, &OpenCore, None)?);
    let (dr, dr_error) = match build_bicomplex(system, &ClosedIntersection, None) {
        Ok(b) => (Some(total_betti(&b)), None),
        Err(Error::Precondition(m)) => (None, Some(m)),
        Err(e) => return Err(e),
    };
    let verdict = match &dr {
        Some(v) if *v == sing => Verdict::Equal,
        Some(_) => Verdict::Unequal,
        None => Verdict::Undetermined,
    };
    Ok(CompareReport {
        dr,
        dr_error,
        sing,
        global: global_complex_betti(system)?,
        verdict,
        regions_regular_open: system.regular_open_check().values().all(|&b| b),
        unions_regular_open: system.regular_open_unions().values().all(|&b| b),
        closure_intersection: system.closure_intersection_violation().is_none(),
    })
}
