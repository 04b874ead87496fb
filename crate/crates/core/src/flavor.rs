//! Intersection flavors: which subcomplex stands in for a multiple
//! intersection in the Čech direction, and how cells move between pieces.

use crate::adjunction::{fmt_tuple, tuples, AdjunctionSystem};
use crate::complex::CellSet;
use crate::{Error, Result};

pub trait IntersectionFlavor: Send + Sync {
    /// Registry key, e.g. `dr`.
    fn name(&self) -> &'static str;

    /// Long label used in reports.
    fn label(&self) -> &'static str;

    /// Structural hypotheses required before a bicomplex can be built.
    fn check(&self, system: &AdjunctionSystem, max_arity: Option<usize>) -> Result<()>;

    /// Face-closed domain for `tuple`, inside piece `tuple[0]`.
    fn domain(&self, system: &AdjunctionSystem, tuple: &[usize]) -> CellSet;

    /// Moves a cell of piece `i` to piece `j`.
    fn transport(&self, system: &AdjunctionSystem, i: usize, j: usize, cell: usize) -> Option<usize>;
}

/// Closures of the open intersections, transported by closure extensions.
#[derive(Clone, Copy, Debug, Default)]
pub struct ClosedIntersection;

impl IntersectionFlavor for ClosedIntersection {
    fn name(&self) -> &'static str {
        "dr"
    }

    fn label(&self) -> &'static str {
        "CLOSED_INTERSECTION"
    }

    fn check(&self, system: &AdjunctionSystem, max_arity: Option<usize>) -> Result<()> {
        let checks = system.closure_intersection_check();
        let bad = checks
            .into_iter()
            .find(|(t, ok)| !ok && max_arity.is_none_or(|m| t.len() <= m));
        match bad {
            Some((t, _)) => Err(Error::precondition(format!(
                "closure-intersection property violated at tuple {}",
                fmt_tuple(&t)
            ))),
            None => Ok(()),
        }
    }

    fn domain(&self, system: &AdjunctionSystem, tuple: &[usize]) -> CellSet {
        let i0 = tuple[0];
        system.piece(i0).closure(&system.intersection_in(i0, tuple))
    }

    fn transport(&self, system: &AdjunctionSystem, i: usize, j: usize, cell: usize) -> Option<usize> {
        system.transport_closure(i, j, cell)
    }
}

/// Declared cores of the open intersections, transported by the open
/// bijections. Tuples without a declared core use the largest face-closed
/// subset of the open intersection.
#[derive(Clone, Copy, Debug, Default)]
pub struct OpenCore;

impl IntersectionFlavor for OpenCore {
    fn name(&self) -> &'static str {
        "sing"
    }

    fn label(&self) -> &'static str {
        "OPEN_CORE"
    }

    fn check(&self, system: &AdjunctionSystem, _max_arity: Option<usize>) -> Result<()> {
        for (t, core) in system.cores() {
            if t.is_empty() || t.iter().any(|&k| k >= system.len()) || t.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::precondition(format!(
                    "core declared for invalid tuple {}",
                    fmt_tuple(t)
                )));
            }
            let i0 = t[0];
            let p = system.piece(i0);
            if !core.is_subset(&system.intersection_in(i0, t)) {
                return Err(Error::precondition(format!(
                    "core for tuple {} is not contained in the open intersection",
                    fmt_tuple(t)
                )));
            }
            if !p.is_closed(core) {
                return Err(Error::precondition(format!(
                    "core for tuple {} is not a subcomplex",
                    fmt_tuple(t)
                )));
            }
        }
        Ok(())
    }

    fn domain(&self, system: &AdjunctionSystem, tuple: &[usize]) -> CellSet {
        if let Some(core) = system.cores().get(tuple) {
            return core.clone();
        }
        let i0 = tuple[0];
        let p = system.piece(i0);
        p.closed_core(&system.intersection_in(i0, tuple))
    }

    fn transport(&self, system: &AdjunctionSystem, i: usize, j: usize, cell: usize) -> Option<usize> {
        system.transport_open(i, j, cell)
    }
}

/// Flavors selectable by name at runtime.
pub struct FlavorRegistry {
    entries: Vec<Box<dyn IntersectionFlavor>>,
}

impl Default for FlavorRegistry {
    fn default() -> Self {
        let mut r = Self { entries: Vec::new() };
        r.register(Box::new(ClosedIntersection));
        r.register(Box::new(OpenCore));
        r
    }
}

impl FlavorRegistry {
    /// Adds a flavor, replacing any previous one with the same name.
    pub fn register(&mut self, flavor: Box<dyn IntersectionFlavor>) {
        self.entries.retain(|f| f.name() != flavor.name());
        self.entries.push(flavor);
    }

    pub fn get(&self, name: &str) -> Result<&dyn IntersectionFlavor> {
        self.entries
            .iter()
            .find(|f| f.name() == name || f.label().eq_ignore_ascii_case(name))
            .map(|f| f.as_ref())
            .ok_or_else(|| Error::UnknownFlavor(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|f| f.name()).collect()
    }
}

/// All tuples up to the arity cap, in bicomplex column order.
pub(crate) fn column_tuples(n: usize, max_arity: Option<usize>) -> Vec<Vec<Vec<usize>>> {
    let mut cols: Vec<Vec<Vec<usize>>> = Vec::new();
    for t in tuples(n, max_arity) {
        if cols.len() < t.len() {
            cols.resize(t.len(), Vec::new());
        }
        cols[t.len() - 1].push(t);
    }
    cols
}
