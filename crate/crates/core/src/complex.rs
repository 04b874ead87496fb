//! Finite regular cell complexes with signed incidence.
//!
//! Open sets are modelled as star-closed cell sets (every coface of a member
//! is a member) and closed sets as face-closed ones, i.e. the Alexandrov
//! topology of the face poset.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::validation::ValidationReport;
use crate::{Error, Result};

pub type Sign = i8;

/// A cell as supplied by the user: opaque id, explicit dimension and signed faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub id: String,
    pub dim: usize,
    pub faces: Vec<(String, Sign)>,
}

impl Cell {
    pub fn new(id: impl Into<String>, dim: usize) -> Self {
        Self {
            id: id.into(),
            dim,
            faces: Vec::new(),
        }
    }

    pub fn with_faces<S: Into<String>>(
        id: impl Into<String>,
        dim: usize,
        faces: impl IntoIterator<Item = (S, Sign)>,
    ) -> Self {
        Self {
            id: id.into(),
            dim,
            faces: faces.into_iter().map(|(f, s)| (f.into(), s)).collect(),
        }
    }
}

/// A finite cell complex.
///
/// Construction never fails; malformed input (dangling faces, duplicate ids,
/// wrong face dimensions, `∂∂ ≠ 0`) is reported by [`CellComplex::validate`].
/// Every other operation assumes a valid complex.
#[derive(Clone, Debug)]
pub struct CellComplex {
    cells: Vec<Cell>,
    index: HashMap<String, usize>,
    faces: Vec<Vec<(usize, Sign)>>,
    cofaces: Vec<Vec<(usize, Sign)>>,
    by_dim: Vec<Vec<usize>>,
}

impl PartialEq for CellComplex {
    fn eq(&self, other: &Self) -> bool {
        self.cells == other.cells
    }
}

impl CellComplex {
    pub fn new(cells: Vec<Cell>) -> Self {
        let mut index = HashMap::with_capacity(cells.len());
        for (k, c) in cells.iter().enumerate() {
            index.entry(c.id.clone()).or_insert(k);
        }
        let mut faces = vec![Vec::new(); cells.len()];
        let mut cofaces = vec![Vec::new(); cells.len()];
        for (k, c) in cells.iter().enumerate() {
            for (f, s) in &c.faces {
                if let Some(&fi) = index.get(f) {
                    faces[k].push((fi, *s));
                    cofaces[fi].push((k, *s));
                }
            }
        }
        let top = cells.iter().map(|c| c.dim).max();
        let mut by_dim = vec![Vec::new(); top.map_or(0, |t| t + 1)];
        for (k, c) in cells.iter().enumerate() {
            by_dim[c.dim].push(k);
        }
        Self {
            cells,
            index,
            faces,
            cofaces,
            by_dim,
        }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, k: usize) -> &Cell {
        &self.cells[k]
    }

    pub fn id(&self, k: usize) -> &str {
        &self.cells[k].id
    }

    pub fn dim(&self, k: usize) -> usize {
        self.cells[k].dim
    }

    pub fn lookup(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// `None` for the empty complex.
    pub fn top_dimension(&self) -> Option<usize> {
        self.by_dim.len().checked_sub(1)
    }

    pub fn faces(&self, k: usize) -> &[(usize, Sign)] {
        &self.faces[k]
    }

    pub fn cofaces(&self, k: usize) -> &[(usize, Sign)] {
        &self.cofaces[k]
    }

    pub fn cells_of_dim(&self, dim: usize) -> &[usize] {
        self.by_dim.get(dim).map_or(&[], |v| v.as_slice())
    }

    pub fn incidence(&self, cell: usize, face: usize) -> Sign {
        self.faces[cell]
            .iter()
            .find(|(f, _)| *f == face)
            .map_or(0, |(_, s)| *s)
    }

    pub fn all(&self) -> CellSet {
        CellSet((0..self.len()).collect())
    }

    /// Resolves ids against this complex.
    pub fn cell_set<S: AsRef<str>>(
        &self,
        ids: impl IntoIterator<Item = S>,
    ) -> std::result::Result<CellSet, String> {
        let mut set = CellSet::new();
        for id in ids {
            let id = id.as_ref();
            match self.lookup(id) {
                Some(k) => {
                    set.insert(k);
                }
                None => return Err(id.to_string()),
            }
        }
        Ok(set)
    }

    pub fn ids(&self, set: &CellSet) -> Vec<String> {
        set.iter().map(|k| self.id(k).to_string()).collect()
    }

    /// Lists every violated structural invariant.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        let mut seen = BTreeSet::new();
        for c in &self.cells {
            if !seen.insert(c.id.as_str()) {
                report.push("duplicate-cell", &c.id, "cell id occurs more than once");
            }
        }
        for (k, c) in self.cells.iter().enumerate() {
            let mut face_ids = BTreeSet::new();
            for (f, s) in &c.faces {
                if !face_ids.insert(f.as_str()) {
                    report.push(
                        "duplicate-face",
                        format!("{} -> {}", c.id, f),
                        "face listed twice",
                    );
                }
                if *s != 1 && *s != -1 {
                    report.push(
                        "incidence-sign",
                        format!("{} -> {}", c.id, f),
                        format!("incidence sign must be +1 or -1, got {s}"),
                    );
                }
                match self.lookup(f) {
                    None => report.push(
                        "dangling-face",
                        format!("{} -> {}", c.id, f),
                        "face refers to a cell that does not exist",
                    ),
                    Some(fi) if self.cells[fi].dim + 1 != c.dim => report.push(
                        "face-dimension",
                        format!("{} -> {}", c.id, f),
                        format!(
                            "face has dimension {} but cell has dimension {}",
                            self.cells[fi].dim, c.dim
                        ),
                    ),
                    Some(_) => {}
                }
            }
            if c.dim == 0 && !c.faces.is_empty() {
                report.push("face-dimension", &c.id, "a vertex cannot have faces");
            }
            // composite boundary
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for &(f, s) in &self.faces[k] {
                for &(e, t) in &self.faces[f] {
                    *acc.entry(e).or_default() += i64::from(s) * i64::from(t);
                }
            }
            for (e, v) in acc {
                if v != 0 {
                    report.push(
                        "boundary-squared",
                        format!("{} -> {}", c.id, self.id(e)),
                        format!("composite boundary coefficient is {v}, expected 0"),
                    );
                }
            }
        }
        report
    }

    /// Smallest face-closed superset.
    pub fn closure(&self, set: &CellSet) -> CellSet {
        let mut out = set.clone();
        let mut stack: Vec<usize> = set.iter().collect();
        while let Some(k) = stack.pop() {
            for &(f, _) in &self.faces[k] {
                if out.insert(f) {
                    stack.push(f);
                }
            }
        }
        out
    }

    /// Smallest star-closed superset.
    pub fn star(&self, set: &CellSet) -> CellSet {
        let mut out = set.clone();
        let mut stack: Vec<usize> = set.iter().collect();
        while let Some(k) = stack.pop() {
            for &(c, _) in &self.cofaces[k] {
                if out.insert(c) {
                    stack.push(c);
                }
            }
        }
        out
    }

    /// Largest star-closed subset.
    pub fn interior(&self, set: &CellSet) -> CellSet {
        // A cell survives iff its whole star lies in `set`; process top-down so
        // cofaces are decided first.
        let mut out = CellSet::new();
        let mut order: Vec<usize> = set.iter().collect();
        order.sort_by_key(|&k| std::cmp::Reverse(self.dim(k)));
        for k in order {
            if self.cofaces[k].iter().all(|(c, _)| out.contains(*c)) {
                out.insert(k);
            }
        }
        out
    }

    /// Largest face-closed subset.
    pub fn closed_core(&self, set: &CellSet) -> CellSet {
        let mut out = CellSet::new();
        let mut order: Vec<usize> = set.iter().collect();
        order.sort_by_key(|&k| self.dim(k));
        for k in order {
            if self.faces[k].iter().all(|(f, _)| out.contains(*f)) {
                out.insert(k);
            }
        }
        out
    }

    pub fn is_open(&self, set: &CellSet) -> bool {
        set.iter()
            .all(|k| self.cofaces[k].iter().all(|(c, _)| set.contains(*c)))
    }

    pub fn is_closed(&self, set: &CellSet) -> bool {
        set.iter()
            .all(|k| self.faces[k].iter().all(|(f, _)| set.contains(*f)))
    }

    /// `closure(set) \ set`; only defined for open sets.
    pub fn frontier(&self, set: &CellSet) -> Result<CellSet> {
        if !self.is_open(set) {
            return Err(Error::precondition("frontier requires an open (star-closed) cell set"));
        }
        Ok(self.closure(set).difference(set))
    }

    pub fn euler_characteristic(&self, set: &CellSet) -> i64 {
        set.iter()
            .map(|k| if self.dim(k).is_multiple_of(2) { 1 } else { -1 })
            .sum()
    }

    /// Components under the face/coface adjacency restricted to `set`.
    pub fn connected_components(&self, set: &CellSet) -> usize {
        let members: Vec<usize> = set.iter().collect();
        let pos: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        let mut uf = UnionFind::new(members.len());
        for (i, &k) in members.iter().enumerate() {
            for &(f, _) in &self.faces[k] {
                if let Some(&j) = pos.get(&f) {
                    uf.union(i, j);
                }
            }
        }
        uf.count()
    }

    /// Sign each top cell induces on a codimension-one face must cancel
    /// between neighbours. Returns the offending faces.
    pub fn orientation_conflicts(&self, orientation: &Orientation) -> Vec<String> {
        let Some(top) = self.top_dimension() else {
            return Vec::new();
        };
        if top == 0 {
            return Vec::new();
        }
        let mut bad = Vec::new();
        for &f in self.cells_of_dim(top - 1) {
            let tops: Vec<_> = self.cofaces[f].iter().filter(|(c, _)| self.dim(*c) == top).collect();
            if tops.len() == 2 {
                let sum: i32 = tops
                    .iter()
                    .map(|(c, s)| i32::from(orientation.sign(*c)) * i32::from(*s))
                    .sum();
                if sum != 0 {
                    bad.push(self.id(f).to_string());
                }
            }
        }
        bad
    }
}

/// A set of cell indices of one complex.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellSet(BTreeSet<usize>);

impl CellSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, k: usize) -> bool {
        self.0.insert(k)
    }

    pub fn remove(&mut self, k: usize) -> bool {
        self.0.remove(&k)
    }

    pub fn contains(&self, k: usize) -> bool {
        self.0.contains(&k)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn union(&self, other: &CellSet) -> CellSet {
        CellSet(self.0.union(&other.0).copied().collect())
    }

    pub fn intersection(&self, other: &CellSet) -> CellSet {
        CellSet(self.0.intersection(&other.0).copied().collect())
    }

    pub fn difference(&self, other: &CellSet) -> CellSet {
        CellSet(self.0.difference(&other.0).copied().collect())
    }

    pub fn is_subset(&self, other: &CellSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &CellSet) -> bool {
        self.0.is_disjoint(&other.0)
    }
}

impl FromIterator<usize> for CellSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        CellSet(iter.into_iter().collect())
    }
}

/// Signs on top cells; unlisted cells count as `+1`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Orientation(pub BTreeMap<usize, Sign>);

impl Orientation {
    pub fn uniform(complex: &CellComplex) -> Self {
        let top = complex.top_dimension().unwrap_or(0);
        Orientation(complex.cells_of_dim(top).iter().map(|&k| (k, 1)).collect())
    }

    pub fn sign(&self, cell: usize) -> Sign {
        self.0.get(&cell).copied().unwrap_or(1)
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }

    pub fn count(&mut self) -> usize {
        (0..self.parent.len()).filter(|&x| self.find(x) == x).count()
    }
}
