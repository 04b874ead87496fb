//! Adjunction systems: pieces, open gluing regions and gluing maps.
//!
//! Pieces are indexed from 0 internally; every user-facing location string
//! prints indices from 1.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::Serialize;

use crate::complex::{CellComplex, CellSet, Orientation, UnionFind};
use crate::validation::ValidationReport;
use crate::{Error, Result};

/// Formats a 0-based tuple as the 1-based `(1,2,3)`.
pub fn fmt_tuple(tuple: &[usize]) -> String {
    let mut s = String::from("(");
    for (k, i) in tuple.iter().enumerate() {
        if k > 0 {
            s.push(',');
        }
        let _ = write!(s, "{}", i + 1);
    }
    s.push(')');
    s
}

/// All ascending index tuples of arity `1..=max_arity`, ordered by arity then
/// lexicographically.
pub fn tuples(n: usize, max_arity: Option<usize>) -> Vec<Vec<usize>> {
    let cap = max_arity.unwrap_or(n).min(n);
    let mut out = Vec::new();
    for arity in 1..=cap {
        let mut cur = Vec::with_capacity(arity);
        combos(n, arity, 0, &mut cur, &mut out);
    }
    out
}

fn combos(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in start..n {
        cur.push(i);
        combos(n, k, i + 1, cur, out);
        cur.pop();
    }
}

/// The gluing map `f_ij` from an open region of piece `source` onto an open
/// region of piece `target`, together with its extension to the closures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingMap {
    pub source: usize,
    pub target: usize,
    pub source_region: CellSet,
    pub target_region: CellSet,
    pub cell_bijection: BTreeMap<usize, usize>,
    /// Defined on `closure(source_region)`; agrees with `cell_bijection` on the region.
    pub closure_extension: BTreeMap<usize, usize>,
}

impl GluingMap {
    /// Builds a map from id pairs. `closure_pairs` only needs to list the
    /// frontier cells; region pairs are included automatically.
    pub fn from_ids<S: AsRef<str>>(
        pieces: (&CellComplex, &CellComplex),
        indices: (usize, usize),
        region: Option<&[S]>,
        pairs: &[(S, S)],
        closure_pairs: &[(S, S)],
    ) -> Result<Self> {
        let (src, dst) = pieces;
        let (i, j) = indices;
        let look = |c: &CellComplex, piece: usize, id: &str| {
            c.lookup(id).ok_or_else(|| Error::UnknownCell {
                piece: piece + 1,
                id: id.to_string(),
            })
        };
        let mut cell_bijection = BTreeMap::new();
        for (a, b) in pairs {
            cell_bijection.insert(look(src, i, a.as_ref())?, look(dst, j, b.as_ref())?);
        }
        let source_region = match region {
            Some(ids) => ids
                .iter()
                .map(|id| look(src, i, id.as_ref()))
                .collect::<Result<CellSet>>()?,
            None => cell_bijection.keys().copied().collect(),
        };
        let target_region = cell_bijection.values().copied().collect();
        let mut closure_extension = cell_bijection.clone();
        for (a, b) in closure_pairs {
            closure_extension.insert(look(src, i, a.as_ref())?, look(dst, j, b.as_ref())?);
        }
        Ok(Self {
            source: i,
            target: j,
            source_region,
            target_region,
            cell_bijection,
            closure_extension,
        })
    }

    /// Identifies equal ids: the region in piece `i` maps to the same ids in
    /// piece `j`, and likewise on the closure.
    pub fn by_id<S: AsRef<str>>(
        pieces: (&CellComplex, &CellComplex),
        indices: (usize, usize),
        region: &[S],
    ) -> Result<Self> {
        let (src, _) = pieces;
        let set = src
            .cell_set(region.iter().map(|s| s.as_ref()))
            .map_err(|id| Error::UnknownCell {
                piece: indices.0 + 1,
                id,
            })?;
        let closure = src.closure(&set);
        let pairs: Vec<(String, String)> = set
            .iter()
            .map(|k| (src.id(k).to_string(), src.id(k).to_string()))
            .collect();
        let frontier: Vec<(String, String)> = closure
            .difference(&set)
            .iter()
            .map(|k| (src.id(k).to_string(), src.id(k).to_string()))
            .collect();
        Self::from_ids(pieces, indices, None, &pairs, &frontier)
    }

    pub fn apply(&self, cell: usize) -> Option<usize> {
        self.cell_bijection.get(&cell).copied()
    }

    pub fn apply_closure(&self, cell: usize) -> Option<usize> {
        self.closure_extension.get(&cell).copied()
    }

    pub fn inverse(&self) -> GluingMap {
        GluingMap {
            source: self.target,
            target: self.source,
            source_region: self.target_region.clone(),
            target_region: self.source_region.clone(),
            cell_bijection: self.cell_bijection.iter().map(|(a, b)| (*b, *a)).collect(),
            closure_extension: self.closure_extension.iter().map(|(a, b)| (*b, *a)).collect(),
        }
    }
}

/// A user-declared face-closed subcomplex per index tuple (arity ≥ 2), lying
/// inside the open intersection in the tuple's smallest piece.
pub type CoreAssignment = BTreeMap<Vec<usize>, CellSet>;

#[derive(Clone, Debug)]
pub struct AdjunctionSystem {
    names: Vec<String>,
    pieces: Vec<CellComplex>,
    maps: BTreeMap<(usize, usize), GluingMap>,
    self_maps: BTreeMap<usize, GluingMap>,
    orientations: Option<Vec<Orientation>>,
    cores: CoreAssignment,
    edge_lengths: Option<Vec<BTreeMap<usize, f64>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct HausdorffPair {
    pub left: (usize, String),
    pub right: (usize, String),
}

/// Partition of all `(piece, cell)` pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellClasses {
    pub classes: Vec<Vec<(usize, usize)>>,
    class_of: HashMap<(usize, usize), usize>,
}

impl CellClasses {
    fn from_union_find(offsets: &[usize], sizes: &[usize], uf: &mut UnionFind) -> Self {
        let mut groups: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        for (p, (&off, &n)) in offsets.iter().zip(sizes).enumerate() {
            for c in 0..n {
                groups.entry(uf.find(off + c)).or_default().push((p, c));
            }
        }
        let mut classes: Vec<Vec<(usize, usize)>> = groups.into_values().collect();
        for c in &mut classes {
            c.sort_unstable();
        }
        classes.sort();
        let class_of = classes
            .iter()
            .enumerate()
            .flat_map(|(k, cl)| cl.iter().map(move |&m| (m, k)))
            .collect();
        Self { classes, class_of }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, piece: usize, cell: usize) -> Option<usize> {
        self.class_of.get(&(piece, cell)).copied()
    }

    /// Smallest member, used as the canonical label.
    pub fn representative(&self, class: usize) -> (usize, usize) {
        self.classes[class][0]
    }

    /// Partition as sorted `(piece, cell-id)` lists, for comparisons.
    pub fn labelled(&self, system: &AdjunctionSystem) -> BTreeSet<Vec<(usize, String)>> {
        self.classes
            .iter()
            .map(|cl| {
                cl.iter()
                    .map(|&(p, c)| (p, system.piece(p).id(c).to_string()))
                    .collect()
            })
            .collect()
    }
}

/// `binary_decomposition` output: the first `n-1` pieces as a subsystem, the
/// last piece and the induced attaching data.
#[derive(Clone, Debug)]
pub struct BinaryDecomposition {
    pub subsystem: AdjunctionSystem,
    pub last: CellComplex,
    /// `A = ∪_{i<n} region(n, i)` inside the last piece.
    pub attaching_region: CellSet,
    /// Cell of `A` ↦ canonical `(piece, cell)` of its class in the subsystem.
    pub attaching_map: BTreeMap<usize, (usize, usize)>,
}

impl BinaryDecomposition {
    /// Glues the last piece back onto the subsystem along the induced map
    /// and returns the resulting partition, labelled by cell ids.
    pub fn reglue(&self) -> BTreeSet<Vec<(usize, String)>> {
        let sub = &self.subsystem;
        let classes = sub.glued_cell_classes();
        let n = sub.len();
        let mut sizes: Vec<usize> = sub.pieces().iter().map(|p| p.len()).collect();
        sizes.push(self.last.len());
        let offsets = offsets(&sizes);
        let mut uf = UnionFind::new(offsets[n] + self.last.len());
        for cl in &classes.classes {
            for w in cl.windows(2) {
                uf.union(offsets[w[0].0] + w[0].1, offsets[w[1].0] + w[1].1);
            }
        }
        for (&c, &(p, d)) in &self.attaching_map {
            uf.union(offsets[n] + c, offsets[p] + d);
        }
        let merged = CellClasses::from_union_find(&offsets, &sizes, &mut uf);
        merged
            .classes
            .iter()
            .map(|cl| {
                cl.iter()
                    .map(|&(p, c)| {
                        let id = if p < n { sub.piece(p).id(c) } else { self.last.id(c) };
                        (p, id.to_string())
                    })
                    .collect()
            })
            .collect()
    }
}

fn offsets(sizes: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(sizes.len() + 1);
    let mut acc = 0;
    out.push(0);
    for s in sizes {
        acc += s;
        out.push(acc);
    }
    out
}

impl AdjunctionSystem {
    /// Maps given only in one direction get their inverse filled in; maps
    /// `(i, i)` are kept aside for the identity check.
    pub fn new(names: Vec<String>, pieces: Vec<CellComplex>, gluings: Vec<GluingMap>) -> Self {
        let mut maps = BTreeMap::new();
        let mut self_maps = BTreeMap::new();
        for g in gluings {
            if g.source == g.target {
                self_maps.insert(g.source, g);
            } else {
                maps.insert((g.source, g.target), g);
            }
        }
        let missing: Vec<GluingMap> = maps
            .iter()
            .filter(|((i, j), _)| !maps.contains_key(&(*j, *i)))
            .map(|(_, g)| g.inverse())
            .collect();
        for g in missing {
            maps.insert((g.source, g.target), g);
        }
        Self {
            names,
            pieces,
            maps,
            self_maps,
            orientations: None,
            cores: CoreAssignment::new(),
            edge_lengths: None,
        }
    }

    pub fn with_orientations(mut self, orientations: Vec<Orientation>) -> Self {
        self.orientations = Some(orientations);
        self
    }

    pub fn with_uniform_orientations(self) -> Self {
        let o = self.pieces.iter().map(Orientation::uniform).collect();
        self.with_orientations(o)
    }

    pub fn with_cores(mut self, cores: CoreAssignment) -> Self {
        self.cores = cores;
        self
    }

    pub fn with_edge_lengths(mut self, lengths: Vec<BTreeMap<usize, f64>>) -> Self {
        self.edge_lengths = Some(lengths);
        self
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn pieces(&self) -> &[CellComplex] {
        &self.pieces
    }

    pub fn piece(&self, i: usize) -> &CellComplex {
        &self.pieces[i]
    }

    pub fn orientations(&self) -> Option<&[Orientation]> {
        self.orientations.as_deref()
    }

    pub fn cores(&self) -> &CoreAssignment {
        &self.cores
    }

    pub fn edge_lengths(&self) -> Option<&[BTreeMap<usize, f64>]> {
        self.edge_lengths.as_deref()
    }

    pub fn gluing(&self, i: usize, j: usize) -> Option<&GluingMap> {
        self.maps.get(&(i, j))
    }

    /// All stored maps, both directions, excluding `(i, i)`.
    pub fn gluings(&self) -> impl Iterator<Item = &GluingMap> {
        self.maps.values()
    }

    pub fn self_maps(&self) -> impl Iterator<Item = &GluingMap> {
        self.self_maps.values()
    }

    /// `region(i, j)`: the whole piece for `i == j`, empty when unglued.
    pub fn region(&self, i: usize, j: usize) -> CellSet {
        if i == j {
            return self.pieces[i].all();
        }
        self.maps
            .get(&(i, j))
            .map(|g| g.source_region.clone())
            .unwrap_or_default()
    }

    pub fn top_dimension(&self) -> Option<usize> {
        self.pieces.iter().filter_map(|p| p.top_dimension()).max()
    }

    /// Open intersection `∩_{k ∈ tuple, k ≠ i} region(i, k)` inside piece `i`.
    pub fn intersection_in(&self, i: usize, tuple: &[usize]) -> CellSet {
        let mut acc = self.pieces[i].all();
        for &k in tuple {
            if k != i {
                acc = acc.intersection(&self.region(i, k));
            }
        }
        acc
    }

    /// Transport along `f̄_{ij}` (closure extension); identity when `i == j`.
    pub fn transport_closure(&self, i: usize, j: usize, cell: usize) -> Option<usize> {
        if i == j {
            return Some(cell);
        }
        self.maps.get(&(i, j))?.apply_closure(cell)
    }

    /// Transport along the open bijection `f_{ij}`; identity when `i == j`.
    pub fn transport_open(&self, i: usize, j: usize, cell: usize) -> Option<usize> {
        if i == j {
            return Some(cell);
        }
        self.maps.get(&(i, j))?.apply(cell)
    }

    /// Checks A1–A3, openness, bijection and incidence preservation, closure
    /// extensions and orientation compatibility. Pieces are validated too.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        for (i, p) in self.pieces.iter().enumerate() {
            for mut issue in p.validate().issues {
                issue.location = format!("piece {}: {}", i + 1, issue.location);
                report.issues.push(issue);
            }
        }
        if !report.is_valid() {
            return report;
        }

        for (&i, g) in &self.self_maps {
            let whole = self.pieces[i].all();
            let identity = g.source_region == whole
                && g.cell_bijection.len() == whole.len()
                && g.cell_bijection.iter().all(|(a, b)| a == b);
            if !identity {
                report.push(
                    "A1",
                    fmt_tuple(&[i, i]),
                    "map (i,i) must be the identity on the whole piece",
                );
            }
        }

        for (&(i, j), g) in &self.maps {
            self.check_map(i, j, g, &mut report);
        }

        for (&(i, j), g) in &self.maps {
            if i > j {
                continue;
            }
            let Some(back) = self.maps.get(&(j, i)) else {
                continue;
            };
            let inv = g.inverse();
            if back.cell_bijection != inv.cell_bijection || back.source_region != g.target_region {
                report.push(
                    "A2",
                    format!("{} / {}", fmt_tuple(&[i, j]), fmt_tuple(&[j, i])),
                    "map (j,i) is not the inverse of map (i,j)",
                );
            } else if back.closure_extension != inv.closure_extension {
                report.push(
                    "A2",
                    format!("{} / {}", fmt_tuple(&[i, j]), fmt_tuple(&[j, i])),
                    "closure extension of (j,i) is not the inverse of that of (i,j)",
                );
            }
        }

        self.check_cocycle(&mut report);
        self.check_orientations(&mut report);
        report
    }

    fn check_map(&self, i: usize, j: usize, g: &GluingMap, report: &mut ValidationReport) {
        let (src, dst) = (&self.pieces[i], &self.pieces[j]);
        let loc = fmt_tuple(&[i, j]);
        if !src.is_open(&g.source_region) {
            report.push("region-open", &loc, "gluing region is not open (star-closed) in its piece");
        }
        if !dst.is_open(&g.target_region) {
            report.push("region-open", &loc, "image region is not open (star-closed) in the target piece");
        }
        let domain: CellSet = g.cell_bijection.keys().copied().collect();
        if domain != g.source_region {
            report.push("bijection", &loc, "cell bijection domain differs from the gluing region");
        }
        let image: BTreeSet<usize> = g.cell_bijection.values().copied().collect();
        if image.len() != g.cell_bijection.len() {
            report.push("bijection", &loc, "cell bijection is not injective");
        }
        if image.iter().copied().collect::<CellSet>() != g.target_region {
            report.push("bijection", &loc, "cell bijection image differs from the target region");
        }
        for (&a, &b) in &g.cell_bijection {
            if src.dim(a) != dst.dim(b) {
                report.push(
                    "bijection",
                    format!("{loc}: {} -> {}", src.id(a), dst.id(b)),
                    "gluing map does not preserve dimension",
                );
            }
        }

        let closure = src.closure(&g.source_region);
        let frontier = closure.difference(&g.source_region);
        let ext_domain: CellSet = g.closure_extension.keys().copied().collect();
        if ext_domain != closure {
            let missing: Vec<String> = closure
                .difference(&ext_domain)
                .iter()
                .map(|k| src.id(k).to_string())
                .collect();
            report.push(
                "closure-extension",
                &loc,
                if missing.is_empty() {
                    "closure extension is defined outside the closure of the region".to_string()
                } else {
                    format!("closure extension missing for {}", missing.join(", "))
                },
            );
        }
        for (&a, &b) in &g.cell_bijection {
            if g.closure_extension.get(&a) != Some(&b) {
                report.push(
                    "closure-extension",
                    format!("{loc}: {}", src.id(a)),
                    "closure extension does not restrict to the cell bijection",
                );
            }
        }
        let ext_image: BTreeSet<usize> = g.closure_extension.values().copied().collect();
        if ext_image.len() != g.closure_extension.len() {
            report.push("closure-extension", &loc, "closure extension is not injective");
        }
        if dst.is_open(&g.target_region) {
            let target_frontier = dst.closure(&g.target_region).difference(&g.target_region);
            let image: CellSet = frontier
                .iter()
                .filter_map(|k| g.closure_extension.get(&k).copied())
                .collect();
            if image != target_frontier {
                report.push(
                    "closure-extension",
                    &loc,
                    "closure extension does not map frontier onto frontier",
                );
            }
        }
        for (&a, &b) in &g.closure_extension {
            if src.dim(a) != dst.dim(b) {
                report.push(
                    "closure-extension",
                    format!("{loc}: {} -> {}", src.id(a), dst.id(b)),
                    "closure extension does not preserve dimension",
                );
            }
        }

        for &c in g.source_region.iter().collect::<Vec<_>>().iter() {
            let Some(c2) = g.apply(c) else { continue };
            if src.faces(c).len() != dst.faces(c2).len() {
                report.push(
                    "incidence",
                    format!("{loc}: {}", src.id(c)),
                    "image cell has a different number of faces",
                );
                continue;
            }
            for &(f, s) in src.faces(c) {
                let ok = g
                    .apply_closure(f)
                    .is_some_and(|f2| dst.incidence(c2, f2) == s);
                if !ok {
                    report.push(
                        "incidence",
                        format!("{loc}: {} -> {}", src.id(c), src.id(f)),
                        "gluing map does not preserve this incidence",
                    );
                }
            }
        }
    }

    fn check_cocycle(&self, report: &mut ValidationReport) {
        let n = self.len();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if i == j || j == k || i == k {
                        continue;
                    }
                    let (Some(gij), Some(gik)) = (self.maps.get(&(i, j)), self.maps.get(&(i, k)))
                    else {
                        continue;
                    };
                    let gjk = self.maps.get(&(j, k));
                    let shared = gij.source_region.intersection(&gik.source_region);
                    for c in shared.iter() {
                        let via = gij.apply(c).and_then(|d| gjk.and_then(|g| g.apply(d)));
                        if via != gik.apply(c) {
                            report.push(
                                "A3",
                                format!(
                                    "{}: cell {} of piece {}",
                                    fmt_tuple(&[i, j, k]),
                                    self.pieces[i].id(c),
                                    i + 1
                                ),
                                "map (i,k) differs from map (j,k) after map (i,j)",
                            );
                        }
                    }
                }
            }
        }
    }

    fn check_orientations(&self, report: &mut ValidationReport) {
        let Some(orientations) = &self.orientations else {
            return;
        };
        if orientations.len() != self.len() {
            report.push("orientation", "system", "one orientation per piece is required");
            return;
        }
        for (i, (p, o)) in self.pieces.iter().zip(orientations).enumerate() {
            for f in p.orientation_conflicts(o) {
                report.push(
                    "orientability",
                    format!("piece {}: {}", i + 1, f),
                    "neighbouring top cells induce the same sign on their shared face",
                );
            }
        }
        let Some(top) = self.top_dimension() else {
            return;
        };
        for (&(i, j), g) in &self.maps {
            if i > j {
                continue;
            }
            for (&a, &b) in &g.cell_bijection {
                if self.pieces[i].dim(a) == top && orientations[i].sign(a) != orientations[j].sign(b) {
                    report.push(
                        "orientation",
                        format!("{}: {}", fmt_tuple(&[i, j]), self.pieces[i].id(a)),
                        "gluing map is not orientation-preserving",
                    );
                }
            }
        }
    }

    pub fn validated(self) -> Result<Self> {
        self.validate().into_result()?;
        Ok(self)
    }

    /// Frontier cells matched by closure extensions, listed once per unordered pair.
    pub fn hausdorff_pairs(&self) -> Vec<HausdorffPair> {
        let mut out = Vec::new();
        for (&(i, j), g) in &self.maps {
            if i > j {
                continue;
            }
            let src = &self.pieces[i];
            let frontier = src.closure(&g.source_region).difference(&g.source_region);
            for x in frontier.iter() {
                if let Some(y) = g.apply_closure(x) {
                    out.push(HausdorffPair {
                        left: (i, src.id(x).to_string()),
                        right: (j, self.pieces[j].id(y).to_string()),
                    });
                }
            }
        }
        out.sort();
        out
    }

    fn union_find_by(&self, closure: bool) -> (Vec<usize>, Vec<usize>, UnionFind) {
        let sizes: Vec<usize> = self.pieces.iter().map(|p| p.len()).collect();
        let off = offsets(&sizes);
        let mut uf = UnionFind::new(off[self.len()]);
        for (&(i, j), g) in &self.maps {
            let m = if closure { &g.closure_extension } else { &g.cell_bijection };
            for (&a, &b) in m {
                uf.union(off[i] + a, off[j] + b);
            }
        }
        (off, sizes, uf)
    }

    /// Classes generated by the open-region bijections; frontier cells stay apart.
    pub fn glued_cell_classes(&self) -> CellClasses {
        let (off, sizes, mut uf) = self.union_find_by(false);
        CellClasses::from_union_find(&off, &sizes, &mut uf)
    }

    /// Classes generated by the closure extensions, i.e. frontier cells are
    /// identified with their partners as well.
    pub fn closure_cell_classes(&self) -> CellClasses {
        let (off, sizes, mut uf) = self.union_find_by(true);
        CellClasses::from_union_find(&off, &sizes, &mut uf)
    }

    /// Splits off the last piece.
    pub fn binary_decomposition(&self) -> Result<BinaryDecomposition> {
        let n = self.len();
        if n < 2 {
            return Err(Error::precondition("binary decomposition needs at least two pieces"));
        }
        let last = n - 1;
        let gluings: Vec<GluingMap> = self
            .maps
            .iter()
            .filter(|((i, j), _)| *i < last && *j < last)
            .map(|(_, g)| g.clone())
            .collect();
        let mut subsystem = AdjunctionSystem::new(
            self.names[..last].to_vec(),
            self.pieces[..last].to_vec(),
            gluings,
        );
        if let Some(o) = &self.orientations {
            subsystem.orientations = Some(o[..last].to_vec());
        }
        if let Some(l) = &self.edge_lengths {
            subsystem.edge_lengths = Some(l[..last].to_vec());
        }
        subsystem.cores = self
            .cores
            .iter()
            .filter(|(t, _)| t.iter().all(|&k| k < last))
            .map(|(t, c)| (t.clone(), c.clone()))
            .collect();

        let classes = subsystem.glued_cell_classes();
        let mut attaching_region = CellSet::new();
        let mut attaching_map = BTreeMap::new();
        for i in 0..last {
            let Some(g) = self.maps.get(&(last, i)) else {
                continue;
            };
            for (&c, &d) in &g.cell_bijection {
                attaching_region.insert(c);
                let class = classes.class_of(i, d).expect("every cell has a class");
                let rep = classes.representative(class);
                match attaching_map.insert(c, rep) {
                    Some(prev) if prev != rep => {
                        return Err(Error::Multivalued {
                            cell: self.pieces[last].id(c).to_string(),
                        })
                    }
                    _ => {}
                }
            }
        }
        Ok(BinaryDecomposition {
            subsystem,
            last: self.pieces[last].clone(),
            attaching_region,
            attaching_map,
        })
    }

    /// For every tuple of arity ≥ 2, whether closure of the intersection equals
    /// the intersection of closures, checked in each member piece.
    pub fn closure_intersection_check(&self) -> BTreeMap<Vec<usize>, bool> {
        let mut out = BTreeMap::new();
        for t in tuples(self.len(), None).into_iter().filter(|t| t.len() >= 2) {
            let ok = t.iter().all(|&i| {
                let p = &self.pieces[i];
                let lhs = p.closure(&self.intersection_in(i, &t));
                let mut rhs = p.all();
                for &k in &t {
                    if k != i {
                        rhs = rhs.intersection(&p.closure(&self.region(i, k)));
                    }
                }
                lhs == rhs
            });
            out.insert(t, ok);
        }
        out
    }

    /// First tuple violating the closure-intersection property, if any.
    pub fn closure_intersection_violation(&self) -> Option<Vec<usize>> {
        self.closure_intersection_check()
            .into_iter()
            .find(|(_, ok)| !ok)
            .map(|(t, _)| t)
    }

    pub fn is_regular_open(&self, piece: usize, set: &CellSet) -> bool {
        let p = &self.pieces[piece];
        p.interior(&p.closure(set)) == *set
    }

    /// Per ordered pair `(i, j)` with a gluing map.
    pub fn regular_open_check(&self) -> BTreeMap<(usize, usize), bool> {
        self.maps
            .iter()
            .map(|(&(i, j), g)| ((i, j), self.is_regular_open(i, &g.source_region)))
            .collect()
    }

    /// Regular-openness of every union of regions inside each piece, keyed by
    /// `(piece, partner indices)`.
    pub fn regular_open_unions(&self) -> BTreeMap<(usize, Vec<usize>), bool> {
        let mut out = BTreeMap::new();
        for i in 0..self.len() {
            let partners: Vec<usize> = (0..self.len())
                .filter(|&j| j != i && self.maps.contains_key(&(i, j)))
                .collect();
            for subset in tuples(partners.len(), None) {
                let ks: Vec<usize> = subset.iter().map(|&s| partners[s]).collect();
                let u = ks
                    .iter()
                    .fold(CellSet::new(), |acc, &k| acc.union(&self.region(i, k)));
                out.insert((i, ks), self.is_regular_open(i, &u));
            }
        }
        out
    }
}
