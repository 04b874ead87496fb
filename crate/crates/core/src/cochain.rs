//! Cellular cochains with rational coefficients, global cochains on an
//! adjunction system, integration and pairing with chains.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::adjunction::{tuples, AdjunctionSystem};
use crate::complex::{CellComplex, CellSet};
use crate::rational::Q;
use crate::{Error, Result};

/// Values on the degree-`q` cells of `owner`; missing entries are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    pub owner: CellSet,
    pub degree: usize,
    pub values: BTreeMap<usize, Q>,
}

impl Cochain {
    pub fn zero(owner: CellSet, degree: usize) -> Self {
        Self {
            owner,
            degree,
            values: BTreeMap::new(),
        }
    }

    pub fn new(complex: &CellComplex, owner: CellSet, degree: usize, values: BTreeMap<usize, Q>) -> Result<Self> {
        for &k in values.keys() {
            if !owner.contains(k) || complex.dim(k) != degree {
                return Err(Error::precondition(format!(
                    "cochain value on `{}` outside the degree-{degree} cells of its owner",
                    complex.id(k)
                )));
            }
        }
        let values = values.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(Self { owner, degree, values })
    }

    pub fn value(&self, cell: usize) -> Q {
        self.values.get(&cell).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(Zero::is_zero)
    }

    pub fn restrict(&self, subset: &CellSet) -> Cochain {
        Cochain {
            owner: subset.clone(),
            degree: self.degree,
            values: self
                .values
                .iter()
                .filter(|(k, _)| subset.contains(**k))
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        let mut values = self.values.clone();
        for (k, v) in &other.values {
            *values.entry(*k).or_insert_with(Q::zero) += v;
        }
        values.retain(|_, v| !v.is_zero());
        Cochain {
            owner: self.owner.clone(),
            degree: self.degree,
            values,
        }
    }

    pub fn scale(&self, s: &Q) -> Cochain {
        Cochain {
            owner: self.owner.clone(),
            degree: self.degree,
            values: self
                .values
                .iter()
                .map(|(k, v)| (*k, v * s))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }
}

/// `(dw)(c) = Σ_f [c:f] w(f)` over faces inside the owner.
///
/// On a face-closed owner this is the subcomplex coboundary; on a
/// star-closed owner, faces outside it carry zero (relative cochains).
pub fn coboundary(complex: &CellComplex, w: &Cochain) -> Result<Cochain> {
    if !complex.is_closed(&w.owner) && !complex.is_open(&w.owner) {
        return Err(Error::precondition(
            "coboundary needs a face-closed or star-closed owner",
        ));
    }
    let mut values = BTreeMap::new();
    for &c in complex.cells_of_dim(w.degree + 1) {
        if !w.owner.contains(c) {
            continue;
        }
        let v = complex
            .faces(c)
            .iter()
            .filter(|(f, _)| w.owner.contains(*f))
            .fold(Q::zero(), |acc, (f, s)| acc + w.value(*f) * Q::from_integer((*s).into()));
        if !v.is_zero() {
            values.insert(c, v);
        }
    }
    Ok(Cochain {
        owner: w.owner.clone(),
        degree: w.degree + 1,
        values,
    })
}

/// Copies `w` from its face-closed owner onto the whole piece, zero elsewhere.
pub fn extend_by_zero(complex: &CellComplex, w: &Cochain) -> Result<Cochain> {
    if !complex.is_closed(&w.owner) {
        return Err(Error::precondition("extension by zero needs a face-closed owner"));
    }
    Ok(Cochain {
        owner: complex.all(),
        degree: w.degree,
        values: w.values.clone(),
    })
}

/// One cochain per piece, agreeing under every closure extension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalCochain {
    pub degree: usize,
    pub components: Vec<Cochain>,
}

impl GlobalCochain {
    /// Assigns one value per closure class of degree-`q` cells; the result is
    /// compatible by construction.
    pub fn from_closure_classes(
        system: &AdjunctionSystem,
        degree: usize,
        mut value: impl FnMut(usize) -> Q,
    ) -> GlobalCochain {
        let classes = system.closure_cell_classes();
        let mut components: Vec<Cochain> = system
            .pieces()
            .iter()
            .map(|p| Cochain::zero(p.all(), degree))
            .collect();
        for (k, cl) in classes.classes.iter().enumerate() {
            let (p0, c0) = cl[0];
            if system.piece(p0).dim(c0) != degree {
                continue;
            }
            let v = value(k);
            if v.is_zero() {
                continue;
            }
            for &(p, c) in cl {
                components[p].values.insert(c, v.clone());
            }
        }
        GlobalCochain { degree, components }
    }

    pub fn component(&self, piece: usize) -> &Cochain {
        &self.components[piece]
    }

    pub fn coboundary(&self, system: &AdjunctionSystem) -> Result<GlobalCochain> {
        let components = self
            .components
            .iter()
            .zip(system.pieces())
            .map(|(w, p)| coboundary(p, w))
            .collect::<Result<_>>()?;
        Ok(GlobalCochain {
            degree: self.degree + 1,
            components,
        })
    }

    pub fn add(&self, other: &GlobalCochain) -> GlobalCochain {
        GlobalCochain {
            degree: self.degree,
            components: self.components.iter().zip(&other.components).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn scale(&self, s: &Q) -> GlobalCochain {
        GlobalCochain {
            degree: self.degree,
            components: self.components.iter().map(|w| w.scale(s)).collect(),
        }
    }
}

/// Checks agreement on the open regions and on their frontiers (through the
/// closure extension); both are required.
pub fn assemble_global(system: &AdjunctionSystem, components: Vec<Cochain>) -> Result<GlobalCochain> {
    if components.len() != system.len() {
        return Err(Error::precondition(format!(
            "expected {} components, got {}",
            system.len(),
            components.len()
        )));
    }
    let degree = components.first().map_or(0, |c| c.degree);
    for c in &components {
        if c.degree != degree {
            return Err(Error::Degree {
                expected: degree,
                found: c.degree,
            });
        }
    }
    let components: Vec<Cochain> = components
        .into_iter()
        .zip(system.pieces())
        .map(|(c, p)| Cochain { owner: p.all(), ..c })
        .collect();
    for on_frontier in [false, true] {
        for g in system.gluings() {
            let (i, j) = (g.source, g.target);
            if i > j {
                continue;
            }
            let src = system.piece(i);
            let cells = if on_frontier {
                src.closure(&g.source_region).difference(&g.source_region)
            } else {
                g.source_region.clone()
            };
            for c in cells.iter().filter(|&c| src.dim(c) == degree) {
                let Some(d) = g.apply_closure(c) else { continue };
                if components[i].value(c) != components[j].value(d) {
                    return Err(Error::Incompatible {
                        left_piece: i,
                        left_cell: src.id(c).to_string(),
                        right_piece: j,
                        right_cell: system.piece(j).id(d).to_string(),
                        on_frontier,
                    });
                }
            }
        }
    }
    Ok(GlobalCochain { degree, components })
}

fn top_degree(system: &AdjunctionSystem) -> Result<usize> {
    system
        .top_dimension()
        .ok_or_else(|| Error::precondition("system has no cells"))
}

fn oriented_sum(system: &AdjunctionSystem, piece: usize, w: &Cochain, cells: &CellSet, top: usize) -> Result<Q> {
    let o = system
        .orientations()
        .ok_or_else(|| Error::precondition("integration needs an oriented system"))?;
    let p = system.piece(piece);
    Ok(cells
        .iter()
        .filter(|&c| p.dim(c) == top)
        .fold(Q::zero(), |acc, c| acc + w.value(c) * Q::from_integer(o[piece].sign(c).into())))
}

/// `Σ_i ∫_{M_i} w − Σ_{p≥2} (−1)^p Σ_{i1<…<ip} ∫_{closure(M_{i1…ip})} w`,
/// closures taken in the smallest piece of each tuple.
pub fn integrate(system: &AdjunctionSystem, w: &GlobalCochain) -> Result<Q> {
    let top = top_degree(system)?;
    if w.degree != top {
        return Err(Error::Degree {
            expected: top,
            found: w.degree,
        });
    }
    let mut total = Q::zero();
    for t in tuples(system.len(), None) {
        let i0 = t[0];
        let p = system.piece(i0);
        let domain = p.closure(&system.intersection_in(i0, &t));
        let part = oriented_sum(system, i0, &w.components[i0], &domain, top)?;
        if t.len() % 2 == 1 {
            total += part;
        } else {
            total -= part;
        }
    }
    Ok(total)
}

/// Direct summation: each glued class of top cells counted once.
pub fn integrate_by_classes(system: &AdjunctionSystem, w: &GlobalCochain) -> Result<Q> {
    let top = top_degree(system)?;
    if w.degree != top {
        return Err(Error::Degree {
            expected: top,
            found: w.degree,
        });
    }
    let o = system
        .orientations()
        .ok_or_else(|| Error::precondition("integration needs an oriented system"))?;
    let classes = system.glued_cell_classes();
    Ok(classes
        .classes
        .iter()
        .map(|cl| cl[0])
        .filter(|&(p, c)| system.piece(p).dim(c) == top)
        .fold(Q::zero(), |acc, (p, c)| {
            acc + w.components[p].value(c) * Q::from_integer(o[p].sign(c).into())
        }))
}

/// Both sides of `∫_M dw = −∫_{∂M12} w` for a binary system of closed pieces.
pub fn stokes_defect(system: &AdjunctionSystem, w: &GlobalCochain) -> Result<(Q, Q)> {
    if system.len() != 2 {
        return Err(Error::precondition(
            "Stokes defect needs a binary system; use binary_decomposition first",
        ));
    }
    let top = top_degree(system)?;
    if top == 0 || w.degree + 1 != top {
        return Err(Error::Degree {
            expected: top.saturating_sub(1),
            found: w.degree,
        });
    }
    for (i, p) in system.pieces().iter().enumerate() {
        for &f in p.cells_of_dim(top - 1) {
            let n = p.cofaces(f).iter().filter(|(c, _)| p.dim(*c) == top).count();
            if n != 2 {
                return Err(Error::precondition(format!(
                    "piece {} has boundary at `{}`; pieces must be closed",
                    i + 1,
                    p.id(f)
                )));
            }
        }
    }
    let o = system
        .orientations()
        .ok_or_else(|| Error::precondition("Stokes defect needs an oriented system"))?;
    let lhs = integrate(system, &w.coboundary(system)?)?;

    let p = system.piece(0);
    let region = system.region(0, 1);
    let closure = p.closure(&region);
    let frontier = closure.difference(&region);
    let mut boundary_integral = Q::zero();
    for f in frontier.iter().filter(|&f| p.dim(f) == top - 1) {
        let induced: i64 = p
            .cofaces(f)
            .iter()
            .filter(|(c, _)| p.dim(*c) == top && closure.contains(*c))
            .map(|(c, s)| i64::from(o[0].sign(*c)) * i64::from(*s))
            .sum();
        boundary_integral += w.components[0].value(f) * Q::from_integer(induced.into());
    }
    Ok((lhs, -boundary_integral))
}

/// Rational combination of closure cell classes, keyed by canonical
/// `(piece, cell)` representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub degree: usize,
    pub terms: BTreeMap<(usize, usize), Q>,
}

impl Chain {
    pub fn new(system: &AdjunctionSystem, degree: usize, terms: impl IntoIterator<Item = ((usize, usize), Q)>) -> Result<Self> {
        let classes = system.closure_cell_classes();
        let mut out: BTreeMap<(usize, usize), Q> = BTreeMap::new();
        for ((p, c), v) in terms {
            if p >= system.len() || c >= system.piece(p).len() {
                return Err(Error::precondition("chain term refers to a missing cell"));
            }
            if system.piece(p).dim(c) != degree {
                return Err(Error::Degree {
                    expected: degree,
                    found: system.piece(p).dim(c),
                });
            }
            let rep = classes.representative(classes.class_of(p, c).expect("cell has a class"));
            *out.entry(rep).or_insert_with(Q::zero) += v;
        }
        out.retain(|_, v| !v.is_zero());
        Ok(Self { degree, terms: out })
    }

    pub fn boundary(&self, system: &AdjunctionSystem) -> Result<Chain> {
        if self.degree == 0 {
            return Chain::new(system, 0, []);
        }
        let terms: Vec<((usize, usize), Q)> = self
            .terms
            .iter()
            .flat_map(|(&(p, c), v)| {
                system
                    .piece(p)
                    .faces(c)
                    .iter()
                    .map(move |&(f, s)| ((p, f), v * Q::from_integer(s.into())))
            })
            .collect();
        Chain::new(system, self.degree - 1, terms)
    }
}

/// `⟨w, c⟩ = Σ coefficient · w(class)`.
pub fn integrate_over_chain(w: &GlobalCochain, c: &Chain) -> Result<Q> {
    if w.degree != c.degree {
        return Err(Error::Degree {
            expected: c.degree,
            found: w.degree,
        });
    }
    Ok(c.terms
        .iter()
        .fold(Q::zero(), |acc, (&(p, cell), v)| acc + v * w.components[p].value(cell)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::{q, q_frac};

    fn values(p: &CellComplex, pairs: &[(&str, i64)]) -> BTreeMap<usize, Q> {
        pairs.iter().map(|(id, v)| (p.lookup(id).unwrap(), q(*v))).collect()
    }

    #[test]
    fn constants_are_closed() {
        let p = fixtures::icosahedron();
        let ones = p.cells_of_dim(0).iter().map(|&v| (v, q(1))).collect();
        let w = Cochain::new(&p, p.all(), 0, ones).unwrap();
        assert!(coboundary(&p, &w).unwrap().is_zero());
    }

    #[test]
    fn coboundary_squares_to_zero_on_icosahedron() {
        let p = fixtures::icosahedron();
        let vals = p.cells_of_dim(0).iter().enumerate().map(|(k, &v)| (v, q(k as i64 * k as i64 - 3))).collect();
        let w = Cochain::new(&p, p.all(), 0, vals).unwrap();
        let dw = coboundary(&p, &w).unwrap();
        assert!(!dw.is_zero());
        assert!(coboundary(&p, &dw).unwrap().is_zero());
    }

    #[test]
    fn coboundary_of_endpoint_indicator() {
        let p = fixtures::path_complex(0, 1);
        let w = Cochain::new(&p, p.all(), 0, values(&p, &[("v1", 1)])).unwrap();
        let dw = coboundary(&p, &w).unwrap();
        assert_eq!(dw.value(p.lookup("e(0,1)").unwrap()), q(1));
        let w = Cochain::new(&p, p.all(), 0, values(&p, &[("v0", 1)])).unwrap();
        assert_eq!(coboundary(&p, &w).unwrap().value(p.lookup("e(0,1)").unwrap()), q(-1));
    }

    #[test]
    fn coboundary_on_open_owner_is_relative() {
        let p = fixtures::path_complex(-1, 1);
        let mut open = p.all();
        open.remove(p.lookup("v0").unwrap());
        let w = Cochain::new(&p, open.clone(), 0, values(&p, &[("v1", 1)])).unwrap();
        let dw = coboundary(&p, &w).unwrap();
        assert_eq!(dw.value(p.lookup("e(0,1)").unwrap()), q(1));
        let plain: CellSet = [p.lookup("v0").unwrap(), p.lookup("e(0,1)").unwrap()].into_iter().collect();
        assert!(coboundary(&p, &Cochain::zero(plain, 0)).is_err());
    }

    #[test]
    fn extension_by_zero() {
        let p = fixtures::path_complex(-2, 2);
        let owner = p.cell_set(["v0", "v1", "e(0,1)"]).unwrap();
        let zero = Cochain::zero(owner.clone(), 0);
        assert!(extend_by_zero(&p, &zero).unwrap().is_zero());
        let w = Cochain::new(&p, owner.clone(), 0, values(&p, &[("v0", 1)])).unwrap();
        let e = extend_by_zero(&p, &w).unwrap();
        assert_eq!(e.owner, p.all());
        assert_eq!(e.value(p.lookup("v0").unwrap()), q(1));
        assert_eq!(e.value(p.lookup("v2").unwrap()), q(0));
        assert_eq!(e.restrict(&owner), w);
        let open = p.cell_set(["e(0,1)"]).unwrap();
        assert!(extend_by_zero(&p, &Cochain::zero(open, 1)).is_err());
    }

    fn piece_cochain(s: &AdjunctionSystem, i: usize, vals: &[(&str, i64)]) -> Cochain {
        let p = s.piece(i);
        Cochain::new(p, p.all(), 0, values(p, vals)).unwrap()
    }

    #[test]
    fn assembly_on_line_with_two_origins() {
        let s = fixtures::line_two_origins();
        let vals = [("v-2", 1), ("v-1", 2), ("v0", 3), ("v1", 4), ("v2", 5)];
        let a = piece_cochain(&s, 0, &vals);
        let b = piece_cochain(&s, 1, &vals);
        assert!(assemble_global(&s, vec![a.clone(), b]).is_ok());

        let mut other = vals;
        other[2].1 = 7;
        let b = piece_cochain(&s, 1, &other);
        match assemble_global(&s, vec![a, b]) {
            Err(Error::Incompatible { on_frontier, left_cell, .. }) => {
                assert!(on_frontier);
                assert_eq!(left_cell, "v0");
            }
            other => panic!("expected frontier incompatibility, got {other:?}"),
        }
    }

    #[test]
    fn assembly_rejects_open_disagreement_first() {
        let s = fixtures::line_two_origins();
        let a = piece_cochain(&s, 0, &[("v1", 1)]);
        let b = piece_cochain(&s, 1, &[("v0", 1)]);
        assert!(matches!(
            assemble_global(&s, vec![a, b]),
            Err(Error::Incompatible { on_frontier: false, .. })
        ));
    }

    #[test]
    fn one_piece_assembles_anything() {
        let p = fixtures::cycle_complex(4);
        let s = AdjunctionSystem::new(vec!["M1".into()], vec![p.clone()], vec![]);
        let w = Cochain::new(&p, p.all(), 0, values(&p, &[("v2", 9)])).unwrap();
        assert!(assemble_global(&s, vec![w]).is_ok());
    }

    fn top_ones(s: &AdjunctionSystem) -> GlobalCochain {
        GlobalCochain::from_closure_classes(s, s.top_dimension().unwrap(), |_| q(1))
    }

    #[test]
    fn integral_of_disjoint_pieces_is_sum() {
        let p = fixtures::cycle_complex(5);
        let s = AdjunctionSystem::new(vec!["M1".into(), "M2".into()], vec![p.clone(), p], vec![])
            .with_uniform_orientations();
        assert_eq!(integrate(&s, &top_ones(&s)).unwrap(), q(10));
    }

    #[test]
    fn binary_inclusion_exclusion_on_glued_circles() {
        let s = fixtures::glued_circles();
        // 6 + 6 − 3 edges
        assert_eq!(integrate(&s, &top_ones(&s)).unwrap(), q(9));
        assert_eq!(integrate_by_classes(&s, &top_ones(&s)).unwrap(), q(9));
    }

    #[test]
    fn integration_needs_orientation() {
        let p = fixtures::cycle_complex(3);
        let s = AdjunctionSystem::new(vec!["M1".into()], vec![p], vec![]);
        assert!(integrate(&s, &top_ones(&s)).is_err());
    }

    #[test]
    fn stokes_on_glued_circles() {
        let s = fixtures::glued_circles();
        let zero_on_frontier = GlobalCochain::from_closure_classes(&s, 0, |k| q_frac(k as i64, 3));
        let frontier: Vec<usize> = ["v0", "v3"].iter().map(|id| s.piece(0).lookup(id).unwrap()).collect();
        let mut w = zero_on_frontier.clone();
        for comp in &mut w.components {
            for f in &frontier {
                comp.values.remove(f);
            }
        }
        assert_eq!(stokes_defect(&s, &w).unwrap(), (q(0), q(0)));

        let v0 = s.piece(0).lookup("v0").unwrap();
        let classes = s.closure_cell_classes();
        let target = classes.class_of(0, v0).unwrap();
        let ind = GlobalCochain::from_closure_classes(&s, 0, |k| if k == target { q(1) } else { q(0) });
        let (lhs, rhs) = stokes_defect(&s, &ind).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.clone() * lhs, q(1));

        let c = fixtures::glued_circles_clopen();
        let w = GlobalCochain::from_closure_classes(&c, 0, |k| q(k as i64));
        assert_eq!(stokes_defect(&c, &w).unwrap(), (q(0), q(0)));
    }

    #[test]
    fn stokes_rejects_non_binary_and_boundary() {
        let s = fixtures::three_lines();
        let w = GlobalCochain::from_closure_classes(&s, 0, |_| q(1));
        assert!(stokes_defect(&s, &w).is_err());
        let s = fixtures::line_two_origins();
        let w = GlobalCochain::from_closure_classes(&s, 0, |_| q(1));
        assert!(stokes_defect(&s, &w).is_err());
    }

    #[test]
    fn chain_pairing() {
        let s = fixtures::glued_circles();
        let w = GlobalCochain::from_closure_classes(&s, 0, |k| q(2 * k as i64 + 1));
        assert_eq!(integrate_over_chain(&w, &Chain::new(&s, 0, []).unwrap()).unwrap(), q(0));
        let v1 = s.piece(1).lookup("v1").unwrap();
        let single = Chain::new(&s, 0, [((1, v1), q(1))]).unwrap();
        assert_eq!(integrate_over_chain(&w, &single).unwrap(), w.components[1].value(v1));
        // the chain is keyed by its class representative in piece 1
        assert_eq!(single.terms.keys().next().unwrap().0, 0);

        // the cycle of piece 2 as a chain; ⟨dw, c⟩ = ⟨w, ∂c⟩ = 0
        let p = s.piece(1);
        let cycle = Chain::new(&s, 1, p.cells_of_dim(1).iter().map(|&e| ((1, e), q(1)))).unwrap();
        let dw = w.coboundary(&s).unwrap();
        let lhs = integrate_over_chain(&dw, &cycle).unwrap();
        let rhs = integrate_over_chain(&w, &cycle.boundary(&s).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        assert!(cycle.boundary(&s).unwrap().terms.is_empty());
        assert!(integrate_over_chain(&dw, &single).is_err());
    }
}
