mod common;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use nonhaus_core::adjunction::{AdjunctionSystem, GluingMap};
use nonhaus_core::cochain::{
    coboundary, integrate, integrate_by_classes, integrate_over_chain, stokes_defect, Chain, GlobalCochain,
};
use nonhaus_core::cohomology::{build_bicomplex, mv_report};
use nonhaus_core::complex::{Cell, CellComplex};
use nonhaus_core::fixtures;
use nonhaus_core::flavor::{ClosedIntersection, IntersectionFlavor, OpenCore};
use nonhaus_core::rational::{q, Q};
use nonhaus_core::subdivide::subdivide_edges;

fn random_chain(rng: &mut impl Rng, s: &AdjunctionSystem, degree: usize) -> Chain {
    let mut terms = Vec::new();
    for (i, p) in s.pieces().iter().enumerate() {
        for &c in p.cells_of_dim(degree) {
            if rng.gen_bool(0.4) {
                terms.push(((i, c), random_q(rng)));
            }
        }
    }
    Chain::new(s, degree, terms).unwrap()
}

#[test]
fn d_squared_vanishes_on_every_fixture() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for (name, s) in valid_fixtures() {
        let top = s.top_dimension().unwrap();
        for q in 0..top.saturating_sub(1) {
            let w = random_global(&mut rng, &s, q);
            for (p, c) in s.pieces().iter().zip(&w.components) {
                let dd = coboundary(p, &coboundary(p, c).unwrap()).unwrap();
                assert!(dd.is_zero(), "{name} degree {q}");
            }
        }
    }
}

#[test]
fn bicomplex_identities_hold_for_both_flavors() {
    for (name, s) in valid_fixtures() {
        for f in [&ClosedIntersection as &dyn IntersectionFlavor, &OpenCore] {
            let Ok(b) = build_bicomplex(&s, f, None) else {
                assert!(s.closure_intersection_violation().is_some(), "{name}");
                continue;
            };
            for p in 0..b.columns.len() {
                for q in 0..=b.top {
                    if p + 2 < b.columns.len() {
                        assert!(b.delta[p + 1][q].mul(&b.delta[p][q]).is_zero(), "{name}");
                    }
                    if q + 2 <= b.top {
                        assert!(b.d[p][q + 1].mul(&b.d[p][q]).is_zero(), "{name}");
                    }
                    if p + 1 < b.columns.len() && q < b.top {
                        assert_eq!(b.d[p + 1][q].mul(&b.delta[p][q]), b.delta[p][q + 1].mul(&b.d[p][q]), "{name}");
                    }
                }
            }
            let total = b.total();
            for k in 1..total.differentials.len() {
                assert!(total.differentials[k].mul(&total.differentials[k - 1]).is_zero(), "{name}");
            }
        }
    }
}

#[test]
fn chain_boundary_squares_to_zero_and_pairs_with_coboundary() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let fixtures = valid_fixtures();
    for round in 0..200 {
        let (name, s) = &fixtures[round % fixtures.len()];
        let top = s.top_dimension().unwrap();
        let q = rng.gen_range(0..top);
        let w = random_global(&mut rng, s, q);
        let c = random_chain(&mut rng, s, q + 1);
        let dw = w.coboundary(s).unwrap();
        let lhs = integrate_over_chain(&dw, &c).unwrap();
        let rhs = integrate_over_chain(&w, &c.boundary(s).unwrap()).unwrap();
        assert_eq!(lhs, rhs, "{name} round {round}");
        if q + 2 <= top {
            let c2 = random_chain(&mut rng, s, q + 2);
            assert!(c2.boundary(s).unwrap().boundary(s).unwrap().terms.is_empty(), "{name}");
        }
    }
}

#[test]
fn mv_sequences_have_zero_alternating_sum() {
    for (name, s) in valid_fixtures() {
        if s.len() != 2 {
            continue;
        }
        for f in [&ClosedIntersection as &dyn IntersectionFlavor, &OpenCore] {
            let r = mv_report(&s, f).unwrap();
            assert_eq!(r.alternating_sum, 0, "{name} {}", f.name());
            assert!(r.matches_total, "{name} {}", f.name());
        }
    }
}

#[test]
fn stokes_sweep_on_glued_circles() {
    let s = fixtures::glued_circles();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut nonzero = 0;
    for _ in 0..150 {
        let w = random_global(&mut rng, &s, 0);
        let (lhs, rhs) = stokes_defect(&s, &w).unwrap();
        assert_eq!(lhs, rhs);
        if !lhs.is_zero() {
            nonzero += 1;
        }
    }
    // exact forms genuinely fail to integrate to zero
    assert!(nonzero > 100);

    let c = fixtures::glued_circles_clopen();
    for _ in 0..20 {
        let w = random_global(&mut rng, &c, 0);
        assert_eq!(stokes_defect(&c, &w).unwrap(), (q(0), q(0)));
    }
}

#[test]
fn stokes_on_frontier_indicator_is_unit() {
    // direct summation: dw = ±1 on the two edges at v0 in each piece
    let s = fixtures::glued_circles();
    let classes = s.closure_cell_classes();
    for id in ["v0", "v3"] {
        let v = s.piece(0).lookup(id).unwrap();
        let k = classes.class_of(0, v).unwrap();
        let w = GlobalCochain::from_closure_classes(&s, 0, |c| if c == k { q(1) } else { q(0) });
        let (lhs, rhs) = stokes_defect(&s, &w).unwrap();
        let direct: Q = {
            let p = s.piece(0);
            let o = &s.orientations().unwrap()[0];
            let region = s.region(0, 1);
            let closure = p.closure(&region);
            -p.cofaces(v)
                .iter()
                .filter(|(c, _)| closure.contains(*c))
                .map(|&(c, sg)| q(i64::from(sg) * i64::from(o.sign(c))))
                .fold(q(0), |a, b| a + b)
        };
        assert_eq!(lhs, rhs);
        assert_eq!(rhs, direct);
        assert!(lhs == q(1) || lhs == q(-1));
    }
}

fn two_squares() -> AdjunctionSystem {
    // a strip of two unit squares; the left square and its open edges are glued
    let cells = vec![
        Cell::new("a", 0),
        Cell::new("b", 0),
        Cell::new("c", 0),
        Cell::new("d", 0),
        Cell::new("e", 0),
        Cell::new("f", 0),
        Cell::with_faces("ab", 1, [("a", -1), ("b", 1)]),
        Cell::with_faces("bc", 1, [("b", -1), ("c", 1)]),
        Cell::with_faces("de", 1, [("d", -1), ("e", 1)]),
        Cell::with_faces("ef", 1, [("e", -1), ("f", 1)]),
        Cell::with_faces("ad", 1, [("a", -1), ("d", 1)]),
        Cell::with_faces("be", 1, [("b", -1), ("e", 1)]),
        Cell::with_faces("cf", 1, [("c", -1), ("f", 1)]),
        Cell::with_faces("L", 2, [("ab", 1), ("be", 1), ("de", -1), ("ad", -1)]),
        Cell::with_faces("R", 2, [("bc", 1), ("cf", 1), ("ef", -1), ("be", -1)]),
    ];
    let p = CellComplex::new(cells);
    let g = GluingMap::by_id((&p, &p), (0, 1), &["L"]).unwrap();
    AdjunctionSystem::new(vec!["M1".into(), "M2".into()], vec![p.clone(), p], vec![g]).with_uniform_orientations()
}

#[test]
fn binary_integral_is_sum_minus_closure_term() {
    let s = two_squares();
    assert!(s.validate().is_valid(), "{}", s.validate());
    let w = GlobalCochain::from_closure_classes(&s, 2, |k| q(k as i64 + 2));
    let p = s.piece(0);
    let (l, r) = (p.lookup("L").unwrap(), p.lookup("R").unwrap());
    let i1 = w.components[0].value(l) + w.components[0].value(r);
    let i2 = w.components[1].value(l) + w.components[1].value(r);
    let i12 = w.components[0].value(l);
    assert_eq!(integrate(&s, &w).unwrap(), i1 + i2 - i12);
    assert_eq!(integrate_by_classes(&s, &w).unwrap(), integrate(&s, &w).unwrap());
}

#[test]
fn inclusion_exclusion_matches_class_sum_and_refinement() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut systems = valid_fixtures();
    systems.push(("two_squares", two_squares()));
    for (name, s) in systems {
        if s.orientations().is_none() {
            continue;
        }
        let top = s.top_dimension().unwrap();
        for _ in 0..5 {
            let w = random_global(&mut rng, &s, top);
            let value = integrate(&s, &w).unwrap();
            assert_eq!(value, integrate_by_classes(&s, &w).unwrap(), "{name}");
            let r = subdivide_edges(&s);
            assert_eq!(integrate(&r.system, &r.cochain(&w)).unwrap(), value, "{name} refined");
        }
    }
}

#[test]
fn integration_is_linear() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let s = fixtures::three_lines();
    for _ in 0..20 {
        let a = random_global(&mut rng, &s, 1);
        let b = random_global(&mut rng, &s, 1);
        let k = random_q(&mut rng);
        let lhs = integrate(&s, &a.add(&b.scale(&k))).unwrap();
        let rhs = integrate(&s, &a).unwrap() + k * integrate(&s, &b).unwrap();
        assert_eq!(lhs, rhs);
    }
}
