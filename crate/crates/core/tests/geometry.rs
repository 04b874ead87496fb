use std::f64::consts::PI;

use nonhaus_core::cohomology::{build_bicomplex, total_betti};
use nonhaus_core::fixtures;
use nonhaus_core::flavor::OpenCore;
use nonhaus_core::geometry::{curvature_ledger, gauss_bonnet_report, TOLERANCE};

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOLERANCE
}

fn surfaces() -> Vec<(&'static str, nonhaus_core::adjunction::AdjunctionSystem)> {
    vec![
        ("single_icosahedron", fixtures::single_icosahedron()),
        ("glued_icosahedra", fixtures::glued_icosahedra()),
        ("glued_flat_tori", fixtures::glued_flat_tori()),
    ]
}

#[test]
fn every_domain_satisfies_gauss_bonnet_with_boundary() {
    for (name, s) in surfaces() {
        for t in curvature_ledger(&s).unwrap().tuples {
            let lhs = 2.0 * PI * t.chi as f64;
            assert!(close(t.interior_defects + t.turning_total, lhs), "{name} {:?}", t.tuple);
            if t.tuple.len() == 1 {
                assert!(t.turning.is_empty());
            }
        }
    }
}

#[test]
fn reports_balance_and_use_open_flavor_chi() {
    for (name, s) in surfaces() {
        let r = gauss_bonnet_report(&s).unwrap();
        assert!(r.balanced(), "{name}: {}", r.residual);
        let betti = total_betti(&build_bicomplex(&s, &OpenCore, None).unwrap());
        let chi: i64 = betti.iter().enumerate().map(|(q, &b)| if q % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
        assert_eq!(r.chi, chi, "{name}");
    }
}

#[test]
fn golden_ledgers() {
    let single = gauss_bonnet_report(&fixtures::single_icosahedron()).unwrap();
    assert!(close(single.curvature, 4.0 * PI));

    let ico = gauss_bonnet_report(&fixtures::glued_icosahedra()).unwrap();
    assert_eq!(ico.chi, 3);
    assert!(close(ico.lhs, 6.0 * PI));
    // 4π + 4π − π/3 interior, minus five turnings of π/3
    assert!(close(ico.curvature, 8.0 * PI - PI / 3.0));
    assert!(close(ico.counterterms, -5.0 * PI / 3.0));

    let tori = gauss_bonnet_report(&fixtures::glued_flat_tori()).unwrap();
    assert_eq!(tori.chi, 0);
    assert!(close(tori.lhs, 0.0) && close(tori.rhs, 0.0));
    let pair = tori.ledger.tuples.iter().find(|t| t.tuple.len() == 2).unwrap();
    assert!(!pair.turning.is_empty());
    assert!(pair.turning.iter().all(|t| close(t.angle, 0.0)));
}

#[test]
fn doubled_frontier_vertices_carry_their_own_defects() {
    let s = fixtures::glued_icosahedra();
    let l = curvature_ledger(&s).unwrap();
    let frontier: Vec<_> = s.hausdorff_pairs().into_iter().filter(|h| h.left.1.starts_with('v')).collect();
    assert_eq!(frontier.len(), 5);
    for h in frontier {
        for (piece, id) in [h.left, h.right] {
            assert!(l.vertex_defects.iter().any(|d| d.piece == piece && d.vertex == id));
        }
    }
}
