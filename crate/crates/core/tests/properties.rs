//! Cross-module properties of the invariants and the gauge construction
//! over the whole catalog.

use obstrukt_core::catalog::{self, controls};
use obstrukt_core::invariants::{
    base_point, chern_number, global_obstruction, local_obstruction, InvariantReport, InvariantValue,
};
use obstrukt_core::probes::{fiber_sphere_probe, probe_set, QuadCycleMesh};
use obstrukt_core::symcore::{inner, CMatrix, Geometry, C64};
use obstrukt_core::trivialize::cross_check_report;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Gram-Schmidt on a complex Gaussian matrix.
fn random_unitary(m: usize, seed: u64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cols: Vec<Vec<C64>> = Vec::new();
    while cols.len() < m {
        let mut v: Vec<C64> = (0..m)
            .map(|_| C64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
            .collect();
        for c in &cols {
            let p = inner(c, &v);
            for (a, b) in v.iter_mut().zip(c) {
                *a -= p * b;
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-6 {
            cols.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    let mut u = CMatrix::zeros(m);
    for (j, c) in cols.iter().enumerate() {
        for i in 0..m {
            u[(i, j)] = c[i];
        }
    }
    u
}

/// Every closed probe of a geometry, the fiber sphere included.
fn closed_probes(g: Geometry, n: usize) -> Vec<QuadCycleMesh> {
    let mut out = probe_set(g, n).unwrap().cycles;
    if g.base_dim() == 3 && !out.iter().any(|m| m.label.contains("fiber")) {
        out.push(fiber_sphere_probe(g, &base_point(g), n).unwrap());
    }
    out
}

fn chern(r: &InvariantReport) -> i64 {
    match r.value {
        InvariantValue::Chern(c) => c,
        other => panic!("expected a Chern number, got {other:?}"),
    }
}

fn assert_same_evidence(a: &[InvariantReport], b: &[InvariantReport]) {
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(b) {
        assert_eq!(x.probe_label, y.probe_label);
        match (x.value, y.value) {
            (InvariantValue::Berry(p), InvariantValue::Berry(q)) => assert!((p - q).abs() < 1e-12, "{p} vs {q}"),
            (p, q) => assert_eq!(p, q, "{}", x.probe_label),
        }
    }
}

#[test]
fn verdicts_are_invariant_under_unitary_conjugation() {
    for e in catalog::all() {
        let f = &e.symbol;
        let x0 = base_point(f.geometry());
        for seed in 0..5 {
            let g = f.conjugated(&random_unitary(f.m(), seed)).unwrap();
            for b in 0..f.m() {
                let (l0, l1) = (local_obstruction(f, &x0, b, 16).unwrap(), local_obstruction(&g, &x0, b, 16).unwrap());
                let (g0, g1) = (global_obstruction(f, b, 16).unwrap(), global_obstruction(&g, b, 16).unwrap());
                assert_eq!(l0.obstructed, l1.obstructed, "{} band {b}", e.id());
                assert_eq!(g0.obstructed, g1.obstructed, "{} band {b}", e.id());
                assert_same_evidence(&l0.evidence, &l1.evidence);
                assert_same_evidence(&g0.evidence, &g1.evidence);
            }
        }
    }
}

#[test]
fn chern_numbers_sum_to_zero_over_bands() {
    for e in catalog::all() {
        let f = &e.symbol;
        for mesh in closed_probes(f.geometry(), 16) {
            let total: i64 = (0..f.m()).map(|b| chern(&chern_number(f, b, &mesh).unwrap())).sum();
            assert_eq!(total, 0, "{} on {}", e.id(), mesh.label);
        }
    }
}

#[test]
fn reversing_a_probe_negates_its_chern_number() {
    for e in catalog::all() {
        let f = &e.symbol;
        for mesh in closed_probes(f.geometry(), 16) {
            for b in 0..f.m() {
                let c = chern(&chern_number(f, b, &mesh).unwrap());
                let r = chern(&chern_number(f, b, &mesh.reversed()).unwrap());
                assert_eq!(r, -c, "{} band {b} on {}", e.id(), mesh.label);
            }
        }
    }
}

#[test]
fn degree_one_torus_map_has_unit_chern_number() {
    let f = controls::degree_one_t2();
    for n in [32, 64] {
        let mesh = probe_set(Geometry::T2, n)
            .unwrap()
            .cycles
            .into_iter()
            .find(|m| m.label == "t2-x1x2")
            .unwrap();
        let lower = chern_number(&f, 0, &mesh).unwrap();
        let upper = chern_number(&f, 1, &mesh).unwrap();
        assert_eq!(chern(&lower).abs(), 1, "n = {n}");
        assert_eq!(chern(&lower) + chern(&upper), 0);
        assert!(lower.residual < 1e-6);
    }
}

#[test]
fn gauge_construction_agrees_with_the_verdicts() {
    for e in catalog::all() {
        for b in 0..e.symbol.m() {
            let r = cross_check_report(&e.symbol, b, 8);
            assert!(r.consistent, "{r:?}");
        }
    }
}

#[test]
fn chern_numbers_are_stable_under_refinement() {
    for e in catalog::all() {
        let f = &e.symbol;
        let coarse = closed_probes(f.geometry(), 16);
        let fine = closed_probes(f.geometry(), 32);
        for (a, b) in coarse.iter().zip(&fine) {
            assert_eq!(a.label, b.label);
            for band in 0..f.m() {
                assert_eq!(
                    chern(&chern_number(f, band, a).unwrap()),
                    chern(&chern_number(f, band, b).unwrap()),
                    "{} band {band} on {}",
                    e.id(),
                    a.label
                );
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn fiber_chern_numbers_ignore_the_unitary(seed in any::<u64>()) {
        let e = catalog::dirac3_flat();
        let g = e.symbol.conjugated(&random_unitary(2, seed)).unwrap();
        let mesh = fiber_sphere_probe(Geometry::T3, &base_point(Geometry::T3), 16).unwrap();
        for b in 0..2 {
            prop_assert_eq!(
                chern(&chern_number(&e.symbol, b, &mesh).unwrap()),
                chern(&chern_number(&g, b, &mesh).unwrap())
            );
        }
    }
}
