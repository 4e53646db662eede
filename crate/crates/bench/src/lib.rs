//! Inputs shared by the kernel benchmarks.

use obstrukt_core::catalog::{self, CatalogEntry};
use obstrukt_core::invariants::base_point;
use obstrukt_core::probes::{fiber_sphere_probe, probe_set, QuadCycleMesh, TorsionChain};
use obstrukt_core::symcore::{random_points, CovectorPoint, Geometry, HermitianMatrix};

pub fn entry(id: &str) -> CatalogEntry {
    catalog::by_id(id).expect("catalog id")
}

/// Symbol values of `id` at `count` seeded points.
pub fn matrices(id: &str, count: usize) -> Vec<HermitianMatrix> {
    let e = entry(id);
    random_points(e.symbol.geometry(), count, 7)
        .iter()
        .map(|p| e.symbol.eval(p).expect("symbol evaluates"))
        .collect()
}

pub fn points(geometry: Geometry, count: usize) -> Vec<CovectorPoint> {
    random_points(geometry, count, 11)
}

pub fn fiber_sphere(n: usize) -> QuadCycleMesh {
    fiber_sphere_probe(Geometry::T3, &base_point(Geometry::T3), n).expect("fiber probe")
}

pub fn belt_chain(n: usize) -> TorsionChain {
    probe_set(Geometry::S2, n).expect("probe set").torsion.expect("S2 carries a torsion chain")
}
