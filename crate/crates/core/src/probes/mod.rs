//! Discretized 2-cycles, loops, the torsion chain and cosphere graphs.

mod belt;
pub mod cubed;
mod graph;

use std::collections::HashMap;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::quat;
use crate::symcore::point::{norm, CovectorPoint, Geometry};
use crate::symcore::validate::random_points;

pub use belt::{belt_trick_chain, belt_vertex, TorsionChain};
pub use cubed::{cubed_sphere, SphereMesh};
pub use graph::{cosphere_graph, CosphereGraph};

/// Base point of the T3 fiber probe.
pub const T3_BASE_POINT: [f64; 3] = [0.1, 0.2, 0.3];
/// Base point of the S3 fiber probe (identity quaternion).
pub const S3_BASE_POINT: [f64; 4] = quat::ONE;
/// Fixed unit covector of the T3 coordinate tori.
pub const T3_TORUS_COVECTOR: [f64; 3] = [0.6, 0.0, 0.8];
/// Fixed coordinates of the three T2 probes: `theta`, `x2`, `x1`.
pub const T2_OFFSETS: [f64; 3] = [0.3, 0.7, 1.1];

/// How a mesh was built, so that it can be rebuilt at another resolution.
#[derive(Debug, Clone, PartialEq)]
pub enum MeshRecipe {
    FiberSphere { geometry: Geometry, x0: [f64; 4] },
    Torus { geometry: Geometry, index: usize },
    /// No refinement rule.
    Fixed,
}

/// Oriented quad mesh of a closed surface (or of a chain with boundary).
///
/// Degenerate quads with a repeated corner stand for triangles.
#[derive(Debug, Clone)]
pub struct QuadCycleMesh {
    pub label: String,
    pub resolution: usize,
    pub vertices: Vec<CovectorPoint>,
    pub quads: Vec<[usize; 4]>,
    pub recipe: MeshRecipe,
    pub reversed: bool,
}

impl QuadCycleMesh {
    /// Corners of a face with repeated consecutive corners removed.
    pub fn face(&self, q: usize) -> Vec<usize> {
        dedup_cycle(&self.quads[q])
    }

    /// Directed edges of all faces, skipping collapsed ones.
    fn directed_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(4 * self.quads.len());
        for q in 0..self.quads.len() {
            let f = self.face(q);
            for k in 0..f.len() {
                out.push((f[k], f[(k + 1) % f.len()]));
            }
        }
        out
    }

    /// Directed edges that are not matched by an opposite edge.
    pub fn boundary_edges(&self) -> Result<Vec<(usize, usize)>> {
        let mut count: HashMap<(usize, usize), usize> = HashMap::new();
        for e in self.directed_edges() {
            *count.entry(e).or_default() += 1;
        }
        if let Some((e, _)) = count.iter().find(|(_, &c)| c > 1) {
            return Err(self.invalid(format!("directed edge {e:?} used twice")));
        }
        let mut bnd: Vec<(usize, usize)> = count
            .keys()
            .filter(|(a, b)| !count.contains_key(&(*b, *a)))
            .copied()
            .collect();
        bnd.sort_unstable();
        Ok(bnd)
    }

    /// Every directed edge appears once, with its reverse appearing once.
    pub fn check_closed(&self) -> Result<()> {
        let bnd = self.boundary_edges()?;
        if !bnd.is_empty() {
            return Err(self.invalid(format!("{} unmatched edges, e.g. {:?}", bnd.len(), bnd[0])));
        }
        self.check_vertices()
    }

    pub fn check_vertices(&self) -> Result<()> {
        for (i, v) in self.vertices.iter().enumerate() {
            v.check(1e-12)
                .map_err(|e| self.invalid(format!("vertex {i}: {e}")))?;
            if (v.xi_norm() - 1.0).abs() > 1e-12 {
                return Err(self.invalid(format!("vertex {i} covector not unit")));
            }
        }
        if let Some(q) = self.quads.iter().find(|q| q.iter().any(|&i| i >= self.vertices.len())) {
            return Err(self.invalid(format!("quad {q:?} references a missing vertex")));
        }
        Ok(())
    }

    /// Same surface with every face orientation reversed.
    pub fn reversed(&self) -> QuadCycleMesh {
        let mut m = self.clone();
        for q in m.quads.iter_mut() {
            q.reverse();
        }
        m.reversed = !m.reversed;
        m
    }

    /// The same probe rebuilt at resolution `2n`.
    pub fn refined(&self) -> Result<QuadCycleMesh> {
        let n = 2 * self.resolution;
        let m = match &self.recipe {
            MeshRecipe::FiberSphere { geometry, x0 } => fiber_sphere_probe(*geometry, x0, n)?,
            MeshRecipe::Torus { geometry, index } => torus_probes(*geometry, n)?.swap_remove(*index),
            MeshRecipe::Fixed => {
                return Err(self.invalid("mesh has no refinement rule".into()));
            }
        };
        Ok(if self.reversed { m.reversed() } else { m })
    }

    fn invalid(&self, reason: String) -> Error {
        Error::InvalidMesh {
            label: self.label.clone(),
            reason,
        }
    }
}

pub(crate) fn dedup_cycle(q: &[usize]) -> Vec<usize> {
    let mut f: Vec<usize> = Vec::with_capacity(q.len());
    for &v in q {
        if f.last() != Some(&v) {
            f.push(v);
        }
    }
    while f.len() > 1 && f.first() == f.last() {
        f.pop();
    }
    f
}

/// Closed loop of points; the last vertex connects back to the first.
#[derive(Debug, Clone)]
pub struct LoopPath {
    pub label: String,
    pub vertices: Vec<CovectorPoint>,
}

impl LoopPath {
    pub fn reversed(&self) -> LoopPath {
        let mut v = self.vertices.clone();
        v.reverse();
        LoopPath {
            label: self.label.clone(),
            vertices: v,
        }
    }
}

/// Registered probes of one geometry.
#[derive(Debug, Clone)]
pub struct ProbeSet {
    pub geometry: Geometry,
    pub cycles: Vec<QuadCycleMesh>,
    pub torsion: Option<TorsionChain>,
    pub completeness_note: &'static str,
}

/// Cubed-sphere mesh of the unit covector sphere over `x0`.
///
/// On T3 the covector is `u` itself; on S3 it is `sum_j u_j e_j(x0)` with the
/// left-invariant frame.
pub fn fiber_sphere_probe(geometry: Geometry, x0: &[f64], n: usize) -> Result<QuadCycleMesh> {
    if geometry.base_dim() != 3 {
        return Err(Error::UnsupportedGeometry {
            geometry: geometry.name(),
            operation: "fiber sphere probe",
        });
    }
    if n < 4 {
        return Err(Error::InvalidParameter(format!("fiber sphere resolution {n} < 4")));
    }
    let d = geometry.ambient_dim();
    if x0.len() != d {
        return Err(Error::InvalidPoint(format!("{geometry} base point needs {d} components")));
    }
    let mesh = cubed_sphere(n);
    let mut vertices = Vec::with_capacity(mesh.points.len());
    for u in &mesh.points {
        let p = match geometry {
            Geometry::T3 => CovectorPoint::new(geometry, x0, u)?,
            _ => {
                let x = [x0[0], x0[1], x0[2], x0[3]];
                let e = quat::s3_frame(&x);
                let mut xi = [0.0; 4];
                for (j, ej) in e.iter().enumerate() {
                    for k in 0..4 {
                        xi[k] += u[j] * ej[k];
                    }
                }
                let t: f64 = (0..4).map(|k| xi[k] * x[k]).sum();
                for k in 0..4 {
                    xi[k] -= t * x[k];
                }
                let r = norm(&xi);
                CovectorPoint::new(geometry, &x, &xi.map(|v| v / r))?
            }
        };
        vertices.push(p);
    }
    let mut padded = [0.0; 4];
    padded[..d].copy_from_slice(x0);
    Ok(QuadCycleMesh {
        label: format!("fiber-sphere-{}", geometry.name().to_lowercase()),
        resolution: n,
        vertices,
        quads: mesh.quads,
        recipe: MeshRecipe::FiberSphere {
            geometry,
            x0: padded,
        },
        reversed: false,
    })
}

fn torus_mesh(
    label: String,
    n: usize,
    geometry: Geometry,
    index: usize,
    point: impl Fn(f64, f64) -> Result<CovectorPoint>,
) -> Result<QuadCycleMesh> {
    let mut vertices = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            vertices.push(point(TAU * i as f64 / n as f64, TAU * j as f64 / n as f64)?);
        }
    }
    let id = |i: usize, j: usize| (i % n) * n + (j % n);
    let mut quads = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            quads.push([id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    Ok(QuadCycleMesh {
        label,
        resolution: n,
        vertices,
        quads,
        recipe: MeshRecipe::Torus { geometry, index },
        reversed: false,
    })
}

/// Coordinate 2-tori of the cosphere bundle of a flat torus.
///
/// On T2, in coordinates `(x1, x2, theta)` with `xi = (cos theta, sin theta)`:
/// the `(x1, x2)` torus at `theta = 0.3`, the `(x1, theta)` torus at
/// `x2 = 0.7` and the `(x2, theta)` torus at `x1 = 1.1`. On T3: the three
/// `(x_a, x_b)` tori at `xi = (0.6, 0, 0.8)`, remaining coordinate from
/// [`T3_BASE_POINT`].
pub fn torus_probes(geometry: Geometry, n: usize) -> Result<Vec<QuadCycleMesh>> {
    if n < 8 {
        return Err(Error::InvalidParameter(format!("torus probe resolution {n} < 8")));
    }
    match geometry {
        Geometry::T2 => {
            let [theta0, x2_0, x1_0] = T2_OFFSETS;
            let pt = |x1: f64, x2: f64, th: f64| {
                CovectorPoint::new(Geometry::T2, &[x1, x2], &[th.cos(), th.sin()])
            };
            Ok(vec![
                torus_mesh("t2-x1x2".into(), n, geometry, 0, |a, b| pt(a, b, theta0))?,
                torus_mesh("t2-x1theta".into(), n, geometry, 1, |a, b| pt(a, x2_0, b))?,
                torus_mesh("t2-x2theta".into(), n, geometry, 2, |a, b| pt(x1_0, a, b))?,
            ])
        }
        Geometry::T3 => {
            let mut out = Vec::new();
            for (index, (a, b)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
                let label = format!("t3-x{}x{}", a + 1, b + 1);
                out.push(torus_mesh(label, n, geometry, index, |u, v| {
                    let mut x = T3_BASE_POINT;
                    x[a] = u;
                    x[b] = v;
                    CovectorPoint::new(Geometry::T3, &x, &T3_TORUS_COVECTOR)
                })?);
            }
            Ok(out)
        }
        _ => Err(Error::UnsupportedGeometry {
            geometry: geometry.name(),
            operation: "torus probes",
        }),
    }
}

/// Loop resolution of the torsion chain used at probe resolution `n`.
pub fn chain_resolution(n: usize) -> (usize, usize) {
    ((2 * n).max(32), n.max(16))
}

/// Registered probes of `geometry` at resolution `n`.
pub fn probe_set(geometry: Geometry, n: usize) -> Result<ProbeSet> {
    Ok(match geometry {
        Geometry::S2 => {
            let (nl, nd) = chain_resolution(n);
            ProbeSet {
                geometry,
                cycles: Vec::new(),
                torsion: Some(belt_trick_chain(nl, nd)?),
                completeness_note: "S*S2 is RP3 with H2 = Z/2; detected by the torsion chain",
            }
        }
        Geometry::T2 => ProbeSet {
            geometry,
            cycles: torus_probes(geometry, n)?,
            torsion: None,
            completeness_note: "S*T2 is T3; the three coordinate 2-tori generate H2",
        },
        Geometry::T3 => {
            let mut cycles = vec![fiber_sphere_probe(geometry, &T3_BASE_POINT, n)?];
            cycles.extend(torus_probes(geometry, n)?);
            ProbeSet {
                geometry,
                cycles,
                torsion: None,
                completeness_note: "S*T3 is T3 x S2; fiber sphere plus coordinate 2-tori generate H2",
            }
        }
        Geometry::S3 => ProbeSet {
            geometry,
            cycles: vec![fiber_sphere_probe(geometry, &S3_BASE_POINT, n)?],
            torsion: None,
            completeness_note: "the framing gives S*S3 = S3 x S2, whose H2 is generated by the fiber class",
        },
    })
}

/// Probe-mesh vertices of `geometry` at resolution `n` followed by `extra`
/// seeded random points.
pub fn validation_samples(geometry: Geometry, n: usize, extra: usize, seed: u64) -> Result<Vec<CovectorPoint>> {
    let set = probe_set(geometry, n)?;
    let mut out: Vec<CovectorPoint> = Vec::new();
    for c in &set.cycles {
        out.extend_from_slice(&c.vertices);
    }
    if let Some(t) = &set.torsion {
        out.extend_from_slice(&t.sigma.vertices);
    }
    out.extend(random_points(geometry, extra, seed));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fiber_sphere_small() {
        let m = fiber_sphere_probe(Geometry::T3, &T3_BASE_POINT, 4).unwrap();
        assert_eq!(m.quads.len(), 96);
        assert_eq!(m.vertices.len(), 98);
        m.check_closed().unwrap();
        for v in &m.vertices {
            assert!((v.xi_norm() - 1.0).abs() < 1e-14);
            assert_eq!(v.x(), &T3_BASE_POINT);
        }
        assert!(fiber_sphere_probe(Geometry::T2, &[0.0, 0.0], 4).is_err());
        assert!(fiber_sphere_probe(Geometry::T3, &T3_BASE_POINT, 3).is_err());
    }

    #[test]
    fn s3_fiber_sphere_is_tangent() {
        let x = [0.5, 0.5, -0.5, 0.5];
        let m = fiber_sphere_probe(Geometry::S3, &x, 6).unwrap();
        m.check_closed().unwrap();
        let id = fiber_sphere_probe(Geometry::S3, &S3_BASE_POINT, 4).unwrap();
        // at the identity the covector is the cube-sphere point in (i, j, k)
        let raw = cubed_sphere(4);
        for (v, u) in id.vertices.iter().zip(&raw.points) {
            assert_eq!(v.xi()[0], 0.0);
            for (a, b) in v.xi()[1..].iter().zip(u) {
                assert!((a - b).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn t2_tori() {
        let t = torus_probes(Geometry::T2, 8).unwrap();
        assert_eq!(t.len(), 3);
        for m in &t {
            assert_eq!(m.quads.len(), 64);
            m.check_closed().unwrap();
        }
        let xi0 = t[0].vertices[0].xi().to_vec();
        assert!(t[0].vertices.iter().all(|v| v.xi() == xi0.as_slice()));
        assert!(torus_probes(Geometry::S2, 8).is_err());
        assert!(torus_probes(Geometry::T2, 4).is_err());
    }

    #[test]
    fn registered_sets() {
        let s2 = probe_set(Geometry::S2, 8).unwrap();
        assert!(s2.cycles.is_empty() && s2.torsion.is_some());
        assert_eq!(probe_set(Geometry::T3, 8).unwrap().cycles.len(), 4);
        let t2 = probe_set(Geometry::T2, 8).unwrap();
        assert_eq!(t2.cycles.len(), 3);
        assert!(t2.torsion.is_none());
        assert_eq!(probe_set(Geometry::S3, 8).unwrap().cycles.len(), 1);
        for g in Geometry::ALL {
            let set = probe_set(g, 8).unwrap();
            let mut labels: Vec<&str> = set.cycles.iter().map(|c| c.label.as_str()).collect();
            let k = labels.len();
            labels.sort();
            labels.dedup();
            assert_eq!(labels.len(), k);
        }
    }

    #[test]
    fn refinement_and_reversal() {
        let m = torus_probes(Geometry::T3, 8).unwrap().swap_remove(1).reversed();
        let r = m.refined().unwrap();
        assert_eq!(r.resolution, 16);
        assert_eq!(r.label, m.label);
        assert!(r.reversed);
        r.check_closed().unwrap();
    }

    #[test]
    fn samples_cover_probes() {
        for g in Geometry::ALL {
            let s = validation_samples(g, 8, 100, 42).unwrap();
            assert!(s.len() >= 200);
        }
    }
}
