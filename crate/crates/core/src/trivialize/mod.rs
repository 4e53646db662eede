//! Discrete global eigenvector fields over cosphere graphs, or a face whose
//! holonomy no phase choice removes.
//!
//! The construction is a spanning-tree gauge, a lift of the remaining link
//! angles to the reals by integrating plaquette phases, and a least-squares
//! phase correction on the graph Laplacian. Only the band vectors are kept
//! per vertex, so the largest graphs stay within memory.

mod cg;
mod unwrap;

use std::collections::VecDeque;
use std::f64::consts::{PI, TAU};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::invariants::{global_obstruction, MIN_OVERLAP};
use crate::probes::{cosphere_graph, CosphereGraph};
use crate::symcore::matrix::{inner, C64};
use crate::symcore::spectral::{decompose_matrix, GAP_TOL};
use crate::symcore::symbol::SymbolField;

pub use cg::{solve_laplacian, CgStats};

/// A face counts as a residue when its holonomy residual reaches this.
pub const FACE_TOL: f64 = 0.3;

/// Relative residual of the least-squares phase solve.
pub const LSQ_TOL: f64 = 1e-10;

const LSQ_MAX_ITER: usize = 20_000;

/// Largest edge defect compatible with success on a graph of resolution `n`.
pub fn defect_tol(n: usize) -> f64 {
    10.0 * TAU / n as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaugeStatus {
    Success,
    Failed,
}

/// The face with the largest holonomy residual after gauge fixing.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub face: usize,
    /// Vertices in cyclic order.
    pub cycle: Vec<usize>,
    pub edges: Vec<[usize; 2]>,
    /// Sum of link angles plus the plaquette phase; a multiple of `2 pi`.
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct GaugeField<'g> {
    pub graph: &'g CosphereGraph,
    pub band: usize,
    pub m: usize,
    pub root: usize,
    /// Row-major `vertices x m`.
    pub vectors: Vec<C64>,
    pub eigenvalues: Vec<f64>,
    pub max_edge_defect: f64,
    pub max_face_residual: f64,
    /// Faces whose residual reaches [`FACE_TOL`].
    pub residue_faces: usize,
    /// Non-tree edges whose lifted angle no face determined.
    pub free_edges: usize,
    pub status: GaugeStatus,
    pub certificate: Option<Certificate>,
}

impl GaugeField<'_> {
    pub fn vector(&self, v: usize) -> &[C64] {
        &self.vectors[v * self.m..(v + 1) * self.m]
    }

    pub fn succeeded(&self) -> bool {
        self.status == GaugeStatus::Success
    }
}

const BACKWARD: u32 = 1 << 31;

/// Neighbour lists; each entry carries the edge id, flagged with
/// [`BACKWARD`] when the edge is stored as `[b, a]`.
struct Adjacency {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    edge_ids: Vec<u32>,
}

impl Adjacency {
    fn new(nv: usize, edges: &[[u32; 2]]) -> Self {
        let mut offsets = vec![0usize; nv + 1];
        for e in edges {
            offsets[e[0] as usize + 1] += 1;
            offsets[e[1] as usize + 1] += 1;
        }
        for i in 0..nv {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0u32; offsets[nv]];
        let mut edge_ids = vec![0u32; offsets[nv]];
        for (id, e) in edges.iter().enumerate() {
            for (a, b, flag) in [(e[0], e[1], 0), (e[1], e[0], BACKWARD)] {
                targets[fill[a as usize]] = b;
                edge_ids[fill[a as usize]] = id as u32 | flag;
                fill[a as usize] += 1;
            }
        }
        Adjacency {
            offsets,
            targets,
            edge_ids,
        }
    }

    fn neighbours(&self, a: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        let r = self.offsets[a]..self.offsets[a + 1];
        self.targets[r.clone()]
            .iter()
            .zip(&self.edge_ids[r])
            .map(|(&b, &e)| (b as usize, (e & !BACKWARD) as usize))
    }

    /// Edge id joining `a` and `b`, and whether it is stored as `[a, b]`.
    fn edge_between(&self, a: usize, b: usize) -> Option<(u32, bool)> {
        let (lo, hi) = (self.offsets[a], self.offsets[a + 1]);
        (lo..hi)
            .find(|&i| self.targets[i] as usize == b)
            .map(|i| (self.edge_ids[i] & !BACKWARD, self.edge_ids[i] & BACKWARD == 0))
    }
}

fn scale_row(row: &mut [C64], z: C64) {
    for x in row {
        *x *= z;
    }
}

fn link(vectors: &[C64], m: usize, a: usize, b: usize) -> C64 {
    inner(&vectors[a * m..(a + 1) * m], &vectors[b * m..(b + 1) * m])
}

fn under_resolved(a: usize, b: usize, overlap: f64) -> Error {
    Error::UnderResolved(format!(
        "eigenline overlap {overlap:e} between vertices {a} and {b} below {MIN_OVERLAP:e}"
    ))
}

/// Holonomy residual of face `f`: link angles plus `-Arg` of their product.
fn face_residual(graph: &CosphereGraph, vectors: &[C64], m: usize, f: usize) -> Result<f64> {
    let cyc = graph.face(f);
    let k = cyc.len();
    let mut angle_sum = 0.0;
    let mut product = C64::new(1.0, 0.0);
    for i in 0..k {
        let (a, b) = (cyc[i], cyc[(i + 1) % k]);
        let w = link(vectors, m, a, b);
        if w.norm() < MIN_OVERLAP {
            return Err(under_resolved(a, b, w.norm()));
        }
        angle_sum += w.arg();
        product *= w;
    }
    let plaquette = -product.arg();
    let plaquette = if plaquette <= -PI { plaquette + TAU } else { plaquette };
    Ok(angle_sum + plaquette)
}

struct FaceScan {
    worst_face: usize,
    worst: f64,
    residues: usize,
}

fn scan_faces(graph: &CosphereGraph, vectors: &[C64], m: usize) -> Result<FaceScan> {
    let per_face: Vec<f64> = (0..graph.faces.len())
        .into_par_iter()
        .map(|f| face_residual(graph, vectors, m, f))
        .collect::<Result<_>>()?;
    let mut scan = FaceScan {
        worst_face: 0,
        worst: 0.0,
        residues: 0,
    };
    for (f, r) in per_face.iter().enumerate() {
        if r.abs() >= FACE_TOL {
            scan.residues += 1;
        }
        if r.abs() > scan.worst.abs() {
            scan.worst = *r;
            scan.worst_face = f;
        }
    }
    Ok(scan)
}

fn edge_defect(vectors: &[C64], m: usize, edges: &[[u32; 2]]) -> f64 {
    edges
        .par_iter()
        .map(|e| {
            let w = link(vectors, m, e[0] as usize, e[1] as usize);
            (2.0 - 2.0 * w.re).max(0.0).sqrt()
        })
        .reduce(|| 0.0, f64::max)
}

/// Band eigenvectors and eigenvalues at every vertex.
fn band_table(f: &SymbolField, band: usize, graph: &CosphereGraph) -> Result<(Vec<C64>, Vec<f64>)> {
    let m = f.m();
    let rows: Vec<(Vec<C64>, f64)> = graph
        .vertices
        .par_iter()
        .map(|p| {
            let sp = decompose_matrix(&f.eval(p)?, GAP_TOL)?;
            Ok((sp.vectors[band].clone(), sp.eigenvalues[band]))
        })
        .collect::<Result<_>>()?;
    let mut vectors = Vec::with_capacity(rows.len() * m);
    let mut values = Vec::with_capacity(rows.len());
    for (v, h) in rows {
        vectors.extend(v);
        values.push(h);
    }
    Ok((vectors, values))
}

/// Breadth-first tree gauge. The root takes the dominant column of its
/// projection; each child takes `P_b v_a / |P_b v_a|`. Returns the tree
/// edge flags.
fn tree_gauge(vectors: &mut [C64], m: usize, adj: &Adjacency, ne: usize, root: usize) -> Result<Vec<bool>> {
    let nv = vectors.len() / m;
    let row = &mut vectors[root * m..(root + 1) * m];
    let k = (0..m)
        .max_by(|&i, &j| row[i].norm().total_cmp(&row[j].norm()).then(j.cmp(&i)))
        .unwrap_or(0);
    let z = row[k].conj() / row[k].norm();
    scale_row(row, z);

    let mut tree = vec![false; ne];
    let mut seen = vec![false; nv];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    let mut reached = 1usize;
    while let Some(a) = queue.pop_front() {
        for (b, e) in adj.neighbours(a) {
            if seen[b] {
                continue;
            }
            // P_b v_a = u_b <u_b|v_a>, so only the phase of the overlap matters.
            let w = link(vectors, m, b, a);
            if w.norm() < MIN_OVERLAP {
                return Err(under_resolved(a, b, w.norm()));
            }
            scale_row(&mut vectors[b * m..(b + 1) * m], w / w.norm());
            tree[e] = true;
            seen[b] = true;
            reached += 1;
            queue.push_back(b);
        }
    }
    if reached != nv {
        return Err(Error::InvalidMesh {
            label: "cosphere graph".into(),
            reason: format!("only {reached} of {nv} vertices reachable"),
        });
    }
    Ok(tree)
}

/// Phase correction minimizing `sum_e (theta_e + a_b - a_a)^2` over the
/// lifted angles `theta`.
fn least_squares(vectors: &mut [C64], m: usize, edges: &[[u32; 2]], theta: &[f64]) {
    let nv = vectors.len() / m;
    let mut rhs = vec![0.0; nv];
    for (e, t) in edges.iter().zip(theta) {
        rhs[e[0] as usize] += t;
        rhs[e[1] as usize] -= t;
    }
    let (alpha, _) = solve_laplacian(edges, &rhs, LSQ_TOL, LSQ_MAX_ITER);
    for (v, a) in alpha.iter().enumerate() {
        scale_row(&mut vectors[v * m..(v + 1) * m], C64::from_polar(1.0, *a));
    }
}

/// Gauge construction rooted at vertex 0.
pub fn spanning_tree_gauge<'g>(f: &SymbolField, band: usize, graph: &'g CosphereGraph) -> Result<GaugeField<'g>> {
    spanning_tree_gauge_from(f, band, graph, 0)
}

pub fn spanning_tree_gauge_from<'g>(
    f: &SymbolField,
    band: usize,
    graph: &'g CosphereGraph,
    root: usize,
) -> Result<GaugeField<'g>> {
    if f.geometry() != graph.geometry {
        return Err(Error::InvalidParameter(format!(
            "symbol '{}' lives on {} but the graph covers {}",
            f.id(),
            f.geometry(),
            graph.geometry
        )));
    }
    if band >= f.m() {
        return Err(Error::InvalidParameter(format!(
            "band {band} out of range for '{}' (m = {})",
            f.id(),
            f.m()
        )));
    }
    let nv = graph.vertices.len();
    if root >= nv {
        return Err(Error::InvalidParameter(format!("root {root} out of range ({nv} vertices)")));
    }
    let m = f.m();
    let (mut vectors, eigenvalues) = band_table(f, band, graph)?;
    let adj = Adjacency::new(nv, &graph.edges);
    let tree = tree_gauge(&mut vectors, m, &adj, graph.edges.len(), root)?;
    let lifted = unwrap::lift(graph, &adj, &vectors, m, &tree)?;
    drop(adj);
    least_squares(&mut vectors, m, &graph.edges, &lifted.theta);
    let scan = scan_faces(graph, &vectors, m)?;

    let max_edge_defect = edge_defect(&vectors, m, &graph.edges);
    let success = scan.residues == 0 && max_edge_defect <= defect_tol(graph.n);
    let certificate = (!success).then(|| {
        let cycle = graph.face(scan.worst_face);
        let k = cycle.len();
        Certificate {
            face: scan.worst_face,
            edges: (0..k).map(|i| [cycle[i], cycle[(i + 1) % k]]).collect(),
            cycle,
            residual: scan.worst,
        }
    });
    Ok(GaugeField {
        graph,
        band,
        m,
        root,
        vectors,
        eigenvalues,
        max_edge_defect,
        max_face_residual: scan.worst.abs(),
        residue_faces: scan.residues,
        free_edges: lifted.free_edges,
        status: if success {
            GaugeStatus::Success
        } else {
            GaugeStatus::Failed
        },
        certificate,
    })
}

/// Outcome of comparing the gauge construction with the global verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossCheck {
    pub symbol_id: String,
    pub band: usize,
    pub n: usize,
    pub gauge_success: Option<bool>,
    pub unobstructed: Option<bool>,
    pub consistent: bool,
    /// Error text when either side could not be computed.
    pub note: Option<String>,
}

pub fn cross_check_report(f: &SymbolField, band: usize, n: usize) -> CrossCheck {
    let mut notes = Vec::new();
    let gauge_success = match cosphere_graph(f.geometry(), n).and_then(|g| spanning_tree_gauge(f, band, &g).map(|gf| gf.succeeded())) {
        Ok(s) => Some(s),
        Err(e) => {
            notes.push(format!("gauge: {e}"));
            None
        }
    };
    let unobstructed = match global_obstruction(f, band, n) {
        Ok(v) => Some(!v.obstructed),
        Err(e) => {
            notes.push(format!("verdict: {e}"));
            None
        }
    };
    let consistent = matches!((gauge_success, unobstructed), (Some(a), Some(b)) if a == b);
    CrossCheck {
        symbol_id: f.id().to_string(),
        band,
        n,
        gauge_success,
        unobstructed,
        consistent,
        note: (!notes.is_empty()).then(|| notes.join("; ")),
    }
}

/// True iff the gauge construction succeeds exactly when the global verdict
/// is unobstructed.
pub fn cross_check(f: &SymbolField, band: usize, n: usize) -> bool {
    cross_check_report(f, band, n).consistent
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{self, controls, LameParams};
    use crate::symcore::point::Geometry;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn overlap(v: &[C64], r: &[f64]) -> f64 {
        v.iter().zip(r).map(|(a, b)| a.conj() * b).sum::<C64>().norm()
    }

    fn assert_eigenvectors(f: &SymbolField, gf: &GaugeField<'_>) {
        for v in (0..gf.graph.vertices.len()).step_by(97) {
            let a = f.eval(&gf.graph.vertices[v]).unwrap().symmetrized();
            let x = gf.vector(v);
            let h = gf.eigenvalues[v];
            let ax = a.matrix().mul_vec(x);
            let defect: f64 = ax.iter().zip(x).map(|(p, q)| (p - q * h).norm_sqr()).sum::<f64>().sqrt();
            assert!(defect <= 1e-8 * (1.0 + h.abs()), "vertex {v}: {defect:e}");
            let norm: f64 = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn elasticity_shear_band_matches_rotated_direction() {
        let e = catalog::elasticity_t2(LameParams::new(1.0, 1.0), 0.0).unwrap();
        let g = cosphere_graph(Geometry::T2, 8).unwrap();
        let gf = spanning_tree_gauge(&e.symbol, 0, &g).unwrap();
        assert!(gf.succeeded());
        assert!(gf.certificate.is_none());
        assert_eigenvectors(&e.symbol, &gf);
        for (v, p) in g.vertices.iter().enumerate() {
            let n = p.xi_norm();
            let eps_q = [-p.xi()[1] / n, p.xi()[0] / n];
            assert!(overlap(gf.vector(v), &eps_q) > 1.0 - 1e-6);
        }
    }

    #[test]
    fn curl_zero_band_is_the_covector_line() {
        let e = catalog::curl3_flat();
        let g = cosphere_graph(Geometry::T3, 8).unwrap();
        let gf = spanning_tree_gauge(&e.symbol, 1, &g).unwrap();
        assert!(gf.succeeded());
        assert_eigenvectors(&e.symbol, &gf);
        for (v, p) in g.vertices.iter().enumerate() {
            let n = p.xi_norm();
            let xi_hat: Vec<f64> = p.xi().iter().map(|x| x / n).collect();
            assert!(overlap(gf.vector(v), &xi_hat) > 1.0 - 1e-6);
        }
    }

    #[test]
    fn dirac_s2_fails_with_a_vortex_certificate() {
        let e = catalog::dirac_s2();
        for n in [8, 16] {
            let g = cosphere_graph(Geometry::S2, n).unwrap();
            let gf = spanning_tree_gauge(&e.symbol, 1, &g).unwrap();
            assert!(!gf.succeeded());
            assert_eigenvectors(&e.symbol, &gf);
            let cert = gf.certificate.as_ref().unwrap();
            // One full turn of link angle around the worst face.
            assert!((cert.residual.abs() - TAU).abs() < 1e-9, "{}", cert.residual);
            assert!(cert.residual.abs() > 5.0 * FACE_TOL);
            assert_eq!(cert.edges.len(), cert.cycle.len());
            for (k, [a, b]) in cert.edges.iter().enumerate() {
                assert_eq!(*a, cert.cycle[k]);
                assert_eq!(*b, cert.cycle[(k + 1) % cert.cycle.len()]);
            }
        }
    }

    #[test]
    fn success_bit_does_not_depend_on_the_root() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = cosphere_graph(Geometry::S2, 8).unwrap();
        for (e, band) in [
            (catalog::np_sphere(LameParams::new(1.0, 1.0), 1.0).unwrap(), 0),
            (catalog::np_sphere(LameParams::new(1.0, 1.0), 1.0).unwrap(), 2),
            (catalog::dirac_s2(), 0),
        ] {
            let base = spanning_tree_gauge(&e.symbol, band, &g).unwrap().succeeded();
            for _ in 0..3 {
                let root = rng.random_range(0..g.vertices.len());
                let gf = spanning_tree_gauge_from(&e.symbol, band, &g, root).unwrap();
                assert_eq!(gf.succeeded(), base, "{} band {band} root {root}", e.id());
            }
        }
    }

    #[test]
    fn edge_defect_shrinks_with_resolution() {
        let cases = [
            (catalog::elasticity_t2(LameParams::new(1.0, 1.0), 0.3).unwrap(), 1),
            (catalog::np_sphere(LameParams::new(1.0, 1.0), 1.0).unwrap(), 0),
        ];
        for (e, band) in cases {
            let g8 = cosphere_graph(e.symbol.geometry(), 8).unwrap();
            let g16 = cosphere_graph(e.symbol.geometry(), 16).unwrap();
            let d8 = spanning_tree_gauge(&e.symbol, band, &g8).unwrap();
            let d16 = spanning_tree_gauge(&e.symbol, band, &g16).unwrap();
            assert!(d8.succeeded() && d16.succeeded());
            let ratio = d16.max_edge_defect / d8.max_edge_defect;
            assert!(ratio < 0.8, "{}: ratio {ratio}", e.id());
            // Thresholds separate outcomes with a wide margin.
            assert!(d8.max_edge_defect * 5.0 < defect_tol(8));
            assert!(d8.max_face_residual * 5.0 < FACE_TOL);
        }
    }

    #[test]
    fn controls_cross_check() {
        assert!(cross_check(&controls::constant_s3(Geometry::S3), 0, 8));
        let art = catalog::artificial_s2(2.0, -1.0, 0.0).unwrap();
        let r = cross_check_report(&art.symbol, 0, 8);
        assert!(r.consistent, "{r:?}");
        assert_eq!(r.gauge_success, Some(false));
        assert_eq!(r.unobstructed, Some(false));
    }

    #[test]
    fn geometry_mismatch_and_bad_band() {
        let g = cosphere_graph(Geometry::T2, 8).unwrap();
        let f = catalog::dirac_s2().symbol;
        assert!(matches!(spanning_tree_gauge(&f, 0, &g), Err(Error::InvalidParameter(_))));
        let e = catalog::elasticity_t2(LameParams::new(1.0, 1.0), 0.0).unwrap();
        assert!(spanning_tree_gauge(&e.symbol, 2, &g).is_err());
        assert!(spanning_tree_gauge_from(&e.symbol, 0, &g, g.vertices.len()).is_err());
        let r = cross_check_report(&controls::identity(Geometry::T2, 2), 0, 8);
        assert!(!r.consistent);
        assert!(r.note.unwrap().contains("degenerate"));
    }

    #[test]
    fn lifted_angles_close_every_face_on_a_trivial_band() {
        let e = catalog::np_sphere(LameParams::new(1.0, 1.0), 1.0).unwrap();
        let g = cosphere_graph(Geometry::S2, 8).unwrap();
        let gf = spanning_tree_gauge(&e.symbol, 2, &g).unwrap();
        assert_eq!(gf.free_edges, 1);
        assert_eq!(gf.residue_faces, 0);
        let mut worst: f64 = 0.0;
        for f in 0..g.faces.len() {
            worst = worst.max(face_residual(&g, &gf.vectors, gf.m, f).unwrap().abs());
        }
        assert!(worst < 1e-9);
    }
}
