//! Vertex/edge/face graphs covering whole cosphere bundles.

use std::collections::{HashMap, HashSet, VecDeque};
use std::f64::consts::{FRAC_PI_2, TAU};

use crate::error::{Error, Result};
use crate::probes::cubed::cubed_sphere;
use crate::probes::dedup_cycle;
use crate::quat;
use crate::symcore::point::{CovectorPoint, Geometry};

/// A 2-complex covering `S*M`. Faces are quads; a repeated corner marks a
/// triangle.
#[derive(Debug, Clone)]
pub struct CosphereGraph {
    pub geometry: Geometry,
    pub n: usize,
    pub vertices: Vec<CovectorPoint>,
    pub edges: Vec<[u32; 2]>,
    pub faces: Vec<[u32; 4]>,
}

impl CosphereGraph {
    pub fn face(&self, f: usize) -> Vec<usize> {
        let q = self.faces[f].map(|v| v as usize);
        dedup_cycle(&q)
    }

    /// Breadth-first connectivity check from vertex 0.
    pub fn is_connected(&self) -> bool {
        let nv = self.vertices.len();
        if nv == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); nv];
        for e in &self.edges {
            adj[e[0] as usize].push(e[1] as usize);
            adj[e[1] as usize].push(e[0] as usize);
        }
        let mut seen = vec![false; nv];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(a) = queue.pop_front() {
            for &b in &adj[a] {
                if !seen[b] {
                    seen[b] = true;
                    count += 1;
                    queue.push_back(b);
                }
            }
        }
        count == nv
    }

    /// Largest ambient chord over all edges.
    pub fn max_edge_chord(&self) -> f64 {
        self.edges
            .iter()
            .map(|e| self.vertices[e[0] as usize].chord(&self.vertices[e[1] as usize]))
            .fold(0.0, f64::max)
    }
}

/// Combinatorial 2-complex without coordinates.
struct Complex {
    nv: usize,
    edges: Vec<[usize; 2]>,
    faces: Vec<[usize; 4]>,
}

/// Periodic grid on `n^dim` vertices with all coordinate edges and squares.
fn torus_grid(n: usize, dim: usize) -> Complex {
    let nv = n.pow(dim as u32);
    let stride: Vec<usize> = (0..dim).map(|a| n.pow(a as u32)).collect();
    let step = |v: usize, a: usize| {
        let c = (v / stride[a]) % n;
        v - c * stride[a] + ((c + 1) % n) * stride[a]
    };
    let mut edges = Vec::with_capacity(dim * nv);
    let mut faces = Vec::new();
    for v in 0..nv {
        for a in 0..dim {
            edges.push([v, step(v, a)]);
            for b in (a + 1)..dim {
                let va = step(v, a);
                faces.push([v, va, step(va, b), step(v, b)]);
            }
        }
    }
    Complex { nv, edges, faces }
}

/// The circle on `n` vertices.
fn circle(n: usize) -> Complex {
    Complex {
        nv: n,
        edges: (0..n).map(|k| [k, (k + 1) % n]).collect(),
        faces: Vec::new(),
    }
}

/// Product complex; vertex `(b, f)` has index `b * fiber.nv + f`.
fn product(base: &Complex, fiber: &Complex) -> (Vec<[u32; 2]>, Vec<[u32; 4]>) {
    let nf = fiber.nv;
    let id = |b: usize, f: usize| (b * nf + f) as u32;
    let mut edges = Vec::with_capacity(base.nv * fiber.edges.len() + base.edges.len() * nf);
    for b in 0..base.nv {
        for e in &fiber.edges {
            edges.push([id(b, e[0]), id(b, e[1])]);
        }
    }
    for e in &base.edges {
        for f in 0..nf {
            edges.push([id(e[0], f), id(e[1], f)]);
        }
    }
    let mut faces = Vec::with_capacity(
        base.faces.len() * nf + base.nv * fiber.faces.len() + base.edges.len() * fiber.edges.len(),
    );
    for q in &base.faces {
        for f in 0..nf {
            faces.push(q.map(|b| id(b, f)));
        }
    }
    for b in 0..base.nv {
        for q in &fiber.faces {
            faces.push(q.map(|f| id(b, f)));
        }
    }
    for eb in &base.edges {
        for ef in &fiber.edges {
            faces.push([id(eb[0], ef[0]), id(eb[1], ef[0]), id(eb[1], ef[1]), id(eb[0], ef[1])]);
        }
    }
    (edges, faces)
}

/// Hopf-coordinate grid of the unit quaternions,
/// `q = (cos eta cos a, cos eta sin a, sin eta cos b, sin eta sin b)` with
/// `eta = (pi/2) i / ni` and `a, b` on `na` steps of `2 pi / na`. The
/// circles at `eta = 0` and `eta = pi/2` collapse; with `antipodal`, `q` and
/// `-q` are merged.
fn hopf_grid(ni: usize, na: usize, antipodal: bool) -> (Vec<quat::Quat>, Complex) {
    let h = na / 2;
    let collapse = |i: usize, j: usize, k: usize| -> (usize, usize, usize) {
        if i == 0 {
            (0, j % na, 0)
        } else if i == ni {
            (ni, 0, k % na)
        } else {
            (i, j % na, k % na)
        }
    };
    let canon = |i: usize, j: usize, k: usize| {
        let a = collapse(i, j, k);
        if antipodal {
            a.min(collapse(i, j + h, k + h))
        } else {
            a
        }
    };
    let mut index: HashMap<(usize, usize, usize), usize> = HashMap::new();
    let mut points = Vec::new();
    let mut vid = |key: (usize, usize, usize)| -> usize {
        *index.entry(key).or_insert_with(|| {
            let (i, j, k) = key;
            let eta = FRAC_PI_2 * i as f64 / ni as f64;
            let a = TAU * j as f64 / na as f64;
            let b = TAU * k as f64 / na as f64;
            points.push([eta.cos() * a.cos(), eta.cos() * a.sin(), eta.sin() * b.cos(), eta.sin() * b.sin()]);
            points.len() - 1
        })
    };

    let mut edges = Vec::new();
    let mut seen_e = HashSet::new();
    let mut faces = Vec::new();
    let mut seen_f = HashSet::new();
    let mut add_edge = |a: usize, b: usize, edges: &mut Vec<[usize; 2]>| {
        if a != b && seen_e.insert((a.min(b), a.max(b))) {
            edges.push([a, b]);
        }
    };
    let mut add_face = |q: [usize; 4], faces: &mut Vec<[usize; 4]>| {
        let f = dedup_cycle(&q);
        if f.len() < 3 {
            return;
        }
        let mut key = f.clone();
        key.sort_unstable();
        key.dedup();
        if key.len() < f.len() {
            return;
        }
        if seen_f.insert(key) {
            let mut out = [f[0]; 4];
            out[..f.len()].copy_from_slice(&f);
            if f.len() == 3 {
                out[3] = f[2];
            }
            faces.push(out);
        }
    };

    for i in 0..=ni {
        for j in 0..na {
            for k in 0..na {
                let v = vid(canon(i, j, k));
                let vj = vid(canon(i, j + 1, k));
                let vk = vid(canon(i, j, k + 1));
                let vjk = vid(canon(i, j + 1, k + 1));
                add_edge(v, vj, &mut edges);
                add_edge(v, vk, &mut edges);
                add_face([v, vj, vjk, vk], &mut faces);
                if i < ni {
                    let vi = vid(canon(i + 1, j, k));
                    let vij = vid(canon(i + 1, j + 1, k));
                    let vik = vid(canon(i + 1, j, k + 1));
                    add_edge(v, vi, &mut edges);
                    add_face([v, vi, vij, vj], &mut faces);
                    add_face([v, vi, vik, vk], &mut faces);
                }
            }
        }
    }
    let nv = points.len();
    (points, Complex { nv, edges, faces })
}

fn to_u32(c: Complex) -> (Vec<[u32; 2]>, Vec<[u32; 4]>) {
    (
        c.edges.iter().map(|e| e.map(|v| v as u32)).collect(),
        c.faces.iter().map(|f| f.map(|v| v as u32)).collect(),
    )
}

fn sphere_complex(n: usize) -> (Vec<[f64; 3]>, Complex) {
    let m = cubed_sphere(n);
    let edges = m.edges();
    let nv = m.points.len();
    (m.points, Complex { nv, edges, faces: m.quads })
}

/// Graph covering `S*M` at resolution `n` (a power-of-two multiple of 8).
///
/// T2: `n^3` periodic grid in `(x1, x2, theta)`. T3: `n^3` base grid times a
/// cubed-sphere fiber of resolution `n/2`. S2: Hopf grid of rotations with
/// `n/2` latitude and `2n` azimuth steps (rotation steps of `2 pi / n`) and
/// `q ~ -q`, each rotation `R` giving `(R e3, R e1)`. S3: Hopf grid of the
/// base times a cubed-sphere fiber carried by the left-invariant frame.
pub fn cosphere_graph(geometry: Geometry, n: usize) -> Result<CosphereGraph> {
    if n < 8 || !n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("graph resolution {n} must be even and >= 8")));
    }
    let (vertices, edges, faces) = match geometry {
        Geometry::T2 => {
            let base = torus_grid(n, 2);
            let fiber = circle(n);
            let (edges, faces) = product(&base, &fiber);
            let mut vertices = Vec::with_capacity(base.nv * n);
            for b in 0..base.nv {
                let x = [TAU * (b % n) as f64 / n as f64, TAU * (b / n) as f64 / n as f64];
                for f in 0..n {
                    let th = TAU * f as f64 / n as f64;
                    vertices.push(CovectorPoint::new(geometry, &x, &[th.cos(), th.sin()])?);
                }
            }
            (vertices, edges, faces)
        }
        Geometry::T3 => {
            let base = torus_grid(n, 3);
            let (pts, fiber) = sphere_complex(n / 2);
            let (edges, faces) = product(&base, &fiber);
            let mut vertices = Vec::with_capacity(base.nv * fiber.nv);
            for b in 0..base.nv {
                let x = [
                    TAU * (b % n) as f64 / n as f64,
                    TAU * ((b / n) % n) as f64 / n as f64,
                    TAU * (b / (n * n)) as f64 / n as f64,
                ];
                for u in &pts {
                    vertices.push(CovectorPoint::new(geometry, &x, u)?);
                }
            }
            (vertices, edges, faces)
        }
        Geometry::S2 => {
            let (qs, c) = hopf_grid(n / 2, 2 * n, true);
            let vertices = qs
                .iter()
                .map(|q| {
                    let r = quat::rotation(q);
                    let x = [r[0][2], r[1][2], r[2][2]];
                    let xi = [r[0][0], r[1][0], r[2][0]];
                    CovectorPoint::new(geometry, &x, &xi)
                })
                .collect::<Result<Vec<_>>>()?;
            let (edges, faces) = to_u32(c);
            (vertices, edges, faces)
        }
        Geometry::S3 => {
            let (qs, base) = hopf_grid(n, n, false);
            let (pts, fiber) = sphere_complex(n / 2);
            let (edges, faces) = product(&base, &fiber);
            let mut vertices = Vec::with_capacity(base.nv * fiber.nv);
            for q in &qs {
                let e = quat::s3_frame(q);
                for u in &pts {
                    let mut xi = [0.0; 4];
                    for (j, ej) in e.iter().enumerate() {
                        for k in 0..4 {
                            xi[k] += u[j] * ej[k];
                        }
                    }
                    vertices.push(CovectorPoint::new(geometry, q, &xi)?);
                }
            }
            (vertices, edges, faces)
        }
    };
    Ok(CosphereGraph {
        geometry,
        n,
        vertices,
        edges,
        faces,
    })
}
