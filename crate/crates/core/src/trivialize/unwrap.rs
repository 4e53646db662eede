//! Lifting link angles from `(-pi, pi]` to the reals by integrating
//! plaquette phases outward from a spanning tree.
//!
//! Tree edges keep their angle. Whenever a face has exactly one edge
//! without a lifted angle, that edge is fixed so the face closes up against
//! its plaquette phase. When no such face remains but unlifted edges do,
//! the lowest-numbered one becomes free and peeling resumes. Lifted angles
//! are affine in the free lifts with integer coefficients; the first
//! [`TRACKED`] free lifts are finally shifted by multiples of `2 pi` so that
//! as few of the remaining faces as possible fail to close.

use std::collections::VecDeque;
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::invariants::MIN_OVERLAP;
use crate::probes::CosphereGraph;
use crate::symcore::matrix::C64;

use super::{link, Adjacency};

const REVERSED: u32 = 1 << 31;

/// Free lifts whose `2 pi` shift is optimized.
const TRACKED: usize = 4;

type Coef = [i32; TRACKED];

/// Lifted angles per edge, in the stored edge orientation.
pub(super) struct Lifted {
    pub theta: Vec<f64>,
    /// Edges whose angle was chosen rather than forced by a face.
    pub free_edges: usize,
}

/// Edge ids of every face, with [`REVERSED`] set when the face runs
/// against the stored orientation.
struct FaceEdges {
    offsets: Vec<usize>,
    ids: Vec<u32>,
}

impl FaceEdges {
    fn new(graph: &CosphereGraph, adj: &Adjacency) -> Result<Self> {
        let mut offsets = Vec::with_capacity(graph.faces.len() + 1);
        let mut ids = Vec::with_capacity(graph.faces.len() * 4);
        offsets.push(0);
        for f in 0..graph.faces.len() {
            let cyc = graph.face(f);
            let k = cyc.len();
            for i in 0..k {
                let (a, b) = (cyc[i], cyc[(i + 1) % k]);
                let (e, forward) = adj.edge_between(a, b).ok_or_else(|| Error::InvalidMesh {
                    label: "cosphere graph".into(),
                    reason: format!("face {f} uses missing edge {a}-{b}"),
                })?;
                ids.push(if forward { e } else { e | REVERSED });
            }
            offsets.push(ids.len());
        }
        Ok(FaceEdges { offsets, ids })
    }

    fn of(&self, f: usize) -> &[u32] {
        &self.ids[self.offsets[f]..self.offsets[f + 1]]
    }
}

fn split(id: u32) -> (usize, f64) {
    ((id & !REVERSED) as usize, if id & REVERSED == 0 { 1.0 } else { -1.0 })
}

/// `-Arg` of the product of link overlaps around face `f`.
fn plaquette(graph: &CosphereGraph, vectors: &[C64], m: usize, f: usize) -> Result<f64> {
    let cyc = graph.face(f);
    let k = cyc.len();
    let mut product = C64::new(1.0, 0.0);
    for i in 0..k {
        let w = link(vectors, m, cyc[i], cyc[(i + 1) % k]);
        if w.norm() < MIN_OVERLAP {
            return Err(Error::UnderResolved(format!(
                "eigenline overlap {:e} on face {f}",
                w.norm()
            )));
        }
        product *= w;
    }
    let p = -product.arg();
    Ok(if p <= -PI { p + TAU } else { p })
}

pub(super) fn lift(
    graph: &CosphereGraph,
    adj: &Adjacency,
    vectors: &[C64],
    m: usize,
    tree: &[bool],
) -> Result<Lifted> {
    let ne = graph.edges.len();
    let nf = graph.faces.len();
    let faces = FaceEdges::new(graph, adj)?;

    let mut face_offsets = vec![0usize; ne + 1];
    for id in &faces.ids {
        face_offsets[split(*id).0 + 1] += 1;
    }
    for e in 0..ne {
        face_offsets[e + 1] += face_offsets[e];
    }
    let mut fill = face_offsets.clone();
    let mut edge_faces = vec![0u32; face_offsets[ne]];
    for f in 0..nf {
        for id in faces.of(f) {
            let e = split(*id).0;
            edge_faces[fill[e]] = f as u32;
            fill[e] += 1;
        }
    }
    drop(fill);

    let wrapped = |e: usize| {
        let [a, b] = graph.edges[e];
        link(vectors, m, a as usize, b as usize).arg()
    };
    let mut theta = vec![0.0; ne];
    let mut coef: Vec<Coef> = vec![[0; TRACKED]; ne];
    let mut determining = vec![false; nf];
    let mut known = tree.to_vec();
    for e in 0..ne {
        if known[e] {
            theta[e] = wrapped(e);
        }
    }
    let mut open: Vec<u8> = (0..nf)
        .map(|f| faces.of(f).iter().filter(|id| !known[split(**id).0]).count() as u8)
        .collect();
    let mut queue: VecDeque<usize> = (0..nf).filter(|&f| open[f] == 1).collect();

    let mut free_edges = 0;
    let mut next_free = 0;
    loop {
        while let Some(f) = queue.pop_front() {
            if open[f] != 1 {
                continue;
            }
            let mut sum = plaquette(graph, vectors, m, f)?;
            let mut c: Coef = [0; TRACKED];
            let mut target = None;
            for id in faces.of(f) {
                let (e, s) = split(*id);
                if known[e] {
                    sum += s * theta[e];
                    for k in 0..TRACKED {
                        c[k] += s as i32 * coef[e][k];
                    }
                } else {
                    target = Some((e, s));
                }
            }
            let (e, s) = target.expect("face with one open edge");
            theta[e] = -s * sum;
            coef[e] = c.map(|x| -(s as i32) * x);
            known[e] = true;
            determining[f] = true;
            for &g in &edge_faces[face_offsets[e]..face_offsets[e + 1]] {
                let g = g as usize;
                open[g] -= 1;
                if open[g] == 1 {
                    queue.push_back(g);
                }
            }
        }
        while next_free < ne && known[next_free] {
            next_free += 1;
        }
        if next_free == ne {
            break;
        }
        let e = next_free;
        theta[e] = wrapped(e);
        if free_edges < TRACKED {
            coef[e][free_edges] = 1;
        }
        known[e] = true;
        free_edges += 1;
        for &g in &edge_faces[face_offsets[e]..face_offsets[e + 1]] {
            let g = g as usize;
            open[g] -= 1;
            if open[g] == 1 {
                queue.push_back(g);
            }
        }
    }
    let shifts = best_shifts(graph, vectors, m, &faces, &theta, &coef, &determining, free_edges.min(TRACKED))?;
    if shifts.iter().any(|&n| n != 0) {
        for (t, c) in theta.iter_mut().zip(&coef) {
            let k: i32 = c.iter().zip(&shifts).map(|(a, n)| a * n).sum();
            *t += TAU * k as f64;
        }
    }
    Ok(Lifted { theta, free_edges })
}

/// Integer shifts in `{-1, 0, 1}` of the tracked free lifts minimizing the
/// number of check faces that do not close; ties keep the earlier candidate,
/// starting from all zeros.
#[allow(clippy::too_many_arguments)]
fn best_shifts(
    graph: &CosphereGraph,
    vectors: &[C64],
    m: usize,
    faces: &FaceEdges,
    theta: &[f64],
    coef: &[Coef],
    determining: &[bool],
    tracked: usize,
) -> Result<[i32; TRACKED]> {
    let mut cand = [0; TRACKED];
    if tracked == 0 {
        return Ok(cand);
    }
    // Closure defect of each check face in units of 2 pi, with its response
    // to the shifts. Faces with no response only add a constant.
    let mut sensitive: Vec<(i64, Coef)> = Vec::new();
    for (f, &det) in determining.iter().enumerate() {
        if det {
            continue;
        }
        let mut c: Coef = [0; TRACKED];
        for id in faces.of(f) {
            let (e, s) = split(*id);
            for k in 0..TRACKED {
                c[k] += s as i32 * coef[e][k];
            }
        }
        if c.iter().all(|&x| x == 0) {
            continue;
        }
        let mut sum = plaquette(graph, vectors, m, f)?;
        for id in faces.of(f) {
            let (e, s) = split(*id);
            sum += s * theta[e];
        }
        sensitive.push(((sum / TAU).round() as i64, c));
    }
    let count = |n: &[i32; TRACKED]| {
        sensitive
            .iter()
            .filter(|(w, c)| w + c.iter().zip(n).map(|(a, b)| (a * b) as i64).sum::<i64>() != 0)
            .count()
    };
    let mut best = count(&cand);
    let mut best_n = cand;
    let combos = 3usize.pow(tracked as u32);
    for code in 1..combos {
        let mut r = code;
        for slot in cand.iter_mut().take(tracked) {
            *slot = [0, 1, -1][r % 3];
            r /= 3;
        }
        let c = count(&cand);
        if c < best {
            best = c;
            best_n = cand;
        }
    }
    Ok(best_n)
}
