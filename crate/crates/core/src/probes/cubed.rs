//! Equiangular cubed-sphere meshes of the unit 2-sphere.

use std::collections::HashMap;
use std::f64::consts::FRAC_PI_4;

/// Unit vectors and outward-oriented quads.
#[derive(Debug, Clone)]
pub struct SphereMesh {
    pub points: Vec<[f64; 3]>,
    pub quads: Vec<[usize; 4]>,
}

impl SphereMesh {
    /// Undirected edges, each once, in first-seen order.
    pub fn edges(&self) -> Vec<[usize; 2]> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for q in &self.quads {
            for k in 0..4 {
                let (a, b) = (q[k], q[(k + 1) % 4]);
                if seen.insert((a.min(b), a.max(b))) {
                    out.push([a, b]);
                }
            }
        }
        out
    }
}

/// Cubed sphere with `n x n` quads per face: `6 n^2` quads, `6 n^2 + 2`
/// vertices. Shared vertices are merged through integer lattice keys, so
/// every vertex is computed exactly once.
pub fn cubed_sphere(n: usize) -> SphereMesh {
    assert!(n >= 1);
    let ni = n as i64;
    let mut index: HashMap<[i64; 3], usize> = HashMap::new();
    let mut points = Vec::with_capacity(6 * n * n + 2);
    let mut quads = Vec::with_capacity(6 * n * n);

    let mut vertex = |key: [i64; 3], points: &mut Vec<[f64; 3]>| -> usize {
        *index.entry(key).or_insert_with(|| {
            let c = key.map(|k| (FRAC_PI_4 * k as f64 / ni as f64).tan());
            let r = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
            points.push([c[0] / r, c[1] / r, c[2] / r]);
            points.len() - 1
        })
    };

    for axis in 0..3 {
        let a = (axis + 1) % 3;
        let b = (axis + 2) % 3;
        for sign in [1i64, -1] {
            for i in 0..ni {
                for j in 0..ni {
                    // tangent lattice coordinates 2i - n lie in [-n, n]
                    let corner = |di: i64, dj: i64| {
                        let mut key = [0i64; 3];
                        key[axis] = sign * ni;
                        key[a] = 2 * (i + di) - ni;
                        key[b] = 2 * (j + dj) - ni;
                        key
                    };
                    let k = [corner(0, 0), corner(1, 0), corner(1, 1), corner(0, 1)];
                    let mut q = k.map(|key| vertex(key, &mut points));
                    if sign < 0 {
                        q.reverse();
                    }
                    quads.push(q);
                }
            }
        }
    }
    SphereMesh { points, quads }
}
