//! The fiber circle of S*S2 and a disc of rotations bounding it twice.
//!
//! A unit cotangent vector `(x, xi)` of the 2-sphere is identified with the
//! rotation `R` taking `(e3, e1)` to `(x, xi)`. The disc
//! `q(phi, t) = cos(phi) (cos t + k sin t) + sin(phi) i` of unit quaternions,
//! `(phi, t)` in `[0, pi/2] x [0, 2 pi]`, starts on the rotations about `e3`
//! (each met twice as `t` runs once around) and ends at the single
//! rotation `i`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::error::{Error, Result};
use crate::probes::{LoopPath, MeshRecipe, QuadCycleMesh};
use crate::quat;
use crate::symcore::point::{CovectorPoint, Geometry};

/// A loop `gamma` and a disc `sigma` whose boundary, read off `boundary`,
/// is `gamma` traversed twice.
#[derive(Debug, Clone)]
pub struct TorsionChain {
    pub gamma: LoopPath,
    pub sigma: QuadCycleMesh,
    /// Indices into `sigma.vertices` of the boundary ring, in order.
    pub boundary: Vec<usize>,
    pub n_loop: usize,
    pub n_disc: usize,
}

impl TorsionChain {
    /// Checks the boundary identification and the edge pairing of `sigma`.
    pub fn check(&self) -> Result<()> {
        let n = self.gamma.vertices.len();
        let invalid = |reason: String| Error::InvalidMesh {
            label: self.sigma.label.clone(),
            reason,
        };
        if self.boundary.len() != 2 * n {
            return Err(invalid(format!("boundary has {} vertices, expected {}", self.boundary.len(), 2 * n)));
        }
        for (k, &b) in self.boundary.iter().enumerate() {
            if !self.sigma.vertices[b].bit_eq(&self.gamma.vertices[k % n]) {
                return Err(invalid(format!("boundary vertex {k} differs from the loop")));
            }
        }
        let mut expected: Vec<(usize, usize)> = (0..2 * n)
            .map(|k| (self.boundary[k], self.boundary[(k + 1) % (2 * n)]))
            .collect();
        expected.sort_unstable();
        let found = self.sigma.boundary_edges()?;
        if found != expected {
            return Err(invalid(format!(
                "boundary edges do not match the doubled loop ({} found)",
                found.len()
            )));
        }
        self.sigma.check_vertices()
    }

    /// The chain at doubled loop and disc resolution.
    pub fn refined(&self) -> Result<TorsionChain> {
        belt_trick_chain(2 * self.n_loop, 2 * self.n_disc)
    }
}

/// `(R e3, R e1)` for the rotation `R` of `q(phi, t)`.
pub fn belt_vertex(phi: f64, t: f64) -> CovectorPoint {
    let q = [phi.cos() * t.cos(), phi.sin(), 0.0, phi.cos() * t.sin()];
    let r = quat::rotation(&q);
    let x = [r[0][2], r[1][2], r[2][2]];
    let xi = [r[0][0], r[1][0], r[2][0]];
    CovectorPoint::from_parts(Geometry::S2, &x, &xi).expect("three components")
}

/// Torsion chain with `n_loop` loop points and `n_disc` rings.
pub fn belt_trick_chain(n_loop: usize, n_disc: usize) -> Result<TorsionChain> {
    if n_loop < 32 || !n_loop.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("n_loop = {n_loop} must be even and >= 32")));
    }
    if n_disc < 16 {
        return Err(Error::InvalidParameter(format!("n_disc = {n_disc} must be >= 16")));
    }
    let gamma_vertices: Vec<CovectorPoint> = (0..n_loop)
        .map(|k| {
            let t = TAU * k as f64 / n_loop as f64;
            CovectorPoint::new(Geometry::S2, &[0.0, 0.0, 1.0], &[t.cos(), t.sin(), 0.0])
        })
        .collect::<Result<_>>()?;

    let ring = 2 * n_loop;
    let mut vertices = Vec::with_capacity(ring * n_disc + 1);
    // ring 0 copies the loop twice, bit for bit
    for j in 0..ring {
        vertices.push(gamma_vertices[j % n_loop]);
    }
    for i in 1..n_disc {
        let phi = FRAC_PI_2 * i as f64 / n_disc as f64;
        for j in 0..ring {
            let t = PI * j as f64 / n_loop as f64;
            let mut v = belt_vertex(phi, t);
            v = renormalize(&v);
            v.check(1e-12)?;
            vertices.push(v);
        }
    }
    let apex = vertices.len();
    vertices.push(CovectorPoint::new(Geometry::S2, &[0.0, 0.0, -1.0], &[1.0, 0.0, 0.0])?);

    let id = |i: usize, j: usize| if i == n_disc { apex } else { i * ring + (j % ring) };
    let mut quads = Vec::with_capacity(ring * n_disc);
    for i in 0..n_disc {
        for j in 0..ring {
            quads.push([id(i, j), id(i, j + 1), id(i + 1, j + 1), id(i + 1, j)]);
        }
    }
    let sigma = QuadCycleMesh {
        label: "belt-disc".into(),
        resolution: n_disc,
        vertices,
        quads,
        recipe: MeshRecipe::Fixed,
        reversed: false,
    };
    Ok(TorsionChain {
        gamma: LoopPath {
            label: "fiber-circle-s2".into(),
            vertices: gamma_vertices,
        },
        sigma,
        boundary: (0..ring).collect(),
        n_loop,
        n_disc,
    })
}

fn renormalize(p: &CovectorPoint) -> CovectorPoint {
    let x = p.x();
    let r = crate::symcore::point::norm(x);
    let x = [x[0] / r, x[1] / r, x[2] / r];
    let xi = p.xi();
    let t = x[0] * xi[0] + x[1] * xi[1] + x[2] * xi[2];
    let mut xi = [xi[0] - t * x[0], xi[1] - t * x[1], xi[2] - t * x[2]];
    let s = crate::symcore::point::norm(&xi);
    xi.iter_mut().for_each(|v| *v /= s);
    CovectorPoint::from_parts(Geometry::S2, &x, &xi).expect("three components")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_is_loop_twice() {
        let c = belt_trick_chain(32, 16).unwrap();
        assert_eq!(c.boundary.len(), 64);
        c.check().unwrap();
        assert_eq!(c.sigma.quads.len(), 64 * 16);
    }

    #[test]
    fn disc_corners() {
        let p = belt_vertex(0.0, 0.0);
        assert_eq!(p.x(), &[0.0, 0.0, 1.0]);
        assert_eq!(p.xi(), &[1.0, 0.0, 0.0]);
        for t in [0.0, 0.4, 2.0, 5.9] {
            let p = belt_vertex(FRAC_PI_2, t);
            let want_x = [0.0, 0.0, -1.0];
            let want_xi = [1.0, 0.0, 0.0];
            for k in 0..3 {
                assert!((p.x()[k] - want_x[k]).abs() < 1e-15);
                assert!((p.xi()[k] - want_xi[k]).abs() < 1e-15);
            }
        }
        // the phi = 0 ring is the rotation about e3 by 2t
        let p = belt_vertex(0.0, 0.3);
        assert!((p.xi()[0] - 0.6f64.cos()).abs() < 1e-15);
        assert!((p.xi()[1] - 0.6f64.sin()).abs() < 1e-15);
    }

    #[test]
    fn parameter_validation() {
        assert!(belt_trick_chain(30, 16).is_err());
        assert!(belt_trick_chain(33, 16).is_err());
        assert!(belt_trick_chain(32, 8).is_err());
    }

    #[test]
    fn loop_spacing() {
        let c = belt_trick_chain(64, 32).unwrap();
        let v = &c.gamma.vertices;
        let n = v.len();
        for k in 0..n {
            let d = v[k].chord(&v[(k + 1) % n]);
            assert!(d > 0.0 && d <= TAU / n as f64 * 1.1);
        }
    }
}
