//! Points of punctured cotangent bundles over the supported base geometries.

use std::fmt;

use crate::error::{Error, Result};

const MIN_COVECTOR_NORM: f64 = 1e-12;
const CONSTRAINT_TOL: f64 = 1e-12;

/// Base manifolds with a registered probe set.
///
/// Positions on the spheres are ambient unit vectors; positions on the tori
/// are periodic chart coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Geometry {
    S2,
    T2,
    T3,
    S3,
}

impl Geometry {
    pub const ALL: [Geometry; 4] = [Geometry::S2, Geometry::T2, Geometry::T3, Geometry::S3];

    /// Dimension of the base manifold.
    pub fn base_dim(self) -> usize {
        match self {
            Geometry::S2 | Geometry::T2 => 2,
            Geometry::T3 | Geometry::S3 => 3,
        }
    }

    /// Number of coordinates used for both position and covector.
    pub fn ambient_dim(self) -> usize {
        match self {
            Geometry::T2 => 2,
            Geometry::S2 | Geometry::T3 => 3,
            Geometry::S3 => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Geometry::S2 => "S2",
            Geometry::T2 => "T2",
            Geometry::T3 => "T3",
            Geometry::S3 => "S3",
        }
    }

    pub fn is_sphere(self) -> bool {
        matches!(self, Geometry::S2 | Geometry::S3)
    }
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A point `(x, xi)` of `T*M \ {0}`.
///
/// Coordinates are stored in fixed arrays; only the first
/// [`Geometry::ambient_dim`] entries are meaningful, the rest are zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovectorPoint {
    geometry: Geometry,
    x: [f64; 4],
    xi: [f64; 4],
}

impl CovectorPoint {
    /// Validating constructor.
    pub fn new(geometry: Geometry, x: &[f64], xi: &[f64]) -> Result<Self> {
        let p = Self::from_parts(geometry, x, xi)?;
        p.check(CONSTRAINT_TOL)?;
        Ok(p)
    }

    /// Constructor that only checks shapes; used by evaluators that want to
    /// report constraint violations with their own tolerance.
    pub fn from_parts(geometry: Geometry, x: &[f64], xi: &[f64]) -> Result<Self> {
        let d = geometry.ambient_dim();
        if x.len() != d || xi.len() != d {
            return Err(Error::InvalidPoint(format!(
                "{geometry} expects {d} position and {d} covector components, got {} and {}",
                x.len(),
                xi.len()
            )));
        }
        let mut xa = [0.0; 4];
        let mut xia = [0.0; 4];
        xa[..d].copy_from_slice(x);
        xia[..d].copy_from_slice(xi);
        Ok(Self {
            geometry,
            x: xa,
            xi: xia,
        })
    }

    /// Checks the geometric constraints with tolerance `tol`.
    pub fn check(&self, tol: f64) -> Result<()> {
        if self.x().iter().chain(self.xi()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidPoint("non-finite coordinate".into()));
        }
        let n = self.xi_norm();
        if n <= MIN_COVECTOR_NORM {
            return Err(Error::InvalidPoint(format!("covector norm {n:e} is zero")));
        }
        if self.geometry.is_sphere() {
            let r = norm(self.x());
            if (r - 1.0).abs() > tol {
                return Err(Error::InvalidPoint(format!(
                    "position not on the unit sphere (|x| = {r})"
                )));
            }
            let dot = dot(self.x(), self.xi());
            if dot.abs() > tol * (1.0 + n) {
                return Err(Error::InvalidPoint(format!(
                    "covector not tangent (x.xi = {dot:e})"
                )));
            }
        }
        Ok(())
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn x(&self) -> &[f64] {
        &self.x[..self.geometry.ambient_dim()]
    }

    pub fn xi(&self) -> &[f64] {
        &self.xi[..self.geometry.ambient_dim()]
    }

    /// Euclidean norm of the covector components.
    pub fn xi_norm(&self) -> f64 {
        norm(self.xi())
    }

    /// Same position, covector scaled by `lambda`.
    pub fn scaled(&self, lambda: f64) -> Self {
        let mut p = *self;
        for v in p.xi.iter_mut() {
            *v *= lambda;
        }
        p
    }

    /// Same position, unit covector.
    pub fn normalized(&self) -> Self {
        self.scaled(1.0 / self.xi_norm())
    }

    /// Concatenated `(x, xi)` used for chord lengths between samples.
    pub fn ambient(&self) -> Vec<f64> {
        self.x().iter().chain(self.xi()).copied().collect()
    }

    /// Ambient chord distance; torus positions are compared on the circle.
    pub fn chord(&self, other: &CovectorPoint) -> f64 {
        let mut s = 0.0;
        let periodic = !self.geometry.is_sphere();
        for (a, b) in self.x().iter().zip(other.x()) {
            let d = if periodic {
                let d = (a - b).rem_euclid(std::f64::consts::TAU);
                d.min(std::f64::consts::TAU - d)
            } else {
                a - b
            };
            s += d * d;
        }
        for (a, b) in self.xi().iter().zip(other.xi()) {
            s += (a - b) * (a - b);
        }
        s.sqrt()
    }

    /// Bitwise equality of all coordinates.
    pub fn bit_eq(&self, other: &CovectorPoint) -> bool {
        self.geometry == other.geometry
            && self
                .x
                .iter()
                .chain(&self.xi)
                .zip(other.x.iter().chain(&other.xi))
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| u * v).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_zero_covector() {
        let err = CovectorPoint::new(Geometry::T3, &[0.0; 3], &[0.0; 3]).unwrap_err();
        assert!(matches!(err, Error::InvalidPoint(_)));
    }

    #[test]
    fn sphere_constraints() {
        assert!(CovectorPoint::new(Geometry::S2, &[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0]).is_ok());
        assert!(CovectorPoint::new(Geometry::S2, &[0.0, 0.0, 2.0], &[1.0, 0.0, 0.0]).is_err());
        assert!(CovectorPoint::new(Geometry::S2, &[0.0, 0.0, 1.0], &[1.0, 0.0, 0.1]).is_err());
        assert!(
            CovectorPoint::new(Geometry::S3, &[1.0, 0.0, 0.0, 0.0], &[0.0, 1.0, 0.0, 0.0]).is_ok()
        );
        assert!(
            CovectorPoint::new(Geometry::S3, &[1.0, 0.0, 0.0, 0.0], &[0.5, 1.0, 0.0, 0.0]).is_err()
        );
    }

    #[test]
    fn wrong_arity() {
        assert!(CovectorPoint::new(Geometry::T2, &[0.0; 3], &[1.0, 0.0]).is_err());
    }

    #[test]
    fn torus_chord_is_periodic() {
        let a = CovectorPoint::new(Geometry::T2, &[0.01, 0.0], &[1.0, 0.0]).unwrap();
        let b = CovectorPoint::new(Geometry::T2, &[std::f64::consts::TAU - 0.01, 0.0], &[1.0, 0.0])
            .unwrap();
        assert!((a.chord(&b) - 0.02).abs() < 1e-12);
    }
}
