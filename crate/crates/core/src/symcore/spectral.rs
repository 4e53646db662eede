use crate::error::{Error, Result};
use crate::symcore::eigh::eigh;
use crate::symcore::matrix::{CMatrix, HermitianMatrix, C64};
use crate::symcore::point::CovectorPoint;
use crate::symcore::symbol::SymbolField;

/// Relative gap below which a spectrum counts as degenerate.
pub const GAP_TOL: f64 = 1e-8;

/// Tolerance handed to the eigensolver.
pub const EIGH_TOL: f64 = 1e-12;

/// Sorted eigenvalues and rank-one eigenprojections at one point.
#[derive(Debug, Clone)]
pub struct SpectralPoint {
    pub eigenvalues: Vec<f64>,
    pub projections: Vec<CMatrix>,
    /// Unit eigenvectors with solver-chosen phases. Only the trivialization
    /// code looks at these; invariants use `projections`.
    pub vectors: Vec<Vec<C64>>,
    pub min_rel_gap: f64,
}

impl SpectralPoint {
    pub fn m(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `sum_j h_j P_j`.
    pub fn reconstruct(&self) -> CMatrix {
        let m = self.m();
        let mut a = CMatrix::zeros(m);
        for (h, p) in self.eigenvalues.iter().zip(&self.projections) {
            a = &a + &p.scale(C64::new(*h, 0.0));
        }
        a
    }
}

/// Smallest gap between consecutive sorted eigenvalues over the spectral
/// radius (or over 1 when the radius is below `1e-14`).
pub fn min_rel_gap(sorted: &[f64]) -> f64 {
    let radius = sorted.iter().fold(0.0f64, |r, h| r.max(h.abs()));
    let gap = sorted
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    if radius < 1e-14 {
        gap
    } else {
        gap / radius
    }
}

/// Decomposes the Hermitian part of `h`.
pub fn decompose_matrix(h: &HermitianMatrix, gap_tol: f64) -> Result<SpectralPoint> {
    let e = eigh(&h.symmetrized(), EIGH_TOL)?;
    let gap = min_rel_gap(&e.values);
    if !(gap >= gap_tol) {
        return Err(Error::DegenerateSpectrum {
            min_rel_gap: gap,
            gap_tol,
        });
    }
    let projections = e.vectors.iter().map(|v| CMatrix::outer(v)).collect();
    Ok(SpectralPoint {
        eigenvalues: e.values,
        projections,
        vectors: e.vectors,
        min_rel_gap: gap,
    })
}

/// Spectral data of `f` at `p` with the default gap tolerance.
pub fn spectral_decompose(f: &SymbolField, p: &CovectorPoint) -> Result<SpectralPoint> {
    spectral_decompose_with(f, p, GAP_TOL)
}

pub fn spectral_decompose_with(
    f: &SymbolField,
    p: &CovectorPoint,
    gap_tol: f64,
) -> Result<SpectralPoint> {
    decompose_matrix(&f.eval(p)?, gap_tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::matrix::c;

    #[test]
    fn identity_is_degenerate() {
        let h = HermitianMatrix::new(CMatrix::identity(3)).unwrap();
        assert_eq!(min_rel_gap(&[1.0, 1.0, 1.0]), 0.0);
        assert!(matches!(
            decompose_matrix(&h, GAP_TOL),
            Err(Error::DegenerateSpectrum { .. })
        ));
    }

    #[test]
    fn gap_uses_unit_scale_for_tiny_spectra() {
        assert_eq!(min_rel_gap(&[0.0, 1e-15]), 1e-15);
        assert_eq!(min_rel_gap(&[-1.0, 0.0, 1.0]), 1.0);
        assert_eq!(min_rel_gap(&[-1.0, 1.0]), 2.0);
    }

    #[test]
    fn projection_algebra() {
        let h = HermitianMatrix::new(CMatrix::from_rows(&[
            &[c(1.0, 0.0), c(0.5, -0.2), c(0.0, 0.3)],
            &[c(0.5, 0.2), c(-2.0, 0.0), c(0.1, 0.0)],
            &[c(0.0, -0.3), c(0.1, 0.0), c(0.4, 0.0)],
        ]))
        .unwrap();
        let sp = decompose_matrix(&h, GAP_TOL).unwrap();
        assert!((&sp.reconstruct() - h.matrix()).frobenius() < 1e-12);
        let mut sum = CMatrix::zeros(3);
        for (i, pi) in sp.projections.iter().enumerate() {
            sum = &sum + pi;
            assert!((pi.trace() - c(1.0, 0.0)).norm() < 1e-12);
            for (j, pj) in sp.projections.iter().enumerate() {
                let prod = pi * pj;
                let expect = if i == j { pi.clone() } else { CMatrix::zeros(3) };
                assert!((&prod - &expect).frobenius() < 1e-12);
            }
        }
        assert!((&sum - &CMatrix::identity(3)).frobenius() < 1e-12);
    }
}
