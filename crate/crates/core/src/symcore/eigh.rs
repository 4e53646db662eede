//! Cyclic Jacobi eigensolver for small complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary and then applies the classical real Jacobi rotation, so the
//! accumulated transform is unitary and the pivot is annihilated exactly.

use crate::error::{Error, Result};
use crate::symcore::matrix::{c, HermitianMatrix, C64};

/// Sweep budget before reporting non-convergence.
pub const MAX_SWEEPS: usize = 50;

/// Eigenpairs in ascending eigenvalue order; `vectors[j]` belongs to
/// `values[j]` and has unit norm. Phases are whatever the rotations produced.
#[derive(Debug, Clone)]
pub struct Eigh {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<C64>>,
}

/// Diagonalizes `h` using at most [`MAX_SWEEPS`] sweeps.
pub fn eigh(h: &HermitianMatrix, tol: f64) -> Result<Eigh> {
    eigh_with_budget(h, tol, MAX_SWEEPS)
}

/// As [`eigh`] with an explicit sweep budget.
pub fn eigh_with_budget(h: &HermitianMatrix, tol: f64, max_sweeps: usize) -> Result<Eigh> {
    if !(tol > 0.0 && tol <= 1e-6) {
        return Err(Error::InvalidParameter(format!(
            "eigensolver tolerance {tol:e} outside (0, 1e-6]"
        )));
    }
    let m = h.dim();
    let mut a: Vec<C64> = h.matrix().as_slice().to_vec();
    for i in 0..m {
        a[i * m + i] = c(a[i * m + i].re, 0.0);
    }
    let mut v = vec![c(0.0, 0.0); m * m];
    for i in 0..m {
        v[i * m + i] = c(1.0, 0.0);
    }

    let norm = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let floor = 4.0 * f64::EPSILON * norm;
    let skip = 1e-3 * f64::EPSILON * norm;

    let mut converged = false;
    for _ in 0..max_sweeps {
        if off_diagonal(&a, m) <= floor {
            converged = true;
            break;
        }
        for p in 0..m {
            for q in (p + 1)..m {
                let apq = a[p * m + q];
                let b = apq.norm();
                if b <= skip {
                    a[p * m + q] = c(0.0, 0.0);
                    a[q * m + p] = c(0.0, 0.0);
                    continue;
                }
                rotate(&mut a, &mut v, m, p, q, apq / b, b);
            }
        }
    }
    let off = off_diagonal(&a, m);
    if !converged && off > tol * (1.0 + norm) {
        return Err(Error::NoConvergence {
            sweeps: max_sweeps,
            residual: off,
        });
    }

    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| a[i * m + i].re.total_cmp(&a[j * m + j].re));
    let values = order.iter().map(|&i| a[i * m + i].re).collect();
    let vectors = order
        .iter()
        .map(|&j| (0..m).map(|i| v[i * m + j]).collect())
        .collect();
    Ok(Eigh { values, vectors })
}

fn off_diagonal(a: &[C64], m: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..m {
        for j in 0..m {
            if i != j {
                s += a[i * m + j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Annihilates `a_pq = b * phase` with `G = diag(1, conj(phase)) * R(theta)`.
fn rotate(a: &mut [C64], v: &mut [C64], m: usize, p: usize, q: usize, phase: C64, b: f64) {
    let app = a[p * m + p].re;
    let aqq = a[q * m + q].re;
    let theta = (aqq - app) / (2.0 * b);
    let t = if theta >= 0.0 {
        1.0 / (theta + (theta * theta + 1.0).sqrt())
    } else {
        -1.0 / (-theta + (theta * theta + 1.0).sqrt())
    };
    let cs = 1.0 / (t * t + 1.0).sqrt();
    let sn = t * cs;

    let g_pp = c(cs, 0.0);
    let g_pq = c(sn, 0.0);
    let g_qp = phase.conj() * (-sn);
    let g_qq = phase.conj() * cs;

    for k in 0..m {
        let akp = a[k * m + p];
        let akq = a[k * m + q];
        a[k * m + p] = akp * g_pp + akq * g_qp;
        a[k * m + q] = akp * g_pq + akq * g_qq;
    }
    for k in 0..m {
        let apk = a[p * m + k];
        let aqk = a[q * m + k];
        a[p * m + k] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[q * m + k] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[p * m + q] = c(0.0, 0.0);
    a[q * m + p] = c(0.0, 0.0);
    a[p * m + p] = c(a[p * m + p].re, 0.0);
    a[q * m + q] = c(a[q * m + q].re, 0.0);

    for k in 0..m {
        let vkp = v[k * m + p];
        let vkq = v[k * m + q];
        v[k * m + p] = vkp * g_pp + vkq * g_qp;
        v[k * m + q] = vkp * g_pq + vkq * g_qq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::matrix::{inner, vec_norm, CMatrix};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const TOL: f64 = 1e-12;

    fn herm(rows: &[&[C64]]) -> HermitianMatrix {
        HermitianMatrix::new(CMatrix::from_rows(rows)).unwrap()
    }

    fn random_hermitian(rng: &mut ChaCha8Rng, m: usize) -> HermitianMatrix {
        let data = (0..m * m)
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        HermitianMatrix::new(CMatrix::from_vec(m, data)).unwrap()
    }

    #[test]
    fn pauli_x() {
        let s1 = herm(&[&[c(0., 0.), c(1., 0.)], &[c(1., 0.), c(0., 0.)]]);
        let e = eigh(&s1, TOL).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((inner(&e.vectors[0], &[c(r, 0.), c(-r, 0.)]).norm() - 1.0).abs() < 1e-14);
        assert!((inner(&e.vectors[1], &[c(r, 0.), c(r, 0.)]).norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn identity_is_fixed() {
        let e = eigh(&HermitianMatrix::new(CMatrix::identity(3)).unwrap(), TOL).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0, 1.0]);
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((inner(&e.vectors[i], &e.vectors[j]).norm() - expect).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn dirac_flat_eigenvalues() {
        // s1*3 + s2*4
        let h = herm(&[&[c(0., 0.), c(3., -4.)], &[c(3., 4.), c(0., 0.)]]);
        let e = eigh(&h, TOL).unwrap();
        assert!((e.values[0] + 5.0).abs() < 1e-13);
        assert!((e.values[1] - 5.0).abs() < 1e-13);
    }

    #[test]
    fn residual_and_orthonormality_up_to_eight() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for m in 2..=8 {
            for _ in 0..20 {
                let h = random_hermitian(&mut rng, m);
                let e = eigh(&h, TOL).unwrap();
                let hn = h.matrix().frobenius();
                for j in 0..m {
                    let hv = h.matrix().mul_vec(&e.vectors[j]);
                    let res: Vec<C64> =
                        hv.iter().zip(&e.vectors[j]).map(|(a, b)| a - b * e.values[j]).collect();
                    assert!(vec_norm(&res) <= TOL * (1.0 + hn));
                    for k in 0..m {
                        let expect = if j == k { 1.0 } else { 0.0 };
                        assert!((inner(&e.vectors[j], &e.vectors[k]) - expect).norm() < TOL);
                    }
                }
                assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
            }
        }
    }

    /// Closed-form 2x2 Hermitian eigenvalues and the projection onto the upper
    /// eigenvector, derived independently of the Jacobi rotations.
    fn closed_form_2x2(a: f64, d: f64, b: C64) -> (f64, f64, [[C64; 2]; 2]) {
        let mean = 0.5 * (a + d);
        let r = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
        // P+ = (H - h- I) / (h+ - h-)
        let lo = mean - r;
        let p = [
            [c((a - lo) / (2.0 * r), 0.0), b / (2.0 * r)],
            [b.conj() / (2.0 * r), c((d - lo) / (2.0 * r), 0.0)],
        ];
        (lo, mean + r, p)
    }

    #[test]
    fn agrees_with_closed_form_2x2() {
        let mut rng = ChaCha8Rng::seed_from_u64(1000);
        for _ in 0..1000 {
            let a = rng.random_range(-3.0..3.0);
            let d = rng.random_range(-3.0..3.0);
            let b = c(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            let h = herm(&[&[c(a, 0.), b], &[b.conj(), c(d, 0.)]]);
            let e = eigh(&h, TOL).unwrap();
            let (lo, hi, p) = closed_form_2x2(a, d, b);
            assert!((e.values[0] - lo).abs() < 1e-10);
            assert!((e.values[1] - hi).abs() < 1e-10);
            let pj = CMatrix::outer(&e.vectors[1]);
            for i in 0..2 {
                for j in 0..2 {
                    assert!((pj[(i, j)] - p[i][j]).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn rejects_bad_tolerance() {
        let h = HermitianMatrix::new(CMatrix::identity(2)).unwrap();
        assert!(eigh(&h, 0.0).is_err());
        assert!(eigh(&h, 1e-3).is_err());
    }

    #[test]
    fn exhausted_budget_reports_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = random_hermitian(&mut rng, 8);
        match eigh_with_budget(&h, 1e-12, 1) {
            Err(Error::NoConvergence { sweeps, residual }) => {
                assert_eq!(sweeps, 1);
                assert!(residual > 0.0);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }
}
