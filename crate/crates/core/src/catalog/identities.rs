//! Algebraic identities satisfied by catalog eigenvectors. All quantities
//! here are invariant under the phase of the eigenvector passed in.

use crate::catalog::{np_chart_block, np_sphere, LameParams, PauliBasis};
use crate::error::Result;
use crate::symcore::matrix::{c, CMatrix, C64};
use crate::symcore::point::{CovectorPoint, Geometry};

/// Defects of the spinor isotropy identities for a `+` band eigenvector `v`
/// of `sigma . xi`, with `u^a = v^T eps s^a v`.
#[derive(Debug, Clone, Copy)]
pub struct DiracIsotropy {
    /// `|u^T u|`.
    pub u_dot_u: f64,
    /// `| |u| - sqrt 2 |`.
    pub norm_defect: f64,
    /// `|u . xi|` for unit `xi`.
    pub u_dot_xi: f64,
}

pub fn dirac_isotropy(v: &[C64], framed_xi: [f64; 3]) -> DiracIsotropy {
    let p = PauliBasis::new();
    let n = (framed_xi.iter().map(|t| t * t).sum::<f64>()).sqrt();
    let mut u = [c(0.0, 0.0); 3];
    for (a, ua) in u.iter_mut().enumerate() {
        let w = p.eps.mul_vec(&p.sigma(a).mul_vec(v));
        *ua = v[0] * w[0] + v[1] * w[1];
    }
    let utu: C64 = u.iter().map(|z| z * z).sum();
    let unorm = u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let uxi: C64 = u.iter().zip(framed_xi).map(|(z, t)| z * (t / n)).sum();
    DiracIsotropy {
        u_dot_u: utu.norm(),
        norm_defect: (unorm - std::f64::consts::SQRT_2).abs(),
        u_dot_xi: uxi.norm(),
    }
}

/// `(|sum_a v_a v_a|, |xi . v|)` for a unit vector `v` and unit `xi`.
pub fn curl_isotropy(v: &[C64], xi: &[f64]) -> (f64, f64) {
    let n = (xi.iter().map(|t| t * t).sum::<f64>()).sqrt();
    let vv: C64 = v.iter().map(|z| z * z).sum();
    let xv: C64 = v.iter().zip(xi).map(|(z, t)| z * (t / n)).sum();
    (vv.norm(), xv.norm())
}

/// `(tr(s^1 P), tr(s^2 P), tr(s^3 P))`, real parts.
pub fn pauli_traces(proj: &CMatrix) -> [f64; 3] {
    let p = PauliBasis::new();
    [0, 1, 2].map(|a| (p.sigma(a) * proj).trace().re)
}

/// Spherical chart point of radius `radius`, returned as the unit position
/// together with the frame `(d_theta X, d_phi X, n)` as matrix columns.
pub fn spherical_frame(radius: f64, theta: f64, phi: f64) -> ([f64; 3], [[f64; 3]; 3]) {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let n = [st * cp, st * sp, ct];
    let d_theta = [radius * ct * cp, radius * ct * sp, -radius * st];
    let d_phi = [-radius * st * sp, radius * st * cp, 0.0];
    let mut s = [[0.0; 3]; 3];
    for i in 0..3 {
        s[i] = [d_theta[i], d_phi[i], n[i]];
    }
    (n, s)
}

/// Max-entry difference between the ambient Neumann-Poincare symbol written
/// in the adapted frame, `S^{-1} A S`, and the chart block form at the chart
/// point `(theta, phi)` with chart covector `xi`.
pub fn np_chart_defect(
    lame: LameParams,
    radius: f64,
    theta: f64,
    phi: f64,
    xi: [f64; 2],
) -> Result<f64> {
    let entry = np_sphere(lame, radius)?;
    let (n, s) = spherical_frame(radius, theta, phi);
    let g_inv = [
        1.0 / (radius * radius),
        1.0 / (radius * radius * theta.sin().powi(2)),
    ];
    // the covector as an ambient tangent vector: g^{ab} xi_b d_a X
    let mut xi_amb = [0.0; 3];
    for (i, v) in xi_amb.iter_mut().enumerate() {
        *v = g_inv[0] * xi[0] * s[i][0] + g_inv[1] * xi[1] * s[i][1];
    }
    let p = CovectorPoint::new(Geometry::S2, &n, &xi_amb)?;
    let a = entry.symbol.eval(&p)?;
    // columns of S are orthogonal; rows of S^{-1} are columns over their squared norms
    let col_norm2: [f64; 3] = [0, 1, 2].map(|k| (0..3).map(|i| s[i][k] * s[i][k]).sum());
    let mut s_c = CMatrix::zeros(3);
    let mut s_inv = CMatrix::zeros(3);
    for i in 0..3 {
        for k in 0..3 {
            s_c[(i, k)] = c(s[i][k], 0.0);
            s_inv[(k, i)] = c(s[i][k] / col_norm2[k], 0.0);
        }
    }
    let adapted = &(&s_inv * a.matrix()) * &s_c;
    let block = np_chart_block(lame, radius, theta, xi);
    Ok((&adapted - &block).max_abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{artificial_s2, curl3_flat, dirac3_flat, dirac_s2};
    use crate::symcore::spectral::spectral_decompose;
    use crate::symcore::validate::random_points;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn isotropy_at_north_pole_by_hand() {
        // v = (1, 0) gives u = (1, i, 0)
        let d = dirac_isotropy(&[c(1.0, 0.0), c(0.0, 0.0)], [0.0, 0.0, 1.0]);
        assert!(d.u_dot_u < 1e-15 && d.norm_defect < 1e-15 && d.u_dot_xi < 1e-15);
    }

    #[test]
    fn dirac_flat_isotropy() {
        let e = dirac3_flat();
        for p in random_points(Geometry::T3, 100, 4) {
            let sp = spectral_decompose(&e.symbol, &p).unwrap();
            let xi = [p.xi()[0], p.xi()[1], p.xi()[2]];
            let d = dirac_isotropy(&sp.vectors[1], xi);
            assert!(d.u_dot_u < 1e-10 && d.norm_defect < 1e-10 && d.u_dot_xi < 1e-10, "{d:?}");
        }
    }

    #[test]
    fn curl_isotropy_holds() {
        let e = curl3_flat();
        for p in random_points(Geometry::T3, 100, 5) {
            let sp = spectral_decompose(&e.symbol, &p).unwrap();
            for band in [0, 2] {
                let (vv, xv) = curl_isotropy(&sp.vectors[band], p.xi());
                assert!(vv < 1e-10 && xv < 1e-10);
            }
        }
    }

    #[test]
    fn trace_maps() {
        let d = dirac_s2();
        let a = artificial_s2(2.0, -1.0, 0.0).unwrap();
        for p in random_points(Geometry::S2, 100, 6) {
            let sp = spectral_decompose(&d.symbol, &p).unwrap();
            let plus = pauli_traces(&sp.projections[1]);
            let minus = pauli_traces(&sp.projections[0]);
            for k in 0..3 {
                assert!((plus[k] - p.xi()[k]).abs() < 1e-10);
                assert!((minus[k] + p.xi()[k]).abs() < 1e-10);
            }
            // c+ = 2 > c- = -1: band 1 carries P+
            let sp = spectral_decompose(&a.symbol, &p).unwrap();
            let plus = pauli_traces(&sp.projections[1]);
            let minus = pauli_traces(&sp.projections[0]);
            for k in 0..3 {
                assert!((plus[k] - p.x()[k]).abs() < 1e-10);
                assert!((minus[k] + p.x()[k]).abs() < 1e-10);
            }
            let prod = &sp.projections[0] * &sp.projections[1];
            assert!(prod.frobenius() < 1e-10);
        }
    }

    #[test]
    fn np_ambient_matches_chart() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        for _ in 0..20 {
            let theta = rng.random_range(0.2..std::f64::consts::PI - 0.2);
            let phi = rng.random_range(0.0..std::f64::consts::TAU);
            let xi = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
            let radius = rng.random_range(0.5..3.0);
            let d = np_chart_defect(LameParams::new(1.3, 0.8), radius, theta, phi, xi).unwrap();
            assert!(d < 1e-10, "defect {d}");
        }
    }
}
