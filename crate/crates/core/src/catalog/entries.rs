use std::collections::BTreeMap;
use std::sync::Arc;

use crate::catalog::{sigma_dot, CatalogEntry, LameParams};
use crate::error::{Error, Result};
use crate::quat;
use crate::symcore::matrix::{c, CMatrix, HermitianMatrix};
use crate::symcore::point::{dot, norm, CovectorPoint, Geometry};
use crate::symcore::symbol::SymbolField;

const S2_CONSTRAINT_TOL: f64 = 1e-10;

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

fn xi3(p: &CovectorPoint) -> [f64; 3] {
    let xi = p.xi();
    [xi[0], xi[1], xi[2]]
}

/// `sigma . xi` on the flat 3-torus.
pub fn dirac3_flat() -> CatalogEntry {
    let symbol = SymbolField::new("dirac3-flat", Geometry::T3, 2, 1.0, BTreeMap::new(), |p| {
        HermitianMatrix::new(sigma_dot(xi3(p)))
    })
    .expect("valid symbol");
    CatalogEntry::new(
        symbol,
        vec![true, true],
        vec![true, true],
        "Dirac principal symbol, identity framing of the flat 3-torus",
        Some(Arc::new(|p| {
            let n = p.xi_norm();
            vec![-n, n]
        })),
    )
}

/// Framed covector components `xi(e_j(x))` on the 3-sphere.
pub fn s3_framed_covector(p: &CovectorPoint) -> [f64; 3] {
    let x = p.x();
    let e = quat::s3_frame(&[x[0], x[1], x[2], x[3]]);
    [dot(&e[0], p.xi()), dot(&e[1], p.xi()), dot(&e[2], p.xi())]
}

/// Dirac symbol on the round 3-sphere with the left-invariant framing.
pub fn dirac3_s3() -> CatalogEntry {
    let symbol = SymbolField::new("dirac3-s3", Geometry::S3, 2, 1.0, BTreeMap::new(), |p| {
        HermitianMatrix::new(sigma_dot(s3_framed_covector(p)))
    })
    .expect("valid symbol");
    CatalogEntry::new(
        symbol,
        vec![true, true],
        vec![true, true],
        "Dirac principal symbol on the unit 3-sphere, framing e_j(x) = x i_j",
        Some(Arc::new(|p| {
            let n = p.xi_norm();
            vec![-n, n]
        })),
    )
}

/// `A_ab = -i eps_abc xi_c` on the flat 3-torus.
pub fn curl3_flat() -> CatalogEntry {
    let symbol = SymbolField::new("curl3", Geometry::T3, 3, 1.0, BTreeMap::new(), |p| {
        let [a, b, g] = xi3(p);
        let z = c(0.0, 0.0);
        // -i eps_{abc} xi_c: (0,1) -> -i xi3, (0,2) -> +i xi2, (1,2) -> -i xi1
        HermitianMatrix::new(CMatrix::from_rows(&[
            &[z, c(0.0, -g), c(0.0, b)],
            &[c(0.0, g), z, c(0.0, -a)],
            &[c(0.0, -b), c(0.0, a), z],
        ]))
    })
    .expect("valid symbol");
    CatalogEntry::new(
        symbol,
        vec![true, false, true],
        vec![true, false, true],
        "curl principal symbol on the flat 3-torus; the zero band has the section xi/|xi|",
        Some(Arc::new(|p| {
            let n = p.xi_norm();
            vec![-n, 0.0, n]
        })),
    )
}

fn s2_constraint(p: &CovectorPoint) -> Result<()> {
    let r = norm(p.x());
    let t = dot(p.x(), p.xi());
    if (r - 1.0).abs() > S2_CONSTRAINT_TOL || t.abs() > S2_CONSTRAINT_TOL * (1.0 + p.xi_norm()) {
        return Err(Error::InvalidPoint(format!(
            "off the cotangent bundle of the 2-sphere (|x| = {r}, x.xi = {t:e})"
        )));
    }
    Ok(())
}

/// `[[xi3, xi1 - i xi2], [xi1 + i xi2, -xi3]]` on the constrained cotangent
/// bundle of the unit 2-sphere.
pub fn dirac_s2() -> CatalogEntry {
    let symbol = SymbolField::new("dirac-s2", Geometry::S2, 2, 1.0, BTreeMap::new(), |p| {
        s2_constraint(p)?;
        HermitianMatrix::new(sigma_dot(xi3(p)))
    })
    .expect("valid symbol");
    CatalogEntry::new(
        symbol,
        vec![false, false],
        vec![true, true],
        "restricted Dirac symbol on the 2-sphere; obstruction is the mod 2 class of S*S2",
        Some(Arc::new(|p| {
            let n = p.xi_norm();
            vec![-n, n]
        })),
    )
}

/// `|xi|^s (c+ P+ + c- P-)` with `P+- = (I +- x.sigma) / 2`.
pub fn artificial_s2(c_plus: f64, c_minus: f64, s: f64) -> Result<CatalogEntry> {
    if !(c_plus.is_finite() && c_minus.is_finite() && s.is_finite()) {
        return Err(Error::InvalidParameter("non-finite coefficient".into()));
    }
    if c_plus == 0.0 || c_minus == 0.0 {
        return Err(Error::InvalidParameter(format!(
            "coefficients must be nonzero (c_plus = {c_plus}, c_minus = {c_minus})"
        )));
    }
    if c_plus == c_minus {
        return Err(Error::InvalidParameter(format!(
            "coefficients must differ (c_plus = c_minus = {c_plus})"
        )));
    }
    let params = BTreeMap::from([
        ("c_minus".to_string(), c_minus),
        ("c_plus".to_string(), c_plus),
        ("s".to_string(), s),
    ]);
    let symbol = SymbolField::new("artificial-s2", Geometry::S2, 2, s, params, move |p| {
        let x = p.x();
        let xs = sigma_dot([x[0], x[1], x[2]]);
        let id = CMatrix::identity(2);
        let half = c(0.5, 0.0);
        let pp = (&id + &xs).scale(half);
        let pm = (&id - &xs).scale(half);
        let scale = p.xi_norm().powf(s);
        let a = &pp.scale(c(c_plus * scale, 0.0)) + &pm.scale(c(c_minus * scale, 0.0));
        HermitianMatrix::new(a)
    })?;
    Ok(CatalogEntry::new(
        symbol,
        vec![false, false],
        vec![true, true],
        "artificial symbol on the 2-sphere built from the projections (I +- x.sigma)/2",
        Some(Arc::new(move |p| {
            let n = p.xi_norm().powf(s);
            sorted(vec![c_plus * n, c_minus * n])
        })),
    ))
}

/// Conformal factor exponent `phi(x) = a (cos x1 + cos x2)`.
pub fn elasticity_phi(amplitude: f64, x: &[f64]) -> f64 {
    amplitude * (x[0].cos() + x[1].cos())
}

/// Elasticity principal symbol on the 2-torus with metric `e^{2 phi} delta`
/// and framing `e_j = e^{-phi} delta_j`.
pub fn elasticity_t2(lame: LameParams, conformal_amplitude: f64) -> Result<CatalogEntry> {
    let LameParams { lambda, mu } = lame;
    if !(mu > 0.0 && lambda + mu > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "strong convexity requires mu > 0 and lambda + mu > 0 (lambda = {lambda}, mu = {mu})"
        )));
    }
    if !(conformal_amplitude.abs() < 0.5) {
        return Err(Error::InvalidParameter(format!(
            "conformal amplitude {conformal_amplitude} outside (-0.5, 0.5)"
        )));
    }
    let params = BTreeMap::from([
        ("conformal".to_string(), conformal_amplitude),
        ("lambda".to_string(), lambda),
        ("mu".to_string(), mu),
    ]);
    let symbol = SymbolField::new("elasticity-t2", Geometry::T2, 2, 2.0, params, move |p| {
        let xi = p.xi();
        let phi = elasticity_phi(conformal_amplitude, p.x());
        let n = p.xi_norm();
        let h2 = (-2.0 * phi).exp() * n * n;
        let q = [xi[0] / n, xi[1] / n];
        let mut a = CMatrix::zeros(2);
        for i in 0..2 {
            for j in 0..2 {
                let delta = if i == j { mu } else { 0.0 };
                a[(i, j)] = c(h2 * (delta + (lambda + mu) * q[i] * q[j]), 0.0);
            }
        }
        HermitianMatrix::new(a)
    })?;
    Ok(CatalogEntry::new(
        symbol,
        vec![false, false],
        vec![false, false],
        "elasticity symbol on a conformally flat 2-torus; eigenvectors eps q and q",
        Some(Arc::new(move |p| {
            let phi = elasticity_phi(conformal_amplitude, p.x());
            let n = p.xi_norm();
            let h2 = (-2.0 * phi).exp() * n * n;
            vec![mu * h2, (lambda + 2.0 * mu) * h2]
        })),
    ))
}

fn np_constant(lame: LameParams) -> f64 {
    lame.mu / (2.0 * (lame.lambda + 2.0 * lame.mu))
}

/// Neumann-Poincare principal symbol on a sphere of radius `radius`, in
/// ambient form `-i c (n xi^T - xi n^T)` with unit `xi`.
pub fn np_sphere(lame: LameParams, radius: f64) -> Result<CatalogEntry> {
    let LameParams { lambda, mu } = lame;
    if !(mu > 0.0 && lambda + 2.0 * mu / 3.0 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "requires mu > 0 and lambda + 2 mu / 3 > 0 (lambda = {lambda}, mu = {mu})"
        )));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidParameter(format!("radius {radius} must be positive")));
    }
    let cc = np_constant(lame);
    let params = BTreeMap::from([
        ("lambda".to_string(), lambda),
        ("mu".to_string(), mu),
        ("radius".to_string(), radius),
    ]);
    let symbol = SymbolField::new("np-sphere", Geometry::S2, 3, 0.0, params, move |p| {
        let x: Vec<f64> = p.x().iter().map(|v| radius * v).collect();
        let r = norm(&x);
        let nrm = [x[0] / r, x[1] / r, x[2] / r];
        let k = p.xi_norm();
        let xh = [p.xi()[0] / k, p.xi()[1] / k, p.xi()[2] / k];
        let mut a = CMatrix::zeros(3);
        for i in 0..3 {
            for j in 0..3 {
                a[(i, j)] = c(0.0, -cc * (nrm[i] * xh[j] - xh[i] * nrm[j]));
            }
        }
        HermitianMatrix::new(a)
    })?;
    Ok(CatalogEntry::new(
        symbol,
        vec![false, false, false],
        vec![false, false, false],
        "Neumann-Poincare principal symbol of 3D elasticity on a sphere, ambient form",
        Some(Arc::new(move |_| vec![-cc, 0.0, cc])),
    ))
}

/// The Neumann-Poincare symbol in the adapted frame `(d_theta, d_phi, n)` of
/// the spherical chart of radius `radius`. `xi` are chart components
/// `(xi_theta, xi_phi)`.
pub fn np_chart_block(lame: LameParams, radius: f64, theta: f64, xi: [f64; 2]) -> CMatrix {
    let cc = np_constant(lame);
    let g_inv = [
        1.0 / (radius * radius),
        1.0 / (radius * radius * theta.sin() * theta.sin()),
    ];
    let xi_g = (g_inv[0] * xi[0] * xi[0] + g_inv[1] * xi[1] * xi[1]).sqrt();
    let mut a = CMatrix::zeros(3);
    for b in 0..2 {
        a[(2, b)] = c(0.0, -cc * xi[b] / xi_g);
        a[(b, 2)] = c(0.0, cc * g_inv[b] * xi[b] / xi_g);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::matrix::{inner, C64};
    use crate::symcore::spectral::spectral_decompose;

    fn t3(xi: [f64; 3]) -> CovectorPoint {
        CovectorPoint::new(Geometry::T3, &[0.4, 1.0, 2.0], &xi).unwrap()
    }

    #[test]
    fn dirac_flat_on_third_axis_is_s3() {
        let e = dirac3_flat();
        let a = e.symbol.eval(&t3([0.0, 0.0, 1.0])).unwrap();
        assert_eq!(a.matrix(), &sigma_dot([0.0, 0.0, 1.0]));
        let sp = spectral_decompose(&e.symbol, &t3([0.0, 0.0, 1.0])).unwrap();
        assert!((sp.projections[1][(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(sp.projections[1][(1, 1)].norm() < 1e-15);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let sp = spectral_decompose(&e.symbol, &t3([r, r, 0.0])).unwrap();
        assert!((sp.eigenvalues[0] + 1.0).abs() < 1e-14 && (sp.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn dirac_flat_is_linear_in_xi() {
        let e = dirac3_flat();
        let p = t3([0.3, -0.2, 0.9]);
        let a = e.symbol.eval(&p).unwrap();
        let b = e.symbol.eval(&p.scaled(2.0)).unwrap();
        assert!((b.matrix() - &a.matrix().scale(c(2.0, 0.0))).frobenius() < 1e-15);
    }

    #[test]
    fn curl_spectrum_and_zero_band() {
        let e = curl3_flat();
        let sp = spectral_decompose(&e.symbol, &t3([0.0, 0.0, 1.0])).unwrap();
        for (h, want) in sp.eigenvalues.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((h - want).abs() < 1e-14);
        }
        let v = &sp.vectors[1];
        assert!((v[2].norm() - 1.0).abs() < 1e-14);
        let sp = spectral_decompose(&e.symbol, &t3([0.0, 1.0, 0.0])).unwrap();
        let want = analytic(&e, &t3([0.0, 1.0, 0.0]));
        for (h, w) in sp.eigenvalues.iter().zip(want) {
            assert!((h - w).abs() < 1e-14);
        }
    }

    fn analytic(e: &CatalogEntry, p: &CovectorPoint) -> Vec<f64> {
        crate::catalog::analytic_eigenvalues(e, p).unwrap()
    }

    #[test]
    fn dirac_s2_reads_off_s1() {
        let e = dirac_s2();
        let p = CovectorPoint::new(Geometry::S2, &[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(e.symbol.eval(&p).unwrap().matrix(), &sigma_dot([1.0, 0.0, 0.0]));
        let off = CovectorPoint::from_parts(Geometry::S2, &[0.0, 0.0, 1.0], &[1.0, 0.0, 1e-6]).unwrap();
        assert!(matches!(e.symbol.eval(&off), Err(Error::InvalidPoint(_))));
    }

    #[test]
    fn artificial_parameter_checks() {
        assert!(artificial_s2(1.0, 1.0, 0.0).is_err());
        assert!(artificial_s2(0.0, 1.0, 0.0).is_err());
        assert!(artificial_s2(2.0, 0.0, 0.0).is_err());
        let e = artificial_s2(2.0, -1.0, 0.0).unwrap();
        let p = CovectorPoint::new(Geometry::S2, &[0.0, 0.0, 1.0], &[0.0, 1.0, 0.0]).unwrap();
        // P+ = diag(1, 0) and P- = diag(0, 1) at the north pole
        let a = e.symbol.eval(&p).unwrap();
        assert_eq!(a[(0, 0)], c(2.0, 0.0));
        assert_eq!(a[(1, 1)], c(-1.0, 0.0));
        assert_eq!(a[(0, 1)], c(0.0, 0.0));
    }

    #[test]
    fn elasticity_flat_example() {
        let e = elasticity_t2(LameParams::new(1.0, 1.0), 0.0).unwrap();
        let p = CovectorPoint::new(Geometry::T2, &[0.5, 0.5], &[1.0, 0.0]).unwrap();
        let a = e.symbol.eval(&p).unwrap();
        assert_eq!(a.matrix(), &CMatrix::from_rows(&[&[c(3.0, 0.0), c(0.0, 0.0)], &[c(0.0, 0.0), c(1.0, 0.0)]]));
        let sp = spectral_decompose(&e.symbol, &p).unwrap();
        assert!((sp.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((sp.eigenvalues[1] - 3.0).abs() < 1e-14);
        // eps q = (0, -1) for q = (1, 0)
        let v: [C64; 2] = [c(0.0, 0.0), c(-1.0, 0.0)];
        assert!((inner(&sp.vectors[0], &v).norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn elasticity_rejects_non_convex() {
        assert!(elasticity_t2(LameParams::new(-2.0, 1.0), 0.0).is_err());
        assert!(elasticity_t2(LameParams::new(-1.0, 1.0), 0.0).is_err());
        assert!(elasticity_t2(LameParams::new(1.0, 0.0), 0.0).is_err());
        assert!(elasticity_t2(LameParams::new(1.0, 1.0), 0.5).is_err());
    }

    /// Brute-force substitution: with a nonzero conformal factor, the unit
    /// vector built from the framed covector `e^{-phi} xi` over `h` equals
    /// `xi / |xi|`, and the eigenvalues follow.
    #[test]
    fn elasticity_conformal_substitution() {
        let a = 0.3;
        let e = elasticity_t2(LameParams::new(1.0, 1.0), a).unwrap();
        for p in crate::symcore::validate::random_points(Geometry::T2, 200, 11) {
            let p = p.scaled(1.7);
            let phi = elasticity_phi(a, p.x());
            let framed = [(-phi).exp() * p.xi()[0], (-phi).exp() * p.xi()[1]];
            let h = (framed[0] * framed[0] + framed[1] * framed[1]).sqrt();
            assert!((h - (-phi).exp() * p.xi_norm()).abs() < 1e-14);
            for (f, x) in framed.iter().zip(p.xi()) {
                assert!((f / h - x / p.xi_norm()).abs() < 1e-14);
            }
            let sp = spectral_decompose(&e.symbol, &p).unwrap();
            let want = [h * h, 3.0 * h * h];
            for (got, w) in sp.eigenvalues.iter().zip(want) {
                assert!((got - w).abs() < 1e-10 * (1.0 + w));
            }
        }
    }

    #[test]
    fn np_parameter_checks_and_values() {
        assert!(np_sphere(LameParams::new(1.0, 0.0), 1.0).is_err());
        assert!(np_sphere(LameParams::new(-0.7, 1.0), 1.0).is_err());
        assert!(np_sphere(LameParams::new(1.0, 1.0), 0.0).is_err());
        let e = np_sphere(LameParams::new(2.0, 1.0), 1.0).unwrap();
        let p = CovectorPoint::new(Geometry::S2, &[0.0, 1.0, 0.0], &[0.0, 0.0, 3.0]).unwrap();
        assert_eq!(analytic(&e, &p), vec![-0.125, 0.0, 0.125]);
        let sp = spectral_decompose(&e.symbol, &p).unwrap();
        for (h, w) in sp.eigenvalues.iter().zip([-0.125, 0.0, 0.125]) {
            assert!((h - w).abs() < 1e-14);
        }
    }

    #[test]
    fn np_radius_invariance() {
        let a = np_sphere(LameParams::new(1.0, 1.0), 1.0).unwrap();
        let b = np_sphere(LameParams::new(1.0, 1.0), 3.5).unwrap();
        for p in crate::symcore::validate::random_points(Geometry::S2, 50, 2) {
            let d = a.symbol.eval(&p).unwrap().matrix() - b.symbol.eval(&p).unwrap().matrix();
            assert!(d.frobenius() < 1e-15);
        }
    }
}
