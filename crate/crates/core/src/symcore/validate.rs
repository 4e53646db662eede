//! Sample-based checks of Hermiticity, homogeneity and simple spectrum.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::symcore::eigh::eigh;
use crate::symcore::point::{dot, norm, CovectorPoint, Geometry};
use crate::symcore::spectral::{min_rel_gap, EIGH_TOL, GAP_TOL};
use crate::symcore::symbol::SymbolField;

/// Covector scalings at which homogeneity is tested.
pub const HOMOGENEITY_SCALES: [f64; 3] = [0.5, 2.0, 7.3];

/// Minimum number of samples a validation run should see.
pub const MIN_SAMPLES: usize = 100;

/// Default defect tolerance for `validate_assumptions`.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub symbol_id: String,
    pub samples: usize,
    pub max_hermitian_defect: f64,
    pub max_homogeneity_defect: f64,
    pub min_rel_gap: f64,
    pub tol: f64,
    pub gap_tol: f64,
    pub passed: bool,
    /// Evaluation errors, at most one line per distinct message.
    pub failures: Vec<String>,
}

/// Checks the standing assumptions on `samples`.
///
/// The Hermitian defect is measured on raw evaluator output; homogeneity as
/// a relative Frobenius defect; the gap on the Hermitian part.
pub fn validate_assumptions(
    f: &SymbolField,
    samples: &[CovectorPoint],
    tol: f64,
) -> ValidationReport {
    let mut herm: f64 = 0.0;
    let mut homog: f64 = 0.0;
    let mut gap = f64::INFINITY;
    let mut failures: Vec<String> = Vec::new();
    let mut fail = |msg: String| {
        if !failures.contains(&msg) {
            failures.push(msg);
        }
    };

    for p in samples {
        let a = match f.eval(p) {
            Ok(a) => a,
            Err(e) => {
                fail(e.to_string());
                continue;
            }
        };
        herm = herm.max(a.hermitian_defect());
        let norm_a = a.matrix().frobenius();
        for &lambda in &HOMOGENEITY_SCALES {
            match f.eval(&p.scaled(lambda)) {
                Ok(b) => {
                    let scale = lambda.powf(f.s());
                    let diff = b.matrix() - &a.matrix().scale(scale.into());
                    let denom = (scale * norm_a).max(f64::MIN_POSITIVE);
                    homog = homog.max(diff.frobenius() / denom);
                }
                Err(e) => fail(e.to_string()),
            }
        }
        match eigh(&a.symmetrized(), EIGH_TOL) {
            Ok(e) => gap = gap.min(min_rel_gap(&e.values)),
            Err(e) => fail(e.to_string()),
        }
    }
    if samples.is_empty() {
        fail("no sample points".into());
    }
    let passed = failures.is_empty() && herm < tol && homog < tol && gap > GAP_TOL;
    ValidationReport {
        symbol_id: f.id().to_string(),
        samples: samples.len(),
        max_hermitian_defect: herm,
        max_homogeneity_defect: homog,
        min_rel_gap: gap,
        tol,
        gap_tol: GAP_TOL,
        passed,
        failures,
    }
}

/// `count` seeded pseudo-random unit-covector points on `geometry`.
pub fn random_points(geometry: Geometry, count: usize, seed: u64) -> Vec<CovectorPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = geometry.ambient_dim();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut x: Vec<f64> = if geometry.is_sphere() {
            (0..d).map(|_| rng.sample(StandardNormal)).collect()
        } else {
            (0..d)
                .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
                .collect()
        };
        let mut xi: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        if geometry.is_sphere() {
            let r = norm(&x);
            if r < 1e-6 {
                continue;
            }
            x.iter_mut().for_each(|v| *v /= r);
            let t = dot(&x, &xi);
            xi.iter_mut().zip(&x).for_each(|(v, u)| *v -= t * u);
        }
        let n = norm(&xi);
        if n < 1e-6 {
            continue;
        }
        xi.iter_mut().for_each(|v| *v /= n);
        if let Ok(p) = CovectorPoint::new(geometry, &x, &xi) {
            out.push(p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_points_are_valid_and_reproducible() {
        for g in Geometry::ALL {
            let a = random_points(g, 50, 9);
            let b = random_points(g, 50, 9);
            assert_eq!(a.len(), 50);
            for (p, q) in a.iter().zip(&b) {
                assert!(p.bit_eq(q));
                assert!((p.xi_norm() - 1.0).abs() < 1e-14);
                p.check(1e-12).unwrap();
            }
        }
    }
}
