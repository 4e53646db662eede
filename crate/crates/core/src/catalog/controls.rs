//! Control symbols for tests and negative checks. None of these are part of
//! the catalog proper.

use std::collections::BTreeMap;

use crate::catalog::{curl3_flat, sigma_dot, CatalogEntry};
use crate::symcore::matrix::{c, CMatrix, HermitianMatrix};
use crate::symcore::point::Geometry;
use crate::symcore::symbol::SymbolField;

/// The constant symbol `s3` on `geometry`: trivially unobstructed.
pub fn constant_s3(geometry: Geometry) -> SymbolField {
    SymbolField::new("constant-s3", geometry, 2, 0.0, BTreeMap::new(), |_| {
        HermitianMatrix::new(sigma_dot([0.0, 0.0, 1.0]))
    })
    .expect("valid symbol")
}

/// The constant identity: every point is degenerate.
pub fn identity(geometry: Geometry, m: usize) -> SymbolField {
    SymbolField::new("identity", geometry, m, 0.0, BTreeMap::new(), move |_| {
        HermitianMatrix::new(CMatrix::identity(m))
    })
    .expect("valid symbol")
}

/// `d(x) . sigma / |d(x)|` on the 2-torus with
/// `d = (sin x1, sin x2, 1 + cos x1 + cos x2)`: a degree-one map of the base
/// torus to the sphere of lines, independent of the covector.
pub fn degree_one_t2() -> SymbolField {
    SymbolField::new("degree-one-t2", Geometry::T2, 2, 0.0, BTreeMap::new(), |p| {
        let x = p.x();
        let d = [x[0].sin(), x[1].sin(), 1.0 + x[0].cos() + x[1].cos()];
        let n = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
        HermitianMatrix::new(sigma_dot([d[0] / n, d[1] / n, d[2] / n]))
    })
    .expect("valid symbol")
}

/// `f` with `i * delta` added to entry `(0, 1)` only, leaving `(1, 0)`
/// untouched, so the output is no longer Hermitian.
pub fn corrupt_hermitian(f: &SymbolField, delta: f64) -> SymbolField {
    let inner = f.clone();
    SymbolField::new(
        format!("{}-corrupted", f.id()),
        f.geometry(),
        f.m(),
        f.s(),
        f.params().clone(),
        move |p| {
            let mut a = inner.eval(p)?.into_matrix();
            let scale = p.xi_norm().powf(inner.s());
            a[(0, 1)] += c(0.0, delta * scale);
            HermitianMatrix::raw(a)
        },
    )
    .expect("valid symbol")
}

/// The curl entry with the sign of its `(0, 1)` entry flipped. Expected
/// verdicts are those of the intact entry, so a suite run over it must fail.
pub fn broken_curl() -> CatalogEntry {
    let intact = curl3_flat();
    let inner = intact.symbol.clone();
    let symbol = SymbolField::new("curl3", inner.geometry(), 3, 1.0, BTreeMap::new(), move |p| {
        let mut a = inner.eval(p)?.into_matrix();
        a[(0, 1)] = -a[(0, 1)];
        HermitianMatrix::raw(a)
    })
    .expect("valid symbol");
    intact.with_symbol(symbol)
}
