//! Built-in example symbols with analytic spectra and expected verdicts.

pub mod controls;
mod entries;
pub mod identities;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::symcore::matrix::{c, CMatrix};
use crate::symcore::point::CovectorPoint;
use crate::symcore::symbol::SymbolField;

pub use entries::{
    artificial_s2, curl3_flat, dirac3_flat, dirac3_s3, dirac_s2, elasticity_t2, np_chart_block,
    np_sphere, s3_framed_covector,
};

/// Catalog ids in listing order.
pub const IDS: [&str; 7] = [
    "dirac3-flat",
    "dirac3-s3",
    "curl3",
    "dirac-s2",
    "artificial-s2",
    "elasticity-t2",
    "np-sphere",
];

/// Pauli matrices and the antisymmetric 2x2 matrix `[[0,1],[-1,0]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliBasis {
    pub s1: CMatrix,
    pub s2: CMatrix,
    pub s3: CMatrix,
    pub eps: CMatrix,
}

impl PauliBasis {
    pub fn new() -> Self {
        let z = c(0.0, 0.0);
        let one = c(1.0, 0.0);
        Self {
            s1: CMatrix::from_rows(&[&[z, one], &[one, z]]),
            s2: CMatrix::from_rows(&[&[z, c(0.0, -1.0)], &[c(0.0, 1.0), z]]),
            s3: CMatrix::from_rows(&[&[one, z], &[z, -one]]),
            eps: CMatrix::from_rows(&[&[z, one], &[-one, z]]),
        }
    }

    pub fn sigma(&self, alpha: usize) -> &CMatrix {
        match alpha {
            0 => &self.s1,
            1 => &self.s2,
            2 => &self.s3,
            _ => panic!("Pauli index {alpha} out of range"),
        }
    }
}

impl Default for PauliBasis {
    fn default() -> Self {
        Self::new()
    }
}

/// `v1 s1 + v2 s2 + v3 s3`.
pub fn sigma_dot(v: [f64; 3]) -> CMatrix {
    CMatrix::from_rows(&[
        &[c(v[2], 0.0), c(v[0], -v[1])],
        &[c(v[0], v[1]), c(-v[2], 0.0)],
    ])
}

/// Lamé parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LameParams {
    pub lambda: f64,
    pub mu: f64,
}

impl LameParams {
    pub fn new(lambda: f64, mu: f64) -> Self {
        Self { lambda, mu }
    }
}

pub type AnalyticFn = Arc<dyn Fn(&CovectorPoint) -> Vec<f64> + Send + Sync>;

/// A catalog symbol together with its expected obstruction pattern.
///
/// `expected_local[j]` and `expected_global[j]` are `true` when band `j`
/// (ascending order) is expected to be obstructed.
#[derive(Clone)]
pub struct CatalogEntry {
    pub symbol: SymbolField,
    pub expected_local: Vec<bool>,
    pub expected_global: Vec<bool>,
    pub notes: String,
    analytic: Option<AnalyticFn>,
}

impl CatalogEntry {
    pub(crate) fn new(
        symbol: SymbolField,
        expected_local: Vec<bool>,
        expected_global: Vec<bool>,
        notes: impl Into<String>,
        analytic: Option<AnalyticFn>,
    ) -> Self {
        debug_assert_eq!(expected_local.len(), symbol.m());
        debug_assert_eq!(expected_global.len(), symbol.m());
        Self {
            symbol,
            expected_local,
            expected_global,
            notes: notes.into(),
            analytic,
        }
    }

    pub fn id(&self) -> &str {
        self.symbol.id()
    }

    pub fn has_analytic(&self) -> bool {
        self.analytic.is_some()
    }

    /// Same expectations and oracle for a gauge-equivalent symbol.
    pub fn with_symbol(&self, symbol: SymbolField) -> CatalogEntry {
        let mut e = self.clone();
        e.symbol = symbol;
        e
    }
}

impl fmt::Debug for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CatalogEntry")
            .field("symbol", &self.symbol)
            .field("expected_local", &self.expected_local)
            .field("expected_global", &self.expected_global)
            .field("notes", &self.notes)
            .finish_non_exhaustive()
    }
}

/// Closed-form eigenvalues at `p`, ascending.
pub fn analytic_eigenvalues(entry: &CatalogEntry, p: &CovectorPoint) -> Result<Vec<f64>> {
    match &entry.analytic {
        Some(f) => Ok(f(p)),
        None => Err(Error::InvalidParameter(format!(
            "'{}' has no closed-form eigenvalues",
            entry.id()
        ))),
    }
}

/// Optional parameter overrides for [`build`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParamOverrides {
    pub lambda: Option<f64>,
    pub mu: Option<f64>,
    pub c_plus: Option<f64>,
    pub c_minus: Option<f64>,
    pub s: Option<f64>,
    pub conformal: Option<f64>,
    pub radius: Option<f64>,
}

impl ParamOverrides {
    fn set_keys(&self) -> Vec<&'static str> {
        let mut keys = Vec::new();
        let fields = [
            ("lambda", self.lambda),
            ("mu", self.mu),
            ("c_plus", self.c_plus),
            ("c_minus", self.c_minus),
            ("s", self.s),
            ("conformal", self.conformal),
            ("radius", self.radius),
        ];
        for (k, v) in fields {
            if v.is_some() {
                keys.push(k);
            }
        }
        keys
    }
}

/// Parameter names accepted by each entry.
pub fn parameter_names(id: &str) -> &'static [&'static str] {
    match id {
        "artificial-s2" => &["c_plus", "c_minus", "s"],
        "elasticity-t2" => &["lambda", "mu", "conformal"],
        "np-sphere" => &["lambda", "mu", "radius"],
        _ => &[],
    }
}

/// Entry `id` with default parameters.
pub fn by_id(id: &str) -> Result<CatalogEntry> {
    build(id, &ParamOverrides::default())
}

/// Entry `id` with the given overrides applied to its defaults.
pub fn build(id: &str, o: &ParamOverrides) -> Result<CatalogEntry> {
    if !IDS.contains(&id) {
        return Err(Error::InvalidParameter(format!(
            "unknown catalog id '{id}' (expected one of {})",
            IDS.join(", ")
        )));
    }
    let allowed = parameter_names(id);
    if let Some(k) = o.set_keys().into_iter().find(|k| !allowed.contains(k)) {
        return Err(Error::InvalidParameter(format!(
            "parameter '{k}' does not apply to '{id}'"
        )));
    }
    match id {
        "dirac3-flat" => Ok(dirac3_flat()),
        "dirac3-s3" => Ok(dirac3_s3()),
        "curl3" => Ok(curl3_flat()),
        "dirac-s2" => Ok(dirac_s2()),
        "artificial-s2" => artificial_s2(
            o.c_plus.unwrap_or(2.0),
            o.c_minus.unwrap_or(-1.0),
            o.s.unwrap_or(0.0),
        ),
        "elasticity-t2" => elasticity_t2(
            LameParams::new(o.lambda.unwrap_or(1.0), o.mu.unwrap_or(1.0)),
            o.conformal.unwrap_or(0.0),
        ),
        "np-sphere" => np_sphere(
            LameParams::new(o.lambda.unwrap_or(1.0), o.mu.unwrap_or(1.0)),
            o.radius.unwrap_or(1.0),
        ),
        _ => unreachable!(),
    }
}

/// All seven entries with default parameters, in [`IDS`] order.
pub fn all() -> Vec<CatalogEntry> {
    IDS.iter().map(|id| by_id(id).expect("default parameters are valid")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_anticommutation() {
        let p = PauliBasis::new();
        let id = CMatrix::identity(2);
        for i in 0..3 {
            for j in 0..3 {
                let ac = &(p.sigma(i) * p.sigma(j)) + &(p.sigma(j) * p.sigma(i));
                let expect = if i == j { id.scale(c(2.0, 0.0)) } else { CMatrix::zeros(2) };
                assert!((&ac - &expect).frobenius() < 1e-15);
            }
        }
    }

    #[test]
    fn sigma_dot_matches_basis() {
        let p = PauliBasis::new();
        let v = [0.3, -1.2, 0.7];
        let manual = &(&p.s1.scale(c(v[0], 0.0)) + &p.s2.scale(c(v[1], 0.0))) + &p.s3.scale(c(v[2], 0.0));
        assert!((&manual - &sigma_dot(v)).frobenius() < 1e-15);
    }

    #[test]
    fn registry() {
        let all = all();
        assert_eq!(all.len(), 7);
        for (e, id) in all.iter().zip(IDS) {
            assert_eq!(e.id(), id);
            assert!(e.has_analytic());
        }
        assert!(by_id("nope").is_err());
        let o = ParamOverrides {
            lambda: Some(1.0),
            ..Default::default()
        };
        assert!(build("curl3", &o).is_err());
        assert!(build("np-sphere", &o).is_ok());
    }
}
