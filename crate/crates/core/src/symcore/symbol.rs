use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::symcore::matrix::{CMatrix, HermitianMatrix, MAX_DIM, MIN_DIM};
use crate::symcore::point::{CovectorPoint, Geometry};

/// Evaluator signature. Must be pure: identical inputs give bit-identical
/// outputs, and it may be called from several threads at once.
pub type EvalFn = Arc<dyn Fn(&CovectorPoint) -> Result<HermitianMatrix> + Send + Sync>;

/// A Hermitian matrix-valued function on `T*M \ {0}`, positively homogeneous
/// of degree `s` in the covector.
#[derive(Clone)]
pub struct SymbolField {
    id: String,
    geometry: Geometry,
    m: usize,
    s: f64,
    params: BTreeMap<String, f64>,
    eval: EvalFn,
}

impl SymbolField {
    pub fn new<F>(
        id: impl Into<String>,
        geometry: Geometry,
        m: usize,
        s: f64,
        params: BTreeMap<String, f64>,
        eval: F,
    ) -> Result<Self>
    where
        F: Fn(&CovectorPoint) -> Result<HermitianMatrix> + Send + Sync + 'static,
    {
        if !(MIN_DIM..=MAX_DIM).contains(&m) {
            return Err(Error::InvalidParameter(format!(
                "symbol dimension {m} outside {MIN_DIM}..={MAX_DIM}"
            )));
        }
        if !s.is_finite() {
            return Err(Error::InvalidParameter(format!("homogeneity degree {s}")));
        }
        Ok(Self {
            id: id.into(),
            geometry,
            m,
            s,
            params,
            eval: Arc::new(eval),
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    /// Base dimension `d`.
    pub fn d(&self) -> usize {
        self.geometry.base_dim()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    /// Evaluates the symbol. The matrix is returned as produced by the
    /// evaluator, without symmetrization.
    pub fn eval(&self, p: &CovectorPoint) -> Result<HermitianMatrix> {
        if p.geometry() != self.geometry {
            return Err(Error::InvalidPoint(format!(
                "symbol '{}' lives on {}, point on {}",
                self.id,
                self.geometry,
                p.geometry()
            )));
        }
        let a = (self.eval)(p)?;
        if a.dim() != self.m {
            return Err(Error::InvalidParameter(format!(
                "symbol '{}' returned a {}x{} matrix, expected m = {}",
                self.id,
                a.dim(),
                a.dim(),
                self.m
            )));
        }
        Ok(a)
    }

    /// The symbol `U A U*` for a fixed unitary `U`.
    pub fn conjugated(&self, u: &CMatrix) -> Result<SymbolField> {
        if u.dim() != self.m {
            return Err(Error::InvalidParameter(format!(
                "conjugating unitary has dimension {}, symbol has {}",
                u.dim(),
                self.m
            )));
        }
        let inner = self.eval.clone();
        let u = u.clone();
        let mut out = self.clone();
        out.eval = Arc::new(move |p| Ok(inner(p)?.conjugate_by(&u)));
        Ok(out)
    }

    /// Same evaluator under a different id.
    pub fn with_id(&self, id: impl Into<String>) -> SymbolField {
        let mut out = self.clone();
        out.id = id.into();
        out
    }
}

impl fmt::Debug for SymbolField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SymbolField")
            .field("id", &self.id)
            .field("geometry", &self.geometry)
            .field("m", &self.m)
            .field("s", &self.s)
            .field("params", &self.params)
            .finish_non_exhaustive()
    }
}
