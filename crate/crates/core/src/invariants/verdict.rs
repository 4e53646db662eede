use std::fmt;

use crate::error::Result;
use crate::invariants::{chern_number, torsion_invariant, InvariantReport};
use crate::probes::{fiber_sphere_probe, probe_set, S3_BASE_POINT, T3_BASE_POINT};
use crate::symcore::point::Geometry;
use crate::symcore::symbol::SymbolField;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Question {
    /// Can eigenvectors be chosen continuously over one punctured fiber?
    Local,
    /// Can they be chosen continuously over the whole bundle?
    Global,
}

impl Question {
    pub fn name(self) -> &'static str {
        match self {
            Question::Local => "local",
            Question::Global => "global",
        }
    }
}

impl fmt::Display for Question {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub question: Question,
    pub band: usize,
    /// True iff some trusted evidence is nonzero.
    pub obstructed: bool,
    pub evidence: Vec<InvariantReport>,
    pub theorem_branch: String,
}

impl Verdict {
    fn from_evidence(question: Question, band: usize, evidence: Vec<InvariantReport>, branch: &str) -> Self {
        let obstructed = evidence.iter().any(|r| r.trusted() && r.value.is_nonzero());
        Verdict {
            question,
            band,
            obstructed,
            evidence,
            theorem_branch: branch.to_string(),
        }
    }
}

/// Registered base point of the fiber probe (empty for 2-dimensional bases).
pub fn base_point(geometry: Geometry) -> Vec<f64> {
    match geometry {
        Geometry::T3 => T3_BASE_POINT.to_vec(),
        Geometry::S3 => S3_BASE_POINT.to_vec(),
        Geometry::S2 | Geometry::T2 => Vec::new(),
    }
}

/// Fiberwise question. The punctured fiber retracts onto `S^{d-1}`, which
/// carries nontrivial line bundles only for `d = 3`; there the Chern number
/// over the fiber sphere at `x0` decides.
pub fn local_obstruction(f: &SymbolField, x0: &[f64], band: usize, n: usize) -> Result<Verdict> {
    if f.d() != 3 {
        return Ok(Verdict::from_evidence(Question::Local, band, Vec::new(), "d≠3"));
    }
    let mesh = fiber_sphere_probe(f.geometry(), x0, n)?;
    let r = chern_number(f, band, &mesh)?;
    Ok(Verdict::from_evidence(Question::Local, band, vec![r], "d=3 fiber degree"))
}

/// Global question: Chern numbers over every registered 2-cycle and the
/// torsion invariant where the geometry has one.
pub fn global_obstruction(f: &SymbolField, band: usize, n: usize) -> Result<Verdict> {
    let set = probe_set(f.geometry(), n)?;
    let mut evidence = Vec::new();
    for mesh in &set.cycles {
        evidence.push(chern_number(f, band, mesh)?);
    }
    if let Some(chain) = &set.torsion {
        evidence.push(torsion_invariant(f, band, chain)?);
    }
    let branch = match f.geometry() {
        Geometry::S2 => "H2 torsion holonomy",
        Geometry::T2 => "H2 coordinate tori",
        Geometry::T3 => "H2 fiber sphere and coordinate tori",
        Geometry::S3 => "H2 fiber sphere",
    };
    Ok(Verdict::from_evidence(Question::Global, band, evidence, branch))
}
