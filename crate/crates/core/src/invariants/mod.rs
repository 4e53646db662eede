//! Lattice Chern numbers, Berry phases, the Z/2 torsion invariant and the
//! two obstruction verdicts.

mod lattice;
pub mod reduce;
mod verdict;

use std::collections::BTreeMap;
use std::fmt;

pub use lattice::{
    berry_phase, chern_number, chern_number_once, cycle_phase, plaquette_phase, plaquette_phases,
    spectral_table, torsion_invariant, ADMISSIBLE_PHASE, MIN_OVERLAP,
};
pub use verdict::{base_point, global_obstruction, local_obstruction, Question, Verdict};

/// Reports with a residual at or above this are not trusted.
pub const TRUST_RESIDUAL: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvariantKind {
    Chern,
    BerryPhase,
    Torsion,
}

impl InvariantKind {
    pub fn name(self) -> &'static str {
        match self {
            InvariantKind::Chern => "chern",
            InvariantKind::BerryPhase => "berry_phase",
            InvariantKind::Torsion => "torsion",
        }
    }
}

impl fmt::Display for InvariantKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InvariantValue {
    Chern(i64),
    /// Phase in `(-pi, pi]`.
    Berry(f64),
    Torsion(u8),
}

impl InvariantValue {
    pub fn is_nonzero(&self) -> bool {
        match *self {
            InvariantValue::Chern(c) => c != 0,
            InvariantValue::Berry(b) => b != 0.0,
            InvariantValue::Torsion(t) => t != 0,
        }
    }

    pub fn as_f64(&self) -> f64 {
        match *self {
            InvariantValue::Chern(c) => c as f64,
            InvariantValue::Berry(b) => b,
            InvariantValue::Torsion(t) => t as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantReport {
    pub symbol_id: String,
    pub band: usize,
    pub probe_label: String,
    pub kind: InvariantKind,
    pub value: InvariantValue,
    /// Distance from the raw real value to the reported integer (zero for
    /// Berry phases).
    pub residual: f64,
    pub max_plaquette_phase: f64,
    pub resolution: usize,
    /// Seconds.
    pub wall_time: f64,
    pub admissible: bool,
    pub details: BTreeMap<String, f64>,
}

impl InvariantReport {
    pub fn trusted(&self) -> bool {
        self.admissible && self.residual < TRUST_RESIDUAL
    }
}

/// Human-readable band name for ascending band `j` of `m`: `-`, `0`, `+`
/// for the two- and three-band catalog symbols, the index otherwise.
pub fn band_label(m: usize, j: usize) -> String {
    match (m, j) {
        (2, 0) | (3, 0) => "-".into(),
        (2, 1) | (3, 2) => "+".into(),
        (3, 1) => "0".into(),
        _ => j.to_string(),
    }
}
