use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::invariants::reduce::pairwise_sum;
use crate::invariants::{InvariantKind, InvariantReport, InvariantValue};
use crate::probes::{LoopPath, QuadCycleMesh, TorsionChain};
use crate::symcore::matrix::CMatrix;
use crate::symcore::point::{CovectorPoint, Geometry};
use crate::symcore::spectral::{spectral_decompose, SpectralPoint};
use crate::symcore::symbol::SymbolField;

/// Plaquettes with `|phase|` at or above this are not resolved.
pub const ADMISSIBLE_PHASE: f64 = 0.9 * PI;

/// Smallest admissible `|tr(P_i P_{i+1})|` between neighbours.
pub const MIN_OVERLAP: f64 = 1e-8;

/// Spectral data at every point, in point order.
pub fn spectral_table(f: &SymbolField, points: &[CovectorPoint]) -> Result<Vec<SpectralPoint>> {
    points.par_iter().map(|p| spectral_decompose(f, p)).collect()
}

fn wrap(phase: f64) -> f64 {
    if phase <= -PI {
        phase + TAU
    } else {
        phase
    }
}

/// Phase `-Arg tr(P_1 ... P_k)` of a closed chain of projections, in
/// `(-pi, pi]`.
pub fn cycle_phase(projs: &[&CMatrix]) -> Result<f64> {
    let k = projs.len();
    for i in 0..k {
        let ov = (projs[i] * projs[(i + 1) % k]).trace().norm();
        if ov < MIN_OVERLAP {
            return Err(Error::Inadmissible {
                probe: String::new(),
                reason: format!("neighbouring eigenlines nearly orthogonal (|tr(P P')| = {ov:e})"),
            });
        }
    }
    let mut prod = projs[0].clone();
    for p in &projs[1..] {
        prod = &prod * p;
    }
    Ok(wrap(-prod.trace().arg()))
}

/// `-Arg tr(P1 P2 P3 P4)` in `(-pi, pi]`.
pub fn plaquette_phase(p1: &CMatrix, p2: &CMatrix, p3: &CMatrix, p4: &CMatrix) -> Result<f64> {
    cycle_phase(&[p1, p2, p3, p4])
}

fn check_band(f: &SymbolField, band: usize) -> Result<()> {
    if band >= f.m() {
        return Err(Error::InvalidParameter(format!(
            "band {band} out of range for '{}' (m = {})",
            f.id(),
            f.m()
        )));
    }
    Ok(())
}

fn face_phases(table: &[SpectralPoint], band: usize, mesh: &QuadCycleMesh) -> Result<Vec<f64>> {
    (0..mesh.quads.len())
        .into_par_iter()
        .map(|q| {
            let face = mesh.face(q);
            let projs: Vec<&CMatrix> = face.iter().map(|&v| &table[v].projections[band]).collect();
            cycle_phase(&projs)
        })
        .collect::<Result<Vec<f64>>>()
        .map_err(|e| match e {
            Error::Inadmissible { reason, .. } => Error::Inadmissible {
                probe: mesh.label.clone(),
                reason,
            },
            other => other,
        })
}

/// Per-face phases of band `band` over `mesh`, in face order.
pub fn plaquette_phases(f: &SymbolField, band: usize, mesh: &QuadCycleMesh) -> Result<Vec<f64>> {
    check_band(f, band)?;
    let table = spectral_table(f, &mesh.vertices)?;
    face_phases(&table, band, mesh)
}

fn max_abs(xs: &[f64]) -> f64 {
    xs.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Lattice Chern number on `mesh` without the refinement retry. A phase at
/// or above [`ADMISSIBLE_PHASE`] yields a report flagged inadmissible;
/// nearly orthogonal neighbours are an error.
pub fn chern_number_once(f: &SymbolField, band: usize, mesh: &QuadCycleMesh) -> Result<InvariantReport> {
    let start = Instant::now();
    check_band(f, band)?;
    mesh.check_closed()?;
    let phases = plaquette_phases(f, band, mesh)?;
    let total = pairwise_sum(&phases);
    let raw = total / TAU;
    let value = raw.round();
    let max_phase = max_abs(&phases);
    let details = BTreeMap::from([
        ("faces".to_string(), phases.len() as f64),
        ("raw".to_string(), raw),
        ("total_phase".to_string(), total),
    ]);
    Ok(InvariantReport {
        symbol_id: f.id().to_string(),
        band,
        probe_label: mesh.label.clone(),
        kind: InvariantKind::Chern,
        value: InvariantValue::Chern(value as i64),
        residual: (raw - value).abs(),
        max_plaquette_phase: max_phase,
        resolution: mesh.resolution,
        wall_time: start.elapsed().as_secs_f64(),
        admissible: max_phase < ADMISSIBLE_PHASE,
        details,
    })
}

/// Lattice Chern number `round(sum of plaquette phases / 2 pi)`.
///
/// An inadmissible mesh is rebuilt once at doubled resolution; if that is
/// still inadmissible the result is [`Error::Inadmissible`].
pub fn chern_number(f: &SymbolField, band: usize, mesh: &QuadCycleMesh) -> Result<InvariantReport> {
    let start = Instant::now();
    match chern_number_once(f, band, mesh) {
        Ok(r) if r.admissible => return Ok(r),
        Ok(_) | Err(Error::Inadmissible { .. }) => {}
        Err(e) => return Err(e),
    }
    let fine = mesh.refined()?;
    match chern_number_once(f, band, &fine) {
        Ok(mut r) if r.admissible => {
            r.details.insert("retried".into(), 1.0);
            r.wall_time = start.elapsed().as_secs_f64();
            Ok(r)
        }
        Ok(r) => Err(Error::Inadmissible {
            probe: mesh.label.clone(),
            reason: format!(
                "max plaquette phase {:.4} at resolution {} after one refinement",
                r.max_plaquette_phase, r.resolution
            ),
        }),
        Err(e) => Err(e),
    }
}

fn loop_product_phase(table: &[SpectralPoint], band: usize, label: &str) -> Result<(f64, f64)> {
    let n = table.len();
    let mut min_ov = f64::INFINITY;
    for i in 0..n {
        let ov = (&table[i].projections[band] * &table[(i + 1) % n].projections[band])
            .trace()
            .norm();
        min_ov = min_ov.min(ov);
    }
    if min_ov < MIN_OVERLAP {
        return Err(Error::Inadmissible {
            probe: label.to_string(),
            reason: format!("neighbouring eigenlines nearly orthogonal (|tr(P P')| = {min_ov:e})"),
        });
    }
    let mut prod = table[0].projections[band].clone();
    for sp in &table[1..] {
        prod = &prod * &sp.projections[band];
    }
    let phase = prod.trace().arg();
    Ok((if phase <= -PI { PI } else { phase }, min_ov))
}

/// `Arg tr(P_0 P_1 ... P_{N-1})` around `path`, in `(-pi, pi]`.
pub fn berry_phase(f: &SymbolField, band: usize, path: &LoopPath) -> Result<InvariantReport> {
    let start = Instant::now();
    check_band(f, band)?;
    if path.vertices.len() < 3 {
        return Err(Error::InvalidMesh {
            label: path.label.clone(),
            reason: "loop needs at least three vertices".into(),
        });
    }
    let table = spectral_table(f, &path.vertices)?;
    let (phase, min_ov) = loop_product_phase(&table, band, &path.label)?;
    Ok(InvariantReport {
        symbol_id: f.id().to_string(),
        band,
        probe_label: path.label.clone(),
        kind: InvariantKind::BerryPhase,
        value: InvariantValue::Berry(phase),
        residual: 0.0,
        max_plaquette_phase: 0.0,
        resolution: path.vertices.len(),
        wall_time: start.elapsed().as_secs_f64(),
        admissible: true,
        details: BTreeMap::from([("min_overlap".to_string(), min_ov)]),
    })
}

fn torsion_once(f: &SymbolField, band: usize, chain: &TorsionChain) -> Result<InvariantReport> {
    let start = Instant::now();
    chain.check()?;
    let beta = match berry_phase(f, band, &chain.gamma)?.value {
        InvariantValue::Berry(b) => b,
        _ => unreachable!(),
    };
    let table = spectral_table(f, &chain.sigma.vertices)?;
    let phases = face_phases(&table, band, &chain.sigma)?;
    let f_sigma = pairwise_sum(&phases);
    // The faces of sigma carry curvature -2 beta modulo 2 pi, so
    // 2 beta + F is a multiple of 2 pi whose parity is the invariant.
    let raw = (2.0 * beta + f_sigma) / TAU;
    let k = raw.round();
    let max_phase = max_abs(&phases);
    Ok(InvariantReport {
        symbol_id: f.id().to_string(),
        band,
        probe_label: chain.sigma.label.clone(),
        kind: InvariantKind::Torsion,
        value: InvariantValue::Torsion((k as i64).rem_euclid(2) as u8),
        residual: (raw - k).abs(),
        max_plaquette_phase: max_phase,
        resolution: chain.n_loop,
        wall_time: start.elapsed().as_secs_f64(),
        admissible: max_phase < ADMISSIBLE_PHASE,
        details: BTreeMap::from([
            ("berry_phase".to_string(), beta),
            ("curvature_sum".to_string(), f_sigma),
            ("n_disc".to_string(), chain.n_disc as f64),
            ("n_loop".to_string(), chain.n_loop as f64),
            ("raw".to_string(), raw),
        ]),
    })
}

/// The Z/2 invariant `round((2 beta + F) / 2 pi) mod 2`, where `beta` is the
/// Berry phase of the loop and `F` the curvature sum over the bounding disc.
pub fn torsion_invariant(f: &SymbolField, band: usize, chain: &TorsionChain) -> Result<InvariantReport> {
    if f.geometry() != Geometry::S2 {
        return Err(Error::UnsupportedGeometry {
            geometry: f.geometry().name(),
            operation: "torsion invariant",
        });
    }
    check_band(f, band)?;
    let start = Instant::now();
    match torsion_once(f, band, chain) {
        Ok(r) if r.admissible => return Ok(r),
        Ok(_) | Err(Error::Inadmissible { .. }) => {}
        Err(e) => return Err(e),
    }
    match torsion_once(f, band, &chain.refined()?) {
        Ok(mut r) if r.admissible => {
            r.details.insert("retried".into(), 1.0);
            r.wall_time = start.elapsed().as_secs_f64();
            Ok(r)
        }
        Ok(r) => Err(Error::Inadmissible {
            probe: chain.sigma.label.clone(),
            reason: format!(
                "max face phase {:.4} after one refinement",
                r.max_plaquette_phase
            ),
        }),
        Err(e) => Err(e),
    }
}
