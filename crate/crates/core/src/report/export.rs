//! CSV exports: probe meshes, per-plaquette curvature and gauge fields.
//! Comma-separated with a header row, LF line endings and floats with 17
//! significant digits.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::invariants::plaquette_phases;
use crate::probes::{cosphere_graph, probe_set, QuadCycleMesh};
use crate::report::json::float;
use crate::symcore::point::{CovectorPoint, Geometry};
use crate::symcore::symbol::SymbolField;
use crate::trivialize::spanning_tree_gauge;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportKind {
    Mesh,
    Curvature,
    Gauge,
}

impl ExportKind {
    pub fn parse(s: &str) -> Result<ExportKind> {
        match s {
            "mesh" => Ok(ExportKind::Mesh),
            "curvature" => Ok(ExportKind::Curvature),
            "gauge" => Ok(ExportKind::Gauge),
            _ => Err(Error::Config(format!(
                "unknown export kind '{s}' (expected mesh, curvature or gauge)"
            ))),
        }
    }
}

/// A named CSV table.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvFile {
    pub name: String,
    pub text: String,
}

fn csv_text(header: &[String], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

fn coord_header(geometry: Geometry) -> Vec<String> {
    let d = geometry.ambient_dim();
    (1..=d).map(|i| format!("x{i}")).chain((1..=d).map(|i| format!("xi{i}"))).collect()
}

fn coords(p: &CovectorPoint) -> impl Iterator<Item = String> + '_ {
    p.ambient().into_iter().map(float)
}

/// Probes used as global evidence: the registered 2-cycles and the
/// torsion chain.
fn probes(geometry: Geometry, n: usize) -> Result<Vec<QuadCycleMesh>> {
    let set = probe_set(geometry, n)?;
    let mut out = set.cycles;
    if let Some(t) = set.torsion {
        out.push(t.sigma);
    }
    Ok(out)
}

/// Vertices and faces of every probe mesh.
pub fn mesh_csv(geometry: Geometry, n: usize) -> Result<Vec<CsvFile>> {
    let meshes = probes(geometry, n)?;
    let mut vh = vec!["probe".to_string(), "vertex".to_string()];
    vh.extend(coord_header(geometry));
    let mut vrows = Vec::new();
    let mut frows = Vec::new();
    for m in &meshes {
        for (i, p) in m.vertices.iter().enumerate() {
            let mut r = vec![m.label.clone(), i.to_string()];
            r.extend(coords(p));
            vrows.push(r);
        }
        for (i, q) in m.quads.iter().enumerate() {
            let mut r = vec![m.label.clone(), i.to_string()];
            r.extend(q.iter().map(|v| v.to_string()));
            frows.push(r);
        }
    }
    let fh: Vec<String> = ["probe", "face", "v0", "v1", "v2", "v3"].iter().map(|s| s.to_string()).collect();
    Ok(vec![
        CsvFile {
            name: "mesh_vertices.csv".into(),
            text: csv_text(&vh, &vrows)?,
        },
        CsvFile {
            name: "mesh_faces.csv".into(),
            text: csv_text(&fh, &frows)?,
        },
    ])
}

/// Mean of the corners; periodic coordinates are averaged on the circle
/// around the first corner.
fn face_center(geometry: Geometry, corners: &[&CovectorPoint]) -> Vec<f64> {
    let first = corners[0].ambient();
    let d = geometry.ambient_dim();
    let mut c = vec![0.0; first.len()];
    for p in corners {
        for (k, (ck, v)) in c.iter_mut().zip(p.ambient()).enumerate() {
            let mut diff = v - first[k];
            if !geometry.is_sphere() && k < d {
                diff = (diff + PI).rem_euclid(TAU) - PI;
            }
            *ck += diff;
        }
    }
    c.iter().zip(&first).map(|(s, f)| f + s / corners.len() as f64).collect()
}

/// One row per plaquette: probe, face, face center, phase.
pub fn curvature_csv(f: &SymbolField, band: usize, n: usize) -> Result<CsvFile> {
    let g = f.geometry();
    let mut header = vec!["probe".to_string(), "face".to_string()];
    header.extend(coord_header(g));
    header.push("phase".into());
    let mut rows = Vec::new();
    for m in probes(g, n)? {
        let phases = plaquette_phases(f, band, &m)?;
        for (q, ph) in phases.iter().enumerate() {
            let corners: Vec<&CovectorPoint> = m.face(q).iter().map(|&v| &m.vertices[v]).collect();
            let mut r = vec![m.label.clone(), q.to_string()];
            r.extend(face_center(g, &corners).into_iter().map(float));
            r.push(float(*ph));
            rows.push(r);
        }
    }
    Ok(CsvFile {
        name: "curvature.csv".into(),
        text: csv_text(&header, &rows)?,
    })
}

/// Outcome of a gauge export.
#[derive(Debug, Clone, PartialEq)]
pub enum GaugeExport {
    Written(CsvFile),
    /// No global gauge exists at this resolution; the message names the
    /// certificate face.
    Refused(String),
}

/// Vertex coordinates with the real and imaginary parts of the gauge
/// vector, on the cosphere graph at resolution `n`.
pub fn gauge_csv(f: &SymbolField, band: usize, n: usize) -> Result<GaugeExport> {
    let graph = cosphere_graph(f.geometry(), n)?;
    let gf = spanning_tree_gauge(f, band, &graph)?;
    if let Some(c) = &gf.certificate {
        let cycle: Vec<String> = c.cycle.iter().map(|v| v.to_string()).collect();
        return Ok(GaugeExport::Refused(format!(
            "no global eigenvector field for '{}' band {band} at n = {n}: face {} (vertices {}) keeps holonomy residual {:.6} ({} such faces, max edge defect {:.6})",
            f.id(),
            c.face,
            cycle.join("-"),
            c.residual,
            gf.residue_faces,
            gf.max_edge_defect
        )));
    }
    let mut header = vec!["vertex".to_string()];
    header.extend(coord_header(f.geometry()));
    for k in 0..gf.m {
        header.push(format!("re{k}"));
        header.push(format!("im{k}"));
    }
    let mut rows = Vec::with_capacity(graph.vertices.len());
    for (i, p) in graph.vertices.iter().enumerate() {
        let mut r = vec![i.to_string()];
        r.extend(coords(p));
        for z in gf.vector(i) {
            r.push(float(z.re));
            r.push(float(z.im));
        }
        rows.push(r);
    }
    Ok(GaugeExport::Written(CsvFile {
        name: "gauge.csv".into(),
        text: csv_text(&header, &rows)?,
    }))
}
