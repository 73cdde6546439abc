//! Plot-ready point clouds and line-delimited records.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use slag_core::reallocus::RealLocusPoint;

use crate::error::Result;

/// One locus sample as written to `locus.jsonl`.
#[derive(Debug, Serialize)]
pub struct LocusRecord<'a> {
    pub index: usize,
    pub u: &'a [f64; 4],
    pub u_prime: &'a [f64; 4],
    pub eta: &'a [f64; 6],
    pub p_residual: f64,
    pub n_residual: f64,
}

/// `locus.csv`: the six Pluecker coordinates per row.
pub fn write_locus_csv(path: &Path, points: &[RealLocusPoint]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["eta0", "eta1", "eta2", "eta3", "eta4", "eta5"])?;
    for p in points {
        w.serialize(p.eta())?;
    }
    w.flush()?;
    Ok(())
}

/// `locus.jsonl`: frame, Pluecker vector and residuals, one point per line.
pub fn write_locus_jsonl(path: &Path, points: &[RealLocusPoint]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for (index, p) in points.iter().enumerate() {
        let rec = LocusRecord {
            index,
            u: p.frame().u(),
            u_prime: p.frame().u_prime(),
            eta: p.eta(),
            p_residual: p.p_residual(),
            n_residual: p.n_residual(),
        };
        serde_json::to_writer(&mut w, &rec)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

/// One fiber sample as written to `fibers.csv`.
#[derive(Debug, Serialize)]
pub struct FiberRow {
    pub base: usize,
    pub theta: f64,
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub xp0: f64,
    pub xp1: f64,
    pub xp2: f64,
    pub xp3: f64,
}

impl FiberRow {
    pub fn new(base: usize, theta: f64, p: &RealLocusPoint) -> Self {
        let (u, v) = (p.frame().u(), p.frame().u_prime());
        FiberRow {
            base,
            theta,
            x0: u[0],
            x1: u[1],
            x2: u[2],
            x3: u[3],
            xp0: v[0],
            xp1: v[1],
            xp2: v[2],
            xp3: v[3],
        }
    }
}

pub fn write_fibers_csv(path: &Path, rows: &[FiberRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use slag_core::hypersurface::CoefficientVector;
    use slag_core::reallocus::known_frame;

    #[test]
    fn known_point_rows() {
        let p = RealLocusPoint::new(&CoefficientVector::standard(), known_frame()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        write_locus_csv(&dir.path().join("l.csv"), std::slice::from_ref(&p)).unwrap();
        let text = std::fs::read_to_string(dir.path().join("l.csv")).unwrap();
        assert_eq!(
            text,
            "eta0,eta1,eta2,eta3,eta4,eta5\n-1.0,0.0,0.0,1.0,0.0,0.0\n"
        );
        write_locus_jsonl(&dir.path().join("l.jsonl"), &[p]).unwrap();
        let line = std::fs::read_to_string(dir.path().join("l.jsonl")).unwrap();
        let v: serde_json::Value = serde_json::from_str(line.trim()).unwrap();
        assert_eq!(v["u"], serde_json::json!([0.0, 1.0, 0.0, 0.0]));
    }
}
