//! CSV formats: correspondences, world points, sweep records, sweep
//! summaries and region grids.

use std::io::{Read, Write};

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use super::{SummaryRow, TrialRecord};
use crate::error::{Error, Result};
use crate::projective::{HomPoint2, HomPoint3};
use crate::quadrics::RegionCell;

#[derive(Debug, Serialize, Deserialize)]
struct CorrRow {
    x1: f64,
    x2: f64,
    x3: f64,
    y1: f64,
    y2: f64,
    y3: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct WorldRow {
    p1: f64,
    p2: f64,
    p3: f64,
    p4: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct RegionRow {
    u: f64,
    v: f64,
    class: String,
    n_plus: usize,
    n_minus: usize,
    n_zero: usize,
}

fn read_rows<T: DeserializeOwned, R: Read>(r: R) -> Result<Vec<T>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
    rdr.deserialize().map(|row| row.map_err(Error::from)).collect()
}

fn write_rows<T: Serialize, W: Write>(w: W, rows: impl IntoIterator<Item = T>) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    for row in rows {
        wtr.serialize(row)?;
    }
    wtr.flush()?;
    Ok(())
}

fn located(e: Error, line: usize) -> Error {
    match e {
        Error::ZeroPoint => Error::Parse(format!("row {line}: homogeneous point is zero or not finite")),
        other => other,
    }
}

/// Reads `x1,x2,x3,y1,y2,y3` rows into the two images.
pub fn read_correspondences<R: Read>(r: R) -> Result<(Vec<HomPoint2>, Vec<HomPoint2>)> {
    let rows: Vec<CorrRow> = read_rows(r)?;
    let mut x = Vec::with_capacity(rows.len());
    let mut y = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        x.push(HomPoint2::new(row.x1, row.x2, row.x3).map_err(|e| located(e, i + 1))?);
        y.push(HomPoint2::new(row.y1, row.y2, row.y3).map_err(|e| located(e, i + 1))?);
    }
    Ok((x, y))
}

pub fn write_correspondences<W: Write>(w: W, x: &[HomPoint2], y: &[HomPoint2]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { left: x.len(), right: y.len() });
    }
    write_rows(
        w,
        x.iter().zip(y).map(|(a, b)| {
            let (a, b) = (a.coords(), b.coords());
            CorrRow { x1: a[0], x2: a[1], x3: a[2], y1: b[0], y2: b[1], y3: b[2] }
        }),
    )
}

/// Reads `p1,p2,p3,p4` rows.
pub fn read_world_points<R: Read>(r: R) -> Result<Vec<HomPoint3>> {
    let rows: Vec<WorldRow> = read_rows(r)?;
    rows.iter()
        .enumerate()
        .map(|(i, p)| HomPoint3::new(p.p1, p.p2, p.p3, p.p4).map_err(|e| located(e, i + 1)))
        .collect()
}

pub fn write_world_points<W: Write>(w: W, pts: &[HomPoint3]) -> Result<()> {
    write_rows(
        w,
        pts.iter().map(|p| {
            let c = p.coords();
            WorldRow { p1: c[0], p2: c[1], p3: c[2], p4: c[3] }
        }),
    )
}

pub fn read_sweep<R: Read>(r: R) -> Result<Vec<TrialRecord>> {
    read_rows(r)
}

pub fn write_sweep<W: Write>(w: W, records: &[TrialRecord]) -> Result<()> {
    write_rows(w, records)
}

pub fn read_summary<R: Read>(r: R) -> Result<Vec<SummaryRow>> {
    read_rows(r)
}

pub fn write_summary<W: Write>(w: W, rows: &[SummaryRow]) -> Result<()> {
    write_rows(w, rows)
}

pub fn write_region<W: Write>(w: W, cells: &[RegionCell]) -> Result<()> {
    write_rows(
        w,
        cells.iter().map(|c| RegionRow {
            u: c.u,
            v: c.v,
            class: c.class.kind.as_str().to_owned(),
            n_plus: c.class.inertia.n_plus,
            n_minus: c.class.inertia.n_minus,
            n_zero: c.class.inertia.n_zero,
        }),
    )
}

/// `(u, v, class, [n_plus, n_minus, n_zero])` row of a region file.
pub type RegionRecord = (f64, f64, String, [usize; 3]);

pub fn read_region<R: Read>(r: R) -> Result<Vec<RegionRecord>> {
    let rows: Vec<RegionRow> = read_rows(r)?;
    Ok(rows.into_iter().map(|r| (r.u, r.v, r.class, [r.n_plus, r.n_minus, r.n_zero])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::Algo;

    #[test]
    fn correspondences_round_trip() {
        let x = vec![HomPoint2::affine(0.1, -2.5), HomPoint2::new(1.0, 0.0, 0.0).unwrap()];
        let y = vec![HomPoint2::affine(3.0, 1e-17), HomPoint2::affine(-0.3, 0.7)];
        let mut buf = Vec::new();
        write_correspondences(&mut buf, &x, &y).unwrap();
        assert!(buf.starts_with(b"x1,x2,x3,y1,y2,y3\n"));
        let (x2, y2) = read_correspondences(buf.as_slice()).unwrap();
        assert_eq!((x, y), (x2, y2));
    }

    #[test]
    fn world_points_round_trip() {
        let p = vec![HomPoint3::affine(1.0, 2.0, 3.0), HomPoint3::new(0.0, 0.0, 1.0, 0.0).unwrap()];
        let mut buf = Vec::new();
        write_world_points(&mut buf, &p).unwrap();
        assert!(buf.starts_with(b"p1,p2,p3,p4\n"));
        assert_eq!(read_world_points(buf.as_slice()).unwrap(), p);
    }

    #[test]
    fn sweep_round_trip_preserves_failures() {
        let rec = TrialRecord {
            trial: 3,
            noise: 0.02,
            algo: Algo::SevenPoint,
            angle_rad: std::f64::consts::FRAC_PI_2,
            residual: f64::NAN,
            failed: true,
            cube_seed: u64::MAX,
            cam_seed: 1,
        };
        let mut buf = Vec::new();
        write_sweep(&mut buf, &[rec]).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("trial,noise,algo,angle_rad,residual,failed,cube_seed,cam_seed\n"));
        assert!(text.contains(",7pt,"));
        let back = read_sweep(buf.as_slice()).unwrap();
        assert_eq!(back[0].cube_seed, u64::MAX);
        assert!(back[0].residual.is_nan() && back[0].failed);
    }

    #[test]
    fn malformed_rows_are_parse_errors() {
        let bad = "x1,x2,x3,y1,y2,y3\n1,2,oops,4,5,6\n";
        assert!(matches!(read_correspondences(bad.as_bytes()), Err(Error::Parse(_))));
        let zero = "x1,x2,x3,y1,y2,y3\n0,0,0,1,1,1\n";
        assert!(matches!(read_correspondences(zero.as_bytes()), Err(Error::Parse(_))));
        let short = "p1,p2,p3,p4\n1,2,3\n";
        assert!(matches!(read_world_points(short.as_bytes()), Err(Error::Parse(_))));
    }
}
