//! CSV files. Column order is fixed:
//!
//! * fields: `t_star,x_star,v,u,theta,mu`
//! * fluxes: `t_star,q_s,q_l,g`
//! * errors: `x_star,eps2_u,eps2_v`
//! * budget: `t_star,stored,inflow,residual`
//! * sensor errors: `x_star,t_star,epsilon`

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::series::{FieldSeries, Snapshot};

use super::{ErrorReport, FluxSeries, MassBudget, PostError, SensorError};

#[derive(Debug, Serialize, Deserialize)]
struct FieldRow {
    t_star: f64,
    x_star: f64,
    v: f64,
    u: f64,
    theta: f64,
    mu: f64,
}

fn create(path: &Path) -> Result<File, PostError> {
    File::create(path).map_err(|e| PostError::Io(format!("{}: {e}", path.display())))
}

fn write_rows<W: Write, T: Serialize>(writer: W, header: &[&str], rows: impl Iterator<Item = T>) -> Result<(), PostError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
    w.write_record(header)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_fields<W: Write>(series: &FieldSeries, writer: W) -> Result<(), PostError> {
    let rows = series.snapshots.iter().flat_map(|s| {
        series.grid.iter().enumerate().map(move |(i, &x)| FieldRow {
            t_star: s.t,
            x_star: x,
            v: s.v[i],
            u: s.u[i],
            theta: s.theta[i],
            mu: s.mu[i],
        })
    });
    write_rows(writer, &["t_star", "x_star", "v", "u", "theta", "mu"], rows)
}

pub fn export_csv(series: &FieldSeries, path: &Path) -> Result<(), PostError> {
    write_fields(series, create(path)?)
}

/// Reads a fields file back; rows of one time must be contiguous.
pub fn read_fields<R: Read>(reader: R) -> Result<FieldSeries, PostError> {
    let mut r = csv::Reader::from_reader(reader);
    let mut series = FieldSeries::default();
    let mut grid_done = false;
    for row in r.deserialize::<FieldRow>() {
        let row = row?;
        let start_new = series.snapshots.last().is_none_or(|s| s.t != row.t_star);
        if start_new {
            if !series.snapshots.is_empty() {
                grid_done = true;
            }
            series.snapshots.push(Snapshot { t: row.t_star, v: vec![], theta: vec![], u: vec![], mu: vec![] });
        }
        if !grid_done {
            series.grid.push(row.x_star);
        }
        let s = series.snapshots.last_mut().expect("pushed above");
        s.v.push(row.v);
        s.u.push(row.u);
        s.theta.push(row.theta);
        s.mu.push(row.mu);
    }
    if let Some(s) = series.snapshots.iter().find(|s| s.v.len() != series.grid.len()) {
        return Err(PostError::GridMismatch(format!("layer t* = {} has {} rows", s.t, s.v.len())));
    }
    Ok(series)
}

pub fn write_fluxes<W: Write>(f: &FluxSeries, writer: W) -> Result<(), PostError> {
    let rows = (0..f.t_star.len()).map(|k| (f.t_star[k], f.q_s[k], f.q_l[k], f.g[k]));
    write_rows(writer, &["t_star", "q_s", "q_l", "g"], rows)
}

pub fn write_errors<W: Write>(e: &ErrorReport, writer: W) -> Result<(), PostError> {
    let rows = (0..e.grid.len()).map(|i| (e.grid[i], e.eps2_u[i], e.eps2_v[i]));
    write_rows(writer, &["x_star", "eps2_u", "eps2_v"], rows)
}

pub fn write_budget<W: Write>(b: &MassBudget, writer: W) -> Result<(), PostError> {
    let rows = (0..b.t_star.len()).map(|k| (b.t_star[k], b.stored[k], b.inflow[k], b.residual[k]));
    write_rows(writer, &["t_star", "stored", "inflow", "residual"], rows)
}

pub fn write_sensor_errors<W: Write>(errors: &[SensorError], writer: W) -> Result<(), PostError> {
    let rows = errors.iter().flat_map(|e| e.t_star.iter().zip(&e.epsilon).map(move |(&t, &eps)| (e.x_star, t, eps)));
    write_rows(writer, &["x_star", "t_star", "epsilon"], rows)
}

/// Writes with `write` into a new file at `path`.
pub fn to_file<F>(path: &Path, write: F) -> Result<(), PostError>
where
    F: FnOnce(File) -> Result<(), PostError>,
{
    write(create(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::uniform_grid;

    #[test]
    fn empty_series_writes_only_the_header() {
        let mut buf = Vec::new();
        write_fields(&FieldSeries::new(uniform_grid(3)), &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "t_star,x_star,v,u,theta,mu\n");
    }

    #[test]
    fn one_snapshot_one_row_per_point() {
        let s = FieldSeries { grid: uniform_grid(4), snapshots: vec![Snapshot::uniform(0.5, 4, 1.0, 1.0)] };
        let mut buf = Vec::new();
        write_fields(&s, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 5);
    }

    #[test]
    fn round_trip_is_exact() {
        let grid = uniform_grid(7);
        let snapshots = (0..3)
            .map(|k| {
                let t = 0.1 * k as f64;
                let f = |c: f64| grid.iter().map(|x| (c * x + t).sin() / 3.0).collect::<Vec<_>>();
                Snapshot { t, v: f(1.0), u: f(2.0), theta: f(3.0), mu: f(4.0) }
            })
            .collect();
        let s = FieldSeries { grid: grid.clone(), snapshots };
        let mut buf = Vec::new();
        write_fields(&s, &mut buf).unwrap();
        assert_eq!(read_fields(buf.as_slice()).unwrap(), s);
    }
}
