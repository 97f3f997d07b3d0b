//! Sensor files: surface probes become Dirichlet drivers, interior probes
//! become reference series.
//!
//! Temperatures are in degrees Celsius and relative humidities in percent.

use std::io::{Read, Write};
use std::path::Path;

use crate::mohl::InitialFields;
use crate::physics::{saturation_pressure, BoundaryDriver, Drivers, Kelvin, References, Signal};

use super::presets::{wood_fibre_initial, CaseConfig, SolverSettings, TimeSettings};
use super::CaseError;

pub const SENSOR_COLUMNS: [&str; 11] =
    ["t_hours", "T_x0", "RH_x0", "T_x16", "RH_x16", "T_x4", "RH_x4", "T_x8", "RH_x8", "T_x12", "RH_x12"];

/// Interior probe depths.
pub const INTERIOR_DEPTHS_CM: [f64; 3] = [4.0, 8.0, 12.0];
pub const WALL_THICKNESS_CM: f64 = 16.0;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Probe {
    pub temperature_c: Vec<f64>,
    pub relative_humidity_pct: Vec<f64>,
}

impl Probe {
    fn push(&mut self, t: f64, rh: f64) {
        self.temperature_c.push(t);
        self.relative_humidity_pct.push(rh);
    }

    /// Dimensionless `(u, v)` series.
    pub fn dimensionless(&self, refs: &References) -> Result<(Vec<f64>, Vec<f64>), CaseError> {
        self.temperature_c
            .iter()
            .zip(&self.relative_humidity_pct)
            .map(|(&t, &rh)| {
                let tk = t + 273.15;
                let ps = saturation_pressure(Kelvin(tk))?;
                Ok((tk / refs.temperature_k, rh / 100.0 * ps.0 / refs.vapour_pressure_pa))
            })
            .collect::<Result<Vec<_>, CaseError>>()
            .map(|pairs| pairs.into_iter().unzip())
    }
}

/// Reference measurements at one interior depth, dimensionless.
#[derive(Debug, Clone, PartialEq)]
pub struct SensorSeries {
    pub depth_cm: f64,
    pub x_star: f64,
    pub t_star: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SensorData {
    pub hours: Vec<f64>,
    pub left: Probe,
    pub right: Probe,
    /// Probes at [`INTERIOR_DEPTHS_CM`].
    pub interior: [Probe; 3],
}

impl SensorData {
    pub fn t_star(&self, refs: &References) -> Vec<f64> {
        self.hours.iter().map(|h| h * 3600.0 / refs.time_s).collect()
    }

    /// Surface probes as Dirichlet drivers, interpolated linearly in time.
    pub fn drivers(&self, refs: &References) -> Result<Drivers, CaseError> {
        let times = self.t_star(refs);
        let side = |p: &Probe| -> Result<BoundaryDriver, CaseError> {
            let (u, v) = p.dimensionless(refs)?;
            Ok(BoundaryDriver::dirichlet(
                Signal::Series { times: times.clone(), values: u },
                Signal::Series { times: times.clone(), values: v },
            ))
        };
        Ok(Drivers { left: side(&self.left)?, right: side(&self.right)? })
    }

    pub fn references(&self, refs: &References) -> Result<Vec<SensorSeries>, CaseError> {
        let t_star = self.t_star(refs);
        INTERIOR_DEPTHS_CM
            .iter()
            .zip(&self.interior)
            .map(|(&depth_cm, probe)| {
                let (u, v) = probe.dimensionless(refs)?;
                Ok(SensorSeries { depth_cm, x_star: depth_cm / WALL_THICKNESS_CM, t_star: t_star.clone(), u, v })
            })
            .collect()
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), CaseError> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(SENSOR_COLUMNS)?;
        let probes = [&self.left, &self.right, &self.interior[0], &self.interior[1], &self.interior[2]];
        for (i, h) in self.hours.iter().enumerate() {
            let mut row = vec![h.to_string()];
            for p in probes {
                row.push(p.temperature_c[i].to_string());
                row.push(p.relative_humidity_pct[i].to_string());
            }
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn load_sensor_csv(path: &Path) -> Result<SensorData, CaseError> {
    let file = std::fs::File::open(path).map_err(|e| CaseError::Io(format!("{}: {e}", path.display())))?;
    parse_sensor_csv(file)
}

pub fn parse_sensor_csv<R: Read>(reader: R) -> Result<SensorData, CaseError> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = r.headers()?.clone();
    let index: Vec<usize> = SENSOR_COLUMNS
        .iter()
        .map(|c| headers.iter().position(|h| h == *c).ok_or_else(|| CaseError::SchemaViolation(format!("missing column {c}"))))
        .collect::<Result<_, _>>()?;

    let mut data = SensorData::default();
    for (line, record) in r.records().enumerate() {
        let record = record?;
        let field = |k: usize| -> Result<f64, CaseError> {
            let raw = record.get(index[k]).unwrap_or("");
            raw.parse::<f64>().map_err(|_| {
                CaseError::SchemaViolation(format!("row {}: {} = {raw:?} is not a number", line + 1, SENSOR_COLUMNS[k]))
            })
        };
        let t = field(0)?;
        if let Some(&prev) = data.hours.last() {
            if t <= prev {
                return Err(CaseError::NonMonotoneTime { row: line + 1, previous: prev, found: t });
            }
        }
        data.hours.push(t);
        data.left.push(field(1)?, field(2)?);
        data.right.push(field(3)?, field(4)?);
        for (j, p) in data.interior.iter_mut().enumerate() {
            p.push(field(5 + 2 * j)?, field(6 + 2 * j)?);
        }
    }
    if data.hours.is_empty() {
        return Err(CaseError::SchemaViolation("no data rows".into()));
    }
    Ok(data)
}

/// Sensor readings of a wall frozen in the state `initial`, with surface probes
/// held at the profile ends.
pub fn synthetic_sensor_data(hours: &[f64], initial: &InitialFields, refs: &References) -> Result<SensorData, CaseError> {
    let probe_at = |x: f64| -> Result<Probe, CaseError> {
        let u = initial.u.eval(x).0;
        let v = initial.v.eval(x).0;
        let tk = u * refs.temperature_k;
        let ps = saturation_pressure(Kelvin(tk))?;
        let rh = 100.0 * v * refs.vapour_pressure_pa / ps.0;
        Ok(Probe { temperature_c: vec![tk - 273.15; hours.len()], relative_humidity_pct: vec![rh; hours.len()] })
    };
    Ok(SensorData {
        hours: hours.to_vec(),
        left: probe_at(0.0)?,
        right: probe_at(1.0)?,
        interior: [
            probe_at(INTERIOR_DEPTHS_CM[0] / WALL_THICKNESS_CM)?,
            probe_at(INTERIOR_DEPTHS_CM[1] / WALL_THICKNESS_CM)?,
            probe_at(INTERIOR_DEPTHS_CM[2] / WALL_THICKNESS_CM)?,
        ],
    })
}

/// The wood-fibre wall driven by measured surface values.
pub fn experimental(data: &SensorData) -> Result<CaseConfig, CaseError> {
    let model = crate::physics::library::wood_fibre_model();
    let drivers = data.drivers(&model.references)?;
    Ok(CaseConfig {
        name: "experimental".into(),
        time: TimeSettings { dt_star: 0.1, tau_star: 336.0 },
        solver: SolverSettings { tolerance: 1e-4, initial_nodes: 10, max_nodes: 2000, output_points: 161 },
        initial: wood_fibre_initial(),
        model,
        drivers,
    })
}
