use serde::{Deserialize, Serialize};

use crate::cases::SensorSeries;
use crate::series::FieldSeries;

use super::{Component, PostError};

/// Relative error of the simulation at one probe over the measurement times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensorError {
    pub x_star: f64,
    pub t_star: Vec<f64>,
    pub epsilon: Vec<f64>,
}

/// `|Y_num - Y_meas| / Y_meas` at every measurement time; the simulation must
/// hold a layer at each of those times and is interpolated linearly in space.
pub fn relative_error_series(
    num: &FieldSeries,
    measured: &[SensorSeries],
    field: Component,
) -> Result<Vec<SensorError>, PostError> {
    measured
        .iter()
        .map(|probe| {
            let meas = match field {
                Component::U => &probe.u,
                Component::V => &probe.v,
            };
            let mut epsilon = Vec::with_capacity(meas.len());
            let mut cursor = 0;
            for (k, (&t, &y)) in probe.t_star.iter().zip(meas).enumerate() {
                if y == 0.0 {
                    return Err(PostError::ZeroMeasurement { x_star: probe.x_star, index: k });
                }
                while cursor < num.snapshots.len() && num.snapshots[cursor].t < t - 1e-9 * t.abs().max(1.0) {
                    cursor += 1;
                }
                let s = num
                    .snapshots
                    .get(cursor)
                    .filter(|s| (s.t - t).abs() <= 1e-9 * t.abs().max(1.0))
                    .ok_or_else(|| PostError::GridMismatch(format!("no simulated layer at t* = {t}")))?;
                let values = match field {
                    Component::U => &s.u,
                    Component::V => &s.v,
                };
                let y_num = crate::physics::drivers::interpolate(&num.grid, values, probe.x_star);
                epsilon.push(((y_num - y) * (y_num - y)).sqrt() / y);
            }
            Ok(SensorError { x_star: probe.x_star, t_star: probe.t_star.clone(), epsilon })
        })
        .collect()
}

/// Euclidean combination of independent uncertainties.
pub fn total_uncertainty(sigma_meas: f64, sigma_pos: f64) -> f64 {
    (sigma_meas * sigma_meas + sigma_pos * sigma_pos).sqrt()
}

/// Positional uncertainty in field units: local slope times the position error.
pub fn positional_uncertainty(slope: f64, sigma_position: f64) -> f64 {
    (slope * sigma_position).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{uniform_grid, Snapshot};

    fn probe(x: f64, t: Vec<f64>, y: Vec<f64>) -> SensorSeries {
        SensorSeries { depth_cm: 16.0 * x, x_star: x, t_star: t, u: y.clone(), v: y }
    }

    fn flat(value: f64) -> FieldSeries {
        FieldSeries {
            grid: uniform_grid(5),
            snapshots: (0..3).map(|k| Snapshot::uniform(k as f64, 5, value, value)).collect(),
        }
    }

    #[test]
    fn exact_match_and_one_percent() {
        let meas = [probe(0.5, vec![0.0, 1.0, 2.0], vec![2.0; 3])];
        let e = relative_error_series(&flat(2.0), &meas, Component::V).unwrap();
        assert!(e[0].epsilon.iter().all(|&x| x == 0.0));
        let e = relative_error_series(&flat(2.02), &meas, Component::U).unwrap();
        assert!(e[0].epsilon.iter().all(|&x| (x - 0.01).abs() < 1e-12));
    }

    #[test]
    fn zero_measurement_is_rejected() {
        let meas = [probe(0.5, vec![0.0], vec![0.0])];
        assert!(matches!(relative_error_series(&flat(1.0), &meas, Component::V), Err(PostError::ZeroMeasurement { .. })));
    }

    #[test]
    fn missing_time_is_rejected() {
        let meas = [probe(0.5, vec![0.5], vec![1.0])];
        assert!(matches!(relative_error_series(&flat(1.0), &meas, Component::V), Err(PostError::GridMismatch(_))));
    }

    #[test]
    fn uncertainty_combination() {
        assert_eq!(total_uncertainty(3.0, 4.0), 5.0);
        assert_eq!(total_uncertainty(0.7, 0.0), 0.7);
        assert!((total_uncertainty(0.3, 0.18) - (0.09f64 + 0.0324).sqrt()).abs() < 1e-15);
    }
}
