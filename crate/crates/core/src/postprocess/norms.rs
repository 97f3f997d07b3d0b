use serde::{Deserialize, Serialize};

use crate::series::FieldSeries;

use super::PostError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Component {
    V,
    U,
}

impl Component {
    fn pick(self, s: &crate::series::Snapshot) -> &[f64] {
        match self {
            Self::V => &s.v,
            Self::U => &s.u,
        }
    }
}

fn check_aligned(num: &FieldSeries, reference: &FieldSeries) -> Result<(), PostError> {
    if num.grid != reference.grid {
        return Err(PostError::GridMismatch(format!("{} vs {} grid points", num.grid.len(), reference.grid.len())));
    }
    if num.snapshots.len() != reference.snapshots.len() {
        return Err(PostError::GridMismatch(format!(
            "{} vs {} time layers",
            num.snapshots.len(),
            reference.snapshots.len()
        )));
    }
    if let Some((a, b)) = num
        .snapshots
        .iter()
        .zip(&reference.snapshots)
        .find(|(a, b)| (a.t - b.t).abs() > 1e-9 * a.t.abs().max(1.0))
    {
        return Err(PostError::GridMismatch(format!("time {} vs {}", a.t, b.t)));
    }
    Ok(())
}

/// Root mean square over time of the pointwise difference, at every grid point.
pub fn l2_error_profile(num: &FieldSeries, reference: &FieldSeries, field: Component) -> Result<Vec<f64>, PostError> {
    check_aligned(num, reference)?;
    let nt = num.snapshots.len();
    if nt == 0 {
        return Ok(vec![0.0; num.grid.len()]);
    }
    let mut acc = vec![0.0; num.grid.len()];
    for (a, b) in num.snapshots.iter().zip(&reference.snapshots) {
        for ((s, x), y) in acc.iter_mut().zip(field.pick(a)).zip(field.pick(b)) {
            *s += (x - y) * (x - y);
        }
    }
    Ok(acc.into_iter().map(|s| (s / nt as f64).sqrt()).collect())
}

pub fn inf_error(profile: &[f64]) -> f64 {
    profile.iter().cloned().fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub grid: Vec<f64>,
    pub eps2_u: Vec<f64>,
    pub eps2_v: Vec<f64>,
    pub eps_inf_u: f64,
    pub eps_inf_v: f64,
    pub samples: usize,
}

impl ErrorReport {
    pub fn compare(num: &FieldSeries, reference: &FieldSeries) -> Result<Self, PostError> {
        let eps2_u = l2_error_profile(num, reference, Component::U)?;
        let eps2_v = l2_error_profile(num, reference, Component::V)?;
        Ok(Self {
            grid: num.grid.clone(),
            eps_inf_u: inf_error(&eps2_u),
            eps_inf_v: inf_error(&eps2_v),
            eps2_u,
            eps2_v,
            samples: num.snapshots.len(),
        })
    }
}
