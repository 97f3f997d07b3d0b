use serde::{Deserialize, Serialize};

use crate::physics::{DimensionlessModel, Drivers};

/// Initial profile of one dimensionless field over `x* ∈ [0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Profile {
    Uniform { value: f64 },
    /// Coefficients in `x*`, highest degree first.
    Polynomial { coefficients: Vec<f64> },
}

impl Profile {
    /// Value, first and second derivative.
    pub fn eval(&self, x: f64) -> (f64, f64, f64) {
        match self {
            Self::Uniform { value } => (*value, 0.0, 0.0),
            Self::Polynomial { coefficients } => {
                let (mut p, mut d1, mut d2) = (0.0, 0.0, 0.0);
                for &c in coefficients {
                    d2 = d2 * x + 2.0 * d1;
                    d1 = d1 * x + p;
                    p = p * x + c;
                }
                (p, d1, d2)
            }
        }
    }

    pub fn range(&self) -> (f64, f64) {
        (0..=200)
            .map(|k| self.eval(k as f64 / 200.0).0)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialFields {
    pub v: Profile,
    pub u: Profile,
}

/// Everything needed to integrate one wall in time.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub model: DimensionlessModel,
    pub drivers: Drivers,
    pub initial: InitialFields,
    pub dt: f64,
    pub tau: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_derivatives() {
        let p = Profile::Polynomial { coefficients: vec![2.0, -1.0, 0.5, 3.0] };
        let x = 0.4;
        let (v, d1, d2) = p.eval(x);
        assert!((v - (2.0 * x * x * x - x * x + 0.5 * x + 3.0)).abs() < 1e-14);
        assert!((d1 - (6.0 * x * x - 2.0 * x + 0.5)).abs() < 1e-14);
        assert!((d2 - (12.0 * x - 2.0)).abs() < 1e-14);
    }
}
