use serde::{Deserialize, Serialize};

/// A scalar function of the dimensionless vapour pressure with a closed-form derivative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScalarClosure {
    Constant { value: f64 },
    /// Coefficients from the highest degree down.
    Polynomial { coefficients: Vec<f64> },
    Rational { numerator: Vec<f64>, denominator: Vec<f64> },
    /// `scale * v^exponent + offset`
    PowerLaw { scale: f64, exponent: f64, offset: f64 },
}

/// Horner evaluation of value and derivative, coefficients highest degree first.
fn horner(coefficients: &[f64], v: f64) -> (f64, f64) {
    let mut p = 0.0;
    let mut dp = 0.0;
    for &c in coefficients {
        dp = dp * v + p;
        p = p * v + c;
    }
    (p, dp)
}

impl ScalarClosure {
    pub fn constant(value: f64) -> Self {
        Self::Constant { value }
    }

    pub fn rational(numerator: &[f64], denominator: &[f64]) -> Self {
        Self::Rational { numerator: numerator.to_vec(), denominator: denominator.to_vec() }
    }

    pub fn linear(slope: f64, intercept: f64) -> Self {
        Self::Polynomial { coefficients: vec![slope, intercept] }
    }

    pub fn value(&self, v: f64) -> f64 {
        self.value_and_derivative(v).0
    }

    pub fn derivative(&self, v: f64) -> f64 {
        self.value_and_derivative(v).1
    }

    pub fn value_and_derivative(&self, v: f64) -> (f64, f64) {
        match self {
            Self::Constant { value } => (*value, 0.0),
            Self::Polynomial { coefficients } => horner(coefficients, v),
            Self::Rational { numerator, denominator } => {
                let (n, dn) = horner(numerator, v);
                let (d, dd) = horner(denominator, v);
                (n / d, (dn * d - n * dd) / (d * d))
            }
            Self::PowerLaw { scale, exponent, offset } => {
                if v == 0.0 {
                    let slope = if *exponent == 1.0 { *scale } else { 0.0 };
                    return (*offset, slope);
                }
                let p = v.powf(*exponent - 1.0);
                (scale * p * v + offset, scale * exponent * p)
            }
        }
    }
}

/// The six dimensionless storage and transport coefficients of one material layer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientClosure {
    pub c_m: ScalarClosure,
    pub c_t: ScalarClosure,
    pub c_tm: ScalarClosure,
    pub k_m: ScalarClosure,
    pub k_t: ScalarClosure,
    pub k_tm: ScalarClosure,
}

/// Coefficient values at one `(v, x)` plus the transport derivatives the
/// non-conservative form needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientValues {
    pub c_m: f64,
    pub c_t: f64,
    pub c_tm: f64,
    pub k_m: f64,
    pub k_t: f64,
    pub k_tm: f64,
    pub dk_m: f64,
    pub dk_t: f64,
    pub dk_tm: f64,
}

impl CoefficientClosure {
    pub fn constant() -> Self {
        let one = ScalarClosure::constant(1.0);
        Self {
            c_m: one.clone(),
            c_t: one.clone(),
            c_tm: one.clone(),
            k_m: one.clone(),
            k_t: one.clone(),
            k_tm: one,
        }
    }

    pub fn evaluate(&self, v: f64) -> CoefficientValues {
        let (k_m, dk_m) = self.k_m.value_and_derivative(v);
        let (k_t, dk_t) = self.k_t.value_and_derivative(v);
        let (k_tm, dk_tm) = self.k_tm.value_and_derivative(v);
        CoefficientValues {
            c_m: self.c_m.value(v),
            c_t: self.c_t.value(v),
            c_tm: self.c_tm.value(v),
            k_m,
            k_t,
            k_tm,
            dk_m,
            dk_t,
            dk_tm,
        }
    }

    pub fn named(&self) -> [(&'static str, &ScalarClosure); 6] {
        [
            ("c_m", &self.c_m),
            ("c_t", &self.c_t),
            ("c_tm", &self.c_tm),
            ("k_m", &self.k_m),
            ("k_t", &self.k_t),
            ("k_tm", &self.k_tm),
        ]
    }

    /// First `(name, v)` in `[lo, hi]` (sampled at `samples` points) where a
    /// closure that must stay positive is not. `c_tm` is only required finite.
    pub fn first_nonpositive(&self, lo: f64, hi: f64, samples: usize) -> Option<(&'static str, f64)> {
        let samples = samples.max(2);
        for k in 0..samples {
            let v = lo + (hi - lo) * k as f64 / (samples - 1) as f64;
            for (name, closure) in self.named() {
                let value = closure.value(v);
                let ok = if name == "c_tm" { value.is_finite() } else { value > 0.0 && value.is_finite() };
                if !ok {
                    return Some((name, v));
                }
            }
        }
        None
    }
}
