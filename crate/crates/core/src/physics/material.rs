//! Dimensional material laws and the saturation pressure correlation.

use serde::{Deserialize, Serialize};

use super::PhysicsError;

/// Absolute temperature in kelvin.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Kelvin(pub f64);

/// Pressure in pascal.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Pascal(pub f64);

pub const ZERO_CELSIUS: f64 = 273.15;
pub const SATURATION_RANGE: (f64, f64) = (253.0, 333.0);

/// Saturation vapour pressure over liquid water (Tetens form).
pub fn saturation_pressure(t: Kelvin) -> Result<Pascal, PhysicsError> {
    let (lo, hi) = SATURATION_RANGE;
    if !(t.0 >= lo && t.0 <= hi) {
        return Err(PhysicsError::OutOfRange { quantity: "temperature", value: t.0, lo, hi });
    }
    Ok(Pascal(saturation_pressure_unchecked(t.0)))
}

/// Same correlation without the range check, for drivers that are already bounded.
pub fn saturation_pressure_unchecked(t_kelvin: f64) -> f64 {
    let celsius = t_kelvin - ZERO_CELSIUS;
    610.78 * (17.27 * celsius / (celsius + 237.3)).exp()
}

/// Properties of liquid water and vapour shared by all materials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaterProperties {
    pub c_w_j_per_kg_k: f64,
    pub l_v_j_per_kg: f64,
    pub r_v_j_per_kg_k: f64,
    pub rho_l_kg_per_m3: f64,
}

impl Default for WaterProperties {
    fn default() -> Self {
        Self { c_w_j_per_kg_k: 4180.0, l_v_j_per_kg: 2.5e6, r_v_j_per_kg_k: 461.5, rho_l_kg_per_m3: 1000.0 }
    }
}

/// `amplitude * [1 + (-scale ln phi)^n]^(-m)`
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SorptionTerm {
    pub amplitude: f64,
    pub scale: f64,
    pub n: f64,
    pub m: f64,
}

impl SorptionTerm {
    fn value_and_derivative(&self, phi: f64) -> (f64, f64) {
        let s = -self.scale * phi.ln();
        if s <= 0.0 {
            return (self.amplitude, 0.0);
        }
        let sn = s.powf(self.n);
        let base = 1.0 + sn;
        let w = self.amplitude * base.powf(-self.m);
        // ds/dphi = -scale / phi
        let dw = -self.m * self.amplitude * base.powf(-self.m - 1.0) * self.n * sn / s * (-self.scale / phi);
        (w, dw)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Sorption {
    Multimodal { terms: Vec<SorptionTerm> },
    /// Coefficients in phi, highest degree first.
    Polynomial { coefficients: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum VapourPermeability {
    /// `delta0 * r / (a r^2 + b)` with `r = 1 - w / w_sat`.
    SaturationRatio { delta0_s: f64, w_sat_kg_per_m3: f64, a: f64, b: f64 },
    Linear { slope_s: f64, intercept_s: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LiquidPermeability {
    Neglected,
    /// `scale * exp(rate * phi)`
    Exponential { scale_s: f64, rate: f64 },
    /// `exp(sum_k c_k (w - w_ref)^k)`, coefficients from degree zero up.
    ExpPolynomial { w_ref_kg_per_m3: f64, coefficients: Vec<f64> },
}

/// `base + per_w * w + per_kelvin * T`
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Conductivity {
    pub base_w_per_m_k: f64,
    pub per_w: f64,
    pub per_kelvin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalMaterial {
    pub name: String,
    pub rho0_c0_j_per_m3_k: f64,
    #[serde(default)]
    pub water: WaterProperties,
    pub sorption: Sorption,
    pub vapour_permeability: VapourPermeability,
    pub liquid_permeability: LiquidPermeability,
    pub conductivity: Conductivity,
}

/// Dimensional coefficients of the transport equations at one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalCoefficients {
    pub c_m: f64,
    pub c_t: f64,
    pub c_tm: f64,
    pub k_m: f64,
    pub k_t: f64,
    pub k_tm: f64,
}

impl PhysicalMaterial {
    /// Moisture content `w(phi)` and `w'(phi)`.
    pub fn sorption(&self, phi: f64) -> (f64, f64) {
        match &self.sorption {
            Sorption::Multimodal { terms } => terms.iter().fold((0.0, 0.0), |(w, dw), t| {
                let (a, b) = t.value_and_derivative(phi);
                (w + a, dw + b)
            }),
            Sorption::Polynomial { coefficients } => {
                let mut p = 0.0;
                let mut dp = 0.0;
                for &c in coefficients {
                    dp = dp * phi + p;
                    p = p * phi + c;
                }
                (p, dp)
            }
        }
    }

    pub fn vapour_permeability(&self, phi: f64) -> f64 {
        match self.vapour_permeability {
            VapourPermeability::SaturationRatio { delta0_s, w_sat_kg_per_m3, a, b } => {
                let r = 1.0 - self.sorption(phi).0 / w_sat_kg_per_m3;
                delta0_s * r / (a * r * r + b)
            }
            VapourPermeability::Linear { slope_s, intercept_s } => slope_s * phi + intercept_s,
        }
    }

    pub fn liquid_permeability(&self, phi: f64) -> f64 {
        match &self.liquid_permeability {
            LiquidPermeability::Neglected => 0.0,
            LiquidPermeability::Exponential { scale_s, rate } => scale_s * (rate * phi).exp(),
            LiquidPermeability::ExpPolynomial { w_ref_kg_per_m3, coefficients } => {
                let dw = self.sorption(phi).0 - w_ref_kg_per_m3;
                coefficients.iter().rev().fold(0.0, |acc, c| acc * dw + c).exp()
            }
        }
    }

    pub fn thermal_conductivity(&self, phi: f64, t: Kelvin) -> f64 {
        let c = self.conductivity;
        c.base_w_per_m_k + c.per_w * self.sorption(phi).0 + c.per_kelvin * t.0
    }

    /// Total moisture transfer coefficient under a vapour pressure gradient.
    pub fn total_moisture_transfer_coefficient(&self, t: Kelvin, p_v: Pascal, phi: f64) -> Result<f64, PhysicsError> {
        if !(p_v.0 > 0.0) {
            return Err(PhysicsError::NonPositivePressure(p_v.0));
        }
        let w = &self.water;
        let liquid = self.liquid_permeability(phi) * w.rho_l_kg_per_m3 * w.r_v_j_per_kg_k * t.0 / p_v.0;
        Ok(liquid + self.vapour_permeability(phi))
    }

    /// All six coefficients at temperature `t` and relative humidity `phi`.
    pub fn coefficients(&self, t: Kelvin, phi: f64) -> Result<PhysicalCoefficients, PhysicsError> {
        let p_s = saturation_pressure(t)?.0;
        let (w, dw) = self.sorption(phi);
        let water = &self.water;
        Ok(PhysicalCoefficients {
            c_m: dw / p_s,
            c_t: self.rho0_c0_j_per_m3_k + w * water.c_w_j_per_kg_k,
            c_tm: water.c_w_j_per_kg_k * t.0 * dw / p_s,
            k_m: self.total_moisture_transfer_coefficient(t, Pascal(phi * p_s), phi)?,
            k_t: self.thermal_conductivity(phi, t),
            k_tm: water.l_v_j_per_kg * self.vapour_permeability(phi),
        })
    }

    /// Load-bearing wall material of the single-layer benchmark.
    pub fn load_bearing() -> Self {
        Self {
            name: "load_bearing".into(),
            rho0_c0_j_per_m3_k: 2005.0 * 840.0,
            water: WaterProperties::default(),
            sorption: Sorption::Multimodal {
                terms: vec![
                    SorptionTerm { amplitude: 47.1, scale: 1692.94, n: 1.65, m: 0.39 },
                    SorptionTerm { amplitude: 109.9, scale: 2437.83, n: 6.0, m: 0.83 },
                ],
            },
            vapour_permeability: VapourPermeability::SaturationRatio {
                delta0_s: 6.413e-9,
                w_sat_kg_per_m3: 157.0,
                a: 0.503,
                b: 0.497,
            },
            liquid_permeability: LiquidPermeability::Exponential { scale_s: 2.52e-4, rate: -1.55e6 },
            conductivity: Conductivity { base_w_per_m_k: 0.5, per_w: 0.0045, per_kelvin: 0.0 },
        }
    }

    /// Hygroscopic finishing layer of the two-layer wall.
    pub fn finishing() -> Self {
        Self {
            name: "finishing".into(),
            rho0_c0_j_per_m3_k: 790.0 * 870.0,
            water: WaterProperties::default(),
            sorption: Sorption::Multimodal {
                terms: vec![SorptionTerm { amplitude: 209.0, scale: 2.7e14, n: 1.27, m: 0.21 }],
            },
            vapour_permeability: VapourPermeability::SaturationRatio {
                delta0_s: 6.413e-9,
                w_sat_kg_per_m3: 209.0,
                a: 0.503,
                b: 0.497,
            },
            liquid_permeability: LiquidPermeability::ExpPolynomial {
                w_ref_kg_per_m3: 120.0,
                coefficients: vec![-33.0, 0.0704, -1.742e-4, -2.795e-6, -1.157e-7, 2.597e-9],
            },
            conductivity: Conductivity { base_w_per_m_k: 0.2, per_w: 0.0045, per_kelvin: 0.0 },
        }
    }

    pub fn wood_fibre() -> Self {
        let water = WaterProperties::default();
        Self {
            name: "wood_fibre".into(),
            rho0_c0_j_per_m3_k: 1103.0 * 146.0,
            water,
            sorption: Sorption::Polynomial { coefficients: vec![7.063e-5, -0.00736, 0.4105, 0.2688] },
            vapour_permeability: VapourPermeability::Linear { slope_s: 4.85e-13, intercept_s: 3.28e-11 },
            liquid_permeability: LiquidPermeability::Neglected,
            conductivity: Conductivity {
                base_w_per_m_k: 0.038,
                per_w: 0.192 / water.rho_l_kg_per_m3,
                per_kelvin: 1.08e-4,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn saturation_pressure_matches_twenty_celsius() {
        let p = saturation_pressure(Kelvin(293.15)).unwrap().0;
        assert!((p / 2337.9 - 1.0).abs() < 5e-3, "{p}");
        assert!((p / 2333.8 - 1.0).abs() < 5e-3, "{p}");
        assert!(saturation_pressure(Kelvin(303.15)).unwrap() > saturation_pressure(Kelvin(293.15)).unwrap());
        assert!(saturation_pressure(Kelvin(200.0)).is_err());
    }

    #[test]
    fn saturation_pressure_is_increasing() {
        let mut last = 0.0;
        for k in 0..=80 {
            let p = saturation_pressure(Kelvin(253.0 + k as f64)).unwrap().0;
            assert!(p > last);
            last = p;
        }
    }

    #[test]
    fn vapour_only_limit() {
        let mut m = PhysicalMaterial::load_bearing();
        m.liquid_permeability = LiquidPermeability::Neglected;
        let k = m.total_moisture_transfer_coefficient(Kelvin(293.15), Pascal(1500.0), 0.7).unwrap();
        assert_eq!(k, m.vapour_permeability(0.7));
    }

    #[test]
    fn doubling_pressure_halves_liquid_term() {
        let mut m = PhysicalMaterial::wood_fibre();
        m.liquid_permeability = LiquidPermeability::Exponential { scale_s: 1e-12, rate: 0.0 };
        let delta = m.vapour_permeability(0.5);
        let a = m.total_moisture_transfer_coefficient(Kelvin(293.15), Pascal(1000.0), 0.5).unwrap() - delta;
        let b = m.total_moisture_transfer_coefficient(Kelvin(293.15), Pascal(2000.0), 0.5).unwrap() - delta;
        assert!((a - 2.0 * b).abs() <= 1e-15 * a);
        assert!(m.total_moisture_transfer_coefficient(Kelvin(293.15), Pascal(0.0), 0.5).is_err());
    }

    #[test]
    fn load_bearing_direct_substitution() {
        let m = PhysicalMaterial::load_bearing();
        let phi: f64 = 0.7;
        let t = 293.15;
        let w = 47.1 * (1.0 + (-1692.94 * phi.ln()).powf(1.65)).powf(-0.39)
            + 109.9 * (1.0 + (-2437.83 * phi.ln()).powf(6.0)).powf(-0.83);
        let r = 1.0 - w / 157.0;
        let delta = 6.413e-9 * r / (0.503 * r * r + 0.497);
        let kl = 2.52e-4 * (-1.55e6 * phi).exp();
        let pv = phi * saturation_pressure_unchecked(t);
        let expected = kl * 1000.0 * 461.5 * t / pv + delta;
        let got = m.total_moisture_transfer_coefficient(Kelvin(t), Pascal(pv), phi).unwrap();
        assert!((got - expected).abs() <= 1e-14 * expected);
    }

    #[test]
    fn sorption_derivatives_match_differences() {
        for m in [PhysicalMaterial::load_bearing(), PhysicalMaterial::finishing(), PhysicalMaterial::wood_fibre()] {
            for k in 1..20 {
                let phi = 0.05 + 0.047 * k as f64;
                let h = 1e-7;
                let fd = (m.sorption(phi + h).0 - m.sorption(phi - h).0) / (2.0 * h);
                let d = m.sorption(phi).1;
                assert!((fd - d).abs() <= 1e-5 * d.abs().max(1e-3), "{} {phi}: {fd} vs {d}", m.name);
            }
        }
    }

    #[test]
    fn material_laws_positive_and_monotone() {
        for m in [PhysicalMaterial::load_bearing(), PhysicalMaterial::finishing(), PhysicalMaterial::wood_fibre()] {
            let mut last = 0.0;
            for k in 0..=94 {
                let phi = 0.05 + 0.01 * k as f64;
                let (w, _) = m.sorption(phi);
                assert!(w > 0.0 && w >= last, "{} at {phi}", m.name);
                last = w;
                assert!(m.vapour_permeability(phi) > 0.0);
                assert!(m.liquid_permeability(phi) >= 0.0);
                assert!(m.thermal_conductivity(phi, Kelvin(293.15)) > 0.0);
            }
        }
    }
}
