use serde::{Deserialize, Serialize};

use super::closure::{CoefficientClosure, CoefficientValues};
use super::material::PhysicalMaterial;
use super::PhysicsError;

/// Biot numbers of one wall surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceNumbers {
    pub bi_m: f64,
    pub bi_t: f64,
    pub bi_tm: f64,
}

/// Reference scales used to make the problem dimensionless.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct References {
    pub temperature_k: f64,
    pub vapour_pressure_pa: f64,
    pub time_s: f64,
    pub length_m: f64,
    pub c_m0_s2_per_m2: f64,
    pub c_t0_j_per_m3_k: f64,
    pub c_tm0: f64,
    pub k_m0_s: f64,
    pub k_t0_w_per_m_k: f64,
    pub k_tm0: f64,
}

impl References {
    pub fn validate(&self) -> Result<(), PhysicsError> {
        let fields = [
            ("temperature_k", self.temperature_k),
            ("vapour_pressure_pa", self.vapour_pressure_pa),
            ("time_s", self.time_s),
            ("length_m", self.length_m),
            ("c_m0_s2_per_m2", self.c_m0_s2_per_m2),
            ("c_t0_j_per_m3_k", self.c_t0_j_per_m3_k),
            ("c_tm0", self.c_tm0),
            ("k_m0_s", self.k_m0_s),
            ("k_t0_w_per_m_k", self.k_t0_w_per_m_k),
            ("k_tm0", self.k_tm0),
        ];
        match fields.iter().find(|(_, v)| !(*v > 0.0 && v.is_finite())) {
            Some((name, v)) => Err(PhysicsError::InvalidReference(format!("{name} = {v}"))),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Layer {
    pub x_start: f64,
    pub x_end: f64,
    pub closure: CoefficientClosure,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DimensionlessModel {
    pub fo_m: f64,
    pub fo_t: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub left: SurfaceNumbers,
    pub right: SurfaceNumbers,
    pub references: References,
    pub layers: Vec<Layer>,
}

/// Coefficients of the non-conservative coupled system at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledRhsCoefficients {
    pub a_bar: f64,
    pub b_bar: f64,
    pub c_bar: f64,
    pub d_bar: f64,
    pub e_bar: f64,
    pub f_bar: f64,
    pub g_bar: f64,
    pub h_bar: f64,
}

impl DimensionlessModel {
    pub fn validate(&self) -> Result<(), PhysicsError> {
        let scalars = [
            ("fo_m", self.fo_m),
            ("fo_t", self.fo_t),
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
            ("left.bi_m", self.left.bi_m),
            ("left.bi_t", self.left.bi_t),
            ("left.bi_tm", self.left.bi_tm),
            ("right.bi_m", self.right.bi_m),
            ("right.bi_t", self.right.bi_t),
            ("right.bi_tm", self.right.bi_tm),
        ];
        if let Some((name, v)) = scalars.iter().find(|(_, v)| !(*v > 0.0 && v.is_finite())) {
            return Err(PhysicsError::InvalidReference(format!("{name} = {v}")));
        }
        self.references.validate()?;
        let layers = &self.layers;
        if layers.is_empty() {
            return Err(PhysicsError::InvalidLayers("no layers".into()));
        }
        if layers[0].x_start != 0.0 || layers[layers.len() - 1].x_end != 1.0 {
            return Err(PhysicsError::InvalidLayers("layers must cover [0, 1]".into()));
        }
        for (i, l) in layers.iter().enumerate() {
            if !(l.x_end > l.x_start) {
                return Err(PhysicsError::InvalidLayers(format!("layer {i} is empty")));
            }
            if i > 0 && layers[i - 1].x_end != l.x_start {
                return Err(PhysicsError::InvalidLayers(format!("gap or overlap before layer {i}")));
            }
        }
        Ok(())
    }

    /// Asserts the positivity of the storage and transport closures on `[lo, hi]`.
    pub fn check_positivity(&self, lo: f64, hi: f64) -> Result<(), PhysicsError> {
        for (i, layer) in self.layers.iter().enumerate() {
            if let Some((name, v)) = layer.closure.first_nonpositive(lo, hi, 400) {
                return Err(PhysicsError::NonPositiveClosure { layer: i, name, v });
            }
        }
        Ok(())
    }

    /// Interior layer boundaries.
    pub fn interfaces(&self) -> Vec<f64> {
        self.layers.iter().skip(1).map(|l| l.x_start).collect()
    }

    pub fn single_layer(&self) -> bool {
        self.layers.len() == 1
    }

    /// Layer whose half-open interval `[x_start, x_end)` holds `x`; `x = 1` is in the last.
    pub fn layer_index(&self, x: f64) -> Result<usize, PhysicsError> {
        if !(0.0..=1.0).contains(&x) {
            return Err(PhysicsError::OutOfDomain(x));
        }
        Ok(self.layer_index_unchecked(x))
    }

    #[inline]
    pub(crate) fn layer_index_unchecked(&self, x: f64) -> usize {
        let n = self.layers.len();
        if n == 1 {
            return 0;
        }
        self.layers[..n - 1].partition_point(|l| l.x_end <= x)
    }

    #[inline]
    pub fn closure_at(&self, x: f64) -> &CoefficientClosure {
        &self.layers[self.layer_index_unchecked(x)].closure
    }

    pub fn eval_coefficients(&self, v: f64, x: f64) -> Result<CoefficientValues, PhysicsError> {
        let layer = self.layer_index(x)?;
        Ok(self.layers[layer].closure.evaluate(v))
    }

    pub fn coupled_rhs_coefficients(&self, v: f64, theta: f64, x: f64) -> Result<CoupledRhsCoefficients, PhysicsError> {
        Ok(self.coupled_from(&self.eval_coefficients(v, x)?, theta))
    }

    #[inline]
    pub fn coupled_from(&self, c: &CoefficientValues, theta: f64) -> CoupledRhsCoefficients {
        let (fo_m, fo_t) = (self.fo_m, self.fo_t);
        CoupledRhsCoefficients {
            a_bar: fo_m / c.c_m * c.dk_m * theta,
            b_bar: fo_t * c.k_t / c.c_t,
            c_bar: fo_m * self.gamma1 * c.k_m * c.c_tm / (c.c_t * c.c_m),
            d_bar: fo_m * c.k_m / c.c_m,
            e_bar: fo_t / c.c_t * c.dk_t * theta,
            f_bar: fo_t * self.gamma2 * c.k_tm / c.c_t,
            g_bar: fo_t * self.gamma2 / c.c_t * c.dk_tm * theta,
            h_bar: fo_m * self.gamma1 * c.c_tm / (c.c_t * c.c_m) * c.dk_m * theta,
        }
    }

    pub fn to_dimensionless(&self, q: PhysicalState) -> DimensionlessState {
        let r = &self.references;
        DimensionlessState {
            u: q.temperature_k / r.temperature_k,
            v: q.vapour_pressure_pa / r.vapour_pressure_pa,
            x_star: q.x_m / r.length_m,
            t_star: q.t_s / r.time_s,
        }
    }

    pub fn to_physical(&self, s: DimensionlessState) -> PhysicalState {
        let r = &self.references;
        PhysicalState {
            temperature_k: s.u * r.temperature_k,
            vapour_pressure_pa: s.v * r.vapour_pressure_pa,
            x_m: s.x_star * r.length_m,
            t_s: s.t_star * r.time_s,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalState {
    pub temperature_k: f64,
    pub vapour_pressure_pa: f64,
    pub x_m: f64,
    pub t_s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessState {
    pub u: f64,
    pub v: f64,
    pub x_star: f64,
    pub t_star: f64,
}

/// Convective exchange coefficients of one surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceExchange {
    pub h_m_s_per_m: f64,
    pub h_t_w_per_m2_k: f64,
}

/// Physical description a dimensionless model is derived from.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalSetup {
    /// Materials with their thickness in metres, from `x = 0`.
    pub layers: Vec<(PhysicalMaterial, f64)>,
    pub left: SurfaceExchange,
    pub right: SurfaceExchange,
    pub references: References,
    pub latent_heat_j_per_kg: f64,
}

/// Fourier, Biot and coupling numbers from their definitions, with closures
/// supplied per layer.
pub fn build_dimensionless_model(
    setup: &PhysicalSetup,
    closures: Vec<CoefficientClosure>,
) -> Result<DimensionlessModel, PhysicsError> {
    let r = setup.references;
    r.validate()?;
    if setup.layers.is_empty() || closures.len() != setup.layers.len() {
        return Err(PhysicsError::InvalidLayers("one closure per layer is required".into()));
    }
    if let Some((m, _)) = setup.layers.iter().find(|(_, t)| !(*t > 0.0)) {
        return Err(PhysicsError::InvalidLayers(format!("layer {} has no thickness", m.name)));
    }
    let total: f64 = setup.layers.iter().map(|(_, t)| t).sum();
    if ((total - r.length_m) / r.length_m).abs() > 1e-12 {
        return Err(PhysicsError::InvalidLayers(format!("thicknesses sum to {total} m, reference length is {} m", r.length_m)));
    }
    let l = r.length_m;
    let surface = |s: SurfaceExchange| SurfaceNumbers {
        bi_m: s.h_m_s_per_m * l / r.k_m0_s,
        bi_t: s.h_t_w_per_m2_k * l / r.k_t0_w_per_m_k,
        bi_tm: s.h_m_s_per_m * l * setup.latent_heat_j_per_kg / r.k_tm0,
    };
    let mut layers = Vec::with_capacity(closures.len());
    let mut x = 0.0;
    for ((_, thickness), closure) in setup.layers.iter().zip(closures) {
        let end = if layers.len() + 1 == setup.layers.len() { 1.0 } else { x + thickness / l };
        layers.push(Layer { x_start: x, x_end: end, closure });
        x = end;
    }
    let model = DimensionlessModel {
        fo_m: r.time_s * r.k_m0_s / (l * l * r.c_m0_s2_per_m2),
        fo_t: r.time_s * r.k_t0_w_per_m_k / (l * l * r.c_t0_j_per_m3_k),
        gamma1: r.c_tm0 * r.vapour_pressure_pa / (r.c_t0_j_per_m3_k * r.temperature_k),
        gamma2: r.k_tm0 * r.vapour_pressure_pa / (r.k_t0_w_per_m_k * r.temperature_k),
        left: surface(setup.left),
        right: surface(setup.right),
        references: r,
        layers,
    };
    model.validate()?;
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::physics::library;

    fn constant_model() -> DimensionlessModel {
        let mut m = library::single_layer_model();
        m.layers[0].closure = CoefficientClosure::constant();
        m
    }

    #[test]
    fn constant_closure_limit() {
        let m = constant_model();
        let c = m.coupled_rhs_coefficients(1.3, 0.7, 0.4).unwrap();
        assert_eq!(c.a_bar, 0.0);
        assert_eq!(c.e_bar, 0.0);
        assert_eq!(c.g_bar, 0.0);
        assert_eq!(c.h_bar, 0.0);
        assert_eq!(c.b_bar, m.fo_t);
        assert_eq!(c.d_bar, m.fo_m);
        assert_eq!(c.c_bar, m.fo_m * m.gamma1);
        assert_eq!(c.f_bar, m.fo_t * m.gamma2);
    }

    #[test]
    fn zero_gradient_removes_gradient_terms() {
        let m = library::multilayer_model();
        for x in [0.1, 0.9] {
            let c = m.coupled_rhs_coefficients(1.1, 0.0, x).unwrap();
            assert_eq!([c.a_bar, c.e_bar, c.g_bar, c.h_bar], [0.0; 4]);
        }
    }

    #[test]
    fn single_layer_is_position_independent() {
        let m = library::single_layer_model();
        let a = m.eval_coefficients(1.2, 0.0).unwrap();
        for x in [0.3, 0.83, 1.0] {
            assert_eq!(m.eval_coefficients(1.2, x).unwrap(), a);
        }
        assert!(m.eval_coefficients(1.2, 1.01).is_err());
    }

    #[test]
    fn lookup_is_half_open() {
        let m = library::multilayer_model();
        let xi = m.interfaces()[0];
        assert_eq!(m.layer_index(xi).unwrap(), 1);
        assert_eq!(m.layer_index(xi - 1e-12).unwrap(), 0);
        assert_eq!(m.layer_index(1.0).unwrap(), 1);
        assert_eq!(m.layer_index(0.0).unwrap(), 0);
        let below = m.eval_coefficients(1.0, xi - 1e-9).unwrap();
        let above = m.eval_coefficients(1.0, xi).unwrap();
        assert_ne!(below.k_m, above.k_m);
    }

    #[test]
    fn rejects_bad_layers() {
        let mut m = library::multilayer_model();
        m.layers[1].x_start = 0.9;
        assert!(matches!(m.validate(), Err(PhysicsError::InvalidLayers(_))));
        let mut m = library::single_layer_model();
        m.fo_t = 0.0;
        assert!(m.validate().is_err());
    }

    #[test]
    fn dimensional_round_trip() {
        let m = library::single_layer_model();
        let q = PhysicalState { temperature_k: 297.3, vapour_pressure_pa: 1412.6, x_m: 0.0371, t_s: 12345.6 };
        let back = m.to_physical(m.to_dimensionless(q));
        for (a, b) in [
            (q.temperature_k, back.temperature_k),
            (q.vapour_pressure_pa, back.vapour_pressure_pa),
            (q.x_m, back.x_m),
            (q.t_s, back.t_s),
        ] {
            assert!((a - b).abs() <= 1e-12 * a.abs());
        }
    }
}
