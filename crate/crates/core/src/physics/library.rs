//! Built-in closures and dimensionless numbers of the benchmark walls.

use super::closure::{CoefficientClosure, ScalarClosure};
use super::material::PhysicalMaterial;
use super::model::{DimensionlessModel, Layer, PhysicalSetup, References, SurfaceExchange, SurfaceNumbers};

fn r(num: &[f64], den: &[f64]) -> ScalarClosure {
    ScalarClosure::rational(num, den)
}

pub fn load_bearing_closure() -> CoefficientClosure {
    CoefficientClosure {
        c_m: r(
            &[169.5, -814.2, 534.4, 2625.0, -4642.0, 2217.0],
            &[1.0, 2182.0, -12520.0, 27210.0, -26680.0, 10050.0],
        ),
        c_t: r(&[246.6, -778.9, 656.9], &[1.0, -41.37, 395.2, -985.6, 760.7]),
        c_tm: r(&[4207.0, -24860.0, 50920.0, -43030.0, 14570.0], &[1.0, 8614.0, -28190.0, 23480.0]),
        k_m: ScalarClosure::PowerLaw { scale: 4.045, exponent: 6.448, offset: 16.23 },
        k_t: r(&[15.3, -46.53, 38.04], &[1.0, -10.46, 46.24, -85.34, 56.1]),
        k_tm: r(&[1.644, -7.013, 7.505], &[1.0, -3.133, 4.859, -8.003, 7.408]),
    }
}

/// First layer of the two-layer wall, scaled by the two-layer references.
pub fn multilayer_bearing_closure() -> CoefficientClosure {
    CoefficientClosure {
        c_m: r(
            &[-0.1244, 0.4949, -0.6025, 0.1802, 0.06364],
            &[1.0, -5.101, 9.802, -8.408, 2.713, 0.0055],
        ),
        c_t: r(
            &[16330.0, -80020.0, 127900.0, -75310.0, 17920.0],
            &[1.0, 16340.0, -80050.0, 127900.0, -75340.0, 17930.0],
        ),
        c_tm: r(
            &[-0.124, 0.4937, -0.6015, 0.18, 0.0638],
            &[1.0, -5.103, 9.812, -8.42, 2.719, 0.0055],
        ),
        k_m: r(
            &[-0.8682, 6.371, -10.02, 1.842, 3.542],
            &[1.0, -7.075, 18.65, -20.95, 6.635, 2.601],
        ),
        k_t: r(
            &[4692.0, -17720.0, 16330.0, -3385.0, 8137.0],
            &[1.0, 4678.0, -17650.0, 16210.0, -3336.0, 8152.0],
        ),
        k_tm: r(
            &[-1002.0, 1727.0, -94.85, 253.6, 2091.0],
            &[1.0, -1002.0, 1714.0, -70.93, 240.7, 2092.0],
        ),
    }
}

pub fn finishing_closure() -> CoefficientClosure {
    CoefficientClosure {
        c_m: r(
            &[-11870.0, 36160.0, -27730.0, 11480.0, 878.0],
            &[1.0, 223500.0, -212400.0, 172100.0, 41290.0, 14.34],
        ),
        c_t: r(
            &[-372.3, 203.7, 344.9, 956.0, 1440.0],
            &[1.0, -320.0, -975.6, 2050.0, 1061.0, 3012.0],
        ),
        c_tm: r(
            &[-65880.0, 196800.0, -163100.0, 49850.0, 7210.0],
            &[1.0, -105800.0, 583000.0, -146000.0, 336500.0, 119.1],
        ),
        k_m: r(
            &[-7049.0, -8193.0, 36200.0, -10330.0, 55820.0],
            &[1.0, -2888.0, 7947.0, -7103.0, 3269.0, 4471.0],
        ),
        k_t: r(
            &[139.5, -668.0, -28.81, 1191.0, 974.1],
            &[1.0, 333.6, -1308.0, 448.4, 943.6, 1468.0],
        ),
        k_tm: r(
            &[-77400.0, 202700.0, -245700.0, 239400.0, 120600.0],
            &[1.0, -8436.0, 22580.0, -26780.0, 25320.0, 12160.0],
        ),
    }
}

pub fn wood_fibre_closure() -> CoefficientClosure {
    CoefficientClosure {
        c_m: ScalarClosure::linear(-0.01799, 1.018),
        c_t: ScalarClosure::linear(0.005168, 0.9948),
        c_tm: ScalarClosure::linear(-0.01799, 1.018),
        k_m: ScalarClosure::linear(0.007343, 0.9927),
        k_t: ScalarClosure::linear(7.343e-4, 0.9994),
        k_tm: ScalarClosure::linear(0.007343, 0.9927),
    }
}

pub fn single_layer_references() -> References {
    References {
        temperature_k: 293.15,
        vapour_pressure_pa: 1636.53,
        time_s: 3600.0,
        length_m: 0.1,
        c_m0_s2_per_m2: 0.061,
        c_t0_j_per_m3_k: 8.6125e5,
        c_tm0: 5.0963e3,
        k_m0_s: 5.4712e-9,
        k_t0_w_per_m_k: 0.3873,
        k_tm0: 0.0154,
    }
}

pub fn multilayer_references() -> References {
    References {
        temperature_k: 293.15,
        vapour_pressure_pa: 1160.0,
        time_s: 3600.0,
        length_m: 0.12,
        c_m0_s2_per_m2: 0.061,
        c_t0_j_per_m3_k: 1.6862e6,
        c_tm0: 5.0963e3,
        k_m0_s: 5.4712e-9,
        k_t0_w_per_m_k: 0.5021,
        k_tm0: 0.0161,
    }
}

pub fn wood_fibre_references() -> References {
    References {
        temperature_k: 293.15,
        vapour_pressure_pa: 1166.91,
        time_s: 3600.0,
        length_m: 0.16,
        c_m0_s2_per_m2: 1.72e-4,
        c_t0_j_per_m3_k: 163073.8,
        c_tm0: 211.7,
        k_m0_s: 3.31e-11,
        k_t0_w_per_m_k: 6.98e-2,
        k_tm0: 8.27e-5,
    }
}

pub fn single_layer_model() -> DimensionlessModel {
    DimensionlessModel {
        fo_m: 3.2e-2,
        fo_t: 1.6e-1,
        gamma1: 2.3e-2,
        gamma2: 1.58e-1,
        left: SurfaceNumbers { bi_m: 3.65, bi_t: 6.45, bi_tm: 0.13 },
        right: SurfaceNumbers { bi_m: 0.55, bi_t: 2.06, bi_tm: 0.02 },
        references: single_layer_references(),
        layers: vec![Layer { x_start: 0.0, x_end: 1.0, closure: load_bearing_closure() }],
    }
}

/// Interface of the two-layer wall: 10 cm of bearing material in a 12 cm wall.
pub const MULTILAYER_INTERFACE: f64 = 10.0 / 12.0;

pub fn multilayer_model() -> DimensionlessModel {
    DimensionlessModel {
        fo_m: 0.07,
        fo_t: 0.02,
        gamma1: 0.01,
        gamma2: 0.13,
        left: SurfaceNumbers { bi_m: 4.4, bi_t: 6.0, bi_tm: 0.1 },
        right: SurfaceNumbers { bi_m: 0.6, bi_t: 2.0, bi_tm: 0.02 },
        references: multilayer_references(),
        layers: vec![
            Layer { x_start: 0.0, x_end: MULTILAYER_INTERFACE, closure: multilayer_bearing_closure() },
            Layer { x_start: MULTILAYER_INTERFACE, x_end: 1.0, closure: finishing_closure() },
        ],
    }
}

pub fn wood_fibre_model() -> DimensionlessModel {
    // surface exchange is replaced by measured surface values
    let dirichlet = SurfaceNumbers { bi_m: 1.0, bi_t: 1.0, bi_tm: 1.0 };
    DimensionlessModel {
        fo_m: 0.02,
        fo_t: 0.06,
        gamma1: 5.17e-3,
        gamma2: 7.72e-3,
        left: dirichlet,
        right: dirichlet,
        references: wood_fibre_references(),
        layers: vec![Layer { x_start: 0.0, x_end: 1.0, closure: wood_fibre_closure() }],
    }
}

/// Physical data of the single-layer wall with the surface coefficients that
/// produce its Biot numbers.
pub fn single_layer_setup() -> PhysicalSetup {
    PhysicalSetup {
        layers: vec![(PhysicalMaterial::load_bearing(), 0.1)],
        left: SurfaceExchange { h_m_s_per_m: 2e-7, h_t_w_per_m2_k: 25.0 },
        right: SurfaceExchange { h_m_s_per_m: 3e-8, h_t_w_per_m2_k: 8.0 },
        references: single_layer_references(),
        latent_heat_j_per_kg: 2.5e6,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::physics::model::build_dimensionless_model;

    fn rounds_to(value: f64, printed: f64, digits: i32) -> bool {
        let scale = 10f64.powi(digits - 1 - printed.abs().log10().floor() as i32);
        (value * scale).round() == (printed * scale).round()
    }

    #[test]
    fn single_layer_numbers_from_definitions() {
        let m = build_dimensionless_model(&single_layer_setup(), vec![load_bearing_closure()]).unwrap();
        assert!(rounds_to(m.fo_t, 0.16, 2), "{}", m.fo_t);
        assert!((m.fo_m / 0.032 - 1.0).abs() < 0.01, "{}", m.fo_m);
        assert!((m.left.bi_m / 3.65 - 1.0).abs() < 0.01, "{}", m.left.bi_m);
        assert!((m.left.bi_t / 6.45 - 1.0).abs() < 0.01, "{}", m.left.bi_t);
        assert!((m.right.bi_t / 2.06 - 1.0).abs() < 0.01, "{}", m.right.bi_t);
    }

    #[test]
    fn coupling_ratios_follow_the_lower_reference_pressure() {
        let mut setup = single_layer_setup();
        setup.references.vapour_pressure_pa = 1166.91;
        let m = build_dimensionless_model(&setup, vec![load_bearing_closure()]).unwrap();
        assert!(rounds_to(m.gamma2, 0.158, 3), "{}", m.gamma2);
        assert!((m.gamma1 / 0.023 - 1.0).abs() < 0.03, "{}", m.gamma1);
    }

    #[test]
    fn doubling_length_scales_numbers() {
        let setup = single_layer_setup();
        let a = build_dimensionless_model(&setup, vec![load_bearing_closure()]).unwrap();
        let mut longer = setup.clone();
        longer.layers[0].1 *= 2.0;
        longer.references.length_m *= 2.0;
        let b = build_dimensionless_model(&longer, vec![load_bearing_closure()]).unwrap();
        for (x, y) in [(a.left.bi_m, b.left.bi_m), (a.left.bi_t, b.left.bi_t), (a.right.bi_tm, b.right.bi_tm)] {
            assert!((y / x - 2.0).abs() < 1e-12);
        }
        assert!((b.fo_t / a.fo_t - 0.25).abs() < 1e-12);
        assert!((b.fo_m / a.fo_m - 0.25).abs() < 1e-12);
    }

    #[test]
    fn rejects_invalid_reference() {
        let mut setup = single_layer_setup();
        setup.references.k_m0_s = 0.0;
        assert!(build_dimensionless_model(&setup, vec![load_bearing_closure()]).is_err());
    }

    #[test]
    fn load_bearing_moisture_conductivity_at_one() {
        let m = single_layer_model();
        assert!((m.eval_coefficients(1.0, 0.5).unwrap().k_m - 20.275).abs() < 1e-12);
    }

    #[test]
    fn closures_positive_over_operating_ranges() {
        single_layer_model().check_positivity(0.5, 2.0).unwrap();
        multilayer_model().check_positivity(0.4, 1.8).unwrap();
        wood_fibre_model().check_positivity(0.2, 2.0).unwrap();
    }

    #[test]
    fn closure_derivatives_match_central_differences() {
        let cases = [
            (load_bearing_closure(), 0.5, 2.0),
            (multilayer_bearing_closure(), 0.4, 1.8),
            (finishing_closure(), 0.4, 1.8),
            (wood_fibre_closure(), 0.2, 2.0),
        ];
        for (closure, lo, hi) in cases {
            for k in 0..100 {
                let v = lo + (hi - lo) * k as f64 / 99.0;
                for (name, c) in closure.named() {
                    let h = 1e-6 * v.max(1.0);
                    let fd = (c.value(v + h) - c.value(v - h)) / (2.0 * h);
                    let d = c.derivative(v);
                    assert!((fd - d).abs() <= 1e-6 * d.abs().max(1.0), "{name} at {v}: {fd} vs {d}");
                }
            }
        }
    }
}
