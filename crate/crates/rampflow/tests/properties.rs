//! Property tests over randomized profiles and downstream states.

use proptest::prelude::*;
use rampflow::geometry::{Geometry, RampProfile};
use rampflow::problem1::{newton_busemann_pressure, wall_weights};
use rampflow::problem2::{free_layer_closed_form, separation_data, DeadGasSpec, LayerShape};
use rampflow::problem3::{attached_layer, JetSpec};

fn power_geom(coeff: f64, exponent: f64) -> Geometry {
    Geometry::new(RampProfile::power(coeff, exponent).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The arc integral never decreases and stays below the x span.
    #[test]
    fn arc_integral_monotone(
        coeff in 0.1f64..3.0,
        exponent in 0.15f64..1.0,
        a in 0.0f64..10.0,
        d in 0.0f64..5.0,
    ) {
        let g = power_geom(coeff, exponent);
        let h1 = g.h(a).unwrap();
        let h2 = g.h(a + d).unwrap();
        prop_assert!(h2 + 1e-12 >= h1);
        prop_assert!(h1 >= -1e-15 && h2 <= a + d + 1e-9);
    }

    /// Every straight wedge bears the squared sine of its angle.
    #[test]
    fn wedge_load_is_sine_squared(slope in 0.05f64..3.0, x in 0.01f64..50.0) {
        let g = Geometry::new(RampProfile::wedge(slope).unwrap());
        let w = newton_busemann_pressure(&g, x).unwrap();
        let theta = slope.atan();
        prop_assert!((w.value - theta.sin().powi(2)).abs() <= 1e-13);
    }

    /// Wall weights satisfy slip, captured mass and the flux ratios.
    #[test]
    fn wall_weight_relations(
        coeff in 0.3f64..2.0,
        exponent in 0.3f64..1.0,
        x in 0.05f64..8.0,
        e0 in 0.6f64..4.0,
    ) {
        let g = power_geom(coeff, exponent);
        let (b, d1, _) = g.eval(x).unwrap();
        let w = wall_weights(&g, x, e0).unwrap();
        let r = (1.0 + d1 * d1).sqrt();
        prop_assert!((w.w_m[0] * r - b).abs() <= 1e-12 * (1.0 + b));
        for i in 0..4 {
            prop_assert!((w.w_n[i] - d1 * w.w_m[i]).abs() <= 1e-12 * (1.0 + w.w_m[i].abs()));
        }
        prop_assert!((w.w_m[3] / w.w_m[0] - e0).abs() <= 1e-12 * e0);
    }

    /// The dead-gas layer solves its slope equation and attaches C¹.
    #[test]
    fn dead_gas_layer_solves_its_equation(
        p_bar in 0.0f64..0.98,
        x_star in 0.5f64..5.0,
        xi in 0.0f64..20.0,
    ) {
        let g = power_geom(1.0, 0.5);
        let spec = DeadGasSpec::with_pressure(x_star, p_bar).unwrap();
        let layer = free_layer_closed_form(&g, &spec, 1.0, x_star + 25.0).unwrap();
        let LayerShape::Graph(seg) = &layer.shape else { panic!("graph expected") };
        let (b_star, beta, a) = separation_data(&g, x_star).unwrap();
        let x = x_star + xi;
        let s = seg.s(x).unwrap();
        let sp = seg.slope(x).unwrap();
        let lhs = p_bar * xi + beta * a;
        let rhs = sp * ((1.0 - p_bar) * (s - b_star) + a);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + lhs.abs()));
        prop_assert!((seg.s(x_star).unwrap() - b_star).abs() <= 1e-12);
        prop_assert!((seg.slope(x_star).unwrap() - beta).abs() <= 1e-12);
    }

    /// Attached jet layers stay in the entropy band with positive
    /// denominators whenever the hypotheses hold.
    #[test]
    fn attached_layer_entropy_band(
        rho in 0.2f64..4.0,
        u in 0.3f64..3.0,
        dv in 0.0f64..2.0,
        x_max in 3.0f64..40.0,
    ) {
        let g = power_geom(1.0, 0.5);
        let beta = g.eval(2.0).unwrap().1;
        let v = u * (beta + dv);
        let spec = JetSpec { x_star: 2.0, rho, u, v, e: 1.0 };
        let layer = attached_layer(&g, &spec, 1.0, x_max).unwrap();
        prop_assert!(layer.entropy.satisfied());
        prop_assert!(layer.entropy.min_slope >= -1e-12);
        prop_assert!(layer.entropy.max_slope <= v / u + 1e-12);
        prop_assert!(layer.entropy.min_mass > 0.0);
    }
}
