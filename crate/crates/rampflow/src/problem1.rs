//! Infinite-ramp construction: concentration weights on the wall, the
//! limiting pressure law with its centrifugal term, layer velocity and
//! density, force on the body, and the assembled measure solution.
//!
//! With the oncoming state normalised to `(rho, u, v, E) = (1, 1, 0, E0)`,
//! everything reduces to the wall functions `b, b', b''` and the arc
//! integral `H`:
//!
//! - wall load      `w_p = (b'' H + b'^2 sqrt(1+b'^2)) / (1+b'^2)^{3/2}`
//! - mass weight    `w_m0 = b / sqrt(1+b'^2)`
//! - x-momentum     `w_m1 = H / (1+b'^2)`
//! - layer speed    `u|_W = H / (b sqrt(1+b'^2))`, `v = b' u`
//! - density weight `w_rho = b^2 / H`.

use crate::error::{Error, Result};
use crate::geometry::{self, Geometry, RampProfile};
use crate::quad;
use crate::solution::{
    Boundary, BulkRegion, Classification, CurveSegment, DiracCurve, Extent, FlowState, Inflow,
    MeasureSolution, ProblemTag, WallPressure, WallSegment,
};
use serde::{Deserialize, Serialize};

/// Wall load weight; `admissible` is false where the load is not positive
/// (the value is still reported so sweeps can map the failure set).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PressureWeight {
    pub value: f64,
    pub admissible: bool,
}

/// Limiting wall pressure per unit arc length at `x > 0`.
pub fn newton_busemann_pressure(geom: &Geometry, x: f64) -> Result<PressureWeight> {
    if x <= 0.0 {
        return Err(Error::InvalidArgument("wall pressure is defined for x > 0".into()));
    }
    let (_, d1, d2) = geom.eval(x)?;
    let h = geom.h(x)?;
    let opb = 1.0 + d1 * d1;
    let value = (d2 * h + d1 * d1 * opb.sqrt()) / (opb * opb.sqrt());
    Ok(PressureWeight { value, admissible: value > 0.0 })
}

/// Full set of arc-length weight densities carried by the wall layer.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct WallWeights {
    /// `w_m^0..w_m^3`.
    pub w_m: [f64; 4],
    /// `w_n^i = b' w_m^i` (slip).
    pub w_n: [f64; 4],
    pub w_p: PressureWeight,
    /// `b^2 / H`; zero for an empty layer.
    pub w_rho: f64,
}

/// Weight densities at `x > 0`.
pub fn wall_weights(geom: &Geometry, x: f64, e0: f64) -> Result<WallWeights> {
    if x <= 0.0 {
        return Err(Error::InvalidArgument("wall weights are defined for x > 0".into()));
    }
    let (b, d1, _) = geom.eval(x)?;
    let h = geom.h(x)?;
    let r = (1.0 + d1 * d1).sqrt();
    let w_m0 = b / r;
    let w_m1 = h / (1.0 + d1 * d1);
    let w_m2 = d1 * w_m1;
    let w_m3 = e0 * w_m0;
    let w_rho = if h > 0.0 {
        b * b / h
    } else if b == 0.0 {
        0.0
    } else {
        return Err(Error::DegenerateLayer {
            x,
            why: "H = 0 with b > 0 cannot occur on an admissible wall".into(),
        });
    };
    Ok(WallWeights {
        w_m: [w_m0, w_m1, w_m2, w_m3],
        w_n: [d1 * w_m0, d1 * w_m1, d1 * w_m2, d1 * w_m3],
        w_p: newton_busemann_pressure(geom, x)?,
        w_rho,
    })
}

/// Velocity and energy of the concentrated layer on the wall.
pub fn layer_state(geom: &Geometry, x: f64, e0: f64) -> Result<(f64, f64, f64)> {
    let (b, d1, _) = geom.eval(x)?;
    let h = geom.h(x)?;
    if b <= 0.0 || h <= 0.0 {
        return Err(Error::DegenerateLayer { x, why: "empty layer (b = 0 or H = 0)".into() });
    }
    let u = h / (b * (1.0 + d1 * d1).sqrt());
    Ok((u, d1 * u, e0))
}

/// Force on the body over `[x_lo, x_hi]`: `Fx = ∫ w_p b' dx`, `Fy = -∫ w_p dx`.
pub fn drag_lift(geom: &Geometry, x_lo: f64, x_hi: f64, tol: f64) -> Result<(f64, f64)> {
    if !(0.0 <= x_lo && x_lo < x_hi && x_hi <= geom.x_end()) {
        return Err(Error::InvalidArgument("need 0 <= x_lo < x_hi <= x_end".into()));
    }
    let wp = |t: f64| {
        let (_, d1, d2) = geom.eval(t).expect("t in domain");
        let h = geom.h(t).expect("t in domain");
        let opb = 1.0 + d1 * d1;
        (d2 * h + d1 * d1 * opb.sqrt()) / (opb * opb.sqrt())
    };
    let fx = quad::integrate(&|t| wp(t) * geom.eval(t).expect("t in domain").1, x_lo, x_hi, tol)?;
    let fy = -quad::integrate(&wp, x_lo, x_hi, tol)?;
    Ok((fx, fy))
}

/// The unique ramp bearing uniform load `p` per unit arc length: the wedge
/// of slope `sqrt(p/(1-p))`. The construction is verified pointwise before
/// the profile is returned.
pub fn uniform_pressure_ramp(p: f64) -> Result<RampProfile> {
    if !(0.0 < p && p < 1.0) {
        return Err(Error::InvalidArgument(format!("uniform pressure needs p in (0,1), got {p}")));
    }
    let slope = (p / (1.0 - p)).sqrt();
    let profile = RampProfile::wedge(slope)?;
    let geom = Geometry::new(profile.clone());
    for i in 1..=16 {
        let x = i as f64;
        // d/dx H is constant for a wedge, so H''H + (H')^2 must equal p.
        let hp = geom.h(x)? / x;
        let residual = (hp * hp - p).abs();
        if residual > 1e-12 {
            return Err(Error::Verify(format!(
                "uniform-load identity violated at x = {x} (residual {residual:e})"
            )));
        }
    }
    Ok(profile)
}

/// One row of the per-x wall table exported by the CLI.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct WallRow {
    pub x: f64,
    pub b: f64,
    pub db: f64,
    pub h: f64,
    pub w_p: f64,
    pub w_m: [f64; 4],
    pub w_n: [f64; 4],
    pub w_rho: f64,
    pub u_w: f64,
    pub v_w: f64,
}

pub fn wall_rows(geom: &Geometry, e0: f64, xs: &[f64]) -> Result<Vec<WallRow>> {
    xs.iter()
        .map(|&x| {
            let w = wall_weights(geom, x, e0)?;
            let (b, db, _) = geom.eval(x)?;
            let (u_w, v_w, _) = layer_state(geom, x, e0).unwrap_or((0.0, 0.0, e0));
            Ok(WallRow {
                x,
                b,
                db,
                h: geom.h(x)?,
                w_p: w.w_p.value,
                w_m: w.w_m,
                w_n: w.w_n,
                w_rho: w.w_rho,
                u_w,
                v_w,
            })
        })
        .collect()
}

/// Assemble the infinite-ramp measure solution on `[0, x_max]`.
pub fn solve_problem1(profile: &RampProfile, e0: f64, x_max: f64) -> Result<MeasureSolution> {
    if e0 <= 0.5 {
        return Err(Error::InvalidArgument("E0 must exceed 1/2".into()));
    }
    let geom = Geometry::new(profile.clone());
    let x_lim = x_max.min(geom.x_end());
    if !(x_lim > 0.0) {
        return Err(Error::InvalidArgument("x_max must be positive".into()));
    }
    let report = geometry::check_admissibility(&geom, 0.0, x_lim, 512)?;
    if let Some(x) = report.first_failure {
        return Err(Error::Inadmissible { x });
    }
    let b_top = geom.eval(x_lim)?.0;
    let y_max = b_top + x_lim.max(2.0);
    let extent = Extent { x_max: x_lim, y_min: 0.0, y_max };
    let regions = vec![BulkRegion {
        name: "upstream".into(),
        x_from: 0.0,
        x_to: x_lim,
        lower: Boundary::Wall { geometry: geom.clone() },
        upper: Boundary::Const { y: y_max },
        state: FlowState::pressureless(1.0, 1.0, 0.0, e0),
        gamma: 1.0,
    }];
    let curves = vec![DiracCurve::new(vec![CurveSegment::Wall(WallSegment {
        geometry: geom.clone(),
        e0,
        x_from: 0.0,
        x_to: x_lim,
    })])];
    Ok(MeasureSolution {
        problem: ProblemTag::InfiniteRamp,
        extent,
        regions,
        curves,
        wall_pressure: Some(WallPressure { geometry: geom, x_from: 0.0, x_to: x_lim, scale: 1.0 }),
        cliff_pressure: None,
        inflows: vec![Inflow {
            name: "upstream".into(),
            x: 0.0,
            y_from: 0.0,
            y_to: y_max,
            flux: [1.0, 1.0, 0.0, e0],
        }],
        classification: Classification::Regular,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn sqrt_geom() -> Geometry {
        Geometry::new(RampProfile::power(1.0, 0.5).unwrap())
    }

    #[test]
    fn wedge_pressure_is_sine_squared() {
        for deg in (5..=45).step_by(5) {
            let th = (deg as f64).to_radians();
            let g = Geometry::new(RampProfile::wedge(th.tan()).unwrap());
            for x in [0.5, 1.0, 3.0, 10.0] {
                let w = newton_busemann_pressure(&g, x).unwrap();
                assert!(w.admissible);
                assert_abs_diff_eq!(w.value, th.sin().powi(2), epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn sqrt_ramp_pressure_at_two() {
        let w = newton_busemann_pressure(&sqrt_geom(), 2.0).unwrap();
        assert_abs_diff_eq!(w.value, 1.0 / 27.0, epsilon = 1e-13);
        assert!(w.admissible);
    }

    #[test]
    fn flat_wall_bears_no_force_but_is_flagged() {
        let g = Geometry::new(RampProfile::wedge(0.0).unwrap());
        let w = newton_busemann_pressure(&g, 1.0).unwrap();
        assert_eq!(w.value, 0.0);
        assert!(!w.admissible);
    }

    #[test]
    fn wall_weights_sqrt_at_two() {
        let w = wall_weights(&sqrt_geom(), 2.0, 1.0).unwrap();
        assert_abs_diff_eq!(w.w_m[0], 4.0 / 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(w.w_m[1], 8.0 / 9.0, epsilon = 1e-14);
        assert_abs_diff_eq!(w.w_rho, 2.0, epsilon = 1e-13);
        // A flat wall carries no layer at all.
        let flat = Geometry::new(RampProfile::wedge(0.0).unwrap());
        assert!(layer_state(&flat, 1.0, 1.0).is_err());
        let (u, v, e) = layer_state(&sqrt_geom(), 2.0, 1.0).unwrap();
        assert_abs_diff_eq!(u, 2.0 / 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(v, 2.0f64.sqrt() / 6.0, epsilon = 1e-14);
        assert_eq!(e, 1.0);
    }

    #[test]
    fn weight_invariants_hold_on_generic_wedge() {
        let th = 0.4321f64;
        let g = Geometry::new(RampProfile::wedge(th.tan()).unwrap());
        for i in 1..=20 {
            let x = 0.3 * i as f64;
            let (b, d1, _) = g.eval(x).unwrap();
            let w = wall_weights(&g, x, 1.7).unwrap();
            let r = (1.0 + d1 * d1).sqrt();
            // Captured mass equals the wall height.
            assert_abs_diff_eq!(w.w_m[0] * r, b, epsilon = 1e-13 * (1.0 + b));
            // Slip on every component.
            for i in 0..4 {
                assert_abs_diff_eq!(w.w_n[i], d1 * w.w_m[i], epsilon = 1e-14 * (1.0 + w.w_m[i]));
            }
            // Flux ratios reproduce the layer state.
            let (u, v, e) = layer_state(&g, x, 1.7).unwrap();
            assert_abs_diff_eq!(w.w_m[1] / w.w_m[0], u, epsilon = 1e-13);
            assert_abs_diff_eq!(w.w_m[2] / w.w_m[0], v, epsilon = 1e-13);
            assert_abs_diff_eq!(w.w_m[3] / w.w_m[0], e, epsilon = 1e-13);
            // Tangency.
            assert_abs_diff_eq!(v - d1 * u, 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn flux_weights_vanish_at_the_origin() {
        // The concentrated layer starts empty: every flux weight tends to
        // zero with x (the density weight b^2/H needs no such limit).
        for geom in [sqrt_geom(), Geometry::new(RampProfile::wedge(0.7).unwrap())] {
            let w = wall_weights(&geom, 1e-9, 1.0).unwrap();
            for k in 0..4 {
                assert!(w.w_m[k].abs() < 1e-4, "w_m[{k}] = {}", w.w_m[k]);
                assert!(w.w_n[k].abs() < 1e-4, "w_n[{k}] = {}", w.w_n[k]);
            }
        }
    }

    #[test]
    fn momentum_bookkeeping_by_finite_differences() {
        // d/dx (w_m1 sqrt(1+b'^2)) + w_p b' = b', central differences.
        let g = sqrt_geom();
        let p_flux = |x: f64| {
            let w = wall_weights(&g, x, 1.0).unwrap();
            let d1 = g.eval(x).unwrap().1;
            w.w_m[1] * (1.0 + d1 * d1).sqrt()
        };
        let dx = 1e-5;
        for x in [0.5, 1.0, 2.0, 5.0] {
            let lhs = (p_flux(x + dx) - p_flux(x - dx)) / (2.0 * dx);
            let (_, d1, _) = g.eval(x).unwrap();
            let wp = newton_busemann_pressure(&g, x).unwrap().value;
            assert_abs_diff_eq!(lhs + wp * d1, d1, epsilon = 1e-8);
        }
    }

    #[test]
    fn drag_examples() {
        let th = (30.0f64).to_radians();
        let g = Geometry::new(RampProfile::wedge(th.tan()).unwrap());
        let (fx, fy) = drag_lift(&g, 0.0, 1.0, 1e-12).unwrap();
        assert_abs_diff_eq!(fx, 0.1443376, epsilon = 1e-7);
        assert_abs_diff_eq!(fy, -th.sin().powi(2), epsilon = 1e-12);

        let flat = Geometry::new(RampProfile::wedge(0.0).unwrap());
        let (fx, fy) = drag_lift(&flat, 0.0, 1.0, 1e-12).unwrap();
        assert_eq!((fx, fy), (0.0, 0.0));

        // Momentum balance gives the exact values for the sqrt ramp:
        // Fx = b(2) - H(2)/sqrt(1+b'(2)^2) and Fy = -b'(2) H(2)/sqrt(1+b'(2)^2).
        let g = sqrt_geom();
        let (fx, fy) = drag_lift(&g, 0.0, 2.0, 1e-11).unwrap();
        assert_abs_diff_eq!(fx, 2.0f64.sqrt() / 3.0, epsilon = 1e-9);
        assert_abs_diff_eq!(fy, -1.0 / 3.0, epsilon = 1e-9);
    }

    #[test]
    fn uniform_load_ramp() {
        let p = uniform_pressure_ramp(0.5).unwrap();
        let g = Geometry::new(p);
        assert_abs_diff_eq!(g.eval(1.0).unwrap().1, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            newton_busemann_pressure(&g, 3.0).unwrap().value,
            0.5,
            epsilon = 1e-14
        );

        let quarter = uniform_pressure_ramp(0.25).unwrap();
        let g = Geometry::new(quarter);
        assert_abs_diff_eq!(g.eval(1.0).unwrap().1, (30.0f64).to_radians().tan(), epsilon = 1e-13);

        assert!(uniform_pressure_ramp(0.0).is_err());
        assert!(uniform_pressure_ramp(1.0).is_err());
    }

    #[test]
    fn solve_rejects_flat_wall() {
        let flat = RampProfile::wedge(0.0).unwrap();
        match solve_problem1(&flat, 1.0, 4.0) {
            Err(Error::Inadmissible { x }) => assert_eq!(x, 0.0),
            other => panic!("expected inadmissible, got {other:?}"),
        }
    }

    #[test]
    fn solve_wedge_solution_shape() {
        let th = (30.0f64).to_radians();
        let sol = solve_problem1(&RampProfile::wedge(th.tan()).unwrap(), 1.0, 4.0).unwrap();
        assert_eq!(sol.classification, Classification::Regular);
        let wp = sol.wall_pressure.as_ref().unwrap();
        for x in [0.5, 2.0, 3.9] {
            assert_abs_diff_eq!(wp.w_p(x).unwrap(), th.sin().powi(2), epsilon = 1e-14);
        }
        // Layer mass flux at x equals x tan(theta).
        let seg = &sol.curves[0].segments[0];
        let pt = seg.at(3.0).unwrap();
        assert_abs_diff_eq!(pt.potentials[0], 3.0 * th.tan(), epsilon = 1e-13);
    }
}
