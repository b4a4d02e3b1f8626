//! Finite ramp with a dead-gas zone: the free layer separating the oncoming
//! flow from static gas at pressure `p_bar`, in closed form and by adaptive
//! integration, plus the assembled measure solution.
//!
//! Writing `A = H(x*)/sqrt(1+b'(x*)^2)` and `xi = x - x*`, the layer slope
//! satisfies
//!
//! `s' [ (1-p)(s - b*) + A ] = p xi + b'(x*) A`,  `s(x*) = b(x*)`,
//!
//! whose solution is a parabola at `p = 1`, a radical graph for `p != 1`,
//! and (for `p > 1`) the lower branch of an ellipse that turns vertical at a
//! finite point: the solution cannot be continued past it.

use crate::error::{Error, Result};
use crate::geometry::{self, Geometry, RampProfile};
use crate::ode::{self, OdeOptions};
use crate::solution::{
    Boundary, BulkRegion, Classification, CliffPressure, CurveSegment, DeadGasEllipseSegment,
    DeadGasGraphSegment, DiracCurve, Extent, FlowState, Inflow, MeasureSolution, ProblemTag,
    WallPressure, WallSegment,
};
use serde::{Deserialize, Serialize};

/// Static gas behind the cliff. The pressure may be given directly or be
/// derived from `(rho, E, gamma)`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DeadGasSpec {
    pub x_star: f64,
    pub p_bar: f64,
    pub rho: f64,
    pub e: f64,
    pub gamma: f64,
}

impl DeadGasSpec {
    /// Spec from the pressure itself; the stored bulk state is chosen
    /// consistently with a diatomic exponent (pressureless when `p_bar = 0`).
    pub fn with_pressure(x_star: f64, p_bar: f64) -> Result<Self> {
        if !(x_star > 0.0) {
            return Err(Error::InvalidArgument("x_star must be positive".into()));
        }
        if !(p_bar >= 0.0) {
            return Err(Error::InvalidArgument("p_bar must be >= 0".into()));
        }
        let (gamma, e) = if p_bar == 0.0 { (1.0, 1.0) } else { (1.4, 3.5 * p_bar) };
        Ok(DeadGasSpec { x_star, p_bar, rho: 1.0, e, gamma })
    }

    /// Spec from the static state, solving the pressure from the state law.
    pub fn from_static_state(x_star: f64, rho: f64, e: f64, gamma: f64) -> Result<Self> {
        if !(x_star > 0.0 && rho > 0.0 && e > 0.0 && gamma >= 1.0) {
            return Err(Error::InvalidArgument(
                "need x_star > 0, rho > 0, E > 0, gamma >= 1".into(),
            ));
        }
        let p_bar = (gamma - 1.0) / gamma * rho * e;
        Ok(DeadGasSpec { x_star, p_bar, rho, e, gamma })
    }
}

/// Which of the four pressure cases governs the layer shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PressureRegime {
    PZero,
    PSubOne,
    POne,
    PSuperOne,
}

/// Terminal data where the layer rolls up (`p_bar > 1` only).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BlowUpData {
    pub x: f64,
    pub y: f64,
    /// Vertical layer speed at the terminal point (`u = 0` there).
    pub v: f64,
    pub rho_weight: f64,
}

/// Closed-form free layer.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FreeLayer {
    pub shape: LayerShape,
    pub regime: PressureRegime,
    pub blow_up: Option<BlowUpData>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum LayerShape {
    Graph(DeadGasGraphSegment),
    Parametric(DeadGasEllipseSegment),
}

impl FreeLayer {
    /// Layer elevation as a graph where that makes sense.
    pub fn y_at_x(&self, x: f64) -> Result<f64> {
        match &self.shape {
            LayerShape::Graph(g) => g.s(x),
            LayerShape::Parametric(e) => e.y_at_x(x),
        }
    }

    pub fn as_segment(&self) -> CurveSegment {
        match &self.shape {
            LayerShape::Graph(g) => CurveSegment::DeadGasGraph(g.clone()),
            LayerShape::Parametric(e) => CurveSegment::DeadGasEllipse(e.clone()),
        }
    }
}

/// Wall data at the separation point: `(b*, b'(x*), A)`.
pub fn separation_data(geom: &Geometry, x_star: f64) -> Result<(f64, f64, f64)> {
    let (b, d1, _) = geom.eval(x_star)?;
    let h = geom.h(x_star)?;
    if !(h > 0.0) {
        return Err(Error::Hypothesis(format!("H(x*) must be positive, got {h}")));
    }
    Ok((b, d1, h / (1.0 + d1 * d1).sqrt()))
}

fn regime_of(p_bar: f64) -> Result<PressureRegime> {
    if p_bar < 0.0 {
        return Err(Error::InvalidArgument("p_bar must be >= 0".into()));
    }
    Ok(if (p_bar - 1.0).abs() < 1e-12 {
        PressureRegime::POne
    } else if p_bar == 0.0 {
        PressureRegime::PZero
    } else if p_bar < 1.0 {
        PressureRegime::PSubOne
    } else {
        PressureRegime::PSuperOne
    })
}

/// Exact free layer for any `p_bar >= 0`.
///
/// `x_to` bounds graph segments for iteration and export; the parametric
/// shape always ends at its terminal point regardless of `x_to`.
pub fn free_layer_closed_form(
    geom: &Geometry,
    spec: &DeadGasSpec,
    e0: f64,
    x_to: f64,
) -> Result<FreeLayer> {
    let (b_star, beta, a) = separation_data(geom, spec.x_star)?;
    let regime = regime_of(spec.p_bar)?;
    match regime {
        PressureRegime::PSuperOne => {
            let ell = DeadGasEllipseSegment {
                x_star: spec.x_star,
                b_star,
                beta,
                a,
                p_bar: spec.p_bar,
                e0,
            };
            let (x_t, y_t) = ell.terminal();
            let term = ell.at(0.0)?;
            Ok(FreeLayer {
                shape: LayerShape::Parametric(ell),
                regime,
                blow_up: Some(BlowUpData {
                    x: x_t,
                    y: y_t,
                    v: term.state.1,
                    rho_weight: term.rho_weight,
                }),
            })
        }
        _ => Ok(FreeLayer {
            shape: LayerShape::Graph(DeadGasGraphSegment {
                x_star: spec.x_star,
                b_star,
                beta,
                a,
                p_bar: spec.p_bar,
                e0,
                x_to,
            }),
            regime,
            blow_up: None,
        }),
    }
}

/// Numerically integrated free layer: sampled points plus the terminal
/// point when the integration stops at a roll-up.
#[derive(Debug, Clone)]
pub struct OdeLayer {
    pub points: Vec<(f64, f64)>,
    pub terminal: Option<(f64, f64)>,
}

/// Integrate the layer equation with adaptive embedded Runge–Kutta steps.
///
/// Graph regimes integrate `s'(x)` to `x_max`; the super-critical case
/// integrates the arc-length parametric system and stops where the layer
/// x-momentum vanishes (the roll-up). Accuracy target: sup-distance to the
/// closed form below `max(tol, 1e-8)`.
pub fn free_layer_ode(
    geom: &Geometry,
    spec: &DeadGasSpec,
    x_max: f64,
    tol: f64,
) -> Result<OdeLayer> {
    let (b_star, beta, a) = separation_data(geom, spec.x_star)?;
    let p_bar = spec.p_bar;
    let regime = regime_of(p_bar)?;
    let opts = OdeOptions { rtol: tol.min(1e-10), atol: tol.min(1e-10) * 1e-2, ..Default::default() };
    let n = 200usize;
    match regime {
        PressureRegime::PSuperOne => {
            // Unit-speed tangent (P, Q)/|(P, Q)|; stop when P reaches zero.
            let f = |_t: f64, yx: &[f64; 2]| {
                let p = (1.0 - p_bar) * (yx[1] - b_star) + a;
                let q = p_bar * (yx[0] - spec.x_star) + beta * a;
                let speed = (p * p + q * q).sqrt();
                [p / speed, q / speed]
            };
            let event = |_t: f64, yx: &[f64; 2]| (1.0 - p_bar) * (yx[1] - b_star) + a;
            let ell = DeadGasEllipseSegment { x_star: spec.x_star, b_star, beta, a, p_bar, e0: 1.0 };
            let (ax, ay) = ell.semi_axes();
            let cap = 4.0 * (ax + ay) + 1.0;
            let step = cap / n as f64;
            let mut points = vec![(spec.x_star, b_star)];
            let mut t = 0.0;
            let mut y = [spec.x_star, b_star];
            loop {
                let out = ode::integrate_until(&f, t, y, t + step, &event, &opts)?;
                points.push((out.y[0], out.y[1]));
                if out.fired {
                    return Ok(OdeLayer { points, terminal: Some((out.y[0], out.y[1])) });
                }
                t = out.t;
                y = out.y;
                if t >= cap {
                    return Err(Error::Hypothesis(
                        "parametric layer failed to reach its terminal point".into(),
                    ));
                }
            }
        }
        _ => {
            let f = |x: f64, s: &[f64; 1]| {
                [(p_bar * (x - spec.x_star) + beta * a)
                    / ((1.0 - p_bar) * (s[0] - b_star) + a)]
            };
            let mut points = Vec::with_capacity(n + 1);
            let mut x = spec.x_star;
            let mut s = [b_star];
            points.push((x, s[0]));
            for i in 1..=n {
                let target = spec.x_star + (x_max - spec.x_star) * i as f64 / n as f64;
                s = ode::integrate_to(&f, x, s, target, &opts)?;
                x = target;
                points.push((x, s[0]));
            }
            Ok(OdeLayer { points, terminal: None })
        }
    }
}

/// Layer state `(u, v, E, w_rho)` at parameter `t` (x for graphs, the
/// ellipse angle for the parametric shape).
pub fn layer_state_p2(layer: &FreeLayer, t: f64) -> Result<(f64, f64, f64, f64)> {
    let pt = match &layer.shape {
        LayerShape::Graph(g) => g.at(t)?,
        LayerShape::Parametric(e) => e.at(t)?,
    };
    Ok((pt.state.0, pt.state.1, pt.state.2, pt.rho_weight))
}

/// Assemble the dead-gas measure solution.
pub fn solve_problem2(
    profile: &RampProfile,
    spec: &DeadGasSpec,
    e0: f64,
    x_max: f64,
) -> Result<MeasureSolution> {
    if e0 <= 0.5 {
        return Err(Error::InvalidArgument("E0 must exceed 1/2".into()));
    }
    if spec.x_star > profile.x_end() {
        return Err(Error::InvalidArgument("x_star must not exceed the profile end".into()));
    }
    if x_max <= spec.x_star {
        return Err(Error::InvalidArgument("x_max must exceed x_star".into()));
    }
    let geom = Geometry::new(profile.clone());
    let report = geometry::check_admissibility(&geom, 0.0, spec.x_star, 512)?;
    if let Some(x) = report.first_failure {
        return Err(Error::Inadmissible { x });
    }
    let layer = free_layer_closed_form(&geom, spec, e0, x_max)?;
    let (b_star, _, _) = separation_data(&geom, spec.x_star)?;

    let (x_end, classification) = match (&layer.shape, &layer.blow_up) {
        (LayerShape::Parametric(_), Some(b)) => (
            b.x,
            Classification::BlowsUp { x: b.x, y: b.y, v: b.v, rho_weight: b.rho_weight },
        ),
        _ => (x_max, Classification::Regular),
    };
    let y_top = layer.y_at_x(x_end).or_else(|_| layer.y_at_x(x_end * (1.0 - 1e-12)))?;
    let y_max = y_top.max(b_star) + (0.5 * x_end).max(2.0);
    let y_min = b_star - (x_end - spec.x_star).max(2.0);

    let layer_boundary = match &layer.shape {
        LayerShape::Graph(g) => Boundary::DeadGasGraph(g.clone()),
        LayerShape::Parametric(e) => Boundary::DeadGasEllipseLower(e.clone()),
    };
    let static_state = FlowState {
        rho: spec.rho,
        u: 0.0,
        v: 0.0,
        e: spec.e,
        p: spec.p_bar,
    };
    let regions = vec![
        BulkRegion {
            name: "upstream_wall".into(),
            x_from: 0.0,
            x_to: spec.x_star,
            lower: Boundary::Wall { geometry: geom.clone() },
            upper: Boundary::Const { y: y_max },
            state: FlowState::pressureless(1.0, 1.0, 0.0, e0),
            gamma: 1.0,
        },
        BulkRegion {
            name: "upstream_layer".into(),
            x_from: spec.x_star,
            x_to: x_end,
            lower: layer_boundary.clone(),
            upper: Boundary::Const { y: y_max },
            state: FlowState::pressureless(1.0, 1.0, 0.0, e0),
            gamma: 1.0,
        },
        BulkRegion {
            name: "static_gas".into(),
            x_from: spec.x_star,
            x_to: x_end,
            lower: Boundary::Const { y: y_min },
            upper: layer_boundary,
            state: static_state,
            gamma: spec.gamma,
        },
    ];
    let curves = vec![DiracCurve::new(vec![
        CurveSegment::Wall(WallSegment {
            geometry: geom.clone(),
            e0,
            x_from: 0.0,
            x_to: spec.x_star,
        }),
        layer.as_segment(),
    ])];
    Ok(MeasureSolution {
        problem: ProblemTag::DeadGas,
        extent: Extent { x_max: x_end, y_min, y_max },
        regions,
        curves,
        wall_pressure: Some(WallPressure {
            geometry: geom,
            x_from: 0.0,
            x_to: spec.x_star,
            scale: 1.0,
        }),
        cliff_pressure: Some(CliffPressure {
            x: spec.x_star,
            y_from: y_min,
            y_to: b_star,
            p_bar: spec.p_bar,
            scale: 1.0,
        }),
        inflows: vec![Inflow {
            name: "upstream".into(),
            x: 0.0,
            y_from: 0.0,
            y_to: y_max,
            flux: [1.0, 1.0, 0.0, e0],
        }],
        classification,
    })
}
