//! Jet interaction: regime classification, the attached free layer with its
//! entropy and positivity checks, vacuum bounded by a free layer and a
//! contact line, continuation after the layer absorbs the contact, and the
//! boundary-data trace used by singular Riemann problems.
//!
//! The jet `(rho, u, v, E)` is pressureless with `u > 0`. With
//! `A = H(x*)/sqrt(1+b'(x*)^2)` and `beta = b'(x*)`:
//!
//! - attached (`v/u >= beta`): the layer collects both gases; its slope obeys
//!   `s' [rho u v xi + (1 - rho u^2) sigma + A] = rho v^2 xi - rho u v sigma + beta A`,
//! - otherwise a vacuum opens, bounded above by the no-pressure layer and
//!   below by the straight contact `c(x) = (v/u)(x - x*) + b(x*)`; for
//!   `0 < v/u < beta` the two meet at a finite point and the attached
//!   machinery restarts there.

use crate::error::{Error, Result};
use crate::geometry::{self, Geometry, RampProfile};
use crate::problem2::separation_data;
use crate::solution::{
    Boundary, BulkRegion, Classification, Collision, CurveSegment, DeadGasGraphSegment,
    DiracCurve, Extent, FlowState, Inflow, JetGraphSegment, MeasureSolution, ProblemTag,
    WallPressure, WallSegment,
};
use serde::{Deserialize, Serialize};

/// Pressureless jet data on the nozzle exit plane `x = x_star`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct JetSpec {
    pub x_star: f64,
    pub rho: f64,
    pub u: f64,
    pub v: f64,
    pub e: f64,
}

impl JetSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.u > 0.0) {
            return Err(Error::Hypothesis("jet must be hyperbolic: u > 0".into()));
        }
        if !(self.rho > 0.0 && self.e > 0.0 && self.x_star > 0.0) {
            return Err(Error::InvalidArgument("need rho > 0, E > 0, x_star > 0".into()));
        }
        Ok(())
    }

    pub fn state(&self) -> FlowState {
        FlowState::pressureless(self.rho, self.u, self.v, self.e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    Attached,
    VacuumUnbounded,
    VacuumBounded,
}

/// Decide the flow pattern from the jet direction against the wall slope.
pub fn classify_regime(geom: &Geometry, spec: &JetSpec) -> Result<Regime> {
    spec.validate()?;
    let (_, beta, _) = separation_data(geom, spec.x_star)?;
    let dir = spec.v / spec.u;
    Ok(if dir >= beta {
        Regime::Attached
    } else if spec.v <= 0.0 {
        Regime::VacuumUnbounded
    } else {
        Regime::VacuumBounded
    })
}

/// Sampled entropy and positivity data along a jet-fed layer.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EntropyReport {
    /// Admissible slope band is [0, slope_bound].
    pub slope_bound: f64,
    pub min_slope: f64,
    pub max_slope: f64,
    pub min_mass: f64,
    pub min_xmom: f64,
    pub first_violation: Option<(f64, String)>,
}

impl EntropyReport {
    pub fn satisfied(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// Sample slope bounds and denominators at `n` points of the segment.
pub fn entropy_report(seg: &JetGraphSegment, n: usize) -> EntropyReport {
    let bound = seg.v / seg.u;
    let mut rep = EntropyReport {
        slope_bound: bound,
        min_slope: f64::INFINITY,
        max_slope: f64::NEG_INFINITY,
        min_mass: f64::INFINITY,
        min_xmom: f64::INFINITY,
        first_violation: None,
    };
    const TOL: f64 = 1e-12;
    for i in 0..n {
        let x = seg.x0 + (seg.x_to - seg.x0) * i as f64 / (n - 1) as f64;
        let [m, p, q, _] = seg.fluxes(x);
        let sp = q / p;
        rep.min_slope = rep.min_slope.min(sp);
        rep.max_slope = rep.max_slope.max(sp);
        rep.min_mass = rep.min_mass.min(m);
        rep.min_xmom = rep.min_xmom.min(p);
        if rep.first_violation.is_none() {
            if sp < -TOL || sp > bound + TOL {
                rep.first_violation = Some((x, format!("slope {sp} outside [0, {bound}]")));
            } else if m <= 0.0 {
                rep.first_violation = Some((x, format!("state denominator {m} not positive")));
            } else if p <= 0.0 {
                rep.first_violation = Some((x, format!("x-momentum flux {p} not positive")));
            }
        }
    }
    rep
}

/// Attached layer plus its sampled checks.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AttachedLayer {
    pub segment: JetGraphSegment,
    pub entropy: EntropyReport,
}

/// Construct the attached layer on `[x_star, x_max]`.
///
/// Requires `v/u >= b'(x_star)`; the sampled entropy band and positivity
/// checks are enforced and a violation reports the offending x.
pub fn attached_layer(geom: &Geometry, spec: &JetSpec, e0: f64, x_max: f64) -> Result<AttachedLayer> {
    spec.validate()?;
    let (b_star, beta, a) = separation_data(geom, spec.x_star)?;
    if spec.v / spec.u < beta {
        return Err(Error::Hypothesis(format!(
            "attached layer needs v/u >= b'(x*), got {} < {beta}",
            spec.v / spec.u
        )));
    }
    let segment = JetGraphSegment {
        x0: spec.x_star,
        y0: b_star,
        m0: b_star,
        p0: a,
        q0: beta * a,
        w0: e0 * b_star,
        rho: spec.rho,
        u: spec.u,
        v: spec.v,
        e: spec.e,
        e0,
        x_to: x_max,
    };
    let entropy = entropy_report(&segment, 1000);
    if let Some((x, ref detail)) = entropy.first_violation {
        return Err(Error::EntropyViolation { x, detail: detail.clone() });
    }
    Ok(AttachedLayer { segment, entropy })
}

/// Straight contact line bounding the vacuum from the jet side.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ContactLine {
    pub x0: f64,
    pub y0: f64,
    pub slope: f64,
}

impl ContactLine {
    pub fn y(&self, x: f64) -> f64 {
        self.y0 + self.slope * (x - self.x0)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum VacuumExtent {
    Unbounded,
    BoundedUpTo(Collision),
}

/// Vacuum bounded above by a no-pressure free layer and below by the
/// contact line.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VacuumRegion {
    pub upper: DeadGasGraphSegment,
    pub contact: ContactLine,
    pub extent: VacuumExtent,
}

/// Construct the vacuum region (`v/u < b'(x_star)` required).
pub fn vacuum_construction(
    geom: &Geometry,
    spec: &JetSpec,
    e0: f64,
    x_max: f64,
) -> Result<VacuumRegion> {
    spec.validate()?;
    let (b_star, beta, a) = separation_data(geom, spec.x_star)?;
    if spec.v / spec.u >= beta {
        return Err(Error::InvalidArgument(
            "vacuum construction called in the attached regime".into(),
        ));
    }
    let contact = ContactLine { x0: spec.x_star, y0: b_star, slope: spec.v / spec.u };
    let extent = if spec.v <= 0.0 {
        VacuumExtent::Unbounded
    } else {
        let (u, v) = (spec.u, spec.v);
        let x_meet = spec.x_star + 2.0 * (u * beta - v) * u / (v * v) * a;
        let y_meet = 2.0 * (u * beta - v) / v * a + b_star;
        let slope_after = beta * v / (2.0 * u * beta - v);
        VacuumExtent::BoundedUpTo(Collision { x: x_meet, y: y_meet, slope: slope_after })
    };
    let x_to = match &extent {
        VacuumExtent::Unbounded => x_max,
        VacuumExtent::BoundedUpTo(c) => c.x.min(x_max),
    };
    Ok(VacuumRegion {
        upper: DeadGasGraphSegment {
            x_star: spec.x_star,
            b_star,
            beta,
            a,
            p_bar: 0.0,
            e0,
            x_to,
        },
        contact,
        extent,
    })
}

/// Continue the layer past the collision point, where it absorbs the
/// contact and starts collecting the jet.
pub fn continue_after_collision(
    geom: &Geometry,
    spec: &JetSpec,
    collision: &Collision,
    e0: f64,
    x_max: f64,
) -> Result<JetGraphSegment> {
    spec.validate()?;
    let (b_star, beta, a) = separation_data(geom, spec.x_star)?;
    let upper = DeadGasGraphSegment {
        x_star: spec.x_star,
        b_star,
        beta,
        a,
        p_bar: 0.0,
        e0,
        x_to: collision.x,
    };
    let expect_y = upper.s(collision.x)?;
    if (expect_y - collision.y).abs() > 1e-9 * (1.0 + collision.y.abs()) {
        return Err(Error::InvalidArgument(format!(
            "collision point mismatch: layer passes y = {expect_y}, collision says {}",
            collision.y
        )));
    }
    // The pre-collision layer carries mass h, x-momentum h - b* + A and
    // y-momentum beta A into the absorption point.
    Ok(JetGraphSegment {
        x0: collision.x,
        y0: collision.y,
        m0: collision.y,
        p0: collision.y - b_star + a,
        q0: beta * a,
        w0: e0 * collision.y,
        rho: spec.rho,
        u: spec.u,
        v: spec.v,
        e: spec.e,
        e0,
        x_to: x_max,
    })
}

/// Assemble the jet-interaction measure solution.
pub fn solve_problem3(
    profile: &RampProfile,
    spec: &JetSpec,
    e0: f64,
    x_max: f64,
) -> Result<MeasureSolution> {
    if e0 <= 0.5 {
        return Err(Error::InvalidArgument("E0 must exceed 1/2".into()));
    }
    spec.validate()?;
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
    let (b_star, _, _) = separation_data(&geom, spec.x_star)?;
    let upstream = FlowState::pressureless(1.0, 1.0, 0.0, e0);
    let jet_state = spec.state();
    let wall_region = |y_max: f64| BulkRegion {
        name: "upstream_wall".into(),
        x_from: 0.0,
        x_to: spec.x_star,
        lower: Boundary::Wall { geometry: geom.clone() },
        upper: Boundary::Const { y: y_max },
        state: upstream,
        gamma: 1.0,
    };
    let wall_curve = CurveSegment::Wall(WallSegment {
        geometry: geom.clone(),
        e0,
        x_from: 0.0,
        x_to: spec.x_star,
    });
    let jet_flux = [
        spec.rho * spec.u,
        spec.rho * spec.u * spec.u,
        spec.rho * spec.u * spec.v,
        spec.rho * spec.u * spec.e,
    ];

    let regime = classify_regime(&geom, spec)?;
    let (regions, segments, classification);
    match regime {
        Regime::Attached => {
            let layer = attached_layer(&geom, spec, e0, x_max)?;
            let y_max = layer.segment.s(x_max).max(b_star) + (0.5 * x_max).max(2.0);
            let y_min = b_star.min(0.0) - (x_max - spec.x_star).max(2.0);
            regions = vec![
                wall_region(y_max),
                BulkRegion {
                    name: "upstream_layer".into(),
                    x_from: spec.x_star,
                    x_to: x_max,
                    lower: Boundary::JetGraph(layer.segment.clone()),
                    upper: Boundary::Const { y: y_max },
                    state: upstream,
                    gamma: 1.0,
                },
                BulkRegion {
                    name: "jet".into(),
                    x_from: spec.x_star,
                    x_to: x_max,
                    lower: Boundary::Const { y: y_min },
                    upper: Boundary::JetGraph(layer.segment.clone()),
                    state: jet_state,
                    gamma: 1.0,
                },
            ];
            segments = vec![wall_curve, CurveSegment::JetGraph(layer.segment)];
            classification = Classification::Regular;
        }
        Regime::VacuumUnbounded => {
            let vac = vacuum_construction(&geom, spec, e0, x_max)?;
            let y_max = vac.upper.s(x_max)?.max(b_star) + (0.5 * x_max).max(2.0);
            let y_min =
                vac.contact.y(x_max).min(b_star) - (x_max - spec.x_star).max(2.0);
            regions = vec![
                wall_region(y_max),
                BulkRegion {
                    name: "upstream_layer".into(),
                    x_from: spec.x_star,
                    x_to: x_max,
                    lower: Boundary::DeadGasGraph(vac.upper.clone()),
                    upper: Boundary::Const { y: y_max },
                    state: upstream,
                    gamma: 1.0,
                },
                BulkRegion {
                    name: "vacuum".into(),
                    x_from: spec.x_star,
                    x_to: x_max,
                    lower: Boundary::Line {
                        x0: vac.contact.x0,
                        y0: vac.contact.y0,
                        slope: vac.contact.slope,
                    },
                    upper: Boundary::DeadGasGraph(vac.upper.clone()),
                    state: FlowState::VACUUM,
                    gamma: 1.0,
                },
                BulkRegion {
                    name: "jet".into(),
                    x_from: spec.x_star,
                    x_to: x_max,
                    lower: Boundary::Const { y: y_min },
                    upper: Boundary::Line {
                        x0: vac.contact.x0,
                        y0: vac.contact.y0,
                        slope: vac.contact.slope,
                    },
                    state: jet_state,
                    gamma: 1.0,
                },
            ];
            segments = vec![wall_curve, CurveSegment::DeadGasGraph(vac.upper)];
            classification = Classification::VacuumUnbounded;
        }
        Regime::VacuumBounded => {
            let vac = vacuum_construction(&geom, spec, e0, x_max)?;
            let VacuumExtent::BoundedUpTo(collision) = vac.extent.clone() else {
                unreachable!("bounded regime yields a collision");
            };
            let x_meet = collision.x.min(x_max);
            let mut regs = vec![
                wall_region(0.0), // y_max patched below
                BulkRegion {
                    name: "upstream_layer".into(),
                    x_from: spec.x_star,
                    x_to: x_meet,
                    lower: Boundary::DeadGasGraph(vac.upper.clone()),
                    upper: Boundary::Const { y: 0.0 },
                    state: upstream,
                    gamma: 1.0,
                },
                BulkRegion {
                    name: "vacuum".into(),
                    x_from: spec.x_star,
                    x_to: x_meet,
                    lower: Boundary::Line {
                        x0: vac.contact.x0,
                        y0: vac.contact.y0,
                        slope: vac.contact.slope,
                    },
                    upper: Boundary::DeadGasGraph(vac.upper.clone()),
                    state: FlowState::VACUUM,
                    gamma: 1.0,
                },
                BulkRegion {
                    name: "jet".into(),
                    x_from: spec.x_star,
                    x_to: x_meet,
                    lower: Boundary::Const { y: 0.0 }, // y_min patched below
                    upper: Boundary::Line {
                        x0: vac.contact.x0,
                        y0: vac.contact.y0,
                        slope: vac.contact.slope,
                    },
                    state: jet_state,
                    gamma: 1.0,
                },
            ];
            let mut segs = vec![wall_curve, CurveSegment::DeadGasGraph(vac.upper.clone())];
            let mut top = vac.upper.s(x_meet).unwrap_or(collision.y);
            if collision.x < x_max {
                let post = continue_after_collision(&geom, spec, &collision, e0, x_max)?;
                top = top.max(post.s(x_max));
                regs.push(BulkRegion {
                    name: "upstream_post_collision".into(),
                    x_from: collision.x,
                    x_to: x_max,
                    lower: Boundary::JetGraph(post.clone()),
                    upper: Boundary::Const { y: 0.0 },
                    state: upstream,
                    gamma: 1.0,
                });
                regs.push(BulkRegion {
                    name: "jet_post_collision".into(),
                    x_from: collision.x,
                    x_to: x_max,
                    lower: Boundary::Const { y: 0.0 },
                    upper: Boundary::JetGraph(post.clone()),
                    state: jet_state,
                    gamma: 1.0,
                });
                segs.push(CurveSegment::JetGraph(post));
            }
            let y_max = top.max(b_star) + (0.5 * x_max).max(2.0);
            let y_min = b_star.min(0.0) - (x_max - spec.x_star).max(2.0);
            // Every Const boundary in this regime is a placeholder.
            for r in regs.iter_mut() {
                if let Boundary::Const { y } = &mut r.upper {
                    *y = y_max;
                }
                if let Boundary::Const { y } = &mut r.lower {
                    *y = y_min;
                }
            }
            regions = regs;
            segments = segs;
            classification = Classification::VacuumBounded { collision };
        }
    }

    let y_max = regions
        .iter()
        .filter_map(|r| match r.upper {
            Boundary::Const { y } => Some(y),
            _ => None,
        })
        .fold(f64::NEG_INFINITY, f64::max);
    let y_min = regions
        .iter()
        .filter_map(|r| match r.lower {
            Boundary::Const { y } => Some(y),
            _ => None,
        })
        .fold(f64::INFINITY, f64::min);

    Ok(MeasureSolution {
        problem: ProblemTag::JetInteraction,
        extent: Extent { x_max, y_min, y_max },
        regions,
        curves: vec![DiracCurve::new(segments)],
        wall_pressure: Some(WallPressure {
            geometry: geom,
            x_from: 0.0,
            x_to: spec.x_star,
            scale: 1.0,
        }),
        cliff_pressure: None,
        inflows: vec![
            Inflow { name: "upstream".into(), x: 0.0, y_from: 0.0, y_to: y_max, flux: [1.0, 1.0, 0.0, e0] },
            Inflow { name: "jet".into(), x: spec.x_star, y_from: y_min, y_to: b_star, flux: jet_flux },
        ],
        classification,
    })
}

/// Point mass in a boundary-data trace.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PointMass {
    pub y: f64,
    pub weight: f64,
    pub u: f64,
    pub v: f64,
    pub e: f64,
}

/// Trace of `(rho, u, v, E)` on the vertical line `x = x_star`: bulk values
/// above and below the wall tip plus the concentrated point mass at it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SingularRiemann {
    pub x_star: f64,
    pub upper_state: Option<FlowState>,
    pub lower_state: Option<FlowState>,
    pub point_mass: Option<PointMass>,
}

/// Extract the boundary-data record at `x_star` from a solution whose wall
/// curve covers that abscissa.
pub fn export_singular_riemann(sol: &MeasureSolution, x_star: f64) -> Result<SingularRiemann> {
    let wall = sol
        .curves
        .iter()
        .flat_map(|c| c.segments.iter())
        .find(|s| matches!(s, CurveSegment::Wall(w) if (w.x_from..=w.x_to).contains(&x_star)))
        .ok_or_else(|| Error::InvalidArgument("no wall curve covering x_star".into()))?;
    let pt = wall.at(x_star)?;
    let b_star = pt.pos.1;
    let dy = 1e-9 * (1.0 + sol.extent.y_max - sol.extent.y_min);
    let upper_state = sol.state_at(x_star, b_star + dy).copied();
    let lower_state = sol.state_at(x_star, b_star - dy).copied();
    let point_mass = (pt.rho_weight > 0.0).then_some(PointMass {
        y: b_star,
        weight: pt.rho_weight,
        u: pt.state.0,
        v: pt.state.1,
        e: pt.state.2,
    });
    Ok(SingularRiemann { x_star, upper_state, lower_state, point_mass })
}
