//! Assembled measure solutions: bulk regions carrying constant states,
//! concentration curves carrying arc-length weight densities, the wall
//! pressure distribution, and inflow traces.
//!
//! Curves are stored in closed form (parameters, not samples) so that a
//! solution round-trips through JSON and can be re-verified or perturbed
//! after the fact. Each curve keeps the four flux potentials
//! `M, P, Q, W` (mass, x-momentum, y-momentum, energy carried by the layer);
//! the arc-density weights are `w_m^i = potential_i * x' / |(x', y')|` and
//! `w_n^i = potential_i * y' / |(x', y')|`, so the slip relation between the
//! `m` and `n` weights holds by construction.

use crate::error::{Error, Result};
use crate::geometry::Geometry;
use serde::{Deserialize, Serialize};

/// Constant bulk gas state. `p` is the absolutely continuous pressure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowState {
    pub rho: f64,
    pub u: f64,
    pub v: f64,
    pub e: f64,
    pub p: f64,
}

impl FlowState {
    /// Pressureless state (the hypersonic-limit bulk gas).
    pub fn pressureless(rho: f64, u: f64, v: f64, e: f64) -> Self {
        FlowState { rho, u, v, e, p: 0.0 }
    }

    /// State with pressure closed by `p = (gamma-1)/gamma * rho * (e - q^2/2)`.
    pub fn with_gamma(rho: f64, u: f64, v: f64, e: f64, gamma: f64) -> Result<Self> {
        if rho < 0.0 {
            return Err(Error::InvalidArgument("rho must be >= 0".into()));
        }
        let kin = 0.5 * (u * u + v * v);
        if gamma > 1.0 && e < kin {
            return Err(Error::InvalidArgument(
                "E must dominate kinetic energy for gamma > 1".into(),
            ));
        }
        let p = (gamma - 1.0) / gamma * rho * (e - kin);
        Ok(FlowState { rho, u, v, e, p })
    }

    pub const VACUUM: FlowState = FlowState { rho: 0.0, u: 0.0, v: 0.0, e: 0.0, p: 0.0 };

    /// Flux vectors entering the weak identities: x-fluxes exclude pressure
    /// (the pressure measure is accounted separately).
    pub fn m_flux(&self) -> [f64; 4] {
        [
            self.rho * self.u,
            self.rho * self.u * self.u,
            self.rho * self.u * self.v,
            self.rho * self.u * self.e,
        ]
    }

    pub fn n_flux(&self) -> [f64; 4] {
        [
            self.rho * self.v,
            self.rho * self.u * self.v,
            self.rho * self.v * self.v,
            self.rho * self.v * self.e,
        ]
    }
}

/// Truncation box recorded with every solution; unbounded regions are
/// clipped here and verification keeps test functions strictly inside.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Extent {
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

/// How a constructed solution terminated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Classification {
    Regular,
    /// The free layer turns vertical and the solution stops; carries the
    /// terminal point, the terminal vertical speed and the terminal density
    /// weight.
    BlowsUp { x: f64, y: f64, v: f64, rho_weight: f64 },
    VacuumUnbounded,
    VacuumBounded { collision: Collision },
}

/// Point where a free layer meets the contact line and absorbs it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Collision {
    pub x: f64,
    pub y: f64,
    /// Layer slope immediately after absorption.
    pub slope: f64,
}

// ---------------------------------------------------------------------------
// Curve segments
// ---------------------------------------------------------------------------

/// Pointwise curve data used by quadrature, export and checks.
#[derive(Debug, Clone, Copy)]
pub struct CurvePoint {
    pub t: f64,
    pub pos: (f64, f64),
    /// Parameter velocity (x'(t), y'(t)).
    pub vel: (f64, f64),
    /// Flux potentials [M, P, Q, W]: weight densities times arc speed.
    pub potentials: [f64; 4],
    /// Transported state (u, v, E) on the curve.
    pub state: (f64, f64, f64),
    /// Arc density of the concentrated mass measure.
    pub rho_weight: f64,
}

impl CurvePoint {
    /// Arc-length weight densities `w_m^0..w_m^3`.
    pub fn w_m(&self) -> [f64; 4] {
        let speed = (self.vel.0 * self.vel.0 + self.vel.1 * self.vel.1).sqrt();
        self.potentials.map(|p| p * self.vel.0 / speed)
    }

    /// Arc-length weight densities `w_n^0..w_n^3`.
    pub fn w_n(&self) -> [f64; 4] {
        let speed = (self.vel.0 * self.vel.0 + self.vel.1 * self.vel.1).sqrt();
        self.potentials.map(|p| p * self.vel.1 / speed)
    }
}

/// Evaluation offset for walls with unbounded slope at the origin: close
/// enough that the limits are converged, far enough that squared slopes do
/// not overflow.
pub(crate) const WALL_ORIGIN_NUDGE: f64 = 1e-30;

/// Dirac layer supported on the wall itself, parametrized by x.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WallSegment {
    pub geometry: Geometry,
    pub e0: f64,
    pub x_from: f64,
    pub x_to: f64,
}

impl WallSegment {
    pub(crate) fn at(&self, x: f64) -> Result<CurvePoint> {
        // Evaluate just off the origin so profiles with a vertical start
        // (square roots) get their finite limits instead of 0 * inf.
        let xe = if x == 0.0 { 1e-307 } else { x };
        let b_pos = self.geometry.eval(x)?.0;
        let (b, d1, _) = self.geometry.eval(xe)?;
        let h = self.geometry.h(x)?;
        // t1 = b'/sqrt(1+b'^2), t2 = 1/sqrt(1+b'^2), stable for b' -> inf.
        let t1 = if d1 == 0.0 { 0.0 } else { 1.0 / (1.0 / (d1 * d1) + 1.0).sqrt() };
        let t2 = if d1.is_infinite() { 0.0 } else { 1.0 / (1.0 + d1 * d1).sqrt() };
        let m = b;
        let p = h * t2;
        let q = h * t1;
        let w = self.e0 * b;
        let (u, v, rho_w) = if b > 0.0 && h > 0.0 {
            (h * t2 / b, h * t1 / b, b * b / h)
        } else {
            (0.0, 0.0, 0.0)
        };
        Ok(CurvePoint {
            t: x,
            pos: (x, b_pos),
            vel: (1.0, d1.min(1e300)),
            potentials: [m, p, q, w],
            state: (u, v, self.e0),
            rho_weight: rho_w,
        })
    }
}

/// Free layer fed from above by the oncoming stream and pressed from below
/// by gas at constant pressure `p_bar` (graph form, valid while the layer
/// momentum stays positive). `p_bar = 0` is also the upper boundary of a
/// vacuum region.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeadGasGraphSegment {
    pub x_star: f64,
    pub b_star: f64,
    /// Wall slope at the separation point.
    pub beta: f64,
    /// Layer x-momentum flux at separation: H(x*)/sqrt(1+beta^2).
    pub a: f64,
    pub p_bar: f64,
    pub e0: f64,
    pub x_to: f64,
}

/// Case split between the parabola (p_bar == 1) and the radical form.
const PRESSURE_DISPATCH_TOL: f64 = 1e-12;

impl DeadGasGraphSegment {
    pub fn s(&self, x: f64) -> Result<f64> {
        let xi = x - self.x_star;
        if (self.p_bar - 1.0).abs() < PRESSURE_DISPATCH_TOL {
            return Ok(xi * xi / (2.0 * self.a) + self.beta * xi + self.b_star);
        }
        let omp = 1.0 - self.p_bar;
        let disc = omp * self.p_bar * xi * xi
            + 2.0 * omp * self.a * self.beta * xi
            + self.a * self.a;
        if disc < 0.0 {
            return Err(Error::BeyondBlowUp { x, x_end: self.x_to });
        }
        Ok(disc.sqrt() / omp + self.b_star - self.a / omp)
    }

    /// Flux potentials [M, P, Q, W] at x.
    pub fn fluxes(&self, x: f64) -> Result<[f64; 4]> {
        let s = self.s(x)?;
        let xi = x - self.x_star;
        let p = (1.0 - self.p_bar) * (s - self.b_star) + self.a;
        let q = self.p_bar * xi + self.beta * self.a;
        Ok([s, p, q, self.e0 * s])
    }

    pub fn slope(&self, x: f64) -> Result<f64> {
        let [_, p, q, _] = self.fluxes(x)?;
        Ok(q / p)
    }

    pub(crate) fn at(&self, x: f64) -> Result<CurvePoint> {
        let [m, p, q, w] = self.fluxes(x)?;
        let sp = q / p;
        let speed = (1.0 + sp * sp).sqrt();
        Ok(CurvePoint {
            t: x,
            pos: (x, self.s(x)?),
            vel: (1.0, sp),
            potentials: [m, p, q, w],
            state: (p / m, q / m, w / m),
            rho_weight: m * m / (speed * p),
        })
    }
}

/// Lower branch of the elliptical free layer (`p_bar > 1`), parametrized by
/// the ellipse angle from the separation point to the rightmost point where
/// the layer rolls up.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeadGasEllipseSegment {
    pub x_star: f64,
    pub b_star: f64,
    pub beta: f64,
    pub a: f64,
    pub p_bar: f64,
    pub e0: f64,
}

impl DeadGasEllipseSegment {
    pub fn center(&self) -> (f64, f64) {
        (
            self.x_star - self.beta * self.a / self.p_bar,
            self.b_star + self.a / (self.p_bar - 1.0),
        )
    }

    pub fn semi_axes(&self) -> (f64, f64) {
        let r2 = (self.beta * self.beta / self.p_bar + 1.0 / (self.p_bar - 1.0))
            * self.a
            * self.a;
        ((r2 / self.p_bar).sqrt(), (r2 / (self.p_bar - 1.0)).sqrt())
    }

    /// Angle range [theta0, 0]; theta = 0 is the rightmost (terminal) point.
    pub fn theta_range(&self) -> (f64, f64) {
        let (xc, yc) = self.center();
        let (ax, ay) = self.semi_axes();
        let c = ((self.x_star - xc) / ax).clamp(-1.0, 1.0);
        let s = ((self.b_star - yc) / ay).clamp(-1.0, 1.0);
        (s.atan2(c), 0.0)
    }

    pub fn point(&self, theta: f64) -> (f64, f64) {
        let (xc, yc) = self.center();
        let (ax, ay) = self.semi_axes();
        (xc + ax * theta.cos(), yc + ay * theta.sin())
    }

    /// Terminal (blow-up) point: the rightmost point of the ellipse.
    pub fn terminal(&self) -> (f64, f64) {
        let (xc, yc) = self.center();
        let (ax, _) = self.semi_axes();
        (xc + ax, yc)
    }

    /// Graph evaluation of the lower branch for region clipping.
    pub fn y_at_x(&self, x: f64) -> Result<f64> {
        let (xc, yc) = self.center();
        let (ax, ay) = self.semi_axes();
        let c = (x - xc) / ax;
        if !(0.0..=1.0 + 1e-12).contains(&c) || x < self.x_star - 1e-12 {
            return Err(Error::BeyondBlowUp { x, x_end: xc + ax });
        }
        Ok(yc - ay * (1.0 - c.min(1.0) * c.min(1.0)).sqrt())
    }

    pub(crate) fn at(&self, theta: f64) -> Result<CurvePoint> {
        let (ax, ay) = self.semi_axes();
        let (x, y) = self.point(theta);
        let vel = (-ax * theta.sin(), ay * theta.cos());
        let m = y;
        let p = (1.0 - self.p_bar) * (y - self.b_star) + self.a;
        let q = self.p_bar * (x - self.x_star) + self.beta * self.a;
        let speed = (vel.0 * vel.0 + vel.1 * vel.1).sqrt();
        Ok(CurvePoint {
            t: theta,
            pos: (x, y),
            vel,
            potentials: [m, p, q, self.e0 * m],
            state: (p / m, q / m, self.e0),
            rho_weight: vel.1 * y * y / (speed * q),
        })
    }
}

/// Free layer against a pressureless jet `(rho, u, v, E)` with general
/// initial fluxes; covers both the attached layer and the post-collision
/// continuation (which restarts from the absorption point).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JetGraphSegment {
    pub x0: f64,
    pub y0: f64,
    /// Initial fluxes [M, P, Q, W] carried into the segment at x0.
    pub m0: f64,
    pub p0: f64,
    pub q0: f64,
    pub w0: f64,
    pub rho: f64,
    pub u: f64,
    pub v: f64,
    pub e: f64,
    pub e0: f64,
    pub x_to: f64,
}

impl JetGraphSegment {
    /// Layer elevation above y0.
    fn sigma(&self, x: f64) -> f64 {
        let xi = x - self.x0;
        let (r, u, v) = (self.rho, self.u, self.v);
        let lin = 1.0 - r * u * u;
        if lin.abs() < PRESSURE_DISPATCH_TOL {
            (r * v * v * xi * xi + 2.0 * self.q0 * xi) / (2.0 * (r * u * v * xi + self.p0))
        } else {
            let disc = r * v * v * xi * xi
                + 2.0 * (r * u * v * self.p0 + lin * self.q0) * xi
                + self.p0 * self.p0;
            (-(r * u * v * xi + self.p0) + disc.sqrt()) / lin
        }
    }

    pub fn s(&self, x: f64) -> f64 {
        self.y0 + self.sigma(x)
    }

    pub fn fluxes(&self, x: f64) -> [f64; 4] {
        let xi = x - self.x0;
        let sg = self.sigma(x);
        let (r, u, v, e) = (self.rho, self.u, self.v, self.e);
        [
            self.m0 + r * v * xi + (1.0 - r * u) * sg,
            self.p0 + r * u * v * xi + (1.0 - r * u * u) * sg,
            self.q0 + r * v * v * xi - r * u * v * sg,
            self.w0 + r * v * e * xi - r * u * e * sg + self.e0 * sg,
        ]
    }

    pub fn slope(&self, x: f64) -> f64 {
        let [_, p, q, _] = self.fluxes(x);
        q / p
    }

    /// Denominator of the layer states; positive under the entropy regime.
    pub fn denominator(&self, x: f64) -> f64 {
        self.fluxes(x)[0]
    }

    pub(crate) fn at(&self, x: f64) -> Result<CurvePoint> {
        let [m, p, q, w] = self.fluxes(x);
        let sp = q / p;
        let speed = (1.0 + sp * sp).sqrt();
        Ok(CurvePoint {
            t: x,
            pos: (x, self.s(x)),
            vel: (1.0, sp),
            potentials: [m, p, q, w],
            state: (p / m, q / m, w / m),
            rho_weight: m * m / (speed * p),
        })
    }
}

/// One smooth piece of a concentration curve.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum CurveSegment {
    Wall(WallSegment),
    DeadGasGraph(DeadGasGraphSegment),
    DeadGasEllipse(DeadGasEllipseSegment),
    JetGraph(JetGraphSegment),
}

impl CurveSegment {
    /// Parameter span (x for graphs, angle for the ellipse).
    pub fn span(&self) -> (f64, f64) {
        match self {
            CurveSegment::Wall(s) => (s.x_from, s.x_to),
            CurveSegment::DeadGasGraph(s) => (s.x_star, s.x_to),
            CurveSegment::DeadGasEllipse(s) => s.theta_range(),
            CurveSegment::JetGraph(s) => (s.x0, s.x_to),
        }
    }

    pub fn at(&self, t: f64) -> Result<CurvePoint> {
        match self {
            CurveSegment::Wall(s) => s.at(t),
            CurveSegment::DeadGasGraph(s) => s.at(t),
            CurveSegment::DeadGasEllipse(s) => s.at(t),
            CurveSegment::JetGraph(s) => s.at(t),
        }
    }

    /// Clip the parameter span to curve points with x in [x_lo, x_hi].
    pub fn clip_to_x(&self, x_lo: f64, x_hi: f64) -> Option<(f64, f64)> {
        match self {
            CurveSegment::DeadGasEllipse(s) => {
                let (t0, t1) = s.theta_range();
                let (xc, _) = s.center();
                let (ax, _) = s.semi_axes();
                let ang = |x: f64| -(((x - xc) / ax).clamp(-1.0, 1.0)).acos();
                let (x0, x1) = (s.point(t0).0, s.point(t1).0);
                if x_hi < x0 || x_lo > x1 {
                    return None;
                }
                let lo = if x_lo <= x0 { t0 } else { ang(x_lo) };
                let hi = if x_hi >= x1 { t1 } else { ang(x_hi) };
                (lo < hi).then_some((lo, hi))
            }
            _ => {
                let (t0, t1) = self.span();
                let lo = t0.max(x_lo);
                let hi = t1.min(x_hi);
                (lo < hi).then_some((lo, hi))
            }
        }
    }
}

/// A concentration curve: a chain of smooth segments plus perturbation
/// scales on the four flux-weight fields (used by falsifiability checks and
/// hand-edited verification inputs).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiracCurve {
    pub segments: Vec<CurveSegment>,
    /// Multiplies the [mass, x-momentum, y-momentum, energy] weight fields.
    #[serde(default = "unit_scales")]
    pub weight_scales: [f64; 4],
    /// Multiplies the concentrated density weight.
    #[serde(default = "one")]
    pub rho_scale: f64,
}

fn unit_scales() -> [f64; 4] {
    [1.0; 4]
}

fn one() -> f64 {
    1.0
}

impl DiracCurve {
    pub fn new(segments: Vec<CurveSegment>) -> Self {
        DiracCurve { segments, weight_scales: [1.0; 4], rho_scale: 1.0 }
    }

    /// Evenly sampled points per segment (for CSV export and plots).
    pub fn sample(&self, per_segment: usize) -> Result<Vec<CurvePoint>> {
        let mut out = Vec::new();
        for seg in &self.segments {
            let (t0, t1) = seg.span();
            for i in 0..=per_segment {
                let t = t0 + (t1 - t0) * i as f64 / per_segment as f64;
                out.push(seg.at(t)?);
            }
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// Bulk regions and solution envelope
// ---------------------------------------------------------------------------

/// x-parametrized boundary of a strip region.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "curve", rename_all = "snake_case")]
pub enum Boundary {
    Const { y: f64 },
    Wall { geometry: Geometry },
    DeadGasGraph(DeadGasGraphSegment),
    DeadGasEllipseLower(DeadGasEllipseSegment),
    JetGraph(JetGraphSegment),
    Line { x0: f64, y0: f64, slope: f64 },
}

impl Boundary {
    pub fn y(&self, x: f64) -> Result<f64> {
        match self {
            Boundary::Const { y } => Ok(*y),
            Boundary::Wall { geometry } => Ok(geometry.eval(x)?.0),
            Boundary::DeadGasGraph(s) => s.s(x),
            Boundary::DeadGasEllipseLower(s) => s.y_at_x(x),
            Boundary::JetGraph(s) => Ok(s.s(x)),
            Boundary::Line { x0, y0, slope } => Ok(y0 + slope * (x - x0)),
        }
    }
}

/// Graph-bounded strip with a constant state.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BulkRegion {
    pub name: String,
    pub x_from: f64,
    pub x_to: f64,
    pub lower: Boundary,
    pub upper: Boundary,
    pub state: FlowState,
    /// Adiabatic exponent backing the state's pressure (1 = pressureless).
    pub gamma: f64,
}

/// Wall pressure distribution with its perturbation scale.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WallPressure {
    pub geometry: Geometry,
    pub x_from: f64,
    pub x_to: f64,
    #[serde(default = "one")]
    pub scale: f64,
}

impl WallPressure {
    /// Scaled wall-load weight at x.
    pub fn w_p(&self, x: f64) -> Result<f64> {
        let xe = x.max(WALL_ORIGIN_NUDGE);
        let (_, d1, d2) = self.geometry.eval(xe)?;
        let h = self.geometry.h(xe)?;
        let opb = 1.0 + d1 * d1;
        Ok(self.scale * (d2 * h + d1 * d1 * opb.sqrt()) / (opb * opb.sqrt()))
    }
}

/// Uniform pressure exerted on the vertical cliff face (dead-gas problems).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CliffPressure {
    pub x: f64,
    pub y_from: f64,
    pub y_to: f64,
    pub p_bar: f64,
    #[serde(default = "one")]
    pub scale: f64,
}

/// Vertical inflow trace carrying the boundary flux of each identity
/// (pressure already folded into the x-momentum component).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Inflow {
    pub name: String,
    pub x: f64,
    pub y_from: f64,
    pub y_to: f64,
    pub flux: [f64; 4],
}

/// Which construction produced the solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemTag {
    InfiniteRamp,
    DeadGas,
    JetInteraction,
}

/// A fully assembled measure solution.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasureSolution {
    pub problem: ProblemTag,
    pub extent: Extent,
    pub regions: Vec<BulkRegion>,
    pub curves: Vec<DiracCurve>,
    pub wall_pressure: Option<WallPressure>,
    pub cliff_pressure: Option<CliffPressure>,
    pub inflows: Vec<Inflow>,
    pub classification: Classification,
}

impl MeasureSolution {
    /// Empty solution (all measures vanish); verifies trivially.
    pub fn empty() -> Self {
        MeasureSolution {
            problem: ProblemTag::InfiniteRamp,
            extent: Extent { x_max: 1.0, y_min: 0.0, y_max: 1.0 },
            regions: vec![],
            curves: vec![],
            wall_pressure: None,
            cliff_pressure: None,
            inflows: vec![],
            classification: Classification::Regular,
        }
    }

    /// Region state at a point, if any region contains it.
    pub fn state_at(&self, x: f64, y: f64) -> Option<&FlowState> {
        for r in &self.regions {
            if x < r.x_from || x > r.x_to {
                continue;
            }
            let lo = r.lower.y(x).ok()?;
            let hi = r.upper.y(x).ok()?;
            if y >= lo && y <= hi {
                return Some(&r.state);
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::RampProfile;
    use approx::assert_abs_diff_eq;

    #[test]
    fn flow_state_gamma_closure() {
        let s = FlowState::with_gamma(1.0, 0.0, 0.0, 3.5, 1.4).unwrap();
        assert_abs_diff_eq!(s.p, 1.0, epsilon = 1e-15);
        assert!(FlowState::with_gamma(1.0, 3.0, 0.0, 1.0, 1.4).is_err());
        let g1 = FlowState::with_gamma(1.0, 1.0, 0.0, 2.0, 1.0).unwrap();
        assert_eq!(g1.p, 0.0);
    }

    #[test]
    fn wall_segment_point_has_slip_built_in() {
        let g = Geometry::new(RampProfile::power(1.0, 0.5).unwrap());
        let seg = WallSegment { geometry: g, e0: 1.0, x_from: 0.0, x_to: 4.0 };
        let p = seg.at(2.0).unwrap();
        let wm = p.w_m();
        let wn = p.w_n();
        let slope = 1.0 / (2.0 * 2.0f64.sqrt());
        for i in 0..4 {
            assert_abs_diff_eq!(wn[i], slope * wm[i], epsilon = 1e-14);
        }
        assert_abs_diff_eq!(wm[0], 4.0 / 3.0, epsilon = 1e-14);
    }

    #[test]
    fn curve_clip_to_x() {
        let g = Geometry::new(RampProfile::wedge(1.0).unwrap());
        let seg = CurveSegment::Wall(WallSegment { geometry: g, e0: 1.0, x_from: 0.0, x_to: 5.0 });
        assert_eq!(seg.clip_to_x(1.0, 2.0), Some((1.0, 2.0)));
        assert_eq!(seg.clip_to_x(6.0, 8.0), None);
    }

    #[test]
    fn solution_round_trips_through_json() {
        let g = Geometry::new(RampProfile::power(1.0, 0.5).unwrap());
        let sol = MeasureSolution {
            problem: ProblemTag::InfiniteRamp,
            extent: Extent { x_max: 4.0, y_min: 0.0, y_max: 6.0 },
            regions: vec![BulkRegion {
                name: "upstream".into(),
                x_from: 0.0,
                x_to: 4.0,
                lower: Boundary::Wall { geometry: g.clone() },
                upper: Boundary::Const { y: 6.0 },
                state: FlowState::pressureless(1.0, 1.0, 0.0, 1.0),
                gamma: 1.0,
            }],
            curves: vec![DiracCurve::new(vec![CurveSegment::Wall(WallSegment {
                geometry: g.clone(),
                e0: 1.0,
                x_from: 0.0,
                x_to: 4.0,
            })])],
            wall_pressure: Some(WallPressure { geometry: g, x_from: 0.0, x_to: 4.0, scale: 1.0 }),
            cliff_pressure: None,
            inflows: vec![Inflow {
                name: "upstream".into(),
                x: 0.0,
                y_from: 0.0,
                y_to: 6.0,
                flux: [1.0, 1.0, 0.0, 1.0],
            }],
            classification: Classification::Regular,
        };
        let s = serde_json::to_string(&sol).unwrap();
        let back: MeasureSolution = serde_json::from_str(&s).unwrap();
        let p0 = sol.curves[0].segments[0].at(2.0).unwrap();
        let p1 = back.curves[0].segments[0].at(2.0).unwrap();
        assert_eq!(p0.potentials, p1.potentials);
        assert_abs_diff_eq!(
            back.wall_pressure.unwrap().w_p(2.0).unwrap(),
            1.0 / 27.0,
            epsilon = 1e-15
        );
    }
}
