//! Ramp wall geometry: profile evaluation, the arc integral `H`, inner
//! normals, and the pointwise admissibility condition that keeps the wall
//! load positive.
//!
//! A profile is the graph `y = b(x)` with `b(0) = 0` and `b' >= 0`. All wall
//! formulas are driven by the triple `(b, b', b'')` and by
//! `H(x) = ∫_0^x b'(t)/sqrt(1 + b'(t)^2) dt`, the vertical-capture arc
//! integral. `H` has closed forms for straight wedges and square-root
//! profiles; other profiles fall back to adaptive quadrature.

use crate::error::Error;
use crate::quad;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock, RwLock};

/// Geometric shape of the wall.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProfileKind {
    /// Straight wall `b(x) = slope * x`.
    Wedge { slope: f64 },
    /// Power wall `b(x) = coeff * x^exp`, `exp` in (0, 1].
    Power {
        coeff: f64,
        #[serde(rename = "exp")]
        exponent: f64,
    },
    /// `b(x) = sum_i coeffs[i] * x^i`; `coeffs[0]` must vanish.
    Polynomial { coeffs: Vec<f64> },
    /// Sorted samples interpolated by a monotone C¹ cubic.
    Tabulated { x: Vec<f64>, b: Vec<f64> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ProfileSpec {
    #[serde(flatten)]
    kind: ProfileKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    x_end: Option<f64>,
}

/// A validated wall profile together with its domain end.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "ProfileSpec", into = "ProfileSpec")]
pub struct RampProfile {
    kind: ProfileKind,
    /// `f64::INFINITY` for an infinite ramp.
    x_end: f64,
    #[serde(skip)]
    pub(crate) interp: Option<MonotoneCubic>,
}

impl TryFrom<ProfileSpec> for RampProfile {
    type Error = Error;
    fn try_from(s: ProfileSpec) -> Result<Self, Error> {
        RampProfile::new(s.kind, s.x_end)
    }
}

impl From<RampProfile> for ProfileSpec {
    fn from(p: RampProfile) -> ProfileSpec {
        ProfileSpec {
            x_end: if p.x_end.is_finite() { Some(p.x_end) } else { None },
            kind: p.kind,
        }
    }
}

impl RampProfile {
    pub fn new(kind: ProfileKind, x_end: Option<f64>) -> Result<Self, Error> {
        let mut x_end = x_end.unwrap_or(f64::INFINITY);
        if x_end <= 0.0 || x_end.is_nan() {
            return Err(Error::InvalidProfile("x_end must be positive".into()));
        }
        let mut interp = None;
        match &kind {
            ProfileKind::Wedge { slope } => {
                if !slope.is_finite() || *slope < 0.0 {
                    return Err(Error::InvalidProfile("wedge slope must be finite and >= 0".into()));
                }
            }
            ProfileKind::Power { coeff, exponent } => {
                if !coeff.is_finite() || *coeff < 0.0 {
                    return Err(Error::InvalidProfile("power coefficient must be >= 0".into()));
                }
                if !(*exponent > 0.0 && *exponent <= 1.0) {
                    return Err(Error::InvalidProfile(
                        "power exponent must lie in (0, 1]".into(),
                    ));
                }
            }
            ProfileKind::Polynomial { coeffs } => {
                if coeffs.first().copied().unwrap_or(0.0) != 0.0 {
                    return Err(Error::InvalidProfile(
                        "polynomial constant term must vanish (b(0) = 0)".into(),
                    ));
                }
                let span = if x_end.is_finite() { x_end } else { 10.0 };
                for i in 0..=256 {
                    let x = span * i as f64 / 256.0;
                    let d: f64 = coeffs
                        .iter()
                        .enumerate()
                        .skip(1)
                        .map(|(k, c)| c * k as f64 * x.powi(k as i32 - 1))
                        .sum();
                    if d < -1e-12 {
                        return Err(Error::InvalidProfile(format!(
                            "polynomial slope negative near x = {x}"
                        )));
                    }
                }
            }
            ProfileKind::Tabulated { x, b } => {
                if x.len() < 3 {
                    return Err(Error::InvalidProfile(
                        "tabulated profile needs at least 3 samples".into(),
                    ));
                }
                if x.len() != b.len() {
                    return Err(Error::InvalidProfile("x/b length mismatch".into()));
                }
                let (mut xs, mut bs) = (x.clone(), b.clone());
                if xs[0] > 0.0 {
                    xs.insert(0, 0.0);
                    bs.insert(0, 0.0);
                } else if xs[0] == 0.0 && bs[0] != 0.0 {
                    return Err(Error::InvalidProfile("b(0) must vanish".into()));
                } else if xs[0] < 0.0 {
                    return Err(Error::InvalidProfile("tabulated x must be >= 0".into()));
                }
                for w in xs.windows(2) {
                    if w[1] <= w[0] {
                        return Err(Error::InvalidProfile(
                            "tabulated x must be strictly increasing".into(),
                        ));
                    }
                }
                for w in bs.windows(2) {
                    if w[1] < w[0] {
                        return Err(Error::InvalidProfile(
                            "tabulated b must be non-decreasing (b' >= 0)".into(),
                        ));
                    }
                }
                let last = *xs.last().unwrap();
                if x_end.is_finite() && x_end > last {
                    return Err(Error::InvalidProfile(format!(
                        "x_end {x_end} exceeds last tabulated sample {last}"
                    )));
                }
                if !x_end.is_finite() {
                    x_end = last;
                }
                interp = Some(MonotoneCubic::new(xs, bs));
            }
        }
        Ok(RampProfile { kind, x_end, interp })
    }

    pub fn wedge(slope: f64) -> Result<Self, Error> {
        Self::new(ProfileKind::Wedge { slope }, None)
    }

    pub fn power(coeff: f64, exponent: f64) -> Result<Self, Error> {
        Self::new(ProfileKind::Power { coeff, exponent }, None)
    }

    pub fn polynomial(coeffs: Vec<f64>, x_end: Option<f64>) -> Result<Self, Error> {
        Self::new(ProfileKind::Polynomial { coeffs }, x_end)
    }

    pub fn tabulated(x: Vec<f64>, b: Vec<f64>) -> Result<Self, Error> {
        Self::new(ProfileKind::Tabulated { x, b }, None)
    }

    pub fn kind(&self) -> &ProfileKind {
        &self.kind
    }

    pub fn x_end(&self) -> f64 {
        self.x_end
    }

    /// Wall height, slope and curvature at `x`.
    ///
    /// For power profiles with exponent below one the slope and curvature
    /// blow up at `x = 0`; the returned infinities reflect the limit.
    pub fn eval(&self, x: f64) -> Result<(f64, f64, f64), Error> {
        if !(0.0..=self.x_end).contains(&x) {
            return Err(Error::OutOfDomain { x, x_end: self.x_end });
        }
        Ok(match &self.kind {
            ProfileKind::Wedge { slope } => (slope * x, *slope, 0.0),
            ProfileKind::Power { coeff, exponent } => {
                let (c, a) = (*coeff, *exponent);
                if a == 1.0 {
                    (c * x, c, 0.0)
                } else {
                    (
                        c * x.powf(a),
                        c * a * x.powf(a - 1.0),
                        c * a * (a - 1.0) * x.powf(a - 2.0),
                    )
                }
            }
            ProfileKind::Polynomial { coeffs } => {
                let mut b = 0.0;
                let mut d1 = 0.0;
                let mut d2 = 0.0;
                // Horner from the top coefficient.
                for &c in coeffs.iter().rev() {
                    d2 = d2 * x + 2.0 * d1;
                    d1 = d1 * x + b;
                    b = b * x + c;
                }
                (b, d1, d2)
            }
            ProfileKind::Tabulated { .. } => {
                self.interp.as_ref().expect("interpolant built at construction").eval(x)
            }
        })
    }
}

/// Profile plus memoised arc integral; cheap to clone (caches are shared).
#[derive(Debug, Clone)]
pub struct Geometry {
    profile: RampProfile,
    tol: f64,
    h_cache: Arc<RwLock<BTreeMap<u64, f64>>>,
    /// Cumulative arc integral at the interpolant knots (tabulated profiles).
    knot_cum: Arc<OnceLock<Vec<f64>>>,
}

#[derive(Serialize, Deserialize)]
struct GeometrySpec {
    profile: RampProfile,
    tol: f64,
}

impl Serialize for Geometry {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GeometrySpec { profile: self.profile.clone(), tol: self.tol }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Geometry {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let spec = GeometrySpec::deserialize(d)?;
        Ok(Geometry::with_tol(spec.profile, spec.tol))
    }
}

impl Geometry {
    pub fn new(profile: RampProfile) -> Self {
        Self::with_tol(profile, 1e-10)
    }

    pub fn with_tol(profile: RampProfile, tol: f64) -> Self {
        Geometry {
            profile,
            tol,
            h_cache: Arc::new(RwLock::new(BTreeMap::new())),
            knot_cum: Arc::new(OnceLock::new()),
        }
    }

    pub fn profile(&self) -> &RampProfile {
        &self.profile
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn x_end(&self) -> f64 {
        self.profile.x_end()
    }

    pub fn eval(&self, x: f64) -> Result<(f64, f64, f64), Error> {
        self.profile.eval(x)
    }

    /// Arc integral `H(x)`; closed forms where available, quadrature otherwise.
    pub fn h(&self, x: f64) -> Result<f64, Error> {
        self.h_tol(x, self.tol)
    }

    pub fn h_tol(&self, x: f64, tol: f64) -> Result<f64, Error> {
        if !(0.0..=self.profile.x_end()).contains(&x) {
            return Err(Error::OutOfDomain { x, x_end: self.profile.x_end() });
        }
        if x == 0.0 {
            return Ok(0.0);
        }
        match self.profile.kind() {
            ProfileKind::Wedge { slope } => Ok(x * slope / (1.0 + slope * slope).sqrt()),
            ProfileKind::Power { coeff, exponent } if *exponent == 1.0 => {
                Ok(x * coeff / (1.0 + coeff * coeff).sqrt())
            }
            ProfileKind::Power { coeff, exponent } if *exponent == 0.5 => {
                // b' / sqrt(1 + b'^2) = c / sqrt(4t + c^2) integrates exactly.
                let c = *coeff;
                Ok(0.5 * c * ((4.0 * x + c * c).sqrt() - c))
            }
            ProfileKind::Tabulated { .. } => {
                // Integrate segment-wise against the interpolant, reusing a
                // cumulative table at the knots built on first use.
                let interp = self.profile.interp.as_ref().expect("interpolant");
                let cum = self.knot_cum.get_or_init(|| {
                    let mut cum = Vec::with_capacity(interp.xs.len());
                    let mut acc = 0.0;
                    cum.push(0.0);
                    for w in interp.xs.windows(2) {
                        acc += quad::integrate(&|t| self.integrand(t), w[0], w[1], 1e-13)
                            .unwrap_or(f64::NAN);
                        cum.push(acc);
                    }
                    cum
                });
                let seg = match interp.xs.binary_search_by(|p| p.total_cmp(&x)) {
                    Ok(i) => return Ok(cum[i]),
                    Err(i) => i - 1,
                };
                let partial =
                    quad::integrate(&|t| self.integrand(t), interp.xs[seg], x, tol.min(1e-12))?;
                Ok(cum[seg] + partial)
            }
            _ => {
                if let Some(v) = self.h_cache.read().expect("cache lock").get(&x.to_bits()) {
                    return Ok(*v);
                }
                let v = quad::integrate(&|t| self.integrand(t), 0.0, x, tol)?;
                self.h_cache.write().expect("cache lock").insert(x.to_bits(), v);
                Ok(v)
            }
        }
    }

    /// Integrand of the arc integral, bounded also where `b'` blows up.
    fn integrand(&self, t: f64) -> f64 {
        let (_, d1, _) = self.profile.eval(t).expect("t within domain");
        if d1.is_infinite() {
            1.0
        } else {
            d1 / (1.0 + d1 * d1).sqrt()
        }
    }

    /// Inner unit normal `(-b', 1)/sqrt(1 + b'^2)` on the wall.
    pub fn normal(&self, x: f64) -> Result<(f64, f64), Error> {
        let (_, d1, _) = self.profile.eval(x)?;
        if d1.is_infinite() {
            return Ok((-1.0, 0.0));
        }
        let r = (1.0 + d1 * d1).sqrt();
        Ok((-d1 / r, 1.0 / r))
    }
}

/// Outcome of sampling the wall-load positivity condition.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub first_failure: Option<f64>,
    /// `(x, margin)` per sample; the margin is `b''H + b'^2 sqrt(1+b'^2)`,
    /// which must be positive.
    pub samples: Vec<(f64, f64)>,
}

/// Sample the admissibility condition on `[x_lo, x_hi]`.
///
/// At points where `H = 0` (the ramp origin) the condition degenerates to
/// `b' > 0` in the limit, which is what gets checked there.
pub fn check_admissibility(
    geom: &Geometry,
    x_lo: f64,
    x_hi: f64,
    n_samples: usize,
) -> Result<AdmissibilityReport, Error> {
    if x_lo < 0.0 || x_hi < x_lo {
        return Err(Error::InvalidArgument("need 0 <= x_lo <= x_hi".into()));
    }
    let x_hi = x_hi.min(geom.x_end());
    let n = n_samples.max(2);
    let mut samples = Vec::with_capacity(n);
    let mut first_failure = None;
    for i in 0..n {
        let x = x_lo + (x_hi - x_lo) * i as f64 / (n - 1) as f64;
        let (_, d1, d2) = geom.eval(x)?;
        let h = geom.h(x)?;
        let (ok, margin) = admissibility_margin(d1, d2, h);
        if !ok && first_failure.is_none() {
            first_failure = Some(x);
        }
        samples.push((x, margin));
    }
    Ok(AdmissibilityReport {
        admissible: first_failure.is_none(),
        first_failure,
        samples,
    })
}

/// Margin of the pointwise condition; positive means admissible.
pub(crate) fn admissibility_margin(d1: f64, d2: f64, h: f64) -> (bool, f64) {
    if d1 < 0.0 {
        return (false, f64::NEG_INFINITY);
    }
    if h == 0.0 {
        // Limit form at the origin: the wall must actually turn into the flow.
        return (d1 > 0.0, if d1 > 0.0 { f64::INFINITY } else { 0.0 });
    }
    if d1.is_infinite() {
        return (true, f64::INFINITY);
    }
    let margin = d2 * h + d1 * d1 * (1.0 + d1 * d1).sqrt();
    (margin > 0.0, margin)
}

/// Monotone C¹ cubic Hermite interpolant (shape-preserving).
///
/// Node slopes come from a local cubic fit and are then limited to keep the
/// interpolant non-decreasing; the second derivative is the segment cubic's,
/// hence piecewise linear and discontinuous at the nodes.
#[derive(Debug, Clone)]
pub(crate) struct MonotoneCubic {
    pub(crate) xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubic {
    fn new(xs: Vec<f64>, ys: Vec<f64>) -> Self {
        let n = xs.len();
        let mut slopes = vec![0.0; n];
        for i in 0..n {
            let w = (i.saturating_sub(1)).min(n - 4);
            slopes[i] = lagrange_derivative(&xs[w..w + 4], &ys[w..w + 4], xs[i]);
        }
        // Shape limiter: keep each slope within three times the adjacent
        // secants so the cubic stays monotone on every segment.
        for i in 0..n {
            let left = if i > 0 {
                (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1])
            } else {
                f64::INFINITY
            };
            let right = if i + 1 < n {
                (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])
            } else {
                f64::INFINITY
            };
            let cap = 3.0 * left.min(right);
            slopes[i] = slopes[i].clamp(0.0, cap.max(0.0));
        }
        MonotoneCubic { xs, ys, slopes }
    }

    fn eval(&self, x: f64) -> (f64, f64, f64) {
        let n = self.xs.len();
        let seg = match self.xs.binary_search_by(|p| p.total_cmp(&x)) {
            Ok(i) => i.min(n - 2),
            Err(i) => i.saturating_sub(1).min(n - 2),
        };
        let (x0, x1) = (self.xs[seg], self.xs[seg + 1]);
        let (y0, y1) = (self.ys[seg], self.ys[seg + 1]);
        let (d0, d1) = (self.slopes[seg], self.slopes[seg + 1]);
        let h = x1 - x0;
        let t = (x - x0) / h;
        let (t2, t3) = (t * t, t * t * t);
        let b = y0 * (2.0 * t3 - 3.0 * t2 + 1.0)
            + h * d0 * (t3 - 2.0 * t2 + t)
            + y1 * (-2.0 * t3 + 3.0 * t2)
            + h * d1 * (t3 - t2);
        let db = (y0 * (6.0 * t2 - 6.0 * t)
            + h * d0 * (3.0 * t2 - 4.0 * t + 1.0)
            + y1 * (-6.0 * t2 + 6.0 * t)
            + h * d1 * (3.0 * t2 - 2.0 * t))
            / h;
        let d2b = (y0 * (12.0 * t - 6.0)
            + h * d0 * (6.0 * t - 4.0)
            + y1 * (-12.0 * t + 6.0)
            + h * d1 * (6.0 * t - 2.0))
            / (h * h);
        (b, db.max(0.0), d2b)
    }
}

/// Derivative at `x` of the cubic Lagrange polynomial through four nodes.
fn lagrange_derivative(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    debug_assert_eq!(xs.len(), 4);
    let mut d = 0.0;
    for j in 0..4 {
        let mut term = 0.0;
        for k in 0..4 {
            if k == j {
                continue;
            }
            let mut prod = 1.0;
            for m in 0..4 {
                if m != j && m != k {
                    prod *= (x - xs[m]) / (xs[j] - xs[m]);
                }
            }
            term += prod / (xs[j] - xs[k]);
        }
        d += ys[j] * term;
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn sqrt_profile() -> Geometry {
        Geometry::new(RampProfile::power(1.0, 0.5).unwrap())
    }

    #[test]
    fn eval_power_half_at_two() {
        let g = sqrt_profile();
        let (b, d1, d2) = g.eval(2.0).unwrap();
        assert_abs_diff_eq!(b, 2.0f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(d1, 1.0 / (2.0 * 2.0f64.sqrt()), epsilon = 1e-15);
        assert_abs_diff_eq!(d2, -1.0 / (4.0 * 2.0f64.powf(1.5)), epsilon = 1e-15);
    }

    #[test]
    fn eval_wedges() {
        let flat = Geometry::new(RampProfile::wedge(0.0).unwrap());
        assert_eq!(flat.eval(3.7).unwrap(), (0.0, 0.0, 0.0));
        let k = (30.0f64).to_radians().tan();
        let w = Geometry::new(RampProfile::wedge(k).unwrap());
        let (b, d1, d2) = w.eval(1.0).unwrap();
        assert_abs_diff_eq!(b, 0.57735, epsilon = 1e-5);
        assert_abs_diff_eq!(d1, 0.57735, epsilon = 1e-5);
        assert_eq!(d2, 0.0);
    }

    #[test]
    fn h_closed_forms() {
        let g = sqrt_profile();
        assert_abs_diff_eq!(g.h(2.0).unwrap(), 1.0, epsilon = 1e-14);
        assert_eq!(g.h(0.0).unwrap(), 0.0);
        let theta = (30.0f64).to_radians();
        let w = Geometry::new(RampProfile::wedge(theta.tan()).unwrap());
        for x in [0.1, 1.0, 7.5] {
            assert_abs_diff_eq!(w.h(x).unwrap(), x * theta.sin(), epsilon = 1e-14);
        }
    }

    #[test]
    fn h_quadrature_matches_closed_forms() {
        // Same integrand routed through the quadrature path via a polynomial
        // and a generic power, compared against exact antiderivatives.
        let k: f64 = 0.75;
        let poly = Geometry::new(RampProfile::polynomial(vec![0.0, k], None).unwrap());
        for i in 1..=8 {
            let x = 10.0f64.powf(-2.0 + 3.0 * i as f64 / 8.0);
            assert_abs_diff_eq!(
                poly.h(x).unwrap(),
                x * k / (1.0 + k * k).sqrt(),
                epsilon = 1e-9
            );
        }
        let c: f64 = 2.0;
        let pw = Geometry::new(RampProfile::power(c, 0.5).unwrap());
        let quad_route = |x: f64| {
            crate::quad::integrate(&|t: f64| c / (4.0 * t + c * c).sqrt(), 0.0, x, 1e-12).unwrap()
        };
        for i in 1..=8 {
            let x = 10.0f64.powf(-2.0 + 3.0 * i as f64 / 8.0);
            assert_abs_diff_eq!(pw.h(x).unwrap(), quad_route(x), epsilon = 1e-10);
        }
    }

    #[test]
    fn h_is_monotone() {
        let g = sqrt_profile();
        let mut prev = 0.0;
        for i in 1..=50 {
            let x = 10.0 * i as f64 / 50.0;
            let h = g.h(x).unwrap();
            assert!(h >= prev);
            prev = h;
        }
    }

    #[test]
    fn normals_are_unit() {
        let g = sqrt_profile();
        for i in 1..=40 {
            let x = 0.05 + 10.0 * i as f64 / 40.0;
            let (n1, n2) = g.normal(x).unwrap();
            assert_abs_diff_eq!(n1 * n1 + n2 * n2, 1.0, epsilon = 1e-14);
        }
        // Vertical-limit normal at the square-root origin.
        assert_eq!(g.normal(0.0).unwrap(), (-1.0, 0.0));
    }

    #[test]
    fn admissibility_examples() {
        let g = sqrt_profile();
        let rep = check_admissibility(&g, 0.0, 10.0, 100).unwrap();
        assert!(rep.admissible, "sqrt ramp must be admissible");

        let w = Geometry::new(RampProfile::wedge(1.0).unwrap());
        assert!(check_admissibility(&w, 0.0, 10.0, 10).unwrap().admissible);

        let flat = Geometry::new(RampProfile::wedge(0.0).unwrap());
        let rep = check_admissibility(&flat, 0.0, 10.0, 10).unwrap();
        assert!(!rep.admissible);
        assert_eq!(rep.first_failure, Some(0.0));
    }

    #[test]
    fn domain_errors() {
        let g = sqrt_profile();
        assert!(g.eval(-0.5).is_err());
        let fin = Geometry::new(
            RampProfile::new(ProfileKind::Power { coeff: 1.0, exponent: 0.5 }, Some(2.0)).unwrap(),
        );
        assert!(fin.eval(2.5).is_err());
        assert!(fin.eval(2.0).is_ok());
    }

    #[test]
    fn tabulated_rejects_bad_input() {
        assert!(RampProfile::tabulated(vec![0.0, 1.0], vec![0.0, 1.0]).is_err());
        assert!(RampProfile::tabulated(vec![0.0, 1.0, 0.5], vec![0.0, 1.0, 2.0]).is_err());
        assert!(RampProfile::tabulated(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 0.5]).is_err());
    }

    #[test]
    fn tabulated_tracks_sqrt_to_1e6() {
        // Geometrically spaced samples of sqrt(x) on [0.01, 10].
        let n = 200;
        let mut xs = Vec::with_capacity(n);
        let mut bs = Vec::with_capacity(n);
        for i in 0..n {
            let x = 0.01 * (10.0f64 / 0.01).powf(i as f64 / (n - 1) as f64);
            xs.push(x);
            bs.push(x.sqrt());
        }
        let p = RampProfile::tabulated(xs, bs).unwrap();
        let mut worst = 0.0f64;
        for i in 0..2000 {
            let x = 0.01 * (10.0f64 / 0.01).powf(i as f64 / 1999.0);
            let (b, d1, _) = p.eval(x).unwrap();
            worst = worst.max((b - x.sqrt()).abs());
            assert!(d1 >= 0.0);
        }
        assert!(worst <= 1e-6, "interpolant error {worst:e} exceeds 1e-6");
    }

    #[test]
    fn serde_round_trip() {
        let p = RampProfile::power(1.0, 0.5).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.contains("\"exp\":0.5"));
        let q: RampProfile = serde_json::from_str(&s).unwrap();
        assert_eq!(q.eval(2.0).unwrap().0, p.eval(2.0).unwrap().0);
        let t: RampProfile =
            serde_json::from_str(r#"{"kind":"power","coeff":1.0,"exp":0.5}"#).unwrap();
        assert_eq!(t.eval(4.0).unwrap().0, 2.0);
    }
}
