//! Adaptive embedded Runge–Kutta integration (Dormand–Prince 5(4)).
//!
//! Small fixed-dimension driver used for cross-checking the closed-form
//! layer shapes. Supports integration to a target abscissa and integration
//! until a scalar event function crosses zero (with bisection refinement of
//! the crossing).

/// Dormand–Prince nodes.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];

/// Dormand–Prince stage coefficients (lower triangle).
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];

/// 5th-order solution weights (same as the last A row; FSAL pair).
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];

/// Embedded 4th-order weights.
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OdeError {
    #[error("step size underflow at t = {t} (remaining span {remaining:e})")]
    StepUnderflow { t: f64, remaining: f64 },
    #[error("right-hand side returned a non-finite value at t = {t}")]
    NonFinite { t: f64 },
}

/// Integration controls; `rtol`/`atol` follow the usual mixed-error test.
#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rtol: 1e-10,
            atol: 1e-12,
            max_steps: 1_000_000,
        }
    }
}

fn step<const N: usize, F: Fn(f64, &[f64; N]) -> [f64; N]>(
    f: &F,
    t: f64,
    y: &[f64; N],
    h: f64,
    k0: &[f64; N],
) -> ([f64; N], [f64; N], [f64; N]) {
    let mut k = [[0.0; N]; 7];
    k[0] = *k0;
    for s in 1..7 {
        let mut ys = *y;
        for (j, kj) in k.iter().enumerate().take(s) {
            let a = A[s][j];
            if a != 0.0 {
                for i in 0..N {
                    ys[i] += h * a * kj[i];
                }
            }
        }
        k[s] = f(t + C[s] * h, &ys);
    }
    let mut y5 = *y;
    let mut err = [0.0; N];
    for (s, ks) in k.iter().enumerate() {
        for i in 0..N {
            y5[i] += h * B5[s] * ks[i];
            err[i] += h * (B5[s] - B4[s]) * ks[i];
        }
    }
    // FSAL: k7 = f(t+h, y5) is stage 6 by construction of the tableau.
    (y5, err, k[6])
}

/// Integrate `y' = f(t, y)` from `(t0, y0)` to `t_end`, returning `y(t_end)`.
pub fn integrate_to<const N: usize, F: Fn(f64, &[f64; N]) -> [f64; N]>(
    f: &F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    opts: &OdeOptions,
) -> Result<[f64; N], OdeError> {
    if t0 == t_end {
        return Ok(y0);
    }
    let dir = (t_end - t0).signum();
    let mut t = t0;
    let mut y = y0;
    let mut k0 = f(t, &y);
    let mut h = dir * (0.01 * (t_end - t0).abs()).clamp(1e-8, 0.1);
    for _ in 0..opts.max_steps {
        if (t - t_end) * dir >= 0.0 {
            return Ok(y);
        }
        if (t + h - t_end) * dir > 0.0 {
            h = t_end - t;
        }
        let (y5, err, k_next) = step(f, t, &y, h, &k0);
        if y5.iter().any(|v| !v.is_finite()) {
            return Err(OdeError::NonFinite { t });
        }
        let mut enorm = 0.0f64;
        for i in 0..N {
            let sc = opts.atol + opts.rtol * y[i].abs().max(y5[i].abs());
            enorm = enorm.max((err[i] / sc).abs());
        }
        if enorm <= 1.0 {
            t += h;
            y = y5;
            k0 = k_next;
        }
        let factor = if enorm > 0.0 {
            (0.9 * enorm.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h *= factor;
        if h.abs() < 1e-14 * (1.0 + t.abs()) {
            return Err(OdeError::StepUnderflow {
                t,
                remaining: (t_end - t).abs(),
            });
        }
    }
    Err(OdeError::StepUnderflow {
        t,
        remaining: (t_end - t).abs(),
    })
}

/// Integrate forward until `event(t, y)` becomes non-positive; returns the
/// crossing state refined by bisection on the step that brackets it.
///
/// `t_cap` bounds the search. If the event never fires the integration stops
/// at `t_cap` and the state there is returned with `fired = false`.
pub struct EventOutcome<const N: usize> {
    pub t: f64,
    pub y: [f64; N],
    pub fired: bool,
}

pub fn integrate_until<const N: usize, F, G>(
    f: &F,
    t0: f64,
    y0: [f64; N],
    t_cap: f64,
    event: &G,
    opts: &OdeOptions,
) -> Result<EventOutcome<N>, OdeError>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    G: Fn(f64, &[f64; N]) -> f64,
{
    let mut t = t0;
    let mut y = y0;
    let mut k0 = f(t, &y);
    let mut h = 0.01 * (t_cap - t0).abs().max(1e-6);
    if event(t, &y) <= 0.0 {
        return Ok(EventOutcome { t, y, fired: true });
    }
    for _ in 0..opts.max_steps {
        if t >= t_cap {
            return Ok(EventOutcome { t, y, fired: false });
        }
        if t + h > t_cap {
            h = t_cap - t;
        }
        let (y5, err, k_next) = step(f, t, &y, h, &k0);
        if y5.iter().any(|v| !v.is_finite()) {
            return Err(OdeError::NonFinite { t });
        }
        let mut enorm = 0.0f64;
        for i in 0..N {
            let sc = opts.atol + opts.rtol * y[i].abs().max(y5[i].abs());
            enorm = enorm.max((err[i] / sc).abs());
        }
        if enorm <= 1.0 {
            if event(t + h, &y5) <= 0.0 {
                // Bisect the step width until the crossing is pinned down.
                let mut lo = 0.0f64;
                let mut hi = h;
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if hi - lo <= 1e-15 * (1.0 + (t + hi).abs()) {
                        break;
                    }
                    let (ym, _, _) = step(f, t, &y, mid, &k0);
                    if event(t + mid, &ym) <= 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                let (ye, _, _) = step(f, t, &y, hi, &k0);
                return Ok(EventOutcome {
                    t: t + hi,
                    y: ye,
                    fired: true,
                });
            }
            t += h;
            y = y5;
            k0 = k_next;
        }
        let factor = if enorm > 0.0 {
            (0.9 * enorm.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h *= factor;
        if h < 1e-14 * (1.0 + t.abs()) {
            return Err(OdeError::StepUnderflow {
                t,
                remaining: t_cap - t,
            });
        }
    }
    Err(OdeError::StepUnderflow {
        t,
        remaining: t_cap - t,
    })
}
