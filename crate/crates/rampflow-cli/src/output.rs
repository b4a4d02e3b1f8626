//! Deterministic file outputs: CSV tables, the solution JSON envelope and
//! summary records. All numbers print with 17 significant digits so golden
//! files are byte-stable.

use rampflow::problem1;
use rampflow::solution::{Classification, CurveSegment, MeasureSolution};
use rampflow::Geometry;
use serde::Serialize;
use std::fmt::Write as _;
use std::path::Path;

/// 17 significant digits, scientific.
pub fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub problem: String,
    pub classification: Classification,
    /// Force on the wall over its extent: (Fx, Fy).
    pub drag: Option<(f64, f64)>,
    pub x_max: f64,
}

#[derive(Debug, Serialize)]
pub struct SolutionEnvelope {
    pub summary: Summary,
    pub solution: MeasureSolution,
}

pub fn write_solution_json(
    path: &Path,
    sol: &MeasureSolution,
    drag: Option<(f64, f64)>,
) -> std::io::Result<()> {
    let envelope = SolutionEnvelope {
        summary: Summary {
            problem: format!("{:?}", sol.problem),
            classification: sol.classification.clone(),
            drag,
            x_max: sol.extent.x_max,
        },
        solution: sol.clone(),
    };
    let mut text = serde_json::to_string_pretty(&envelope).expect("serializable");
    text.push('\n');
    std::fs::write(path, text)
}

/// Per-x wall table (the infinite-ramp module layout).
pub fn wall_csv(geom: &Geometry, e0: f64, x_to: f64, n: usize) -> Result<String, String> {
    let xs: Vec<f64> = (1..=n).map(|i| x_to * i as f64 / n as f64).collect();
    let rows = problem1::wall_rows(geom, e0, &xs).map_err(|e| e.to_string())?;
    let mut out = String::from(
        "x,b,db,h,w_p,w_m0,w_n0,w_m1,w_n1,w_m2,w_n2,w_m3,w_n3,w_rho,u_w,v_w\n",
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            fmt(r.x),
            fmt(r.b),
            fmt(r.db),
            fmt(r.h),
            fmt(r.w_p),
            fmt(r.w_m[0]),
            fmt(r.w_n[0]),
            fmt(r.w_m[1]),
            fmt(r.w_n[1]),
            fmt(r.w_m[2]),
            fmt(r.w_n[2]),
            fmt(r.w_m[3]),
            fmt(r.w_n[3]),
            fmt(r.w_rho),
            fmt(r.u_w),
            fmt(r.v_w)
        );
    }
    Ok(out)
}

fn segment_name(seg: &CurveSegment) -> &'static str {
    match seg {
        CurveSegment::Wall(_) => "wall",
        CurveSegment::DeadGasGraph(_) => "free_layer",
        CurveSegment::DeadGasEllipse(_) => "free_layer_parametric",
        CurveSegment::JetGraph(_) => "jet_layer",
    }
}

/// Combined concentration-curve table across all segments.
pub fn curves_csv(sol: &MeasureSolution, per_segment: usize) -> Result<String, String> {
    let mut out = String::from(
        "segment,t,x,y,slope,w_m0,w_n0,w_m1,w_n1,w_m2,w_n2,w_m3,w_n3,w_rho,u,v,e\n",
    );
    for curve in &sol.curves {
        for seg in &curve.segments {
            let (t0, t1) = seg.span();
            for i in 0..=per_segment {
                let t = t0 + (t1 - t0) * i as f64 / per_segment as f64;
                let p = seg.at(t).map_err(|e| e.to_string())?;
                let wm = p.w_m();
                let wn = p.w_n();
                let slope = p.vel.1 / p.vel.0;
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                    segment_name(seg),
                    fmt(p.t),
                    fmt(p.pos.0),
                    fmt(p.pos.1),
                    fmt(if slope.is_finite() { slope } else { f64::MAX }),
                    fmt(wm[0]),
                    fmt(wn[0]),
                    fmt(wm[1]),
                    fmt(wn[1]),
                    fmt(wm[2]),
                    fmt(wn[2]),
                    fmt(wm[3]),
                    fmt(wn[3]),
                    fmt(p.rho_weight),
                    fmt(p.state.0),
                    fmt(p.state.1),
                    fmt(p.state.2)
                );
            }
        }
    }
    Ok(out)
}

/// Free-layer table: `t` (x for graphs, angle for the parametric branch),
/// position, slope, transported state and density weight.
pub fn layer_csv(sol: &MeasureSolution, per_segment: usize) -> Result<String, String> {
    let mut out = String::from("t,x,y,slope,u,v,e,w_rho\n");
    for curve in &sol.curves {
        for seg in &curve.segments {
            if matches!(seg, CurveSegment::Wall(_)) {
                continue;
            }
            let (t0, t1) = seg.span();
            for i in 0..=per_segment {
                let t = t0 + (t1 - t0) * i as f64 / per_segment as f64;
                let p = seg.at(t).map_err(|e| e.to_string())?;
                let slope = p.vel.1 / p.vel.0;
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    fmt(p.t),
                    fmt(p.pos.0),
                    fmt(p.pos.1),
                    fmt(if slope.is_finite() { slope } else { f64::MAX }),
                    fmt(p.state.0),
                    fmt(p.state.1),
                    fmt(p.state.2),
                    fmt(p.rho_weight)
                );
            }
        }
    }
    Ok(out)
}
