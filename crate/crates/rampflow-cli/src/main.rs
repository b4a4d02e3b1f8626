//! Command-line front end: solve the three ramp-flow problems, verify
//! solutions against the weak-form identities, sweep parameter grids, and
//! run the flux-balance oracle.
//!
//! Exit codes: 0 success, 2 invalid spec, 3 inadmissible ramp, 4 blow-up
//! encountered (outputs still written), 5 verification failure.

// Input validation uses negated comparisons so NaN parameters fail too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod output;
mod spec;
mod svg;

use clap::{Parser, Subcommand, ValueEnum};
use rampflow::geometry::Geometry;
use rampflow::oracle::{accrete_free_layer, accrete_wall, Downstream};
use rampflow::problem1::{drag_lift, solve_problem1};
use rampflow::problem2::{free_layer_closed_form, solve_problem2};
use rampflow::problem3::{classify_regime, solve_problem3, Regime};
use rampflow::solution::{Classification, MeasureSolution};
use rampflow::weak_verify::{
    assess, convergence_study, default_phi_grid, radon_nikodym_check, VerifyThresholds,
};
use rayon::prelude::*;
use spec::{build_problem, load_spec, Problem, ProblemKind, ProblemSpec};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
    All,
}

impl Format {
    fn wants(self, other: Format) -> bool {
        self == Format::All || self == other
    }
}

#[derive(Parser)]
#[command(name = "rampflow", version, about = "Measure solutions for hypersonic-limit flow past ramps")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve a problem spec and write solution.json, CSV tables and plot.svg.
    Solve {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        x_max: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::All)]
        format: Format,
    },
    /// Verify a solution (from a spec or a solution.json) against the weak
    /// identities; exit 5 on failure.
    Verify {
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        solution: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        levels: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        x_max: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Sweep one numeric field over a grid; one summary row per point.
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        /// KEY=LO:HI:STEP with KEY one of p_bar, v, u, rho, e0, slope.
        #[arg(long)]
        grid: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        x_max: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Run the discrete flux-balance oracle against the closed forms.
    Oracle {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1e-3)]
        dx: f64,
        #[arg(long)]
        x_max: Option<f64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Solve { spec, out, x_max, tol, format } => run_solve(&spec, &out, x_max, tol, format),
        Cmd::Verify { spec, solution, levels, out, x_max, tol } => {
            run_verify(spec.as_deref(), solution.as_deref(), levels, &out, x_max, tol)
        }
        Cmd::Sweep { spec, grid, out, format, x_max, tol } => {
            run_sweep(&spec, &grid, &out, format, x_max, tol)
        }
        Cmd::Oracle { spec, out, dx, x_max } => run_oracle(&spec, &out, dx, x_max),
    }
}

fn fail(code: u8, msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn load_problem(
    spec_path: &Path,
    x_max: Option<f64>,
    tol: Option<f64>,
) -> Result<Problem, ExitCode> {
    let spec = load_spec(spec_path).map_err(|e| fail(2, &e.0))?;
    build_problem(&spec, spec_path.parent().unwrap_or(Path::new(".")), x_max, tol)
        .map_err(|e| fail(2, &e.0))
}

fn solve(problem: &Problem) -> rampflow::Result<MeasureSolution> {
    match problem.kind {
        ProblemKind::P1 => solve_problem1(&problem.profile, problem.e0, problem.x_max),
        ProblemKind::P2 => solve_problem2(
            &problem.profile,
            problem.dead_gas.as_ref().expect("validated"),
            problem.e0,
            problem.x_max,
        ),
        ProblemKind::P3 => solve_problem3(
            &problem.profile,
            problem.jet.as_ref().expect("validated"),
            problem.e0,
            problem.x_max,
        ),
    }
}

fn solve_exit_code(e: &rampflow::Error) -> u8 {
    match e {
        rampflow::Error::Inadmissible { .. } => 3,
        _ => 2,
    }
}

fn wall_extent(problem: &Problem) -> f64 {
    match problem.kind {
        ProblemKind::P1 => problem.x_max.min(problem.profile.x_end()),
        ProblemKind::P2 => problem.dead_gas.as_ref().expect("validated").x_star,
        ProblemKind::P3 => problem.jet.as_ref().expect("validated").x_star,
    }
}

fn run_solve(
    spec_path: &Path,
    out: &Path,
    x_max: Option<f64>,
    tol: Option<f64>,
    format: Format,
) -> ExitCode {
    let problem = match load_problem(spec_path, x_max, tol) {
        Ok(p) => p,
        Err(code) => return code,
    };
    let sol = match solve(&problem) {
        Ok(s) => s,
        Err(e) => return fail(solve_exit_code(&e), &e.to_string()),
    };
    if let Err(e) = std::fs::create_dir_all(out) {
        return fail(2, &format!("cannot create {}: {e}", out.display()));
    }
    let geom = Geometry::with_tol(problem.profile.clone(), problem.tol);
    let drag = drag_lift(&geom, 0.0, wall_extent(&problem), problem.tol).ok();
    if let Err(e) = write_solution_files(&sol, &geom, &problem, drag, out, format) {
        return fail(2, &e);
    }
    if let Classification::BlowsUp { x, y, .. } = sol.classification {
        eprintln!("blow-up: free layer rolls up at ({x}, {y}); partial outputs written");
        return ExitCode::from(4);
    }
    ExitCode::SUCCESS
}

fn write_solution_files(
    sol: &MeasureSolution,
    geom: &Geometry,
    problem: &Problem,
    drag: Option<(f64, f64)>,
    out: &Path,
    format: Format,
) -> Result<(), String> {
    if format.wants(Format::Json) {
        output::write_solution_json(&out.join("solution.json"), sol, drag)
            .map_err(|e| e.to_string())?;
    }
    if format.wants(Format::Csv) {
        std::fs::write(out.join("curves.csv"), output::curves_csv(sol, 256)?)
            .map_err(|e| e.to_string())?;
        std::fs::write(
            out.join("wall.csv"),
            output::wall_csv(geom, problem.e0, wall_extent(problem), 256)?,
        )
        .map_err(|e| e.to_string())?;
        if problem.kind != ProblemKind::P1 {
            std::fs::write(out.join("layer.csv"), output::layer_csv(sol, 256)?)
                .map_err(|e| e.to_string())?;
        }
    }
    if format.wants(Format::Svg) {
        std::fs::write(out.join("plot.svg"), svg::render(sol)).map_err(|e| e.to_string())?;
    }
    // Boundary-data trace at the cliff for the finite-ramp problems.
    if format.wants(Format::Json) {
        let x_star = match problem.kind {
            ProblemKind::P1 => None,
            ProblemKind::P2 => problem.dead_gas.as_ref().map(|d| d.x_star),
            ProblemKind::P3 => problem.jet.as_ref().map(|j| j.x_star),
        };
        if let Some(x_star) = x_star {
            let record = rampflow::problem3::export_singular_riemann(sol, x_star)
                .map_err(|e| e.to_string())?;
            let mut text =
                serde_json::to_string_pretty(&record).expect("serializable");
            text.push('\n');
            std::fs::write(out.join("singular_riemann.json"), text)
                .map_err(|e| e.to_string())?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

#[derive(serde::Deserialize)]
struct EnvelopeIn {
    solution: MeasureSolution,
}

fn run_verify(
    spec_path: Option<&Path>,
    solution_path: Option<&Path>,
    levels: usize,
    out: &Path,
    x_max: Option<f64>,
    tol: Option<f64>,
) -> ExitCode {
    let sol = match (spec_path, solution_path) {
        (_, Some(path)) => {
            let text = match std::fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => return fail(2, &format!("cannot read {}: {e}", path.display())),
            };
            // Accept both the envelope and a bare solution record.
            match serde_json::from_str::<EnvelopeIn>(&text) {
                Ok(env) => env.solution,
                Err(_) => match serde_json::from_str::<MeasureSolution>(&text) {
                    Ok(s) => s,
                    Err(e) => {
                        return fail(
                            2,
                            &format!(
                                "invalid solution {} at line {}, column {}: {e}",
                                path.display(),
                                e.line(),
                                e.column()
                            ),
                        )
                    }
                },
            }
        }
        (Some(path), None) => {
            let problem = match load_problem(path, x_max, tol) {
                Ok(p) => p,
                Err(code) => return code,
            };
            match solve(&problem) {
                Ok(s) => s,
                Err(e) => return fail(solve_exit_code(&e), &e.to_string()),
            }
        }
        (None, None) => return fail(2, "verify needs --spec or --solution"),
    };
    if let Err(e) = std::fs::create_dir_all(out) {
        return fail(2, &format!("cannot create {}: {e}", out.display()));
    }

    if sol.regions.is_empty() && sol.curves.is_empty() {
        eprintln!("warning: empty solution, all residuals vanish trivially");
        let summary = serde_json::json!({
            "pass": true, "checked": 0, "warning": "empty solution",
        });
        let _ = std::fs::write(
            out.join("verify_summary.json"),
            serde_json::to_string_pretty(&summary).expect("serializable"),
        );
        println!("[PASS] empty solution (trivial)");
        return ExitCode::SUCCESS;
    }

    let phis = default_phi_grid(&sol);
    let report = match convergence_study(&sol, &phis, levels) {
        Ok(r) => r,
        Err(e) => return fail(2, &e.to_string()),
    };
    let thresholds = VerifyThresholds::default();
    let mut summary = assess(&report, &thresholds);
    let ratio = match radon_nikodym_check(&sol, 500) {
        Ok(r) => r,
        Err(e) => return fail(2, &e.to_string()),
    };
    if ratio.max_deviation() > 1e-9 {
        summary.pass = false;
        summary
            .failures
            .push(format!("flux-ratio deviation {:e} exceeds 1e-9", ratio.max_deviation()));
    }

    let report_json = serde_json::json!({
        "rows": report.rows,
        "truncation": report.truncation,
        "levels": report.levels,
        "ratio_check": ratio,
    });
    if let Err(e) = std::fs::write(
        out.join("report.json"),
        serde_json::to_string_pretty(&report_json).expect("serializable"),
    ) {
        return fail(2, &format!("cannot write report: {e}"));
    }
    if let Err(e) = std::fs::write(
        out.join("verify_summary.json"),
        serde_json::to_string_pretty(&summary).expect("serializable"),
    ) {
        return fail(2, &format!("cannot write summary: {e}"));
    }
    for line in &summary.failures {
        println!("[FAIL] {line}");
    }
    println!(
        "[{}] {} families checked, max final residual {:.3e}, min fitted order {}",
        if summary.pass { "PASS" } else { "FAIL" },
        summary.checked,
        summary.max_final_residual,
        summary
            .min_fitted_order
            .map(|o| format!("{o:.2}"))
            .unwrap_or_else(|| "n/a (exact)".into()),
    );
    if summary.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(5)
    }
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
struct Grid {
    lo: f64,
    hi: f64,
    step: f64,
}

fn parse_grid(s: &str) -> Result<(String, Grid), String> {
    let (key, rest) = s.split_once('=').ok_or("grid must be KEY=LO:HI:STEP")?;
    let parts: Vec<&str> = rest.split(':').collect();
    if parts.len() != 3 {
        return Err("grid must be KEY=LO:HI:STEP".into());
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.parse::<f64>().map_err(|e| format!("bad grid number '{p}': {e}")))
        .collect::<Result<_, _>>()?;
    if nums[2] <= 0.0 {
        return Err("grid step must be positive".into());
    }
    Ok((key.to_string(), Grid { lo: nums[0], hi: nums[1], step: nums[2] }))
}

fn grid_values(g: Grid) -> Vec<f64> {
    let mut out = Vec::new();
    let n = ((g.hi - g.lo) / g.step + 1e-9).floor() as i64;
    for i in 0..=n.max(-1) {
        out.push(g.lo + g.step * i as f64);
    }
    out
}

fn patch_spec(spec: &ProblemSpec, key: &str, value: f64) -> Result<ProblemSpec, String> {
    let mut s = spec.clone();
    match key {
        "p_bar" => s.p_bar = Some(value),
        "e0" => s.e0 = value,
        "v" | "u" | "rho" => {
            let jet = s.jet.as_mut().ok_or("jet grid key on a spec without a jet")?;
            match key {
                "v" => jet.v = value,
                "u" => jet.u = value,
                _ => jet.rho = value,
            }
        }
        "slope" => match &mut s.ramp {
            spec::RampSpec::Wedge { slope } => *slope = value,
            _ => return Err("slope grid key needs a wedge ramp".into()),
        },
        other => return Err(format!("unknown grid key '{other}'")),
    }
    Ok(s)
}

fn asymptotic_slope(problem: &Problem, sol: &MeasureSolution) -> Option<f64> {
    match problem.kind {
        ProblemKind::P1 => None,
        ProblemKind::P2 => {
            let p_bar = problem.dead_gas.as_ref()?.p_bar;
            match sol.classification {
                Classification::BlowsUp { .. } => None,
                _ if (p_bar - 1.0).abs() < 1e-12 => None,
                _ if p_bar == 0.0 => Some(0.0),
                _ => Some((p_bar / (1.0 - p_bar)).sqrt()),
            }
        }
        ProblemKind::P3 => {
            let jet = problem.jet.as_ref()?;
            match sol.classification {
                Classification::Regular => {
                    Some(jet.rho.sqrt() * jet.v / (1.0 + jet.rho.sqrt() * jet.u))
                }
                _ => Some(0.0),
            }
        }
    }
}

fn run_sweep(
    spec_path: &Path,
    grid: &str,
    out: &Path,
    format: Format,
    x_max: Option<f64>,
    tol: Option<f64>,
) -> ExitCode {
    let base = match load_spec(spec_path) {
        Ok(s) => s,
        Err(e) => return fail(2, &e.0),
    };
    let (key, grid) = match parse_grid(grid) {
        Ok(g) => g,
        Err(e) => return fail(2, &e),
    };
    let values = grid_values(grid);
    let dir = spec_path.parent().unwrap_or(Path::new(".")).to_path_buf();

    struct Row {
        value: f64,
        classification: String,
        blow_up: Option<(f64, f64)>,
        collision: Option<(f64, f64)>,
        asym: Option<f64>,
        drag: Option<(f64, f64)>,
        solution: Option<MeasureSolution>,
        error: Option<String>,
    }

    let rows: Vec<Row> = values
        .par_iter()
        .map(|&value| {
            let run = || -> Result<Row, String> {
                let patched = patch_spec(&base, &key, value)?;
                let problem =
                    build_problem(&patched, &dir, x_max, tol).map_err(|e| e.0)?;
                let sol = solve(&problem).map_err(|e| e.to_string())?;
                let geom = Geometry::with_tol(problem.profile.clone(), problem.tol);
                let drag = drag_lift(&geom, 0.0, wall_extent(&problem), problem.tol).ok();
                let (blow_up, collision, classification) = match &sol.classification {
                    Classification::Regular => (None, None, "regular".to_string()),
                    Classification::BlowsUp { x, y, .. } => {
                        (Some((*x, *y)), None, "blow_up".to_string())
                    }
                    Classification::VacuumUnbounded => {
                        (None, None, "vacuum_unbounded".to_string())
                    }
                    Classification::VacuumBounded { collision } => (
                        None,
                        Some((collision.x, collision.y)),
                        "vacuum_bounded".to_string(),
                    ),
                };
                let asym = asymptotic_slope(&problem, &sol);
                Ok(Row {
                    value,
                    classification,
                    blow_up,
                    collision,
                    asym,
                    drag,
                    solution: Some(sol),
                    error: None,
                })
            };
            run().unwrap_or_else(|e| Row {
                value,
                classification: String::new(),
                blow_up: None,
                collision: None,
                asym: None,
                drag: None,
                solution: None,
                error: Some(e),
            })
        })
        .collect();

    if let Err(e) = std::fs::create_dir_all(out) {
        return fail(2, &format!("cannot create {}: {e}", out.display()));
    }
    let opt = |v: Option<f64>| v.map(output::fmt).unwrap_or_default();
    let mut csv = String::from(
        "key,value,classification,blow_up_x,blow_up_y,collision_x,collision_y,asymptotic_slope,drag_fx,drag_fy,error\n",
    );
    for r in &rows {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{},{},{}",
            key,
            output::fmt(r.value),
            r.classification,
            opt(r.blow_up.map(|b| b.0)),
            opt(r.blow_up.map(|b| b.1)),
            opt(r.collision.map(|c| c.0)),
            opt(r.collision.map(|c| c.1)),
            opt(r.asym),
            opt(r.drag.map(|d| d.0)),
            opt(r.drag.map(|d| d.1)),
            r.error.clone().unwrap_or_default()
        );
    }
    if let Err(e) = std::fs::write(out.join("sweep.csv"), csv) {
        return fail(2, &format!("cannot write sweep.csv: {e}"));
    }
    if format.wants(Format::Svg) {
        let mut labeled = Vec::new();
        for r in &rows {
            if let Some(sol) = &r.solution {
                let label = format!("{key}={}", r.value);
                std::fs::create_dir_all(out.join(format!("{key}_{}", r.value))).ok();
                let _ = std::fs::write(
                    out.join(format!("{key}_{}", r.value)).join("plot.svg"),
                    svg::render(sol),
                );
                labeled.push((label, sol.clone()));
            }
        }
        if let Err(e) = std::fs::write(out.join("overlay.svg"), svg::render_overlay(&labeled)) {
            return fail(2, &format!("cannot write overlay.svg: {e}"));
        }
    }
    ExitCode::SUCCESS
}

// ---------------------------------------------------------------------------
// oracle
// ---------------------------------------------------------------------------

fn run_oracle(spec_path: &Path, out: &Path, dx: f64, x_max: Option<f64>) -> ExitCode {
    let problem = match load_problem(spec_path, x_max, None) {
        Ok(p) => p,
        Err(code) => return code,
    };
    if let Err(e) = std::fs::create_dir_all(out) {
        return fail(2, &format!("cannot create {}: {e}", out.display()));
    }
    let geom = Geometry::with_tol(problem.profile.clone(), problem.tol);
    let wall_end = wall_extent(&problem);

    let wall_err_at = |d: f64| -> Result<f64, String> {
        let cells = accrete_wall(&geom, wall_end, d).map_err(|e| e.to_string())?;
        let exact = rampflow::problem1::newton_busemann_pressure(&geom, wall_end)
            .map_err(|e| e.to_string())?
            .value;
        Ok((cells.last().expect("cells").w_p - exact).abs())
    };

    let mut csv = String::from("x,y,mass,px,py,w_p\n");
    let wall_cells = match accrete_wall(&geom, wall_end, dx) {
        Ok(c) => c,
        Err(e) => return fail(2, &e.to_string()),
    };
    for c in &wall_cells {
        let b = geom.eval(c.x).map(|t| t.0).unwrap_or(f64::NAN);
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{}",
            output::fmt(c.x),
            output::fmt(b),
            output::fmt(c.mass),
            output::fmt(c.px),
            output::fmt(c.py),
            output::fmt(c.w_p)
        );
    }

    // Optional layer march against the closed form.
    let mut layer_sup: Option<f64> = None;
    let mut layer_terminated: Option<f64> = None;
    let downstream = match problem.kind {
        ProblemKind::P1 => None,
        ProblemKind::P2 => {
            Some(Downstream::StaticGas { p_bar: problem.dead_gas.as_ref().expect("p2").p_bar })
        }
        ProblemKind::P3 => {
            let jet = problem.jet.as_ref().expect("p3");
            match classify_regime(&geom, jet) {
                Ok(Regime::Attached) => {
                    Some(Downstream::Jet { rho: jet.rho, u: jet.u, v: jet.v })
                }
                // The layer above a vacuum feels nothing from below.
                Ok(_) => Some(Downstream::StaticGas { p_bar: 0.0 }),
                Err(e) => return fail(2, &e.to_string()),
            }
        }
    };
    if let Some(downstream) = downstream {
        let x_star = wall_end;
        let march = match accrete_free_layer(&geom, x_star, downstream, dx, problem.x_max) {
            Ok(m) => m,
            Err(e) => return fail(2, &e.to_string()),
        };
        layer_terminated = march.terminated;
        let reference: Box<dyn Fn(f64) -> Option<f64>> = match problem.kind {
            ProblemKind::P2 => {
                let layer = match free_layer_closed_form(
                    &geom,
                    problem.dead_gas.as_ref().expect("p2"),
                    problem.e0,
                    problem.x_max,
                ) {
                    Ok(l) => l,
                    Err(e) => return fail(2, &e.to_string()),
                };
                Box::new(move |x| layer.y_at_x(x).ok())
            }
            ProblemKind::P3 => {
                let jet = problem.jet.as_ref().expect("p3");
                match classify_regime(&geom, jet) {
                    Ok(Regime::Attached) => {
                        let layer = match rampflow::problem3::attached_layer(
                            &geom,
                            jet,
                            problem.e0,
                            problem.x_max,
                        ) {
                            Ok(l) => l,
                            Err(e) => return fail(2, &e.to_string()),
                        };
                        Box::new(move |x| Some(layer.segment.s(x)))
                    }
                    _ => {
                        let vac = match rampflow::problem3::vacuum_construction(
                            &geom,
                            jet,
                            problem.e0,
                            problem.x_max,
                        ) {
                            Ok(v) => v,
                            Err(e) => return fail(2, &e.to_string()),
                        };
                        Box::new(move |x| vac.upper.s(x).ok())
                    }
                }
            }
            ProblemKind::P1 => unreachable!("no layer for p1"),
        };
        let mut sup = 0.0f64;
        for c in &march.cells {
            if let Some(y_ref) = reference(c.x) {
                sup = sup.max((c.y - y_ref).abs());
            }
            let _ = writeln!(
                csv,
                "{},{},{},{},{},",
                output::fmt(c.x),
                output::fmt(c.y),
                output::fmt(c.mass),
                output::fmt(c.px),
                output::fmt(c.py)
            );
        }
        layer_sup = Some(sup);
    }
    if let Err(e) = std::fs::write(out.join("oracle.csv"), csv) {
        return fail(2, &format!("cannot write oracle.csv: {e}"));
    }

    // Measured order on the wall load across three halvings (skipped when
    // the march is exact, as on straight wedges).
    let order = (|| -> Result<Option<f64>, String> {
        let e0 = wall_err_at(2.0 * dx)?;
        let e1 = wall_err_at(dx)?;
        let e2 = wall_err_at(0.5 * dx)?;
        if e0 < 1e-12 || e2 < 1e-13 {
            return Ok(None);
        }
        Ok(Some(0.5 * ((e0 / e1).log2() + (e1 / e2).log2())))
    })();
    let order = match order {
        Ok(o) => o,
        Err(e) => return fail(2, &e),
    };

    let exact_wp = rampflow::problem1::newton_busemann_pressure(&geom, wall_end)
        .map(|p| p.value)
        .unwrap_or(f64::NAN);
    let last = wall_cells.last().expect("cells");
    let wall_mass_exact = geom.eval(wall_end).map(|t| t.0).unwrap_or(f64::NAN);
    let summary = serde_json::json!({
        "dx": dx,
        "wall_end": wall_end,
        "w_p_march": last.w_p,
        "w_p_closed_form": exact_wp,
        "w_p_rel_err": (last.w_p - exact_wp).abs() / exact_wp.abs().max(1e-300),
        "mass_march": last.mass,
        "mass_exact": wall_mass_exact,
        "mass_rel_err": (last.mass - wall_mass_exact).abs() / wall_mass_exact.abs().max(1e-300),
        "layer_sup_err": layer_sup,
        "layer_terminated_at": layer_terminated,
        "measured_wall_order": order,
    });
    if let Err(e) = std::fs::write(
        out.join("oracle_summary.json"),
        serde_json::to_string_pretty(&summary).expect("serializable"),
    ) {
        return fail(2, &format!("cannot write oracle_summary.json: {e}"));
    }
    println!(
        "oracle: w_p rel err {:.3e}, mass rel err {:.3e}{}",
        (last.w_p - exact_wp).abs() / exact_wp.abs().max(1e-300),
        (last.mass - wall_mass_exact).abs() / wall_mass_exact.abs().max(1e-300),
        layer_sup.map(|s| format!(", layer sup err {s:.3e}")).unwrap_or_default()
    );
    ExitCode::SUCCESS
}
