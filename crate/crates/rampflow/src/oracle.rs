//! Independent discrete flux-balance check ("sticky accretion"): march in x
//! enforcing exact cell-wise mass and momentum balance for the concentrated
//! layer, using nothing but the wall shape and the raw downstream data. The
//! fixed-step limit of the march is the layer system the solvers integrate
//! in closed form, so agreement here validates those formulas without ever
//! evaluating them.

use crate::error::{Error, Result};
use crate::geometry::Geometry;
use serde::Serialize;

/// Marching state of the concentrated layer.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AccretionState {
    pub x: f64,
    pub y: f64,
    /// Layer mass flux through the vertical section at x.
    pub mass: f64,
    /// Layer momentum fluxes.
    pub px: f64,
    pub py: f64,
}

/// Per-cell result of the wall march.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct WallCell {
    pub x: f64,
    pub mass: f64,
    pub px: f64,
    pub py: f64,
    /// Wall-load estimate: normal impulse per unit arc length.
    pub w_p: f64,
}

/// March along the wall from the origin, capturing oncoming gas and
/// projecting the layer momentum onto the wall tangent each cell; the
/// projection impulse per arc length estimates the wall load.
///
/// The state after cell i is reported at its right edge `x = (i+1) dx`.
pub fn accrete_wall(geom: &Geometry, x_end: f64, dx: f64) -> Result<Vec<WallCell>> {
    if !(dx > 0.0 && x_end > 0.0) {
        return Err(Error::InvalidArgument("need dx > 0 and x_end > 0".into()));
    }
    let n = (x_end / dx).round().max(1.0) as usize;
    let mut cells = Vec::with_capacity(n);
    let mut mass = 0.0;
    let mut px = 0.0;
    let mut py = 0.0;
    let mut b_prev = geom.eval(0.0)?.0;
    for i in 0..n {
        let x1 = ((i + 1) as f64 * dx).min(x_end);
        let (b1, d1, _) = geom.eval(x1)?;
        // Capture: oncoming stream (rho u = 1) through the height increment.
        let db = b1 - b_prev;
        mass += db;
        px += db;
        // Normal impulse restoring tangency against the local slope.
        let r = (1.0 + d1 * d1).sqrt();
        let j = (d1 * px - py) / r;
        px -= j * d1 / r;
        py += j / r;
        cells.push(WallCell { x: x1, mass, px, py, w_p: j / (r * dx) });
        b_prev = b1;
    }
    Ok(cells)
}

/// What sits below a marching free layer.
#[derive(Debug, Clone, Copy)]
pub enum Downstream {
    /// Static gas pressing with constant pressure.
    StaticGas { p_bar: f64 },
    /// Pressureless jet captured by the layer.
    Jet { rho: f64, u: f64, v: f64 },
}

/// Per-cell state of the free-layer march.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LayerCell {
    pub x: f64,
    pub y: f64,
    pub mass: f64,
    pub px: f64,
    pub py: f64,
}

/// Result of a free-layer march. `terminated` carries the abscissa where
/// the layer momentum degenerated (the roll-up detector).
#[derive(Debug, Clone, Serialize)]
pub struct FreeLayerMarch {
    pub cells: Vec<LayerCell>,
    pub terminated: Option<f64>,
}

/// March a free layer from `(x_star, b(x_star))`, inheriting its fluxes
/// from a wall march at the same step.
pub fn accrete_free_layer(
    geom: &Geometry,
    x_star: f64,
    downstream: Downstream,
    dx: f64,
    x_end: f64,
) -> Result<FreeLayerMarch> {
    if !(x_end > x_star) {
        return Err(Error::InvalidArgument("x_end must exceed x_star".into()));
    }
    let wall = accrete_wall(geom, x_star, dx)?;
    let last = wall.last().expect("wall march is non-empty");
    let mut state = AccretionState {
        x: x_star,
        y: geom.eval(x_star)?.0,
        mass: last.mass,
        px: last.px,
        py: last.py,
    };
    let n = ((x_end - x_star) / dx).ceil() as usize;
    let mut cells = Vec::with_capacity(n + 1);
    cells.push(LayerCell { x: state.x, y: state.y, mass: state.mass, px: state.px, py: state.py });
    for _ in 0..n {
        if state.px <= 0.0 || !state.px.is_finite() {
            return Ok(FreeLayerMarch { cells, terminated: Some(state.x) });
        }
        let slope = state.py / state.px;
        if slope.abs() > 1e6 {
            return Ok(FreeLayerMarch { cells, terminated: Some(state.x) });
        }
        let dy = slope * dx;
        state.x += dx;
        state.y += dy;
        // Capture from above: the oncoming stream crosses a rising layer.
        let captured = dy.max(0.0);
        state.mass += captured;
        state.px += captured;
        match downstream {
            Downstream::StaticGas { p_bar } => {
                // Pressure impulse along the upward normal (-s', 1) per dx.
                state.px -= p_bar * slope * dx;
                state.py += p_bar * dx;
            }
            Downstream::Jet { rho, u, v } => {
                // Jet gas overtaking the layer from below.
                let rate = rho * (v - u * slope) * dx;
                state.mass += rate;
                state.px += rate * u;
                state.py += rate * v;
            }
        }
        cells.push(LayerCell {
            x: state.x,
            y: state.y,
            mass: state.mass,
            px: state.px,
            py: state.py,
        });
    }
    Ok(FreeLayerMarch { cells, terminated: None })
}
