//! Brute-force evaluation of
//!
//! ```text
//! E(a, b) = ∫₀^π ∫₀^π √(1 + a cos x + b cos y) dx dy
//! ```
//!
//! by tensor-product Gauss-Legendre, plus the one-dimensional `b = 0` slice.
//! The node count per axis doubles per level until two successive levels
//! agree. Close to `|a| + |b| = 1` the integrand vanishes like a cone at
//! `(π, π)`; the cell holding that point is split dyadically before the
//! doubling loop starts.

use crate::error::Result;
use crate::gauss_legendre::gauss_legendre;
use crate::reduction::Amplitudes;
use crate::scalar::Scalar;
use crate::tolerance::ToleranceConfig;

/// Dyadic splits toward the singular corner.
pub const CORNER_LEVELS: usize = 3;
/// Corner refinement kicks in above this `|a| + |b|`.
pub const CORNER_THRESHOLD: f64 = 0.9;
/// Points with `1 − |a| − |b|` below this use the looser boundary target.
pub const BOUNDARY_BAND: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadResult<T> {
    pub value: T,
    /// `|I_last − I_previous|` between the last two levels.
    pub error_estimate: T,
    pub levels_used: usize,
    /// Integrand evaluations summed over all levels.
    pub nodes_total: usize,
    pub converged: bool,
    /// Level-to-level differences, one per level after the first.
    pub level_deltas: Vec<T>,
}

#[derive(Debug, Clone, Copy)]
struct Cell<T> {
    x: (T, T),
    y: (T, T),
}

fn cells<T: Scalar>(refine_corner: bool) -> Vec<Cell<T>> {
    let pi = T::PI();
    let whole = Cell {
        x: (T::zero(), pi),
        y: (T::zero(), pi),
    };
    if !refine_corner {
        return vec![whole];
    }
    let two = T::lit(2.0);
    let mut out = Vec::with_capacity(3 * CORNER_LEVELS + 1);
    let mut corner = whole;
    for _ in 0..CORNER_LEVELS {
        let xm = (corner.x.0 + corner.x.1) / two;
        let ym = (corner.y.0 + corner.y.1) / two;
        out.push(Cell {
            x: (corner.x.0, xm),
            y: (corner.y.0, ym),
        });
        out.push(Cell {
            x: (xm, corner.x.1),
            y: (corner.y.0, ym),
        });
        out.push(Cell {
            x: (corner.x.0, xm),
            y: (ym, corner.y.1),
        });
        corner = Cell {
            x: (xm, corner.x.1),
            y: (ym, corner.y.1),
        };
    }
    out.push(corner);
    out
}

/// Oracle target for a point with margin `1 − |a| − |b|`.
pub fn default_quad_tol<T: Scalar>(margin: T) -> T {
    let floor = T::epsilon() * T::lit(64.0);
    if margin < T::lit(BOUNDARY_BAND) {
        T::lit(1e-8).max(floor)
    } else {
        T::lit(1e-11).max(floor)
    }
}

fn effective_tol<T: Scalar>(margin: T, cfg: &ToleranceConfig<T>) -> T {
    cfg.quad_rel_tol
        .unwrap_or_else(|| default_quad_tol(margin))
        .max(cfg.rel_tol)
}

/// Runs the node-doubling loop over `level_value(n) -> (value, evaluations)`.
fn doubling_loop<T: Scalar, F>(
    tol: T,
    cfg: &ToleranceConfig<T>,
    mut level_value: F,
) -> QuadResult<T>
where
    F: FnMut(usize) -> (T, usize),
{
    let mut nodes_total = 0usize;
    let mut deltas = Vec::new();
    let mut prev: Option<T> = None;
    let mut value = T::zero();
    let mut levels_used = 0usize;
    let mut converged = false;
    for level in 0..cfg.quad_max_levels {
        let n = cfg.quad_base_nodes << level;
        let (v, evals) = level_value(n);
        nodes_total += evals;
        levels_used = level + 1;
        value = v;
        if let Some(p) = prev {
            let delta = (v - p).abs();
            deltas.push(delta);
            if delta <= (tol * v.abs()).max(cfg.abs_tol) {
                converged = true;
                break;
            }
        }
        prev = Some(v);
    }
    let error_estimate = deltas.last().copied().unwrap_or_else(|| value.abs());
    QuadResult {
        value,
        error_estimate,
        levels_used,
        nodes_total,
        converged,
        level_deltas: deltas,
    }
}

fn tensor_level<T: Scalar>(a: T, b: T, n: usize, cells: &[Cell<T>]) -> (T, usize) {
    let rule = gauss_legendre::<T>(n);
    let mut total = T::zero();
    let mut xs: Vec<(T, T)> = Vec::with_capacity(n);
    let mut ys: Vec<(T, T)> = Vec::with_capacity(n);
    for cell in cells {
        xs.clear();
        ys.clear();
        xs.extend(
            rule.mapped(cell.x.0, cell.x.1)
                .map(|(x, w)| (T::one() + a * x.cos(), w)),
        );
        ys.extend(
            rule.mapped(cell.y.0, cell.y.1)
                .map(|(y, w)| (b * y.cos(), w)),
        );
        let mut cell_sum = T::zero();
        for &(cx, wx) in &xs {
            let row: T = ys
                .iter()
                .map(|&(cy, wy)| wy * (cx + cy).max(T::zero()).sqrt())
                .sum();
            cell_sum = cell_sum + wx * row;
        }
        total = total + cell_sum;
    }
    (total, n * n * cells.len())
}

/// Tensor-product Gauss-Legendre value of `E(a, b)`.
///
/// Signs are reduced first; the corner `(π, π)` is refined when
/// `|a| + |b| > 0.9`. Non-convergence is not an error: the result carries
/// `converged = false` and its last level difference.
pub fn quad2d<T: Scalar>(p: Amplitudes<T>, cfg: &ToleranceConfig<T>) -> Result<QuadResult<T>> {
    cfg.validate()?;
    let p = p.abs();
    let (a, b) = (p.a(), p.b());
    let tol = effective_tol(p.margin(), cfg);
    let grid = cells::<T>(a + b > T::lit(CORNER_THRESHOLD));
    Ok(doubling_loop(tol, cfg, |n| tensor_level(a, b, n, &grid)))
}

/// Gauss-Legendre value of `∫₀^π √(1 + a cos x) dx` for `|a| ≤ 1`.
pub fn quad1d<T: Scalar>(a: T, cfg: &ToleranceConfig<T>) -> Result<QuadResult<T>> {
    cfg.validate()?;
    let p = Amplitudes::new(a, T::zero())?.abs();
    let a = p.a();
    let tol = effective_tol(p.margin(), cfg);
    Ok(doubling_loop(tol, cfg, |n| {
        let rule = gauss_legendre::<T>(n);
        let v = rule.integrate(T::zero(), T::PI(), |x| {
            (T::one() + a * x.cos()).max(T::zero()).sqrt()
        });
        (v, n)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cfg() -> ToleranceConfig<f64> {
        ToleranceConfig::default()
    }

    fn amp(a: f64, b: f64) -> Amplitudes<f64> {
        Amplitudes::new(a, b).unwrap()
    }

    #[test]
    fn constant_integrand() {
        let r = quad2d(amp(0.0, 0.0), &cfg()).unwrap();
        assert!((r.value - PI * PI).abs() < 1e-13);
        assert!(r.converged);
        assert_eq!(r.levels_used, 2);
        let r = quad1d(0.0, &cfg()).unwrap();
        assert!((r.value - PI).abs() < 1e-14);
    }

    #[test]
    fn one_dimensional_endpoint() {
        let r = quad1d(1.0, &cfg()).unwrap();
        assert!((r.value - 2.0 * 2f64.sqrt()).abs() < 1e-13);
        assert!(r.converged);
        assert!(quad1d(1.5, &cfg()).is_err());
    }

    #[test]
    fn corner_cells_tile_the_square() {
        let cs = cells::<f64>(true);
        assert_eq!(cs.len(), 3 * CORNER_LEVELS + 1);
        let area: f64 = cs.iter().map(|c| (c.x.1 - c.x.0) * (c.y.1 - c.y.0)).sum();
        assert!((area - PI * PI).abs() < 1e-14);
        let last = cs.last().unwrap();
        assert_eq!(last.x.1, PI);
        assert!((last.x.1 - last.x.0 - PI / 8.0).abs() < 1e-15);
    }

    #[test]
    fn level_cap_reports_non_convergence() {
        let mut c = cfg();
        c.quad_base_nodes = 2;
        c.quad_max_levels = 2;
        let r = quad2d(amp(0.6, 0.3), &c).unwrap();
        assert!(!r.converged);
        assert_eq!(r.levels_used, 2);
        assert_eq!(r.nodes_total, 4 + 16);
        assert!(r.error_estimate > 1e-11);
    }

    #[test]
    fn default_targets() {
        assert_eq!(default_quad_tol(0.5f64), 1e-11);
        assert_eq!(default_quad_tol(0.01f64), 1e-8);
        let c = cfg().with_rel_tol(1e-3);
        assert_eq!(effective_tol(0.5, &c), 1e-3);
    }
}
