//! Bounded two-parameter Nelder–Mead.

use serde::{Deserialize, Serialize};

use super::surface::SearchBox;

pub const DEFAULT_EVALUATION_CAP: usize = 2000;

/// Relative size of the initial simplex edges.
const INITIAL_STEP: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefineResult {
    pub point: [f64; 2],
    pub cost: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Downhill-simplex minimization inside `bounds`, starting from `start`.
///
/// Stops when the spread of costs across the simplex drops below `tol` or
/// after `cap` evaluations. Failed or non-finite evaluations count as +∞.
/// The returned cost never exceeds the cost at `start`.
pub fn nelder_mead<F>(cost: F, start: [f64; 2], bounds: &SearchBox, tol: f64, cap: usize) -> RefineResult
where
    F: Fn(f64, f64) -> f64,
{
    let evaluations = std::cell::Cell::new(0usize);
    let eval = |p: [f64; 2]| {
        evaluations.set(evaluations.get() + 1);
        let v = cost(p[0], p[1]);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };

    let x0 = bounds.clamp(start);
    let mut simplex = vec![x0];
    for axis in 0..2 {
        let mut p = x0;
        let step = INITIAL_STEP * if p[axis] != 0.0 { p[axis].abs() } else { 1.0 };
        p[axis] += step;
        if bounds.clamp(p) != p {
            p[axis] = x0[axis] - step;
        }
        simplex.push(bounds.clamp(p));
    }
    let mut f: Vec<f64> = simplex.iter().map(|&p| eval(p)).collect();
    let (mut best_p, mut best_f) = (x0, f[0]);
    let mut converged = false;

    while evaluations.get() < cap {
        let mut order = [0usize, 1, 2];
        order.sort_by(|&a, &b| f[a].total_cmp(&f[b]));
        let s: Vec<[f64; 2]> = order.iter().map(|&i| simplex[i]).collect();
        let fs: Vec<f64> = order.iter().map(|&i| f[i]).collect();
        simplex = s;
        f = fs;
        if f[0] < best_f {
            best_f = f[0];
            best_p = simplex[0];
        }
        let spread = f[2] - f[0];
        if spread.is_finite() && spread < tol {
            converged = true;
            break;
        }

        let centroid = [
            0.5 * (simplex[0][0] + simplex[1][0]),
            0.5 * (simplex[0][1] + simplex[1][1]),
        ];
        let along = |t: f64| bounds.clamp([
            centroid[0] + t * (simplex[2][0] - centroid[0]),
            centroid[1] + t * (simplex[2][1] - centroid[1]),
        ]);

        let xr = along(-1.0);
        let fr = eval(xr);
        if fr < f[0] {
            let xe = along(-2.0);
            let fe = eval(xe);
            if fe < fr {
                simplex[2] = xe;
                f[2] = fe;
            } else {
                simplex[2] = xr;
                f[2] = fr;
            }
        } else if fr < f[1] {
            simplex[2] = xr;
            f[2] = fr;
        } else {
            let (xc, fc) = if fr < f[2] {
                let x = along(-0.5);
                (x, eval(x))
            } else {
                let x = along(0.5);
                (x, eval(x))
            };
            if fc < f[2].min(fr) {
                simplex[2] = xc;
                f[2] = fc;
            } else {
                for i in 1..3 {
                    simplex[i] = [
                        simplex[0][0] + 0.5 * (simplex[i][0] - simplex[0][0]),
                        simplex[0][1] + 0.5 * (simplex[i][1] - simplex[0][1]),
                    ];
                    f[i] = eval(simplex[i]);
                }
            }
        }
    }
    for (p, &v) in simplex.iter().zip(&f) {
        if v < best_f {
            best_f = v;
            best_p = *p;
        }
    }
    RefineResult {
        point: best_p,
        cost: best_f,
        evaluations: evaluations.get(),
        converged,
    }
}
