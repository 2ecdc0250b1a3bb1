//! Two-parameter minimization of the STIRAP cost functions over
//! `(peak energy, ΔT)`: a dense grid scan seeds a bounded Nelder–Mead.

mod simplex;
mod surface;

pub use simplex::{nelder_mead, RefineResult, DEFAULT_EVALUATION_CAP};
pub use surface::{grid_scan, Basin, BasinReport, Cell, SearchBox, Surface};

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pulses::{make_coin_schedule, make_translation_schedule, CoinPhases, CoinSchedule, TranslationSchedule};
use crate::stirap::{cost_coin, evolution_2ph, evolution_3ph, CoinCostTarget, GridPolicy, TranslationCost};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Optimum {
    pub e_star: f64,
    pub dt_star: f64,
    pub cost: f64,
    pub evaluations: usize,
    pub converged: bool,
    pub on_boundary: bool,
    /// The scanned surface was flat, so the location carries no information.
    pub degenerate: bool,
    pub surface: Option<Surface>,
}

/// Nelder–Mead from `start` within `bounds`. Evaluation errors count as +∞.
pub fn refine<F>(cost: F, start: [f64; 2], bounds: &SearchBox, tol: f64) -> Result<Optimum>
where
    F: Fn(f64, f64) -> Result<f64>,
{
    bounds.validate()?;
    if !(tol > 0.0) {
        return Err(Error::Parameter(format!("refine tolerance must be positive, got {tol}")));
    }
    if !bounds.contains(start[0], start[1]) {
        return Err(Error::Parameter(format!("start {start:?} lies outside the search box")));
    }
    let r = nelder_mead(
        |e, dt| cost(e, dt).unwrap_or(f64::INFINITY),
        start,
        bounds,
        tol,
        DEFAULT_EVALUATION_CAP,
    );
    Ok(Optimum {
        e_star: r.point[0],
        dt_star: r.point[1],
        cost: r.cost,
        evaluations: r.evaluations,
        converged: r.converged,
        on_boundary: bounds.on_boundary(r.point),
        degenerate: false,
        surface: None,
    })
}

/// Grid scan followed by refinement from the best cell.
pub fn scan_and_refine<F>(cost: F, bounds: &SearchBox, tol: f64) -> Result<Optimum>
where
    F: Fn(f64, f64) -> Result<f64> + Sync,
{
    let surface = grid_scan(&cost, bounds)?;
    let best = surface
        .best()
        .ok_or_else(|| Error::Numeric("every grid evaluation failed".into()))?;
    let mut opt = refine(&cost, [best.energy, best.delta_t], bounds, tol)?;
    opt.evaluations += bounds.resolution * bounds.resolution;
    opt.degenerate = surface.is_flat();
    opt.surface = Some(surface);
    Ok(opt)
}

/// Parameters held fixed while `(Ē_p, ΔT)` of a translation are optimized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TranslationFixed {
    pub e_s: f64,
    pub sigma_p: f64,
    pub sigma_s: f64,
    pub alpha_p: f64,
    pub alpha_s: f64,
    pub cost: TranslationCost,
    pub grid: GridPolicy,
    pub tol: f64,
}

impl Default for TranslationFixed {
    fn default() -> Self {
        Self {
            e_s: 1.5,
            sigma_p: 4.0,
            sigma_s: 4.0,
            alpha_p: 0.0,
            alpha_s: 0.0,
            cost: TranslationCost::default(),
            grid: GridPolicy::default(),
            tol: 1e-10,
        }
    }
}

impl TranslationFixed {
    pub fn schedule(&self, e_p: f64, delta_t: f64) -> Result<TranslationSchedule> {
        make_translation_schedule(
            e_p,
            self.e_s,
            self.sigma_p,
            self.sigma_s,
            self.alpha_p,
            self.alpha_s,
            delta_t,
            false,
        )
    }

    pub fn cost_at(&self, e_p: f64, delta_t: f64) -> Result<f64> {
        let u = evolution_2ph(&self.schedule(e_p, delta_t)?, &self.grid)?;
        self.cost.evaluate(&u.matrix)
    }
}

/// Parameters held fixed while `(Ē_b, ΔT)` of a coin are optimized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CoinFixed {
    pub e_a: f64,
    pub sigma: f64,
    pub phases: CoinPhases,
    /// Separation of the two central pulse groups; `None` uses ΔT.
    pub gap: Option<f64>,
    pub target: CoinCostTarget,
    pub grid: GridPolicy,
    pub tol: f64,
}

impl Default for CoinFixed {
    fn default() -> Self {
        Self {
            e_a: 1.0,
            sigma: 4.0,
            phases: CoinPhases::symmetric(FRAC_PI_2),
            gap: None,
            target: CoinCostTarget::default(),
            grid: GridPolicy::default(),
            tol: 1e-10,
        }
    }
}

impl CoinFixed {
    pub fn schedule(&self, e_b: f64, delta_t: f64) -> Result<CoinSchedule> {
        make_coin_schedule(self.e_a, e_b, self.sigma, &self.phases, delta_t, self.gap)
    }

    pub fn cost_at(&self, e_b: f64, delta_t: f64) -> Result<f64> {
        let u = evolution_3ph(&self.schedule(e_b, delta_t)?, &self.grid)?;
        cost_coin(&u.matrix, self.target)
    }
}

pub fn optimize_translation(fixed: &TranslationFixed, bounds: &SearchBox) -> Result<Optimum> {
    scan_and_refine(|e, dt| fixed.cost_at(e, dt), bounds, fixed.tol)
}

pub fn optimize_coin(fixed: &CoinFixed, bounds: &SearchBox) -> Result<Optimum> {
    scan_and_refine(|e, dt| fixed.cost_at(e, dt), bounds, fixed.tol)
}
