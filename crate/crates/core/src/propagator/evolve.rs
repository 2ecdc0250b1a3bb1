use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::expm::expm_chebyshev;
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Uniform partition of `[t_start, t_end]` into piecewise-constant slices.
///
/// The requested step is rounded so that a whole number of slices tiles the
/// interval exactly; [`TimeGrid::dt`] is the step actually used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    t_start: f64,
    t_end: f64,
    dt: f64,
    n_slices: usize,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::Parameter(format!("time step must be positive, got {dt}")));
        }
        if !(t_end > t_start) || !t_start.is_finite() || !t_end.is_finite() {
            return Err(Error::Parameter(format!(
                "time window [{t_start}, {t_end}] is empty or non-finite"
            )));
        }
        let n_slices = (((t_end - t_start) / dt).round() as usize).max(1);
        Ok(Self {
            t_start,
            t_end,
            dt: (t_end - t_start) / n_slices as f64,
            n_slices,
        })
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn n_slices(&self) -> usize {
        self.n_slices
    }

    /// Midpoint of slice `k`.
    pub fn midpoint(&self, k: usize) -> f64 {
        self.t_start + (k as f64 + 0.5) * self.dt
    }

    /// End time of slice `k`.
    pub fn slice_end(&self, k: usize) -> f64 {
        if k + 1 == self.n_slices {
            self.t_end
        } else {
            self.t_start + (k as f64 + 1.0) * self.dt
        }
    }
}

/// Ordered product of per-slice exponentials (later slices on the left),
/// each Hamiltonian sampled at its slice midpoint.
pub fn evolve<F>(h_of_t: F, grid: &TimeGrid, tol: f64) -> Result<ComplexMatrix>
where
    F: Fn(f64) -> ComplexMatrix,
{
    evolve_inner(h_of_t, grid, tol, |_, _| {})
}

/// `(t, ψ(t))` after each slice.
pub type StateTrace = Vec<(f64, Vec<Complex64>)>;

/// Like [`evolve`], additionally propagating `psi0` and returning the state
/// after every slice as `(t, ψ(t))`, starting with `(t_start, psi0)`.
pub fn evolve_traced<F>(
    h_of_t: F,
    grid: &TimeGrid,
    tol: f64,
    psi0: &[Complex64],
) -> Result<(ComplexMatrix, StateTrace)>
where
    F: Fn(f64) -> ComplexMatrix,
{
    let mut trace = Vec::with_capacity(grid.n_slices() + 1);
    trace.push((grid.t_start(), psi0.to_vec()));
    let mut psi = psi0.to_vec();
    let u = evolve_inner(h_of_t, grid, tol, |t, step| {
        psi = step.apply(&psi);
        trace.push((t, psi.clone()));
    })?;
    Ok((u, trace))
}

fn evolve_inner<F, G>(h_of_t: F, grid: &TimeGrid, tol: f64, mut on_slice: G) -> Result<ComplexMatrix>
where
    F: Fn(f64) -> ComplexMatrix,
    G: FnMut(f64, &ComplexMatrix),
{
    let mut total: Option<ComplexMatrix> = None;
    let mut scratch: Option<ComplexMatrix> = None;
    for k in 0..grid.n_slices() {
        let h = h_of_t(grid.midpoint(k));
        let step = expm_chebyshev(&h, grid.dt(), tol)?;
        on_slice(grid.slice_end(k), &step);
        match total.as_mut() {
            None => total = Some(step),
            Some(u) => {
                if u.dim() != step.dim() {
                    return Err(Error::Contract(format!(
                        "Hamiltonian dimension changed from {} to {} at t = {}",
                        u.dim(),
                        step.dim(),
                        grid.midpoint(k)
                    )));
                }
                let buf = scratch.get_or_insert_with(|| ComplexMatrix::zeros(u.dim()));
                buf.mul_into(&step, u);
                std::mem::swap(u, buf);
            }
        }
    }
    Ok(total.expect("grid has at least one slice"))
}
