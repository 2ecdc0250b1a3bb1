use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rectangular `(energy, ΔT)` search region sampled on a `resolution²` grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchBox {
    pub e_range: [f64; 2],
    pub dt_range: [f64; 2],
    pub resolution: usize,
}

impl Default for SearchBox {
    fn default() -> Self {
        Self {
            e_range: [0.25, 3.0],
            dt_range: [1.0, 15.0],
            resolution: 30,
        }
    }
}

impl SearchBox {
    pub fn new(e_range: [f64; 2], dt_range: [f64; 2], resolution: usize) -> Result<Self> {
        let b = Self {
            e_range,
            dt_range,
            resolution,
        };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |r: [f64; 2]| r[0].is_finite() && r[1].is_finite() && r[0] < r[1];
        if !ok(self.e_range) || !ok(self.dt_range) {
            return Err(Error::Parameter(format!(
                "search ranges must satisfy min < max, got E {:?}, ΔT {:?}",
                self.e_range, self.dt_range
            )));
        }
        if self.resolution < 2 {
            return Err(Error::Parameter(format!("resolution must be at least 2, got {}", self.resolution)));
        }
        Ok(())
    }

    fn axis(r: [f64; 2], n: usize) -> Vec<f64> {
        (0..n)
            .map(|k| {
                if k + 1 == n {
                    r[1]
                } else {
                    r[0] + (r[1] - r[0]) * k as f64 / (n - 1) as f64
                }
            })
            .collect()
    }

    pub fn energies(&self) -> Vec<f64> {
        Self::axis(self.e_range, self.resolution)
    }

    pub fn delta_ts(&self) -> Vec<f64> {
        Self::axis(self.dt_range, self.resolution)
    }

    pub fn contains(&self, e: f64, dt: f64) -> bool {
        (self.e_range[0]..=self.e_range[1]).contains(&e) && (self.dt_range[0]..=self.dt_range[1]).contains(&dt)
    }

    pub fn clamp(&self, p: [f64; 2]) -> [f64; 2] {
        [
            p[0].clamp(self.e_range[0], self.e_range[1]),
            p[1].clamp(self.dt_range[0], self.dt_range[1]),
        ]
    }

    /// True when `p` lies within a 1e-6 fraction of the box width of an edge.
    pub fn on_boundary(&self, p: [f64; 2]) -> bool {
        let near = |x: f64, r: [f64; 2]| {
            let eps = 1e-6 * (r[1] - r[0]);
            (x - r[0]).abs() <= eps || (r[1] - x).abs() <= eps
        };
        near(p[0], self.e_range) || near(p[1], self.dt_range)
    }
}

/// Cost samples over a [`SearchBox`]; `values[row][col]` is at
/// `(energies[col], delta_ts[row])`. Failed evaluations are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Surface {
    pub energies: Vec<f64>,
    pub delta_ts: Vec<f64>,
    pub values: Vec<Vec<Option<f64>>>,
}

/// Location and value of one grid sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
    pub energy: f64,
    pub delta_t: f64,
    pub cost: f64,
}

/// Connected low-cost regions of a surface.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasinReport {
    /// Cost level defining the low region.
    pub level: f64,
    /// One entry per 8-connected component, deepest first.
    pub basins: Vec<Basin>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Basin {
    pub cells: usize,
    pub minimum: Cell,
}

impl BasinReport {
    /// Fraction of low cells that belong to the deepest basin.
    pub fn dominant_share(&self) -> f64 {
        let total: usize = self.basins.iter().map(|b| b.cells).sum();
        match self.basins.first() {
            Some(b) if total > 0 => b.cells as f64 / total as f64,
            _ => 0.0,
        }
    }
}

/// Evaluates `cost` on every grid node. Evaluation order does not affect the
/// result.
pub fn grid_scan<F>(cost: F, b: &SearchBox) -> Result<Surface>
where
    F: Fn(f64, f64) -> Result<f64> + Sync,
{
    b.validate()?;
    let energies = b.energies();
    let delta_ts = b.delta_ts();
    let n = b.resolution;
    let flat: Vec<Option<f64>> = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let (row, col) = (k / n, k % n);
            cost(energies[col], delta_ts[row]).ok().filter(|v| v.is_finite())
        })
        .collect();
    let values = flat.chunks(n).map(|r| r.to_vec()).collect();
    Ok(Surface {
        energies,
        delta_ts,
        values,
    })
}

impl Surface {
    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.values.iter().enumerate().flat_map(move |(row, r)| {
            r.iter().enumerate().filter_map(move |(col, v)| {
                v.map(|cost| Cell {
                    row,
                    col,
                    energy: self.energies[col],
                    delta_t: self.delta_ts[row],
                    cost,
                })
            })
        })
    }

    /// Lowest sample; the first in row-major order wins ties.
    pub fn best(&self) -> Option<Cell> {
        self.cells().fold(None, |acc: Option<Cell>, c| match acc {
            Some(a) if a.cost <= c.cost => Some(a),
            _ => Some(c),
        })
    }

    pub fn missing(&self) -> usize {
        self.values.iter().flatten().filter(|v| v.is_none()).count()
    }

    /// True when every sample is equal to within `1e-12` relative.
    pub fn is_flat(&self) -> bool {
        let (lo, hi) = self
            .cells()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), c| (lo.min(c.cost), hi.max(c.cost)));
        lo.is_finite() && hi - lo <= 1e-12 * hi.abs().max(1.0)
    }

    fn median(&self) -> Option<f64> {
        let mut v: Vec<f64> = self.cells().map(|c| c.cost).collect();
        if v.is_empty() {
            return None;
        }
        v.sort_by(|a, b| a.total_cmp(b));
        let m = v.len() / 2;
        Some(if v.len() % 2 == 1 { v[m] } else { 0.5 * (v[m - 1] + v[m]) })
    }

    /// Splits `{cost ≤ min + fraction · (median − min)}` into 8-connected
    /// components.
    pub fn basins(&self, fraction: f64) -> BasinReport {
        let (Some(best), Some(median)) = (self.best(), self.median()) else {
            return BasinReport {
                level: f64::NAN,
                basins: Vec::new(),
            };
        };
        let level = best.cost + fraction * (median - best.cost);
        let rows = self.delta_ts.len();
        let cols = self.energies.len();
        let low = |r: usize, c: usize| self.values[r][c].is_some_and(|v| v <= level);
        let mut seen = vec![false; rows * cols];
        let mut basins = Vec::new();
        for r0 in 0..rows {
            for c0 in 0..cols {
                if seen[r0 * cols + c0] || !low(r0, c0) {
                    continue;
                }
                seen[r0 * cols + c0] = true;
                let mut stack = vec![(r0, c0)];
                let mut cells = 0;
                let mut min: Option<Cell> = None;
                while let Some((r, c)) = stack.pop() {
                    cells += 1;
                    let cost = self.values[r][c].unwrap_or(f64::INFINITY);
                    if min.is_none_or(|m| cost < m.cost || (cost == m.cost && (r, c) < (m.row, m.col))) {
                        min = Some(Cell {
                            row: r,
                            col: c,
                            energy: self.energies[c],
                            delta_t: self.delta_ts[r],
                            cost,
                        });
                    }
                    for dr in -1i64..=1 {
                        for dc in -1i64..=1 {
                            let (nr, nc) = (r as i64 + dr, c as i64 + dc);
                            if nr < 0 || nc < 0 || nr >= rows as i64 || nc >= cols as i64 {
                                continue;
                            }
                            let (nr, nc) = (nr as usize, nc as usize);
                            if !seen[nr * cols + nc] && low(nr, nc) {
                                seen[nr * cols + nc] = true;
                                stack.push((nr, nc));
                            }
                        }
                    }
                }
                basins.push(Basin {
                    cells,
                    minimum: min.expect("component has at least one cell"),
                });
            }
        }
        basins.sort_by(|a, b| a.minimum.cost.total_cmp(&b.minimum.cost).then(b.cells.cmp(&a.cells)));
        BasinReport { level, basins }
    }

    /// CSV with a header of energies, ΔT in the first column and empty
    /// fields for missing samples.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::Numeric(format!("csv write failed: {e}"));
        let mut header = vec!["delta_t\\energy".to_string()];
        header.extend(self.energies.iter().map(|e| e.to_string()));
        out.write_record(&header).map_err(io)?;
        for (dt, row) in self.delta_ts.iter().zip(&self.values) {
            let mut rec = vec![dt.to_string()];
            rec.extend(row.iter().map(|v| v.map(|x| format!("{x:e}")).unwrap_or_default()));
            out.write_record(&rec).map_err(io)?;
        }
        out.flush().map_err(|e| Error::Numeric(format!("csv flush failed: {e}")))?;
        Ok(())
    }
}
