//! Matrix-free reference walks on the coin levels only.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::state::{measure, ArrayState, Distribution, Level};
use crate::error::{Error, Result};
use crate::propagator::ComplexMatrix;
use crate::stirap::{ideal_coin, CoinSpec};

/// Shift applied after the coin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WalkOperator {
    /// `U = T↓₋₁ T↑₊₁ C`.
    U,
    /// `Ũ = T↑₊₁ C`.
    UTilde,
}

const UP: usize = Level::Up as usize;
const DOWN: usize = Level::Down as usize;

/// One application of `op` with the 2x2 `coin` acting on `(↑, ↓)`.
pub fn ideal_step(state: &mut ArrayState, coin: &ComplexMatrix, op: WalkOperator) -> Result<()> {
    if coin.dim() != 2 {
        return Err(Error::Contract(format!("coin must be 2x2, got {}x{}", coin.dim(), coin.dim())));
    }
    let (c00, c01, c10, c11) = (coin[(0, 0)], coin[(0, 1)], coin[(1, 0)], coin[(1, 1)]);
    for a in state.nodes_mut() {
        let (u, d) = (a[UP], a[DOWN]);
        a[UP] = c00 * u + c01 * d;
        a[DOWN] = c10 * u + c11 * d;
    }
    let n = state.n_nodes();
    let zero = Complex64::new(0.0, 0.0);
    if state.nodes()[n - 1][UP] != zero {
        return Err(Error::Boundary {
            node: n - 1,
            phase: "shift ↑",
        });
    }
    if op == WalkOperator::U && state.nodes()[0][DOWN] != zero {
        return Err(Error::Boundary { node: 0, phase: "shift ↓" });
    }
    let nodes = state.nodes_mut();
    for k in (1..n).rev() {
        nodes[k][UP] = nodes[k - 1][UP];
    }
    nodes[0][UP] = zero;
    if op == WalkOperator::U {
        for k in 0..n - 1 {
            nodes[k][DOWN] = nodes[k + 1][DOWN];
        }
        nodes[n - 1][DOWN] = zero;
    }
    state.check_norm("ideal step")
}

/// States after 0, 1, …, `n` steps.
pub fn ideal_states(op: WalkOperator, n: usize, coin: &ComplexMatrix, init: &ArrayState) -> Result<Vec<ArrayState>> {
    if init.level_population(Level::Excited) != 0.0 || init.level_population(Level::Aux) != 0.0 {
        return Err(Error::Contract("the ideal walk acts on ↑ and ↓ only".into()));
    }
    init.check_norm("initial state")?;
    let mut out = Vec::with_capacity(n + 1);
    let mut s = init.clone();
    out.push(s.clone());
    for _ in 0..n {
        ideal_step(&mut s, coin, op)?;
        out.push(s.clone());
    }
    Ok(out)
}

/// Distribution after `n` steps of `op` with an arbitrary 2x2 coin.
pub fn ideal_walk(op: WalkOperator, n: usize, coin: &ComplexMatrix, init: &ArrayState) -> Result<Distribution> {
    if init.level_population(Level::Excited) != 0.0 || init.level_population(Level::Aux) != 0.0 {
        return Err(Error::Contract("the ideal walk acts on ↑ and ↓ only".into()));
    }
    init.check_norm("initial state")?;
    let mut s = init.clone();
    for _ in 0..n {
        ideal_step(&mut s, coin, op)?;
    }
    let mut d = measure(&s);
    d.meta.steps = n;
    Ok(d)
}

pub fn ideal_walk_u(n: usize, c: &CoinSpec, init: &ArrayState) -> Result<Distribution> {
    let mut d = ideal_walk(WalkOperator::U, n, &ideal_coin(c), init)?;
    d.meta.coin = Some(*c);
    Ok(d)
}

pub fn ideal_walk_utilde(n: usize, c: &CoinSpec, init: &ArrayState) -> Result<Distribution> {
    let mut d = ideal_walk(WalkOperator::UTilde, n, &ideal_coin(c), init)?;
    d.meta.coin = Some(*c);
    Ok(d)
}
