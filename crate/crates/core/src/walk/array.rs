//! The five-phase STIRAP step: coin, transfer to the aux dot, barrier swap,
//! transfer to the next walk dot, barrier restore.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::state::{measure, ArrayState, BarrierPhase, Distribution, InitialCondition, Level};
use crate::error::{Error, Result};
use crate::propagator::ComplexMatrix;
use crate::pulses::{CoinSchedule, TranslationSchedule};
use crate::stirap::{evolution_2ph, evolution_3ph, GridPolicy};

const UP: usize = Level::Up as usize;
const EXC: usize = Level::Excited as usize;
const AUX: usize = Level::Aux as usize;
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Evolution operators of one walk step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepOperators {
    /// 4x4 in `(↑, ↓, e, A)`.
    pub coin: ComplexMatrix,
    /// 3x3 in `(↑, e, A)`, `↑ → A`.
    pub translate: ComplexMatrix,
    /// 3x3 in `(↑, e, A)`, `A → ↑`.
    pub translate_back: ComplexMatrix,
}

impl StepOperators {
    pub fn new(coin: ComplexMatrix, translate: ComplexMatrix, translate_back: ComplexMatrix) -> Result<Self> {
        if coin.dim() != 4 || translate.dim() != 3 || translate_back.dim() != 3 {
            return Err(Error::Contract(format!(
                "step operators must be 4x4, 3x3, 3x3; got {}, {}, {}",
                coin.dim(),
                translate.dim(),
                translate_back.dim()
            )));
        }
        Ok(Self {
            coin,
            translate,
            translate_back,
        })
    }

    /// Ideal coin `C ⊕ I₂` and the exact `↑ ↔ A` swap for both transfers.
    pub fn ideal(coin: &ComplexMatrix) -> Result<Self> {
        if coin.dim() != 2 {
            return Err(Error::Contract("ideal coin must be 2x2".into()));
        }
        let mut swap = ComplexMatrix::zeros(3);
        swap[(0, 2)] = Complex64::new(1.0, 0.0);
        swap[(2, 0)] = Complex64::new(1.0, 0.0);
        swap[(1, 1)] = Complex64::new(1.0, 0.0);
        Self::new(coin.direct_sum(&ComplexMatrix::identity(2)), swap.clone(), swap)
    }
}

/// Pulse schedules of the three processes of a step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StirapParams {
    pub forward: TranslationSchedule,
    pub reverse: TranslationSchedule,
    pub coin: CoinSchedule,
    pub grid: GridPolicy,
}

impl StirapParams {
    /// The reverse leg is the time mirror of `forward`.
    pub fn new(forward: TranslationSchedule, coin: CoinSchedule, grid: GridPolicy) -> Self {
        Self {
            forward,
            reverse: forward.reversed(),
            coin,
            grid,
        }
    }

    pub fn coin_operator(&self) -> Result<ComplexMatrix> {
        Ok(evolution_3ph(&self.coin, &self.grid)?.matrix)
    }

    pub fn translate_operator(&self) -> Result<ComplexMatrix> {
        Ok(evolution_2ph(&self.forward, &self.grid)?.matrix)
    }

    pub fn translate_back_operator(&self) -> Result<ComplexMatrix> {
        Ok(evolution_2ph(&self.reverse, &self.grid)?.matrix)
    }

    pub fn operators(&self) -> Result<StepOperators> {
        StepOperators::new(
            self.coin_operator()?,
            self.translate_operator()?,
            self.translate_back_operator()?,
        )
    }
}

/// Supplies the operator for each pairing. Called in increasing node order
/// and only for pairings that carry amplitude.
pub trait OperatorSource {
    fn coin(&mut self, node: usize) -> Result<ComplexMatrix>;
    fn translate(&mut self, node: usize) -> Result<ComplexMatrix>;
    /// Pairing of aux `node` with walk `node + 1`.
    fn translate_back(&mut self, node: usize) -> Result<ComplexMatrix>;
}

impl OperatorSource for &StepOperators {
    fn coin(&mut self, _: usize) -> Result<ComplexMatrix> {
        Ok(self.coin.clone())
    }

    fn translate(&mut self, _: usize) -> Result<ComplexMatrix> {
        Ok(self.translate.clone())
    }

    fn translate_back(&mut self, _: usize) -> Result<ComplexMatrix> {
        Ok(self.translate_back.clone())
    }
}

fn check_dim(m: &ComplexMatrix, n: usize) -> Result<()> {
    if m.dim() != n {
        return Err(Error::Contract(format!("expected {n}x{n} operator, got {}x{}", m.dim(), m.dim())));
    }
    Ok(())
}

/// One walk step with the same operators on every pairing.
pub fn stirap_step(state: &ArrayState, ops: &StepOperators) -> Result<ArrayState> {
    let mut s = state.clone();
    stirap_step_with(&mut s, &mut &*ops)?;
    Ok(s)
}

/// One walk step in place, drawing per-pairing operators from `source`.
pub fn stirap_step_with<S: OperatorSource>(state: &mut ArrayState, source: &mut S) -> Result<()> {
    if state.barrier() != BarrierPhase::Original {
        return Err(Error::Contract("a step must start with the original barrier pairing".into()));
    }
    let n = state.n_nodes();

    // (a) coin on (↑, ↓, e, A) of every pairing
    let mut coins = Vec::with_capacity(n);
    for (k, a) in state.nodes().iter().enumerate() {
        coins.push(if a.iter().any(|z| *z != ZERO) {
            let m = source.coin(k)?;
            check_dim(&m, 4)?;
            Some(m)
        } else {
            None
        });
    }
    state.nodes_mut().par_iter_mut().zip(coins.par_iter()).for_each(|(a, m)| {
        if let Some(m) = m {
            *a = apply4(m, a);
        }
    });
    state.check_norm("coin")?;

    // (b) ↑_i → A_i
    let mut ups = Vec::with_capacity(n);
    for (k, a) in state.nodes().iter().enumerate() {
        ups.push(if a[UP] != ZERO || a[EXC] != ZERO || a[AUX] != ZERO {
            let m = source.translate(k)?;
            check_dim(&m, 3)?;
            Some(m)
        } else {
            None
        });
    }
    state.nodes_mut().par_iter_mut().zip(ups.par_iter()).for_each(|(a, m)| {
        if let Some(m) = m {
            let [u, e, x] = apply3(m, [a[UP], a[EXC], a[AUX]]);
            a[UP] = u;
            a[EXC] = e;
            a[AUX] = x;
        }
    });
    state.check_norm("translation to aux")?;

    // (c) re-pair aux i with walk i + 1
    if state.nodes()[n - 1][AUX] != ZERO {
        return Err(Error::Boundary {
            node: n - 1,
            phase: "barrier swap",
        });
    }
    state.set_barrier(BarrierPhase::Swapped);

    // (d) A_i → ↑_{i+1}
    for k in 0..n - 1 {
        let (up, exc, aux) = {
            let nodes = state.nodes();
            (nodes[k + 1][UP], nodes[k + 1][EXC], nodes[k][AUX])
        };
        if up == ZERO && exc == ZERO && aux == ZERO {
            continue;
        }
        let m = source.translate_back(k)?;
        check_dim(&m, 3)?;
        let [u, e, x] = apply3(&m, [up, exc, aux]);
        let nodes = state.nodes_mut();
        nodes[k + 1][UP] = u;
        nodes[k + 1][EXC] = e;
        nodes[k][AUX] = x;
    }
    state.check_norm("translation to walk")?;

    // (e) restore the original pairing
    state.set_barrier(BarrierPhase::Original);
    Ok(())
}

#[inline]
fn apply4(m: &ComplexMatrix, v: &[Complex64; 4]) -> [Complex64; 4] {
    let mut out = [ZERO; 4];
    for (i, o) in out.iter_mut().enumerate() {
        *o = (0..4).map(|j| m[(i, j)] * v[j]).sum();
    }
    out
}

#[inline]
fn apply3(m: &ComplexMatrix, v: [Complex64; 3]) -> [Complex64; 3] {
    let mut out = [ZERO; 3];
    for (i, o) in out.iter_mut().enumerate() {
        *o = (0..3).map(|j| m[(i, j)] * v[j]).sum();
    }
    out
}

/// `n` steps with fixed operators, then [`measure`].
pub fn run_walk_with(n: usize, ops: &StepOperators, init: &ArrayState) -> Result<(ArrayState, Distribution)> {
    run_walk_source(n, &mut &*ops, init)
}

pub(crate) fn run_walk_source<S: OperatorSource>(
    n: usize,
    source: &mut S,
    init: &ArrayState,
) -> Result<(ArrayState, Distribution)> {
    init.check_norm("initial state")?;
    let mut s = init.clone();
    for _ in 0..n {
        stirap_step_with(&mut s, source)?;
    }
    let mut d = measure(&s);
    d.meta.steps = n;
    Ok((s, d))
}

/// Array size used for an `n`-step walk started at the first node.
pub fn walk_nodes(n: usize) -> usize {
    n + 3
}

/// `n` steps of the STIRAP walk, evolution operators computed once.
pub fn run_walk(n: usize, params: &StirapParams, init: &ArrayState) -> Result<(ArrayState, Distribution)> {
    let ops = params.operators()?;
    run_walk_with(n, &ops, init)
}

/// Convenience: the walker starts on node 1 of an array of `walk_nodes(n)`.
pub fn initial_state(n: usize, init: &InitialCondition) -> Result<ArrayState> {
    init.state(walk_nodes(n), init.node)
}
