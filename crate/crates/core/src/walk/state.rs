use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stirap::CoinSpec;

/// Levels of one node; the numeric value is the index in the 3-photon basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    Up = 0,
    Down = 1,
    Excited = 2,
    Aux = 3,
}

/// Which walk node each auxiliary dot is paired with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BarrierPhase {
    /// Aux `i` with walk `i`.
    Original,
    /// Aux `i` with walk `i + 1`.
    Swapped,
}

/// Amplitudes over a finite line of nodes. Each node carries its walk-dot
/// levels `↑, ↓, e` and the aux level `A` of the aux dot with the same index.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayState {
    first_label: i64,
    nodes: Vec<[Complex64; 4]>,
    barrier: BarrierPhase,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

impl ArrayState {
    /// All-zero state on nodes `first_label .. first_label + n_nodes`.
    pub fn zeros(n_nodes: usize, first_label: i64) -> Result<Self> {
        if n_nodes == 0 {
            return Err(Error::Parameter("array needs at least one node".into()));
        }
        Ok(Self {
            first_label,
            nodes: vec![[ZERO; 4]; n_nodes],
            barrier: BarrierPhase::Original,
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn first_label(&self) -> i64 {
        self.first_label
    }

    pub fn last_label(&self) -> i64 {
        self.first_label + self.nodes.len() as i64 - 1
    }

    pub fn barrier(&self) -> BarrierPhase {
        self.barrier
    }

    pub(crate) fn set_barrier(&mut self, b: BarrierPhase) {
        self.barrier = b;
    }

    pub fn label_of(&self, index: usize) -> i64 {
        self.first_label + index as i64
    }

    fn index_of(&self, label: i64) -> Result<usize> {
        let k = label - self.first_label;
        if k < 0 || k >= self.nodes.len() as i64 {
            return Err(Error::Contract(format!(
                "node {label} outside [{}, {}]",
                self.first_label,
                self.last_label()
            )));
        }
        Ok(k as usize)
    }

    pub fn amplitude(&self, label: i64, level: Level) -> Result<Complex64> {
        Ok(self.nodes[self.index_of(label)?][level as usize])
    }

    pub fn set_amplitude(&mut self, label: i64, level: Level, z: Complex64) -> Result<()> {
        let k = self.index_of(label)?;
        self.nodes[k][level as usize] = z;
        Ok(())
    }

    pub(crate) fn nodes(&self) -> &[[Complex64; 4]] {
        &self.nodes
    }

    pub(crate) fn nodes_mut(&mut self) -> &mut [[Complex64; 4]] {
        &mut self.nodes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.nodes.iter().flatten().map(|z| z.norm_sqr()).sum()
    }

    pub fn level_population(&self, level: Level) -> f64 {
        self.nodes.iter().map(|n| n[level as usize].norm_sqr()).sum()
    }

    pub(crate) fn check_norm(&self, phase: &'static str) -> Result<()> {
        let drift = (self.norm_sqr() - 1.0).abs();
        if drift > 1e-9 {
            return Err(Error::Normalization { drift, phase });
        }
        Ok(())
    }
}

/// Walker localized on one node with coin amplitudes `(ψ↑, ψ↓)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialCondition {
    pub node: i64,
    pub up: Complex64,
    pub down: Complex64,
}

impl InitialCondition {
    pub fn up(node: i64) -> Self {
        Self {
            node,
            up: Complex64::new(1.0, 0.0),
            down: ZERO,
        }
    }

    /// `(|↑⟩ + |↓⟩)/√2`.
    pub fn balanced(node: i64) -> Self {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            node,
            up: Complex64::new(r, 0.0),
            down: Complex64::new(r, 0.0),
        }
    }

    pub fn state(&self, n_nodes: usize, first_label: i64) -> Result<ArrayState> {
        let norm = self.up.norm_sqr() + self.down.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Parameter(format!("initial coin state has norm² {norm}, expected 1")));
        }
        let mut s = ArrayState::zeros(n_nodes, first_label)?;
        s.set_amplitude(self.node, Level::Up, self.up)?;
        s.set_amplitude(self.node, Level::Down, self.down)?;
        Ok(s)
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DistributionMeta {
    pub steps: usize,
    pub coin: Option<CoinSpec>,
    pub initial: Option<InitialCondition>,
    /// Total `|e⟩` population included in the node probabilities.
    pub residual_excited: f64,
    /// Total `|A⟩` population included in the node probabilities.
    pub residual_aux: f64,
}

/// Probability of finding the walker on each node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    pub first_label: i64,
    pub probabilities: Vec<f64>,
    pub meta: DistributionMeta,
}

impl Distribution {
    pub fn labels(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.probabilities.len()).map(move |k| self.first_label + k as i64)
    }

    pub fn get(&self, label: i64) -> f64 {
        let k = label - self.first_label;
        if k < 0 {
            return 0.0;
        }
        self.probabilities.get(k as usize).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.labels().zip(&self.probabilities).map(|(x, p)| x as f64 * p).sum::<f64>() / self.total()
    }

    pub fn std_dev(&self) -> f64 {
        let m = self.mean();
        let var = self
            .labels()
            .zip(&self.probabilities)
            .map(|(x, p)| (x as f64 - m).powi(2) * p)
            .sum::<f64>()
            / self.total();
        var.sqrt()
    }
}

/// Node probabilities `|↓|² + |↑|² + |e|²`, with each aux population added
/// to the walk node its dot is currently paired with.
pub fn measure(state: &ArrayState) -> Distribution {
    let n = state.n_nodes();
    let mut p: Vec<f64> = state
        .nodes()
        .iter()
        .map(|a| a[Level::Up as usize].norm_sqr() + a[Level::Down as usize].norm_sqr() + a[Level::Excited as usize].norm_sqr())
        .collect();
    for (k, a) in state.nodes().iter().enumerate() {
        let target = match state.barrier() {
            BarrierPhase::Original => k,
            BarrierPhase::Swapped => (k + 1).min(n - 1),
        };
        p[target] += a[Level::Aux as usize].norm_sqr();
    }
    Distribution {
        first_label: state.first_label(),
        probabilities: p,
        meta: DistributionMeta {
            residual_excited: state.level_population(Level::Excited),
            residual_aux: state.level_population(Level::Aux),
            ..DistributionMeta::default()
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    /// `½ Σ |a_i − b_i|`.
    pub tvd: f64,
    /// `(Σ √(a_i b_i))²`.
    pub fidelity: f64,
}

pub fn compare(a: &Distribution, b: &Distribution) -> Result<Comparison> {
    if a.first_label != b.first_label || a.probabilities.len() != b.probabilities.len() {
        return Err(Error::Contract(format!(
            "distributions cover different nodes: [{}; {}] vs [{}; {}]",
            a.first_label,
            a.probabilities.len(),
            b.first_label,
            b.probabilities.len()
        )));
    }
    let (mut l1, mut bc) = (0.0, 0.0);
    for (&x, &y) in a.probabilities.iter().zip(&b.probabilities) {
        l1 += (x - y).abs();
        bc += (x.max(0.0) * y.max(0.0)).sqrt();
    }
    Ok(Comparison {
        tvd: (0.5 * l1).min(1.0),
        fidelity: (bc * bc).min(1.0),
    })
}
