//! Random perturbation of pulse parameters and the resulting walk
//! degradation.
//!
//! Random numbers come from ChaCha8 seeded with `seed` via
//! `SeedableRng::seed_from_u64`; ensemble member `k` uses stream `k`.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::propagator::ComplexMatrix;
use crate::pulses::{normalize_phase, GaussianPulse};
use crate::stirap::{evolution_2ph, evolution_3ph};
use crate::walk::{compare, run_walk_source, ArrayState, Distribution, OperatorSource, StepOperators, StirapParams};

/// Which pulse parameter is perturbed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseTarget {
    PeakEnergy,
    Phase,
    Sigma,
    Timing,
}

/// How often perturbations are redrawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseMode {
    /// One draw for the whole run.
    Fixed,
    /// Fresh draws every step, shared by all pairings.
    #[default]
    PerStep,
    /// Fresh draws for every pulse application on every pairing.
    PerPulse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseDistribution {
    /// `u` uniform on `[-m, m]`.
    #[default]
    Uniform,
    /// `u` normal with standard deviation `m`.
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSpec {
    pub target: NoiseTarget,
    /// Fractional magnitude `m`; for phases a fraction of 2π, for timing a
    /// fraction of the schedule's ΔT.
    pub magnitude: f64,
    pub seed: u64,
    #[serde(default)]
    pub mode: NoiseMode,
    #[serde(default)]
    pub distribution: NoiseDistribution,
}

impl NoiseSpec {
    pub fn new(target: NoiseTarget, magnitude: f64, seed: u64) -> Result<Self> {
        let s = Self {
            target,
            magnitude,
            seed,
            mode: NoiseMode::default(),
            distribution: NoiseDistribution::default(),
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.magnitude >= 0.0) || !self.magnitude.is_finite() {
            return Err(Error::Parameter(format!(
                "noise magnitude must be finite and non-negative, got {}",
                self.magnitude
            )));
        }
        Ok(())
    }

    pub fn with_magnitude(&self, magnitude: f64) -> Self {
        Self { magnitude, ..*self }
    }

    /// Standard robustness settings: peak energy 2%, phase 5%, width 2%, timing 0.3%.
    pub fn reference_set(seed: u64) -> [Self; 4] {
        let mk = |target, magnitude| Self {
            target,
            magnitude,
            seed,
            mode: NoiseMode::default(),
            distribution: NoiseDistribution::default(),
        };
        [
            mk(NoiseTarget::PeakEnergy, 0.02),
            mk(NoiseTarget::Phase, 0.05),
            mk(NoiseTarget::Sigma, 0.02),
            mk(NoiseTarget::Timing, 0.003),
        ]
    }

    fn draw<R: Rng>(&self, rng: &mut R) -> f64 {
        if self.magnitude == 0.0 {
            return 0.0;
        }
        match self.distribution {
            NoiseDistribution::Uniform => rng.random_range(-self.magnitude..=self.magnitude),
            NoiseDistribution::Gaussian => Normal::new(0.0, self.magnitude)
                .expect("validated magnitude")
                .sample(rng),
        }
    }
}

/// RNG for ensemble member `member`.
pub fn member_rng(seed: u64, member: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(member);
    rng
}

fn perturb_pulse<R: Rng>(p: &mut GaussianPulse, spec: &NoiseSpec, t_ref: f64, rng: &mut R) -> bool {
    let u = spec.draw(rng);
    match spec.target {
        NoiseTarget::PeakEnergy => p.peak_energy = (p.peak_energy * (1.0 + u)).max(0.0),
        NoiseTarget::Phase => p.phase = normalize_phase(p.phase + u * TAU),
        NoiseTarget::Timing => p.center += u * t_ref,
        NoiseTarget::Sigma => {
            let s = p.sigma * (1.0 + u);
            if s <= 0.0 {
                p.sigma *= 0.01;
                return true;
            }
            p.sigma = s;
        }
    }
    false
}

/// Result of one [`perturb`] call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Perturbed {
    pub params: StirapParams,
    /// Pulses whose width would have become non-positive and were clamped
    /// to 1% of nominal.
    pub clamped_sigmas: usize,
}

/// Which process a draw applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Process {
    Forward,
    Reverse,
    Coin,
}

fn perturb_process<R: Rng>(params: &mut StirapParams, which: Process, spec: &NoiseSpec, rng: &mut R) -> usize {
    let mut clamped = 0;
    match which {
        Process::Forward => {
            let t_ref = params.forward.delta_t;
            for p in params.forward.pulses_mut() {
                clamped += perturb_pulse(p, spec, t_ref, rng) as usize;
            }
        }
        Process::Reverse => {
            let t_ref = params.reverse.delta_t;
            for p in params.reverse.pulses_mut() {
                clamped += perturb_pulse(p, spec, t_ref, rng) as usize;
            }
        }
        Process::Coin => {
            let t_ref = params.coin.delta_t;
            for p in params.coin.pulses_mut() {
                clamped += perturb_pulse(p, spec, t_ref, rng) as usize;
            }
        }
    }
    clamped
}

/// Fresh draws for every pulse of the forward, reverse and coin schedules,
/// in that order.
pub fn perturb<R: Rng>(params: &StirapParams, spec: &NoiseSpec, rng: &mut R) -> Result<Perturbed> {
    spec.validate()?;
    let mut out = *params;
    let mut clamped = 0;
    for which in [Process::Forward, Process::Reverse, Process::Coin] {
        clamped += perturb_process(&mut out, which, spec, rng);
    }
    Ok(Perturbed {
        params: out,
        clamped_sigmas: clamped,
    })
}

/// Outcome of a noisy walk.
#[derive(Debug, Clone, PartialEq)]
pub struct NoisyRun {
    pub state: ArrayState,
    pub distribution: Distribution,
    pub clamped_sigmas: usize,
}

struct NoisySource<'a> {
    base: &'a StirapParams,
    base_ops: &'a StepOperators,
    spec: NoiseSpec,
    rng: ChaCha8Rng,
    current: Option<StepOperators>,
    clamped: usize,
}

impl NoisySource<'_> {
    fn redraw_step(&mut self) -> Result<()> {
        let p = perturb(self.base, &self.spec, &mut self.rng)?;
        self.clamped += p.clamped_sigmas;
        self.current = Some(if p.params == *self.base {
            self.base_ops.clone()
        } else {
            p.params.operators()?
        });
        Ok(())
    }

    fn ops(&self) -> &StepOperators {
        self.current.as_ref().unwrap_or(self.base_ops)
    }

    fn per_pulse(&mut self, which: Process) -> Result<ComplexMatrix> {
        let mut p = *self.base;
        self.clamped += perturb_process(&mut p, which, &self.spec, &mut self.rng);
        Ok(match which {
            Process::Coin if p.coin == self.base.coin => self.base_ops.coin.clone(),
            Process::Forward if p.forward == self.base.forward => self.base_ops.translate.clone(),
            Process::Reverse if p.reverse == self.base.reverse => self.base_ops.translate_back.clone(),
            Process::Coin => evolution_3ph(&p.coin, &p.grid)?.matrix,
            Process::Forward => evolution_2ph(&p.forward, &p.grid)?.matrix,
            Process::Reverse => evolution_2ph(&p.reverse, &p.grid)?.matrix,
        })
    }
}

impl OperatorSource for NoisySource<'_> {
    fn coin(&mut self, _: usize) -> Result<ComplexMatrix> {
        match self.spec.mode {
            NoiseMode::PerPulse => self.per_pulse(Process::Coin),
            _ => Ok(self.ops().coin.clone()),
        }
    }

    fn translate(&mut self, _: usize) -> Result<ComplexMatrix> {
        match self.spec.mode {
            NoiseMode::PerPulse => self.per_pulse(Process::Forward),
            _ => Ok(self.ops().translate.clone()),
        }
    }

    fn translate_back(&mut self, _: usize) -> Result<ComplexMatrix> {
        match self.spec.mode {
            NoiseMode::PerPulse => self.per_pulse(Process::Reverse),
            _ => Ok(self.ops().translate_back.clone()),
        }
    }
}

/// `n` noisy steps, for ensemble member `member` of `spec.seed`.
/// `base_ops` must be `base.operators()`; it is reused whenever a draw
/// leaves the parameters unchanged, so `m = 0` reproduces the clean walk
/// bit for bit.
pub fn noisy_walk_member(
    n: usize,
    spec: &NoiseSpec,
    base: &StirapParams,
    base_ops: &StepOperators,
    init: &ArrayState,
    member: u64,
) -> Result<NoisyRun> {
    spec.validate()?;
    let mut src = NoisySource {
        base,
        base_ops,
        spec: *spec,
        rng: member_rng(spec.seed, member),
        current: None,
        clamped: 0,
    };
    let (state, distribution) = match spec.mode {
        NoiseMode::Fixed => {
            src.redraw_step()?;
            run_walk_source(n, &mut src, init)?
        }
        NoiseMode::PerPulse => run_walk_source(n, &mut src, init)?,
        NoiseMode::PerStep => {
            let mut s = init.clone();
            let mut last = None;
            for _ in 0..n {
                src.redraw_step()?;
                let (next, d) = run_walk_source(1, &mut src, &s)?;
                s = next;
                last = Some(d);
            }
            match last {
                Some(mut d) => {
                    d.meta.steps = n;
                    (s, d)
                }
                None => run_walk_source(0, &mut src, init)?,
            }
        }
    };
    Ok(NoisyRun {
        state,
        distribution,
        clamped_sigmas: src.clamped,
    })
}

/// Single noisy realization (ensemble member 0).
pub fn noisy_walk(n: usize, spec: &NoiseSpec, base: &StirapParams, init: &ArrayState) -> Result<NoisyRun> {
    let ops = base.operators()?;
    noisy_walk_member(n, spec, base, &ops, init, 0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub magnitude: f64,
    pub median_tvd: f64,
    pub iqr: f64,
    /// Per-member TVDs in member order.
    pub tvds: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    /// Whether the median TVD is non-decreasing in the magnitude.
    pub monotone: bool,
}

impl SweepTable {
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::Numeric(format!("csv write failed: {e}"));
        out.write_record(["magnitude", "median_tvd", "iqr", "members"]).map_err(io)?;
        for r in &self.rows {
            out.write_record([
                r.magnitude.to_string(),
                r.median_tvd.to_string(),
                r.iqr.to_string(),
                r.tvds.len().to_string(),
            ])
            .map_err(io)?;
        }
        out.flush().map_err(|e| Error::Numeric(format!("csv flush failed: {e}")))?;
        Ok(())
    }
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.len() == 1 {
        return sorted[0];
    }
    let h = q * (sorted.len() - 1) as f64;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// TVD of `ensemble` noisy walks against `reference` for each magnitude.
/// Member `k` always uses stream `k`, so rows share random draws.
pub fn noise_sweep(
    template: &NoiseSpec,
    magnitudes: &[f64],
    ensemble: usize,
    n: usize,
    base: &StirapParams,
    init: &ArrayState,
    reference: &Distribution,
) -> Result<SweepTable> {
    if ensemble == 0 {
        return Err(Error::Parameter("ensemble size must be at least 1".into()));
    }
    let ops = base.operators()?;
    let mut rows = Vec::with_capacity(magnitudes.len());
    for &m in magnitudes {
        let spec = template.with_magnitude(m);
        spec.validate()?;
        let tvds = (0..ensemble as u64)
            .into_par_iter()
            .map(|k| {
                let run = noisy_walk_member(n, &spec, base, &ops, init, k)?;
                Ok(compare(&run.distribution, reference)?.tvd)
            })
            .collect::<Result<Vec<f64>>>()?;
        let mut sorted = tvds.clone();
        sorted.sort_by(|a, b| a.total_cmp(b));
        rows.push(SweepRow {
            magnitude: m,
            median_tvd: quantile(&sorted, 0.5),
            iqr: quantile(&sorted, 0.75) - quantile(&sorted, 0.25),
            tvds,
        });
    }
    let monotone = rows.windows(2).all(|w| w[1].median_tvd >= w[0].median_tvd);
    Ok(SweepTable { rows, monotone })
}

/// Outer-peak versus centre comparison of a distribution on the `Ũ`
/// lattice after `steps` steps from node `origin`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeakStructure {
    pub left_peak: f64,
    pub right_peak: f64,
    pub central_mean: f64,
    /// Both outer maxima are at least twice the central mean.
    pub two_peaked: bool,
}

/// Node `origin + x` maps to walk position `X = 2x − steps`; the central
/// region is `|X| < steps/3` and the outer regions are the remaining thirds.
pub fn peak_structure(d: &Distribution, origin: i64, steps: usize) -> PeakStructure {
    let n = steps as f64;
    let (mut left, mut right, mut sum, mut count) = (0.0f64, 0.0f64, 0.0, 0usize);
    for (label, &p) in d.labels().zip(&d.probabilities) {
        let x = (label - origin) as f64;
        if x < 0.0 || x > n {
            continue;
        }
        let pos = 2.0 * x - n;
        if pos.abs() < n / 3.0 {
            sum += p;
            count += 1;
        } else if pos < 0.0 {
            left = left.max(p);
        } else {
            right = right.max(p);
        }
    }
    let central_mean = if count > 0 { sum / count as f64 } else { 0.0 };
    PeakStructure {
        left_peak: left,
        right_peak: right,
        central_mean,
        two_peaked: left >= 2.0 * central_mean && right >= 2.0 * central_mean && count > 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pulses::{make_coin_schedule, make_translation_schedule, CoinPhases};
    use crate::stirap::GridPolicy;
    use crate::walk::{initial_state, run_walk_with, DistributionMeta, InitialCondition};

    fn params() -> StirapParams {
        let f = make_translation_schedule(1.5, 1.5, 4.0, 4.0, 0.0, 0.0, 5.87, false).unwrap();
        let c = make_coin_schedule(1.0, 1.34, 4.0, &CoinPhases::symmetric(std::f64::consts::FRAC_PI_2), 6.12, None)
            .unwrap();
        // Coarse slicing keeps unit tests fast; accuracy is irrelevant here.
        let grid = GridPolicy {
            dt_divisor: 8.0,
            ..GridPolicy::default()
        };
        StirapParams::new(f, c, grid)
    }

    #[test]
    fn zero_magnitude_leaves_params_unchanged() {
        let base = params();
        for target in [NoiseTarget::PeakEnergy, NoiseTarget::Phase, NoiseTarget::Sigma, NoiseTarget::Timing] {
            let spec = NoiseSpec::new(target, 0.0, 5).unwrap();
            let p = perturb(&base, &spec, &mut member_rng(5, 0)).unwrap();
            assert_eq!(p.params, base);
        }
    }

    #[test]
    fn perturbation_is_reproducible_and_bounded() {
        let base = params();
        let spec = NoiseSpec::new(NoiseTarget::PeakEnergy, 0.02, 42).unwrap();
        let a = perturb(&base, &spec, &mut member_rng(42, 0)).unwrap().params;
        let b = perturb(&base, &spec, &mut member_rng(42, 0)).unwrap().params;
        assert_eq!(a, b);
        let c = perturb(&base, &spec, &mut member_rng(42, 1)).unwrap().params;
        assert_ne!(a, c);
        for (p, q) in a.coin.pulses().iter().zip(base.coin.pulses()) {
            assert!((p.peak_energy / q.peak_energy - 1.0).abs() <= 0.02 + 1e-15);
            assert_eq!(p.sigma, q.sigma);
        }
    }

    #[test]
    fn timing_noise_scales_with_delta_t() {
        let base = params();
        let spec = NoiseSpec::new(NoiseTarget::Timing, 0.003, 1).unwrap();
        let p = perturb(&base, &spec, &mut member_rng(1, 0)).unwrap().params;
        let shift = (p.forward.pump.center - base.forward.pump.center).abs();
        assert!(shift > 0.0 && shift <= 0.003 * base.forward.delta_t + 1e-15);
    }

    #[test]
    fn collapsing_sigma_is_clamped() {
        let base = params();
        let mut spec = NoiseSpec::new(NoiseTarget::Sigma, 5.0, 3).unwrap();
        spec.distribution = NoiseDistribution::Uniform;
        let mut total = 0;
        for k in 0..4 {
            let p = perturb(&base, &spec, &mut member_rng(3, k)).unwrap();
            total += p.clamped_sigmas;
            assert!(p.params.coin.pulses().iter().all(|q| q.sigma > 0.0));
        }
        assert!(total > 0);
    }

    #[test]
    fn negative_magnitude_is_rejected() {
        assert!(NoiseSpec::new(NoiseTarget::Phase, -0.1, 0).is_err());
    }

    #[test]
    fn zero_noise_walk_is_the_clean_walk() {
        let base = params();
        let ops = base.operators().unwrap();
        let init = initial_state(6, &InitialCondition::balanced(1)).unwrap();
        let (_, clean) = run_walk_with(6, &ops, &init).unwrap();
        for mode in [NoiseMode::Fixed, NoiseMode::PerStep, NoiseMode::PerPulse] {
            let spec = NoiseSpec {
                mode,
                ..NoiseSpec::new(NoiseTarget::Phase, 0.0, 9).unwrap()
            };
            let run = noisy_walk_member(6, &spec, &base, &ops, &init, 0).unwrap();
            assert_eq!(run.distribution, clean);
        }
    }

    #[test]
    fn per_pulse_mode_is_deterministic() {
        let base = params();
        let ops = base.operators().unwrap();
        let init = initial_state(3, &InitialCondition::balanced(1)).unwrap();
        let spec = NoiseSpec {
            mode: NoiseMode::PerPulse,
            ..NoiseSpec::new(NoiseTarget::PeakEnergy, 0.05, 11).unwrap()
        };
        let a = noisy_walk_member(3, &spec, &base, &ops, &init, 0).unwrap();
        let b = noisy_walk_member(3, &spec, &base, &ops, &init, 0).unwrap();
        assert_eq!(a, b);
        assert!((a.distribution.total() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn quantiles() {
        let v = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile(&v, 0.5), 2.5);
        assert_eq!(quantile(&v, 0.25), 1.75);
        assert_eq!(quantile(&[7.0], 0.75), 7.0);
    }

    #[test]
    fn peak_structure_examples() {
        let mk = |p: Vec<f64>| Distribution {
            first_label: 0,
            probabilities: p,
            meta: DistributionMeta::default(),
        };
        let two = mk(vec![0.3, 0.05, 0.05, 0.05, 0.05, 0.05, 0.05, 0.05, 0.05, 0.3]);
        assert!(peak_structure(&two, 0, 9).two_peaked);
        let one = mk(vec![0.0, 0.0, 0.0, 0.0, 0.5, 0.5, 0.0, 0.0, 0.0, 0.0]);
        assert!(!peak_structure(&one, 0, 9).two_peaked);
    }

    #[test]
    fn sweep_requires_members() {
        let base = params();
        let init = initial_state(1, &InitialCondition::up(1)).unwrap();
        let reference = crate::walk::measure(&init);
        let spec = NoiseSpec::new(NoiseTarget::Phase, 0.0, 0).unwrap();
        assert!(noise_sweep(&spec, &[0.0], 0, 1, &base, &init, &reference).is_err());
    }
}
