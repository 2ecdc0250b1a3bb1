//! Rotating-wave Hamiltonians of the 2-photon and double 3-photon STIRAP
//! processes, their evolution operators, and the optimization cost functions.
//!
//! Both Hamiltonians are in the Raman-resonance limit (zero diagonal). Every
//! coupling is written in the upper triangle as `envelope · e^{iα}` and
//! mirrored as its conjugate.
//!
//! * 2-photon basis `(|↑⟩, |e⟩, |A⟩)`: the pump sits on `(↑, e)`, the Stokes
//!   pulse on `(e, A)`.
//! * 3-photon basis `(|↑⟩, |↓⟩, |e⟩, |A⟩)`: `P2`/`S2` on `(↑, e)`, `P1`/`S1`
//!   on `(↓, e)`, `S`/`P` on `(A, e)`.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::propagator::{evolve, evolve_traced, ComplexMatrix, StateTrace, TimeGrid};
use crate::pulses::{CoinSchedule, GaussianPulse, TranslationSchedule, DEFAULT_WINDOW_SIGMAS};

/// Which dressed-state basis a process matrix is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelBasis {
    /// `(|↑⟩, |e⟩, |A⟩)`.
    TwoPhoton,
    /// `(|↑⟩, |↓⟩, |e⟩, |A⟩)`.
    ThreePhoton,
}

impl LevelBasis {
    pub fn dim(self) -> usize {
        match self {
            Self::TwoPhoton => 3,
            Self::ThreePhoton => 4,
        }
    }

    pub fn labels(self) -> &'static [&'static str] {
        match self {
            Self::TwoPhoton => &["up", "e", "A"],
            Self::ThreePhoton => &["up", "down", "e", "A"],
        }
    }
}

/// Indices in the 2-photon basis.
pub mod two_photon {
    pub const UP: usize = 0;
    pub const EXCITED: usize = 1;
    pub const AUX: usize = 2;
}

/// Indices in the 3-photon basis.
pub mod three_photon {
    pub const UP: usize = 0;
    pub const DOWN: usize = 1;
    pub const EXCITED: usize = 2;
    pub const AUX: usize = 3;
}

/// Parameters `(θ, φ1, φ2)` of the coin
/// `Ĉ = [[cos θ, sin θ e^{iφ1}], [sin θ e^{iφ2}, -cos θ e^{i(φ1+φ2)}]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoinSpec {
    pub theta: f64,
    pub phi1: f64,
    pub phi2: f64,
}

impl CoinSpec {
    pub fn new(theta: f64, phi1: f64, phi2: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_2 + 1e-15).contains(&theta) {
            return Err(Error::Parameter(format!("coin angle must lie in [0, π/2], got {theta}")));
        }
        if !phi1.is_finite() || !phi2.is_finite() {
            return Err(Error::Parameter("coin phases must be finite".into()));
        }
        Ok(Self {
            theta,
            phi1: phi1.rem_euclid(TAU),
            phi2: phi2.rem_euclid(TAU),
        })
    }
}

/// The 2x2 coin in the `(|↑⟩, |↓⟩)` basis.
pub fn ideal_coin(c: &CoinSpec) -> ComplexMatrix {
    let (s, co) = c.theta.sin_cos();
    let mut m = ComplexMatrix::zeros(2);
    m[(0, 0)] = Complex64::new(co, 0.0);
    m[(0, 1)] = Complex64::from_polar(s, c.phi1);
    m[(1, 0)] = Complex64::from_polar(s, c.phi2);
    m[(1, 1)] = -Complex64::from_polar(co, c.phi1 + c.phi2);
    m
}

#[inline]
fn phased(p: &GaussianPulse, t: f64) -> Complex64 {
    Complex64::from_polar(p.envelope(t), p.phase)
}

pub fn hamiltonian_2ph(s: &TranslationSchedule, t: f64) -> ComplexMatrix {
    use two_photon::*;
    let mut h = ComplexMatrix::zeros(3);
    let pump = phased(&s.pump, t);
    let stokes = phased(&s.stokes, t);
    h[(UP, EXCITED)] = pump;
    h[(EXCITED, UP)] = pump.conj();
    h[(EXCITED, AUX)] = stokes;
    h[(AUX, EXCITED)] = stokes.conj();
    h
}

pub fn hamiltonian_3ph(s: &CoinSchedule, t: f64) -> ComplexMatrix {
    use three_photon::*;
    let mut h = ComplexMatrix::zeros(4);
    let down = phased(&s.p1, t) + phased(&s.s1, t);
    let up = phased(&s.p2, t) + phased(&s.s2, t);
    let aux = phased(&s.s, t) + phased(&s.p, t);
    for (level, g) in [(UP, up), (DOWN, down), (AUX, aux)] {
        h[(level, EXCITED)] = g;
        h[(EXCITED, level)] = g.conj();
    }
    h
}

/// How a schedule is sliced for propagation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridPolicy {
    /// `δt = min(σ) / dt_divisor`.
    pub dt_divisor: f64,
    /// Window half-width per pulse, in units of that pulse's σ.
    pub window_sigmas: f64,
    /// Per-slice Chebyshev tolerance.
    pub tol: f64,
}

impl Default for GridPolicy {
    fn default() -> Self {
        Self {
            dt_divisor: 200.0,
            window_sigmas: DEFAULT_WINDOW_SIGMAS,
            tol: 1e-12,
        }
    }
}

impl GridPolicy {
    pub fn grid(&self, window: (f64, f64), min_sigma: f64) -> Result<TimeGrid> {
        if !(self.dt_divisor > 0.0) {
            return Err(Error::Parameter("dt_divisor must be positive".into()));
        }
        TimeGrid::new(window.0, window.1, min_sigma / self.dt_divisor)
    }

    /// The same policy with the time step halved.
    pub fn refined(&self) -> Self {
        Self {
            dt_divisor: 2.0 * self.dt_divisor,
            ..*self
        }
    }

    pub fn translation_grid(&self, s: &TranslationSchedule) -> Result<TimeGrid> {
        self.grid(s.window(self.window_sigmas), s.min_sigma())
    }

    pub fn coin_grid(&self, s: &CoinSchedule) -> Result<TimeGrid> {
        self.grid(s.window(self.window_sigmas), s.min_sigma())
    }
}

/// An evolution operator tagged with its basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProcessUnitary {
    pub basis: LevelBasis,
    pub matrix: ComplexMatrix,
}

pub fn evolution_2ph(s: &TranslationSchedule, policy: &GridPolicy) -> Result<ProcessUnitary> {
    let grid = policy.translation_grid(s)?;
    let matrix = evolve(|t| hamiltonian_2ph(s, t), &grid, policy.tol)?;
    Ok(ProcessUnitary {
        basis: LevelBasis::TwoPhoton,
        matrix,
    })
}

pub fn evolution_3ph(s: &CoinSchedule, policy: &GridPolicy) -> Result<ProcessUnitary> {
    let grid = policy.coin_grid(s)?;
    let matrix = evolve(|t| hamiltonian_3ph(s, t), &grid, policy.tol)?;
    Ok(ProcessUnitary {
        basis: LevelBasis::ThreePhoton,
        matrix,
    })
}

/// Population of every basis level after each slice, starting from `psi0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationTrace {
    pub basis: LevelBasis,
    pub times: Vec<f64>,
    /// `populations[k][level]` at `times[k]`.
    pub populations: Vec<Vec<f64>>,
    pub unitary: ComplexMatrix,
}

impl PopulationTrace {
    /// Largest population of `level` over the whole trace.
    pub fn peak(&self, level: usize) -> f64 {
        self.populations.iter().map(|p| p[level]).fold(0.0, f64::max)
    }
}

fn trace_from(
    basis: LevelBasis,
    u_and_states: (ComplexMatrix, StateTrace),
) -> PopulationTrace {
    let (unitary, states) = u_and_states;
    let (times, populations) = states
        .into_iter()
        .map(|(t, psi)| (t, psi.iter().map(|z| z.norm_sqr()).collect()))
        .unzip();
    PopulationTrace {
        basis,
        times,
        populations,
        unitary,
    }
}

pub fn trace_2ph(s: &TranslationSchedule, policy: &GridPolicy, psi0: &[Complex64]) -> Result<PopulationTrace> {
    check_len(psi0, 3)?;
    let grid = policy.translation_grid(s)?;
    let r = evolve_traced(|t| hamiltonian_2ph(s, t), &grid, policy.tol, psi0)?;
    Ok(trace_from(LevelBasis::TwoPhoton, r))
}

pub fn trace_3ph(s: &CoinSchedule, policy: &GridPolicy, psi0: &[Complex64]) -> Result<PopulationTrace> {
    check_len(psi0, 4)?;
    let grid = policy.coin_grid(s)?;
    let r = evolve_traced(|t| hamiltonian_3ph(s, t), &grid, policy.tol, psi0)?;
    Ok(trace_from(LevelBasis::ThreePhoton, r))
}

fn check_len(psi: &[Complex64], n: usize) -> Result<()> {
    if psi.len() != n {
        return Err(Error::Contract(format!("state has {} amplitudes, expected {n}", psi.len())));
    }
    Ok(())
}

fn check_dim(u: &ComplexMatrix, n: usize) -> Result<()> {
    if u.dim() != n {
        return Err(Error::Contract(format!("expected a {n}x{n} matrix, got {}x{}", u.dim(), u.dim())));
    }
    Ok(())
}

/// `κ_T = |u11| + |u13 - 1| + |u31 - 1| + |u33|`, the distance of the
/// `(1, 3)` block from the exact swap.
pub fn cost_translation(u: &ComplexMatrix) -> Result<f64> {
    check_dim(u, 3)?;
    let one = Complex64::new(1.0, 0.0);
    Ok(u[(0, 0)].norm() + (u[(0, 2)] - one).norm() + (u[(2, 0)] - one).norm() + u[(2, 2)].norm())
}

/// `|u11| + (1 - |u13|) + (1 - |u31|) + |u33|`: the swap distance with the
/// phases of the transfer amplitudes ignored.
pub fn cost_translation_modulus(u: &ComplexMatrix) -> Result<f64> {
    check_dim(u, 3)?;
    Ok(u[(0, 0)].norm() + (1.0 - u[(0, 2)].norm()).abs() + (1.0 - u[(2, 0)].norm()).abs() + u[(2, 2)].norm())
}

/// `1 - |u31|²`: probability not transferred from `|↑⟩` to `|A⟩`.
pub fn transfer_infidelity(u: &ComplexMatrix) -> Result<f64> {
    check_dim(u, 3)?;
    Ok((1.0 - u[(2, 0)].norm_sqr()).max(0.0))
}

/// Which scalar the translation optimizer minimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TranslationCost {
    /// [`cost_translation`].
    Swap,
    /// [`cost_translation_modulus`].
    SwapModulus,
    /// [`transfer_infidelity`].
    #[default]
    Transfer,
}

impl TranslationCost {
    pub fn evaluate(self, u: &ComplexMatrix) -> Result<f64> {
        match self {
            Self::Swap => cost_translation(u),
            Self::SwapModulus => cost_translation_modulus(u),
            Self::Transfer => transfer_infidelity(u),
        }
    }
}

/// Target matrix inside the coin cost `Σ |B B† - X|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoinCostTarget {
    /// `X = [[0, 1], [1, 0]]`.
    AntiDiagonal,
    /// `X = I`: a pure unitarity measure of the coin block.
    #[default]
    Identity,
}

/// `κ_C = Σ_ij |(B B†)_ij - X_ij|` with `B` the `(|↑⟩, |↓⟩)` block of `U`.
pub fn cost_coin(u: &ComplexMatrix, target: CoinCostTarget) -> Result<f64> {
    check_dim(u, 4)?;
    let b = u.leading_block(2);
    let bb = &b * &b.adjoint();
    let x = match target {
        CoinCostTarget::Identity => ComplexMatrix::identity(2),
        CoinCostTarget::AntiDiagonal => {
            let mut x = ComplexMatrix::zeros(2);
            x[(0, 1)] = Complex64::new(1.0, 0.0);
            x[(1, 0)] = Complex64::new(1.0, 0.0);
            x
        }
    };
    Ok((&bb - &x).as_slice().iter().map(|z| z.norm()).sum())
}

/// The effective coin block of a 4x4 evolution and `max |B B† - I|`.
pub fn extract_coin(u: &ComplexMatrix) -> Result<(ComplexMatrix, f64)> {
    check_dim(u, 4)?;
    let b = u.leading_block(2);
    let defect = b.unitarity_defect();
    Ok((b, defect))
}

/// Index of the largest-magnitude entry (first in row-major order among
/// entries tied within 1e-12).
fn dominant_entry(m: &ComplexMatrix) -> (usize, usize) {
    let max = m.max_abs();
    let n = m.dim();
    for i in 0..n {
        for j in 0..n {
            if m[(i, j)].norm() >= max - 1e-12 {
                return (i, j);
            }
        }
    }
    (0, 0)
}

/// Multiplies `m` by the global phase that makes the entry at `at` real and
/// non-negative.
pub fn align_phase_at(m: &ComplexMatrix, at: (usize, usize)) -> ComplexMatrix {
    let z = m[at];
    if z.norm() == 0.0 {
        return m.clone();
    }
    m.scale(Complex64::from_polar(1.0, -z.arg()))
}

/// Global-phase alignment on the largest-magnitude entry.
pub fn align_global_phase(m: &ComplexMatrix) -> ComplexMatrix {
    align_phase_at(m, dominant_entry(m))
}

/// Max-entry distance between two coins after both are phase-aligned on the
/// reference coin's largest-magnitude entry.
pub fn coin_distance(block: &ComplexMatrix, reference: &ComplexMatrix) -> f64 {
    let at = dominant_entry(reference);
    align_phase_at(block, at).max_abs_diff(&align_phase_at(reference, at))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pulses::{make_coin_schedule, make_translation_schedule, CoinPhases};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn published_translation() -> TranslationSchedule {
        make_translation_schedule(1.50, 1.5, 4.0, 4.0, 0.0, 0.0, 5.87, false).unwrap()
    }

    #[test]
    fn ideal_coin_examples() {
        let z = ideal_coin(&CoinSpec::new(0.0, 0.7, 0.4).unwrap());
        assert!((z[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((z[(1, 1)] + Complex64::from_polar(1.0, 1.1)).norm() < 1e-15);
        assert!(z[(0, 1)].norm() < 1e-15);

        let h = ideal_coin(&CoinSpec::new(FRAC_PI_4, FRAC_PI_2, FRAC_PI_2).unwrap());
        let r = FRAC_1_SQRT_2;
        let expect = ComplexMatrix::from_rows(&[vec![c(r, 0.0), c(0.0, r)], vec![c(0.0, r), c(r, 0.0)]]).unwrap();
        assert!(h.max_abs_diff(&expect) < 1e-15);

        let a = ideal_coin(&CoinSpec::new(FRAC_PI_4, FRAC_PI_2, -FRAC_PI_2).unwrap());
        let expect = ComplexMatrix::from_rows(&[vec![c(r, 0.0), c(0.0, r)], vec![c(0.0, -r), c(-r, 0.0)]]).unwrap();
        assert!(a.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn coin_spec_validation() {
        assert!(CoinSpec::new(-0.1, 0.0, 0.0).is_err());
        assert!(CoinSpec::new(2.0, 0.0, 0.0).is_err());
        assert!(CoinSpec::new(0.3, f64::NAN, 0.0).is_err());
        let s = CoinSpec::new(0.3, -FRAC_PI_2, 0.0).unwrap();
        assert!((s.phi1 - 1.5 * PI).abs() < 1e-15);
    }

    #[test]
    fn two_photon_hamiltonian_structure() {
        let s = published_translation();
        let h = hamiltonian_2ph(&s, s.pump.center);
        assert!(h.is_hermitian(1e-15));
        for i in 0..3 {
            assert_eq!(h[(i, i)], c(0.0, 0.0));
        }
        assert_eq!(h[(0, 2)], c(0.0, 0.0));
        assert!((h[(0, 1)].norm() - 1.50).abs() < 1e-15);

        let far = hamiltonian_2ph(&s, -1e3);
        assert_eq!(far.max_abs(), 0.0);

        let flipped = make_translation_schedule(1.5, 1.5, 4.0, 4.0, PI, 0.0, 5.87, false).unwrap();
        let t = 1.3;
        let hf = hamiltonian_2ph(&flipped, t);
        assert!((hf[(0, 1)] + c(flipped.pump.envelope(t), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn three_photon_hamiltonian_structure() {
        let sched = make_coin_schedule(1.0, 1.34, 4.0, &CoinPhases::symmetric(FRAC_PI_2), 6.12, None).unwrap();
        let h = hamiltonian_3ph(&sched, sched.s.center);
        assert!(h.is_hermitian(1e-15));
        use three_photon::*;
        for (a, b) in [(UP, DOWN), (UP, AUX), (DOWN, AUX)] {
            assert_eq!(h[(a, b)], c(0.0, 0.0));
        }
        for i in 0..4 {
            assert_eq!(h[(i, i)], c(0.0, 0.0));
        }
        // The A-e coupling at the S peak is Ē_a plus a small tail of P.
        let tail = sched.p.envelope(sched.s.center);
        assert!((h[(AUX, EXCITED)].norm() - 1.0).abs() <= tail + 1e-15);
        assert!(tail < 1e-3);

        let dark = make_coin_schedule(1.0, 0.0, 4.0, &CoinPhases::symmetric(FRAC_PI_2), 6.12, None).unwrap();
        for t in [-10.0, -3.0, 0.0, 4.0, 11.0] {
            let h = hamiltonian_3ph(&dark, t);
            assert_eq!(h[(UP, EXCITED)], c(0.0, 0.0));
            assert_eq!(h[(DOWN, EXCITED)], c(0.0, 0.0));
            assert!(h[(AUX, EXCITED)].norm() > 0.0);
        }
        assert_eq!(hamiltonian_3ph(&sched, 1e4).max_abs(), 0.0);
    }

    #[test]
    fn swap_cost_examples() {
        let id = ComplexMatrix::identity(3);
        assert!((cost_translation(&id).unwrap() - 4.0).abs() < 1e-15);
        let mut swap = ComplexMatrix::zeros(3);
        swap[(0, 2)] = c(1.0, 0.0);
        swap[(2, 0)] = c(1.0, 0.0);
        swap[(1, 1)] = c(1.0, 0.0);
        assert_eq!(cost_translation(&swap).unwrap(), 0.0);
        assert_eq!(cost_translation_modulus(&swap).unwrap(), 0.0);
        assert_eq!(transfer_infidelity(&swap).unwrap(), 0.0);
        assert!((transfer_infidelity(&id).unwrap() - 1.0).abs() < 1e-15);
        assert!(cost_translation(&ComplexMatrix::identity(4)).is_err());
    }

    #[test]
    fn coin_cost_examples() {
        // For B = I the anti-diagonal target leaves |1| + |-1| + |-1| + |1| = 4.
        let id = ComplexMatrix::identity(4);
        assert!((cost_coin(&id, CoinCostTarget::AntiDiagonal).unwrap() - 4.0).abs() < 1e-15);
        assert_eq!(cost_coin(&id, CoinCostTarget::Identity).unwrap(), 0.0);

        let coin = ideal_coin(&CoinSpec::new(0.4, 1.0, 2.0).unwrap());
        let u = coin.direct_sum(&ComplexMatrix::identity(2));
        assert!(cost_coin(&u, CoinCostTarget::Identity).unwrap() < 1e-14);
        assert!(cost_coin(&ComplexMatrix::identity(3), CoinCostTarget::Identity).is_err());
    }

    #[test]
    fn extract_coin_examples() {
        let coin = ideal_coin(&CoinSpec::new(FRAC_PI_4, FRAC_PI_2, FRAC_PI_2).unwrap());
        let u = coin.direct_sum(&ComplexMatrix::identity(2));
        let (b, defect) = extract_coin(&u).unwrap();
        assert_eq!(b, coin);
        assert!(defect < 1e-12);
        let (b, defect) = extract_coin(&ComplexMatrix::identity(4)).unwrap();
        assert_eq!(b, ComplexMatrix::identity(2));
        assert_eq!(defect, 0.0);
    }

    #[test]
    fn phase_alignment_removes_global_phase() {
        let coin = ideal_coin(&CoinSpec::new(0.5, 0.3, 1.9).unwrap());
        let rotated = coin.scale(Complex64::from_polar(1.0, 2.2));
        assert!(coin_distance(&rotated, &coin) < 1e-14);
        assert!(align_global_phase(&rotated).max_abs_diff(&align_global_phase(&coin)) < 1e-14);
    }

    #[test]
    fn zero_pulses_give_identity() {
        let s = make_translation_schedule(0.0, 0.0, 4.0, 4.0, 0.0, 0.0, 5.0, false).unwrap();
        let u = evolution_2ph(&s, &GridPolicy::default()).unwrap();
        assert!(u.matrix.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-15);
        let cs = make_coin_schedule(0.0, 0.0, 4.0, &CoinPhases::symmetric(0.0), 6.0, None).unwrap();
        let u = evolution_3ph(&cs, &GridPolicy::default()).unwrap();
        assert!(u.matrix.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-15);
    }

    #[test]
    fn trace_rejects_wrong_state_length() {
        let s = published_translation();
        let psi = vec![c(1.0, 0.0); 4];
        assert!(matches!(trace_2ph(&s, &GridPolicy::default(), &psi), Err(Error::Contract(_))));
    }
}
