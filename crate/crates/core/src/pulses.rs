//! Gaussian laser pulses and the two STIRAP pulse schedules.
//!
//! Times are in ps, interaction energies in meV, phases in radians.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Pulses are truncated this many widths either side of their centre.
pub const DEFAULT_WINDOW_SIGMAS: f64 = 5.0;

/// One Gaussian pulse envelope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianPulse {
    /// Peak interaction energy (meV).
    pub peak_energy: f64,
    /// Standard deviation of the envelope (ps).
    pub sigma: f64,
    /// Time of the peak (ps).
    pub center: f64,
    /// Phase in `[0, 2π)`.
    pub phase: f64,
}

impl GaussianPulse {
    pub fn new(peak_energy: f64, sigma: f64, center: f64, phase: f64) -> Result<Self> {
        if !(peak_energy >= 0.0) || !peak_energy.is_finite() {
            return Err(Error::Parameter(format!(
                "peak energy must be finite and non-negative, got {peak_energy}"
            )));
        }
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::Parameter(format!("pulse width must be positive, got {sigma}")));
        }
        if !center.is_finite() || !phase.is_finite() {
            return Err(Error::Parameter("pulse centre and phase must be finite".into()));
        }
        Ok(Self {
            peak_energy,
            sigma,
            center,
            phase: normalize_phase(phase),
        })
    }

    /// `Ē exp(-(t - t_c)² / 2σ²)`.
    #[inline]
    pub fn envelope(&self, t: f64) -> f64 {
        let x = (t - self.center) / self.sigma;
        self.peak_energy * (-0.5 * x * x).exp()
    }

    /// `[t_c - kσ, t_c + kσ]`.
    pub fn window(&self, sigmas: f64) -> (f64, f64) {
        (self.center - sigmas * self.sigma, self.center + sigmas * self.sigma)
    }

    pub fn shifted(&self, dt: f64) -> Self {
        Self {
            center: self.center + dt,
            ..*self
        }
    }

    pub(crate) fn with_center(&self, center: f64) -> Self {
        Self { center, ..*self }
    }
}

/// Maps a phase into `[0, 2π)`.
pub fn normalize_phase(phase: f64) -> f64 {
    let p = phase.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π for tiny negative inputs.
    if p >= TAU {
        0.0
    } else {
        p
    }
}

fn union_window<'a>(pulses: impl IntoIterator<Item = &'a GaussianPulse>, sigmas: f64) -> (f64, f64) {
    pulses.into_iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
        let (a, b) = p.window(sigmas);
        (lo.min(a), hi.max(b))
    })
}

/// Pump/Stokes pair driving the 2-photon transfer `|↑⟩ → |A⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TranslationSchedule {
    /// Couples `|↑⟩ ↔ |e⟩`.
    pub pump: GaussianPulse,
    /// Couples `|e⟩ ↔ |A⟩`.
    pub stokes: GaussianPulse,
    /// Nominal separation of the two peaks (ps).
    pub delta_t: f64,
    /// Pump before Stokes (used for the `|A⟩ → |↑⟩` leg).
    pub reversed: bool,
}

#[allow(clippy::too_many_arguments)]
pub fn make_translation_schedule(
    e_p: f64,
    e_s: f64,
    sigma_p: f64,
    sigma_s: f64,
    alpha_p: f64,
    alpha_s: f64,
    delta_t: f64,
    reversed: bool,
) -> Result<TranslationSchedule> {
    if !(delta_t > 0.0) || !delta_t.is_finite() {
        return Err(Error::Parameter(format!("peak separation must be positive, got {delta_t}")));
    }
    let half = 0.5 * delta_t;
    let (t_pump, t_stokes) = if reversed { (-half, half) } else { (half, -half) };
    Ok(TranslationSchedule {
        pump: GaussianPulse::new(e_p, sigma_p, t_pump, alpha_p)?,
        stokes: GaussianPulse::new(e_s, sigma_s, t_stokes, alpha_s)?,
        delta_t,
        reversed,
    })
}

impl TranslationSchedule {
    /// Mirror image in time about `t = 0`: the pulse order is swapped.
    pub fn reversed(&self) -> Self {
        Self {
            pump: self.pump.with_center(-self.pump.center),
            stokes: self.stokes.with_center(-self.stokes.center),
            delta_t: self.delta_t,
            reversed: !self.reversed,
        }
    }

    pub fn shifted(&self, dt: f64) -> Self {
        Self {
            pump: self.pump.shifted(dt),
            stokes: self.stokes.shifted(dt),
            ..*self
        }
    }

    pub fn pulses(&self) -> [&GaussianPulse; 2] {
        [&self.pump, &self.stokes]
    }

    pub fn pulses_mut(&mut self) -> [&mut GaussianPulse; 2] {
        [&mut self.pump, &mut self.stokes]
    }

    pub fn window(&self, sigmas: f64) -> (f64, f64) {
        union_window(self.pulses(), sigmas)
    }

    pub fn min_sigma(&self) -> f64 {
        self.pump.sigma.min(self.stokes.sigma)
    }
}

/// The six phases of the double 3-photon schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoinPhases {
    pub alpha_p1: f64,
    pub alpha_p2: f64,
    pub alpha_s: f64,
    pub beta_s1: f64,
    pub beta_s2: f64,
    pub beta_p: f64,
}

impl CoinPhases {
    /// `α_p1 = β_s1 = π`, `α_p2 = β_s2 = α_s = 0`, with `β_p` free; `β_p = π/2`
    /// targets `Ĉ(π/4, π/2, π/2)` and `β_p = π/3` targets `Ĉ(π/6, π/2, π/2)`.
    pub fn symmetric(beta_p: f64) -> Self {
        Self {
            alpha_p1: PI,
            alpha_p2: 0.0,
            alpha_s: 0.0,
            beta_s1: PI,
            beta_s2: 0.0,
            beta_p,
        }
    }

    /// The other published assignment: `α_s = α_p1 = β_p = 0`,
    /// `α_p2 = β_s1 = β_s2 = π`.
    pub fn alternate() -> Self {
        Self {
            alpha_p1: 0.0,
            alpha_p2: PI,
            alpha_s: 0.0,
            beta_s1: PI,
            beta_s2: PI,
            beta_p: 0.0,
        }
    }

    /// `α_p1 = β_s1 = π`, `α_p2 = β_s2 = π/2`, `α_s = 0`, `β_p = π/2`.
    pub fn asymmetric() -> Self {
        Self {
            alpha_p1: PI,
            alpha_p2: FRAC_PI_2,
            alpha_s: 0.0,
            beta_s1: PI,
            beta_s2: FRAC_PI_2,
            beta_p: FRAC_PI_2,
        }
    }
}

/// The six pulses of the coin operation.
///
/// First triplet: `S` (on `|A⟩↔|e⟩`) peaks first, `P1` (on `|↓⟩↔|e⟩`) and
/// `P2` (on `|↑⟩↔|e⟩`) peak together `ΔT` later. Second triplet, the time
/// mirror: `S1`/`S2` (on `|↓⟩↔|e⟩`, `|↑⟩↔|e⟩`) then `P` (on `|A⟩↔|e⟩`) `ΔT`
/// later. The triplets are separated by `gap`; the schedule is centred on
/// `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoinSchedule {
    pub p1: GaussianPulse,
    pub p2: GaussianPulse,
    pub s: GaussianPulse,
    pub s1: GaussianPulse,
    pub s2: GaussianPulse,
    pub p: GaussianPulse,
    pub delta_t: f64,
    pub sigma: f64,
    pub gap: f64,
}

/// Builds the coin schedule; `gap = None` separates the triplets by `ΔT`.
pub fn make_coin_schedule(
    e_a: f64,
    e_b: f64,
    sigma: f64,
    phases: &CoinPhases,
    delta_t: f64,
    gap: Option<f64>,
) -> Result<CoinSchedule> {
    if !(delta_t > 0.0) || !delta_t.is_finite() {
        return Err(Error::Parameter(format!("peak separation must be positive, got {delta_t}")));
    }
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::Parameter(format!("pulse width must be positive, got {sigma}")));
    }
    let gap = gap.unwrap_or(delta_t);
    if !(gap >= 0.0) || !gap.is_finite() {
        return Err(Error::Parameter(format!("triplet gap must be non-negative, got {gap}")));
    }
    let t_s = -(0.5 * gap + delta_t);
    let t_p12 = -0.5 * gap;
    let t_s12 = 0.5 * gap;
    let t_p = 0.5 * gap + delta_t;
    Ok(CoinSchedule {
        p1: GaussianPulse::new(e_b, sigma, t_p12, phases.alpha_p1)?,
        p2: GaussianPulse::new(e_b, sigma, t_p12, phases.alpha_p2)?,
        s: GaussianPulse::new(e_a, sigma, t_s, phases.alpha_s)?,
        s1: GaussianPulse::new(e_b, sigma, t_s12, phases.beta_s1)?,
        s2: GaussianPulse::new(e_b, sigma, t_s12, phases.beta_s2)?,
        p: GaussianPulse::new(e_a, sigma, t_p, phases.beta_p)?,
        delta_t,
        sigma,
        gap,
    })
}

impl CoinSchedule {
    /// Pulses in the order `P1, P2, S, S1, S2, P`.
    pub fn pulses(&self) -> [&GaussianPulse; 6] {
        [&self.p1, &self.p2, &self.s, &self.s1, &self.s2, &self.p]
    }

    pub fn pulses_mut(&mut self) -> [&mut GaussianPulse; 6] {
        [
            &mut self.p1,
            &mut self.p2,
            &mut self.s,
            &mut self.s1,
            &mut self.s2,
            &mut self.p,
        ]
    }

    pub fn window(&self, sigmas: f64) -> (f64, f64) {
        union_window(self.pulses(), sigmas)
    }

    pub fn min_sigma(&self) -> f64 {
        self.pulses().iter().map(|p| p.sigma).fold(f64::INFINITY, f64::min)
    }

    pub fn shifted(&self, dt: f64) -> Self {
        let mut out = *self;
        for p in out.pulses_mut() {
            *p = p.shifted(dt);
        }
        out
    }

    pub fn phases(&self) -> CoinPhases {
        CoinPhases {
            alpha_p1: self.p1.phase,
            alpha_p2: self.p2.phase,
            alpha_s: self.s.phase,
            beta_s1: self.s1.phase,
            beta_s2: self.s2.phase,
            beta_p: self.p.phase,
        }
    }
}
