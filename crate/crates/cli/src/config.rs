//! Run configuration: one JSON document, optionally layered over a named
//! preset. Unknown keys are rejected at every level.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use qdwalk::dotmodel::EnergySpectrum;
use qdwalk::noise::{NoiseSpec, NoiseTarget};
use qdwalk::optimizer::{CoinFixed, SearchBox, TranslationFixed};
use qdwalk::pulses::{make_coin_schedule, make_translation_schedule, CoinPhases, CoinSchedule, TranslationSchedule};
use qdwalk::stirap::{CoinCostTarget, CoinSpec, GridPolicy, TranslationCost};
use qdwalk::walk::{InitialCondition, StirapParams};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TranslationConfig {
    pub e_p: f64,
    pub e_s: f64,
    pub sigma_p: f64,
    pub sigma_s: f64,
    pub alpha_p: f64,
    pub alpha_s: f64,
    pub delta_t: f64,
}

impl Default for TranslationConfig {
    fn default() -> Self {
        Self {
            e_p: 1.50,
            e_s: 1.5,
            sigma_p: 4.0,
            sigma_s: 4.0,
            alpha_p: 0.0,
            alpha_s: 0.0,
            delta_t: 5.87,
        }
    }
}

impl TranslationConfig {
    pub fn schedule(&self) -> qdwalk::Result<TranslationSchedule> {
        make_translation_schedule(
            self.e_p,
            self.e_s,
            self.sigma_p,
            self.sigma_s,
            self.alpha_p,
            self.alpha_s,
            self.delta_t,
            false,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CoinConfig {
    pub e_a: f64,
    pub e_b: f64,
    pub sigma: f64,
    pub delta_t: f64,
    pub gap: Option<f64>,
    pub phases: CoinPhases,
    /// Coin the schedule is meant to realize; used for reference walks and
    /// coin comparisons.
    pub target: CoinSpec,
}

impl Default for CoinConfig {
    fn default() -> Self {
        use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
        Self {
            e_a: 1.0,
            e_b: 1.34,
            sigma: 4.0,
            delta_t: 6.12,
            gap: None,
            phases: CoinPhases::symmetric(FRAC_PI_2),
            target: CoinSpec {
                theta: FRAC_PI_4,
                phi1: FRAC_PI_2,
                phi2: FRAC_PI_2,
            },
        }
    }
}

impl CoinConfig {
    pub fn schedule(&self) -> qdwalk::Result<CoinSchedule> {
        make_coin_schedule(self.e_a, self.e_b, self.sigma, &self.phases, self.delta_t, self.gap)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Process {
    Translation,
    TranslationReverse,
    Coin,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OptimizeConfig {
    pub process: Process,
    #[serde(rename = "box")]
    pub search: SearchBox,
    pub translation_cost: TranslationCost,
    pub coin_target: CoinCostTarget,
    pub tol: f64,
    /// Fraction of the median used to delimit low-cost basins.
    pub basin_fraction: f64,
}

impl Default for OptimizeConfig {
    fn default() -> Self {
        Self {
            process: Process::Coin,
            search: SearchBox::default(),
            translation_cost: TranslationCost::default(),
            coin_target: CoinCostTarget::default(),
            tol: 1e-10,
            basin_fraction: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PropagateConfig {
    pub process: Process,
    /// Initial amplitudes in the process basis; `None` starts in `|↑⟩`.
    pub initial: Option<Vec<Complex64>>,
    /// Keep every `stride`-th slice in the trace.
    pub stride: usize,
}

impl Default for PropagateConfig {
    fn default() -> Self {
        Self {
            process: Process::Translation,
            initial: None,
            stride: 10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WalkConfig {
    pub steps: usize,
    pub initial: InitialCondition,
}

impl Default for WalkConfig {
    fn default() -> Self {
        Self {
            steps: 100,
            initial: InitialCondition::balanced(1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub magnitudes: Vec<f64>,
    pub ensemble: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseConfig {
    pub spec: NoiseSpec,
    pub sweep: Option<SweepConfig>,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self {
            spec: NoiseSpec {
                target: NoiseTarget::PeakEnergy,
                magnitude: 0.02,
                seed: 0,
                mode: Default::default(),
                distribution: Default::default(),
            },
            sweep: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DotsConfig {
    pub spectrum: EnergySpectrum,
    pub intended: Vec<(String, String)>,
}

impl Default for DotsConfig {
    fn default() -> Self {
        Self {
            spectrum: EnergySpectrum::published(),
            intended: EnergySpectrum::published_transitions(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub timestamp: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
            timestamp: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub translation: TranslationConfig,
    pub coin: CoinConfig,
    pub grid: GridPolicy,
    pub optimize: OptimizeConfig,
    pub propagate: PropagateConfig,
    pub walk: WalkConfig,
    pub noise: NoiseConfig,
    pub dots: DotsConfig,
    pub output: OutputConfig,
}

impl RunConfig {
    pub fn stirap_params(&self) -> qdwalk::Result<StirapParams> {
        Ok(StirapParams::new(self.translation.schedule()?, self.coin.schedule()?, self.grid))
    }

    pub fn translation_fixed(&self) -> TranslationFixed {
        TranslationFixed {
            e_s: self.translation.e_s,
            sigma_p: self.translation.sigma_p,
            sigma_s: self.translation.sigma_s,
            alpha_p: self.translation.alpha_p,
            alpha_s: self.translation.alpha_s,
            cost: self.optimize.translation_cost,
            grid: self.grid,
            tol: self.optimize.tol,
        }
    }

    pub fn coin_fixed(&self) -> CoinFixed {
        CoinFixed {
            e_a: self.coin.e_a,
            sigma: self.coin.sigma,
            phases: self.coin.phases,
            gap: self.coin.gap,
            target: self.optimize.coin_target,
            grid: self.grid,
            tol: self.optimize.tol,
        }
    }

    /// Range and consistency checks serde cannot express.
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        if let Err(e) = self.optimize.search.validate() {
            return bad(format!("optimize.box: {e}"));
        }
        if self.propagate.stride == 0 {
            return bad("propagate.stride must be at least 1".into());
        }
        if let Err(e) = self.noise.spec.validate() {
            return bad(format!("noise.spec: {e}"));
        }
        if let Some(s) = &self.noise.sweep {
            if s.ensemble == 0 || s.magnitudes.is_empty() {
                return bad("noise.sweep needs at least one magnitude and one ensemble member".into());
            }
        }
        if let Err(e) = self.dots.spectrum.validate() {
            return bad(format!("dots.spectrum: {e}"));
        }
        if let Err(e) = CoinSpec::new(self.coin.target.theta, self.coin.target.phi1, self.coin.target.phi2) {
            return bad(format!("coin.target: {e}"));
        }
        if let Err(e) = self.stirap_params() {
            return bad(format!("pulse parameters: {e}"));
        }
        Ok(())
    }
}

/// Named parameter sets. Each is a partial config layered under the file.
pub const PRESETS: &[&str] = &["translation-paper", "coin-pi4", "coin-pi6", "coin-asym", "walk-optimized"];

pub fn preset(name: &str) -> Option<Value> {
    use serde_json::json;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_3, FRAC_PI_6};
    let v = match name {
        "translation-paper" => json!({
            "translation": {"e_p": 1.50, "e_s": 1.5, "sigma_p": 4.0, "sigma_s": 4.0,
                            "alpha_p": 0.0, "alpha_s": 0.0, "delta_t": 5.87},
            "optimize": {"process": "translation"},
            "propagate": {"process": "translation"}
        }),
        "coin-pi4" => json!({
            "coin": {"e_a": 1.0, "e_b": 1.34, "sigma": 4.0, "delta_t": 6.12,
                     "phases": serde_json::to_value(CoinPhases::symmetric(FRAC_PI_2)).ok()?,
                     "target": {"theta": FRAC_PI_4, "phi1": FRAC_PI_2, "phi2": FRAC_PI_2}},
            "optimize": {"process": "coin"},
            "propagate": {"process": "coin"}
        }),
        "coin-pi6" => json!({
            "coin": {"e_a": 1.0, "e_b": 1.34, "sigma": 4.0, "delta_t": 6.12,
                     "phases": serde_json::to_value(CoinPhases::symmetric(FRAC_PI_3)).ok()?,
                     "target": {"theta": FRAC_PI_6, "phi1": FRAC_PI_2, "phi2": FRAC_PI_2}},
            "optimize": {"process": "coin"},
            "propagate": {"process": "coin"}
        }),
        "coin-asym" => json!({
            "coin": {"e_a": 1.0, "e_b": 1.34, "sigma": 4.0, "delta_t": 6.12,
                     "phases": serde_json::to_value(CoinPhases::asymmetric()).ok()?,
                     "target": {"theta": FRAC_PI_4, "phi1": FRAC_PI_2, "phi2": 3.0 * FRAC_PI_2}},
            "optimize": {"process": "coin"},
            "propagate": {"process": "coin"}
        }),
        // Optima found by this implementation's own scans (transfer and
        // unitarity costs), used for walk reproductions.
        "walk-optimized" => json!({
            "translation": {"e_p": 1.371_217_706_330_519_8, "delta_t": 6.845_150_210_026_995},
            "coin": {"e_b": 1.382_904_918_421_159_7, "delta_t": 7.533_671_788_453_144}
        }),
        _ => return None,
    };
    Some(v)
}

/// Recursively overlays `top` onto `base`; objects merge, everything else
/// is replaced.
pub fn merge(base: &mut Value, top: Value) {
    match (base, top) {
        (Value::Object(b), Value::Object(t)) => {
            for (k, v) in t {
                match b.get_mut(&k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

/// Preset (if any) overlaid by the file (if any), then parsed and checked.
pub fn load(path: Option<&Path>, preset_name: Option<&str>) -> Result<RunConfig, CliError> {
    let mut doc = Value::Object(Default::default());
    if let Some(name) = preset_name {
        let p = preset(name).ok_or_else(|| {
            CliError::Config(format!("unknown preset {name:?}; available: {}", PRESETS.join(", ")))
        })?;
        merge(&mut doc, p);
    }
    if let Some(path) = path {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let file: Value = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        if !file.is_object() {
            return Err(CliError::Config(format!("{}: top level must be an object", path.display())));
        }
        merge(&mut doc, file);
    }
    let cfg: RunConfig = serde_json::from_value(doc).map_err(|e| CliError::Config(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}
