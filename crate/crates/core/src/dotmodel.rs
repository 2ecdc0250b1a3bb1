//! Selective-addressing check for a node's level structure: every laser
//! frequency must be near-resonant only with the transition it is meant to
//! drive.
//!
//! A laser tuned to `Ω = |E_b − E_a|` can drive any pair `(x, y)` with
//! `||E_y − E_x| − Ω| ≤ w`. Only pairs with at least one occupied level
//! matter; the occupied levels are those named in the intended transitions.
//! Pairs reached from an occupied level by one photon, up or down, are
//! checked, which covers ladder steps such as `E_e + Ω`.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn default_dot() -> String {
    "node".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnergyLevel {
    pub label: String,
    /// meV.
    pub energy: f64,
    #[serde(default = "default_dot")]
    pub dot: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnergySpectrum {
    pub levels: Vec<EnergyLevel>,
    /// Absorption line width `w_α` (meV).
    pub linewidth: f64,
}

impl EnergySpectrum {
    pub fn new(levels: Vec<EnergyLevel>, linewidth: f64) -> Result<Self> {
        let s = Self { levels, linewidth };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.linewidth > 0.0) || !self.linewidth.is_finite() {
            return Err(Error::Parameter(format!("line width must be positive, got {}", self.linewidth)));
        }
        let mut seen = HashSet::new();
        let mut last: HashMap<&str, f64> = HashMap::new();
        for l in &self.levels {
            if !l.energy.is_finite() {
                return Err(Error::Parameter(format!("level {} has a non-finite energy", l.label)));
            }
            if !seen.insert(l.label.as_str()) {
                return Err(Error::Contract(format!("duplicate level label {}", l.label)));
            }
            if let Some(&prev) = last.get(l.dot.as_str()) {
                if l.energy <= prev {
                    return Err(Error::Contract(format!(
                        "energies in dot {} must increase strictly; {} at {} follows {}",
                        l.dot, l.label, l.energy, prev
                    )));
                }
            }
            last.insert(l.dot.as_str(), l.energy);
        }
        Ok(())
    }

    pub fn energy(&self, label: &str) -> Option<f64> {
        self.levels.iter().find(|l| l.label == label).map(|l| l.energy)
    }

    /// Single-node structure of the reference design: `A` at 173 meV with
    /// `↓`/`↑` 15 meV below/above, `e` at 1045 meV with neighbours 20 meV
    /// away, `u` at 1912 meV with neighbours 30 meV away, `w_α = 1` meV.
    pub fn published() -> Self {
        let lv = |label: &str, energy: f64| EnergyLevel {
            label: label.into(),
            energy,
            dot: default_dot(),
        };
        Self {
            levels: vec![
                lv("down", 158.0),
                lv("A", 173.0),
                lv("up", 188.0),
                lv("e-", 1025.0),
                lv("e", 1045.0),
                lv("e+", 1065.0),
                lv("u-", 1882.0),
                lv("u", 1912.0),
                lv("u+", 1942.0),
            ],
            linewidth: 1.0,
        }
    }

    /// The lasers `Ω_↓`, `Ω_↑`, `Ω_A` of the published scheme.
    pub fn published_transitions() -> Vec<(String, String)> {
        ["down", "up", "A"].iter().map(|l| (l.to_string(), "e".to_string())).collect()
    }
}

/// A pair of levels a laser can drive besides its own transition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpuriousTransition {
    /// The laser's intended pair, lower level first.
    pub laser: (String, String),
    /// Laser photon energy `ħΩ` (meV).
    pub frequency: f64,
    /// Lower level of the spurious pair.
    pub lower: String,
    /// Upper level of the spurious pair.
    pub upper: String,
    /// `|E_upper − E_lower|`.
    pub gap: f64,
    /// `|gap − ħΩ|`.
    pub detuning: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingReport {
    pub linewidth: f64,
    pub spurious: Vec<SpuriousTransition>,
}

impl CouplingReport {
    pub fn passed(&self) -> bool {
        self.spurious.is_empty()
    }
}

/// Every near-resonant pair other than the intended one, for every laser.
pub fn check_selective_coupling(spec: &EnergySpectrum, intended: &[(String, String)]) -> Result<CouplingReport> {
    spec.validate()?;
    let e = |l: &str| {
        spec.energy(l)
            .ok_or_else(|| Error::Contract(format!("intended transition names unknown level {l}")))
    };
    let ordered = |a: &str, b: &str| -> Result<(String, String)> {
        Ok(if e(a)? <= e(b)? {
            (a.to_string(), b.to_string())
        } else {
            (b.to_string(), a.to_string())
        })
    };

    let mut occupied = BTreeSet::new();
    for (a, b) in intended {
        if a == b {
            return Err(Error::Contract(format!("transition {a} ↔ {b} joins a level to itself")));
        }
        e(a)?;
        e(b)?;
        occupied.insert(a.as_str());
        occupied.insert(b.as_str());
    }

    let w = spec.linewidth;
    let mut spurious = Vec::new();
    let mut seen = HashSet::new();
    for (a, b) in intended {
        let laser = ordered(a, b)?;
        let omega = (e(b)? - e(a)?).abs();
        for &x in &occupied {
            for y in &spec.levels {
                if y.label == x {
                    continue;
                }
                let pair = ordered(x, &y.label)?;
                if pair == laser {
                    continue;
                }
                let gap = (y.energy - e(x)?).abs();
                let detuning = (gap - omega).abs();
                if detuning <= w && seen.insert((laser.clone(), pair.clone())) {
                    spurious.push(SpuriousTransition {
                        laser: laser.clone(),
                        frequency: omega,
                        lower: pair.0,
                        upper: pair.1,
                        gap,
                        detuning,
                    });
                }
            }
        }
    }
    Ok(CouplingReport { linewidth: w, spurious })
}
