use std::io::Write;
use std::path::PathBuf;

use num_complex::Complex64;
use qdwalk::dotmodel::{check_selective_coupling, CouplingReport};
use qdwalk::noise::{noise_sweep, noisy_walk, peak_structure, PeakStructure, SweepTable};
use qdwalk::optimizer::{optimize_coin, optimize_translation, BasinReport, Optimum};
use qdwalk::stirap::{
    coin_distance, cost_coin, extract_coin, ideal_coin, trace_2ph, trace_3ph, PopulationTrace,
};
use qdwalk::walk::{compare, ideal_walk_utilde, initial_state, run_walk, Comparison, Distribution};
use serde::Serialize;

use crate::config::{Process, RunConfig};
use crate::error::CliError;
use crate::output::OutputDir;
use crate::Command;

/// What a command printed and wrote.
#[derive(Debug, Default)]
pub struct Report {
    pub summary: String,
    pub files: Vec<PathBuf>,
}

impl Report {
    pub fn text(s: String) -> Self {
        Self {
            summary: s,
            files: Vec::new(),
        }
    }
}

pub fn dispatch(cmd: Command, cfg: &RunConfig) -> Result<Report, CliError> {
    match cmd {
        Command::Optimize => optimize(cfg),
        Command::Propagate => propagate(cfg),
        Command::Walk => walk(cfg),
        Command::Noise => noise(cfg),
        Command::CheckDots => check_dots(cfg),
        Command::ShowConfig => Ok(Report::text(serde_json::to_string_pretty(cfg)?)),
        Command::Presets => Ok(Report::text(crate::config::PRESETS.join("\n"))),
    }
}

/// Shortest round-trip text; scientific notation outside `[1e-4, 1e6)`.
fn num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e6).contains(&a) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

fn out_dir(cfg: &RunConfig) -> Result<OutputDir, CliError> {
    OutputDir::create(&cfg.output.dir, cfg.output.timestamp)
}

#[derive(Serialize)]
struct OptimumFile {
    process: Process,
    e_star: f64,
    dt_star: f64,
    cost: f64,
    evaluations: usize,
    converged: bool,
    on_boundary: bool,
    degenerate: bool,
    basins: Option<BasinReport>,
    /// Run parameters without the `output` section, so the file does not
    /// depend on where it was written.
    config: serde_json::Value,
}

pub fn run_optimizer(cfg: &RunConfig) -> Result<Optimum, CliError> {
    let b = &cfg.optimize.search;
    Ok(match cfg.optimize.process {
        Process::Translation => optimize_translation(&cfg.translation_fixed(), b)?,
        Process::Coin => optimize_coin(&cfg.coin_fixed(), b)?,
        Process::TranslationReverse => {
            return Err(CliError::Config(
                "optimize.process must be translation or coin; the reverse schedule follows from the forward one".into(),
            ))
        }
    })
}

fn parameters_only(cfg: &RunConfig) -> Result<serde_json::Value, CliError> {
    let mut v = serde_json::to_value(cfg)?;
    if let Some(m) = v.as_object_mut() {
        m.remove("output");
    }
    Ok(v)
}

fn optimize(cfg: &RunConfig) -> Result<Report, CliError> {
    let opt = run_optimizer(cfg)?;
    let mut out = out_dir(cfg)?;
    let basins = opt.surface.as_ref().map(|s| s.basins(cfg.optimize.basin_fraction));
    if let Some(s) = &opt.surface {
        out.write_with("surface.csv", |w| Ok(s.write_csv(w)?))?;
    }
    out.write_json(
        "optimum.json",
        &OptimumFile {
            process: cfg.optimize.process,
            e_star: opt.e_star,
            dt_star: opt.dt_star,
            cost: opt.cost,
            evaluations: opt.evaluations,
            converged: opt.converged,
            on_boundary: opt.on_boundary,
            degenerate: opt.degenerate,
            basins,
            config: parameters_only(cfg)?,
        },
    )?;
    let summary = format!(
        "optimum E* = {:.6} meV, dT* = {:.6} ps, cost {:.3e} after {} evaluations{}{}",
        opt.e_star,
        opt.dt_star,
        opt.cost,
        opt.evaluations,
        if opt.on_boundary { " (on the search-box boundary)" } else { "" },
        if opt.degenerate { " (flat surface)" } else { "" },
    );
    if !opt.converged {
        return Err(CliError::Failed(format!(
            "optimization did not converge: {summary}; partial results in {}",
            cfg.output.dir.display()
        )));
    }
    Ok(Report {
        summary,
        files: out.written().to_vec(),
    })
}

#[derive(Serialize)]
struct PropagationFile {
    process: Process,
    labels: &'static [&'static str],
    /// `None` means the process started in its first level.
    initial: Option<Vec<Complex64>>,
    final_populations: Vec<f64>,
    peak_populations: Vec<f64>,
    unitarity_defect: f64,
    /// `|U_ij|²`, row `i` being the final level.
    transition_probabilities: Vec<Vec<f64>>,
    coin: Option<CoinSummary>,
}

#[derive(Serialize)]
struct CoinSummary {
    cost: f64,
    block_defect: f64,
    distance_to_target: f64,
    block: [[Complex64; 2]; 2],
}

pub fn propagation_trace(cfg: &RunConfig) -> Result<PopulationTrace, CliError> {
    let dim = match cfg.propagate.process {
        Process::Coin => 4,
        _ => 3,
    };
    let psi0 = match &cfg.propagate.initial {
        Some(v) => {
            if v.len() != dim {
                return Err(CliError::Config(format!(
                    "propagate.initial has {} amplitudes; this process needs {dim}",
                    v.len()
                )));
            }
            let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            if (norm - 1.0).abs() > 1e-9 {
                return Err(CliError::Config(format!("propagate.initial has norm² {norm}, expected 1")));
            }
            v.clone()
        }
        None => {
            let mut v = vec![Complex64::new(0.0, 0.0); dim];
            v[0] = Complex64::new(1.0, 0.0);
            v
        }
    };
    let forward = cfg.translation.schedule()?;
    Ok(match cfg.propagate.process {
        Process::Translation => trace_2ph(&forward, &cfg.grid, &psi0)?,
        Process::TranslationReverse => trace_2ph(&forward.reversed(), &cfg.grid, &psi0)?,
        Process::Coin => trace_3ph(&cfg.coin.schedule()?, &cfg.grid, &psi0)?,
    })
}

fn propagate(cfg: &RunConfig) -> Result<Report, CliError> {
    let trace = propagation_trace(cfg)?;
    let labels = trace.basis.labels();
    let mut out = out_dir(cfg)?;
    let stride = cfg.propagate.stride;
    out.write_with("trace.csv", |w| {
        let mut c = csv::Writer::from_writer(w);
        let mut header = vec!["t".to_string()];
        header.extend(labels.iter().map(|l| l.to_string()));
        c.write_record(&header)?;
        let last = trace.times.len().saturating_sub(1);
        for (k, (t, p)) in trace.times.iter().zip(&trace.populations).enumerate() {
            if k % stride != 0 && k != last {
                continue;
            }
            let mut row = vec![num(*t)];
            row.extend(p.iter().map(|&x| num(x)));
            c.write_record(&row)?;
        }
        c.flush()?;
        Ok(())
    })?;

    let u = &trace.unitary;
    let dim = u.dim();
    let coin = if cfg.propagate.process == Process::Coin {
        let (block, defect) = extract_coin(u)?;
        Some(CoinSummary {
            cost: cost_coin(u, cfg.optimize.coin_target)?,
            block_defect: defect,
            distance_to_target: coin_distance(&block, &ideal_coin(&cfg.coin.target)),
            block: [[block[(0, 0)], block[(0, 1)]], [block[(1, 0)], block[(1, 1)]]],
        })
    } else {
        None
    };
    let file = PropagationFile {
        process: cfg.propagate.process,
        labels,
        initial: cfg.propagate.initial.clone(),
        final_populations: trace.populations.last().cloned().unwrap_or_default(),
        peak_populations: (0..dim).map(|l| trace.peak(l)).collect(),
        unitarity_defect: u.unitarity_defect(),
        transition_probabilities: (0..dim).map(|i| (0..dim).map(|j| u[(i, j)].norm_sqr()).collect()).collect(),
        coin,
    };
    out.write_json("propagation.json", &file)?;
    let finals = labels
        .iter()
        .zip(&file.final_populations)
        .map(|(l, p)| format!("{l} {p:.6}"))
        .collect::<Vec<_>>()
        .join(", ");
    Ok(Report {
        summary: format!("{} slices; final populations: {finals}", trace.times.len()),
        files: out.written().to_vec(),
    })
}

/// STIRAP walk and the ideal `Ũ` walk from the same initial state.
pub fn walk_pair(cfg: &RunConfig) -> Result<(Distribution, Distribution, Comparison), CliError> {
    let n = cfg.walk.steps;
    let params = cfg.stirap_params()?;
    let init = initial_state(n, &cfg.walk.initial)?;
    let (_, stirap) = run_walk(n, &params, &init)?;
    let ideal = ideal_walk_utilde(n, &cfg.coin.target, &init)?;
    let cmp = compare(&stirap, &ideal)?;
    Ok((stirap, ideal, cmp))
}

fn write_distribution(w: &mut dyn Write, d: &Distribution, ideal: &Distribution) -> Result<(), CliError> {
    let mut c = csv::Writer::from_writer(w);
    c.write_record(["node", "probability", "ideal"])?;
    for (label, p) in d.labels().zip(&d.probabilities) {
        c.write_record([label.to_string(), num(*p), num(ideal.get(label))])?;
    }
    c.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct WalkFile<'a> {
    distribution: &'a Distribution,
    ideal: &'a Distribution,
    comparison: Comparison,
    mean: f64,
    std_dev: f64,
}

fn walk(cfg: &RunConfig) -> Result<Report, CliError> {
    let (d, ideal, cmp) = walk_pair(cfg)?;
    let mut out = out_dir(cfg)?;
    out.write_with("distribution.csv", |w| write_distribution(w, &d, &ideal))?;
    out.write_json(
        "distribution.json",
        &WalkFile {
            distribution: &d,
            ideal: &ideal,
            comparison: cmp,
            mean: d.mean(),
            std_dev: d.std_dev(),
        },
    )?;
    Ok(Report {
        summary: format!(
            "{} steps: TVD {:.3e}, fidelity {:.6}, residual e {:.2e}, A {:.2e}",
            cfg.walk.steps, cmp.tvd, cmp.fidelity, d.meta.residual_excited, d.meta.residual_aux
        ),
        files: out.written().to_vec(),
    })
}

#[derive(Serialize)]
struct NoiseFile<'a> {
    spec: &'a qdwalk::noise::NoiseSpec,
    steps: usize,
    comparison: Comparison,
    peaks: PeakStructure,
    clamped_sigmas: usize,
    sweep: Option<&'a SweepTable>,
}

fn noise(cfg: &RunConfig) -> Result<Report, CliError> {
    let n = cfg.walk.steps;
    let params = cfg.stirap_params()?;
    let init = initial_state(n, &cfg.walk.initial)?;
    let ideal = ideal_walk_utilde(n, &cfg.coin.target, &init)?;
    let run = noisy_walk(n, &cfg.noise.spec, &params, &init)?;
    let cmp = compare(&run.distribution, &ideal)?;
    let peaks = peak_structure(&run.distribution, cfg.walk.initial.node, n);
    let sweep = match &cfg.noise.sweep {
        Some(s) => Some(noise_sweep(&cfg.noise.spec, &s.magnitudes, s.ensemble, n, &params, &init, &ideal)?),
        None => None,
    };

    let mut out = out_dir(cfg)?;
    out.write_with("noisy_distribution.csv", |w| write_distribution(w, &run.distribution, &ideal))?;
    if let Some(t) = &sweep {
        out.write_with("sweep.csv", |w| Ok(t.write_csv(w)?))?;
    }
    out.write_json(
        "noise.json",
        &NoiseFile {
            spec: &cfg.noise.spec,
            steps: n,
            comparison: cmp,
            peaks,
            clamped_sigmas: run.clamped_sigmas,
            sweep: sweep.as_ref(),
        },
    )?;
    let mut summary = format!(
        "{:?} noise {:.4}: TVD {:.4}, two peaks {}",
        cfg.noise.spec.target, cfg.noise.spec.magnitude, cmp.tvd, peaks.two_peaked
    );
    if run.clamped_sigmas > 0 {
        summary.push_str(&format!(", {} widths clamped", run.clamped_sigmas));
    }
    if let Some(t) = &sweep {
        summary.push_str(&format!(", sweep monotone {}", t.monotone));
    }
    Ok(Report {
        summary,
        files: out.written().to_vec(),
    })
}

fn check_dots(cfg: &RunConfig) -> Result<Report, CliError> {
    let report: CouplingReport = check_selective_coupling(&cfg.dots.spectrum, &cfg.dots.intended)
        .map_err(|e| CliError::Config(format!("dots: {e}")))?;
    let mut out = out_dir(cfg)?;
    out.write_json("report.json", &report)?;
    if !report.passed() {
        let lines = report
            .spurious
            .iter()
            .map(|s| {
                format!(
                    "laser {}-{} ({} meV) also drives {}-{} (detuning {} meV)",
                    s.laser.0, s.laser.1, s.frequency, s.lower, s.upper, s.detuning
                )
            })
            .collect::<Vec<_>>()
            .join("\n");
        return Err(CliError::Failed(format!("{} spurious transitions\n{lines}", report.spurious.len())));
    }
    Ok(Report {
        summary: format!("no spurious transitions within {} meV", report.linewidth),
        files: out.written().to_vec(),
    })
}
