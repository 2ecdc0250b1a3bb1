mod common;

use proptest::prelude::*;
use qdwalk::noise::{
    member_rng, noise_sweep, noisy_walk_member, perturb, NoiseDistribution, NoiseMode, NoiseSpec, NoiseTarget,
};
use qdwalk::stirap::CoinSpec;
use qdwalk::walk::{compare, ideal_walk_utilde, initial_state, run_walk_with, InitialCondition};

const TARGETS: [NoiseTarget; 4] = [NoiseTarget::PeakEnergy, NoiseTarget::Phase, NoiseTarget::Sigma, NoiseTarget::Timing];
const MODES: [NoiseMode; 3] = [NoiseMode::Fixed, NoiseMode::PerStep, NoiseMode::PerPulse];

fn spec(target: NoiseTarget, magnitude: f64, mode: NoiseMode) -> NoiseSpec {
    NoiseSpec {
        mode,
        ..NoiseSpec::new(target, magnitude, 2024).unwrap()
    }
}

#[test]
fn zero_noise_is_bit_identical_to_the_clean_walk() {
    let base = common::optimized_params();
    let ops = base.operators().unwrap();
    let n = 12;
    let init = initial_state(n, &InitialCondition::balanced(0)).unwrap();
    let (clean_state, clean) = run_walk_with(n, &ops, &init).unwrap();
    for target in TARGETS {
        for mode in MODES {
            let run = noisy_walk_member(n, &spec(target, 0.0, mode), &base, &ops, &init, 3).unwrap();
            assert_eq!(run.state, clean_state, "{target:?} {mode:?}");
            assert_eq!(run.distribution.probabilities, clean.probabilities);
        }
    }
}

#[test]
fn members_are_reproducible_and_distinct() {
    let base = common::optimized_params();
    let ops = base.operators().unwrap();
    let n = 6;
    let init = initial_state(n, &InitialCondition::balanced(0)).unwrap();
    let s = spec(NoiseTarget::PeakEnergy, 0.05, NoiseMode::PerStep);
    let a = noisy_walk_member(n, &s, &base, &ops, &init, 1).unwrap();
    let b = noisy_walk_member(n, &s, &base, &ops, &init, 1).unwrap();
    let c = noisy_walk_member(n, &s, &base, &ops, &init, 2).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.distribution.probabilities, c.distribution.probabilities);
}

#[test]
fn sweep_rows_share_members_and_start_clean() {
    let base = common::optimized_params();
    let n = 8;
    let init = initial_state(n, &InitialCondition::balanced(0)).unwrap();
    let c = CoinSpec::new(std::f64::consts::FRAC_PI_4, std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2).unwrap();
    let ideal = ideal_walk_utilde(n, &c, &init).unwrap();
    let (_, clean) = run_walk_with(n, &base.operators().unwrap(), &init).unwrap();
    let clean_tvd = compare(&clean, &ideal).unwrap().tvd;

    let t = spec(NoiseTarget::Timing, 0.0, NoiseMode::Fixed);
    let table = noise_sweep(&t, &[0.0, 0.2], 3, n, &base, &init, &ideal).unwrap();
    assert_eq!(table.rows.len(), 2);
    assert!(table.rows[0].tvds.iter().all(|&v| v == clean_tvd));
    assert_eq!(table.rows[0].iqr, 0.0);
    assert!(table.rows[1].median_tvd > clean_tvd);
    assert!(table.monotone);

    let mut buf = Vec::new();
    table.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("magnitude,median_tvd,iqr,members\n"));
    assert_eq!(text.lines().count(), 3);
}

proptest! {
    #![proptest_config(ProptestConfig {
        failure_persistence: None,
        ..ProptestConfig::with_cases(128)
    })]

    #[test]
    fn uniform_draws_stay_within_the_magnitude(seed in any::<u64>(), m in 0.0f64..0.5, t in 0usize..4) {
        let base = common::optimized_params();
        let s = NoiseSpec { distribution: NoiseDistribution::Uniform, ..spec(TARGETS[t], m, NoiseMode::Fixed) };
        let p = perturb(&base, &s, &mut member_rng(seed, 0)).unwrap();
        let pairs = base.forward.pulses().into_iter().zip(p.params.forward.pulses())
            .chain(base.reverse.pulses().into_iter().zip(p.params.reverse.pulses()))
            .chain(base.coin.pulses().into_iter().zip(p.params.coin.pulses()));
        let dt_max = base.coin.delta_t.max(base.forward.delta_t);
        for (a, b) in pairs {
            let tol = 1e-12;
            match TARGETS[t] {
                NoiseTarget::PeakEnergy => prop_assert!((b.peak_energy - a.peak_energy).abs() <= m * a.peak_energy + tol),
                NoiseTarget::Sigma => prop_assert!((b.sigma - a.sigma).abs() <= m * a.sigma + tol),
                NoiseTarget::Timing => prop_assert!((b.center - a.center).abs() <= m * dt_max + tol),
                NoiseTarget::Phase => {
                    let d = (b.phase - a.phase).rem_euclid(std::f64::consts::TAU);
                    let d = d.min(std::f64::consts::TAU - d);
                    prop_assert!(d <= m * std::f64::consts::TAU + tol);
                }
            }
        }
    }
}
