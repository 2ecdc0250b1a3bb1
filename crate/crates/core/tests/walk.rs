mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;
use proptest::prelude::*;
use qdwalk::propagator::ComplexMatrix;
use qdwalk::stirap::{ideal_coin, CoinSpec};
use qdwalk::walk::{
    compare, ideal_states, ideal_walk_u, ideal_walk_utilde, initial_state, measure, run_walk_with, stirap_step,
    walk_nodes, Distribution, InitialCondition, Level, StepOperators, WalkOperator,
};
use qdwalk::Error;

fn hadamard_like() -> CoinSpec {
    CoinSpec::new(FRAC_PI_4, FRAC_PI_2, FRAC_PI_2).unwrap()
}

/// Dense `U` on positions `−(n+1) ..= n+1`, coin index fastest, applied
/// `n` times; returns `P(x)` for `x ∈ −n ..= n`.
fn dense_u_walk(n: usize, coin: &ComplexMatrix, up: Complex64, down: Complex64) -> Vec<f64> {
    let m = n as i64 + 1;
    let sites = (2 * m + 1) as usize;
    let dim = 2 * sites;
    let idx = |x: i64, c: usize| ((x + m) as usize) * 2 + c;
    let mut w = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
    for x in -m..=m {
        for c_in in 0..2 {
            for c_out in 0..2 {
                let y = if c_out == 0 { x + 1 } else { x - 1 };
                if (-m..=m).contains(&y) {
                    w[idx(y, c_out)][idx(x, c_in)] += coin[(c_out, c_in)];
                }
            }
        }
    }
    let w = ComplexMatrix::from_rows(&w).unwrap();
    let mut psi = vec![Complex64::new(0.0, 0.0); dim];
    psi[idx(0, 0)] = up;
    psi[idx(0, 1)] = down;
    for _ in 0..n {
        psi = w.apply(&psi);
    }
    (-(n as i64)..=n as i64).map(|x| psi[idx(x, 0)].norm_sqr() + psi[idx(x, 1)].norm_sqr()).collect()
}

fn u_distribution(n: usize, coin: &CoinSpec, init: InitialCondition) -> Distribution {
    let first = -(n as i64) - 1;
    let state = InitialCondition { node: 0, ..init }.state(2 * n + 3, first).unwrap();
    ideal_walk_u(n, coin, &state).unwrap()
}

#[test]
fn ideal_walk_conserves_norm_at_every_step() {
    let init = InitialCondition::balanced(0).state(103, 0).unwrap();
    let states = ideal_states(WalkOperator::UTilde, 100, &ideal_coin(&hadamard_like()), &init).unwrap();
    assert_eq!(states.len(), 101);
    for s in &states {
        assert!((s.norm_sqr() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn spreading_is_ballistic() {
    let ratios: Vec<f64> = [25usize, 50, 100]
        .iter()
        .map(|&n| u_distribution(n, &hadamard_like(), InitialCondition::balanced(0)).std_dev() / n as f64)
        .collect();
    let reference = ratios[2];
    for r in &ratios {
        assert!((r / reference - 1.0).abs() < 0.05, "σ/n ratios {ratios:?}");
    }
    // a classical random walk would give σ/n = 1/√n
    assert!(reference > 0.3);
}

#[test]
fn balanced_start_gives_a_mirror_symmetric_distribution() {
    for n in [10usize, 37, 100] {
        let init = initial_state(n, &InitialCondition::balanced(0)).unwrap();
        let d = ideal_walk_utilde(n, &hadamard_like(), &init).unwrap();
        for j in 0..=n as i64 {
            assert!((d.get(j) - d.get(n as i64 - j)).abs() < 1e-12);
        }
    }
}

#[test]
fn ideal_u_walk_matches_dense_oracle() {
    let c = hadamard_like();
    for init in [InitialCondition::balanced(0), InitialCondition::up(0)] {
        let d = u_distribution(12, &c, init);
        let dense = dense_u_walk(12, &ideal_coin(&c), init.up, init.down);
        for (x, p) in (-12i64..=12).zip(&dense) {
            assert!((d.get(x) - p).abs() < 1e-12);
        }
    }
}

#[test]
fn shift_off_the_array_is_a_boundary_error() {
    let init = InitialCondition::up(0).state(4, 0).unwrap();
    let err = qdwalk::walk::ideal_walk_utilde(5, &hadamard_like(), &init).unwrap_err();
    assert!(matches!(err, Error::Boundary { .. }));
}

#[test]
fn ideal_operators_in_the_array_reproduce_the_utilde_walk() {
    let c = hadamard_like();
    let coin = ideal_coin(&c);
    let ops = StepOperators::ideal(&coin).unwrap();
    let n = 5;
    assert_eq!(walk_nodes(n), 8);
    for init in [InitialCondition::balanced(0), InitialCondition::up(0)] {
        let start = initial_state(n, &init).unwrap();
        let reference = ideal_states(WalkOperator::UTilde, n, &coin, &start).unwrap();
        let mut s = start;
        for expect in &reference[1..] {
            s = stirap_step(&s, &ops).unwrap();
            let (a, b) = (measure(&s), measure(expect));
            for (x, y) in a.probabilities.iter().zip(&b.probabilities) {
                assert!((x - y).abs() < 1e-12);
            }
            assert!(s.level_population(Level::Excited) < 1e-24);
            assert!(s.level_population(Level::Aux) < 1e-24);
        }
    }
}

#[test]
fn stirap_walk_agrees_with_ideal_reference() {
    let params = common::optimized_params();
    let ops = params.operators().unwrap();
    let n = 100;
    for (init, fixture) in [(InitialCondition::balanced(0), 0.003_86), (InitialCondition::up(0), 0.005_94)] {
        let start = initial_state(n, &init).unwrap();
        let (s, d) = run_walk_with(n, &ops, &start).unwrap();
        let ideal = ideal_walk_utilde(n, &hadamard_like(), &start).unwrap();
        let cmp = compare(&d, &ideal).unwrap();
        assert!(cmp.tvd < 0.02);
        assert!((cmp.tvd - fixture).abs() < 5e-5, "fixture moved: {}", cmp.tvd);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-9);
        assert!(d.meta.residual_excited < 1e-6 && d.meta.residual_aux < 1e-6);
    }
}

#[test]
fn stirap_walk_norm_holds_at_every_step() {
    let ops = common::optimized_params().operators().unwrap();
    let mut s = initial_state(100, &InitialCondition::balanced(0)).unwrap();
    for _ in 0..100 {
        s = stirap_step(&s, &ops).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig {
        failure_persistence: None,
        ..ProptestConfig::with_cases(64)
    })]

    #[test]
    fn utilde_is_u_relabelled(
        n in 0usize..=12, theta in 0.0f64..FRAC_PI_2, phi1 in 0.0f64..2.0 * PI, phi2 in 0.0f64..2.0 * PI,
        a in 0.0f64..1.0, rel in 0.0f64..2.0 * PI,
    ) {
        let c = CoinSpec::new(theta, phi1, phi2).unwrap();
        let init = InitialCondition {
            node: 0,
            up: Complex64::new(a.sqrt(), 0.0),
            down: Complex64::from_polar((1.0 - a).sqrt(), rel),
        };
        let dense = dense_u_walk(n, &ideal_coin(&c), init.up, init.down);
        let start = initial_state(n, &init).unwrap();
        let tilde = ideal_walk_utilde(n, &c, &start).unwrap();
        for j in 0..=n as i64 {
            let x = 2 * j - n as i64;
            prop_assert!((tilde.get(j) - dense[(x + n as i64) as usize]).abs() < 1e-12);
        }
    }

    #[test]
    fn ideal_walk_is_norm_preserving_for_any_coin(
        theta in 0.0f64..FRAC_PI_2, phi1 in 0.0f64..2.0 * PI, phi2 in 0.0f64..2.0 * PI, n in 1usize..40,
    ) {
        let c = CoinSpec::new(theta, phi1, phi2).unwrap();
        let start = initial_state(n, &InitialCondition::balanced(0)).unwrap();
        let d = ideal_walk_utilde(n, &c, &start).unwrap();
        prop_assert!((d.total() - 1.0).abs() < 1e-9);
    }
}
