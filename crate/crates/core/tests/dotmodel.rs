use std::collections::BTreeSet;

use proptest::prelude::*;
use qdwalk::dotmodel::{check_selective_coupling, EnergyLevel, EnergySpectrum};

fn spectrum(energies: &[f64], w: f64) -> EnergySpectrum {
    let levels = energies
        .iter()
        .enumerate()
        .map(|(i, &e)| EnergyLevel {
            label: format!("L{i}"),
            energy: e,
            dot: "node".into(),
        })
        .collect();
    EnergySpectrum::new(levels, w).unwrap()
}

/// Direct enumeration: every (laser, unordered pair) with one occupied end,
/// other than the laser's own pair, whose gap is within `w` of the laser.
fn oracle(energies: &[f64], intended: &[(usize, usize)], w: f64) -> BTreeSet<((usize, usize), (usize, usize))> {
    let occupied: BTreeSet<usize> = intended.iter().flat_map(|&(a, b)| [a, b]).collect();
    let mut out = BTreeSet::new();
    for &(a, b) in intended {
        let laser = (a.min(b), a.max(b));
        let omega = (energies[a] - energies[b]).abs();
        for i in 0..energies.len() {
            for j in i + 1..energies.len() {
                if (i, j) == laser || !(occupied.contains(&i) || occupied.contains(&j)) {
                    continue;
                }
                if ((energies[j] - energies[i]).abs() - omega).abs() <= w {
                    out.insert((laser, (i, j)));
                }
            }
        }
    }
    out
}

fn sorted_levels() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(1.0f64..40.0, 3..8).prop_map(|steps| {
        steps
            .iter()
            .scan(0.0, |acc, s| {
                *acc += s.round();
                Some(*acc)
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig {
        failure_persistence: None,
        ..ProptestConfig::with_cases(256)
    })]

    #[test]
    fn report_matches_direct_enumeration(levels in sorted_levels(), picks in prop::collection::vec((0usize..8, 0usize..8), 1..4), w in 0.1f64..5.0) {
        let n = levels.len();
        let intended: Vec<(usize, usize)> = picks.into_iter().map(|(a, b)| (a % n, b % n)).filter(|(a, b)| a != b).collect();
        let s = spectrum(&levels, w);
        let names: Vec<(String, String)> = intended.iter().map(|&(a, b)| (format!("L{a}"), format!("L{b}"))).collect();
        let r = check_selective_coupling(&s, &names).unwrap();
        let got: BTreeSet<_> = r.spurious.iter().map(|t| {
            let ix = |l: &str| l[1..].parse::<usize>().unwrap();
            ((ix(&t.laser.0), ix(&t.laser.1)), (ix(&t.lower), ix(&t.upper)))
        }).collect();
        prop_assert_eq!(got.len(), r.spurious.len());
        prop_assert_eq!(got, oracle(&levels, &intended, w));
        for t in &r.spurious {
            prop_assert!(t.detuning <= w);
        }
    }

    #[test]
    fn wider_lines_never_remove_conflicts(levels in sorted_levels(), w1 in 0.1f64..5.0, extra in 0.0f64..5.0) {
        let intended = vec![("L0".to_string(), "L2".to_string())];
        let narrow = check_selective_coupling(&spectrum(&levels, w1), &intended).unwrap();
        let wide = check_selective_coupling(&spectrum(&levels, w1 + extra), &intended).unwrap();
        prop_assert!(wide.spurious.len() >= narrow.spurious.len());
    }
}

#[test]
fn published_spectrum_and_its_counterexample() {
    let s = EnergySpectrum::published();
    assert!(check_selective_coupling(&s, &EnergySpectrum::published_transitions()).unwrap().passed());

    let mut bad = s.clone();
    let at = s.energy("down").unwrap() + (s.energy("e").unwrap() - s.energy("up").unwrap());
    bad.levels.insert(
        3,
        EnergyLevel {
            label: "e'".into(),
            energy: at,
            dot: "node".into(),
        },
    );
    let r = check_selective_coupling(&bad, &EnergySpectrum::published_transitions()).unwrap();
    assert_eq!(r.spurious.len(), 1);
    assert_eq!((r.spurious[0].lower.as_str(), r.spurious[0].upper.as_str()), ("down", "e'"));
}

#[test]
fn spectrum_round_trips_through_json() {
    let s = EnergySpectrum::published();
    let back: EnergySpectrum = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
    assert_eq!(back, s);
    assert!(serde_json::from_str::<EnergySpectrum>(r#"{"levels": [], "linewidth": 1, "extra": 0}"#).is_err());
}
