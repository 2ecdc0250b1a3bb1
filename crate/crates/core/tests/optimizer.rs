use qdwalk::optimizer::{optimize_coin, optimize_translation, CoinFixed, SearchBox, TranslationFixed};
use qdwalk::stirap::{evolution_2ph, GridPolicy};

fn fast() -> GridPolicy {
    GridPolicy {
        dt_divisor: 40.0,
        ..GridPolicy::default()
    }
}

#[test]
fn coarse_translation_search_finds_a_transfer_point() {
    let fixed = TranslationFixed {
        grid: fast(),
        tol: 1e-7,
        ..TranslationFixed::default()
    };
    let b = SearchBox::new([0.5, 2.5], [2.0, 12.0], 12).unwrap();
    let opt = optimize_translation(&fixed, &b).unwrap();
    assert!(opt.converged && !opt.degenerate);
    assert!(opt.cost < 1e-6, "cost {}", opt.cost);
    let s = fixed.schedule(opt.e_star, opt.dt_star).unwrap();
    let u = evolution_2ph(&s, &fast()).unwrap().matrix;
    assert!(u[(2, 0)].norm_sqr() > 0.999);
    let surface = opt.surface.expect("scan surface");
    assert_eq!((surface.energies.len(), surface.delta_ts.len()), (12, 12));
    assert!(surface.best().unwrap().cost >= opt.cost);
}

#[test]
fn coarse_coin_search_reaches_a_unitary_block() {
    let fixed = CoinFixed {
        grid: fast(),
        tol: 1e-7,
        ..CoinFixed::default()
    };
    let b = SearchBox::new([0.5, 2.5], [2.0, 12.0], 8).unwrap();
    let opt = optimize_coin(&fixed, &b).unwrap();
    assert!(opt.converged);
    assert!(opt.cost < 1e-4, "cost {}", opt.cost);
    assert!(b.contains(opt.e_star, opt.dt_star));
}

#[test]
fn invalid_boxes_are_rejected() {
    assert!(SearchBox::new([2.0, 1.0], [2.0, 12.0], 10).is_err());
    assert!(SearchBox::new([0.5, 2.5], [2.0, 12.0], 1).is_err());
}
