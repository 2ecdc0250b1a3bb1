#![allow(dead_code)]

use num_complex::Complex64;
use qdwalk::optimizer::{CoinFixed, TranslationFixed};
use qdwalk::propagator::ComplexMatrix;
use qdwalk::walk::StirapParams;
use rand::Rng;

/// Translation optimum (transfer cost) from a 50×50 scan plus refinement.
pub const TRANSLATION_OPT: (f64, f64) = (1.371_217_706_330_519_8, 6.845_150_210_026_995);
/// Coin optimum (unitary-block cost, β_p = π/2) from the same procedure.
pub const COIN_OPT: (f64, f64) = (1.382_904_918_421_159_7, 7.533_671_788_453_144);

pub fn optimized_params() -> StirapParams {
    let t = TranslationFixed::default();
    let c = CoinFixed::default();
    StirapParams::new(
        t.schedule(TRANSLATION_OPT.0, TRANSLATION_OPT.1).unwrap(),
        c.schedule(COIN_OPT.0, COIN_OPT.1).unwrap(),
        t.grid,
    )
}

#[allow(clippy::needless_range_loop)]
pub fn random_hermitian<R: Rng>(rng: &mut R, dim: usize, scale: f64) -> ComplexMatrix {
    let mut rows = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
    for i in 0..dim {
        rows[i][i] = Complex64::new(scale * rng.random_range(-1.0..1.0), 0.0);
        for j in i + 1..dim {
            let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * scale;
            rows[i][j] = z;
            rows[j][i] = z.conj();
        }
    }
    ComplexMatrix::from_rows(&rows).unwrap()
}
