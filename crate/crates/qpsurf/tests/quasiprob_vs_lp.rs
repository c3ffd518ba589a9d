//! The closed-form decomposition must be L1-optimal: compare against the
//! breakpoint-scan minimizer on random parameters and at pinned spots.

use qpsurf::quasiprob::{decompose, robustness, NoiseParams};
use qpsurf_oracle::min_l1;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

#[test]
fn closed_form_is_l1_minimal() {
    let mut rng = StdRng::seed_from_u64(808);
    for _ in 0..50 {
        let p = rng.gen_range(0.0..0.49);
        let r = rng.gen_range(0.0..=1.0);
        let params = NoiseParams::new(p, r).unwrap();
        let (min, _) = min_l1(&params);
        let fast = robustness(&params);
        assert!((fast - min).abs() < 1e-11, "p={p} r={r}: {fast} vs {min}");
        let decomp = decompose(&params);
        let l1: f64 = decomp.coeffs().iter().map(|c| c.abs()).sum();
        assert!((l1 - min).abs() < 1e-11);
    }
}

#[test]
fn pinned_robustness_values() {
    let spot = NoiseParams::new(0.05, 1.0).unwrap();
    let (min, _) = min_l1(&spot);
    assert!((robustness(&spot) - min).abs() < 1e-12);
    assert!((min - 1.2023009049186606).abs() < 1e-9);

    // the efficient point: p = 1%, r = 0.10 needs no oversampling at all
    let cheap = NoiseParams::new(0.01, 0.10).unwrap();
    assert_eq!(robustness(&cheap), 1.0);
    assert!((min_l1(&cheap).0 - 1.0).abs() < 1e-12);
}
