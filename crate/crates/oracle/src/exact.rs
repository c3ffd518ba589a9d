//! Exact logical-error-rate references for the distance-3 code-capacity
//! model, plus a direct classical sampler for larger distances.

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use qpsurf::code::CodeLayout;
use qpsurf::decoder::{decode, SyndromeHistory};
use qpsurf::quasiprob::NoiseParams;

/// Lookup tables for exhaustive code-capacity evaluation: per-pattern
/// syndrome and post-decode failure indicator, with the recovery produced
/// by the production decoder.
pub struct CodeCapacityTables {
    pub n_data: usize,
    /// failure indicator per X-flip pattern (bit q of the index = flip on
    /// data qubit q)
    pub fail: Vec<bool>,
}

pub fn build_tables(layout: &CodeLayout) -> CodeCapacityTables {
    let n_data = layout.num_data_qubits();
    assert!(n_data <= 20, "exhaustive tables are exponential in the data-qubit count");
    let n_checks = layout.num_z_checks();

    let check_masks: Vec<u32> = layout
        .z_checks()
        .iter()
        .map(|c| c.support.iter().fold(0u32, |m, &q| m | (1 << q)))
        .collect();
    let logical_mask: u32 =
        layout.logical_z_support().iter().fold(0, |m, &q| m | (1 << q));

    // recovery mask per syndrome, via the production decoder
    let mut recovery = vec![0u32; 1 << n_checks];
    for b in 0..(1usize << n_checks) {
        let mut history = SyndromeHistory::new(layout.distance(), 1);
        for c in 0..n_checks {
            history.set(1, c, b >> c & 1 != 0);
        }
        let rec = decode(&history, layout);
        recovery[b] = rec.flips.iter().fold(0u32, |m, &q| m | (1 << q));
    }

    let fail = (0..(1usize << n_data))
        .map(|v| {
            let v = v as u32;
            let syndrome = check_masks
                .iter()
                .enumerate()
                .fold(0usize, |s, (c, &m)| s | ((((v & m).count_ones() & 1) as usize) << c));
            let residual = v ^ recovery[syndrome];
            (residual & logical_mask).count_ones() % 2 == 1
        })
        .collect();

    CodeCapacityTables { n_data, fail }
}

/// Exact logical error rate under independent bit flips of probability `p`,
/// summed over all `2^n` flip patterns.
pub fn classical_exhaustive_pl(tables: &CodeCapacityTables, p: f64) -> f64 {
    let n = tables.n_data;
    let mut total = 0.0;
    for (v, &fail) in tables.fail.iter().enumerate() {
        if fail {
            let w = (v as u32).count_ones() as i32;
            total += p.powi(w) * (1.0 - p).powi(n as i32 - w);
        }
    }
    total
}

/// Exact logical error rate under the coherent noise channel, by enumerating
/// every per-qubit Kraus branch (`sqrt(1-p)·exp(irθX)` or
/// `sqrt(p)·X·exp(irθX)`) as a dense product state and every syndrome sector
/// within each branch. Distance 3 only.
pub fn exact_code_capacity_pl(layout: &CodeLayout, params: &NoiseParams) -> f64 {
    assert_eq!(layout.distance(), 3, "Kraus enumeration is implemented for d = 3 only");
    let tables = build_tables(layout);
    let n = tables.n_data;

    let alpha = params.r() * params.theta();
    let (c, s) = (alpha.cos(), alpha.sin());
    // single–qubit branch amplitudes for input |0>
    let keep = [
        Complex64::new((1.0 - params.p()).sqrt() * c, 0.0),
        Complex64::new(0.0, (1.0 - params.p()).sqrt() * s),
    ];
    let flip = [
        Complex64::new(0.0, params.p().sqrt() * s),
        Complex64::new(params.p().sqrt() * c, 0.0),
    ];

    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    let mut p_l = 0.0;
    for branch in 0..(1usize << n) {
        amps[0] = Complex64::new(1.0, 0.0);
        for q in 0..n {
            let a = if branch >> q & 1 == 0 { &keep } else { &flip };
            let half = 1usize << q;
            for i in (0..half).rev() {
                let base = amps[i];
                amps[i + half] = base * a[1];
                amps[i] = base * a[0];
            }
        }
        for (v, amp) in amps.iter().enumerate() {
            if tables.fail[v] {
                p_l += amp.norm_sqr();
            }
        }
    }
    p_l
}

/// Direct classical Monte Carlo of the bit-flip code-capacity model:
/// returns `(mean, std_error)`.
pub fn classical_mc_pl(layout: &CodeLayout, p: f64, n_samples: u64, seed: u64) -> (f64, f64) {
    let mut rng = StdRng::seed_from_u64(seed);
    let n_data = layout.num_data_qubits();
    let logical: Vec<usize> = layout.logical_z_support().to_vec();
    let mut failures = 0u64;
    let mut flips = Vec::new();
    for _ in 0..n_samples {
        flips.clear();
        for q in 0..n_data {
            if rng.gen_bool(p) {
                flips.push(q);
            }
        }
        let syndrome = layout.syndrome_of_x_pattern(&flips);
        let mut history = SyndromeHistory::new(layout.distance(), 1);
        for (c, &bit) in syndrome.iter().enumerate() {
            history.set(1, c, bit);
        }
        let recovery = decode(&history, layout);
        let mut overlap = 0usize;
        for &q in &logical {
            let flipped = flips.contains(&q) != recovery.flips.contains(&q);
            overlap += flipped as usize;
        }
        failures += (overlap % 2 == 1) as u64;
    }
    let mean = failures as f64 / n_samples as f64;
    let std_error = (mean * (1.0 - mean) / n_samples as f64).sqrt();
    (mean, std_error)
}
