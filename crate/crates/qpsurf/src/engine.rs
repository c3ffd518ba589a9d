//! Quasi-probability Monte Carlo over sampled stabilizer circuits.
//!
//! Each sample draws one stabilizer-preserving channel per noise location,
//! runs the syndrome-extraction circuit on a tableau, decodes, applies the
//! recovery and reads off the infidelity `F = (1 - <Z_L>)/2` exactly from
//! the tableau. The signed, `R_tot`-scaled average of `λ·F` is an unbiased
//! estimate of the logical error rate.
//!
//! Reproducibility: every sample owns a counter-based random stream keyed
//! by `(seed, sample_index)`, and the per-sample statistics `2λF` are
//! accumulated as exact integers, so results are identical for any worker
//! count or scheduling order.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::code::{build_layout, CodeLayout, LayoutError};
use crate::decoder::{decode, SyndromeHistory};
use crate::quasiprob::{
    decompose, hoeffding, locations, ChannelTag, NoiseError, NoiseModel, NoiseParams,
    QuasiDecomposition,
};
use crate::tableau::{new_tableau, PauliOperator, StabilizerTableau};

#[derive(Debug, Error, PartialEq)]
pub enum EngineError {
    #[error(transparent)]
    Layout(#[from] LayoutError),
    #[error(transparent)]
    Noise(#[from] NoiseError),
    #[error("sample budget exceeds 2^63 - 1 (log10 R_tot^2 = {0:.3})")]
    InfeasibleBudget(f64),
    #[error("worker count must be at least 1")]
    NoWorkers,
}

/// Either a fixed sample count or a Hoeffding accuracy target.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum SampleTarget {
    Explicit(u64),
    Accuracy { epsilon: f64, delta: f64 },
}

/// Everything needed to reproduce one estimation run.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub model: NoiseModel,
    pub d: usize,
    pub noise: NoiseParams,
    pub sample_target: SampleTarget,
    pub seed: u64,
    pub workers: usize,
}

/// One signed Monte Carlo sample.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct SampleOutcome {
    /// Product of the sampled coefficient signs.
    pub lambda: i8,
    /// `0`, `1/2` or `1`.
    pub infidelity: f64,
    pub channel_draw_count: u64,
}

/// Accumulated estimate of the logical error rate.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Estimate {
    pub p_l_mean: f64,
    pub std_error: f64,
    pub n_samples: u64,
    ln_r_tot: f64,
    pub wall_time: f64,
}

impl Estimate {
    pub fn r_tot(&self) -> f64 {
        self.ln_r_tot.exp()
    }

    pub fn r_tot_log10(&self) -> f64 {
        self.ln_r_tot / std::f64::consts::LN_10
    }
}

/// Hoeffding sample count `ceil((2/ε²) R_tot² ln(2/δ))`, flagged infeasible
/// past `2^63 - 1`.
pub fn plan_samples(epsilon: f64, delta: f64, r_tot: f64) -> Result<u64, EngineError> {
    if !(epsilon > 0.0 && epsilon < 1.0 && delta > 0.0 && delta < 1.0) {
        return Err(NoiseError::AccuracyOutOfRange(epsilon, delta).into());
    }
    let ln_r_tot_squared = 2.0 * r_tot.ln();
    hoeffding(epsilon, delta, ln_r_tot_squared)
        .ok_or(EngineError::InfeasibleBudget(ln_r_tot_squared / std::f64::consts::LN_10))
}

fn stream_rng(seed_bytes: [u8; 32], sample_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::from_seed(seed_bytes);
    rng.set_stream(sample_index);
    rng
}

fn master_seed_bytes(seed: u64) -> [u8; 32] {
    ChaCha8Rng::seed_from_u64(seed).get_seed()
}

#[inline]
fn apply_channel(tableau: &mut StabilizerTableau, tag: ChannelTag, q: usize) {
    match tag {
        ChannelTag::Identity => {}
        ChannelTag::FlipX => tableau.apply_x(q),
        ChannelTag::SqrtX => tableau.apply_sqrt_x(q),
        ChannelTag::FlipXSqrtX => {
            tableau.apply_sqrt_x(q);
            tableau.apply_x(q);
        }
    }
}

/// Reusable per-worker scratch for running samples.
pub struct SampleRunner<'a> {
    layout: &'a CodeLayout,
    decomp: &'a QuasiDecomposition,
    rounds: usize,
    expected_draws: u64,
    seed_bytes: [u8; 32],
    tableau: StabilizerTableau,
    history: SyndromeHistory,
    logical_z: PauliOperator,
    check_paulis: Vec<PauliOperator>,
}

impl<'a> SampleRunner<'a> {
    pub fn new(
        model: NoiseModel,
        layout: &'a CodeLayout,
        decomp: &'a QuasiDecomposition,
        seed: u64,
    ) -> Self {
        let d = layout.distance();
        let rounds = match model {
            NoiseModel::CodeCapacity => 1,
            NoiseModel::Phenomenological => d,
        };
        let n = layout.num_data_qubits() + layout.num_z_checks();
        let check_paulis =
            (0..layout.num_z_checks()).map(|c| layout.check_pauli(c, n)).collect();
        Self {
            layout,
            decomp,
            rounds,
            expected_draws: locations(model, d),
            seed_bytes: master_seed_bytes(seed),
            tableau: new_tableau(n),
            history: SyndromeHistory::new(d, rounds),
            logical_z: layout.logical_z_pauli(n),
            check_paulis,
        }
    }

    /// Run one sample; a deterministic function of `(seed, sample_index)`.
    pub fn run(&mut self, sample_index: u64) -> SampleOutcome {
        let mut rng = stream_rng(self.seed_bytes, sample_index);
        self.tableau.reset();
        self.history.clear();

        let n_data = self.layout.num_data_qubits();
        let mut negative = false;
        let mut draws = 0u64;

        for round in 1..=self.rounds {
            for q in 0..n_data {
                let (tag, sign) = self.decomp.sample_channel(&mut rng);
                if sign < 0 {
                    negative = !negative;
                }
                apply_channel(&mut self.tableau, tag, q);
                draws += 1;
            }
            let noisy_readout = round < self.rounds;
            for c in 0..self.layout.num_z_checks() {
                let ancilla = n_data + c;
                // reset by measurement; outside round 1 the ancilla is
                // already in a Z eigenstate, so no randomness is consumed
                if self.tableau.measure_z(ancilla, &mut rng).value < 0 {
                    self.tableau.apply_x(ancilla);
                }
                for &q in &self.layout.z_checks()[c].support {
                    self.tableau.apply_cnot(q, ancilla);
                }
                if noisy_readout {
                    let (tag, sign) = self.decomp.sample_channel(&mut rng);
                    if sign < 0 {
                        negative = !negative;
                    }
                    apply_channel(&mut self.tableau, tag, ancilla);
                    draws += 1;
                }
                let outcome = self.tableau.measure_z(ancilla, &mut rng);
                self.history.set(round, c, outcome.value < 0);
            }
        }

        let recovery = decode(&self.history, self.layout);
        for &q in &recovery.flips {
            self.tableau.apply_x(q);
        }
        for (c, check) in self.check_paulis.iter().enumerate() {
            assert_eq!(
                self.tableau.expectation_pauli(check),
                1,
                "residual syndrome after recovery at check {c}"
            );
        }

        let expectation = self.tableau.expectation_pauli(&self.logical_z);
        let infidelity = (1 - expectation) as f64 / 2.0;
        debug_assert_eq!(draws, self.expected_draws);
        SampleOutcome {
            lambda: if negative { -1 } else { 1 },
            infidelity,
            channel_draw_count: draws,
        }
    }
}

/// Run a single sample of a configuration. Convenience wrapper over
/// [`SampleRunner`]; batch estimation reuses the runner instead.
pub fn run_sample(
    config: &RunConfig,
    layout: &CodeLayout,
    decomp: &QuasiDecomposition,
    sample_index: u64,
) -> SampleOutcome {
    SampleRunner::new(config.model, layout, decomp, config.seed).run(sample_index)
}

/// Estimate the logical error rate for a configuration.
///
/// Samples are partitioned over `workers` threads; the result is identical
/// for any worker count at a fixed seed. Infeasible accuracy targets are
/// rejected before any sampling starts.
pub fn estimate(config: &RunConfig) -> Result<Estimate, EngineError> {
    if config.workers == 0 {
        return Err(EngineError::NoWorkers);
    }
    let layout = build_layout(config.d)?;
    let decomp = decompose(&config.noise);
    let locs = locations(config.model, config.d);
    let ln_r_tot = locs as f64 * decomp.robustness().ln();

    let n_samples = match config.sample_target {
        SampleTarget::Explicit(n) => n,
        SampleTarget::Accuracy { epsilon, delta } => {
            if !(epsilon > 0.0 && epsilon < 1.0 && delta > 0.0 && delta < 1.0) {
                return Err(NoiseError::AccuracyOutOfRange(epsilon, delta).into());
            }
            hoeffding(epsilon, delta, 2.0 * ln_r_tot).ok_or(EngineError::InfeasibleBudget(
                2.0 * ln_r_tot / std::f64::consts::LN_10,
            ))?
        }
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .expect("worker pool");

    let start = Instant::now();
    // 2λF is an exact small integer, so summation order cannot matter.
    let (sum, sum_sq) = pool.install(|| {
        (0..n_samples as usize)
            .into_par_iter()
            .with_min_len(512)
            .fold(
                || (None::<SampleRunner>, 0i64, 0i64),
                |(runner, mut s, mut s2), idx| {
                    let mut runner = runner.unwrap_or_else(|| {
                        SampleRunner::new(config.model, &layout, &decomp, config.seed)
                    });
                    let out = runner.run(idx as u64);
                    let v = out.lambda as i64 * (2.0 * out.infidelity) as i64;
                    s += v;
                    s2 += v * v;
                    (Some(runner), s, s2)
                },
            )
            .map(|(_, s, s2)| (s, s2))
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
    });
    let wall_time = start.elapsed().as_secs_f64();

    let r_tot = ln_r_tot.exp();
    let n = n_samples as f64;
    let p_l_mean = if n_samples == 0 { 0.0 } else { r_tot * sum as f64 / (2.0 * n) };
    let std_error = if n_samples >= 2 {
        let mean = sum as f64 / (2.0 * n);
        let var = (sum_sq as f64 / 4.0 - n * mean * mean) / (n - 1.0);
        r_tot * (var.max(0.0) / n).sqrt()
    } else {
        0.0
    };

    Ok(Estimate { p_l_mean, std_error, n_samples, ln_r_tot, wall_time })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn config(
        model: NoiseModel,
        d: usize,
        p: f64,
        r: f64,
        n: u64,
        seed: u64,
        workers: usize,
    ) -> RunConfig {
        RunConfig {
            model,
            d,
            noise: NoiseParams::new(p, r).unwrap(),
            sample_target: SampleTarget::Explicit(n),
            seed,
            workers,
        }
    }

    #[test]
    fn noiseless_channel_never_fails() {
        for model in [NoiseModel::CodeCapacity, NoiseModel::Phenomenological] {
            let cfg = config(model, 3, 0.0, 1.0, 500, 21, 2);
            let est = estimate(&cfg).unwrap();
            assert_eq!(est.p_l_mean, 0.0);
            assert_eq!(est.std_error, 0.0);
        }
    }

    #[test]
    fn sample_outcome_invariants() {
        let layout = build_layout(3).unwrap();
        for (model, locs) in
            [(NoiseModel::CodeCapacity, 13), (NoiseModel::Phenomenological, 3 * 13 + 2 * 6)]
        {
            let noise = NoiseParams::new(0.05, 0.0).unwrap();
            let decomp = decompose(&noise);
            assert_eq!(locations(model, 3), locs);
            let mut runner = SampleRunner::new(model, &layout, &decomp, 5);
            for idx in 0..200 {
                let out = runner.run(idx);
                assert_eq!(out.channel_draw_count, locs);
                // R = 1 here, so no negative signs can be drawn
                assert_eq!(out.lambda, 1);
                assert!([0.0, 0.5, 1.0].contains(&out.infidelity));
            }
        }
    }

    #[test]
    fn signed_terms_bounded_when_coherent() {
        let layout = build_layout(3).unwrap();
        let noise = NoiseParams::new(0.08, 1.0).unwrap();
        let decomp = decompose(&noise);
        let mut runner = SampleRunner::new(NoiseModel::CodeCapacity, &layout, &decomp, 6);
        let mut saw_negative = false;
        for idx in 0..2000 {
            let out = runner.run(idx);
            let term = out.lambda as f64 * out.infidelity;
            assert!((-1.0..=1.0).contains(&term));
            saw_negative |= out.lambda < 0;
        }
        assert!(saw_negative);
    }

    #[test]
    fn deterministic_across_worker_counts() {
        for model in [NoiseModel::CodeCapacity, NoiseModel::Phenomenological] {
            let a = estimate(&config(model, 3, 0.07, 0.8, 4000, 99, 1)).unwrap();
            let b = estimate(&config(model, 3, 0.07, 0.8, 4000, 99, 8)).unwrap();
            assert_eq!(a.p_l_mean.to_bits(), b.p_l_mean.to_bits());
            assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
            assert_eq!(a.n_samples, b.n_samples);
        }
    }

    #[test]
    fn run_sample_matches_runner() {
        let cfg = config(NoiseModel::Phenomenological, 3, 0.04, 0.5, 10, 123, 1);
        let layout = build_layout(3).unwrap();
        let decomp = decompose(&cfg.noise);
        let mut runner = SampleRunner::new(cfg.model, &layout, &decomp, cfg.seed);
        for idx in [0u64, 3, 7] {
            assert_eq!(run_sample(&cfg, &layout, &decomp, idx), runner.run(idx));
        }
    }

    // At r = 0 the sampled circuit is a plain stochastic simulation; mirror
    // it classically with the identical random stream and compare samples.
    #[test]
    fn stochastic_limit_mirrors_classical_simulation() {
        let layout = build_layout(3).unwrap();
        let p = 0.06;
        let noise = NoiseParams::new(p, 0.0).unwrap();
        let decomp = decompose(&noise);
        let seed = 77;
        let mut runner = SampleRunner::new(NoiseModel::Phenomenological, &layout, &decomp, seed);
        let seed_bytes = master_seed_bytes(seed);
        let rounds = 3;

        for idx in 0..2000 {
            let out = runner.run(idx);
            assert_eq!(out.lambda, 1);

            let mut rng = stream_rng(seed_bytes, idx);
            let mut flips = vec![false; layout.num_data_qubits()];
            let mut history = SyndromeHistory::new(3, rounds);
            for round in 1..=rounds {
                for flip in flips.iter_mut() {
                    if rng.gen::<f64>() >= 1.0 - p {
                        *flip = !*flip;
                    }
                }
                for c in 0..layout.num_z_checks() {
                    let readout_flip = round < rounds && rng.gen::<f64>() >= 1.0 - p;
                    let parity = layout.z_checks()[c]
                        .support
                        .iter()
                        .filter(|&&q| flips[q])
                        .count()
                        % 2
                        == 1;
                    history.set(round, c, parity != readout_flip);
                }
            }
            let recovery = decode(&history, &layout);
            let mut residual = flips.clone();
            for &q in &recovery.flips {
                residual[q] = !residual[q];
            }
            let overlap = layout
                .logical_z_support()
                .iter()
                .filter(|&&q| residual[q])
                .count();
            let classical_f = if overlap % 2 == 1 { 1.0 } else { 0.0 };
            assert_eq!(out.infidelity, classical_f, "sample {idx}");
        }
    }

    #[test]
    fn std_error_matches_binomial_in_stochastic_limit() {
        let cfg = config(NoiseModel::Phenomenological, 5, 0.02, 0.0, 100_000, 31, 2);
        let est = estimate(&cfg).unwrap();
        let n = est.n_samples as f64;
        let p_hat = est.p_l_mean;
        let binomial = (p_hat * (1.0 - p_hat) / n).sqrt();
        assert!((est.std_error - binomial).abs() / binomial < 0.01);
    }

    #[test]
    fn std_error_scales_inverse_sqrt_n() {
        let mut scaled = Vec::new();
        for n in [1_000u64, 10_000, 100_000] {
            let cfg = config(NoiseModel::CodeCapacity, 3, 0.08, 0.0, n, 17, 2);
            let est = estimate(&cfg).unwrap();
            scaled.push(est.std_error * (n as f64).sqrt());
        }
        for pair in scaled.windows(2) {
            assert!((pair[0] / pair[1] - 1.0).abs() < 0.1, "{scaled:?}");
        }
    }

    #[test]
    fn plan_samples_arithmetic() {
        assert_eq!(plan_samples(0.01, 0.05, 1.0).unwrap(), 73_778);
        assert_eq!(plan_samples(0.1, 0.05, 1.0).unwrap(), 738);
        assert_eq!(plan_samples(0.01, 0.05, 10.0).unwrap(), 7_377_759);
        assert!(matches!(
            plan_samples(0.01, 0.05, 1e12),
            Err(EngineError::InfeasibleBudget(_))
        ));
        assert!(plan_samples(0.0, 0.05, 1.0).is_err());
    }

    #[test]
    fn infeasible_budget_reported_before_work() {
        let cfg = RunConfig {
            model: NoiseModel::Phenomenological,
            d: 13,
            noise: NoiseParams::new(0.05, 1.0).unwrap(),
            sample_target: SampleTarget::Accuracy { epsilon: 0.01, delta: 0.05 },
            seed: 1,
            workers: 2,
        };
        assert!(matches!(estimate(&cfg), Err(EngineError::InfeasibleBudget(_))));
    }

    #[test]
    fn zero_workers_rejected() {
        let mut cfg = config(NoiseModel::CodeCapacity, 3, 0.05, 0.0, 10, 1, 1);
        cfg.workers = 0;
        assert_eq!(estimate(&cfg), Err(EngineError::NoWorkers));
    }
}
