//! Quasi-probability decomposition of the coherent noise channel.
//!
//! The single-qubit noise is a bit-flip mixture composed with an X-axis
//! over-rotation `exp(i r θ X)` where `θ = arcsin(√p)`. Its Pauli transfer
//! matrix is the identity on the (I, X) block and a damped rotation on the
//! (Y, Z) block, so it decomposes over the four stabilizer-preserving
//! channels `[I]`, `[X]`, `[exp(-i π/4 X)]` and `[X exp(-i π/4 X)]` with a
//! one-parameter family of coefficient solutions. The L1-minimal member of
//! that family is available in closed form and determines both the sampling
//! distribution and the channel robustness `R = Σ|c_k|`.

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum NoiseError {
    #[error("bit-flip probability must lie in [0, 0.5), got {0}")]
    ProbabilityOutOfRange(f64),
    #[error("noise coherence must lie in [0, 1], got {0}")]
    CoherenceOutOfRange(f64),
    #[error("accuracy parameters must lie in (0, 1), got epsilon={0}, delta={1}")]
    AccuracyOutOfRange(f64, f64),
    #[error("code distance must be an odd integer in 3..=13, got {0}")]
    InvalidDistance(usize),
}

/// Validated noise parameters `(p, r)` with the derived rotation scale
/// `theta = arcsin(sqrt(p))`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct NoiseParams {
    p: f64,
    r: f64,
    theta: f64,
}

impl NoiseParams {
    pub fn new(p: f64, r: f64) -> Result<Self, NoiseError> {
        if !(0.0..0.5).contains(&p) {
            return Err(NoiseError::ProbabilityOutOfRange(p));
        }
        if !(0.0..=1.0).contains(&r) {
            return Err(NoiseError::CoherenceOutOfRange(r));
        }
        Ok(Self { p, r, theta: p.sqrt().asin() })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Pauli-transfer components of the channel on the (Y, Z) block:
    /// `u = (1-2p) cos(2rθ)`, `v = (1-2p) sin(2rθ)`.
    pub fn transfer_components(&self) -> (f64, f64) {
        let alpha = 2.0 * self.r * self.theta;
        ((1.0 - 2.0 * self.p) * alpha.cos(), (1.0 - 2.0 * self.p) * alpha.sin())
    }
}

/// The four stabilizer-preserving channels used for the decomposition.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ChannelTag {
    Identity,
    FlipX,
    SqrtX,
    FlipXSqrtX,
}

pub const CHANNEL_TAGS: [ChannelTag; 4] =
    [ChannelTag::Identity, ChannelTag::FlipX, ChannelTag::SqrtX, ChannelTag::FlipXSqrtX];

impl ChannelTag {
    #[inline]
    pub fn index(self) -> usize {
        match self {
            ChannelTag::Identity => 0,
            ChannelTag::FlipX => 1,
            ChannelTag::SqrtX => 2,
            ChannelTag::FlipXSqrtX => 3,
        }
    }
}

/// Signed decomposition of the noise channel over the four channel tags,
/// together with the quantities needed for importance sampling.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiDecomposition {
    coeffs: [f64; 4],
    robustness: f64,
    probs: [f64; 4],
    signs: [i8; 4],
    cumulative: [f64; 4],
}

impl QuasiDecomposition {
    pub fn coeff(&self, tag: ChannelTag) -> f64 {
        self.coeffs[tag.index()]
    }

    pub fn coeffs(&self) -> [f64; 4] {
        self.coeffs
    }

    pub fn prob(&self, tag: ChannelTag) -> f64 {
        self.probs[tag.index()]
    }

    pub fn sign(&self, tag: ChannelTag) -> i8 {
        self.signs[tag.index()]
    }

    pub fn robustness(&self) -> f64 {
        self.robustness
    }

    /// Draw a channel tag with probability `|c_k| / R` and return it with the
    /// sign of its coefficient.
    #[inline]
    pub fn sample_channel<R: Rng + ?Sized>(&self, rng: &mut R) -> (ChannelTag, i8) {
        let u: f64 = rng.gen();
        for tag in CHANNEL_TAGS {
            if u < self.cumulative[tag.index()] {
                return (tag, self.signs[tag.index()]);
            }
        }
        let last = CHANNEL_TAGS[3];
        (last, self.signs[last.index()])
    }
}

/// L1-minimal decomposition of the noise channel at the given parameters.
///
/// With `u + v <= 1` every coefficient is nonnegative and the channel is a
/// plain probabilistic mixture (`R = 1`). Past that boundary the flip
/// coefficient would go negative, and the minimal-L1 solution instead pins
/// `c_X = 0` and lets the rotation pair carry a signed weight, giving
/// `R = u + v`.
pub fn decompose(params: &NoiseParams) -> QuasiDecomposition {
    let (u, v) = params.transfer_components();
    let (coeffs, robustness) = if u + v <= 1.0 {
        ([(1.0 + u - v) / 2.0, (1.0 - u - v) / 2.0, 0.0, v], 1.0)
    } else {
        ([u, 0.0, (1.0 - u - v) / 2.0, (1.0 - u + v) / 2.0], u + v)
    };
    let probs = [
        coeffs[0].abs() / robustness,
        coeffs[1].abs() / robustness,
        coeffs[2].abs() / robustness,
        coeffs[3].abs() / robustness,
    ];
    let signs = [
        if coeffs[0] < 0.0 { -1 } else { 1 },
        if coeffs[1] < 0.0 { -1 } else { 1 },
        if coeffs[2] < 0.0 { -1 } else { 1 },
        if coeffs[3] < 0.0 { -1 } else { 1 },
    ];
    let mut cumulative = [0.0; 4];
    let mut acc = 0.0;
    for k in 0..4 {
        acc += probs[k];
        cumulative[k] = acc;
    }
    QuasiDecomposition { coeffs, robustness, probs, signs, cumulative }
}

/// Channel robustness `R(r, p) = max(1, u + v)`.
pub fn robustness(params: &NoiseParams) -> f64 {
    let (u, v) = params.transfer_components();
    1.0f64.max(u + v)
}

type Mat2 = [[Complex64; 2]; 2];

fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for (k, bk) in b.iter().enumerate() {
                out[i][j] += a[i][k] * bk[j];
            }
        }
    }
    out
}

fn mat_dagger(a: &Mat2) -> Mat2 {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

fn paulis() -> [Mat2; 4] {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    [
        [[one, zero], [zero, one]],
        [[zero, one], [one, zero]],
        [[zero, -i], [i, zero]],
        [[one, zero], [zero, -one]],
    ]
}

/// `exp(i alpha X)` as a 2x2 matrix.
fn rot_x(alpha: f64) -> Mat2 {
    let c = Complex64::new(alpha.cos(), 0.0);
    let is = Complex64::new(0.0, alpha.sin());
    [[c, is], [is, c]]
}

fn ptm_from_kraus(kraus: &[Mat2]) -> [[f64; 4]; 4] {
    let basis = paulis();
    let mut out = [[0.0; 4]; 4];
    for (a, pa) in basis.iter().enumerate() {
        for (b, pb) in basis.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in kraus {
                let m = mat_mul(pa, &mat_mul(k, &mat_mul(pb, &mat_dagger(k))));
                acc += m[0][0] + m[1][1];
            }
            debug_assert!(acc.im.abs() < 1e-12);
            out[a][b] = 0.5 * acc.re;
        }
    }
    out
}

/// Pauli transfer matrix of one of the decomposition channels, in the
/// (I, X, Y, Z) basis.
pub fn ptm_channel(tag: ChannelTag) -> [[f64; 4]; 4] {
    let x = paulis()[1];
    let v = rot_x(-std::f64::consts::FRAC_PI_4);
    match tag {
        ChannelTag::Identity => ptm_from_kraus(&[paulis()[0]]),
        ChannelTag::FlipX => ptm_from_kraus(&[x]),
        ChannelTag::SqrtX => ptm_from_kraus(&[v]),
        ChannelTag::FlipXSqrtX => ptm_from_kraus(&[mat_mul(&x, &v)]),
    }
}

/// Pauli transfer matrix of the full noise channel at `params`.
pub fn ptm_noise(params: &NoiseParams) -> [[f64; 4]; 4] {
    let rot = rot_x(params.r() * params.theta());
    let x = paulis()[1];
    let k0 = scale(&rot, (1.0 - params.p()).sqrt());
    let k1 = scale(&mat_mul(&x, &rot), params.p().sqrt());
    ptm_from_kraus(&[k0, k1])
}

fn scale(a: &Mat2, s: f64) -> Mat2 {
    let s = Complex64::new(s, 0.0);
    [[a[0][0] * s, a[0][1] * s], [a[1][0] * s, a[1][1] * s]]
}

/// Which noise model a run simulates.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum NoiseModel {
    /// One noise layer on the data qubits, then a single perfect
    /// syndrome-extraction round.
    CodeCapacity,
    /// `d` rounds of data noise with noisy ancilla readout in all but the
    /// final round.
    Phenomenological,
}

/// Number of noisy channel applications in one run.
pub fn locations(model: NoiseModel, d: usize) -> u64 {
    let d = d as u64;
    match model {
        NoiseModel::CodeCapacity => d * d + (d - 1) * (d - 1),
        NoiseModel::Phenomenological => d * (3 * d * d - 4 * d + 2),
    }
}

/// Sampling-cost summary for a configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct CostEstimate {
    pub locations: u64,
    /// `R^(2 locations)`; overflows to infinity for large distances, in
    /// which case the log10 field is the usable value.
    pub r_tot_squared: f64,
    pub log10_r_tot_squared: f64,
    /// Hoeffding sample count for the requested accuracy; `None` when it
    /// exceeds `2^63 - 1`.
    pub samples_m: Option<u64>,
}

const MAX_SAMPLES: f64 = 9.223372036854776e18; // 2^63 - 1

pub(crate) fn hoeffding(epsilon: f64, delta: f64, ln_r_tot_squared: f64) -> Option<u64> {
    let base = 2.0 / (epsilon * epsilon) * (2.0 / delta).ln();
    if base.ln() + ln_r_tot_squared > MAX_SAMPLES.ln() {
        return None;
    }
    let m = (base * ln_r_tot_squared.exp()).ceil();
    if m > MAX_SAMPLES {
        None
    } else {
        Some(m as u64)
    }
}

/// Sample-count planning for a model/distance/noise configuration, done in
/// log space so the overhead of large distances is still reportable.
pub fn cost(
    model: NoiseModel,
    d: usize,
    params: &NoiseParams,
    epsilon: f64,
    delta: f64,
) -> Result<CostEstimate, NoiseError> {
    if d < 3 || d > 13 || d % 2 == 0 {
        return Err(NoiseError::InvalidDistance(d));
    }
    if !(epsilon > 0.0 && epsilon < 1.0 && delta > 0.0 && delta < 1.0) {
        return Err(NoiseError::AccuracyOutOfRange(epsilon, delta));
    }
    let locations = locations(model, d);
    let ln_r = robustness(params).ln();
    let ln_r_tot_squared = 2.0 * locations as f64 * ln_r;
    Ok(CostEstimate {
        locations,
        r_tot_squared: ln_r_tot_squared.exp(),
        log10_r_tot_squared: ln_r_tot_squared / std::f64::consts::LN_10,
        samples_m: hoeffding(epsilon, delta, ln_r_tot_squared),
    })
}
