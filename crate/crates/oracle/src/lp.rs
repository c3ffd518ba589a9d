//! Brute-force L1 minimizer for the channel decomposition.
//!
//! The four decomposition coefficients satisfy three linear constraints
//! read off the channel's Pauli transfer matrix, leaving a one-parameter
//! family. The objective `Σ|c_k|` is piecewise linear and convex in that
//! parameter, so scanning its breakpoints finds the global minimum.

use qpsurf::quasiprob::{ptm_noise, NoiseParams};

/// Minimal `Σ|c|` and the achieving coefficients, ordered
/// `[c_I, c_X, c_V, c_XV]`.
pub fn min_l1(params: &NoiseParams) -> (f64, [f64; 4]) {
    // transfer components from the numerically built PTM, not the closed
    // form under test: u = T[Z][Z], v = T[Y][Z]
    let t = ptm_noise(params);
    let u = t[3][3];
    let v = t[2][3];

    // family: c_V = t, c_XV = t + v, c_I = (1 - 2t - v + u)/2,
    //         c_X = (1 - 2t - v - u)/2
    let coeffs = |t: f64| [(1.0 - 2.0 * t - v + u) / 2.0, (1.0 - 2.0 * t - v - u) / 2.0, t, t + v];
    let objective = |t: f64| coeffs(t).iter().map(|c| c.abs()).sum::<f64>();

    let breakpoints = [0.0, -v, (1.0 + u - v) / 2.0, (1.0 - u - v) / 2.0];
    let mut best_t = breakpoints[0];
    let mut best = objective(best_t);
    for &t in &breakpoints[1..] {
        let val = objective(t);
        if val < best {
            best = val;
            best_t = t;
        }
    }
    (best, coeffs(best_t))
}
