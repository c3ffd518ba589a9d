//! Dense statevector simulator for small registers.
//!
//! Exponential-cost reference semantics for the gate set of the tableau
//! engine plus arbitrary X rotations. Capped at 15 qubits.

use num_complex::Complex64;
use rand::Rng;

use qpsurf::tableau::PauliOperator;

pub const MAX_QUBITS: usize = 15;

#[derive(Clone, Debug)]
pub struct DenseState {
    n: usize,
    amps: Vec<Complex64>,
}

impl DenseState {
    /// `|0...0>` on `n <= 15` qubits.
    pub fn new_zero(n: usize) -> Self {
        assert!(n >= 1 && n <= MAX_QUBITS, "dense simulation capped at {MAX_QUBITS} qubits");
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Self { n, amps }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitude(&self, basis: usize) -> Complex64 {
        self.amps[basis]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn apply_single(&mut self, q: usize, m: [[Complex64; 2]; 2]) {
        assert!(q < self.n);
        let bit = 1usize << q;
        for v in 0..self.amps.len() {
            if v & bit == 0 {
                let a0 = self.amps[v];
                let a1 = self.amps[v | bit];
                self.amps[v] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[v | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    pub fn apply_h(&mut self, q: usize) {
        let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        self.apply_single(q, [[s, s], [s, -s]]);
    }

    pub fn apply_s(&mut self, q: usize) {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        self.apply_single(q, [[one, zero], [zero, i]]);
    }

    pub fn apply_x(&mut self, q: usize) {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        self.apply_single(q, [[zero, one], [one, zero]]);
    }

    pub fn apply_z(&mut self, q: usize) {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        self.apply_single(q, [[one, zero], [zero, -one]]);
    }

    /// `exp(i alpha X)` on qubit `q`.
    pub fn apply_rot_x(&mut self, q: usize, alpha: f64) {
        let c = Complex64::new(alpha.cos(), 0.0);
        let is = Complex64::new(0.0, alpha.sin());
        self.apply_single(q, [[c, is], [is, c]]);
    }

    /// `exp(-i pi/4 X)`, the square-root-of-X channel representative.
    pub fn apply_sqrt_x(&mut self, q: usize) {
        self.apply_rot_x(q, -std::f64::consts::FRAC_PI_4);
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) {
        assert!(control < self.n && target < self.n && control != target);
        let cb = 1usize << control;
        let tb = 1usize << target;
        for v in 0..self.amps.len() {
            if v & cb != 0 && v & tb == 0 {
                self.amps.swap(v, v | tb);
            }
        }
    }

    /// Projective Z measurement with Born-rule randomness; renormalizes.
    pub fn measure_z<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> i8 {
        assert!(q < self.n);
        let bit = 1usize << q;
        let p_one: f64 = self
            .amps
            .iter()
            .enumerate()
            .filter(|(v, _)| v & bit != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        let outcome_one = rng.gen::<f64>() < p_one;
        let keep = if outcome_one { bit } else { 0 };
        let p_kept = if outcome_one { p_one } else { 1.0 - p_one };
        let scale = Complex64::new(1.0 / p_kept.sqrt(), 0.0);
        for (v, amp) in self.amps.iter_mut().enumerate() {
            if v & bit == keep {
                *amp *= scale;
            } else {
                *amp = Complex64::new(0.0, 0.0);
            }
        }
        if outcome_one {
            -1
        } else {
            1
        }
    }

    /// `<psi|P|psi>`; the imaginary part of a Hermitian expectation is
    /// checked to vanish.
    pub fn expectation_pauli(&self, p: &PauliOperator) -> f64 {
        assert_eq!(p.num_qubits(), self.n, "operator size mismatch");
        let mut x_mask = 0usize;
        for q in 0..self.n {
            if p.x_bit(q) {
                x_mask |= 1 << q;
            }
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for v in 0..self.amps.len() {
            let mut coef = Complex64::new(if p.is_negative() { -1.0 } else { 1.0 }, 0.0);
            for q in 0..self.n {
                let vq = v >> q & 1 != 0;
                match (p.x_bit(q), p.z_bit(q)) {
                    (false, false) => {}
                    (true, false) => {}
                    (false, true) => {
                        if vq {
                            coef = -coef;
                        }
                    }
                    (true, true) => {
                        // Y: |0> -> i|1>, |1> -> -i|0>
                        coef *= Complex64::new(0.0, if vq { -1.0 } else { 1.0 });
                    }
                }
            }
            acc += self.amps[v ^ x_mask].conj() * coef * self.amps[v];
        }
        assert!(acc.im.abs() < 1e-10, "non-real Pauli expectation");
        acc.re
    }
}
