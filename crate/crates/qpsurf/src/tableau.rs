//! Stabilizer-state engine in the Aaronson–Gottesman tableau representation.
//!
//! A state on `n` qubits is tracked by `2n` Pauli rows: `n` destabilizers
//! followed by `n` stabilizers, each stored as bit-packed X/Z vectors plus a
//! sign. Destabilizer `i` anticommutes with stabilizer `i` and commutes with
//! every other row, which is what makes random-outcome measurements cheap.
//! All rows are Hermitian Pauli operators: the bit pair `(x, z) = (1, 1)`
//! denotes `Y`, and stored phases are restricted to `±1`.

use rand::Rng;

/// An `n`-qubit Pauli operator with a `±1` phase, bit-packed per qubit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PauliOperator {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    negative: bool,
}

#[inline]
fn words_for(n: usize) -> usize {
    (n + 63) / 64
}

impl PauliOperator {
    /// The identity operator with `+1` phase.
    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "qubit count must be positive");
        Self { n, x: vec![0; words_for(n)], z: vec![0; words_for(n)], negative: false }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn x_bit(&self, q: usize) -> bool {
        assert!(q < self.n, "qubit index {q} out of range");
        self.x[q >> 6] >> (q & 63) & 1 != 0
    }

    pub fn z_bit(&self, q: usize) -> bool {
        assert!(q < self.n, "qubit index {q} out of range");
        self.z[q >> 6] >> (q & 63) & 1 != 0
    }

    pub fn set_x(&mut self, q: usize, on: bool) {
        assert!(q < self.n, "qubit index {q} out of range");
        let (w, b) = (q >> 6, 1u64 << (q & 63));
        if on {
            self.x[w] |= b;
        } else {
            self.x[w] &= !b;
        }
    }

    pub fn set_z(&mut self, q: usize, on: bool) {
        assert!(q < self.n, "qubit index {q} out of range");
        let (w, b) = (q >> 6, 1u64 << (q & 63));
        if on {
            self.z[w] |= b;
        } else {
            self.z[w] &= !b;
        }
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn set_negative(&mut self, negative: bool) {
        self.negative = negative;
    }

    /// Number of qubits on which the operator acts nontrivially.
    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum()
    }

    /// True iff the symplectic inner product of the bit vectors is zero.
    pub fn commutes_with(&self, other: &PauliOperator) -> bool {
        assert_eq!(self.n, other.n, "qubit count mismatch");
        let mut acc = 0u64;
        for w in 0..self.x.len() {
            acc ^= (self.x[w] & other.z[w]) ^ (self.z[w] & other.x[w]);
        }
        acc.count_ones() % 2 == 0
    }
}

/// Outcome of a Z-basis measurement: the `±1` eigenvalue and whether it was
/// already determined by the state.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct MeasureOutcome {
    pub value: i8,
    pub deterministic: bool,
}

/// CHP-style tableau: `n` destabilizer rows, `n` stabilizer rows and one
/// scratch row used during deterministic measurements.
#[derive(Clone, Debug)]
pub struct StabilizerTableau {
    n: usize,
    words: usize,
    // Flat (2n + 1) x words arrays, row-major. Row 2n is scratch.
    x: Vec<u64>,
    z: Vec<u64>,
    sign: Vec<u8>,
}

// Equality is over the represented rows; the scratch row is workspace.
impl PartialEq for StabilizerTableau {
    fn eq(&self, other: &Self) -> bool {
        let rows = 2 * self.n * self.words;
        self.n == other.n
            && self.x[..rows] == other.x[..rows]
            && self.z[..rows] == other.z[..rows]
            && self.sign[..2 * self.n] == other.sign[..2 * self.n]
    }
}

impl Eq for StabilizerTableau {}

/// A fresh tableau for the all-zeros computational state `|0...0>`.
pub fn new_tableau(n: usize) -> StabilizerTableau {
    assert!(n >= 1, "qubit count must be positive");
    let words = words_for(n);
    let mut t = StabilizerTableau {
        n,
        words,
        x: vec![0; (2 * n + 1) * words],
        z: vec![0; (2 * n + 1) * words],
        sign: vec![0; 2 * n + 1],
    };
    t.reset();
    t
}

impl StabilizerTableau {
    pub fn num_qubits(&self) -> usize {
        self.n
    }

    /// Reinitialize to `|0...0>` without reallocating.
    pub fn reset(&mut self) {
        self.x.fill(0);
        self.z.fill(0);
        self.sign.fill(0);
        for i in 0..self.n {
            let (w, b) = (i >> 6, 1u64 << (i & 63));
            self.x[i * self.words + w] = b; // destabilizer i = X_i
            self.z[(i + self.n) * self.words + w] = b; // stabilizer i = Z_i
        }
    }

    #[inline]
    fn check_qubit(&self, q: usize) {
        assert!(q < self.n, "qubit index {q} out of range for {} qubits", self.n);
    }

    pub fn apply_h(&mut self, q: usize) {
        self.check_qubit(q);
        let (w, b) = (q >> 6, 1u64 << (q & 63));
        for row in 0..2 * self.n {
            let idx = row * self.words + w;
            let xb = self.x[idx] & b;
            let zb = self.z[idx] & b;
            if xb != 0 && zb != 0 {
                self.sign[row] ^= 1;
            }
            let t = xb ^ zb;
            self.x[idx] ^= t;
            self.z[idx] ^= t;
        }
    }

    pub fn apply_s(&mut self, q: usize) {
        self.check_qubit(q);
        let (w, b) = (q >> 6, 1u64 << (q & 63));
        for row in 0..2 * self.n {
            let idx = row * self.words + w;
            if self.x[idx] & self.z[idx] & b != 0 {
                self.sign[row] ^= 1;
            }
            self.z[idx] ^= self.x[idx] & b;
        }
    }

    pub fn apply_x(&mut self, q: usize) {
        self.check_qubit(q);
        let (w, b) = (q >> 6, 1u64 << (q & 63));
        for row in 0..2 * self.n {
            if self.z[row * self.words + w] & b != 0 {
                self.sign[row] ^= 1;
            }
        }
    }

    pub fn apply_z(&mut self, q: usize) {
        self.check_qubit(q);
        let (w, b) = (q >> 6, 1u64 << (q & 63));
        for row in 0..2 * self.n {
            if self.x[row * self.words + w] & b != 0 {
                self.sign[row] ^= 1;
            }
        }
    }

    /// Conjugation by `exp(-i pi/4 X)`: fixes X, sends Z to -Y and Y to Z.
    /// Channel-equivalent to the composite H·S·H.
    pub fn apply_sqrt_x(&mut self, q: usize) {
        self.check_qubit(q);
        let (w, b) = (q >> 6, 1u64 << (q & 63));
        for row in 0..2 * self.n {
            let idx = row * self.words + w;
            if !self.x[idx] & self.z[idx] & b != 0 {
                self.sign[row] ^= 1;
            }
            self.x[idx] ^= self.z[idx] & b;
        }
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) {
        self.check_qubit(control);
        self.check_qubit(target);
        assert_ne!(control, target, "cnot control and target must differ");
        let (wc, bc) = (control >> 6, 1u64 << (control & 63));
        let (wt, bt) = (target >> 6, 1u64 << (target & 63));
        for row in 0..2 * self.n {
            let base = row * self.words;
            let xc = self.x[base + wc] & bc != 0;
            let zc = self.z[base + wc] & bc != 0;
            let xt = self.x[base + wt] & bt != 0;
            let zt = self.z[base + wt] & bt != 0;
            if xc && zt && xt == zc {
                self.sign[row] ^= 1;
            }
            if xc {
                self.x[base + wt] ^= bt;
            }
            if zt {
                self.z[base + wc] ^= bc;
            }
        }
    }

    // Left-multiply row `src` into row `dst`, tracking the phase with the
    // usual two-bit accumulator. Valid products always land back on +/-1.
    fn rowsum(&mut self, dst: usize, src: usize) {
        let (db, sb) = (dst * self.words, src * self.words);
        let mut g: i32 = 0;
        for w in 0..self.words {
            let x1 = self.x[sb + w];
            let z1 = self.z[sb + w];
            let x2 = self.x[db + w];
            let z2 = self.z[db + w];
            let plus = (x1 & z1 & !x2 & z2) | (x1 & !z1 & x2 & z2) | (!x1 & z1 & x2 & !z2);
            let minus = (x1 & z1 & x2 & !z2) | (x1 & !z1 & !x2 & z2) | (!x1 & z1 & x2 & z2);
            g += plus.count_ones() as i32 - minus.count_ones() as i32;
            self.x[db + w] = x1 ^ x2;
            self.z[db + w] = z1 ^ z2;
        }
        let phase = (2 * self.sign[dst] as i32 + 2 * self.sign[src] as i32 + g).rem_euclid(4);
        debug_assert_eq!(phase % 2, 0, "row product produced an imaginary phase");
        self.sign[dst] = (phase / 2) as u8;
    }

    fn row_copy(&mut self, dst: usize, src: usize) {
        let (db, sb) = (dst * self.words, src * self.words);
        for w in 0..self.words {
            self.x[db + w] = self.x[sb + w];
            self.z[db + w] = self.z[sb + w];
        }
        self.sign[dst] = self.sign[src];
    }

    fn row_clear(&mut self, row: usize) {
        let base = row * self.words;
        self.x[base..base + self.words].fill(0);
        self.z[base..base + self.words].fill(0);
        self.sign[row] = 0;
    }

    #[inline]
    fn x_bit_of_row(&self, row: usize, q: usize) -> bool {
        self.x[row * self.words + (q >> 6)] & (1u64 << (q & 63)) != 0
    }

    /// Measure qubit `q` in the Z basis, updating the state in place.
    ///
    /// When some stabilizer anticommutes with `Z_q` the outcome is drawn
    /// uniformly from the randomness source; otherwise the determined
    /// eigenvalue is returned and the state is untouched.
    pub fn measure_z<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> MeasureOutcome {
        self.check_qubit(q);
        let mut pivot = usize::MAX;
        for row in self.n..2 * self.n {
            if self.x_bit_of_row(row, q) {
                pivot = row;
                break;
            }
        }
        if pivot != usize::MAX {
            // Random outcome: the old stabilizer row becomes the new
            // destabilizer; every other row carrying X_q is repaired with it.
            let dest = pivot - self.n;
            self.row_copy(dest, pivot);
            self.row_clear(pivot);
            self.z[pivot * self.words + (q >> 6)] |= 1u64 << (q & 63);
            let bit: bool = rng.gen();
            self.sign[pivot] = bit as u8;
            for row in 0..2 * self.n {
                if row != dest && row != pivot && self.x_bit_of_row(row, q) {
                    self.rowsum(row, dest);
                }
            }
            MeasureOutcome { value: if bit { -1 } else { 1 }, deterministic: false }
        } else {
            let scratch = 2 * self.n;
            self.row_clear(scratch);
            for i in 0..self.n {
                if self.x_bit_of_row(i, q) {
                    self.rowsum(scratch, i + self.n);
                }
            }
            let value = if self.sign[scratch] != 0 { -1 } else { 1 };
            MeasureOutcome { value, deterministic: true }
        }
    }

    /// Expectation value of a Pauli operator on the current state:
    /// `0` if `P` anticommutes with some stabilizer, otherwise the
    /// determined eigenvalue `±1`. The state is unchanged.
    pub fn expectation_pauli(&mut self, p: &PauliOperator) -> i8 {
        assert_eq!(p.num_qubits(), self.n, "operator size mismatch");
        for row in self.n..2 * self.n {
            if !self.row_commutes_with(row, p) {
                return 0;
            }
        }
        // P commutes with the whole group, so it equals +/- a product of
        // stabilizers; destabilizer overlaps select the factors.
        let scratch = 2 * self.n;
        self.row_clear(scratch);
        for i in 0..self.n {
            if !self.row_commutes_with(i, p) {
                self.rowsum(scratch, i + self.n);
            }
        }
        let base = scratch * self.words;
        for w in 0..p.x.len() {
            debug_assert_eq!(self.x[base + w], p.x[w]);
            debug_assert_eq!(self.z[base + w], p.z[w]);
        }
        if (self.sign[scratch] != 0) == p.negative {
            1
        } else {
            -1
        }
    }

    fn row_commutes_with(&self, row: usize, p: &PauliOperator) -> bool {
        let base = row * self.words;
        let mut acc = 0u64;
        for w in 0..p.x.len() {
            acc ^= (self.x[base + w] & p.z[w]) ^ (self.z[base + w] & p.x[w]);
        }
        acc.count_ones() % 2 == 0
    }

    /// Extract row `i` (destabilizers at `0..n`, stabilizers at `n..2n`).
    pub fn row_pauli(&self, row: usize) -> PauliOperator {
        assert!(row < 2 * self.n, "row index out of range");
        let base = row * self.words;
        PauliOperator {
            n: self.n,
            x: self.x[base..base + self.words].to_vec(),
            z: self.z[base..base + self.words].to_vec(),
            negative: self.sign[row] != 0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn pauli_z(n: usize, q: usize) -> PauliOperator {
        let mut p = PauliOperator::identity(n);
        p.set_z(q, true);
        p
    }

    #[test]
    fn fresh_state_is_all_zeros() {
        let mut t = new_tableau(1);
        assert_eq!(t.expectation_pauli(&pauli_z(1, 0)), 1);
        let mut rng = StdRng::seed_from_u64(1);
        let out = t.measure_z(0, &mut rng);
        assert_eq!(out, MeasureOutcome { value: 1, deterministic: true });
    }

    #[test]
    fn three_qubit_measurements_deterministic() {
        let mut t = new_tableau(3);
        let mut rng = StdRng::seed_from_u64(2);
        for q in 0..3 {
            let out = t.measure_z(q, &mut rng);
            assert_eq!(out.value, 1);
            assert!(out.deterministic);
        }
    }

    #[test]
    fn cnot_fixes_zero_state() {
        let mut t = new_tableau(2);
        t.apply_cnot(0, 1);
        let mut rng = StdRng::seed_from_u64(3);
        let out = t.measure_z(1, &mut rng);
        assert_eq!(out.value, 1);
        assert!(out.deterministic);
    }

    #[test]
    fn h_and_s_periods() {
        let mut t = new_tableau(3);
        t.apply_h(1);
        t.apply_cnot(1, 2);
        let snapshot = t.clone();
        t.apply_h(0);
        t.apply_h(0);
        assert_eq!(t, snapshot);
        for _ in 0..4 {
            t.apply_s(2);
        }
        assert_eq!(t, snapshot);
    }

    #[test]
    fn sqrt_x_matches_hsh_composite() {
        let mut rng = StdRng::seed_from_u64(4);
        for _ in 0..200 {
            let mut a = new_tableau(3);
            random_circuit(&mut a, &mut rng, 15);
            let mut b = a.clone();
            let q = rng.gen_range(0..3);
            a.apply_sqrt_x(q);
            b.apply_h(q);
            b.apply_s(q);
            b.apply_h(q);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn sqrt_x_on_zero_gives_minus_y() {
        let mut t = new_tableau(1);
        t.apply_sqrt_x(0);
        let mut y = PauliOperator::identity(1);
        y.set_x(0, true);
        y.set_z(0, true);
        assert_eq!(t.expectation_pauli(&y), -1);
    }

    #[test]
    fn sqrt_x_twice_equals_x() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..200 {
            let mut a = new_tableau(4);
            random_circuit(&mut a, &mut rng, 20);
            let mut b = a.clone();
            let q = rng.gen_range(0..4);
            a.apply_sqrt_x(q);
            a.apply_sqrt_x(q);
            b.apply_x(q);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn sqrt_x_measurement_is_unbiased() {
        let mut rng = StdRng::seed_from_u64(6);
        let trials = 100_000;
        let mut ones = 0u32;
        for _ in 0..trials {
            let mut t = new_tableau(1);
            t.apply_sqrt_x(0);
            if t.measure_z(0, &mut rng).value == -1 {
                ones += 1;
            }
        }
        // binomial 4 sigma around 1/2
        let sigma = (trials as f64 * 0.25).sqrt();
        assert!((ones as f64 - trials as f64 / 2.0).abs() < 4.0 * sigma);
    }

    #[test]
    fn plus_state_measurement_frequency() {
        let mut rng = StdRng::seed_from_u64(7);
        let trials = 100_000;
        let mut ones = 0u32;
        for _ in 0..trials {
            let mut t = new_tableau(1);
            t.apply_h(0);
            let out = t.measure_z(0, &mut rng);
            assert!(!out.deterministic);
            if out.value == -1 {
                ones += 1;
            }
        }
        let sigma = (trials as f64 * 0.25).sqrt();
        assert!((ones as f64 - trials as f64 / 2.0).abs() < 3.0 * sigma);
    }

    #[test]
    fn repeated_measurement_is_idempotent() {
        let mut rng = StdRng::seed_from_u64(8);
        for _ in 0..200 {
            let mut t = new_tableau(2);
            t.apply_h(0);
            t.apply_cnot(0, 1);
            let first = t.measure_z(0, &mut rng);
            let second = t.measure_z(0, &mut rng);
            assert_eq!(first.value, second.value);
            assert!(second.deterministic);
        }
    }

    #[test]
    fn simple_expectations() {
        let mut t = new_tableau(2);
        let mut zz = PauliOperator::identity(2);
        zz.set_z(0, true);
        zz.set_z(1, true);
        assert_eq!(t.expectation_pauli(&zz), 1);

        let mut h = new_tableau(1);
        h.apply_h(0);
        assert_eq!(h.expectation_pauli(&pauli_z(1, 0)), 0);
    }

    #[test]
    fn born_probabilities_for_known_states() {
        // states with Pr[-1] = 0, 1/2 and 1
        let mut rng = StdRng::seed_from_u64(9);
        let trials = 100_000;
        let cases: [(f64, fn(&mut StabilizerTableau)); 3] = [
            (0.0, |_| {}),
            (0.5, |t| t.apply_h(0)),
            (1.0, |t| t.apply_x(0)),
        ];
        for (p1, prep) in cases {
            let mut ones = 0u64;
            for _ in 0..trials {
                let mut t = new_tableau(1);
                prep(&mut t);
                if t.measure_z(0, &mut rng).value == -1 {
                    ones += 1;
                }
            }
            let mean = ones as f64 / trials as f64;
            let sigma = (p1 * (1.0 - p1) / trials as f64).sqrt().max(1e-9);
            assert!((mean - p1).abs() <= 4.0 * sigma, "p1={p1} mean={mean}");
        }
    }

    pub(crate) fn random_circuit<R: Rng>(t: &mut StabilizerTableau, rng: &mut R, gates: usize) {
        let n = t.num_qubits();
        for _ in 0..gates {
            match rng.gen_range(0..6) {
                0 => t.apply_h(rng.gen_range(0..n)),
                1 => t.apply_s(rng.gen_range(0..n)),
                2 => t.apply_x(rng.gen_range(0..n)),
                3 => t.apply_z(rng.gen_range(0..n)),
                4 => t.apply_sqrt_x(rng.gen_range(0..n)),
                _ => {
                    if n >= 2 {
                        let c = rng.gen_range(0..n);
                        let mut tq = rng.gen_range(0..n);
                        while tq == c {
                            tq = rng.gen_range(0..n);
                        }
                        t.apply_cnot(c, tq);
                    }
                }
            }
        }
    }

    #[test]
    fn commutation_structure_preserved() {
        let mut rng = StdRng::seed_from_u64(10);
        for _ in 0..100 {
            let mut t = new_tableau(4);
            random_circuit(&mut t, &mut rng, 40);
            for i in 0..4 {
                for j in 0..4 {
                    let d = t.row_pauli(i);
                    let s = t.row_pauli(4 + j);
                    assert_eq!(d.commutes_with(&s), i != j);
                    let s2 = t.row_pauli(4 + i);
                    assert!(s.commutes_with(&s2));
                }
            }
        }
    }

    #[test]
    fn pauli_weight_and_bits() {
        let mut p = PauliOperator::identity(70);
        p.set_x(65, true);
        p.set_z(65, true);
        p.set_z(3, true);
        assert_eq!(p.weight(), 2);
        assert!(p.x_bit(65) && p.z_bit(65) && p.z_bit(3));
        p.set_x(65, false);
        assert_eq!(p.weight(), 2);
        assert!(!p.x_bit(65));
    }

    #[test]
    #[should_panic(expected = "positive")]
    fn zero_qubits_rejected() {
        let _ = new_tableau(0);
    }

    #[test]
    #[should_panic(expected = "out of range")]
    fn gate_index_out_of_range() {
        let mut t = new_tableau(2);
        t.apply_h(2);
    }

    #[test]
    #[should_panic(expected = "must differ")]
    fn cnot_same_qubit_rejected() {
        let mut t = new_tableau(2);
        t.apply_cnot(1, 1);
    }

    #[test]
    #[should_panic(expected = "size mismatch")]
    fn expectation_size_mismatch_rejected() {
        let mut t = new_tableau(2);
        let p = PauliOperator::identity(3);
        t.expectation_pauli(&p);
    }
}
