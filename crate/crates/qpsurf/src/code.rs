//! Planar surface-code geometry.
//!
//! Qubits live on a `(2d-1) x (2d-1)` grid: data qubits where `row + col` is
//! even, measurement qubits where it is odd. Only the Z-check sublattice
//! (odd row, even column) is materialized here; X errors on the data qubits
//! are the only fault type the simulation tracks. The logical Z operator runs
//! along row 0 and the logical X operator along column 0.

use thiserror::Error;

use crate::tableau::PauliOperator;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LayoutError {
    #[error("code distance must be an odd integer in 3..=13, got {0}")]
    InvalidDistance(usize),
}

/// A position on the `(2d-1) x (2d-1)` qubit grid.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct GridCoord {
    pub row: usize,
    pub col: usize,
}

impl GridCoord {
    pub fn is_data(&self) -> bool {
        (self.row + self.col) % 2 == 0
    }
}

/// One Z check: its grid position and the data-qubit indices it touches.
#[derive(Clone, Debug)]
pub struct ZCheck {
    pub coord: GridCoord,
    pub support: Vec<usize>,
}

/// Static geometry for one code distance, shared read-only by the circuit
/// engine and the decoder.
#[derive(Clone, Debug)]
pub struct CodeLayout {
    d: usize,
    data_qubits: Vec<GridCoord>,
    z_checks: Vec<ZCheck>,
    logical_z_support: Vec<usize>,
    logical_x_support: Vec<usize>,
    // check index -> (row_idx in 0..d-1, col_idx in 0..d), matching the
    // coarse grid the decoder works on
    check_grid_coords: Vec<(usize, usize)>,
    // (row, col) -> data index, usize::MAX on measurement sites
    data_index: Vec<usize>,
}

/// Build the layout for an odd distance `d` in `3..=13`.
pub fn build_layout(d: usize) -> Result<CodeLayout, LayoutError> {
    if d < 3 || d > 13 || d % 2 == 0 {
        return Err(LayoutError::InvalidDistance(d));
    }
    let side = 2 * d - 1;
    let mut data_qubits = Vec::new();
    let mut data_index = vec![usize::MAX; side * side];
    for row in 0..side {
        for col in 0..side {
            if (row + col) % 2 == 0 {
                data_index[row * side + col] = data_qubits.len();
                data_qubits.push(GridCoord { row, col });
            }
        }
    }

    let mut z_checks = Vec::new();
    let mut check_grid_coords = Vec::new();
    for row in (1..side).step_by(2) {
        for col in (0..side).step_by(2) {
            let mut support = Vec::with_capacity(4);
            let neighbors = [
                (row.wrapping_sub(1), col),
                (row + 1, col),
                (row, col.wrapping_sub(1)),
                (row, col + 1),
            ];
            for (r, c) in neighbors {
                if r < side && c < side {
                    support.push(data_index[r * side + c]);
                }
            }
            z_checks.push(ZCheck { coord: GridCoord { row, col }, support });
            check_grid_coords.push(((row - 1) / 2, col / 2));
        }
    }

    let logical_z_support: Vec<usize> =
        (0..side).step_by(2).map(|col| data_index[col]).collect();
    let logical_x_support: Vec<usize> =
        (0..side).step_by(2).map(|row| data_index[row * side]).collect();

    Ok(CodeLayout {
        d,
        data_qubits,
        z_checks,
        logical_z_support,
        logical_x_support,
        check_grid_coords,
        data_index,
    })
}

impl CodeLayout {
    pub fn distance(&self) -> usize {
        self.d
    }

    pub fn num_data_qubits(&self) -> usize {
        self.data_qubits.len()
    }

    pub fn num_z_checks(&self) -> usize {
        self.z_checks.len()
    }

    pub fn data_qubits(&self) -> &[GridCoord] {
        &self.data_qubits
    }

    pub fn z_checks(&self) -> &[ZCheck] {
        &self.z_checks
    }

    pub fn logical_z_support(&self) -> &[usize] {
        &self.logical_z_support
    }

    pub fn logical_x_support(&self) -> &[usize] {
        &self.logical_x_support
    }

    /// Coarse grid position of a check: rows `0..d-1`, columns `0..d`.
    pub fn check_grid_coord(&self, check: usize) -> (usize, usize) {
        self.check_grid_coords[check]
    }

    /// Syndrome of a set of X flips: bit `c` is set iff the flip pattern
    /// overlaps `support(c)` an odd number of times.
    pub fn syndrome_of_x_pattern(&self, flips: &[usize]) -> Vec<bool> {
        let mut flipped = vec![false; self.data_qubits.len()];
        for &q in flips {
            assert!(q < self.data_qubits.len(), "data qubit index {q} out of range");
            flipped[q] = !flipped[q];
        }
        self.z_checks
            .iter()
            .map(|check| check.support.iter().filter(|&&q| flipped[q]).count() % 2 == 1)
            .collect()
    }

    /// Minimum number of X flips connecting a check to the top or bottom
    /// boundary.
    pub fn boundary_distance(&self, check: usize) -> usize {
        let (row_idx, _) = self.check_grid_coords[check];
        (row_idx + 1).min((self.d - 1) - row_idx)
    }

    /// The logical Z operator as a Pauli on a register of `n` qubits whose
    /// first `num_data_qubits()` indices are the data qubits.
    pub fn logical_z_pauli(&self, n: usize) -> PauliOperator {
        assert!(n >= self.data_qubits.len());
        let mut p = PauliOperator::identity(n);
        for &q in &self.logical_z_support {
            p.set_z(q, true);
        }
        p
    }

    pub fn logical_x_pauli(&self, n: usize) -> PauliOperator {
        assert!(n >= self.data_qubits.len());
        let mut p = PauliOperator::identity(n);
        for &q in &self.logical_x_support {
            p.set_x(q, true);
        }
        p
    }

    /// Z-check `c` as a Pauli on a register of `n` qubits.
    pub fn check_pauli(&self, check: usize, n: usize) -> PauliOperator {
        assert!(n >= self.data_qubits.len());
        let mut p = PauliOperator::identity(n);
        for &q in &self.z_checks[check].support {
            p.set_z(q, true);
        }
        p
    }

    /// Index of the data qubit at a grid coordinate, if there is one.
    pub fn data_index_at(&self, row: usize, col: usize) -> Option<usize> {
        let side = 2 * self.d - 1;
        if row >= side || col >= side {
            return None;
        }
        match self.data_index[row * side + col] {
            usize::MAX => None,
            idx => Some(idx),
        }
    }
}
