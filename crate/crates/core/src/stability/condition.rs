//! Recursive-removal conditions on nonnegative integer matrices.

use alloc::vec::Vec;

use crate::linalg::spectral_radius;

/// Which zero lines may be removed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Removal {
    /// An index whose row is zero: nothing in the current set supports it.
    Rows,
    /// An index whose column is zero: it supports nothing in the current set.
    Columns,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// Indices in the order they were removed.
    Ordering(Vec<usize>),
    /// The indices left when no zero line remains; every member is
    /// supported by (or supports) another member.
    Stuck(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionResult {
    pub holds: bool,
    pub witness: Witness,
}

impl ConditionResult {
    /// The self-sustaining subset, if the condition fails.
    pub fn stuck_set(&self) -> Option<&[usize]> {
        match &self.witness {
            Witness::Stuck(s) => Some(s),
            Witness::Ordering(_) => None,
        }
    }
}

/// Repeatedly removes the lowest index whose row (or column) restricted to
/// the remaining indices is zero. The condition holds iff everything goes.
pub fn condition_check(matrix: &[Vec<u32>], removal: Removal) -> ConditionResult {
    let mut remaining: Vec<usize> = (0..matrix.len()).collect();
    let mut order = Vec::with_capacity(matrix.len());
    loop {
        let zero = remaining.iter().position(|&i| {
            remaining.iter().all(|&j| match removal {
                Removal::Rows => matrix[i][j] == 0,
                Removal::Columns => matrix[j][i] == 0,
            })
        });
        match zero {
            Some(pos) => order.push(remaining.remove(pos)),
            None => break,
        }
    }
    if remaining.is_empty() {
        ConditionResult { holds: true, witness: Witness::Ordering(order) }
    } else {
        ConditionResult { holds: false, witness: Witness::Stuck(remaining) }
    }
}

/// Numeric check of a support matrix: its spectral radius `rho` and the
/// largest real eigenvalue `multiplier * rho - 1` of the linearization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralCheck {
    pub spectral_radius: f64,
    pub jacobian_max_real: f64,
}

pub fn spectral_radius_with_multiplier(matrix: &[Vec<u32>], multiplier: usize) -> SpectralCheck {
    let rho = spectral_radius(matrix);
    SpectralCheck { spectral_radius: rho, jacobian_max_real: multiplier as f64 * rho - 1.0 }
}

/// [`spectral_radius_with_multiplier`] for the one-population dynamic of an
/// `n`-player game, where the multiplier is `k(n-1)`.
pub fn spectral_radius_cross_check(matrix: &[Vec<u32>], k: usize, n: usize) -> SpectralCheck {
    spectral_radius_with_multiplier(matrix, k * (n - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn small_examples() {
        let r = condition_check(&[vec![0]], Removal::Rows);
        assert_eq!(r, ConditionResult { holds: true, witness: Witness::Ordering(vec![0]) });
        let r = condition_check(&[vec![1]], Removal::Rows);
        assert_eq!(r, ConditionResult { holds: false, witness: Witness::Stuck(vec![0]) });
        let t = [vec![0, 1], vec![0, 0]];
        assert_eq!(condition_check(&t, Removal::Rows).witness, Witness::Ordering(vec![1, 0]));
        assert_eq!(condition_check(&t, Removal::Columns).witness, Witness::Ordering(vec![0, 1]));
    }

    #[test]
    fn stuck_set_is_the_cycle() {
        let t = [vec![0, 1, 0], vec![1, 0, 0], vec![1, 0, 0]];
        let rows = condition_check(&t, Removal::Rows);
        assert_eq!(rows.stuck_set(), Some(&[0, 1, 2][..]));
        let cols = condition_check(&t, Removal::Columns);
        assert_eq!(cols.stuck_set(), Some(&[0, 1][..]));
    }

    #[test]
    fn spectral_values() {
        let s = spectral_radius_cross_check(&[vec![1]], 2, 2);
        assert!((s.spectral_radius - 1.0).abs() < 1e-12);
        assert!((s.jacobian_max_real - 1.0).abs() < 1e-12);
        let s = spectral_radius_cross_check(&[vec![0, 1], vec![0, 0]], 3, 2);
        assert_eq!(s.spectral_radius, 0.0);
        assert_eq!(s.jacobian_max_real, -1.0);
    }
}
