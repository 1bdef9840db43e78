//! Classical systems: sub-stochastic vectors and matrices.

use nalgebra::{DMatrix, DVector};

pub fn unit(dim: usize) -> DVector<f64> {
    DVector::from_element(dim, 1.0)
}

pub fn state_in_cone(coords: &DVector<f64>, tol: f64) -> bool {
    coords.iter().all(|&x| x >= -tol) && coords.sum() <= 1.0 + tol
}

pub fn effect_valid(coords: &DVector<f64>, tol: f64) -> bool {
    coords.iter().all(|&x| x >= -tol && x <= 1.0 + tol)
}

/// A normalized state is pure iff it is a vertex of the simplex.
pub fn is_pure(coords: &DVector<f64>, tol: f64) -> bool {
    let ones = coords.iter().filter(|&&x| (x - 1.0).abs() <= tol).count();
    let zeros = coords.iter().filter(|&&x| x.abs() <= tol).count();
    ones == 1 && ones + zeros == coords.len()
}

/// Sub-stochasticity residual: the largest negative entry or excess column sum.
pub fn channel_residual(m: &DMatrix<f64>) -> f64 {
    let neg = m.iter().fold(0.0f64, |acc, &x| acc.max(-x));
    let excess = m
        .column_iter()
        .fold(0.0f64, |acc, c| acc.max(c.sum() - 1.0));
    neg.max(excess)
}

/// Facets `0 ≤ a_i ≤ 1` of the effect hypercube.
pub fn effect_facets(d: usize) -> Vec<(DVector<f64>, f64)> {
    let mut out = Vec::with_capacity(2 * d);
    for i in 0..d {
        let mut n = DVector::zeros(d);
        n[i] = -1.0;
        out.push((n, 0.0));
        let mut n = DVector::zeros(d);
        n[i] = 1.0;
        out.push((n, 1.0));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_examples() {
        assert!(state_in_cone(&DVector::from_vec(vec![0.6, 0.3]), 1e-9));
        assert!(!state_in_cone(&DVector::from_vec(vec![0.6, 0.5]), 1e-9));
        assert!(!state_in_cone(&DVector::from_vec(vec![1.2, -0.2]), 1e-9));
        assert!(is_pure(&DVector::from_vec(vec![0.0, 1.0]), 1e-12));
        assert!(!is_pure(&DVector::from_vec(vec![0.5, 0.5]), 1e-12));
    }

    #[test]
    fn stochastic_matrix_has_zero_residual() {
        let m = DMatrix::from_row_slice(2, 2, &[0.9, 0.2, 0.1, 0.8]);
        assert!(channel_residual(&m) < 1e-15);
        let bad = DMatrix::from_row_slice(2, 2, &[0.9, 0.2, 0.3, 0.8]);
        assert!((channel_residual(&bad) - 0.2).abs() < 1e-12);
    }
}
