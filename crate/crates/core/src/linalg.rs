//! Small dense linear-algebra helpers.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

/// Largest real part among the eigenvalues of `m`; `-inf` for an empty matrix.
pub fn max_real_eigenvalue(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return f64::NEG_INFINITY;
    }
    m.complex_eigenvalues().iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max)
}

/// Spectral radius of a nonnegative integer matrix.
///
/// Nilpotency is decided exactly (then the radius is exactly 0). Otherwise the
/// matrix has a cycle, so its radius is at least 1, and the value returned is
/// a Collatz–Wielandt upper bound from power iteration on `M + I`, which never
/// underestimates the true radius.
pub fn spectral_radius(m: &[Vec<u32>]) -> f64 {
    let d = m.len();
    if d == 0 || is_nilpotent(m) {
        return 0.0;
    }
    let mut x = vec![1.0f64; d];
    let mut upper = f64::INFINITY;
    for _ in 0..20_000 {
        let y: Vec<f64> = (0..d)
            .map(|i| x[i] + m[i].iter().zip(&x).map(|(&a, &xj)| f64::from(a) * xj).sum::<f64>())
            .collect();
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        for i in 0..d {
            let r = y[i] / x[i];
            lo = lo.min(r);
            hi = hi.max(r);
        }
        upper = upper.min(hi);
        if upper - lo < 1e-13 * upper {
            break;
        }
        let scale = y.iter().copied().fold(0.0, f64::max);
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = (yi / scale).max(1e-200);
        }
    }
    upper - 1.0
}

/// `M^d 1 = 0`, checked in saturating integer arithmetic.
pub fn is_nilpotent(m: &[Vec<u32>]) -> bool {
    let d = m.len();
    let mut v = vec![1u128; d];
    for _ in 0..d {
        v = (0..d)
            .map(|i| {
                m[i].iter()
                    .zip(&v)
                    .fold(0u128, |acc, (&a, &vj)| acc.saturating_add(u128::from(a).saturating_mul(vj)))
            })
            .collect();
        if v.iter().all(|&e| e == 0) {
            return true;
        }
    }
    false
}
