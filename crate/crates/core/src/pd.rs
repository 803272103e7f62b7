//! Closed forms for the prisoner's dilemma with gain `g` and loss `l`.
//!
//! With `p` the share of cooperators, the `c`-sample and `d`-sample
//! cooperation counts are independent Binomial(k, p) variables. Below
//! `g, l < 1/(k-1)` cooperation wins exactly when its sample saw strictly more
//! cooperation, giving `Win(k, p) = (1 - Tie(k, p)) / 2` and the field
//! `h_k(p) = Win(k, p) - p`.

use core::cmp::Ordering;
use core::f64::consts::PI;

use alloc::format;

use num_traits::{One, Zero};

use crate::error::{BepError, Result};
use crate::game::multiset::binomial;
use crate::quadrature::adaptive_simpson;
use crate::rational::{format_rational, int, ratio, Rational};

/// `C(k, j) p^j (1-p)^(k-j)`.
pub fn binom_pmf(k: usize, p: f64, j: usize) -> Result<f64> {
    if j > k {
        return Err(BepError::InvalidParameter(format!("j = {j} exceeds k = {k}")));
    }
    check_p(p)?;
    Ok(binomial(k, j) as f64 * libm::pow(p, j as f64) * libm::pow(1.0 - p, (k - j) as f64))
}

fn check_p(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(BepError::InvalidParameter(format!("p = {p} is not a probability")))
    }
}

/// Probability that two independent Binomial(k, p) counts coincide.
pub fn tie_prob(k: usize, p: f64) -> Result<f64> {
    check_p(p)?;
    (0..=k).map(|j| binom_pmf(k, p, j).map(|f| f * f)).sum()
}

/// [`tie_prob`] through the characteristic function of the count difference:
/// `(1/2pi) * integral over [-pi, pi] of (1 - 4p(1-p) sin^2(t/2))^k dt`.
pub fn tie_prob_cf(k: usize, p: f64) -> Result<f64> {
    check_p(p)?;
    let c = 4.0 * p * (1.0 - p);
    let phi = move |t: f64| {
        let s = libm::sin(t / 2.0);
        libm::pow(1.0 - c * s * s, k as f64)
    };
    // even integrand: twice the half-range integral
    Ok(adaptive_simpson(&phi, 0.0, PI, 1e-10) / PI)
}

pub fn win_prob(k: usize, p: f64) -> Result<f64> {
    Ok(0.5 * (1.0 - tie_prob(k, p)?))
}

/// `h_k(p) = Win(k, p) - p`.
pub fn h(k: usize, p: f64) -> Result<f64> {
    Ok(win_prob(k, p)? - p)
}

/// Bisection for a sign change of `f` on `[lo, hi]`, stopping once
/// `|f| < tol` or the bracket collapses.
pub fn bisect(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if (flo < 0.0) == (fhi < 0.0) {
        return Err(BepError::NoSignChange { lo, hi });
    }
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..300 {
        mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm.abs() < tol || mid <= lo || mid >= hi {
            break;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(mid)
}

/// The interior root of `h_k` for `k >= 2`.
pub fn solve_p_star(k: usize) -> Result<f64> {
    if k < 2 {
        return Err(BepError::InvalidParameter(format!("the interior root needs k >= 2, got {k}")));
    }
    bisect(&|p| h(k, p).unwrap_or(f64::NAN), 1e-6, 0.5, 1e-12)
}

/// A cell of the `(g, l)` quadrant with constant comparison outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct PdRegion {
    pub k: usize,
    /// `"baseline"` or a roman case numeral.
    pub region_id: &'static str,
    /// Stable rest point share of cooperators.
    pub stable_equilibrium: f64,
    case: u8,
}

const ROMAN: [&str; 11] = ["baseline", "I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X"];

impl PdRegion {
    /// `p' ` as a function of `p` in this region.
    pub fn rhs(&self, p: f64) -> f64 {
        let q = 1.0 - p;
        let pw = libm::pow;
        match (self.k, self.case) {
            (k, 0) => h(k, p).unwrap_or(f64::NAN),
            (2, 1) => q * q - pw(q, 4.0) - p,
            (2, 2) => p * p * (1.0 - p * p) - p,
            (2, 3) => p * p * q * q - p,
            (3, 1) => p * p * q * q * (3.0 - 2.0 * p) * (1.0 + 2.0 * p) + 3.0 * p * pw(q, 5.0) - p,
            (3, 2) => pw(p, 3.0) * q * q * (1.0 + 2.0 * p) + 3.0 * p * pw(q, 4.0) - p,
            (3, 3) => pw(q, 3.0) - pw(q, 6.0) - p,
            (3, 4) => pw(p, 3.0) * (1.0 - pw(p, 3.0)) + 3.0 * p * p * pw(q, 3.0) * (1.0 + 2.0 * p) - p,
            (3, 5) => pw(p, 3.0) * (1.0 - pw(p, 3.0)) + 3.0 * p * p * pw(q, 4.0) - p,
            (3, 6) => pw(p, 3.0) * q * q * (1.0 + 2.0 * p) + 3.0 * p * p * pw(q, 4.0) - p,
            (3, 7) => p * p * pw(q, 3.0) * (3.0 - 2.0 * p) - p,
            (3, 8) => pw(p, 3.0) * (1.0 - pw(p, 3.0)) - p,
            (3, 9) => pw(p, 3.0) * q * q * (1.0 + 2.0 * p) - p,
            (3, 10) => pw(p, 3.0) * pw(q, 3.0) - p,
            _ => unreachable!("regions are built by classify_region"),
        }
    }

    pub fn is_baseline(&self) -> bool {
        self.case == 0
    }
}

fn boundary(g: &Rational, l: &Rational, k: usize) -> BepError {
    BepError::RegionBoundary { g: format_rational(g), l: format_rational(l), k }
}

/// Locates `(g, l)` in the region catalog for `k = 2` or `k = 3`. Parameters
/// on a region boundary are rejected: there the outcome depends on how ties
/// between equal sample totals are broken.
pub fn classify_region(g: Rational, l: Rational, k: usize) -> Result<PdRegion> {
    if g <= Rational::zero() || l <= Rational::zero() {
        return Err(BepError::InvalidParameter("g and l must be positive".into()));
    }
    let one = Rational::one();
    let case = match k {
        2 => {
            if g == one || l == one {
                return Err(boundary(&g, &l, k));
            }
            match (g > one, l > one) {
                (false, false) => 0,
                (true, false) => 1,
                (false, true) => 2,
                (true, true) => 3,
            }
        }
        3 => {
            let half = ratio(1, 2);
            let two = int(2);
            if [half, two].iter().any(|b| *b == g || *b == l) || g + l == one {
                return Err(boundary(&g, &l, k));
            }
            let band = |x: Rational| if x < half { 0 } else if x < two { 1 } else { 2 };
            match (band(l), band(g)) {
                (0, 0) => 0,
                (0, 1) if g + l < one => 1,
                (0, 1) => 2,
                (0, _) => 3,
                (1, 0) if g + l < one => 4,
                (1, 0) => 5,
                (1, 1) => 6,
                (1, _) => 7,
                (_, 0) => 8,
                (_, 1) => 9,
                _ => 10,
            }
        }
        _ => {
            return Err(BepError::InvalidParameter(format!("the region catalog covers k = 2 and 3, got {k}")));
        }
    };
    let mut region = PdRegion { k, region_id: ROMAN[case as usize], stable_equilibrium: 0.0, case };
    let has_interior_root = case == 0 || matches!((k, case), (2, 1) | (3, 1) | (3, 2) | (3, 3));
    if has_interior_root {
        let r = region.clone();
        region.stable_equilibrium = bisect(&|p| r.rhs(p), 1e-6, 0.5, 1e-12)?;
    }
    Ok(region)
}

/// Sign of (total of a `c`-sample with `j` cooperations) minus (total of a
/// `d`-sample with `j_prime` cooperations), each over `k` trials.
pub fn pd_sample_comparison(g: Rational, l: Rational, k: usize, j: usize, j_prime: usize) -> Result<Ordering> {
    if j > k || j_prime > k {
        return Err(BepError::InvalidParameter(format!("cooperation counts ({j}, {j_prime}) exceed k = {k}")));
    }
    let c_total = int(j as i128) - int((k - j) as i128) * l;
    let d_total = int(j_prime as i128) * (Rational::one() + g);
    Ok(c_total.cmp(&d_total))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pmf_values() {
        assert!((binom_pmf(2, 0.5, 1).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(binom_pmf(4, 0.0, 0).unwrap(), 1.0);
        assert!((binom_pmf(3, 0.25, 2).unwrap() - 0.140625).abs() < 1e-15);
        assert!(binom_pmf(2, 0.5, 3).is_err());
        assert!(binom_pmf(2, 1.5, 1).is_err());
    }

    #[test]
    fn tie_values() {
        assert!((tie_prob(2, 0.5).unwrap() - 0.375).abs() < 1e-15);
        assert_eq!(tie_prob(5, 0.0).unwrap(), 1.0);
        assert!((tie_prob_cf(2, 0.5).unwrap() - 0.375).abs() < 1e-8);
    }

    #[test]
    fn h_values() {
        assert!((h(1, 0.3).unwrap() + 0.09).abs() < 1e-15);
        let v = h(2, 0.28).unwrap();
        assert!(v > 0.0 && (v - 0.00127).abs() < 5e-4, "{v}");
        for k in 2..=8 {
            assert!(h(k, 0.5).unwrap() < 0.0);
        }
    }

    #[test]
    fn roots_are_ordered() {
        let p2 = solve_p_star(2).unwrap();
        let p3 = solve_p_star(3).unwrap();
        let p4 = solve_p_star(4).unwrap();
        assert!(0.28 < p2 && p2 < p3 && p3 < p4 && p4 < 0.5);
        assert!(h(3, p3).unwrap().abs() < 1e-10);
        assert!(solve_p_star(1).is_err());
    }

    #[test]
    fn region_examples() {
        let r = classify_region(int(2), ratio(1, 2), 2).unwrap();
        assert_eq!(r.region_id, "I");
        assert!((r.stable_equilibrium - 0.245).abs() < 1e-3);
        let r = classify_region(ratio(9, 10), ratio(2, 5), 3).unwrap();
        assert_eq!(r.region_id, "II");
        assert!((r.stable_equilibrium - 0.250).abs() < 1e-3);
        let r = classify_region(int(3), int(3), 3).unwrap();
        assert_eq!(r.region_id, "X");
        assert_eq!(r.stable_equilibrium, 0.0);
        let p = 0.4;
        assert!((r.rhs(p) - (libm::pow(p * (1.0 - p), 3.0) - p)).abs() < 1e-15);
        let r = classify_region(ratio(2, 5), ratio(9, 10), 3).unwrap();
        assert_eq!(r.region_id, "V");
        let r = classify_region(ratio(1, 2), ratio(1, 2), 2).unwrap();
        assert_eq!(r.region_id, "baseline");
        assert!((r.stable_equilibrium - solve_p_star(2).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn boundaries_rejected() {
        assert!(matches!(classify_region(int(1), int(1), 2), Err(BepError::RegionBoundary { .. })));
        assert!(matches!(classify_region(ratio(3, 5), ratio(2, 5), 3), Err(BepError::RegionBoundary { .. })));
        assert!(matches!(classify_region(int(2), ratio(1, 4), 3), Err(BepError::RegionBoundary { .. })));
        assert!(classify_region(int(1), int(1), 4).is_err());
    }

    #[test]
    fn sample_comparisons() {
        let (g, l) = (ratio(1, 2), ratio(1, 2));
        assert_eq!(pd_sample_comparison(g, l, 2, 2, 1).unwrap(), Ordering::Greater);
        assert_eq!(pd_sample_comparison(g, l, 2, 1, 1).unwrap(), Ordering::Less);
        assert_eq!(pd_sample_comparison(g, int(1), 2, 1, 0).unwrap(), Ordering::Equal);
        assert!(pd_sample_comparison(g, l, 2, 3, 0).is_err());
    }
}
