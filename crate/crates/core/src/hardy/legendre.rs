//! Legendre polynomials `P_ℓ`, normalised by `P_ℓ(1) = 1`.

use crate::error::{Error, Result};
use crate::numerics::gauss::legendre_rule;
use crate::numerics::{binomial, Analytic, UniJet, C};

/// `P_ℓ(v)` by the three-term recurrence.
pub fn legendre(l: usize, v: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, v);
    if l == 0 {
        return p0;
    }
    for k in 1..l {
        let p2 = ((2 * k + 1) as f64 * v * p1 - k as f64 * p0) / (k + 1) as f64;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// The same recurrence over any [`Analytic`] argument, so jets give derivatives.
pub fn legendre_generic<A: Analytic>(l: usize, v: &A) -> A {
    let mut p0 = v.constant_like(C::new(1.0, 0.0));
    if l == 0 {
        return p0;
    }
    let mut p1 = v.clone();
    for k in 1..l {
        let p2 = (v.clone() * p1.clone()).scale(C::new((2 * k + 1) as f64, 0.0)) - p0.scale(C::new(k as f64, 0.0));
        p0 = p1;
        p1 = p2.scale(C::new(1.0 / (k + 1) as f64, 0.0));
    }
    p1
}

/// `2^{−ℓ} Σ_j C(ℓ,j)² (v−1)^{ℓ−j} (v+1)^j`.
pub fn legendre_rodrigues(l: usize, v: f64) -> f64 {
    let s: f64 = (0..=l)
        .map(|j| binomial(l, j).powi(2) * (v - 1.0).powi((l - j) as i32) * (v + 1.0).powi(j as i32))
        .sum();
    s / 2f64.powi(l as i32)
}

/// `∫_{−1}^{1} P_ℓ P_ℓ′ dv`, exact Gauss–Legendre.
pub fn legendre_norm(l: usize, lp: usize) -> f64 {
    let rule = legendre_rule((l + lp) / 2 + 1);
    rule.nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&v, &w)| w * legendre(l, v) * legendre(lp, v))
        .sum()
}

/// Largest `|(P̃ + ℓ(ℓ+1)) P_ℓ(v)|` with `P̃ = (1−v²)∂_v² − 2v∂_v`.
///
/// Derivatives come from second-order jets of the recurrence.
pub fn ptilde_check(l: usize, samples: &[f64]) -> f64 {
    let lambda = (l * (l + 1)) as f64;
    samples
        .iter()
        .map(|&v| {
            let jet = legendre_generic(l, &UniJet::variable(C::new(v, 0.0), 2));
            let (p, dp, d2p) = (jet.coeff(0), jet.coeff(1), jet.coeff(2) * 2.0);
            ((1.0 - v * v) * d2p - 2.0 * v * dp + lambda * p).norm()
        })
        .fold(0.0, f64::max)
}

/// Largest degree held by a [`LegendreTable`]; numerators stay within `i128`.
pub const LEGENDRE_TABLE_MAX: usize = 40;

/// Monomial coefficients of `P_0, …, P_L` as integers over `2^ℓ`:
/// `P_ℓ(v) = 2^{−ℓ} Σ_k (−1)^k C(ℓ,k) C(2ℓ−2k, ℓ) v^{ℓ−2k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LegendreTable {
    rows: Vec<Vec<i128>>,
}

fn binom_i128(n: usize, k: usize) -> Option<i128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as i128)? / (i + 1) as i128;
    }
    Some(acc)
}

impl LegendreTable {
    pub fn new(max_degree: usize) -> Result<Self> {
        if max_degree > LEGENDRE_TABLE_MAX {
            return Err(Error::Range(format!(
                "Legendre table limited to degree {LEGENDRE_TABLE_MAX}, got {max_degree}"
            )));
        }
        let rows = (0..=max_degree)
            .map(|l| {
                let mut row = vec![0i128; l + 1];
                for k in 0..=l / 2 {
                    let mag = binom_i128(l, k)
                        .zip(binom_i128(2 * l - 2 * k, l))
                        .and_then(|(a, b)| a.checked_mul(b))
                        .ok_or_else(|| Error::Range(format!("Legendre coefficient overflow at ℓ={l}")))?;
                    row[l - 2 * k] = if k % 2 == 0 { mag } else { -mag };
                }
                Ok(row)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { rows })
    }

    pub fn max_degree(&self) -> usize {
        self.rows.len() - 1
    }

    /// Integer numerators of `P_ℓ`, ascending powers; the denominator is `2^ℓ`.
    pub fn numerators(&self, l: usize) -> &[i128] {
        &self.rows[l]
    }

    pub fn coeffs(&self, l: usize) -> Vec<f64> {
        let denom = 2f64.powi(l as i32);
        self.rows[l].iter().map(|&n| n as f64 / denom).collect()
    }

    pub fn degree(&self, l: usize) -> usize {
        self.rows[l].iter().rposition(|&n| n != 0).unwrap_or(0)
    }

    /// `P_ℓ(1) = 1` checked in integers: the numerators sum to `2^ℓ`.
    pub fn normalised_at_one(&self, l: usize) -> bool {
        self.rows[l].iter().sum::<i128>() == 1i128 << l
    }

    pub fn eval(&self, l: usize, v: f64) -> f64 {
        self.coeffs(l).iter().rev().fold(0.0, |acc, c| acc * v + c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_degree_values() {
        assert_eq!(legendre(1, 0.37), 0.37);
        assert!((legendre(2, 0.5) + 0.125).abs() < 1e-16);
        for l in 0..=64 {
            assert!((legendre(l, 1.0) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn rodrigues_matches_recurrence() {
        for l in 0..=12 {
            for k in 0..=20 {
                let v = -1.0 + 0.1 * k as f64;
                assert!((legendre(l, v) - legendre_rodrigues(l, v)).abs() < 1e-12, "ℓ={l} v={v}");
            }
        }
    }

    #[test]
    fn norms() {
        assert!((legendre_norm(0, 0) - 2.0).abs() < 1e-15);
        assert!(legendre_norm(3, 5).abs() < 1e-14);
        assert!((legendre_norm(4, 4) - 2.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn ptilde_small_cases() {
        assert_eq!(ptilde_check(0, &[0.1, 0.5]), 0.0);
        assert_eq!(ptilde_check(1, &[-0.3, 0.9]), 0.0);
    }

    #[test]
    fn table_structure() {
        let table = LegendreTable::new(LEGENDRE_TABLE_MAX).unwrap();
        for l in 0..=LEGENDRE_TABLE_MAX {
            assert!(table.normalised_at_one(l), "ℓ={l}");
            assert_eq!(table.degree(l), l);
        }
        assert_eq!(table.numerators(2), &[-2, 0, 6]);
        assert!((table.eval(7, 0.3) - legendre(7, 0.3)).abs() < 1e-14);
        assert!(LegendreTable::new(LEGENDRE_TABLE_MAX + 1).is_err());
    }
}
