use std::ops::{Add, Mul, Neg, Sub};

use super::{factorial, Analytic, C};

/// Truncated univariate Taylor expansion about `center`.
///
/// `coeffs[k]` holds `f^(k)(center) / k!`.
#[derive(Debug, Clone, PartialEq)]
pub struct UniJet {
    center: C,
    coeffs: Vec<C>,
}

impl UniJet {
    pub fn new(center: C, coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least the constant term");
        Self { center, coeffs }
    }

    pub fn constant(center: C, value: C, order: usize) -> Self {
        let mut coeffs = vec![C::default(); order + 1];
        coeffs[0] = value;
        Self { center, coeffs }
    }

    /// The identity function `w ↦ w` expanded about `center`.
    pub fn variable(center: C, order: usize) -> Self {
        let mut jet = Self::constant(center, center, order);
        if order >= 1 {
            jet.coeffs[1] = C::new(1.0, 0.0);
        }
        jet
    }

    pub fn center(&self) -> C {
        self.center
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    /// `f^(k)(center)`, or `None` past the truncation order.
    pub fn derivative(&self, k: usize) -> Option<C> {
        self.coeffs.get(k).map(|c| c * factorial(k))
    }

    /// Horner evaluation of the truncated series at `w`.
    pub fn eval(&self, w: C) -> C {
        let h = w - self.center;
        self.coeffs.iter().rev().fold(C::default(), |acc, c| acc * h + c)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| super::is_finite(*c))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C, C) -> C) -> Self {
        let n = self.order().min(other.order());
        let coeffs = (0..=n).map(|k| f(self.coeffs[k], other.coeffs[k])).collect();
        Self {
            center: self.center,
            coeffs,
        }
    }

    fn cauchy(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut coeffs = vec![C::default(); n + 1];
        for (i, a) in self.coeffs.iter().take(n + 1).enumerate() {
            for (j, b) in other.coeffs.iter().take(n + 1 - i).enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self {
            center: self.center,
            coeffs,
        }
    }
}

impl Add for UniJet {
    type Output = UniJet;
    fn add(self, rhs: UniJet) -> UniJet {
        self.zip_with(&rhs, |a, b| a + b)
    }
}

impl Sub for UniJet {
    type Output = UniJet;
    fn sub(self, rhs: UniJet) -> UniJet {
        self.zip_with(&rhs, |a, b| a - b)
    }
}

impl Mul for UniJet {
    type Output = UniJet;
    fn mul(self, rhs: UniJet) -> UniJet {
        self.cauchy(&rhs)
    }
}

impl Neg for UniJet {
    type Output = UniJet;
    fn neg(mut self) -> UniJet {
        self.coeffs.iter_mut().for_each(|c| *c = -*c);
        self
    }
}

impl Analytic for UniJet {
    fn constant_like(&self, value: C) -> Self {
        Self::constant(self.center, value, self.order())
    }

    fn scale(&self, factor: C) -> Self {
        Self {
            center: self.center,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    fn recip(&self) -> Self {
        let n = self.order();
        let inv0 = C::new(1.0, 0.0) / self.coeffs[0];
        let mut out = vec![C::default(); n + 1];
        out[0] = inv0;
        for k in 1..=n {
            let s: C = (1..=k).map(|p| self.coeffs[p] * out[k - p]).sum();
            out[k] = -s * inv0;
        }
        Self {
            center: self.center,
            coeffs: out,
        }
    }

    fn exp(&self) -> Self {
        // k e_k = sum_{p=1}^k p a_p e_{k-p}
        let n = self.order();
        let mut out = vec![C::default(); n + 1];
        out[0] = self.coeffs[0].exp();
        for k in 1..=n {
            let s: C = (1..=k)
                .map(|p| self.coeffs[p] * p as f64 * out[k - p])
                .sum();
            out[k] = s / k as f64;
        }
        Self {
            center: self.center,
            coeffs: out,
        }
    }
}
