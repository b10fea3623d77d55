use super::{binomial, Analytic, BiJet, C};

/// Dense univariate polynomial, ascending coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct UniPoly {
    coeffs: Vec<C>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(C::default());
        }
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn monomial(k: usize, coeff: C) -> Self {
        let mut coeffs = vec![C::default(); k + 1];
        coeffs[k] = coeff;
        Self::new(coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.len() > 1 && self.coeffs.last() == Some(&C::default()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::new(vec![C::default()]);
        }
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::new(Vec::new());
        }
        let mut out = vec![C::default(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &Self, k: usize| p.coeffs.get(k).copied().unwrap_or_default();
        Self::new((0..n).map(|k| get(self, k) - get(other, k)).collect())
    }

    pub fn eval(&self, w: C) -> C {
        self.coeffs.iter().rev().fold(C::default(), |acc, c| acc * w + c)
    }

    /// Horner evaluation in any [`Analytic`] algebra.
    pub fn eval_generic<A: Analytic>(&self, w: &A) -> A {
        let mut acc = w.constant_like(C::default());
        for c in self.coeffs.iter().rev() {
            acc = (acc * w.clone()).add_scalar(*c);
        }
        acc
    }
}

/// Dense bivariate polynomial `Σ a_ij ζ1^i ζ2^j`.
#[derive(Debug, Clone)]
pub struct BiPoly {
    // coeffs[i][j], rectangular
    coeffs: Vec<Vec<C>>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self {
            coeffs: vec![vec![C::default()]],
        }
    }

    pub fn constant(c: C) -> Self {
        Self {
            coeffs: vec![vec![c]],
        }
    }

    pub fn monomial(i: usize, j: usize, coeff: C) -> Self {
        let mut p = Self {
            coeffs: vec![vec![C::default(); j + 1]; i + 1],
        };
        p.coeffs[i][j] = coeff;
        p
    }

    /// `ζ1 - ζ2`.
    pub fn difference() -> Self {
        Self::monomial(1, 0, C::new(1.0, 0.0)) - Self::monomial(0, 1, C::new(1.0, 0.0))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (usize, usize, C)>) -> Self {
        terms
            .into_iter()
            .fold(Self::zero(), |acc, (i, j, c)| acc + Self::monomial(i, j, c))
    }

    pub fn coeff(&self, i: usize, j: usize) -> C {
        self.coeffs
            .get(i)
            .and_then(|row| row.get(j))
            .copied()
            .unwrap_or_default()
    }

    /// Nonzero terms `(i, j, a_ij)` in lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, C)> + '_ {
        self.coeffs.iter().enumerate().flat_map(|(i, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, c)| **c != C::default())
                .map(move |(j, c)| (i, j, *c))
        })
    }

    pub fn total_degree(&self) -> usize {
        self.terms().map(|(i, j, _)| i + j).max().unwrap_or(0)
    }

    fn dims(&self) -> (usize, usize) {
        (self.coeffs.len(), self.coeffs[0].len())
    }

    fn resized(&self, rows: usize, cols: usize) -> Self {
        let mut coeffs = vec![vec![C::default(); cols]; rows];
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                coeffs[i][j] = *c;
            }
        }
        Self { coeffs }
    }

    pub fn eval(&self, z1: C, z2: C) -> C {
        self.coeffs.iter().rev().fold(C::default(), |acc, row| {
            acc * z1 + row.iter().rev().fold(C::default(), |a, c| a * z2 + c)
        })
    }

    /// Nested Horner evaluation in any [`Analytic`] algebra.
    pub fn eval_generic<A: Analytic>(&self, x: &A, y: &A) -> A {
        let zero = x.constant_like(C::default());
        let mut acc = zero.clone();
        for row in self.coeffs.iter().rev() {
            let mut inner = zero.clone();
            for c in row.iter().rev() {
                inner = (inner * y.clone()).add_scalar(*c);
            }
            acc = acc * x.clone() + inner;
        }
        acc
    }

    pub fn scale(&self, factor: C) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|row| row.iter().map(|c| c * factor).collect())
                .collect(),
        }
    }

    pub fn d1(&self) -> Self {
        let (rows, cols) = self.dims();
        if rows == 1 {
            return Self::zero();
        }
        Self {
            coeffs: (1..rows)
                .map(|i| (0..cols).map(|j| self.coeffs[i][j] * i as f64).collect())
                .collect(),
        }
    }

    pub fn d2(&self) -> Self {
        let (_, cols) = self.dims();
        if cols == 1 {
            return Self::zero();
        }
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|row| (1..cols).map(|j| row[j] * j as f64).collect())
                .collect(),
        }
    }

    /// `f(ζ2, ζ1)`.
    pub fn swap(&self) -> Self {
        Self::from_terms(self.terms().map(|(i, j, c)| (j, i, c)))
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::constant(C::new(1.0, 0.0)), |acc, _| acc * self.clone())
    }

    /// Exact Taylor coefficients about `center`, truncated at `order`.
    pub fn taylor_jet(&self, center: (C, C), order: usize) -> BiJet {
        let (c1, c2) = center;
        let mut jet = BiJet::zeros(center, order);
        for (a, b, coef) in self.terms() {
            for i in 0..=a.min(order) {
                for j in 0..=b.min(order - i) {
                    let term = coef
                        * binomial(a, i)
                        * binomial(b, j)
                        * c1.powi((a - i) as i32)
                        * c2.powi((b - j) as i32);
                    let cur = jet.coeff(i, j);
                    jet.set_coeff(i, j, cur + term);
                }
            }
        }
        jet
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms().map(|(_, _, c)| c.norm()).fold(0.0, f64::max)
    }
}

// Equality ignores zero padding of the dense table.
impl PartialEq for BiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms().eq(other.terms())
    }
}

impl std::ops::Add for BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: BiPoly) -> BiPoly {
        let (r1, c1) = self.dims();
        let (r2, c2) = rhs.dims();
        let mut out = self.resized(r1.max(r2), c1.max(c2));
        for (i, row) in rhs.coeffs.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                out.coeffs[i][j] += c;
            }
        }
        out
    }
}

impl std::ops::Sub for BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: BiPoly) -> BiPoly {
        self + rhs.scale(C::new(-1.0, 0.0))
    }
}

impl std::ops::Mul for BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: BiPoly) -> BiPoly {
        let (r1, c1) = self.dims();
        let (r2, c2) = rhs.dims();
        let mut out = Self {
            coeffs: vec![vec![C::default(); c1 + c2 - 1]; r1 + r2 - 1],
        };
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, a) in row.iter().enumerate() {
                if *a == C::default() {
                    continue;
                }
                for (p, row2) in rhs.coeffs.iter().enumerate() {
                    for (q, b) in row2.iter().enumerate() {
                        out.coeffs[i + p][j + q] += a * b;
                    }
                }
            }
        }
        out
    }
}
