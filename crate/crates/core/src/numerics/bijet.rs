use std::ops::{Add, Mul, Neg, Sub};

use super::{factorial, Analytic, C};
use crate::error::{Error, Result};

/// Truncated bivariate Taylor expansion of `f(ζ1, ζ2)` about `(c1, c2)`.
///
/// Coefficients are factorial-scaled, `c_ij = ∂^{i+j} f / ∂ζ1^i ∂ζ2^j / (i! j!)`,
/// and stored by total degree in a triangle covering `i + j <= order`.
/// Most jets in this crate are taken about a diagonal point `(z, z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiJet {
    center: (C, C),
    order: usize,
    coeffs: Vec<C>,
}

#[inline]
fn idx(i: usize, j: usize) -> usize {
    let k = i + j;
    k * (k + 1) / 2 + j
}

fn tri_len(order: usize) -> usize {
    (order + 1) * (order + 2) / 2
}

/// Binary operations accepted by [`bijet_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JetOp {
    Add,
    Sub,
    Mul,
}

impl BiJet {
    pub fn zeros(center: (C, C), order: usize) -> Self {
        Self {
            center,
            order,
            coeffs: vec![C::default(); tri_len(order)],
        }
    }

    pub fn constant(center: (C, C), value: C, order: usize) -> Self {
        let mut jet = Self::zeros(center, order);
        jet.coeffs[0] = value;
        jet
    }

    /// The coordinate function `ζ1` expanded about `center`.
    pub fn var1(center: (C, C), order: usize) -> Self {
        let mut jet = Self::constant(center, center.0, order);
        if order >= 1 {
            jet.coeffs[idx(1, 0)] = C::new(1.0, 0.0);
        }
        jet
    }

    /// The coordinate function `ζ2` expanded about `center`.
    pub fn var2(center: (C, C), order: usize) -> Self {
        let mut jet = Self::constant(center, center.1, order);
        if order >= 1 {
            jet.coeffs[idx(0, 1)] = C::new(1.0, 0.0);
        }
        jet
    }

    /// Builds a jet from a coefficient callback `(i, j) -> c_ij`.
    pub fn from_coeffs(center: (C, C), order: usize, mut coeff: impl FnMut(usize, usize) -> C) -> Self {
        let mut jet = Self::zeros(center, order);
        for k in 0..=order {
            for j in 0..=k {
                jet.coeffs[idx(k - j, j)] = coeff(k - j, j);
            }
        }
        jet
    }

    pub fn center(&self) -> (C, C) {
        self.center
    }

    pub fn is_diagonal(&self) -> bool {
        self.center.0 == self.center.1
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Factorial-scaled coefficient; zero past the truncation order.
    pub fn coeff(&self, i: usize, j: usize) -> C {
        if i + j > self.order {
            C::default()
        } else {
            self.coeffs[idx(i, j)]
        }
    }

    pub fn set_coeff(&mut self, i: usize, j: usize, value: C) {
        assert!(i + j <= self.order, "coefficient ({i}, {j}) beyond order {}", self.order);
        self.coeffs[idx(i, j)] = value;
    }

    /// `∂^{i+j} f / ∂ζ1^i ∂ζ2^j` at the center.
    pub fn partial(&self, i: usize, j: usize) -> Result<C> {
        if i + j > self.order {
            return Err(Error::Truncation {
                requested: i + j,
                available: self.order,
            });
        }
        Ok(self.coeffs[idx(i, j)] * factorial(i) * factorial(j))
    }

    /// Largest coefficient magnitude on the last stored diagonal, a heuristic
    /// bound for the truncation tail.
    pub fn tail_bound(&self) -> f64 {
        (0..=self.order)
            .map(|j| self.coeffs[idx(self.order - j, j)].norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| super::is_finite(*c))
    }

    /// Evaluates the truncated series at `(z1, z2)`.
    pub fn eval(&self, z1: C, z2: C) -> C {
        let (u, w) = (z1 - self.center.0, z2 - self.center.1);
        let mut acc = C::default();
        for k in 0..=self.order {
            for j in 0..=k {
                acc += self.coeffs[idx(k - j, j)] * u.powi((k - j) as i32) * w.powi(j as i32);
            }
        }
        acc
    }

    /// Re-truncates to a smaller order, or zero-pads to a larger one.
    pub fn with_order(&self, order: usize) -> Self {
        Self::from_coeffs(self.center, order, |i, j| self.coeff(i, j))
    }

    /// `∂f/∂ζ1`, one order lower.
    pub fn d1(&self) -> Self {
        let order = self.order.saturating_sub(1);
        if self.order == 0 {
            return Self::zeros(self.center, 0);
        }
        Self::from_coeffs(self.center, order, |i, j| self.coeff(i + 1, j) * (i + 1) as f64)
    }

    /// `∂f/∂ζ2`, one order lower.
    pub fn d2(&self) -> Self {
        let order = self.order.saturating_sub(1);
        if self.order == 0 {
            return Self::zeros(self.center, 0);
        }
        Self::from_coeffs(self.center, order, |i, j| self.coeff(i, j + 1) * (j + 1) as f64)
    }

    /// The jet of `f(ζ2, ζ1)` about the swapped center.
    pub fn swap(&self) -> Self {
        Self::from_coeffs((self.center.1, self.center.0), self.order, |i, j| self.coeff(j, i))
    }

    fn check_center(&self, other: &Self) -> Result<()> {
        if self.center != other.center {
            return Err(Error::Usage(format!(
                "jets expanded about different centers {:?} and {:?}",
                self.center, other.center
            )));
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C, C) -> C) -> Self {
        let order = self.order.min(other.order);
        Self::from_coeffs(self.center, order, |i, j| f(self.coeff(i, j), other.coeff(i, j)))
    }

    fn cauchy(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let mut out = Self::zeros(self.center, order);
        for k1 in 0..=order {
            for j1 in 0..=k1 {
                let a = self.coeffs[idx(k1 - j1, j1)];
                if a == C::default() {
                    continue;
                }
                let i1 = k1 - j1;
                for k2 in 0..=(order - k1) {
                    for j2 in 0..=k2 {
                        let i2 = k2 - j2;
                        out.coeffs[idx(i1 + i2, j1 + j2)] += a * other.coeffs[idx(i2, j2)];
                    }
                }
            }
        }
        out
    }
}

/// Checked jet arithmetic. The result carries the smaller of the two orders.
pub fn bijet_arith(a: &BiJet, b: &BiJet, op: JetOp) -> Result<BiJet> {
    a.check_center(b)?;
    Ok(match op {
        JetOp::Add => a.zip_with(b, |x, y| x + y),
        JetOp::Sub => a.zip_with(b, |x, y| x - y),
        JetOp::Mul => a.cauchy(b),
    })
}

pub fn bijet_partial(a: &BiJet, i: usize, j: usize) -> Result<C> {
    a.partial(i, j)
}

impl Add for BiJet {
    type Output = BiJet;
    fn add(self, rhs: BiJet) -> BiJet {
        bijet_arith(&self, &rhs, JetOp::Add).expect("jet addition")
    }
}

impl Sub for BiJet {
    type Output = BiJet;
    fn sub(self, rhs: BiJet) -> BiJet {
        bijet_arith(&self, &rhs, JetOp::Sub).expect("jet subtraction")
    }
}

impl Mul for BiJet {
    type Output = BiJet;
    fn mul(self, rhs: BiJet) -> BiJet {
        bijet_arith(&self, &rhs, JetOp::Mul).expect("jet multiplication")
    }
}

impl Neg for BiJet {
    type Output = BiJet;
    fn neg(mut self) -> BiJet {
        self.coeffs.iter_mut().for_each(|c| *c = -*c);
        self
    }
}

impl Analytic for BiJet {
    fn constant_like(&self, value: C) -> Self {
        Self::constant(self.center, value, self.order)
    }

    fn scale(&self, factor: C) -> Self {
        Self {
            center: self.center,
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    fn recip(&self) -> Self {
        // a * b = 1 solved degree by degree.
        let inv0 = C::new(1.0, 0.0) / self.coeffs[0];
        let mut out = Self::zeros(self.center, self.order);
        out.coeffs[0] = inv0;
        for k in 1..=self.order {
            for j in 0..=k {
                let i = k - j;
                let mut s = C::default();
                for p in 0..=i {
                    for q in 0..=j {
                        if p == 0 && q == 0 {
                            continue;
                        }
                        s += self.coeffs[idx(p, q)] * out.coeffs[idx(i - p, j - q)];
                    }
                }
                out.coeffs[idx(i, j)] = -s * inv0;
            }
        }
        out
    }

    fn exp(&self) -> Self {
        // i e_ij = sum p a_pq e_{i-p, j-q} for i >= 1; the ζ2 analogue on the i = 0 edge.
        let mut out = Self::zeros(self.center, self.order);
        out.coeffs[0] = self.coeffs[0].exp();
        for k in 1..=self.order {
            for j in 0..=k {
                let i = k - j;
                let mut s = C::default();
                if i >= 1 {
                    for p in 1..=i {
                        for q in 0..=j {
                            s += self.coeffs[idx(p, q)] * p as f64 * out.coeffs[idx(i - p, j - q)];
                        }
                    }
                    out.coeffs[idx(i, j)] = s / i as f64;
                } else {
                    for q in 1..=j {
                        s += self.coeffs[idx(0, q)] * q as f64 * out.coeffs[idx(0, j - q)];
                    }
                    out.coeffs[idx(0, j)] = s / j as f64;
                }
            }
        }
        out
    }
}

/// Jet of `f` about `(c1, c2)` by iterated Cauchy-integral quadrature on two
/// circles of the given radius with `nodes` points each.
///
/// `c_ij = (1/N²) Σ f(c1 + ρω^k, c2 + ρω^m) ω^{-ik-jm} ρ^{-i-j}`.
pub fn bijet_cauchy(
    f: &dyn Fn(C, C) -> C,
    center: (C, C),
    order: usize,
    radius: f64,
    nodes: usize,
) -> Result<BiJet> {
    assert!(nodes > order, "need more nodes than the jet order");
    let roots: Vec<C> = (0..nodes)
        .map(|k| C::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / nodes as f64))
        .collect();
    let mut samples = vec![C::default(); nodes * nodes];
    for k in 0..nodes {
        for m in 0..nodes {
            let z1 = center.0 + roots[k] * radius;
            let z2 = center.1 + roots[m] * radius;
            let v = f(z1, z2);
            if !super::is_finite(v) {
                return Err(Error::Numeric {
                    what: "non-finite sample in Cauchy jet extraction".into(),
                    at: Some((z1, z2)),
                });
            }
            samples[k * nodes + m] = v;
        }
    }
    // Transform along ζ2 first: partial[k][j] = (1/N) Σ_m f_km ω^{-jm}.
    let mut partial = vec![C::default(); nodes * (order + 1)];
    for k in 0..nodes {
        for j in 0..=order {
            let s: C = (0..nodes)
                .map(|m| samples[k * nodes + m] * roots[(j * m) % nodes].conj())
                .sum();
            partial[k * (order + 1) + j] = s / nodes as f64;
        }
    }
    Ok(BiJet::from_coeffs(center, order, |i, j| {
        let s: C = (0..nodes)
            .map(|k| partial[k * (order + 1) + j] * roots[(i * k) % nodes].conj())
            .sum();
        s / nodes as f64 / radius.powi((i + j) as i32)
    }))
}
