//! Half-line profiles `h(s)`, the one-variable Fourier–Laplace transform,
//! and the weighted Bergman norm identity.

use std::fmt;
use std::f64::consts::PI;
use std::sync::Arc;

use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::numerics::gauss::{laguerre_rule, legendre_rule};
use crate::numerics::{is_finite, C, I};

/// A function on `ℝ₊` decaying at least like `e^{−rate·s}`.
#[derive(Clone)]
pub struct HalfLineProfile {
    rate: f64,
    label: String,
    func: Arc<dyn Fn(f64) -> C + Send + Sync>,
}

impl fmt::Debug for HalfLineProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HalfLineProfile({}, rate {})", self.label, self.rate)
    }
}

impl HalfLineProfile {
    pub fn new(rate: f64, label: impl Into<String>, func: impl Fn(f64) -> C + Send + Sync + 'static) -> Result<Self> {
        if !(rate > 0.0) {
            return Err(Error::Usage(format!("profile decay rate must be positive, got {rate}")));
        }
        Ok(Self {
            rate,
            label: label.into(),
            func: Arc::new(func),
        })
    }

    /// `s^power e^{−rate·s}`.
    pub fn exp_monomial(power: i32, rate: f64) -> Result<Self> {
        Self::new(rate, format!("s^{power} e^(-{rate} s)"), move |s| C::new(s.powi(power) * (-rate * s).exp(), 0.0))
    }

    /// `(Σ_k a_k s^k) e^{−rate·s}`.
    pub fn exp_poly(coeffs: Vec<f64>, rate: f64) -> Result<Self> {
        let label = format!("poly{coeffs:?} e^(-{rate} s)");
        Self::new(rate, label, move |s| {
            C::new(coeffs.iter().rev().fold(0.0, |acc, c| acc * s + c) * (-rate * s).exp(), 0.0)
        })
    }

    pub fn zero() -> Self {
        Self {
            rate: 1.0,
            label: "0".into(),
            func: Arc::new(|_| C::default()),
        }
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    #[inline]
    pub fn eval(&self, s: f64) -> C {
        (self.func)(s)
    }

    /// `h(s) · factor · s^power`, same decay class.
    pub fn times_power(&self, factor: C, power: i32) -> Self {
        let inner = self.func.clone();
        Self {
            rate: self.rate,
            label: format!("{factor}·s^{power}·({})", self.label),
            func: Arc::new(move |s| inner(s) * factor * s.powi(power)),
        }
    }
}

const HALF_LINE_START: usize = 64;
const HALF_LINE_MAX: usize = 1024;
const HALF_LINE_REL: f64 = 1e-13;

/// Repeats `rule(n)` with doubled `n` until two values agree to `rel`.
///
/// `rule` returns the value and `Σ |w f|`; agreement is measured against the
/// larger of the two so that integrals which cancel to zero still settle.
pub(crate) fn until_stable(start: usize, max: usize, rel: f64, rule: impl Fn(usize) -> (C, f64)) -> Result<C> {
    let mut n = start;
    let (mut prev, _) = rule(n);
    while n < max {
        n *= 2;
        let (next, scale) = rule(n);
        if !is_finite(next) {
            return Err(Error::numeric("non-finite quadrature value"));
        }
        let diff = (next - prev).norm();
        if diff <= rel * next.norm().max(scale) || diff == 0.0 {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Accuracy {
        best: prev,
        err: f64::NAN,
        tol: rel,
    })
}

/// `∫_0^∞ f(s) ds` for `f` decaying like `e^{−β s}`, Gauss–Laguerre with `n`
/// nodes, together with `Σ |w f|`.
pub(crate) fn laguerre_sum(f: &dyn Fn(f64) -> C, beta: f64, n: usize) -> (C, f64) {
    let rule = laguerre_rule(n);
    let mut acc = C::default();
    let mut scale = 0.0;
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let v = f(x / beta);
        if v != C::default() {
            acc += v * w;
            scale += v.norm() * w;
        }
    }
    (acc / beta, scale / beta)
}

/// Adaptive half-line integral with decay rate `beta`.
pub fn half_line_integral(f: &dyn Fn(f64) -> C, beta: f64) -> Result<C> {
    if !(beta > 0.0) {
        return Err(Error::domain(format!("half-line integrand does not decay (rate {beta})")));
    }
    until_stable(HALF_LINE_START, HALF_LINE_MAX, HALF_LINE_REL, |n| laguerre_sum(f, beta, n))
}

/// `(ℱ_ℝ φ)(z) = ∫_0^∞ φ(ξ) e^{i z ξ} dξ`.
pub fn fourier_laplace(phi: &HalfLineProfile, z: C) -> Result<C> {
    let beta = phi.rate() + z.im;
    if !(beta > 0.0) {
        return Err(Error::domain(format!(
            "Fourier–Laplace transform diverges at z = {z} for decay rate {}",
            phi.rate()
        )));
    }
    half_line_integral(&|xi| phi.eval(xi) * (I * z * xi).exp(), beta)
}

/// `∫_0^∞ |h(s)|² s ds`.
pub fn weighted_l2_norm_sq(h: &HalfLineProfile) -> Result<f64> {
    Ok(half_line_integral(&|s| C::new(h.eval(s).norm_sqr() * s, 0.0), 2.0 * h.rate())?.re)
}

/// `(lhs, rhs)` of `‖ℱ_ℝ φ‖²_λ = 2^{2−λ} π Γ(λ−1) ‖φ‖²_{ξ^{1−λ}dξ}`.
///
/// `lhs` integrates the horizontal Plancherel identity
/// `∫|ℱ_ℝφ(x+iy)|² dx = 2π ∫ |φ|² e^{−2yξ} dξ` against `y^{λ−2} dy`, with
/// `y = u/(1−u)` under Gauss–Legendre; `rhs` evaluates the closed form with a
/// numerical weighted norm.
pub fn bergman_norm_check(phi: &HalfLineProfile, lambda: f64) -> Result<(f64, f64)> {
    if !(lambda > 1.0) {
        return Err(Error::Usage(format!("Bergman weight needs λ > 1, got {lambda}")));
    }
    let horizontal = |y: f64| -> Result<f64> {
        let beta = 2.0 * (phi.rate() + y);
        let inner = half_line_integral(&|xi| C::new(phi.eval(xi).norm_sqr() * (-2.0 * y * xi).exp(), 0.0), beta)?;
        Ok(2.0 * PI * inner.re)
    };
    let outer = |n: usize| -> Result<f64> {
        let rule = legendre_rule(n);
        let mut acc = 0.0;
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            let u = 0.5 * (x + 1.0);
            let y = u / (1.0 - u);
            let jac = 0.5 / ((1.0 - u) * (1.0 - u));
            acc += w * jac * y.powf(lambda - 2.0) * horizontal(y)?;
        }
        Ok(acc)
    };
    let mut n = 32;
    let mut prev = outer(n)?;
    let lhs = loop {
        n *= 2;
        let next = outer(n)?;
        if (next - prev).abs() <= 1e-12 * next.abs() || next == prev {
            break next;
        }
        if n >= 1024 {
            return Err(Error::Accuracy {
                best: C::new(next, 0.0),
                err: (next - prev).abs(),
                tol: 1e-12,
            });
        }
        prev = next;
    };
    let weighted = half_line_integral(
        &|xi| C::new(phi.eval(xi).norm_sqr() * xi.powf(1.0 - lambda), 0.0),
        2.0 * phi.rate(),
    )?;
    let rhs = 2f64.powf(2.0 - lambda) * PI * gamma(lambda - 1.0) * weighted.re;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::c;

    #[test]
    fn transforms_of_exponentials() {
        let e = HalfLineProfile::exp_monomial(0, 1.0).unwrap();
        let z = c(0.7, 0.4);
        let want = 1.0 / (1.0 - I * z);
        assert!((fourier_laplace(&e, z).unwrap() - want).norm() < 1e-13);
        let se = HalfLineProfile::exp_monomial(1, 1.0).unwrap();
        assert!((fourier_laplace(&se, I).unwrap() - 0.25).norm() < 1e-15);
        assert_eq!(fourier_laplace(&HalfLineProfile::zero(), I).unwrap(), C::default());
        assert!(fourier_laplace(&e, c(0.0, -2.0)).is_err());
    }

    #[test]
    fn bergman_closed_forms() {
        let (lhs, rhs) = bergman_norm_check(&HalfLineProfile::exp_monomial(1, 1.0).unwrap(), 2.0).unwrap();
        assert!((rhs - PI / 4.0).abs() < 1e-13);
        assert!((lhs - rhs).abs() < 1e-10 * rhs);
        let (lhs, rhs) = bergman_norm_check(&HalfLineProfile::exp_monomial(2, 1.0).unwrap(), 4.0).unwrap();
        assert!((rhs - PI / 8.0).abs() < 1e-13);
        assert!((lhs - rhs).abs() < 1e-10 * rhs);
        assert_eq!(bergman_norm_check(&HalfLineProfile::zero(), 3.0).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn weighted_norm() {
        // ∫ e^{−2s} s ds = 1/4
        let e = HalfLineProfile::exp_monomial(0, 1.0).unwrap();
        assert!((weighted_l2_norm_sq(&e).unwrap() - 0.25).abs() < 1e-15);
    }
}
