//! The constants `b_ℓ`, `c_ℓ`, Hardy tensor-square inner products on the
//! `(s, v)` side, and the norm ratio `‖t^{−ℓ} T f‖² / ‖f‖²`.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::brackets::binom_sq_sum;
use crate::error::{Error, Result};
use crate::numerics::gauss::legendre_rule;
use crate::numerics::{factorial, UniPoly, C, I};

use super::ftilde::legendre_poly;
use super::profile::{bergman_norm_check, half_line_integral, HalfLineProfile};

/// `(2ℓ−1)!! / (4π (2ℓ+1) (2ℓ)!!)` as a running product.
pub fn b_ell_double_factorial(l: usize) -> f64 {
    let ratio: f64 = (1..=l).map(|k| (2 * k - 1) as f64 / (2 * k) as f64).product();
    ratio / (4.0 * PI * (2 * l + 1) as f64)
}

/// `b_ℓ = (2ℓ)! / (2^{2ℓ+2} π (2ℓ+1) (ℓ!)²)`, cross-checked against the
/// double-factorial form.
pub fn b_ell(l: usize) -> Result<f64> {
    let central = binom_sq_sum(l)? as f64;
    let b = central / (2f64.powi(2 * l as i32 + 2) * PI * (2 * l + 1) as f64);
    let alt = b_ell_double_factorial(l);
    if (b - alt).abs() > 1e-14 * b {
        return Err(Error::Internal(format!("b_{l} closed forms disagree: {b:e} vs {alt:e}")));
    }
    Ok(b)
}

/// `c_ℓ = (−i)^ℓ / ((2ℓ+1) ℓ!)`.
pub fn c_ell(l: usize) -> C {
    (-I).powi(l as i32) / ((2 * l + 1) as f64 * factorial(l))
}

/// A basis element `F̃(h q)` recorded by its `(s, v)`-side factors.
#[derive(Debug, Clone)]
pub struct SeparableElement {
    pub h: HalfLineProfile,
    pub q: UniPoly,
}

fn v_inner(q1: &UniPoly, q2: &UniPoly) -> C {
    let rule = legendre_rule((q1.degree() + q2.degree()) / 2 + 1);
    rule.nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&v, &w)| {
            let x = C::new(v, 0.0);
            q1.eval(x).conj() * q2.eval(x) * w
        })
        .sum()
}

fn s_inner(h1: &HalfLineProfile, h2: &HalfLineProfile) -> Result<C> {
    half_line_integral(&|s| h1.eval(s).conj() * h2.eval(s) * s, h1.rate() + h2.rate())
}

/// `⟨F̃(h1 q1), F̃(h2 q2)⟩ = 2π² ∫∫ conj(h1 q1) h2 q2 s ds dv`, tensor quadrature.
pub fn hardy_inner(a: &SeparableElement, b: &SeparableElement) -> Result<C> {
    Ok(2.0 * PI * PI * s_inner(&a.h, &b.h)? * v_inner(&a.q, &b.q))
}

/// `P̃ q = (1−v²) q″ − 2v q′`.
pub fn ptilde_poly(q: &UniPoly) -> UniPoly {
    let one_minus_v2 = UniPoly::new(vec![C::new(1.0, 0.0), C::default(), C::new(-1.0, 0.0)]);
    let two_v = UniPoly::new(vec![C::default(), C::new(2.0, 0.0)]);
    let d1 = q.derivative();
    one_minus_v2.mul(&d1.derivative()).sub(&two_v.mul(&d1))
}

/// `‖t^{−ℓ} T f‖²_{2ℓ+2} / ‖f‖²` for `f = F̃(h P_ℓ)`.
///
/// The Hardy side is the `(s, v)` tensor quadrature; the Bergman side applies
/// the Plancherel reduction to `φ = c_ℓ h(ξ) ξ^{ℓ+1}` at `λ = 2ℓ + 2`.
pub fn hardy_norm_ratio(h: &HalfLineProfile, l: usize) -> Result<f64> {
    let element = SeparableElement {
        h: h.clone(),
        q: legendre_poly(l),
    };
    let hardy = hardy_inner(&element, &element)?.re;
    let phi = h.times_power(c_ell(l), l as i32 + 1);
    let (bergman, _) = bergman_norm_check(&phi, (2 * l + 2) as f64)?;
    if hardy == 0.0 {
        return Err(Error::domain("zero profile has no norm ratio"));
    }
    Ok(bergman / hardy)
}

/// Gram matrix of `F̃(h P_ℓ)`, `ℓ ≤ L`.
pub fn gram_matrix(h: &HalfLineProfile, max_l: usize) -> Result<DMatrix<C>> {
    let basis: Vec<SeparableElement> = (0..=max_l)
        .map(|l| SeparableElement {
            h: h.clone(),
            q: legendre_poly(l),
        })
        .collect();
    inner_matrix(&basis, &basis)
}

fn inner_matrix(left: &[SeparableElement], right: &[SeparableElement]) -> Result<DMatrix<C>> {
    let mut m = DMatrix::from_element(left.len(), right.len(), C::default());
    for (i, a) in left.iter().enumerate() {
        for (j, b) in right.iter().enumerate() {
            m[(i, j)] = hardy_inner(a, b)?;
        }
    }
    Ok(m)
}

/// `max_{i≠j} |G_ij| / √(G_ii G_jj)`.
pub fn off_diagonal_defect(g: &DMatrix<C>) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..g.nrows() {
        for j in 0..g.ncols() {
            if i != j {
                let scale = (g[(i, i)].norm() * g[(j, j)].norm()).sqrt();
                worst = worst.max(g[(i, j)].norm() / scale);
            }
        }
    }
    worst
}

/// Matrix `⟨b_i, P b_j⟩` with `P F̃(h q) = F̃(h P̃ q)`.
pub fn p_matrix(basis: &[SeparableElement]) -> Result<DMatrix<C>> {
    let images: Vec<SeparableElement> = basis
        .iter()
        .map(|b| SeparableElement {
            h: b.h.clone(),
            q: ptilde_poly(&b.q),
        })
        .collect();
    inner_matrix(basis, &images)
}

/// `max |A − A^H| / max |A|`.
pub fn hermitian_defect(a: &DMatrix<C>) -> f64 {
    let scale = a.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let diff = (a - a.adjoint()).iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        0.0
    } else {
        diff / scale
    }
}

/// Laguerre-damped profiles `L_m(2s) e^{−s}`, `m < count`.
pub fn laguerre_profiles(count: usize) -> Result<Vec<HalfLineProfile>> {
    (0..count)
        .map(|m| {
            // L_m(x) = Σ_k (−1)^k C(m,k) x^k / k!, here with x = 2s
            let coeffs = (0..=m)
                .map(|k| {
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    sign * crate::numerics::binomial(m, k) * 2f64.powi(k as i32) / factorial(k)
                })
                .collect();
            HalfLineProfile::exp_poly(coeffs, 1.0)
        })
        .collect()
}
