//! Möbius actions on the upper half-plane, the twist `f ↦ f^g`, and the
//! covariance of the brackets under `SL(2, ℝ)`.

use std::sync::Arc;

use rand::Rng;

use crate::contour::DomainDesc;
use crate::error::{Error, Result};
use crate::genop::{t_coeffs_quadrature, QuadOptions};
use crate::holo::{BivariateFn, Holo2};
use crate::numerics::{factorial, rel_err, Analytic, BiJet, C};

/// Tolerance on `ad − bc = 1`.
pub const DET_TOL: f64 = 1e-12;

/// Floor for the denominator of [`covariance_residual`].
pub const RESIDUAL_FLOOR: f64 = 1e-12;

/// A real matrix `(a b; c d)` of determinant one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusElem {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl MobiusElem {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !det.is_finite() || (det - 1.0).abs() > DET_TOL {
            return Err(Error::domain(format!("determinant {det} is not 1")));
        }
        Ok(Self { a, b, c, d })
    }

    pub fn identity() -> Self {
        Self { a: 1.0, b: 0.0, c: 0.0, d: 1.0 }
    }

    pub fn translation(b: f64) -> Self {
        Self { a: 1.0, b, c: 0.0, d: 1.0 }
    }

    /// `diag(a, 1/a)`, acting as `z ↦ a² z`.
    pub fn scaling(a: f64) -> Result<Self> {
        Self::new(a, 0.0, 0.0, 1.0 / a)
    }

    pub fn inversion() -> Self {
        Self { a: 0.0, b: -1.0, c: 1.0, d: 0.0 }
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// Matrix product `self · other`, so that `(g1 · g2) z = g1(g2 z)`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    /// `cz + d`.
    pub fn denominator(&self, z: C) -> C {
        z * self.c + self.d
    }

    fn act<A: Analytic>(&self, z: &A) -> A {
        let num = z.scale(C::from(self.a)).add_scalar(C::from(self.b));
        let den = z.scale(C::from(self.c)).add_scalar(C::from(self.d));
        num * den.recip()
    }
}

/// `(az + b)/(cz + d)`.
pub fn mobius_apply(g: &MobiusElem, z: C) -> Result<C> {
    let den = g.denominator(z);
    if den == C::from(0.0) {
        return Err(Error::Pole(format!("cz + d vanishes at z = {z}")));
    }
    Ok((z * g.a + g.b) / den)
}

struct Twisted {
    inner: Holo2,
    g: MobiusElem,
}

impl BivariateFn for Twisted {
    fn eval(&self, z1: C, z2: C) -> C {
        let (d1, d2) = (self.g.denominator(z1), self.g.denominator(z2));
        self.inner.value(self.g.act(&z1), self.g.act(&z2)) / (d1 * d2)
    }

    fn jet_at(&self, center: (C, C), order: usize) -> Option<Result<BiJet>> {
        Some(self.compose_jet(center, order))
    }

    fn describe(&self) -> String {
        format!("twist of {} by {:?}", self.inner.describe(), self.g.entries())
    }
}

impl Twisted {
    /// Substitutes the Möbius images into the inner jet by Horner's rule.
    fn compose_jet(&self, center: (C, C), order: usize) -> Result<BiJet> {
        let x = BiJet::var1(center, order);
        let y = BiJet::var2(center, order);
        let (u, v) = (self.g.act(&x), self.g.act(&y));
        let images = (u.coeff(0, 0), v.coeff(0, 0));
        let inner = self.inner.jet_about(images, order)?;
        let du = u.add_scalar(-images.0);
        let dv = v.add_scalar(-images.1);
        let mut acc = BiJet::zeros(center, order);
        for i in (0..=order).rev() {
            let mut row = BiJet::zeros(center, order);
            for j in (0..=order - i).rev() {
                row = row * dv.clone() + BiJet::constant(center, inner.coeff(i, j), order);
            }
            acc = acc * du.clone() + row;
        }
        let weight = (x.scale(C::from(self.g.c)).add_scalar(C::from(self.g.d))
            * y.scale(C::from(self.g.c)).add_scalar(C::from(self.g.d)))
        .recip();
        Ok(acc * weight)
    }
}

/// `f^g(ζ1, ζ2) = (cζ1 + d)^{-1} (cζ2 + d)^{-1} f(gζ1, gζ2)` on `Π × Π`.
pub fn twist(f: &Holo2, g: &MobiusElem) -> Result<Holo2> {
    if matches!(f.domain(), DomainDesc::Disk { .. }) {
        return Err(Error::domain("twisting needs a function defined on the whole upper half-plane"));
    }
    Ok(Holo2::new(
        DomainDesc::UpperHalfPlane,
        Arc::new(Twisted {
            inner: f.clone(),
            g: *g,
        }),
    ))
}

/// Relative mismatch of `ℓ! T_ℓ(f^g)(z)` against `(cz + d)^{-2ℓ-2} ℓ! T_ℓ f(gz)`.
pub fn covariance_residual(f: &Holo2, g: &MobiusElem, l: usize, z: C, opts: &QuadOptions) -> Result<f64> {
    Ok(covariance_residuals(f, g, l, z, opts)?[l])
}

/// [`covariance_residual`] for every `ℓ ≤ max_l` from one pair of quadratures.
pub fn covariance_residuals(f: &Holo2, g: &MobiusElem, max_l: usize, z: C, opts: &QuadOptions) -> Result<Vec<f64>> {
    if z.im <= 0.0 {
        return Err(Error::domain(format!("{z} is not in the upper half-plane")));
    }
    let gz = mobius_apply(g, z)?;
    let lhs = t_coeffs_quadrature(&twist(f, g)?, z, max_l, opts)?;
    let rhs = t_coeffs_quadrature(f, gz, max_l, opts)?;
    let jz = g.denominator(z);
    Ok((0..=max_l)
        .map(|l| {
            let scale = factorial(l);
            let expected = rhs[l].value * scale * jz.powi(-2 * l as i32 - 2);
            rel_err(lhs[l].value * scale, expected, RESIDUAL_FLOOR)
        })
        .collect())
}

/// Random element with entries drawn from `[-1, 1]`, rescaled to determinant one.
///
/// Draws are rejected until `|det| ≥ 0.1` before rescaling and `|c| ≤ 0.5`
/// after it, which keeps `cz + d` away from zero near `Im z = 2`.
pub fn random_mobius<R: Rng + ?Sized>(rng: &mut R) -> MobiusElem {
    loop {
        let [mut a, mut b, c, d]: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..=1.0));
        let det = a * d - b * c;
        if det.abs() < 0.1 {
            continue;
        }
        if det < 0.0 {
            a = -a;
            b = -b;
        }
        let s = det.abs().sqrt();
        let g = MobiusElem {
            a: a / s,
            b: b / s,
            c: c / s,
            d: d / s,
        };
        if g.c.abs() <= 0.5 {
            return g;
        }
    }
}

/// Largest pointwise gap between `twist(twist(f, g1), g2)` and `twist(f, g1 · g2)`.
pub fn cocycle_defect(f: &Holo2, g1: &MobiusElem, g2: &MobiusElem, samples: &[(C, C)]) -> Result<f64> {
    let nested = twist(&twist(f, g1)?, g2)?;
    let direct = twist(f, &g1.compose(g2))?;
    samples.iter().try_fold(0.0_f64, |worst, &(a, b)| {
        let lhs = nested.eval(a, b)?;
        let rhs = direct.eval(a, b)?;
        Ok(worst.max(rel_err(lhs, rhs, 1.0)))
    })
}
