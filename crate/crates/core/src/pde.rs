//! The operator `P = (ζ1−ζ2)² ∂1∂2 − (ζ1−ζ2)(∂1 − ∂2)`, its two-parameter
//! variant, and the eigenfunctions `f_ℓ`.

use std::sync::Arc;

use crate::contour::DomainDesc;
use crate::error::{Error, Result};
use crate::genop::t_series;
use crate::holo::{BivariateFn, Holo2};
use crate::numerics::{binomial, Analytic, BiJet, BiPoly, C, I};

fn one() -> C {
    C::new(1.0, 0.0)
}

/// `P_{λ′,λ″} f = (ζ1−ζ2)² ∂1∂2 f − (ζ1−ζ2)(λ″ ∂1 f − λ′ ∂2 f)` on a jet.
///
/// About a diagonal point `(ζ1−ζ2)` has no constant term, so the output keeps
/// the input order exactly. Elsewhere two orders are lost.
pub fn apply_p_general_jet(f: &BiJet, lambda1: C, lambda2: C) -> Result<BiJet> {
    let n = f.order();
    let out_order = if f.is_diagonal() {
        n
    } else if n >= 2 {
        n - 2
    } else {
        return Err(Error::Truncation {
            requested: 2,
            available: n,
        });
    };
    let center = f.center();
    let diff = BiJet::var1(center, out_order) - BiJet::var2(center, out_order);
    let f12 = f.d1().d2().with_order(out_order);
    let first = f.d1().with_order(out_order).scale(lambda2) - f.d2().with_order(out_order).scale(lambda1);
    Ok(diff.clone() * diff.clone() * f12 - diff * first)
}

pub fn apply_p_jet(f: &BiJet) -> Result<BiJet> {
    apply_p_general_jet(f, one(), one())
}

pub fn apply_p_general_poly(f: &BiPoly, lambda1: C, lambda2: C) -> BiPoly {
    let diff = BiPoly::difference();
    let f12 = f.d1().d2();
    let first = f.d1().scale(lambda2) - f.d2().scale(lambda1);
    diff.pow(2) * f12 - diff * first
}

pub fn apply_p_poly(f: &BiPoly) -> BiPoly {
    apply_p_general_poly(f, one(), one())
}

struct PApplied {
    inner: Holo2,
    lambda1: C,
    lambda2: C,
}

impl BivariateFn for PApplied {
    fn eval(&self, z1: C, z2: C) -> C {
        match self
            .inner
            .jet_about((z1, z2), 2)
            .and_then(|j| apply_p_general_jet(&j, self.lambda1, self.lambda2))
        {
            Ok(j) => j.coeff(0, 0),
            Err(_) => C::new(f64::NAN, f64::NAN),
        }
    }

    fn jet_at(&self, center: (C, C), order: usize) -> Option<Result<BiJet>> {
        let need = if center.0 == center.1 { order } else { order + 2 };
        Some(
            self.inner
                .jet_about(center, need)
                .and_then(|j| apply_p_general_jet(&j, self.lambda1, self.lambda2)),
        )
    }

    fn describe(&self) -> String {
        format!("P_({}, {}) applied to {}", self.lambda1, self.lambda2, self.inner.describe())
    }
}

/// `P_{λ′,λ″} f` as a new function. Polynomials stay polynomial.
pub fn apply_p_general(f: &Holo2, lambda1: C, lambda2: C) -> Holo2 {
    if let Some(p) = f.as_poly() {
        return Holo2::polynomial(*f.domain(), apply_p_general_poly(p, lambda1, lambda2));
    }
    Holo2::new(
        *f.domain(),
        Arc::new(PApplied {
            inner: f.clone(),
            lambda1,
            lambda2,
        }),
    )
}

pub fn apply_p(f: &Holo2) -> Holo2 {
    apply_p_general(f, one(), one())
}

/// `max_ℓ |c_ℓ(P f) + ℓ(ℓ+1) c_ℓ(f)|` over the series coefficients at `z`.
pub fn euler_identity_residual(f: &Holo2, z: C, order: usize) -> Result<f64> {
    if order < 2 {
        return Err(Error::Usage(format!("Euler identity check needs L ≥ 2, got {order}")));
    }
    let plain = t_series(f, z, order)?;
    let applied = t_series(&apply_p(f), z, order)?;
    Ok(plain
        .coeffs
        .iter()
        .zip(&applied.coeffs)
        .enumerate()
        .map(|(l, (a, b))| (b + a * (l * (l + 1)) as f64).norm())
        .fold(0.0, f64::max))
}

/// Jet order used by [`eigen_residual`] for eigenvalue index `ℓ`.
pub fn eigen_jet_order(l: usize) -> usize {
    l + 4
}

/// Largest jet coefficient of `P f + ℓ(ℓ+1) f` over the diagonal samples.
pub fn eigen_residual(f: &Holo2, l: usize, samples: &[C]) -> Result<f64> {
    let order = eigen_jet_order(l);
    let lambda = (l * (l + 1)) as f64;
    let mut worst: f64 = 0.0;
    for &z in samples {
        let jet = f.jet(z, order)?;
        let residual = apply_p_jet(&jet)? + jet.scale(C::new(lambda, 0.0));
        worst = worst.max(residual.max_abs());
    }
    Ok(worst)
}

/// `f_ℓ(ζ1, ζ2) = (ζ1−ζ2)^ℓ (ζ1+i)^{−ℓ−1} (ζ2+i)^{−ℓ−1}`, holomorphic on `Π × Π`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EigenFamily {
    pub l: usize,
}

impl EigenFamily {
    pub fn new(l: usize) -> Self {
        Self { l }
    }

    pub fn formula<A: Analytic>(&self, x: &A, y: &A) -> A {
        let p = self.l as i32;
        let diff = (x.clone() - y.clone()).powi(p);
        let denom = (x.add_scalar(I) * y.add_scalar(I)).powi(-p - 1);
        diff * denom
    }

    pub fn holo(&self) -> Holo2 {
        Holo2::new(DomainDesc::UpperHalfPlane, Arc::new(*self))
    }

    /// `T f_ℓ(z, t) = C(2ℓ, ℓ) t^ℓ (z + i)^{−2ℓ−2}`.
    pub fn t_closed_form(&self, z: C, t: C) -> C {
        let l = self.l as i32;
        binomial(2 * self.l, self.l) * t.powi(l) * (z + I).powi(-2 * l - 2)
    }

    /// `R_ℓ f_ℓ(z) = (2ℓ)!/ℓ! (z + i)^{−2ℓ−2}`.
    pub fn bracket_closed_form(&self, z: C) -> C {
        let l = self.l;
        crate::numerics::factorial(2 * l) / crate::numerics::factorial(l) * (z + I).powi(-2 * l as i32 - 2)
    }
}

impl BivariateFn for EigenFamily {
    fn eval(&self, z1: C, z2: C) -> C {
        self.formula(&z1, &z2)
    }

    fn jet_at(&self, center: (C, C), order: usize) -> Option<Result<BiJet>> {
        let x = BiJet::var1(center, order);
        let y = BiJet::var2(center, order);
        Some(Ok(self.formula(&x, &y)))
    }

    fn describe(&self) -> String {
        format!("f_{}", self.l)
    }
}

/// Indices `ℓ ≤ L` whose series coefficient at `z` exceeds `threshold`.
pub fn series_support(f: &Holo2, z: C, order: usize, threshold: f64) -> Result<Vec<usize>> {
    Ok(t_series(f, z, order)?
        .coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > threshold)
        .map(|(l, _)| l)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brackets::rc_bracket;
    use crate::numerics::c;

    #[test]
    fn constants_are_annihilated() {
        let p = BiPoly::constant(c(2.0, 1.0));
        assert_eq!(apply_p_poly(&p), BiPoly::zero());
        assert_eq!(apply_p_general_poly(&p, c(2.0, 0.0), c(0.5, 1.0)), BiPoly::zero());
    }

    #[test]
    fn difference_is_an_eigenfunction() {
        let d = BiPoly::difference();
        assert_eq!(apply_p_poly(&d), d.scale(c(-2.0, 0.0)));
        assert_eq!(apply_p_general_poly(&d, c(2.0, 0.0), c(3.0, 0.0)), d.scale(c(-5.0, 0.0)));
    }

    #[test]
    fn jet_and_polynomial_routes_agree() {
        let p = BiPoly::from_terms([(3, 2, c(1.0, -0.5)), (1, 1, c(2.0, 0.0)), (0, 4, c(0.0, 1.0))]);
        let z = c(0.3, 0.8);
        let exact = apply_p_poly(&p).taylor_jet((z, z), 6);
        let via_jet = apply_p_jet(&p.taylor_jet((z, z), 6)).unwrap();
        assert!((exact - via_jet).max_abs() < 1e-12);
        // off the diagonal two orders are consumed
        let off = apply_p_jet(&p.taylor_jet((z, c(0.0, 1.0)), 6)).unwrap();
        assert_eq!(off.order(), 4);
        let want = apply_p_poly(&p).taylor_jet((z, c(0.0, 1.0)), 4);
        assert!((off - want).max_abs() < 1e-12);
    }

    #[test]
    fn f_ell_is_an_eigenfunction() {
        for l in 0..=5 {
            let f = EigenFamily::new(l).holo();
            let r = eigen_residual(&f, l, &[c(0.0, 1.0), c(0.5, 2.0)]).unwrap();
            assert!(r < 1e-12, "ℓ={l}: {r}");
        }
        let f1 = EigenFamily::new(1).holo();
        let z = c(0.0, 2.0);
        let jet = f1.jet(z, eigen_jet_order(2)).unwrap();
        let r = eigen_residual(&f1, 2, &[z]).unwrap();
        assert!((r - 4.0 * jet.max_abs()).abs() < 1e-14);
    }

    #[test]
    fn f_ell_values() {
        let f = EigenFamily::new(1).holo();
        let z = c(0.3, 1.0);
        assert!((rc_bracket(&f, 1, z).unwrap() - 2.0 * (z + I).powi(-4)).norm() < 1e-14);
        assert_eq!(f.eval(z, z).unwrap(), C::default());
        let applied = apply_p(&f);
        let (a, b) = (c(0.1, 1.0), c(-0.4, 2.5));
        assert!((applied.value(a, b) + 2.0 * f.value(a, b)).norm() < 1e-14);
    }
}
