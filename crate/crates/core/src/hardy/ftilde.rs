//! The lifted transform
//! `F̃(h q)(ζ1, ζ2) = ½ ∫_0^∞ ∫_{−1}^{1} h(s) q(v) G(s, v; ζ1, ζ2) s ds dv`,
//! `G = e^{i (s/2)((1−v)ζ1 + (1+v)ζ2)}`, and the bracket identity for `G`.

use crate::brackets::bracket_from_jet;
use crate::contour::DomainDesc;
use crate::error::{Error, Result};
use crate::holo::{BivariateFn, Holo2};
use crate::numerics::gauss::{laguerre_rule, legendre_rule};
use crate::numerics::{factorial, Analytic, BiJet, UniPoly, C, I};

use super::legendre::{legendre, LegendreTable};
use super::norms::c_ell;
use super::profile::{fourier_laplace, HalfLineProfile};

use std::sync::Arc;

/// Default tensor rule: Gauss–Laguerre nodes in `s` × Gauss–Legendre nodes in `v`.
pub const FTILDE_S_NODES: usize = 128;
pub const FTILDE_V_NODES: usize = 64;
const FTILDE_MAX_S: usize = 1024;
const FTILDE_REL: f64 = 1e-12;

/// `F̃(h q)` for a profile `h` and a polynomial `q(v)`.
#[derive(Debug, Clone)]
pub struct FTilde {
    pub h: HalfLineProfile,
    pub q: UniPoly,
}

/// `P_ℓ` as a polynomial in `v`.
pub fn legendre_poly(l: usize) -> UniPoly {
    let table = LegendreTable::new(l).expect("Legendre degree within table range");
    UniPoly::new(table.coeffs(l).into_iter().map(|c| C::new(c, 0.0)).collect())
}

impl FTilde {
    pub fn new(h: HalfLineProfile, q: UniPoly) -> Self {
        Self { h, q }
    }

    pub fn legendre(h: HalfLineProfile, l: usize) -> Self {
        Self::new(h, legendre_poly(l))
    }

    fn check(&self, z1: C, z2: C) -> Result<()> {
        for z in [z1, z2] {
            if !(z.im > 0.0) {
                return Err(Error::domain(format!("F̃ needs Im ζ > 0, got {z}")));
            }
        }
        Ok(())
    }

    /// Jet about `center` from the tensor rule with `ns × nv` nodes, using
    /// `∂1^i ∂2^j G = (is(1−v)/2)^i (is(1+v)/2)^j G`. Also returns `Σ |integrand|`.
    fn jet_with(&self, center: (C, C), order: usize, ns: usize, nv: usize) -> (BiJet, f64) {
        let vrule = legendre_rule(nv);
        let srule = laguerre_rule(ns);
        let mut jet = BiJet::zeros(center, order);
        let mut scale = 0.0;
        let mut pow_a = vec![C::default(); order + 1];
        let mut pow_b = vec![C::default(); order + 1];
        for (&v, &wv) in vrule.nodes.iter().zip(&vrule.weights) {
            let qv = self.q.eval(C::new(v, 0.0));
            if qv == C::default() {
                continue;
            }
            let (a, b) = (0.5 * (1.0 - v), 0.5 * (1.0 + v));
            let w = center.0 * a + center.1 * b;
            let beta = self.h.rate() + w.im;
            for (&x, &ws) in srule.nodes.iter().zip(&srule.weights) {
                let s = x / beta;
                let base = 0.5 * wv * ws / beta * self.h.eval(s) * qv * s * (I * s * w).exp();
                if base == C::default() {
                    continue;
                }
                scale += base.norm();
                pow_a[0] = C::new(1.0, 0.0);
                pow_b[0] = C::new(1.0, 0.0);
                for k in 1..=order {
                    pow_a[k] = pow_a[k - 1] * I * s * a / k as f64;
                    pow_b[k] = pow_b[k - 1] * I * s * b / k as f64;
                }
                for k in 0..=order {
                    for j in 0..=k {
                        let cur = jet.coeff(k - j, j);
                        jet.set_coeff(k - j, j, cur + base * pow_a[k - j] * pow_b[j]);
                    }
                }
            }
        }
        (jet, scale)
    }

    /// Jet with node doubling until successive coefficient tables agree.
    pub fn jet(&self, center: (C, C), order: usize) -> Result<BiJet> {
        self.check(center.0, center.1)?;
        let (mut ns, mut nv) = (FTILDE_S_NODES, FTILDE_V_NODES);
        let (mut prev, _) = self.jet_with(center, order, ns, nv);
        while ns < FTILDE_MAX_S {
            ns *= 2;
            nv *= 2;
            let (next, scale) = self.jet_with(center, order, ns, nv);
            let diff = (next.clone() - prev).max_abs();
            // the floor keeps cancelling integrals, e.g. ℓ ≥ 1 on the diagonal, from never settling
            if diff <= FTILDE_REL * next.max_abs().max(scale) {
                return Ok(next);
            }
            prev = next;
        }
        Err(Error::Accuracy {
            best: prev.coeff(0, 0),
            err: f64::NAN,
            tol: FTILDE_REL,
        })
    }

    pub fn eval(&self, z1: C, z2: C) -> Result<C> {
        Ok(self.jet((z1, z2), 0)?.coeff(0, 0))
    }

    pub fn holo(&self) -> Holo2 {
        Holo2::new(DomainDesc::UpperHalfPlane, Arc::new(self.clone()))
    }
}

impl BivariateFn for FTilde {
    fn eval(&self, z1: C, z2: C) -> C {
        FTilde::eval(self, z1, z2).unwrap_or(C::new(f64::NAN, f64::NAN))
    }

    fn jet_at(&self, center: (C, C), order: usize) -> Option<Result<BiJet>> {
        Some(self.jet(center, order))
    }

    fn describe(&self) -> String {
        format!("F̃ of {} times a degree-{} polynomial in v", self.h.label(), self.q.degree())
    }
}

const EXP_LIFT_START: usize = 32;
const EXP_LIFT_MAX: usize = 4096;

/// `F̃(e^{−rate·s} q)` with the `s` integral in closed form,
/// `∫_0^∞ e^{−rate·s} s e^{isw} ds = (rate − iw)^{−2}`, leaving a Gauss–Legendre rule in `v`.
#[derive(Debug, Clone)]
pub struct ExpLift {
    rate: f64,
    q: UniPoly,
}

impl ExpLift {
    pub fn new(rate: f64, q: UniPoly) -> Result<Self> {
        if !(rate > 0.0) {
            return Err(Error::Usage(format!("profile decay rate must be positive, got {rate}")));
        }
        Ok(Self { rate, q })
    }

    pub fn legendre(rate: f64, l: usize) -> Result<Self> {
        Self::new(rate, legendre_poly(l))
    }

    /// `∂1^i ∂2^j (rate − iw)^{−2} = (n+1)! iⁿ aⁱ bʲ (rate − iw)^{−n−2}` with `n = i + j`.
    fn jet_with(&self, center: (C, C), order: usize, nv: usize) -> (BiJet, f64) {
        let rule = legendre_rule(nv);
        let mut jet = BiJet::zeros(center, order);
        let mut scale = 0.0;
        let mut radial = vec![C::default(); order + 1];
        for (&v, &wv) in rule.nodes.iter().zip(&rule.weights) {
            let base = 0.5 * wv * self.q.eval(C::new(v, 0.0));
            if base == C::default() {
                continue;
            }
            let (a, b) = (0.5 * (1.0 - v), 0.5 * (1.0 + v));
            let u = C::new(self.rate, 0.0) - I * (center.0 * a + center.1 * b);
            let inv = 1.0 / u;
            radial[0] = base * inv * inv;
            scale += radial[0].norm();
            for n in 1..=order {
                radial[n] = radial[n - 1] * I * inv * (n + 1) as f64;
            }
            for n in 0..=order {
                for j in 0..=n {
                    let i = n - j;
                    let term = radial[n] * a.powi(i as i32) * b.powi(j as i32) / (factorial(i) * factorial(j));
                    jet.set_coeff(i, j, jet.coeff(i, j) + term);
                }
            }
        }
        (jet, scale)
    }

    pub fn jet(&self, center: (C, C), order: usize) -> Result<BiJet> {
        for z in [center.0, center.1] {
            if !(z.im > 0.0) {
                return Err(Error::domain(format!("F̃ needs Im ζ > 0, got {z}")));
            }
        }
        let mut nv = EXP_LIFT_START;
        let (mut prev, _) = self.jet_with(center, order, nv);
        while nv < EXP_LIFT_MAX {
            nv *= 2;
            let (next, scale) = self.jet_with(center, order, nv);
            let diff = (next.clone() - prev).max_abs();
            if diff <= FTILDE_REL * next.max_abs().max(scale) {
                return Ok(next);
            }
            prev = next;
        }
        Err(Error::Accuracy {
            best: prev.coeff(0, 0),
            err: f64::NAN,
            tol: FTILDE_REL,
        })
    }

    pub fn eval(&self, z1: C, z2: C) -> Result<C> {
        Ok(self.jet((z1, z2), 0)?.coeff(0, 0))
    }

    pub fn holo(&self) -> Holo2 {
        Holo2::new(DomainDesc::UpperHalfPlane, Arc::new(self.clone()))
    }
}

impl BivariateFn for ExpLift {
    fn eval(&self, z1: C, z2: C) -> C {
        ExpLift::eval(self, z1, z2).unwrap_or(C::new(f64::NAN, f64::NAN))
    }

    fn jet_at(&self, center: (C, C), order: usize) -> Option<Result<BiJet>> {
        Some(self.jet(center, order))
    }

    fn describe(&self) -> String {
        format!("F̃ of e^(-{} s) times a degree-{} polynomial in v", self.rate, self.q.degree())
    }
}

/// `F̃(h P_ℓ)(ζ1, ζ2)`.
pub fn ftilde(h: &HalfLineProfile, l: usize, z1: C, z2: C) -> Result<C> {
    FTilde::legendre(h.clone(), l).eval(z1, z2)
}

/// `(R_ℓ G(s, v; ·)(z), (−i)^ℓ e^{izs} s^ℓ P_ℓ(v))`; the jet of `G` is built
/// by exponentiating a linear jet, independently of the closed form.
pub fn rg_legendre_check(l: usize, s: f64, v: f64, z: C) -> Result<(C, C)> {
    let center = (z, z);
    let exponent = BiJet::var1(center, l).scale(I * 0.5 * s * (1.0 - v))
        + BiJet::var2(center, l).scale(I * 0.5 * s * (1.0 + v));
    let lhs = bracket_from_jet(&exponent.exp(), l)?;
    let rhs = (-I).powi(l as i32) * (I * z * s).exp() * s.powi(l as i32) * legendre(l, v);
    Ok((lhs, rhs))
}

/// Brute-force first bracket of `G`, `∂1 G − ∂2 G`, against `−i s v G` at the diagonal.
pub fn phase_oracle(s: f64, v: f64, z: C) -> (C, C) {
    let g = |a: C, b: C| (I * 0.5 * s * ((1.0 - v) * a + (1.0 + v) * b)).exp();
    // dG/dζ1 = i s (1−v)/2 G and dG/dζ2 = i s (1+v)/2 G by the chain rule
    let g0 = g(z, z);
    let d1 = I * 0.5 * s * (1.0 - v) * g0;
    let d2 = I * 0.5 * s * (1.0 + v) * g0;
    (d1 - d2, -I * s * v * g0)
}

/// `(c_ℓ(T F̃(h P_ℓ))(z), c_ℓ · ℱ_ℝ(h(s) s^{ℓ+1})(z))` with `c_ℓ = (−i)^ℓ / ((2ℓ+1) ℓ!)`.
pub fn diagram_check(h: &HalfLineProfile, l: usize, z: C) -> Result<(C, C)> {
    let f = FTilde::legendre(h.clone(), l);
    let lhs = bracket_from_jet(&f.jet((z, z), l)?, l)? / factorial(l);
    let rhs = c_ell(l) * fourier_laplace(&h.times_power(C::new(1.0, 0.0), l as i32 + 1), z)?;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::c;
    use crate::pde::eigen_residual;

    #[test]
    fn zeroth_order_closed_form() {
        let h = HalfLineProfile::exp_monomial(0, 1.0).unwrap();
        let w = c(0.3, 1.0);
        let want = 1.0 / (1.0 - I * w).powi(2);
        let got = ftilde(&h, 0, w, w).unwrap();
        assert!((got - want).norm() < 1e-12, "{got} vs {want}");
        // off the diagonal the transform of e^{−(x+y)} factorises
        let (a, b) = (c(0.3, 1.0), c(-0.2, 0.5));
        let want = 1.0 / ((1.0 - I * a) * (1.0 - I * b));
        let got = ftilde(&h, 0, a, b).unwrap();
        assert!((got - want).norm() < 1e-12, "{got} vs {want}");
        assert_eq!(ftilde(&HalfLineProfile::zero(), 2, a, b).unwrap(), C::default());
        assert!(ftilde(&h, 0, c(0.0, -1.0), b).is_err());
    }

    #[test]
    fn exp_lift_matches_tensor_rule() {
        let h = HalfLineProfile::exp_monomial(0, 1.5).unwrap();
        for l in 0..=3 {
            let fast = ExpLift::legendre(1.5, l).unwrap();
            let slow = FTilde::legendre(h.clone(), l);
            for center in [(c(0.3, 1.0), c(-0.2, 0.5)), (c(0.1, 0.8), c(0.1, 0.8))] {
                let (a, b) = (fast.jet(center, 3).unwrap(), slow.jet(center, 3).unwrap());
                let gap = (a - b.clone()).max_abs();
                assert!(gap < 1e-11 * b.max_abs().max(1.0), "ℓ={l}: {gap}");
            }
        }
        assert!(ExpLift::legendre(-1.0, 0).is_err());
        assert!(ExpLift::legendre(1.0, 0).unwrap().eval(c(0.0, -1.0), I).is_err());
    }

    #[test]
    fn bracket_of_g() {
        let (lhs, rhs) = rg_legendre_check(0, 1.3, 0.2, c(0.1, 1.0)).unwrap();
        assert!((lhs - rhs).norm() < 1e-15);
        let (s, v, z) = (1.7, -0.4, c(0.2, 0.8));
        let (brute, phase) = phase_oracle(s, v, z);
        assert!((brute - phase).norm() < 1e-15);
        let (lhs, rhs) = rg_legendre_check(1, s, v, z).unwrap();
        assert!((lhs - brute).norm() < 1e-14);
        assert!((lhs - rhs).norm() < 1e-14);
        let (lhs, rhs) = rg_legendre_check(2, 1.0, 0.3, I).unwrap();
        assert!((lhs - rhs).norm() < 1e-10 * rhs.norm());
    }

    #[test]
    fn lifted_legendre_is_an_eigenfunction() {
        let h = HalfLineProfile::exp_monomial(0, 1.0).unwrap();
        for l in 0..=3 {
            let f = FTilde::legendre(h.clone(), l).holo();
            let r = eigen_residual(&f, l, &[c(0.0, 1.0), c(0.5, 2.0)]).unwrap();
            assert!(r < 1e-7, "ℓ={l}: {r}");
        }
    }
}
