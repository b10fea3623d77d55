//! The holographic transform
//! `Ψ_ℓ g(ζ1, ζ2) = (ζ1−ζ2)^ℓ ∫_{−1}^{1} g(((ζ2−ζ1)v + ζ1 + ζ2)/2) (1−v²)^ℓ dv`.

use std::sync::Arc;

use crate::contour::DomainDesc;
use crate::error::{Error, Result};
use crate::genop::{t_coeffs_quadrature, t_series, QuadOptions};
use crate::holo::{BivariateFn, Holo2, UniFn};
use crate::numerics::gauss::legendre_rule;
use crate::numerics::{binomial, factorial, Analytic, BiJet, BiPoly, UniPoly, C};
use crate::pde::eigen_residual;

/// Node cap for non-polynomial `g`.
pub const PSI_MAX_NODES: usize = 512;
const PSI_START_NODES: usize = 16;
const PSI_REL_STOP: f64 = 1e-12;

/// `2^{2ℓ+1} / (2ℓ+1)`.
pub fn inversion_constant(l: usize) -> f64 {
    2f64.powi(2 * l as i32 + 1) / (2 * l + 1) as f64
}

/// Gauss–Legendre nodes needed for exactness on `g` of degree `deg`.
pub fn exact_nodes(deg: usize, l: usize) -> usize {
    (deg + 2 * l + 1).div_ceil(2).max(1)
}

/// Segment point `((ζ2−ζ1)v + ζ1 + ζ2)/2`, generic so it also runs on jets.
fn segment_point<A: Analytic>(z1: &A, z2: &A, v: f64) -> A {
    z1.scale(C::new(0.5 * (1.0 - v), 0.0)) + z2.scale(C::new(0.5 * (1.0 + v), 0.0))
}

fn weighted_sum(g: &dyn UniFn, l: usize, z1: C, z2: C, nodes: usize) -> C {
    let rule = legendre_rule(nodes);
    let mut acc = C::default();
    for (&v, &w) in rule.nodes.iter().zip(&rule.weights) {
        acc += g.eval(segment_point(&z1, &z2, v)) * (w * (1.0 - v * v).powi(l as i32));
    }
    acc * (z1 - z2).powi(l as i32)
}

fn check_segment(domain: &DomainDesc, z1: C, z2: C) -> Result<()> {
    if !domain.contains_segment(z1, z2) {
        return Err(Error::domain(format!("segment [{z1}, {z2}] leaves {domain:?}")));
    }
    Ok(())
}

/// `Ψ_ℓ g(ζ1, ζ2)`: exact Gauss–Legendre for polynomial `g`, node doubling otherwise.
pub fn psi(g: &dyn UniFn, l: usize, z1: C, z2: C, domain: &DomainDesc) -> Result<C> {
    check_segment(domain, z1, z2)?;
    if let Some(p) = g.as_poly() {
        return Ok(weighted_sum(g, l, z1, z2, exact_nodes(p.degree(), l)));
    }
    psi_adaptive(g, l, z1, z2)
}

fn psi_adaptive(g: &dyn UniFn, l: usize, z1: C, z2: C) -> Result<C> {
    let mut nodes = PSI_START_NODES;
    let mut prev = weighted_sum(g, l, z1, z2, nodes);
    while nodes < PSI_MAX_NODES {
        nodes *= 2;
        let next = weighted_sum(g, l, z1, z2, nodes);
        if (next - prev).norm() <= PSI_REL_STOP * next.norm() || next == prev {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Accuracy {
        best: prev,
        err: f64::NAN,
        tol: PSI_REL_STOP,
    })
}

/// Exact coefficients of `Ψ_ℓ g` for polynomial `g`.
///
/// With `a = (1−v)/2`, `b = (1+v)/2` one has `1 − v² = 4ab` and
/// `∫ a^{p} b^{q} dv = 2 p! q! / (p+q+1)!`.
pub fn psi_polynomial(g: &UniPoly, l: usize) -> BiPoly {
    let mut terms = Vec::new();
    for (k, gk) in g.coeffs().iter().enumerate() {
        if *gk == C::default() {
            continue;
        }
        for i in 0..=k {
            let (p, q) = (i + l, k - i + l);
            let moment = 2.0 * 4f64.powi(l as i32) * factorial(p) * factorial(q) / factorial(p + q + 1);
            terms.push((i, k - i, gk * binomial(k, i) * moment));
        }
    }
    BiPoly::from_terms(terms) * BiPoly::difference().pow(l)
}

struct PsiFn {
    g: Arc<dyn UniFn>,
    l: usize,
}

impl PsiFn {
    fn jet_with_nodes(&self, center: (C, C), order: usize, nodes: usize) -> Option<BiJet> {
        let x = BiJet::var1(center, order);
        let y = BiJet::var2(center, order);
        let rule = legendre_rule(nodes);
        let mut acc = BiJet::zeros(center, order);
        for (&v, &w) in rule.nodes.iter().zip(&rule.weights) {
            let gv = self.g.eval_bijet(&segment_point(&x, &y, v))?;
            acc = acc + gv.scale(C::new(w * (1.0 - v * v).powi(self.l as i32), 0.0));
        }
        Some((x - y).powi(self.l as i32) * acc)
    }
}

impl BivariateFn for PsiFn {
    fn eval(&self, z1: C, z2: C) -> C {
        psi_adaptive(self.g.as_ref(), self.l, z1, z2).unwrap_or_else(|e| match e {
            Error::Accuracy { best, .. } => best,
            _ => C::new(f64::NAN, f64::NAN),
        })
    }

    fn jet_at(&self, center: (C, C), order: usize) -> Option<Result<BiJet>> {
        let mut nodes = PSI_START_NODES.max(order + self.l + 1);
        let mut prev = self.jet_with_nodes(center, order, nodes)?;
        while nodes < PSI_MAX_NODES {
            nodes *= 2;
            let next = self.jet_with_nodes(center, order, nodes)?;
            let diff = (next.clone() - prev).max_abs();
            if diff <= PSI_REL_STOP * next.max_abs() {
                return Some(Ok(next));
            }
            prev = next;
        }
        Some(Err(Error::numeric("holographic jet did not stabilise")))
    }

    fn describe(&self) -> String {
        format!("Ψ_{} of a univariate function", self.l)
    }
}

/// `Ψ_ℓ g` as a function on `domain × domain`; polynomial `g` gives a polynomial.
pub fn psi_holo(g: Arc<dyn UniFn>, l: usize, domain: DomainDesc) -> Holo2 {
    if let Some(p) = g.as_poly() {
        return Holo2::polynomial(domain, psi_polynomial(p, l));
    }
    Holo2::new(domain, Arc::new(PsiFn { g, l }))
}

fn check_nonzero(gz: C, z: C) -> Result<()> {
    if gz.norm() < 1e-300 {
        return Err(Error::domain(format!("g vanishes at the evaluation point {z}; choose another point")));
    }
    Ok(())
}

/// `c_ℓ(T Ψ_ℓ g)(z) / g(z)`, which should equal [`inversion_constant`].
pub fn inversion_check(g: &UniPoly, l: usize, z: C) -> Result<C> {
    let gz = g.eval(z);
    check_nonzero(gz, z)?;
    let f = psi_holo(Arc::new(g.clone()), l, DomainDesc::EntirePlane);
    Ok(t_series(&f, z, l)?.coeffs[l] / gz)
}

/// [`inversion_check`] with the coefficient taken by contour quadrature.
pub fn inversion_check_quadrature(g: &UniPoly, l: usize, z: C, opts: &QuadOptions) -> Result<C> {
    let gz = g.eval(z);
    check_nonzero(gz, z)?;
    let f = psi_holo(Arc::new(g.clone()), l, DomainDesc::EntirePlane);
    Ok(t_coeffs_quadrature(&f, z, l, opts)?[l].value / gz)
}

/// Eigen-residual of `Ψ_ℓ g` at eigenvalue `−ℓ(ℓ+1)`.
pub fn psi_eigen_check(g: Arc<dyn UniFn>, l: usize, samples: &[C], domain: DomainDesc) -> Result<f64> {
    eigen_residual(&psi_holo(g, l, domain), l, samples)
}
