//! Holomorphic functions of two variables on `D × D`.

use std::fmt;
use std::sync::Arc;

use crate::contour::{boundary_distance, DomainDesc};
use crate::error::{Error, Result};
use crate::numerics::{bijet_cauchy, is_finite, Analytic, BiJet, BiPoly, UniJet, UniPoly, C};

/// Nodes per circle for Cauchy-integral jet extraction.
pub const CAUCHY_JET_NODES: usize = 64;

/// A bivariate evaluator. Implementors that know their derivatives exactly
/// override [`BivariateFn::jet_at`].
pub trait BivariateFn: Send + Sync {
    fn eval(&self, z1: C, z2: C) -> C;

    /// Taylor jet about `center`, or `None` to request numeric extraction.
    fn jet_at(&self, _center: (C, C), _order: usize) -> Option<Result<BiJet>> {
        None
    }

    /// Short description for reports and `Debug`.
    fn describe(&self) -> String {
        "callback".into()
    }
}

/// A univariate holomorphic evaluator.
pub trait UniFn: Send + Sync {
    fn eval(&self, w: C) -> C;

    fn eval_unijet(&self, w: &UniJet) -> Option<UniJet>;

    fn eval_bijet(&self, w: &BiJet) -> Option<BiJet>;

    fn as_poly(&self) -> Option<&UniPoly> {
        None
    }
}

impl UniFn for UniPoly {
    fn eval(&self, w: C) -> C {
        UniPoly::eval(self, w)
    }

    fn eval_unijet(&self, w: &UniJet) -> Option<UniJet> {
        Some(self.eval_generic(w))
    }

    fn eval_bijet(&self, w: &BiJet) -> Option<BiJet> {
        Some(self.eval_generic(w))
    }

    fn as_poly(&self) -> Option<&UniPoly> {
        Some(self)
    }
}

/// `w ↦ amplitude · e^{rate · w}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpFn {
    pub amplitude: C,
    pub rate: C,
}

impl ExpFn {
    fn formula<A: Analytic>(&self, w: &A) -> A {
        w.scale(self.rate).exp().scale(self.amplitude)
    }
}

impl UniFn for ExpFn {
    fn eval(&self, w: C) -> C {
        self.formula(&w)
    }

    fn eval_unijet(&self, w: &UniJet) -> Option<UniJet> {
        Some(self.formula(w))
    }

    fn eval_bijet(&self, w: &BiJet) -> Option<BiJet> {
        Some(self.formula(w))
    }
}

struct Closure<F>(F);

impl<F: Fn(C, C) -> C + Send + Sync> BivariateFn for Closure<F> {
    fn eval(&self, z1: C, z2: C) -> C {
        (self.0)(z1, z2)
    }
}

struct PolyFn(BiPoly);

impl BivariateFn for PolyFn {
    fn eval(&self, z1: C, z2: C) -> C {
        self.0.eval(z1, z2)
    }

    fn jet_at(&self, center: (C, C), order: usize) -> Option<Result<BiJet>> {
        Some(Ok(self.0.taylor_jet(center, order)))
    }

    fn describe(&self) -> String {
        format!("polynomial of total degree {}", self.0.total_degree())
    }
}

struct SeparableFn(Arc<dyn UniFn>, Arc<dyn UniFn>);

impl BivariateFn for SeparableFn {
    fn eval(&self, z1: C, z2: C) -> C {
        self.0.eval(z1) * self.1.eval(z2)
    }

    fn jet_at(&self, center: (C, C), order: usize) -> Option<Result<BiJet>> {
        let a = self.0.eval_unijet(&UniJet::variable(center.0, order))?;
        let b = self.1.eval_unijet(&UniJet::variable(center.1, order))?;
        Some(Ok(BiJet::from_coeffs(center, order, |i, j| a.coeff(i) * b.coeff(j))))
    }

    fn describe(&self) -> String {
        "separable product".into()
    }
}

struct Combination(Vec<(C, Holo2)>);

impl BivariateFn for Combination {
    fn eval(&self, z1: C, z2: C) -> C {
        self.0.iter().map(|(a, f)| a * f.value(z1, z2)).sum()
    }

    fn jet_at(&self, center: (C, C), order: usize) -> Option<Result<BiJet>> {
        let mut acc = BiJet::zeros(center, order);
        for (a, f) in &self.0 {
            match f.jet_about(center, order) {
                Ok(jet) => acc = acc + jet.scale(*a),
                Err(e) => return Some(Err(e)),
            }
        }
        Some(Ok(acc))
    }

    fn describe(&self) -> String {
        format!("linear combination of {} terms", self.0.len())
    }
}

/// A holomorphic function on `D × D` together with its domain.
///
/// Jets come from, in order of preference: the polynomial table, the
/// evaluator's own exact jets, or Cauchy-integral extraction on circles of a
/// quarter of the boundary distance.
#[derive(Clone)]
pub struct Holo2 {
    domain: DomainDesc,
    func: Arc<dyn BivariateFn>,
    separable: Option<(Arc<dyn UniFn>, Arc<dyn UniFn>)>,
    poly: Option<BiPoly>,
}

impl fmt::Debug for Holo2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Holo2")
            .field("domain", &self.domain)
            .field("func", &self.func.describe())
            .field("separable", &self.separable.is_some())
            .finish()
    }
}

impl Holo2 {
    pub fn new(domain: DomainDesc, func: Arc<dyn BivariateFn>) -> Self {
        Self {
            domain,
            func,
            separable: None,
            poly: None,
        }
    }

    pub fn from_closure(domain: DomainDesc, f: impl Fn(C, C) -> C + Send + Sync + 'static) -> Self {
        Self::new(domain, Arc::new(Closure(f)))
    }

    pub fn polynomial(domain: DomainDesc, p: BiPoly) -> Self {
        Self {
            domain,
            func: Arc::new(PolyFn(p.clone())),
            separable: None,
            poly: Some(p),
        }
    }

    pub fn constant(domain: DomainDesc, value: C) -> Self {
        Self::polynomial(domain, BiPoly::constant(value))
    }

    pub fn separable(domain: DomainDesc, f1: Arc<dyn UniFn>, f2: Arc<dyn UniFn>) -> Self {
        let poly = match (f1.as_poly(), f2.as_poly()) {
            (Some(p1), Some(p2)) => Some(BiPoly::from_terms(p1.coeffs().iter().enumerate().flat_map(
                |(i, a)| p2.coeffs().iter().enumerate().map(move |(j, b)| (i, j, a * b)),
            ))),
            _ => None,
        };
        Self {
            domain,
            func: Arc::new(SeparableFn(f1.clone(), f2.clone())),
            separable: Some((f1, f2)),
            poly,
        }
    }

    /// `Σ a_k f_k`, all on `domain`.
    pub fn linear_combination(domain: DomainDesc, terms: Vec<(C, Holo2)>) -> Self {
        if terms.iter().all(|(_, f)| f.poly.is_some()) {
            let p = terms.iter().fold(BiPoly::zero(), |acc, (a, f)| {
                acc + f.poly.as_ref().expect("checked above").scale(*a)
            });
            return Self::polynomial(domain, p);
        }
        Self::new(domain, Arc::new(Combination(terms)))
    }

    pub fn domain(&self) -> &DomainDesc {
        &self.domain
    }

    pub fn as_poly(&self) -> Option<&BiPoly> {
        self.poly.as_ref()
    }

    pub fn separable_parts(&self) -> Option<(&Arc<dyn UniFn>, &Arc<dyn UniFn>)> {
        self.separable.as_ref().map(|(a, b)| (a, b))
    }

    pub fn describe(&self) -> String {
        self.func.describe()
    }

    /// Unchecked evaluation, used at quadrature nodes already known to lie in `D × D`.
    #[inline]
    pub fn value(&self, z1: C, z2: C) -> C {
        self.func.eval(z1, z2)
    }

    pub fn eval(&self, z1: C, z2: C) -> Result<C> {
        for z in [z1, z2] {
            if !self.domain.contains(z) {
                return Err(Error::domain(format!("point {z} lies outside {:?}", self.domain)));
            }
        }
        let v = self.value(z1, z2);
        if !is_finite(v) {
            return Err(Error::Numeric {
                what: "non-finite function value".into(),
                at: Some((z1, z2)),
            });
        }
        Ok(v)
    }

    /// Jet about the diagonal point `(z, z)`.
    pub fn jet(&self, z: C, order: usize) -> Result<BiJet> {
        self.jet_about((z, z), order)
    }

    /// Jet about an arbitrary point of `D × D`.
    pub fn jet_about(&self, center: (C, C), order: usize) -> Result<BiJet> {
        let dist = boundary_distance(&self.domain, center.0)?.min(boundary_distance(&self.domain, center.1)?);
        let jet = match (&self.poly, self.func.jet_at(center, order)) {
            (Some(p), _) => p.taylor_jet(center, order),
            (None, Some(jet)) => jet?,
            (None, None) => {
                let radius = if dist.is_finite() { 0.25 * dist } else { 1.0 };
                let nodes = CAUCHY_JET_NODES.max(2 * order + 2);
                bijet_cauchy(&|a, b| self.value(a, b), center, order, radius, nodes)?
            }
        };
        if !jet.is_finite() {
            return Err(Error::Numeric {
                what: "non-finite jet coefficient".into(),
                at: Some(center),
            });
        }
        Ok(jet)
    }

    /// Largest mismatch between the evaluator and the separable pair on `samples`.
    pub fn separable_mismatch(&self, samples: &[(C, C)]) -> Option<f64> {
        let (f1, f2) = self.separable.as_ref()?;
        Some(
            samples
                .iter()
                .map(|&(a, b)| (self.value(a, b) - f1.eval(a) * f2.eval(b)).norm())
                .fold(0.0, f64::max),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::c;

    #[test]
    fn constant_and_monomial_jets() {
        let one = Holo2::constant(DomainDesc::EntirePlane, c(1.0, 0.0));
        let jet = one.jet(C::default(), 2).unwrap();
        assert_eq!(jet.coeff(0, 0), c(1.0, 0.0));
        assert_eq!(jet.max_abs(), 1.0);

        let prod = Holo2::polynomial(DomainDesc::EntirePlane, BiPoly::monomial(1, 1, c(1.0, 0.0)));
        let jet = prod.jet(C::default(), 2).unwrap();
        for k in 0..=2 {
            for j in 0..=k {
                let want = if (k - j, j) == (1, 1) { 1.0 } else { 0.0 };
                assert_eq!(jet.coeff(k - j, j), c(want, 0.0));
            }
        }
    }

    #[test]
    fn closure_jet_matches_polynomial_table() {
        let p = BiPoly::from_terms([(3, 1, c(0.5, -1.0)), (0, 2, c(2.0, 0.0)), (1, 0, c(0.0, 1.0))]);
        let exact = p.taylor_jet((c(0.2, 0.1), c(0.2, 0.1)), 5);
        let q = p.clone();
        let f = Holo2::from_closure(DomainDesc::disk(C::default(), 2.0).unwrap(), move |a, b| q.eval(a, b));
        let numeric = f.jet(c(0.2, 0.1), 5).unwrap();
        for k in 0..=5 {
            for j in 0..=k {
                assert!((numeric.coeff(k - j, j) - exact.coeff(k - j, j)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn separable_jets_and_table() {
        let f1 = Arc::new(UniPoly::new(vec![C::default(), C::default(), c(1.0, 0.0)]));
        let f2 = Arc::new(ExpFn {
            amplitude: c(1.0, 0.0),
            rate: c(0.0, 1.0),
        });
        let f = Holo2::separable(DomainDesc::EntirePlane, f1, f2);
        let z = c(0.3, 0.4);
        let jet = f.jet(z, 4).unwrap();
        // c_{1,2} = (2z) · (i²/2) e^{iz}
        let want = 2.0 * z * (-0.5) * (C::new(0.0, 1.0) * z).exp();
        assert!((jet.coeff(1, 2) - want).norm() < 1e-14);
        assert!(f.separable_mismatch(&[(z, c(1.0, 2.0))]).unwrap() < 1e-15);
    }

    #[test]
    fn evaluation_outside_domain_is_rejected() {
        let f = Holo2::constant(DomainDesc::UpperHalfPlane, c(1.0, 0.0));
        assert!(matches!(f.eval(c(0.0, -1.0), c(0.0, 1.0)), Err(Error::Domain(_))));
        assert!(matches!(f.jet(c(0.0, -1.0), 2), Err(Error::Domain(_))));
    }

    #[test]
    fn combinations_of_polynomials_stay_polynomial() {
        let d = DomainDesc::EntirePlane;
        let f = Holo2::linear_combination(
            d,
            vec![
                (c(2.0, 0.0), Holo2::polynomial(d, BiPoly::monomial(1, 0, c(1.0, 0.0)))),
                (c(-1.0, 0.0), Holo2::polynomial(d, BiPoly::monomial(0, 1, c(1.0, 0.0)))),
            ],
        );
        assert!(f.as_poly().is_some());
        assert_eq!(f.value(c(1.0, 0.0), c(3.0, 0.0)), c(-1.0, 0.0));
    }
}
