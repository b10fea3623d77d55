//! Rankin–Cohen brackets `R_ℓ f(z) = Σ_j (−1)^j C(ℓ,j)² ∂^ℓ f / ∂ζ1^{ℓ−j} ∂ζ2^j (z, z)`.

use crate::error::{Error, Result};
use crate::holo::Holo2;
use crate::numerics::{binomial, factorial, BiJet, UniJet, C};

/// Largest bracket order accepted; partial derivatives stay exact-scaled in
/// double precision up to here.
pub const MAX_BRACKET_ORDER: usize = 24;

/// `Σ_j C(ℓ, j)² = C(2ℓ, ℓ)`, summed in integers.
pub fn binom_sq_sum(l: usize) -> Result<u64> {
    if l > 30 {
        return Err(Error::Range(format!("binom_sq_sum({l}) exceeds the exact 64-bit range (ℓ ≤ 30)")));
    }
    let mut row: u128 = 1;
    let mut total: u128 = 0;
    for j in 0..=l {
        total += row * row;
        row = row * (l - j) as u128 / (j + 1) as u128;
    }
    u64::try_from(total).map_err(|_| Error::Range(format!("C(2·{l}, {l}) overflows u64")))
}

fn check_order(l: usize) -> Result<()> {
    if l > MAX_BRACKET_ORDER {
        return Err(Error::Truncation {
            requested: l,
            available: MAX_BRACKET_ORDER,
        });
    }
    Ok(())
}

/// `R_ℓ` read off a jet about a diagonal point.
pub fn bracket_from_jet(jet: &BiJet, l: usize) -> Result<C> {
    check_order(l)?;
    let mut acc = C::default();
    for j in 0..=l {
        let weight = binomial(l, j).powi(2);
        let term = jet.partial(l - j, j)? * weight;
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// `R_ℓ` of the product `f1(ζ1) f2(ζ2)` from univariate jets of each factor.
pub fn bracket_from_unijets(f1: &UniJet, f2: &UniJet, l: usize) -> Result<C> {
    check_order(l)?;
    let available = f1.order().min(f2.order());
    let mut acc = C::default();
    for j in 0..=l {
        let (a, b) = match (f1.derivative(l - j), f2.derivative(j)) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(Error::Truncation {
                    requested: l,
                    available,
                })
            }
        };
        let term = a * b * binomial(l, j).powi(2);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// `R_ℓ f(z)`.
pub fn rc_bracket(f: &Holo2, l: usize, z: C) -> Result<C> {
    check_order(l)?;
    if let Some((f1, f2)) = f.separable_parts() {
        let jets = (
            f1.eval_unijet(&UniJet::variable(z, l)),
            f2.eval_unijet(&UniJet::variable(z, l)),
        );
        if let (Some(a), Some(b)) = jets {
            if !f.domain().contains(z) {
                return Err(Error::domain(format!("point {z} lies outside {:?}", f.domain())));
            }
            return bracket_from_unijets(&a, &b, l);
        }
    }
    bracket_from_jet(&f.jet(z, l)?, l)
}

/// `R_ℓ f(z) / ℓ!`, the `t^ℓ` coefficient of `T f(z, t)`.
pub fn rc_bracket_normalized(f: &Holo2, l: usize, z: C) -> Result<C> {
    Ok(rc_bracket(f, l, z)? / factorial(l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contour::DomainDesc;
    use crate::numerics::{c, BiPoly, UniPoly};
    use std::sync::Arc;

    #[test]
    fn central_binomials() {
        assert_eq!(binom_sq_sum(0).unwrap(), 1);
        assert_eq!(binom_sq_sum(1).unwrap(), 2);
        // 1 + 25 + 100 + 100 + 25 + 1
        assert_eq!(binom_sq_sum(5).unwrap(), 252);
        assert_eq!(binom_sq_sum(30).unwrap(), 118_264_581_564_861_424);
        assert!(matches!(binom_sq_sum(31), Err(Error::Range(_))));
    }

    #[test]
    fn order_zero_is_diagonal_restriction() {
        let p = BiPoly::from_terms([(2, 1, c(1.0, 1.0)), (0, 0, c(3.0, 0.0))]);
        let f = Holo2::polynomial(DomainDesc::EntirePlane, p.clone());
        let z = c(0.4, -0.7);
        assert!((rc_bracket(&f, 0, z).unwrap() - p.eval(z, z)).norm() < 1e-15);
    }

    #[test]
    fn separable_first_bracket() {
        let f1 = Arc::new(UniPoly::monomial(2, c(1.0, 0.0)));
        let f2 = Arc::new(UniPoly::monomial(1, c(1.0, 0.0)));
        let f = Holo2::separable(DomainDesc::EntirePlane, f1, f2);
        let z = c(1.5, 0.5);
        assert!((rc_bracket(&f, 1, z).unwrap() - z * z).norm() < 1e-14);
        // the bivariate route agrees
        let bivariate = bracket_from_jet(&f.jet(z, 1).unwrap(), 1).unwrap();
        assert!((bivariate - z * z).norm() < 1e-14);
    }

    #[test]
    fn difference_power_bracket() {
        for l in 0..=10 {
            let f = Holo2::polynomial(DomainDesc::EntirePlane, BiPoly::difference().pow(l));
            let want = factorial(2 * l) / factorial(l);
            let got = rc_bracket(&f, l, c(0.3, 0.2)).unwrap();
            assert!((got - want).norm() <= 1e-12 * want, "ℓ={l}: {got} vs {want}");
        }
    }

    #[test]
    fn order_beyond_cap_is_truncation() {
        let f = Holo2::constant(DomainDesc::EntirePlane, c(1.0, 0.0));
        assert!(matches!(rc_bracket(&f, MAX_BRACKET_ORDER + 1, C::default()), Err(Error::Truncation { .. })));
    }
}
