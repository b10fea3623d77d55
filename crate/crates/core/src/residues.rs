//! Numerical checks of the residue calculus behind the Euler identity: the
//! zeros `ξ_j` of the kernel, the family `H_{a,b}`, and the integrals `I_j`.
//!
//! Everything here is verification only and runs at the reduced quadrature
//! tolerance [`RESIDUE_TOL`].

use crate::contour::{boundary_distance, integrate_on_circle, integrate_on_torus_many, q_eval, Quadrature};
use crate::error::{Error, Result};
use crate::genop::{default_radius, t_series};
use crate::holo::{Holo2, UniFn};
use crate::numerics::{UniJet, C};

/// Quadrature tolerance for the residue checks.
pub const RESIDUE_TOL: f64 = 1e-9;

const START_NODES: usize = 64;
const MAX_NODES: usize = 4096;

/// Terms below this fraction of the quadrature scale count as cancellation noise.
const CANCELLATION_FLOOR: f64 = 1e-4;

/// Series order used by the `ϑ(ϑ + 1)` oracle in [`verify_i_identities`].
const SERIES_ORDER: usize = 16;

/// Which of the two kernel zeros.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    First,
    Second,
}

/// `ζ̃1 = ζ1 − z − t = ∂Q/∂ζ2`.
pub fn zeta1_tilde(z1: C, z: C, t: C) -> C {
    z1 - z - t
}

/// `ζ̃2 = ζ2 − z + t = ∂Q/∂ζ1`.
pub fn zeta2_tilde(z2: C, z: C, t: C) -> C {
    z2 - z + t
}

/// The zero of `Q` in one variable given the other: `ξ1(ζ2)` or `ξ2(ζ1)`.
pub fn xi(slot: Slot, other: C, z: C, t: C) -> Result<C> {
    let (num, den) = match slot {
        Slot::First => ((other - z) * z + t * other, zeta2_tilde(other, z, t)),
        Slot::Second => ((other - z) * z - t * other, zeta1_tilde(other, z, t)),
    };
    if den == C::from(0.0) {
        return Err(Error::Pole(format!("ξ is undefined: its denominator vanishes at {other}")));
    }
    Ok(num / den)
}

/// `H_{a,b}(ζ1, ζ2)` by its recurrence in `a` and `b`.
pub fn h_ab(a: usize, b: usize, z1: C, z2: C, z: C, t: C) -> Result<C> {
    let tilde = zeta2_tilde(z2, z, t);
    let shift = xi(Slot::First, z2, z, t)? - z;
    let q_over = q_eval(z1, z2, z, t) / tilde;
    let powers: Vec<C> = (0..=a).map(|i| shift.powi(i as i32)).collect();
    // table[i][j] = H_{i,j}
    let mut table = vec![vec![C::default(); b + 1]; a + 1];
    for j in 1..=b {
        let base = tilde * j as f64;
        table[0][j] = base;
        for i in 1..=a {
            let tail: C = (0..i).map(|k| powers[k] * table[i - 1 - k][j - 1]).sum();
            table[i][j] = powers[i] * base + q_over * tail;
        }
    }
    Ok(table[a][b])
}

/// `H_{a,1} = t^a (ζ2 − z)^a ζ̃2^{1−a}`.
pub fn h_a1_closed(a: usize, z2: C, z: C, t: C) -> C {
    let tilde = zeta2_tilde(z2, z, t);
    (t * (z2 - z)).powi(a as i32) * tilde.powi(1 - a as i32)
}

/// `H_{a,2} = t^{a−1} (ζ2 − z)^{a−1} ζ̃2^{1−a} (2t(ζ2 − z) + aQ)`.
pub fn h_a2_closed(a: usize, z1: C, z2: C, z: C, t: C) -> C {
    let tilde = zeta2_tilde(z2, z, t);
    let q = q_eval(z1, z2, z, t);
    (t * (z2 - z)).powi(a as i32 - 1) * tilde.powi(1 - a as i32) * (t * (z2 - z) * 2.0 + q * a as f64)
}

/// Largest relative gap between the recurrence and the closed forms for `b = 1, 2`, `a ≤ a_max`.
pub fn h_closed_form_defect(a_max: usize, z1: C, z2: C, z: C, t: C) -> Result<f64> {
    let mut worst = 0.0_f64;
    for a in 0..=a_max {
        let b1 = h_ab(a, 1, z1, z2, z, t)?;
        worst = worst.max(relative(b1, h_a1_closed(a, z2, z, t), 0.0));
        if a >= 1 {
            let b2 = h_ab(a, 2, z1, z2, z, t)?;
            worst = worst.max(relative(b2, h_a2_closed(a, z1, z2, z, t), 0.0));
        }
    }
    Ok(worst)
}

/// Largest relative defect among the algebraic identities relating `Q`, `ξ_j` and `ζ̃_j`.
pub fn algebraic_defect(z1: C, z2: C, z: C, t: C) -> Result<f64> {
    let q = q_eval(z1, z2, z, t);
    let (t1, t2) = (zeta1_tilde(z1, z, t), zeta2_tilde(z2, z, t));
    let x1 = xi(Slot::First, z2, z, t)?;
    let x2 = xi(Slot::Second, z1, z, t)?;
    let scale = q.norm().max(1.0);
    let pairs = [
        (q_eval(x1, z2, z, t), C::default()),
        (q_eval(z1, x2, z, t), C::default()),
        (q, t1 * t2 + t * t),
        (q, t2 * (z1 - x1)),
        (q, t1 * (z2 - x2)),
        (t1 * t2 * x1, (z + t) * q - t * t * z1),
        (t1 * t2 * x2, (z - t) * q - t * t * z2),
        (x1 - z2, -(z2 - z) * (z2 - z) / t2),
        (z1 - x1, q / t2),
        (x1 - z, t * (z2 - z) / t2),
        (x2 - z1, -(z1 - z) * (z1 - z) / t1),
        (z2 - x2, q / t1),
        (x2 - z, -t * (z1 - z) / t1),
    ];
    Ok(pairs.iter().map(|&(a, b)| relative(a, b, scale)).fold(0.0, f64::max))
}

fn relative(a: C, b: C, floor: f64) -> f64 {
    let den = b.norm().max(floor);
    if den == 0.0 {
        a.norm()
    } else {
        (a - b).norm() / den
    }
}

fn quadrature_gap(lhs: &Quadrature, rhs: &Quadrature) -> f64 {
    let floor = CANCELLATION_FLOOR * lhs.scale.max(rhs.scale);
    relative(lhs.value, rhs.value, floor.max(f64::MIN_POSITIVE))
}

fn derivative(f: &dyn UniFn, w: C) -> C {
    match f.eval_unijet(&UniJet::variable(w, 1)) {
        Some(jet) => jet.coeff(1),
        None => C::new(f64::NAN, 0.0),
    }
}

fn hab_radius(pole: C, other: C, z: C) -> Result<f64> {
    let r = (other - z).norm().max(2.0 * (pole - z).norm());
    if r == 0.0 || !r.is_finite() {
        return Err(Error::domain("the residue contour degenerates to a point"));
    }
    Ok(r)
}

/// Both sides of `∮ (ζ1 − z)^a Q^{-b} ∂F/∂ζ1 dζ1 = ∮ H_{a,b} Q^{-b-1} F dζ1`
/// on a circle about `z` enclosing `ξ1`, returned as a relative gap.
pub fn verify_hab_lemma(a: usize, b: usize, f: &dyn UniFn, z: C, t: C, z2: C) -> Result<f64> {
    let r = hab_radius(xi(Slot::First, z2, z, t)?, z2, z)?;
    let lhs = integrate_on_circle(
        &|w| (w - z).powi(a as i32) / q_eval(w, z2, z, t).powi(b as i32) * derivative(f, w),
        z,
        r,
        RESIDUE_TOL,
        START_NODES,
        MAX_NODES,
    )?;
    let h_of = |w: C| h_ab(a, b, w, z2, z, t).unwrap_or(C::new(f64::NAN, 0.0));
    let rhs = integrate_on_circle(
        &|w| h_of(w) / q_eval(w, z2, z, t).powi(b as i32 + 1) * f.eval(w),
        z,
        r,
        RESIDUE_TOL,
        START_NODES,
        MAX_NODES,
    )?;
    Ok(quadrature_gap(&lhs, &rhs))
}

/// The `ζ2` analogue of [`verify_hab_lemma`]: `H_{a,b}` with the variables
/// exchanged and `t ↦ −t`, integrated in `ζ2` for fixed `ζ1`.
pub fn verify_hab_lemma_mirror(a: usize, b: usize, f: &dyn UniFn, z: C, t: C, z1: C) -> Result<f64> {
    let r = hab_radius(xi(Slot::Second, z1, z, t)?, z1, z)?;
    let lhs = integrate_on_circle(
        &|w| (w - z).powi(a as i32) / q_eval(z1, w, z, t).powi(b as i32) * derivative(f, w),
        z,
        r,
        RESIDUE_TOL,
        START_NODES,
        MAX_NODES,
    )?;
    let h_of = |w: C| h_ab(a, b, w, z1, z, -t).unwrap_or(C::new(f64::NAN, 0.0));
    let rhs = integrate_on_circle(
        &|w| h_of(w) / q_eval(z1, w, z, t).powi(b as i32 + 1) * f.eval(w),
        z,
        r,
        RESIDUE_TOL,
        START_NODES,
        MAX_NODES,
    )?;
    Ok(quadrature_gap(&lhs, &rhs))
}

/// Per-identity gaps reported by [`i_identity_gaps`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityGaps {
    /// `I_j` from its derivative form against its kernel form against `f`.
    pub kernel_forms: [f64; 3],
    /// `I_1 + I_2 + I_3` against `T(Pf)` integrated directly.
    pub assembly: f64,
    /// `T(Pf)` against `−ϑ_t(ϑ_t + 1) T f` as a `Q^{-3}` integral.
    pub euler_kernel: f64,
    /// The same against the bracket series of `T f`.
    pub euler_series: f64,
}

impl IdentityGaps {
    pub fn max(&self) -> f64 {
        self.kernel_forms
            .iter()
            .copied()
            .chain([self.assembly, self.euler_kernel, self.euler_series])
            .fold(0.0, f64::max)
    }
}

/// All gaps behind `T(Pf) = I_1 + I_2 + I_3 = −ϑ_t(ϑ_t + 1) T f`.
///
/// Kernel forms against `f`, with `ε(1) = −1`, `ε(2) = 1`:
/// `I_j = −[(ζj − z)² Q + ε(j) 2t (ζ1 − z)(ζ2 − z) ζj] / Q³` and
/// `I_3 = [(ζ1 − z)² + (ζ2 − z)²] / Q²`.
pub fn i_identity_gaps(f: &Holo2, z: C, t: C) -> Result<IdentityGaps> {
    let dist = boundary_distance(f.domain(), z)?;
    if 2.0 * t.norm() >= dist {
        return Err(Error::domain(format!("(z, t) = ({z}, {t}) is not admissible: 2|t| ≥ {dist}")));
    }
    let r = default_radius(dist, t);
    let jet_derivs = |a: C, b: C| -> Option<[C; 4]> {
        let jet = f.jet_about((a, b), 2).ok()?;
        Some([jet.coeff(0, 0), jet.coeff(1, 0), jet.coeff(0, 1), jet.coeff(1, 1)])
    };
    let poly_derivs = f.as_poly().map(|p| (p.clone(), p.d1(), p.d2(), p.d1().d2()));
    let integrand = |a: C, b: C, out: &mut [C]| {
        let vals = match &poly_derivs {
            Some((p, p1, p2, p12)) => Some([p.eval(a, b), p1.eval(a, b), p2.eval(a, b), p12.eval(a, b)]),
            None => jet_derivs(a, b),
        };
        let Some([v, d1, d2, d12]) = vals else {
            out.fill(C::new(f64::NAN, 0.0));
            return;
        };
        let q = q_eval(a, b, z, t);
        let (u1, u2) = (a - z, b - z);
        let cross = t * u1 * u2 * 2.0;
        let q3 = q * q * q;
        out[0] = (a * a - a * b) / q * d12;
        out[1] = (b * b - a * b) / q * d12;
        out[2] = -(a - b) * (d1 - d2) / q;
        out[3] = -(u1 * u1 * q - cross * a) / q3 * v;
        out[4] = -(u2 * u2 * q + cross * b) / q3 * v;
        out[5] = (u1 * u1 + u2 * u2) / (q * q) * v;
        let pf = (a - b) * (a - b) * d12 - (a - b) * (d1 - d2);
        out[6] = pf / q;
        out[7] = cross * (a - b) / q3 * v;
    };
    let qs = integrate_on_torus_many(&integrand, 8, z, r, RESIDUE_TOL, START_NODES, MAX_NODES)?;
    let sum_of = |idx: [usize; 3]| Quadrature {
        value: idx.iter().map(|&i| qs[i].value).sum(),
        err_estimate: idx.iter().map(|&i| qs[i].err_estimate).sum(),
        scale: idx.iter().map(|&i| qs[i].scale).fold(0.0, f64::max),
        nodes: qs[0].nodes,
    };
    let definitions = sum_of([0, 1, 2]);
    let series = t_series(f, z, SERIES_ORDER)?;
    let euler: C = series
        .coeffs
        .iter()
        .enumerate()
        .map(|(l, c)| -c * (l * (l + 1)) as f64 * t.powi(l as i32))
        .sum();
    let series_quad = Quadrature {
        value: euler,
        err_estimate: 0.0,
        scale: euler.norm(),
        nodes: 0,
    };
    Ok(IdentityGaps {
        kernel_forms: [
            quadrature_gap(&qs[0], &qs[3]),
            quadrature_gap(&qs[1], &qs[4]),
            quadrature_gap(&qs[2], &qs[5]),
        ],
        assembly: quadrature_gap(&definitions, &qs[6]),
        euler_kernel: quadrature_gap(&qs[6], &qs[7]),
        euler_series: quadrature_gap(&qs[6], &series_quad),
    })
}

/// Largest gap from [`i_identity_gaps`].
pub fn verify_i_identities(f: &Holo2, z: C, t: C) -> Result<f64> {
    i_identity_gaps(f, z, t).map(|g| g.max())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contour::DomainDesc;
    use crate::holo::ExpFn;
    use crate::numerics::{c, BiPoly, UniPoly};
    use crate::pde::EigenFamily;

    fn sample() -> (C, C, C, C) {
        (c(0.7, -0.3), c(-0.4, 0.9), c(0.1, 0.2), c(0.15, -0.05))
    }

    #[test]
    fn xi_is_a_zero_of_the_kernel() {
        let (z1, z2, z, t) = sample();
        assert!((xi(Slot::First, z2, z, C::default()).unwrap() - z).norm() < 1e-15);
        assert!(algebraic_defect(z1, z2, z, t).unwrap() < 1e-14);
        assert!(matches!(xi(Slot::First, C::default(), t, t), Err(Error::Pole(_))));
    }

    #[test]
    fn first_members_of_h() {
        let (z1, z2, z, t) = sample();
        assert_eq!(h_ab(3, 0, z1, z2, z, t).unwrap(), C::default());
        assert!((h_ab(1, 1, z1, z2, z, t).unwrap() - t * (z2 - z)).norm() < 1e-15);
        let expected = t * (z2 - z) * 2.0 + q_eval(z1, z2, z, t);
        assert!((h_ab(1, 2, z1, z2, z, t).unwrap() - expected).norm() < 1e-15);
        assert!(h_closed_form_defect(5, z1, z2, z, t).unwrap() < 1e-13);
    }

    #[test]
    fn lemma_on_elementary_inputs() {
        let (_, z2, z, t) = sample();
        let constant = UniPoly::new(vec![c(2.0, 1.0)]);
        assert!(verify_hab_lemma(1, 2, &constant, z, t, z2).unwrap() < 1e-10);
        let square = UniPoly::monomial(2, c(1.0, 0.0));
        assert!(verify_hab_lemma(0, 1, &square, z, t, z2).unwrap() < 1e-10);
        let exp = ExpFn { amplitude: c(1.0, 0.0), rate: c(1.0, 0.0) };
        assert!(verify_hab_lemma(2, 2, &exp, z, t, z2).unwrap() < 1e-8);
    }

    #[test]
    fn lemma_and_mirror_for_small_indices() {
        let (z1, z2, z, t) = sample();
        let exp = ExpFn { amplitude: c(1.0, 0.0), rate: c(0.5, 0.5) };
        for a in 0..=3 {
            for b in 0..=3 {
                assert!(verify_hab_lemma(a, b, &exp, z, t, z2).unwrap() < 1e-8, "({a}, {b})");
                assert!(verify_hab_lemma_mirror(a, b, &exp, z, t, z1).unwrap() < 1e-8, "mirror ({a}, {b})");
            }
        }
    }

    #[test]
    fn identities_on_test_functions() {
        let plane = DomainDesc::EntirePlane;
        let one = Holo2::constant(plane, c(1.0, 0.0));
        assert!(verify_i_identities(&one, c(0.3, 0.1), c(0.1, 0.0)).unwrap() < 1e-9);
        let product = Holo2::polynomial(plane, BiPoly::monomial(1, 1, c(1.0, 0.0)));
        assert!(verify_i_identities(&product, c(0.0, 0.0), c(0.1, 0.0)).unwrap() < 1e-9);
        let f1 = EigenFamily { l: 1 }.holo();
        let gaps = i_identity_gaps(&f1, c(0.0, 2.0), c(0.2, 0.0)).unwrap();
        assert!(gaps.max() < 1e-8, "{gaps:?}");
    }
}
