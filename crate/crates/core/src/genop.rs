//! The generating operator `T`: contour quadrature, series coefficients, and
//! a finite-rank injectivity certificate.

use nalgebra::DMatrix;

use crate::brackets::rc_bracket_normalized;
use crate::contour::{admissible, boundary_distance, integrate_on_torus, integrate_on_torus_many, q_eval, DomainDesc, Quadrature};
use crate::error::{Error, Result};
use crate::holo::Holo2;
use crate::numerics::{binomial, BiPoly, C};

/// Quadrature controls shared by the `T` evaluators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub tol: f64,
    pub start_nodes: usize,
    pub max_nodes: usize,
    /// Overrides the default contour radius.
    pub radius: Option<f64>,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            start_nodes: 64,
            max_nodes: 4096,
            radius: None,
        }
    }
}

impl QuadOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }
}

/// A value of `T f(z, t)` with its quadrature diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TEval {
    pub value: C,
    pub err_estimate: f64,
    pub contour_radius: f64,
    pub nodes: usize,
}

/// Runtime guard: `|Q|` at every node must exceed this multiple of `r²`.
const Q_GUARD: f64 = 1e-8;

/// Default radius of the two equal circles about `z` for parameter `t`.
///
/// `min(4|t| + 0.1 d, 0.9 d)`; when that fails `2|t| < r` the midpoint
/// between `2|t|` and `d` is used. On the plane (`d = ∞`) it is `4|t| + 1`.
pub fn default_radius(dist: f64, t: C) -> f64 {
    let tn = t.norm();
    if !dist.is_finite() {
        return 4.0 * tn + 1.0;
    }
    let r = (4.0 * tn + 0.1 * dist).min(0.9 * dist);
    if 2.0 * tn < r {
        r
    } else {
        0.5 * (2.0 * tn + dist)
    }
}

/// `T f(z, 0) = f(z, z)`, without quadrature.
pub fn t_eval_at_zero(f: &Holo2, z: C) -> Result<C> {
    f.eval(z, z)
}

/// `T f(z, t)` by the product trapezoid rule with default options at tolerance `tol`.
pub fn t_eval_quadrature(f: &Holo2, z: C, t: C, tol: f64) -> Result<TEval> {
    t_eval_quadrature_with(f, z, t, &QuadOptions::with_tol(tol))
}

pub fn t_eval_quadrature_with(f: &Holo2, z: C, t: C, opts: &QuadOptions) -> Result<TEval> {
    let d = f.domain();
    let dist = boundary_distance(d, z)?;
    if 2.0 * t.norm() >= dist {
        return Err(Error::domain(format!(
            "(z, t) = ({z}, {t}) violates 2|t| < d(z, ∂D) = {dist}"
        )));
    }
    let r = opts.radius.unwrap_or_else(|| default_radius(dist, t));
    if !admissible(z, t, r, d)? {
        return Err(Error::domain(format!(
            "contour radius {r} is not admissible for |t| = {} (needs 2|t| < r)",
            t.norm()
        )));
    }
    let floor = Q_GUARD * r * r;
    let integrand = |a: C, b: C| {
        let q = q_eval(a, b, z, t);
        if q.norm() <= floor {
            return C::new(f64::NAN, f64::NAN);
        }
        f.value(a, b) / q
    };
    let q = integrate_on_torus(&integrand, z, r, opts.tol, opts.start_nodes, opts.max_nodes).map_err(|e| match e {
        Error::Numeric { at: Some((a, b)), .. } if q_eval(a, b, z, t).norm() <= floor => Error::Numeric {
            what: format!("|Q| fell below {Q_GUARD:e}·r² on the contour"),
            at: Some((a, b)),
        },
        other => other,
    })?;
    Ok(TEval {
        value: q.value,
        err_estimate: q.err_estimate,
        contour_radius: r,
        nodes: q.nodes,
    })
}

/// Radius for the expanded-kernel coefficient quadrature.
pub fn coeff_radius(dist: f64) -> f64 {
    if dist.is_finite() {
        0.5 * dist
    } else {
        1.0
    }
}

/// `T_ℓ f(z)` for `ℓ = 0..=max_l` from the expanded kernel
/// `(−1)^ℓ (ζ1 − ζ2)^ℓ / ((ζ1 − z)(ζ2 − z))^{ℓ+1}`, sharing one set of samples.
pub fn t_coeffs_quadrature(f: &Holo2, z: C, max_l: usize, opts: &QuadOptions) -> Result<Vec<Quadrature>> {
    let dist = boundary_distance(f.domain(), z)?;
    let r = opts.radius.unwrap_or_else(|| coeff_radius(dist));
    if r >= dist {
        return Err(Error::domain(format!("coefficient contour radius {r} leaves the domain")));
    }
    let integrand = |a: C, b: C, out: &mut [C]| {
        let base = f.value(a, b) / ((a - z) * (b - z));
        let ratio = (b - a) / ((a - z) * (b - z));
        let mut term = base;
        for slot in out.iter_mut() {
            *slot = term;
            term *= ratio;
        }
    };
    integrate_on_torus_many(&integrand, max_l + 1, z, r, opts.tol, opts.start_nodes, opts.max_nodes)
}

/// `T_ℓ f(z)` by quadrature of the expanded kernel.
pub fn t_coeff_quadrature(f: &Holo2, l: usize, z: C) -> Result<C> {
    let qs = t_coeffs_quadrature(f, z, l, &QuadOptions::default())?;
    Ok(qs[l].value)
}

/// Truncated expansion `T f(z, t) ≈ Σ_{ℓ ≤ L} c_ℓ(z) t^ℓ`.
#[derive(Debug, Clone, PartialEq)]
pub struct TSeries {
    pub z: C,
    pub coeffs: Vec<C>,
}

impl TSeries {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, t: C) -> C {
        self.coeffs.iter().rev().fold(C::default(), |acc, c| acc * t + c)
    }

    /// Magnitude of the last retained term at `t`, a heuristic tail estimate.
    pub fn tail_estimate(&self, t: C) -> f64 {
        self.coeffs[self.order()].norm() * t.norm().powi(self.order() as i32)
    }
}

/// `c_ℓ = R_ℓ f(z) / ℓ!` for `ℓ ≤ L`, from a single jet of order `L`.
pub fn t_series(f: &Holo2, z: C, order: usize) -> Result<TSeries> {
    if f.separable_parts().is_some() {
        let coeffs = (0..=order)
            .map(|l| rc_bracket_normalized(f, l, z))
            .collect::<Result<Vec<_>>>()?;
        return Ok(TSeries { z, coeffs });
    }
    let jet = f.jet(z, order)?;
    let coeffs = (0..=order)
        .map(|l| crate::brackets::bracket_from_jet(&jet, l).map(|r| r / crate::numerics::factorial(l)))
        .collect::<Result<Vec<_>>>()?;
    Ok(TSeries { z, coeffs })
}

/// Outcome of [`injectivity_certificate`].
#[derive(Debug, Clone, PartialEq)]
pub struct RankCertificate {
    pub degree: usize,
    pub rank: usize,
    pub full: bool,
    /// Smallest singular value after scaling columns to unit norm.
    pub sigma_min: f64,
    pub sigma_max: f64,
}

/// Sample points for the certificate: `d + 1` equally spaced points on the unit circle.
pub fn certificate_points(d: usize) -> Vec<C> {
    (0..=d)
        .map(|k| C::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / (d + 1) as f64))
        .collect()
}

/// The matrix sending monomials `ζ1^a ζ2^b` (`a + b ≤ d`) to their series
/// coefficients `c_ℓ(z_k)`, `ℓ ≤ d`, at the given points.
pub fn series_matrix(d: usize, points: &[C]) -> Result<DMatrix<C>> {
    let monomials: Vec<(usize, usize)> = (0..=d).flat_map(|k| (0..=k).map(move |j| (k - j, j))).collect();
    let rows = (d + 1) * points.len();
    let mut m = DMatrix::from_element(rows, monomials.len(), C::default());
    for (col, &(a, b)) in monomials.iter().enumerate() {
        let f = Holo2::polynomial(DomainDesc::EntirePlane, BiPoly::monomial(a, b, C::new(1.0, 0.0)));
        for (k, &z) in points.iter().enumerate() {
            let series = t_series(&f, z, d)?;
            for (l, c) in series.coeffs.iter().enumerate() {
                m[(l * points.len() + k, col)] = *c;
            }
        }
    }
    Ok(m)
}

/// Numerical rank of `f ↦ (c_ℓ(z_k))` on polynomials of total degree `≤ d`.
pub fn injectivity_certificate(d: usize) -> Result<RankCertificate> {
    if d > 8 {
        return Err(Error::Usage(format!("injectivity certificate supports d ≤ 8, got {d}")));
    }
    let mut m = series_matrix(d, &certificate_points(d))?;
    for mut col in m.column_iter_mut() {
        let norm = col.norm();
        if norm == 0.0 {
            return Err(Error::numeric("zero column in the series matrix"));
        }
        col /= C::new(norm, 0.0);
    }
    let svd = m.svd(false, false);
    let sv = svd.singular_values;
    if sv.iter().any(|s| !s.is_finite()) {
        return Err(Error::numeric("singular value decomposition failed"));
    }
    let sigma_max = sv.max();
    let sigma_min = sv.min();
    let threshold = 1e-10 * sigma_max;
    let rank = sv.iter().filter(|&&s| s > threshold).count();
    let dim = (d + 1) * (d + 2) / 2;
    Ok(RankCertificate {
        degree: d,
        rank,
        full: rank == dim,
        sigma_min,
        sigma_max,
    })
}

/// Exact `T_ℓ(ζ1^a ζ2^b)(z) = Σ_j (−1)^j C(ℓ,j) C(a,ℓ−j) C(b,j) z^{a+b−ℓ}`.
pub fn monomial_coeff(a: usize, b: usize, l: usize, z: C) -> C {
    if l > a + b {
        return C::default();
    }
    let mut acc = 0.0;
    for j in 0..=l {
        if l - j > a || j > b {
            continue;
        }
        let term = binomial(l, j) * binomial(a, l - j) * binomial(b, j);
        acc += if j % 2 == 0 { term } else { -term };
    }
    z.powi((a + b - l) as i32) * acc
}
