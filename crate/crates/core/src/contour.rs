//! Circular contours, the kernel `Q`, and the product trapezoid rule on a torus.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::{is_finite, C};

/// The open set `D` on which functions are holomorphic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DomainDesc {
    EntirePlane,
    Disk { center: C, radius: f64 },
    UpperHalfPlane,
}

impl DomainDesc {
    pub fn disk(center: C, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::Usage(format!("disk radius must be positive, got {radius}")));
        }
        Ok(DomainDesc::Disk { center, radius })
    }

    pub fn contains(&self, z: C) -> bool {
        match *self {
            DomainDesc::EntirePlane => is_finite(z),
            DomainDesc::Disk { center, radius } => (z - center).norm() < radius,
            DomainDesc::UpperHalfPlane => z.im > 0.0,
        }
    }

    /// The segment `[a, b]` lies in the domain. All three kinds are convex.
    pub fn contains_segment(&self, a: C, b: C) -> bool {
        self.contains(a) && self.contains(b)
    }
}

/// Euclidean distance from `z` to the boundary of `d`; `+∞` for the plane.
pub fn boundary_distance(d: &DomainDesc, z: C) -> Result<f64> {
    if !d.contains(z) {
        return Err(Error::domain(format!("point {z} lies outside {d:?}")));
    }
    Ok(match *d {
        DomainDesc::EntirePlane => f64::INFINITY,
        DomainDesc::Disk { center, radius } => radius - (z - center).norm(),
        DomainDesc::UpperHalfPlane => z.im,
    })
}

/// `Q(ζ1, ζ2; z, t) = (ζ1 − z)(ζ2 − z) + t(ζ1 − ζ2)`.
#[inline]
pub fn q_eval(z1: C, z2: C, z: C, t: C) -> C {
    (z1 - z) * (z2 - z) + t * (z1 - z2)
}

/// Whether equal circles of radius `r` about `z` avoid the zero set of `Q`.
///
/// Uses the sufficient bound `|(ζ1−z)(ζ2−z)| = r² > 2r|t| ≥ |t(ζ1−ζ2)|`,
/// i.e. the answer is `2|t| < r`.
pub fn admissible(z: C, t: C, r: f64, d: &DomainDesc) -> Result<bool> {
    let dist = boundary_distance(d, z)?;
    if !(r > 0.0) || r >= dist {
        return Err(Error::domain(format!(
            "contour radius {r} must lie in (0, {dist}) around {z}"
        )));
    }
    Ok(2.0 * t.norm() < r)
}

/// A circle sampled at `nodes` equally spaced points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contour {
    pub center: C,
    pub radius: f64,
    pub nodes: usize,
}

impl Contour {
    pub fn new(center: C, radius: f64, nodes: usize) -> Result<Self> {
        if !(radius > 0.0) || nodes < 8 {
            return Err(Error::Usage(format!(
                "contour needs radius > 0 and at least 8 nodes (got {radius}, {nodes})"
            )));
        }
        Ok(Self {
            center,
            radius,
            nodes,
        })
    }

    /// Checks that the closed disk bounded by the contour stays inside `d`.
    pub fn check_inside(&self, d: &DomainDesc) -> Result<()> {
        let dist = boundary_distance(d, self.center)?;
        if self.radius >= dist {
            return Err(Error::domain(format!(
                "contour of radius {} about {} leaves the domain (boundary distance {dist})",
                self.radius, self.center
            )));
        }
        Ok(())
    }

    /// Node positions and weights for `(2πi)^{-1} ∮ F dζ ≈ Σ w_k F(ζ_k)`.
    pub fn points(&self) -> Vec<(C, C)> {
        (0..self.nodes)
            .map(|k| {
                let omega = C::from_polar(1.0, 2.0 * PI * k as f64 / self.nodes as f64);
                (self.center + omega * self.radius, omega * self.radius / self.nodes as f64)
            })
            .collect()
    }
}

/// Product trapezoid rule on `C1 × C2`.
#[derive(Debug, Clone)]
pub struct TorusGrid {
    pub first: Contour,
    pub second: Contour,
    nodes1: Vec<(C, C)>,
    nodes2: Vec<(C, C)>,
}

impl TorusGrid {
    pub fn new(first: Contour, second: Contour) -> Result<Self> {
        for c in [&first, &second] {
            if !c.nodes.is_power_of_two() {
                return Err(Error::Usage(format!(
                    "torus node counts must be powers of two, got {}",
                    c.nodes
                )));
            }
        }
        Ok(Self {
            nodes1: first.points(),
            nodes2: second.points(),
            first,
            second,
        })
    }

    /// Two equal circles of radius `r` about `z`.
    pub fn symmetric(z: C, r: f64, nodes: usize) -> Result<Self> {
        let c = Contour::new(z, r, nodes)?;
        Self::new(c, c)
    }

    pub fn nodes(&self) -> (&[(C, C)], &[(C, C)]) {
        (&self.nodes1, &self.nodes2)
    }
}

/// Result of a contour quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: C,
    /// `|I_M − I_{M/2}|` from the full and the every-other-node rule.
    pub err_estimate: f64,
    /// `Σ |w F|`, the magnitude of the discrete sum; rounding error is a small multiple of `ε · scale`.
    pub scale: f64,
    pub nodes: usize,
}

impl Quadrature {
    /// Rounding floor below which doubling can no longer help.
    pub fn noise_floor(&self) -> f64 {
        64.0 * f64::EPSILON * self.scale
    }

    pub fn converged(&self, tol: f64) -> bool {
        self.err_estimate <= tol * self.value.norm() || self.err_estimate <= self.noise_floor()
    }
}

/// `(2πi)^{-2} ∮∮ F dζ1 dζ2` by the product trapezoid rule.
pub fn double_contour_integral(f: &(dyn Fn(C, C) -> C + Sync), grid: &TorusGrid) -> Result<Quadrature> {
    let mut out = double_contour_integral_many(&|a, b, v: &mut [C]| v[0] = f(a, b), 1, grid)?;
    Ok(out.remove(0))
}

/// Integrates `count` integrands sharing one pass over the torus; `f` fills
/// one value per integrand. Rows run in parallel and are reduced in node order.
pub fn double_contour_integral_many(
    f: &(dyn Fn(C, C, &mut [C]) + Sync),
    count: usize,
    grid: &TorusGrid,
) -> Result<Vec<Quadrature>> {
    let (n1, n2) = grid.nodes();
    // per row: (full, half, scale) for each integrand, all already weighted by w2
    let rows: Vec<Result<Vec<(C, C, f64)>>> = n1
        .par_iter()
        .map(|&(z1, w1)| {
            let mut acc = vec![(C::default(), C::default(), 0.0); count];
            let mut values = vec![C::default(); count];
            for (m, &(z2, w2)) in n2.iter().enumerate() {
                f(z1, z2, &mut values);
                for (slot, v) in acc.iter_mut().zip(&values) {
                    if !is_finite(*v) {
                        return Err(Error::Numeric {
                            what: "non-finite integrand on the contour torus".into(),
                            at: Some((z1, z2)),
                        });
                    }
                    let term = v * w2;
                    slot.0 += term;
                    slot.2 += (term * w1).norm();
                    if m % 2 == 0 {
                        slot.1 += term;
                    }
                }
            }
            Ok(acc)
        })
        .collect();
    let mut out = vec![
        Quadrature {
            value: C::default(),
            err_estimate: 0.0,
            scale: 0.0,
            nodes: grid.first.nodes,
        };
        count
    ];
    let mut halves = vec![C::default(); count];
    for (k, row) in rows.into_iter().enumerate() {
        let w1 = n1[k].1;
        for (idx, (full, half, scale)) in row?.into_iter().enumerate() {
            out[idx].value += full * w1;
            out[idx].scale += scale;
            if k % 2 == 0 {
                halves[idx] += half * w1;
            }
        }
    }
    for (q, half) in out.iter_mut().zip(halves) {
        // every-other-node rule has doubled weights in each variable
        q.err_estimate = (q.value - half * 4.0).norm();
    }
    Ok(out)
}

/// `(2πi)^{-1} ∮ F dζ` by the trapezoid rule.
pub fn contour_integral(f: &dyn Fn(C) -> C, contour: &Contour) -> Result<Quadrature> {
    let mut full = C::default();
    let mut half = C::default();
    let mut scale = 0.0;
    for (k, (z, w)) in contour.points().into_iter().enumerate() {
        let v = f(z);
        if !is_finite(v) {
            return Err(Error::Numeric {
                what: "non-finite integrand on the contour".into(),
                at: Some((z, z)),
            });
        }
        let term = v * w;
        full += term;
        scale += term.norm();
        if k % 2 == 0 {
            half += term;
        }
    }
    Ok(Quadrature {
        value: full,
        err_estimate: (full - half * 2.0).norm(),
        scale,
        nodes: contour.nodes,
    })
}

/// Doubles the node count on equal circles about `z` until converged.
pub fn integrate_on_torus(
    f: &(dyn Fn(C, C) -> C + Sync),
    z: C,
    r: f64,
    tol: f64,
    start_nodes: usize,
    max_nodes: usize,
) -> Result<Quadrature> {
    let mut out = integrate_on_torus_many(&|a, b, v: &mut [C]| v[0] = f(a, b), 1, z, r, tol, start_nodes, max_nodes)?;
    Ok(out.remove(0))
}

/// Several integrands at once; doubling continues until every one has converged.
pub fn integrate_on_torus_many(
    f: &(dyn Fn(C, C, &mut [C]) + Sync),
    count: usize,
    z: C,
    r: f64,
    tol: f64,
    start_nodes: usize,
    max_nodes: usize,
) -> Result<Vec<Quadrature>> {
    let mut nodes = start_nodes.max(8).next_power_of_two();
    loop {
        let qs = double_contour_integral_many(f, count, &TorusGrid::symmetric(z, r, nodes)?)?;
        if qs.iter().all(|q| q.converged(tol)) {
            return Ok(qs);
        }
        if nodes * 2 > max_nodes {
            let worst = qs
                .iter()
                .filter(|q| !q.converged(tol))
                .max_by(|a, b| a.err_estimate.total_cmp(&b.err_estimate))
                .expect("some integrand failed to converge");
            return Err(Error::Accuracy {
                best: worst.value,
                err: worst.err_estimate,
                tol,
            });
        }
        nodes *= 2;
    }
}

/// Single-circle analogue of [`integrate_on_torus`].
pub fn integrate_on_circle(
    f: &dyn Fn(C) -> C,
    center: C,
    r: f64,
    tol: f64,
    start_nodes: usize,
    max_nodes: usize,
) -> Result<Quadrature> {
    let mut nodes = start_nodes.max(8).next_power_of_two();
    loop {
        let q = contour_integral(f, &Contour::new(center, r, nodes)?)?;
        if q.converged(tol) {
            return Ok(q);
        }
        if nodes * 2 > max_nodes {
            return Err(Error::Accuracy {
                best: q.value,
                err: q.err_estimate,
                tol,
            });
        }
        nodes *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn boundary_distances() {
        assert_eq!(boundary_distance(&DomainDesc::EntirePlane, z(5.0, 3.0)).unwrap(), f64::INFINITY);
        assert_eq!(boundary_distance(&DomainDesc::UpperHalfPlane, z(2.0, 3.0)).unwrap(), 3.0);
        let disk = DomainDesc::disk(z(0.0, 0.0), 1.0).unwrap();
        assert!((boundary_distance(&disk, z(0.5, 0.0)).unwrap() - 0.5).abs() < 1e-15);
        assert!(boundary_distance(&DomainDesc::UpperHalfPlane, z(0.0, -1.0)).is_err());
        assert!(DomainDesc::disk(z(0.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn kernel_values() {
        let (a, b, zz) = (z(0.3, 0.1), z(-1.0, 2.0), z(0.2, 0.2));
        assert_eq!(q_eval(a, b, zz, C::default()), (a - zz) * (b - zz));
        assert_eq!(q_eval(z(1.0, 0.0), z(-1.0, 0.0), z(0.0, 0.0), z(1.0, 0.0)), z(1.0, 0.0));
        let s = z(0.7, -0.4);
        assert!((q_eval(s, s, zz, z(0.5, 0.5)) - (s - zz) * (s - zz)).norm() < 1e-15);
    }

    #[test]
    fn admissibility_bound() {
        let h = DomainDesc::UpperHalfPlane;
        assert!(admissible(z(0.0, 2.0), C::default(), 0.3, &h).unwrap());
        assert!(admissible(z(0.0, 2.0), z(0.5, 0.0), 1.5, &h).unwrap());
        assert!(!admissible(z(0.0, 2.0), z(0.8, 0.0), 1.5, &h).unwrap());
        assert!(admissible(z(0.0, 2.0), z(0.1, 0.0), 2.5, &h).is_err());
    }

    #[test]
    fn iterated_cauchy_formula() {
        let zz = z(1.0, 0.0);
        let grid = TorusGrid::symmetric(zz, 0.5, 64).unwrap();
        let q = double_contour_integral(&|a, b| 1.0 / ((a - zz) * (b - zz)), &grid).unwrap();
        assert!((q.value - z(1.0, 0.0)).norm() < 1e-14);
        let q = double_contour_integral(&|a, b| a * b / ((a - zz) * (b - zz)), &grid).unwrap();
        assert!((q.value - z(1.0, 0.0)).norm() < 1e-14);
        let q = double_contour_integral(&|a, b| a.exp() / (b - zz), &grid).unwrap();
        assert!(q.value.norm() < 1e-14);
    }

    #[test]
    fn non_finite_integrand_reports_node() {
        let grid = TorusGrid::symmetric(C::default(), 1.0, 8).unwrap();
        let err = double_contour_integral(&|a, _| 1.0 / (a - 1.0), &grid).unwrap_err();
        assert!(matches!(err, Error::Numeric { at: Some(_), .. }));
    }

    #[test]
    fn torus_requires_power_of_two() {
        let c = Contour::new(C::default(), 1.0, 12).unwrap();
        assert!(TorusGrid::new(c, c).is_err());
    }
}
