//! Scalars, truncated Taylor jets, polynomials and Gauss rules.
//!
//! Everything that needs high-order mixed partial derivatives goes through
//! [`BiJet`]: built-in functions are written once, generically over
//! [`Analytic`], and evaluated either on plain complex numbers or on jets.

mod analytic;
mod bijet;
pub mod gauss;
mod poly;
mod unijet;

pub use analytic::Analytic;
pub use bijet::{bijet_arith, bijet_cauchy, bijet_partial, BiJet, JetOp};
pub use poly::{BiPoly, UniPoly};
pub use unijet::UniJet;

pub use num_complex::Complex64 as ComplexScalar;

/// Shorthand used throughout the crate.
pub type C = num_complex::Complex64;

pub const I: C = C::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

#[inline]
pub fn is_finite(z: C) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// `n!` as a float. Exact up to 22!.
pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Binomial coefficient as a float, computed through the exact integer product.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as f64
}

/// Relative distance `|a - b| / max(|b|, floor)`.
pub fn rel_err(a: C, b: C, floor: f64) -> f64 {
    (a - b).norm() / b.norm().max(floor)
}
