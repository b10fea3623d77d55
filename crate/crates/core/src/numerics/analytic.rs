use std::ops::{Add, Mul, Neg, Sub};

use super::C;

/// Operations shared by complex scalars and truncated Taylor jets.
///
/// Built-in holomorphic functions are written generically over this trait so
/// a single formula yields both values and exact derivatives.
pub trait Analytic:
    Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    /// A constant with the same shape (center, order) as `self`.
    fn constant_like(&self, value: C) -> Self;

    fn scale(&self, factor: C) -> Self;

    fn recip(&self) -> Self;

    fn exp(&self) -> Self;

    fn add_scalar(&self, value: C) -> Self {
        self.clone() + self.constant_like(value)
    }

    fn powi(&self, n: i32) -> Self {
        if n < 0 {
            return self.recip().powi(-n);
        }
        let mut base = self.clone();
        let mut acc = self.constant_like(C::new(1.0, 0.0));
        let mut e = n as u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

impl Analytic for C {
    fn constant_like(&self, value: C) -> Self {
        value
    }

    fn scale(&self, factor: C) -> Self {
        self * factor
    }

    fn recip(&self) -> Self {
        C::new(1.0, 0.0) / self
    }

    fn exp(&self) -> Self {
        C::exp(*self)
    }

    fn powi(&self, n: i32) -> Self {
        C::powi(self, n)
    }
}
