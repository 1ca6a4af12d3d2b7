//! Neumaier-compensated accumulation.

use std::ops::AddAssign;

use num_complex::Complex;

use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, Default)]
pub struct Neumaier<T> {
    sum: T,
    comp: T,
}

impl<T: Scalar> Neumaier<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            comp: T::zero(),
        }
    }

    #[inline]
    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> T {
        self.sum + self.comp
    }
}

/// Componentwise Neumaier sum of complex terms.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum<T> {
    re: Neumaier<T>,
    im: Neumaier<T>,
}

impl<T: Scalar> ComplexSum<T> {
    pub fn new() -> Self {
        Self {
            re: Neumaier::new(),
            im: Neumaier::new(),
        }
    }

    #[inline]
    pub fn add(&mut self, z: Complex<T>) {
        self.re.add(z.re);
        if z.im != T::zero() {
            self.im.add(z.im);
        }
    }

    #[inline]
    pub fn value(&self) -> Complex<T> {
        Complex::new(self.re.value(), self.im.value())
    }
}

impl<T: Scalar> AddAssign<Complex<T>> for ComplexSum<T> {
    fn add_assign(&mut self, z: Complex<T>) {
        self.add(z);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_bits() {
        let mut s = Neumaier::new();
        for x in [1.0, 1e100, 1.0, -1e100] {
            s.add(x);
        }
        assert_eq!(s.value(), 2.0);
    }

    #[test]
    fn many_small_terms() {
        let mut s = Neumaier::new();
        for _ in 0..1_000_000 {
            s.add(0.1_f64);
        }
        assert!((s.value() - 100_000.0).abs() < 1e-9);
    }
}
