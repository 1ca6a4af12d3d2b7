//! Bessel polynomials θ_n and their complex roots.

use std::cmp::Ordering;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

/// Alternative form of θ₂, ascending powers: 3 + z + z².
/// Disagrees with the coefficient formula (z² + 3z + 3); kept for comparison.
pub const PRINTED_THETA2: [u128; 3] = [3, 1, 1];

/// θ_n(z) = Σ_{m=0}^{n} (n+m)! / (2^m (n−m)! m!) z^{n−m}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BesselPolynomial {
    pub n: usize,
    /// Coefficients in ascending powers of z; `coefficients[n]` is 1.
    pub coefficients: Vec<u128>,
}

impl BesselPolynomial {
    pub fn eval<T: Scalar>(&self, z: Complex<T>) -> Complex<T> {
        horner(&self.float_coefficients(), z).0
    }

    pub fn float_coefficients<T: Scalar>(&self) -> Vec<T> {
        self.coefficients
            .iter()
            .map(|&c| T::from_u128(c).expect("coefficient representable"))
            .collect()
    }
}

/// Exact coefficients via (n+m)!/(2^m (n−m)! m!) = C(n+m, 2m)·(2m−1)!!.
///
/// # Panics
/// If a coefficient overflows `u128` (n beyond about 30).
pub fn bessel_poly(n: usize) -> BesselPolynomial {
    let mut coefficients = vec![0u128; n + 1];
    for m in 0..=n {
        let c = binom(n + m, 2 * m)
            .and_then(|b| b.checked_mul(double_factorial_odd(m)?))
            .expect("Bessel polynomial coefficient overflows u128");
        coefficients[n - m] = c;
    }
    BesselPolynomial { n, coefficients }
}

fn binom(n: usize, k: usize) -> Option<u128> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

fn double_factorial_odd(m: usize) -> Option<u128> {
    (1..=m).try_fold(1u128, |acc, i| acc.checked_mul(2 * i as u128 - 1))
}

fn horner<T: Scalar>(coeffs: &[T], z: Complex<T>) -> (Complex<T>, Complex<T>) {
    let mut p = Complex::new(T::zero(), T::zero());
    let mut dp = p;
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + Complex::new(c, T::zero());
    }
    (p, dp)
}

/// All n roots of θ_n, ordered by magnitude then increasing imaginary part.
///
/// Aberth iteration followed by Newton polishing; conjugate pairs are made
/// exactly symmetric and the real root of odd degree is made exactly real.
pub fn bessel_poly_roots<T: Scalar>(n: usize) -> Result<Vec<Complex<T>>> {
    if n == 0 {
        return Err(Error::Domain("bessel_poly_roots requires n ≥ 1".into()));
    }
    let poly = bessel_poly(n);
    let coeffs: Vec<T> = poly.float_coefficients();
    let mut roots = aberth(&coeffs)?;
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = horner(&coeffs, *r);
            if dp.norm() == T::zero() {
                break;
            }
            *r -= p / dp;
        }
    }
    let mut roots = symmetrize(roots);
    let tol_mag = lit::<T>(1e-12);
    roots.sort_by(|a, b| {
        let (na, nb) = (a.norm(), b.norm());
        if (na - nb).abs() <= tol_mag * na.max(nb) {
            a.im.partial_cmp(&b.im).unwrap_or(Ordering::Equal)
        } else {
            na.partial_cmp(&nb).unwrap_or(Ordering::Equal)
        }
    });
    let scale: T = coeffs.iter().fold(T::zero(), |a, &c| a + c);
    let gate = if T::epsilon() < lit(1e-10) { lit(1e-10) } else { lit::<T>(1e3) * T::epsilon() };
    for r in &roots {
        let bound = gate * scale * r.norm().max(T::one()).powi(n as i32);
        if horner(&coeffs, *r).0.norm() > bound {
            return Err(Error::NoConvergence(format!(
                "Bessel polynomial root {r} of degree {n} fails residual gate"
            )));
        }
    }
    Ok(roots)
}

fn aberth<T: Scalar>(coeffs: &[T]) -> Result<Vec<Complex<T>>> {
    let n = coeffs.len() - 1;
    let radius = coeffs[0].abs().powf(T::one() / T::from_usize_lossy(n));
    let mut z: Vec<Complex<T>> = (0..n)
        .map(|k| {
            let angle = T::TAU() * T::from_usize_lossy(k) / T::from_usize_lossy(n) + lit(0.4);
            Complex::from_polar(radius, angle)
        })
        .collect();
    let tol = lit::<T>(16.0) * T::epsilon();
    let near = T::epsilon().sqrt();
    let mut extra = 0;
    for _ in 0..1000 {
        let mut worst = T::zero();
        for i in 0..n {
            let (p, dp) = horner(coeffs, z[i]);
            let ratio = p / dp;
            let mut repulsion = Complex::new(T::zero(), T::zero());
            for (j, &zj) in z.iter().enumerate() {
                if j != i {
                    repulsion += (z[i] - zj).inv();
                }
            }
            let step = ratio / (Complex::new(T::one(), T::zero()) - ratio * repulsion);
            if step.re.is_finite() && step.im.is_finite() {
                z[i] -= step;
                worst = worst.max(step.norm() / z[i].norm().max(T::one()));
            }
        }
        if worst <= near {
            extra += 1;
        }
        // Rounding noise can keep the step above `tol`; stop a few sweeps later.
        if worst <= tol || extra > 4 {
            return Ok(z);
        }
    }
    Err(Error::NoConvergence(format!(
        "Aberth iteration for Bessel polynomial of degree {n} did not converge"
    )))
}

fn symmetrize<T: Scalar>(roots: Vec<Complex<T>>) -> Vec<Complex<T>> {
    let real_tol = lit::<T>(1e3) * T::epsilon();
    let mut out = Vec::with_capacity(roots.len());
    let mut upper: Vec<Complex<T>> = Vec::new();
    let mut lower: Vec<Complex<T>> = Vec::new();
    for r in roots {
        if r.im.abs() <= real_tol * r.norm().max(T::one()) {
            out.push(Complex::new(r.re, T::zero()));
        } else if r.im > T::zero() {
            upper.push(r);
        } else {
            lower.push(r);
        }
    }
    for u in upper {
        let best = lower
            .iter()
            .enumerate()
            .min_by(|a, b| {
                (a.1.conj() - u)
                    .norm()
                    .partial_cmp(&(b.1.conj() - u).norm())
                    .unwrap_or(Ordering::Equal)
            })
            .map(|(i, _)| i);
        let avg = match best {
            Some(i) => {
                let l = lower.swap_remove(i);
                (u + l.conj()) * lit::<T>(0.5)
            }
            None => u,
        };
        out.push(avg);
        out.push(avg.conj());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_degree_coefficients() {
        assert_eq!(bessel_poly(0).coefficients, vec![1]);
        assert_eq!(bessel_poly(1).coefficients, vec![1, 1]);
        assert_eq!(bessel_poly(2).coefficients, vec![3, 3, 1]);
        assert_eq!(bessel_poly(3).coefficients, vec![15, 15, 6, 1]);
        assert_ne!(bessel_poly(2).coefficients, PRINTED_THETA2.to_vec());
    }

    #[test]
    fn coefficients_satisfy_recurrence() {
        // θ_n = (2n−1) θ_{n−1} + z² θ_{n−2}
        for n in 2..20 {
            let a = bessel_poly(n).coefficients;
            let b = bessel_poly(n - 1).coefficients;
            let c = bessel_poly(n - 2).coefficients;
            for (k, &ak) in a.iter().enumerate() {
                let mut want = 0u128;
                if k < b.len() {
                    want += (2 * n as u128 - 1) * b[k];
                }
                if k >= 2 && k - 2 < c.len() {
                    want += c[k - 2];
                }
                assert_eq!(ak, want, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn degree_one_and_two_roots() {
        let r = bessel_poly_roots::<f64>(1).unwrap();
        assert_eq!(r, vec![Complex::new(-1.0, 0.0)]);
        let r = bessel_poly_roots::<f64>(2).unwrap();
        let s3 = 3f64.sqrt();
        assert!((r[0] - Complex::new(-1.5, -s3 / 2.0)).norm() < 1e-14);
        assert!((r[1] - Complex::new(-1.5, s3 / 2.0)).norm() < 1e-14);
    }

    #[test]
    fn printed_theta2_roots_differ() {
        // quadratic formula on z² + z + 3
        let printed = Complex::new(-0.5, 11f64.sqrt() / 2.0);
        let r = bessel_poly_roots::<f64>(2).unwrap();
        assert!(r.iter().all(|z| (z - printed).norm() > 0.5));
    }

    #[test]
    fn conjugate_closure_and_ordering() {
        for n in 1..=12 {
            let r = bessel_poly_roots::<f64>(n).unwrap();
            assert_eq!(r.len(), n);
            for z in &r {
                assert!(r.iter().any(|w| *w == z.conj()), "n={n}");
            }
            assert_eq!(r.iter().filter(|z| z.im == 0.0).count(), n % 2);
            for w in r.windows(2) {
                assert!(w[0].norm() <= w[1].norm() * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn ahmed_identity() {
        for n in 1..=10 {
            let nu = n as f64 + 0.5;
            let r = bessel_poly_roots::<f64>(n).unwrap();
            for (j, &zj) in r.iter().enumerate() {
                let mut s = Complex::new(0.0, 0.0);
                for (k, &zk) in r.iter().enumerate() {
                    if k != j {
                        s += (zk - zj).inv();
                    }
                }
                let want = Complex::new(-1.0, 0.0) - (nu - 0.5) / zj;
                assert!((s - want).norm() < 1e-9, "n={n} j={j}");
            }
        }
    }
}
