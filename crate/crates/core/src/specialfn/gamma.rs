//! Gamma, digamma and polygamma.

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

use super::zeta::hurwitz_zeta;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// B_{2k} for k = 1..=15.
pub(crate) const BERNOULLI_EVEN: [f64; 15] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
];

/// Gamma function via the Lanczos approximation, with reflection below 1/2.
pub fn gamma<T: Scalar>(x: T) -> T {
    let half = lit::<T>(0.5);
    if x < half {
        let pi = T::PI();
        return pi / ((pi * x).sin() * gamma(T::one() - x));
    }
    let x = x - T::one();
    let mut acc = lit::<T>(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += lit::<T>(c) / (x + T::from_usize_lossy(i));
    }
    let t = x + lit::<T>(LANCZOS_G) + half;
    (T::TAU()).sqrt() * t.powf(x + half) * (-t).exp() * acc
}

/// Digamma ψ(x) for x > 0: upward recurrence to x ≥ 12 then the asymptotic series.
pub fn digamma<T: Scalar>(x: T) -> Result<T> {
    if !(x > T::zero()) {
        return Err(Error::Domain(format!("digamma requires x > 0, got {x}")));
    }
    let mut acc = T::zero();
    let mut y = x;
    let shift = lit::<T>(12.0);
    while y < shift {
        acc -= y.recip();
        y += T::one();
    }
    let inv2 = (y * y).recip();
    let mut pow = inv2;
    let mut series = T::zero();
    for (k, &b) in BERNOULLI_EVEN.iter().enumerate().take(10) {
        let two_k = lit::<T>(2.0 * (k as f64 + 1.0));
        series += lit::<T>(b) / two_k * pow;
        pow *= inv2;
    }
    Ok(acc + y.ln() - lit::<T>(0.5) / y - series)
}

/// Polygamma ψ^(m)(x) for x > 0. Orders m ≥ 1 use ψ^(m)(x) = (−1)^(m+1) m! ζ(m+1, x).
pub fn polygamma<T: Scalar>(m: u32, x: T) -> Result<T> {
    if m == 0 {
        return digamma(x);
    }
    if !(x > T::zero()) {
        return Err(Error::Domain(format!("polygamma requires x > 0, got {x}")));
    }
    let mut fact = T::one();
    for i in 2..=m {
        fact *= T::from_u32(i).expect("small integer");
    }
    let sign = if m % 2 == 1 { T::one() } else { -T::one() };
    let order = T::from_u32(m + 1).expect("small integer");
    Ok(sign * fact * hurwitz_zeta(order, x)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gamma_known_values() {
        assert!((gamma(5.0_f64) - 24.0).abs() < 1e-12);
        assert!((gamma(0.5_f64) - PI.sqrt()).abs() < 1e-14);
        assert!((gamma(-0.5_f64) + 2.0 * PI.sqrt()).abs() < 1e-13);
        assert!((gamma(2.3_f32) - 1.166_712_7).abs() < 1e-5);
    }

    #[test]
    fn digamma_at_one_is_minus_gamma() {
        let v = digamma(1.0_f64).unwrap();
        assert!((v + f64::euler_gamma()).abs() < 1e-15);
    }

    #[test]
    fn digamma_recurrence() {
        let d = digamma(8.0_f64).unwrap() - digamma(7.0_f64).unwrap();
        assert!((d - 1.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn trigamma_half_is_half_pi_squared() {
        let v = polygamma(1, 0.5_f64).unwrap();
        assert!((v - PI * PI / 2.0).abs() < 1e-13);
    }

    #[test]
    fn polygamma_half_closed_form() {
        // ψ^(n)(1/2) = (−1)^(n+1) n! (2^(n+1) − 1) ζ(n+1)
        let zeta3 = 1.202_056_903_159_594_3;
        let v = polygamma(2, 0.5_f64).unwrap();
        assert!((v - (-2.0 * 7.0 * zeta3)).abs() < 1e-12);
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(digamma(0.0_f64).is_err());
        assert!(polygamma(2, -1.0_f64).is_err());
    }
}
