//! Riemann and Hurwitz zeta functions and single t-values.

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};
use crate::sequences::{make_sequence, Family, SequenceSpec};
use crate::summation::{extended_mzv, Composition, EvalResult, SummationConfig};

use super::gamma::BERNOULLI_EVEN;

const BORWEIN_N: usize = 40;

/// Riemann ζ(s) for real s > 1, by Borwein's accelerated alternating (eta) series.
pub fn riemann_zeta<T: Scalar>(s: T) -> Result<T> {
    if !(s > T::one()) {
        return Err(Error::Domain(format!("riemann_zeta requires s > 1, got {s}")));
    }
    let n = BORWEIN_N;
    // terms[i] = n (n+i-1)! 4^i / ((n-i)! (2i)!), d_k = Σ_{i≤k} terms[i]
    let mut terms = Vec::with_capacity(n + 1);
    let mut t = T::one();
    terms.push(t);
    for i in 0..n {
        let (fi, fnn) = (T::from_usize_lossy(i), T::from_usize_lossy(n));
        t = t * (fnn + fi) * lit(4.0) * (fnn - fi)
            / ((lit::<T>(2.0) * fi + T::one()) * (lit::<T>(2.0) * fi + lit(2.0)));
        terms.push(t);
    }
    // d_n - d_k as suffix sums to avoid cancellation.
    let mut suffix = vec![T::zero(); n + 2];
    for i in (0..=n).rev() {
        suffix[i] = suffix[i + 1] + terms[i];
    }
    let d_n = suffix[0];
    let mut acc = T::zero();
    for k in 0..n {
        let diff = suffix[k + 1]; // d_n - d_k
        let term = diff / T::from_usize_lossy(k + 1).powf(s);
        if k % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    let eta_factor = T::one() - lit::<T>(2.0).powf(T::one() - s);
    Ok(acc / (d_n * eta_factor))
}

/// Hurwitz ζ(s, a) = Σ_{n≥0} (a+n)^(−s) for s > 1, a > 0 (Euler–Maclaurin).
pub fn hurwitz_zeta<T: Scalar>(s: T, a: T) -> Result<T> {
    if !(s > T::one()) {
        return Err(Error::Domain(format!("hurwitz_zeta requires s > 1, got {s}")));
    }
    if !(a > T::zero()) {
        return Err(Error::Domain(format!("hurwitz_zeta requires a > 0, got {a}")));
    }
    let target = lit::<T>(24.0) + s;
    let mut head = T::zero();
    let mut x = a;
    while x < target {
        head += x.powf(-s);
        x += T::one();
    }
    let mut acc = x.powf(T::one() - s) / (s - T::one()) + lit::<T>(0.5) * x.powf(-s);
    // Σ B_{2k}/(2k)! · s(s+1)…(s+2k−2) · x^(−s−2k+1)
    let mut rising = s; // s(s+1)...(s+2k-2) for k = 1
    let mut fact = lit::<T>(2.0); // (2k)!
    let mut xpow = x.powf(-s - T::one());
    let inv_x2 = (x * x).recip();
    for (k, &b) in BERNOULLI_EVEN.iter().enumerate() {
        let term = lit::<T>(b) / fact * rising * xpow;
        acc += term;
        if term.abs() <= T::epsilon() * acc.abs() * lit(0.01) {
            break;
        }
        let k2 = T::from_usize_lossy(2 * (k + 1));
        rising = rising * (s + k2 - T::one()) * (s + k2);
        fact = fact * (k2 + T::one()) * (k2 + lit(2.0));
        xpow *= inv_x2;
    }
    Ok(head + acc)
}

/// t(s) = (1 − 2^(−s)) ζ(s), the sum over odd integers.
pub fn t_value<T: Scalar>(s: T) -> Result<T> {
    let z = riemann_zeta(s)?;
    Ok((T::one() - lit::<T>(2.0).powf(-s)) * z)
}

/// Multiple t-value t(s₁, …, s_k), summed over odd n₁ > … > n_k ≥ 1.
pub fn multiple_t<T: Scalar>(comp: &Composition<T>, config: &SummationConfig<T>) -> Result<EvalResult<T>> {
    let odd = make_sequence(SequenceSpec::infinite(Family::Odd))?;
    extended_mzv(&odd, comp, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const ZETA3: f64 = 1.202_056_903_159_594_3;

    fn brute(s: f64) -> f64 {
        // oracle: direct sum with Euler–Maclaurin tail of order 3
        let n = 2000.0_f64;
        let mut acc = 0.0;
        for k in (1..2000).rev() {
            acc += (k as f64).powf(-s);
        }
        acc + n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s) + s / 12.0 * n.powf(-s - 1.0)
    }

    #[test]
    fn zeta_even_values() {
        assert!((riemann_zeta(2.0_f64).unwrap() - PI * PI / 6.0).abs() < 1e-15);
        assert!((riemann_zeta(4.0_f64).unwrap() - PI.powi(4) / 90.0).abs() < 1e-15);
    }

    #[test]
    fn zeta_three_matches_direct_sum() {
        let z = riemann_zeta(3.0_f64).unwrap();
        assert!((z - ZETA3).abs() < 1e-15);
        assert!((z - brute(3.0)).abs() < 1e-12);
        let z = riemann_zeta(1.5_f64).unwrap();
        assert!((z - brute(1.5)).abs() / z < 1e-10);
    }

    #[test]
    fn zeta_large_argument() {
        let z = riemann_zeta(60.0_f64).unwrap();
        assert!((z - 1.0 - 2f64.powi(-60)).abs() < 1e-17);
    }

    #[test]
    fn zeta_domain() {
        assert!(riemann_zeta(1.0_f64).is_err());
        assert!(hurwitz_zeta(2.0_f64, 0.0).is_err());
    }

    #[test]
    fn hurwitz_reductions() {
        for s in [2.0, 3.0, 5.5] {
            let a = hurwitz_zeta(s, 1.0_f64).unwrap();
            let b = riemann_zeta(s).unwrap();
            assert!((a - b).abs() < 1e-14 * b);
        }
        let h = hurwitz_zeta(2.0_f64, 0.5).unwrap();
        assert!((h - PI * PI / 2.0).abs() < 1e-13);
        let h = hurwitz_zeta(3.0_f64, 2.0).unwrap();
        assert!((h - (ZETA3 - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn t_values() {
        assert!((t_value(2.0_f64).unwrap() - PI * PI / 8.0).abs() < 1e-15);
        assert!((t_value(4.0_f64).unwrap() - PI.powi(4) / 96.0).abs() < 1e-14);
        assert!((t_value(50.0_f64).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn works_in_single_precision() {
        let z: f32 = riemann_zeta(2.0_f32).unwrap();
        assert!((z - 1.644_934).abs() < 1e-5);
    }

    #[test]
    fn multiple_t_values() {
        let cfg = SummationConfig::<f64>::default();
        let t2 = multiple_t(&Composition::from_ints(&[2]).unwrap(), &cfg).unwrap();
        assert!((t2.value.re - PI * PI / 8.0).abs() < 1e-10);
        for s in [2.0, 3.0, 5.0] {
            let t = multiple_t(&Composition::new(vec![s]).unwrap(), &cfg).unwrap();
            assert!((t.value.re - t_value(s).unwrap()).abs() < 1e-10);
        }
        // reflection: t(2,2) = (t(2)² − t(4))/2
        let t22 = multiple_t(&Composition::from_ints(&[2, 2]).unwrap(), &cfg).unwrap();
        let want = (t_value(2.0f64).unwrap().powi(2) - t_value(4.0f64).unwrap()) / 2.0;
        assert!((t22.value.re - want).abs() < 1e-10);
        // t(3,1) against a direct double sum with a tail bound below 1e-9
        let t31 = multiple_t(&Composition::from_ints(&[3, 1]).unwrap(), &cfg).unwrap();
        let (mut inner, mut direct) = (0.0f64, 0.0f64);
        for n in 1..200_000u64 {
            let odd = (2 * n - 1) as f64;
            direct += inner / odd.powi(3);
            inner += 1.0 / odd;
        }
        assert!((t31.value.re - direct).abs() < 1e-9, "{t31:?} vs {direct}");
    }
}
