//! Closed-form evaluations of complementary zeta functions for the
//! shifted-linear, half-integer, square, pronic, Bessel-zero and
//! Bessel-polynomial sequences, with the exact pronic coefficient families.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_complex::Complex;

use crate::error::{invalid, Error, Result};
use crate::scalar::{lit, real, Scalar};
use crate::sequences::{make_sequence, Family, SequenceSpec};
use crate::specialfn::{digamma, hurwitz_zeta, multiple_t, polygamma, riemann_zeta, t_value};
use crate::summation::{
    drive, extended_mzv, extended_zeta, Composition, EvalResult, SummationConfig, TailClass,
};

/// Exact binomial coefficient; zero outside 0 ≤ k ≤ n.
fn binom(n: i64, k: i64) -> Result<u128> {
    if n < 0 || k < 0 || k > n {
        return Ok(0);
    }
    let k = k.min(n - k) as u128;
    let n = n as u128;
    let mut c: u128 = 1;
    for i in 1..=k {
        c = c
            .checked_mul(n - k + i)
            .ok_or_else(|| invalid("s", "binomial coefficient overflows 128 bits"))?
            / i;
    }
    Ok(c)
}

fn to_i128(x: u128) -> Result<i128> {
    i128::try_from(x).map_err(|_| invalid("s", "coefficient overflows 128 bits"))
}

fn beta_cache() -> &'static RwLock<HashMap<(u32, u32), u128>> {
    static CACHE: OnceLock<RwLock<HashMap<(u32, u32), u128>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// β_k^(s) = Σ_{i=0}^{s−k−1} 4^i C(2s−2i−k−2, s−i−1), for 0 ≤ k ≤ s.
pub fn coeff_beta(k: u32, s: u32) -> Result<u128> {
    if s == 0 || k > s {
        return Err(invalid("k", format!("β_k^(s) needs 0 ≤ k ≤ s and s ≥ 1, got k={k}, s={s}")));
    }
    if let Some(&b) = beta_cache().read().expect("beta cache lock").get(&(k, s)) {
        return Ok(b);
    }
    let (k64, s64) = (i64::from(k), i64::from(s));
    let mut acc: u128 = 0;
    for i in 0..(s64 - k64).max(0) {
        let pow = 1u128
            .checked_shl(2 * i as u32)
            .filter(|_| 2 * i < 127)
            .ok_or_else(|| invalid("s", "β coefficient overflows 128 bits"))?;
        let term = binom(2 * s64 - 2 * i - k64 - 2, s64 - i - 1)?
            .checked_mul(pow)
            .ok_or_else(|| invalid("s", "β coefficient overflows 128 bits"))?;
        acc = acc
            .checked_add(term)
            .ok_or_else(|| invalid("s", "β coefficient overflows 128 bits"))?;
    }
    beta_cache().write().expect("beta cache lock").insert((k, s), acc);
    Ok(acc)
}

/// μ_k^(s), the coefficient of ζ(k) in the pronic complementary zeta, for 2 ≤ k ≤ s.
pub fn coeff_mu(k: u32, s: u32) -> Result<i128> {
    if k < 2 || k > s {
        return Err(invalid("k", format!("μ_k^(s) needs 2 ≤ k ≤ s, got k={k}, s={s}")));
    }
    let (k64, s64) = (i64::from(k), i64::from(s));
    let a = to_i128(binom(2 * s64 - 2 - k64, s64 - 2)?)?;
    let b = to_i128(binom(2 * s64 - 2 - k64, s64 - 1)?)?;
    if k.is_multiple_of(2) {
        Ok(3 * (a + b) - 2 * to_i128(coeff_beta(k - 1, s - 1)?)?)
    } else {
        Ok(a - b)
    }
}

/// Simplified expression for the odd-index coefficients μ_{2k+1}^(s).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OddMuForm {
    /// (2k/(s−1)) C(2s−2k−3, s−2), which equals `coeff_mu(2k+1, s)`.
    #[default]
    Corrected,
    /// (2k/(s−1)) C(2s−2k−1, s−2), as printed.
    Printed,
}

/// μ_{2k+1}^(s) from its closed simplification, for k ≥ 1 and 2k+1 ≤ s.
pub fn coeff_mu_odd<T: Scalar>(k: u32, s: u32, form: OddMuForm) -> Result<T> {
    if k == 0 || 2 * k + 1 > s {
        return Err(invalid("k", format!("μ_(2k+1)^(s) needs 1 ≤ k and 2k+1 ≤ s, got k={k}, s={s}")));
    }
    let top = match form {
        OddMuForm::Corrected => 2 * i64::from(s) - 2 * i64::from(k) - 3,
        OddMuForm::Printed => 2 * i64::from(s) - 2 * i64::from(k) - 1,
    };
    let c = binom(top, i64::from(s) - 2)? as f64;
    Ok(lit::<T>(2.0 * f64::from(k) * c / f64::from(s - 1)))
}

/// η_s = (s − ½)C(2s−2, s−1) − C(2s−2, s) − 4C(2s−3, s−2) − (π²/8 − ½)2^(2s−2), s ≥ 2.
pub fn coeff_eta<T: Scalar>(s: u32) -> Result<T> {
    if s < 2 {
        return Err(invalid("s", format!("η_s needs s ≥ 2, got {s}")));
    }
    let s64 = i64::from(s);
    let c1 = binom(2 * s64 - 2, s64 - 1)? as f64;
    let c2 = binom(2 * s64 - 2, s64)? as f64;
    let c3 = binom(2 * s64 - 3, s64 - 2)? as f64;
    let integer_part = (f64::from(s) - 0.5) * c1 - c2 - 4.0 * c3;
    let pi2 = T::PI() * T::PI();
    let pow = lit::<T>(2.0).powi(2 * s as i32 - 2);
    Ok(lit::<T>(integer_part) - (pi2 / lit(8.0) - lit(0.5)) * pow)
}

/// Pronic complementary zeta (−1)^s (Σ_{k=2}^s μ_k^(s) ζ(k) + η_s), s ≥ 2.
///
/// The π² contributions of η_s and μ_2 ζ(2) are combined exactly first, so
/// that ζ̃(2) comes out as exactly zero.
pub fn cf_pronic<T: Scalar>(s: u32) -> Result<T> {
    if s < 2 {
        return Err(invalid("s", format!("η_s needs s ≥ 2, got {s}")));
    }
    let s64 = i64::from(s);
    let c1 = binom(2 * s64 - 2, s64 - 1)? as f64;
    let c2 = binom(2 * s64 - 2, s64)? as f64;
    let c3 = binom(2 * s64 - 3, s64 - 2)? as f64;
    let pow = 2f64.powi(2 * s as i32 - 2);
    let rational = (f64::from(s) - 0.5) * c1 - c2 - 4.0 * c3 + 0.5 * pow;
    // π² (μ_2/6 − 2^(2s−2)/8) = π² (4μ_2 − 3·2^(2s−2)) / 24
    let pi2_num = 4 * coeff_mu(2, s)? - 3 * (1i128 << (2 * s - 2));
    let mut acc = lit::<T>(rational) + lit::<T>(pi2_num as f64) * T::PI() * T::PI() / lit(24.0);
    for k in 3..=s {
        let mu = coeff_mu(k, s)? as f64;
        acc += lit::<T>(mu) * riemann_zeta(T::from_u32(k).expect("small integer"))?;
    }
    Ok(if s.is_multiple_of(2) { acc } else { -acc })
}

/// The pronic complementary zeta assembled from its three constituent series
/// Σ 1/(n^s (n+1)^(s−1)) − 2Σ 1/(n^(s−1) (n+1)^s) + Σ 1/((2n+1)² (n(n+1))^(s−1)).
pub fn pronic_decomposition<T: Scalar>(s: u32, config: &SummationConfig<T>) -> Result<EvalResult<T>> {
    if s < 2 {
        return Err(invalid("s", format!("needs s ≥ 2, got {s}")));
    }
    let e = s as i32;
    let parts: [fn(T, i32) -> T; 3] = [
        |n, e| T::one() / (n.powi(e) * (n + T::one()).powi(e - 1)),
        |n, e| lit::<T>(2.0) / (n.powi(e - 1) * (n + T::one()).powi(e)),
        |n, e| {
            let m = lit::<T>(2.0) * n + T::one();
            T::one() / (m * m * (n * (n + T::one())).powi(e - 1))
        },
    ];
    let class = [TailClass::power(T::from_u32(2 * s - 2).expect("small integer"))];
    let mut out = Vec::with_capacity(3);
    for f in parts {
        let mut acc = crate::summation::ComplexSum::new();
        let mut done = 0usize;
        let r = drive(config, config.min_terms, &class, |upto| {
            while done < upto {
                done += 1;
                acc.add(real(f(T::from_usize_lossy(done), e)));
            }
            Ok(acc.value())
        })?;
        out.push(r);
    }
    Ok(combine(&[(out[0], T::one()), (out[1], -T::one()), (out[2], T::one())]))
}

/// Σ c_i r_i with summed error estimates.
fn combine<T: Scalar>(parts: &[(EvalResult<T>, T)]) -> EvalResult<T> {
    let mut value = Complex::new(T::zero(), T::zero());
    let mut err = T::zero();
    let mut terms = 0;
    let mut converged = true;
    for (r, c) in parts {
        value += r.value * *c;
        err += r.abs_error_estimate * c.abs();
        terms = terms.max(r.terms_used);
        converged &= r.converged;
    }
    EvalResult {
        value,
        abs_error_estimate: err,
        terms_used: terms,
        converged,
    }
}

fn exact_real<T: Scalar>(v: T) -> EvalResult<T> {
    EvalResult::exact(real(v), lit::<T>(64.0) * T::epsilon() * v.abs().max(T::one()), 0)
}

fn integer_s<T: Scalar>(s: u32) -> T {
    T::from_u32(s).expect("small integer")
}

/// 1/z̃_k = ψ(k + a) − ψ(k) for z_k = k + a − 1.
pub fn cf_shifted_linear_term<T: Scalar>(a: T, k: usize) -> Result<T> {
    check_shift(a)?;
    if k == 0 {
        return Err(invalid("k", "indices start at 1"));
    }
    let x = T::from_usize_lossy(k);
    Ok(digamma(x + a)? - digamma(x)?)
}

fn check_shift<T: Scalar>(a: T) -> Result<()> {
    if !(a > T::zero() && a <= T::one()) {
        return Err(invalid("a", format!("must lie in (0, 1], got {a}")));
    }
    Ok(())
}

/// Complementary zeta of z_k = k + a − 1:
/// ζ_H(s−1, a)[ψ(a+1) − ψ(1)] − a Σ_{l≥0} ζ_H(s−1, a+l+1)/((a+l+1)(l+1)).
pub fn cf_shifted_linear<T: Scalar>(a: T, s: u32, config: &SummationConfig<T>) -> Result<EvalResult<T>> {
    check_shift(a)?;
    if s < 3 {
        return Err(invalid("s", format!("needs s ≥ 3, got {s}")));
    }
    let sm1 = integer_s::<T>(s - 1);
    let head = hurwitz_zeta(sm1, a)? * (digamma(a + T::one())? - digamma(T::one())?);
    let mut acc = crate::summation::ComplexSum::new();
    let mut done = 0usize;
    let mut failure = None;
    let series = drive(config, config.min_terms, &[TailClass::power(sm1)], |upto| {
        while done < upto {
            let l = T::from_usize_lossy(done);
            let x = a + l + T::one();
            match hurwitz_zeta(sm1, x) {
                Ok(h) => acc.add(real(h / (x * (l + T::one())))),
                Err(e) => failure = Some(e),
            }
            done += 1;
        }
        Ok(acc.value())
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(combine(&[(exact_real(head), T::one()), (series, -a)]))
}

/// Which bilinear polygamma sum to use in the half-integer closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HalfIntegerForm {
    /// Σ_{k=0}^{s−3} C(s−3, k) ψ^(k+1)(½) ψ^(s−k−3)(½) − ½ψ^(s−1)(½), scaled by (−1)^(s−1)/(s−2)!.
    #[default]
    Printed,
    /// The same bilinear sum taken at order s instead of s − 1.
    Unshifted,
}

fn psi_half<T: Scalar>(m: u32) -> Result<T> {
    polygamma(m, lit(0.5))
}

fn factorial<T: Scalar>(n: u32) -> T {
    (2..=n).fold(T::one(), |acc, i| acc * integer_s::<T>(i))
}

/// Bilinear polygamma term (−1)^q/(q−1)! [Σ_{k=0}^{q−2} C(q−2,k) ψ^(k+1)(½)ψ^(q−k−2)(½) − ½ψ^(q)(½)].
fn bilinear_psi<T: Scalar>(q: u32) -> Result<T> {
    let mut acc = T::zero();
    for k in 0..=q - 2 {
        let c = binom(i64::from(q - 2), i64::from(k))? as f64;
        acc += lit::<T>(c) * psi_half::<T>(k + 1)? * psi_half::<T>(q - k - 2)?;
    }
    acc -= lit::<T>(0.5) * psi_half::<T>(q)?;
    let sign = if q.is_multiple_of(2) { T::one() } else { -T::one() };
    Ok(sign * acc / factorial::<T>(q - 1))
}

/// Complementary zeta of z_k = k − ½ in terms of multiple t-values and
/// polygamma values at ½, for s ≥ 3.
pub fn cf_half_integer<T: Scalar>(s: u32, config: &SummationConfig<T>) -> Result<EvalResult<T>> {
    cf_half_integer_with(s, HalfIntegerForm::Printed, config)
}

pub fn cf_half_integer_with<T: Scalar>(
    s: u32,
    form: HalfIntegerForm,
    config: &SummationConfig<T>,
) -> Result<EvalResult<T>> {
    if s < 3 {
        return Err(invalid("s", format!("t(s−1, 1) diverges unless s ≥ 3, got {s}")));
    }
    let st = integer_s::<T>(s);
    let sm1 = integer_s::<T>(s - 1);
    let t_s = t_value(st)?;
    let t_sm1 = t_value(sm1)?;
    let t_double = multiple_t(&Composition::new(vec![sm1, T::one()])?, config)?;
    let pow = lit::<T>(2.0).powi(s as i32);
    let single = pow * (t_s + lit::<T>(0.5) * digamma(lit::<T>(0.5))? * t_sm1);
    let q = match form {
        HalfIntegerForm::Printed => s - 1,
        HalfIntegerForm::Unshifted => s,
    };
    let bilinear = bilinear_psi::<T>(q)?;
    Ok(combine(&[
        (exact_real(single - bilinear), T::one()),
        (t_double, pow),
    ]))
}

/// Which display to use for the half-integer closed form at odd arguments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HalfIntegerOddForm {
    /// The evaluation with ψ(½) = −γ − 2 ln 2 substituted into the k = 2s−2
    /// term of the bilinear sum:
    /// 2 ln2 (2^(2s)−1)ζ(2s) + (½ − s)(2^(2s+1)−1)ζ(2s+1)
    /// − Σ_{l=1}^{s−1} (2^(2l)−1)ζ(2l)ζ(2s+1−2l)
    /// + (1/(2s−1)) Σ_{k=0}^{2s−3} (k+1)(2^(k+2)−1)ζ(k+2)(2^(2s−k−1)−1)ζ(2s−k−1).
    #[default]
    Corrected,
    /// The printed display, whose k = 2s−2 term contains ζ(1).
    Printed,
}

/// Complementary zeta of z_k = k − ½ at the odd argument 2s + 1, s ≥ 1.
pub fn cf_half_integer_odd<T: Scalar>(s: u32) -> Result<T> {
    cf_half_integer_odd_with(s, HalfIntegerOddForm::Corrected)
}

pub fn cf_half_integer_odd_with<T: Scalar>(s: u32, form: HalfIntegerOddForm) -> Result<T> {
    if s < 1 {
        return Err(invalid("s", "needs s ≥ 1"));
    }
    if form == HalfIntegerOddForm::Printed {
        return Err(Error::Domain(format!(
            "the printed odd-argument display contains ζ(1) in its k = {} term",
            2 * s - 2
        )));
    }
    let two = lit::<T>(2.0);
    let z = |n: u32| riemann_zeta(integer_s::<T>(n));
    let m = |n: u32| two.powi(n as i32) - T::one();
    let mut acc = two * two.ln() * m(2 * s) * z(2 * s)?;
    acc += (lit::<T>(0.5) - integer_s::<T>(s)) * m(2 * s + 1) * z(2 * s + 1)?;
    for l in 1..s {
        acc -= m(2 * l) * z(2 * l)? * z(2 * s + 1 - 2 * l)?;
    }
    let mut inner = T::zero();
    for k in 0..(2 * s).saturating_sub(2) {
        inner += integer_s::<T>(k + 1) * m(k + 2) * z(k + 2)? * m(2 * s - k - 1) * z(2 * s - k - 1)?;
    }
    Ok(acc + inner / integer_s::<T>(2 * s - 1))
}

/// 1/z̃_k = 3/(4k²) − ψ′(k+1) for z_k = k².
pub fn cf_squares_term<T: Scalar>(k: usize) -> Result<T> {
    if k == 0 {
        return Err(invalid("k", "indices start at 1"));
    }
    let x = T::from_usize_lossy(k);
    Ok(lit::<T>(0.75) / (x * x) - polygamma(1, x + T::one())?)
}

/// Complementary zeta of z_k = k²: (7/4)ζ(2s) − ζ(2)ζ(2s−2) + ζ(2s−2, 2), s ≥ 2.
pub fn cf_squares<T: Scalar>(s: u32, config: &SummationConfig<T>) -> Result<EvalResult<T>> {
    if s < 2 {
        return Err(invalid("s", format!("needs s ≥ 2, got {s}")));
    }
    let natural = make_sequence(SequenceSpec::infinite(Family::Natural))?;
    let depth2 = extended_mzv(
        &natural,
        &Composition::new(vec![integer_s::<T>(2 * s - 2), integer_s::<T>(2)])?,
        config,
    )?;
    let single = lit::<T>(1.75) * riemann_zeta(integer_s::<T>(2 * s))?
        - riemann_zeta(integer_s::<T>(2))? * riemann_zeta(integer_s::<T>(2 * s - 2))?;
    Ok(combine(&[(exact_real(single), T::one()), (depth2, T::one())]))
}

/// 1/z̃_k = 1/k − 2/(k+1) + 1/(2k+1)² for z_k = k(k+1).
pub fn cf_pronic_term<T: Scalar>(k: usize) -> Result<T> {
    if k == 0 {
        return Err(invalid("k", "indices start at 1"));
    }
    let x = T::from_usize_lossy(k);
    let m = lit::<T>(2.0) * x + T::one();
    Ok(x.recip() - lit::<T>(2.0) / (x + T::one()) + (m * m).recip())
}

/// Bessel complementary zeta ((ν+1)/2) ζ_B(2s) − ζ_B(2, 2s−2), s ≥ 2, where
/// ζ_B(2s) sums x_{ν,k}^(−2s) over the positive zeros of J_ν.
pub fn cf_bessel_complementary<T: Scalar>(nu: T, s: u32, config: &SummationConfig<T>) -> Result<EvalResult<T>> {
    if s < 2 {
        return Err(invalid("s", format!("needs s ≥ 2, got {s}")));
    }
    let seq = make_sequence(SequenceSpec::infinite(Family::BesselSquaredZeros(nu)))?;
    let single = extended_zeta(&seq, integer_s::<T>(s), config)?;
    let depth2 = extended_mzv(&seq, &Composition::new(vec![T::one(), integer_s::<T>(s - 1)])?, config)?;
    let half = (nu + T::one()) / lit(2.0);
    Ok(combine(&[(single, half), (depth2, -T::one())]))
}

/// Rational values of ζ_B(2), ζ_B(4) and ζ_B(6).
pub fn cf_bessel_small<T: Scalar>(nu: T, two_s: u32) -> Result<T> {
    if !(nu > -T::one()) {
        return Err(invalid("nu", format!("must exceed −1, got {nu}")));
    }
    let a = nu + T::one();
    let b = nu + lit(2.0);
    let c = nu + lit(3.0);
    match two_s {
        2 => Ok((lit::<T>(4.0) * a).recip()),
        4 => Ok((lit::<T>(16.0) * a * a * b).recip()),
        6 => Ok((lit::<T>(32.0) * a * a * a * b * c).recip()),
        _ => Err(invalid("two_s", format!("must be 2, 4 or 6, got {two_s}"))),
    }
}

/// Complementary zeta over the roots of θ_n:
/// (½ − ν) ζ_Z(s) − ζ_Z(s−1) − ζ_Z(1, s−1), with ν = n + ½.
pub fn cf_besselpoly_complementary<T: Scalar>(n: usize, s: i32, config: &SummationConfig<T>) -> Result<EvalResult<T>> {
    let seq = make_sequence(SequenceSpec::infinite(Family::BesselPolyRoots(n)))?;
    let st = lit::<T>(f64::from(s));
    let nu = T::from_usize_lossy(n) + lit(0.5);
    let a = extended_zeta(&seq, st, config)?;
    let b = extended_zeta(&seq, st - T::one(), config)?;
    let c = extended_mzv(&seq, &Composition::new(vec![T::one(), st - T::one()])?, config)?;
    Ok(combine(&[(a, lit::<T>(0.5) - nu), (b, -T::one()), (c, -T::one())]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complementary::{complementary_term, complementary_zeta};
    use crate::sequences::SequenceSource;
    use std::f64::consts::PI;

    const ZETA3: f64 = 1.202_056_903_159_594_3;

    fn cfg() -> SummationConfig<f64> {
        SummationConfig::default()
    }

    fn inf(f: Family<f64>) -> SequenceSource<f64> {
        make_sequence(SequenceSpec::infinite(f)).unwrap()
    }

    fn numeric(f: Family<f64>, s: f64) -> EvalResult<f64> {
        complementary_zeta(&inf(f), s, &cfg()).unwrap()
    }

    #[test]
    fn beta_small_values() {
        assert_eq!(coeff_beta(0, 3).unwrap(), 30);
        assert_eq!(coeff_beta(1, 3).unwrap(), 7);
        assert_eq!(coeff_beta(2, 3).unwrap(), 1);
        assert_eq!(coeff_beta(3, 3).unwrap(), 0);
        assert_eq!(
            coeff_beta(1, 4).unwrap() - coeff_beta(2, 4).unwrap(),
            coeff_beta(0, 3).unwrap()
        );
        let row: u128 = (0..=3).map(|k| coeff_beta(k, 3).unwrap()).sum();
        assert_eq!(row, 38);
        assert!(coeff_beta(4, 3).is_err());
    }

    fn binom_u(n: u128, k: u128) -> u128 {
        (0..k).fold(1, |c, i| c * (n - i) / (i + 1))
    }

    #[test]
    fn beta_recurrence_and_row_sums() {
        for s in 1..=20u32 {
            let row: u128 = (0..=s).map(|k| coeff_beta(k, s).unwrap()).sum();
            let s = u128::from(s);
            let central = binom_u(2 * s + 1, s) * (s + 1);
            assert_eq!(2 * row + (1u128 << (2 * s)), central, "s={s}");
        }
        for k in 1..=10u32 {
            for s in 1..=10u32 {
                let lhs = coeff_beta(k, s + k + 1).unwrap() - coeff_beta(k + 1, s + k + 1).unwrap();
                assert_eq!(lhs, coeff_beta(k - 1, s + k).unwrap(), "k={k} s={s}");
            }
        }
    }

    #[test]
    fn beta_matches_generating_function() {
        // Taylor coefficients of (1−4z)^(−3/2) C(z)^q, C the Catalan series.
        const N: usize = 14;
        let mul = |a: &[f64], b: &[f64]| {
            let mut c = vec![0.0; N];
            for i in 0..N {
                for j in 0..N - i {
                    c[i + j] += a[i] * b[j];
                }
            }
            c
        };
        let catalan: Vec<f64> = (0..N as u128).map(|n| (binom_u(2 * n, n) / (n + 1)) as f64).collect();
        let mut base = vec![0.0; N];
        for (n, b) in base.iter_mut().enumerate() {
            // (1−4z)^(−3/2) = Σ (2n+1) C(2n, n) z^n
            *b = ((2 * n + 1) as u128 * binom_u(2 * n as u128, n as u128)) as f64;
        }
        let mut series = base;
        for q in 0..8u32 {
            for n in 0..N - q as usize - 2 {
                let s = n as u32 + q + 1;
                assert_eq!(coeff_beta(q, s).unwrap() as f64, series[n], "q={q} n={n}");
            }
            series = mul(&series, &catalan);
        }
    }

    #[test]
    fn mu_odd_simplification() {
        for s in 3..=20u32 {
            for k in 1..=(s - 1) / 2 {
                let direct = coeff_mu(2 * k + 1, s).unwrap() as f64;
                let simple: f64 = coeff_mu_odd(k, s, OddMuForm::Corrected).unwrap();
                assert!((direct - simple).abs() < 1e-9 * direct.abs().max(1.0), "s={s} k={k}");
            }
        }
        for s in [4u32, 5, 6] {
            let direct = coeff_mu(3, s).unwrap() as f64;
            let printed: f64 = coeff_mu_odd(1, s, OddMuForm::Printed).unwrap();
            assert!((direct - printed).abs() > 1.0);
        }
        assert!(coeff_mu(1, 4).is_err());
        assert!(coeff_mu(5, 4).is_err());
    }

    #[test]
    fn pronic_first_values() {
        let z3 = ZETA3;
        assert_eq!(cf_pronic::<f64>(2).unwrap(), 0.0);
        assert_eq!(cf_pronic::<f32>(2).unwrap(), 0.0);
        let want3 = -7.0 + 5.0 * PI * PI / 6.0 - z3;
        assert!((cf_pronic::<f64>(3).unwrap() - want3).abs() < 1e-12);
        let want4 = 47.0 - 16.0 * PI * PI / 3.0 + PI.powi(4) / 30.0 + 2.0 * z3;
        assert!((cf_pronic::<f64>(4).unwrap() - want4).abs() < 1e-11);
        let t: f64 = cf_pronic_term(3).unwrap();
        assert!((t - (1.0 / 3.0 - 0.5 + 1.0 / 49.0)).abs() < 1e-15);
        assert!((t + 0.146_258).abs() < 1e-6);
    }

    #[test]
    fn pronic_decomposition_agrees() {
        for s in 2..=10u32 {
            let d = pronic_decomposition(s, &cfg()).unwrap();
            let c: f64 = cf_pronic(s).unwrap();
            assert!((d.value.re - c).abs() < 1e-9, "s={s}: {} vs {c}", d.value.re);
        }
    }

    #[test]
    fn pronic_matches_numeric() {
        for s in [3.0, 4.0] {
            let n = numeric(Family::Pronic, s);
            let c: f64 = cf_pronic(s as u32).unwrap();
            assert!((n.value.re - c).abs() < 1e-8);
        }
    }

    #[test]
    fn shifted_linear_forms() {
        for s in [3u32, 4] {
            let r = cf_shifted_linear(1.0, s, &cfg()).unwrap();
            let z: f64 = riemann_zeta(f64::from(s)).unwrap();
            assert!((r.value.re - z).abs() < 1e-9, "s={s}");
        }
        let a = cf_shifted_linear(0.5, 3, &cfg()).unwrap();
        let b = cf_half_integer(3, &cfg()).unwrap();
        assert!((a.value.re - b.value.re).abs() < 1e-8);
        let c = cf_shifted_linear(0.3, 4, &cfg()).unwrap();
        let n = numeric(Family::ShiftedLinear(0.3), 4.0);
        assert!((c.value.re - n.value.re).abs() < 1e-7);
        assert!(cf_shifted_linear(0.0, 3, &cfg()).is_err());
        assert!(cf_shifted_linear(0.5, 2, &cfg()).is_err());
    }

    #[test]
    fn closed_terms_match_numeric_terms() {
        let squares = inf(Family::Squares);
        let pronic = inf(Family::Pronic);
        let shifted = inf(Family::ShiftedLinear(0.3));
        for k in [1usize, 2, 7, 30] {
            let n = complementary_term(&squares, k, &cfg()).unwrap().inv_value.re;
            assert!((n - cf_squares_term::<f64>(k).unwrap()).abs() < 1e-8);
            let n = complementary_term(&pronic, k, &cfg()).unwrap().inv_value.re;
            assert!((n - cf_pronic_term::<f64>(k).unwrap()).abs() < 1e-8);
            let n = complementary_term(&shifted, k, &cfg()).unwrap().inv_value.re;
            assert!((n - cf_shifted_linear_term(0.3, k).unwrap()).abs() < 1e-8);
        }
        let want = 0.75 - (PI * PI / 6.0 - 1.0);
        assert!((cf_squares_term::<f64>(1).unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn half_integer_forms() {
        let n3 = numeric(Family::HalfInteger, 3.0);
        let printed = cf_half_integer(3, &cfg()).unwrap();
        assert!((printed.value.re - n3.value.re).abs() < 1e-7);
        let unshifted = cf_half_integer_with(3, HalfIntegerForm::Unshifted, &cfg()).unwrap();
        assert!((unshifted.value.re - n3.value.re).abs() > 1e-3);
        let odd1: f64 = cf_half_integer_odd(1).unwrap();
        assert!((odd1 - n3.value.re).abs() < 1e-7);
        let odd2: f64 = cf_half_integer_odd(2).unwrap();
        let five = cf_half_integer(5, &cfg()).unwrap();
        assert!((odd2 - five.value.re).abs() < 1e-8);
        let n5 = numeric(Family::HalfInteger, 5.0);
        assert!((odd2 - n5.value.re).abs() < 1e-7);
        assert!(cf_half_integer_odd_with::<f64>(1, HalfIntegerOddForm::Printed).is_err());
        assert!(cf_half_integer(2, &cfg()).is_err());
    }

    #[test]
    fn squares_forms() {
        let z2 = PI * PI / 6.0;
        let z4 = PI.powi(4) / 90.0;
        let want = 1.75 * z4 - z2 * z2 + (z2 * z2 - z4) / 2.0;
        let c = cf_squares(2, &cfg()).unwrap();
        assert!((c.value.re - want).abs() < 1e-10);
        for s in [2.0, 3.0, 4.0] {
            let c = cf_squares(s as u32, &cfg()).unwrap();
            let n = numeric(Family::Squares, s);
            assert!((c.value.re - n.value.re).abs() < 1e-7, "s={s}");
        }
    }

    #[test]
    fn bessel_small_values() {
        assert!((cf_bessel_small(0.0_f64, 2).unwrap() - 0.25).abs() < 1e-16);
        assert!((cf_bessel_small(0.5_f64, 2).unwrap() - 1.0 / 6.0).abs() < 1e-16);
        assert!((cf_bessel_small(0.0_f64, 6).unwrap() - 1.0 / 192.0).abs() < 1e-17);
        assert!(cf_bessel_small(0.0_f64, 8).is_err());
        // ν = ½ gives Σ (kπ)^(−4) = ζ(4)/π⁴ = 1/90
        assert!((cf_bessel_small(0.5_f64, 4).unwrap() - 1.0 / 90.0).abs() < 1e-16);
    }

    #[test]
    fn bessel_complementary_forms() {
        let c = cf_bessel_complementary(1.3, 3, &cfg()).unwrap();
        let n = numeric(Family::BesselSquaredZeros(1.3), 3.0);
        assert!((c.value.re - n.value.re).abs() < 1e-6 * n.value.re.abs().max(1.0));
        // z_k = (kπ)² scales the squares case by π^(−2s)
        for s in [2u32, 3] {
            let b = cf_bessel_complementary(0.5, s, &cfg()).unwrap();
            let q = cf_squares(s, &cfg()).unwrap();
            let scaled = q.value.re / PI.powi(2 * s as i32);
            assert!((b.value.re - scaled).abs() < 1e-9 * scaled.abs().max(1e-3), "s={s}");
        }
    }

    #[test]
    fn besselpoly_complementary_forms() {
        // n = 1: single root −1, ν = 3/2
        for s in [2i32, 3, 4] {
            let r = cf_besselpoly_complementary(1, s, &cfg()).unwrap();
            let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
            let want = -sign - (-sign);
            assert!((r.value.re - want).abs() < 1e-14);
        }
        let seq = inf(Family::BesselPolyRoots(2));
        for s in [2i32, 3, 5] {
            let r = cf_besselpoly_complementary(2, s, &cfg()).unwrap();
            let n = complementary_zeta(&seq, f64::from(s), &cfg()).unwrap();
            assert!((r.value - n.value).norm() < 1e-10, "s={s}");
        }
    }
}
