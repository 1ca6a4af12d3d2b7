//! Bessel functions of the first kind and their positive zeros.

use std::sync::RwLock;

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

use super::gamma::gamma;

fn check_order<T: Scalar>(nu: T) -> Result<()> {
    if nu > -T::one() && nu.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("Bessel order must satisfy ν > −1, got {nu}")))
    }
}

/// J_ν(x) for ν > −1 and x ≥ 0.
///
/// Small arguments use the power series, moderate ones Miller's backward
/// recurrence normalized by the Neumann sum for (x/2)^ν, and large ones
/// Hankel's asymptotic expansion.
pub fn bessel_j<T: Scalar>(nu: T, x: T) -> Result<T> {
    check_order(nu)?;
    if !(x >= T::zero()) || !x.is_finite() {
        return Err(Error::Domain(format!("bessel_j requires finite x ≥ 0, got {x}")));
    }
    if x == T::zero() {
        return Ok(if nu == T::zero() {
            T::one()
        } else if nu > T::zero() {
            T::zero()
        } else {
            T::infinity()
        });
    }
    if x <= lit(2.0) {
        return Ok((x * lit(0.5)).powf(nu) / gamma(nu + T::one()) * normalized_series(nu, x));
    }
    if x <= hankel_threshold(nu) {
        return Ok(miller(nu, x));
    }
    Ok(hankel(nu, x))
}

/// Normalized j_ν(x) = Γ(ν+1)(2/x)^ν J_ν(x), equal to 1 at the origin.
pub fn bessel_j_normalized<T: Scalar>(nu: T, x: T) -> Result<T> {
    check_order(nu)?;
    if x <= lit(2.0) && x >= T::zero() {
        return Ok(normalized_series(nu, x));
    }
    let j = bessel_j(nu, x)?;
    Ok(gamma(nu + T::one()) * (lit::<T>(2.0) / x).powf(nu) * j)
}

/// J_ν′(x) = (ν/x) J_ν(x) − J_{ν+1}(x).
pub fn bessel_j_derivative<T: Scalar>(nu: T, x: T) -> Result<T> {
    Ok(nu / x * bessel_j(nu, x)? - bessel_j(nu + T::one(), x)?)
}

fn hankel_threshold<T: Scalar>(nu: T) -> T {
    lit::<T>(25.0).max(lit::<T>(1.5) * nu * nu)
}

/// Σ_m (−x²/4)^m Γ(ν+1) / (m! Γ(ν+m+1)).
fn normalized_series<T: Scalar>(nu: T, x: T) -> T {
    let q = -x * x * lit(0.25);
    let mut term = T::one();
    let mut acc = T::one();
    for m in 1..200 {
        let fm = T::from_usize_lossy(m);
        term = term * q / (fm * (nu + fm));
        acc += term;
        if term.abs() <= T::epsilon() * acc.abs() * lit(0.1) {
            break;
        }
    }
    acc
}

fn miller<T: Scalar>(nu: T, x: T) -> T {
    let start = (x.to_f64_lossy().ceil() as usize + 40) / 2 * 2 + 2;
    let two_over_x = lit::<T>(2.0) / x;
    // g_k = Γ(ν+k) / (Γ(ν+1) k!)
    let half = start / 2;
    let mut g = vec![T::one(); half + 1];
    for k in 1..half {
        g[k + 1] = g[k] * (nu + T::from_usize_lossy(k)) / T::from_usize_lossy(k + 1);
    }
    let big = T::max_value().sqrt().sqrt();
    let mut f_next = T::zero();
    let mut f_cur = T::min_positive_value().sqrt().sqrt();
    let mut weighted = T::zero();
    for idx in (1..=start).rev() {
        if idx % 2 == 0 {
            let k = idx / 2;
            weighted += (nu + T::from_usize_lossy(idx)) * g[k] * f_cur;
        }
        let f_prev = two_over_x * (nu + T::from_usize_lossy(idx)) * f_cur - f_next;
        f_next = f_cur;
        f_cur = f_prev;
        if f_cur.abs() > big {
            let scale = big.recip();
            f_cur *= scale;
            f_next *= scale;
            weighted *= scale;
        }
    }
    let norm = f_cur + weighted;
    let prefactor = (x * lit(0.5)).powf(nu) / gamma(nu + T::one());
    prefactor * f_cur / norm
}

fn hankel<T: Scalar>(nu: T, x: T) -> T {
    let mu = lit::<T>(4.0) * nu * nu;
    let mut p = T::one();
    let mut q = T::zero();
    let mut term = T::one();
    let mut last = T::infinity();
    for k in 1..60usize {
        let odd = T::from_usize_lossy(2 * k - 1);
        term = term * (mu - odd * odd) / (lit::<T>(8.0) * T::from_usize_lossy(k) * x);
        if term.abs() > last {
            break;
        }
        last = term.abs();
        let signed = if (k / 2) % 2 == 0 { term } else { -term };
        if k % 2 == 0 {
            p += signed;
        } else {
            q += signed;
        }
        if term.abs() <= T::epsilon() * lit(0.01) {
            break;
        }
    }
    // χ = x − φ with φ = (ν/2 + 1/4)π, expanded to avoid rounding x − φ.
    let phi = (nu * lit(0.5) + lit(0.25)) * T::PI();
    let (sx, cx) = x.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let cos_chi = cx * cp + sx * sp;
    let sin_chi = sx * cp - cx * sp;
    (lit::<T>(2.0) / (T::PI() * x)).sqrt() * (p * cos_chi - q * sin_chi)
}

/// McMahon's expansion for the k-th positive zero of J_ν.
pub fn mcmahon_guess<T: Scalar>(nu: T, k: usize) -> T {
    let beta = (T::from_usize_lossy(k) + nu * lit(0.5) - lit(0.25)) * T::PI();
    let mu = lit::<T>(4.0) * nu * nu;
    let b8 = lit::<T>(8.0) * beta;
    let b8_3 = b8 * b8 * b8;
    let c1 = mu - T::one();
    let c3 = lit::<T>(4.0) * (mu - T::one()) * (lit::<T>(7.0) * mu - lit(31.0)) / lit(3.0);
    let c5 = lit::<T>(32.0)
        * (mu - T::one())
        * (lit::<T>(83.0) * mu * mu - lit::<T>(982.0) * mu + lit(3779.0))
        / lit(15.0);
    beta - c1 / b8 - c3 / b8_3 - c5 / (b8_3 * b8 * b8)
}

/// Lazily grown table of the positive zeros of J_ν.
///
/// Zeros are appended in order under a write lock; readers see a
/// consistent prefix.
#[derive(Debug)]
pub struct BesselZeroTable<T: Scalar> {
    nu: T,
    zeros: RwLock<Vec<T>>,
}

impl<T: Scalar> BesselZeroTable<T> {
    pub fn new(nu: T) -> Result<Self> {
        check_order(nu)?;
        Ok(Self {
            nu,
            zeros: RwLock::new(Vec::new()),
        })
    }

    pub fn nu(&self) -> T {
        self.nu
    }

    /// The k-th positive zero, k ≥ 1.
    pub fn zero(&self, k: usize) -> Result<T> {
        if k == 0 {
            return Err(Error::OutOfRange { index: 0, len: 0 });
        }
        if let Some(&z) = self.zeros.read().expect("zero table lock").get(k - 1) {
            return Ok(z);
        }
        self.extend_to(k)?;
        Ok(self.zeros.read().expect("zero table lock")[k - 1])
    }

    /// The first `count` zeros.
    pub fn first(&self, count: usize) -> Result<Vec<T>> {
        if count > 0 {
            self.extend_to(count)?;
        }
        Ok(self.zeros.read().expect("zero table lock")[..count].to_vec())
    }

    fn extend_to(&self, k: usize) -> Result<()> {
        let mut zeros = self.zeros.write().expect("zero table lock");
        while zeros.len() < k {
            let next = zeros.len() + 1;
            let prev = zeros.last().copied();
            let z = find_zero(self.nu, next, prev)?;
            zeros.push(z);
        }
        Ok(())
    }
}

/// The k-th positive zero of J_ν. Builds a temporary table; use
/// [`BesselZeroTable`] when many zeros of the same order are needed.
pub fn bessel_zero<T: Scalar>(nu: T, k: usize) -> Result<T> {
    BesselZeroTable::new(nu)?.zero(k)
}

fn j_and_slope<T: Scalar>(nu: T, x: T) -> (T, T) {
    let j = bessel_j(nu, x).unwrap_or(T::nan());
    let jp = nu / x * j - bessel_j(nu + T::one(), x).unwrap_or(T::nan());
    (j, jp)
}

fn find_zero<T: Scalar>(nu: T, k: usize, prev: Option<T>) -> Result<T> {
    let guess = mcmahon_guess(nu, k);
    let beta = (T::from_usize_lossy(k) + nu * lit(0.5) - lit(0.25)) * T::PI();
    let floor = prev.unwrap_or(T::zero());
    if beta > lit::<T>(12.0) + nu * nu {
        // Bracket the McMahon guess by half-spacings around it.
        let w = lit::<T>(0.5) * T::PI() * lit(0.9);
        let (lo, hi) = (guess - w, guess + w);
        if lo > floor {
            let (jl, jh) = (j_and_slope(nu, lo).0, j_and_slope(nu, hi).0);
            if jl * jh < T::zero() {
                return refine(nu, lo, hi, guess, k);
            }
        }
    }
    // Scan forward from the previous zero for the next sign change.
    let start = match prev {
        Some(p) => p * (T::one() + lit(1e-9)) + lit(1e-9),
        None => lit(1e-8),
    };
    let mut a = start;
    let mut ja = j_and_slope(nu, a).0;
    let limit = guess + lit::<T>(4.0) * T::PI() + lit(10.0);
    while a < limit {
        let h = lit::<T>(0.05).min(a * lit(0.5)).max(lit(1e-8));
        let b = a + h;
        let jb = j_and_slope(nu, b).0;
        if ja == T::zero() {
            return Ok(a);
        }
        if ja * jb < T::zero() {
            return refine(nu, a, b, (a + b) * lit(0.5), k);
        }
        a = b;
        ja = jb;
    }
    Err(Error::NoConvergence(format!(
        "no sign change found for zero k={k} of J_ν, ν={nu}"
    )))
}

/// Safeguarded Newton inside a sign-change bracket.
fn refine<T: Scalar>(nu: T, mut lo: T, mut hi: T, start: T, k: usize) -> Result<T> {
    let j_lo = j_and_slope(nu, lo).0;
    let mut x = if start > lo && start < hi { start } else { (lo + hi) * lit(0.5) };
    for _ in 0..200 {
        let (j, jp) = j_and_slope(nu, x);
        if j == T::zero() {
            return Ok(x);
        }
        if (j < T::zero()) == (j_lo < T::zero()) {
            lo = x;
        } else {
            hi = x;
        }
        let mut next = x - j / jp;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = (lo + hi) * lit(0.5);
        }
        let step = (next - x).abs();
        x = next;
        if step <= lit::<T>(4.0) * T::epsilon() * x || hi - lo <= lit::<T>(2.0) * T::epsilon() * x {
            return Ok(x);
        }
    }
    Err(Error::NoConvergence(format!(
        "Newton iteration for zero k={k} of J_ν, ν={nu} stalled in [{lo}, {hi}]"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn half_order(x: f64) -> f64 {
        (2.0 / (PI * x)).sqrt() * x.sin()
    }

    #[test]
    fn half_integer_orders_are_elementary() {
        for &x in &[0.3, 2.0, 7.5, 19.0, 40.0, 150.0] {
            let j = bessel_j(0.5, x).unwrap();
            assert!((j - half_order(x)).abs() < 1e-13, "x={x}");
            let jm = bessel_j(-0.5, x).unwrap();
            let want = (2.0 / (PI * x)).sqrt() * x.cos();
            assert!((jm - want).abs() < 1e-13, "x={x}");
        }
    }

    #[test]
    fn methods_agree_at_switch_points() {
        for &nu in &[0.0, 1.3, 4.0] {
            let s = (1.0f64).powf(nu) / gamma(nu + 1.0) * normalized_series(nu, 2.0);
            assert!((s - miller(nu, 2.0)).abs() < 1e-14);
            let t = hankel_threshold(nu);
            assert!((miller(nu, t) - hankel(nu, t)).abs() < 1e-13, "nu={nu}");
        }
    }

    #[test]
    fn values_at_origin() {
        assert_eq!(bessel_j(1.5, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_j(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j_normalized(2.0, 0.0).unwrap(), 1.0);
        assert!(bessel_j(-1.0, 1.0).is_err());
    }

    #[test]
    fn j0_reference() {
        // J₀(1) from the series with exact rational terms summed in f64
        let mut acc = 0.0;
        let mut t = 1.0;
        for m in 1..30 {
            acc += t;
            t *= -0.25 / (m as f64 * m as f64);
        }
        assert!((bessel_j(0.0, 1.0).unwrap() - acc).abs() < 1e-15);
        assert!((bessel_j(0.0_f64, 10.0).unwrap() + 0.245_935_764_451_348_3).abs() < 1e-15);
    }

    #[test]
    fn zeros_half_order_are_multiples_of_pi() {
        let table = BesselZeroTable::new(0.5).unwrap();
        for k in [1, 2, 3, 50, 400] {
            let z = table.zero(k).unwrap();
            assert!((z - k as f64 * PI).abs() < 1e-12 * z, "k={k}");
        }
    }

    #[test]
    fn first_zero_of_j0() {
        // bisection oracle on the series over [2, 3]
        let f = |x: f64| normalized_series(0.0, x);
        let (mut a, mut b) = (2.0, 3.0);
        for _ in 0..80 {
            let m = 0.5 * (a + b);
            if f(a) * f(m) <= 0.0 {
                b = m;
            } else {
                a = m;
            }
        }
        let z = bessel_zero(0.0, 1).unwrap();
        assert!((z - a).abs() < 1e-12);
        assert!((z - 2.404_825_557_695_773).abs() < 1e-10);
    }

    #[test]
    fn minus_half_order_zeros() {
        let t = BesselZeroTable::new(-0.5).unwrap();
        for k in 1..=20 {
            let z = t.zero(k).unwrap();
            assert!((z - (k as f64 - 0.5) * PI).abs() < 1e-12 * z);
        }
    }

    #[test]
    fn order_near_minus_one() {
        let nu = -0.999_f64;
        let z = bessel_zero(nu, 1).unwrap();
        assert!(z > 0.0 && z < 0.2, "z={z}");
        assert!(bessel_j(nu, z).unwrap().abs() < 1e-10);
    }

    #[test]
    fn interlacing() {
        for &nu in &[0.0, 0.5, 1.3] {
            let a = BesselZeroTable::new(nu).unwrap().first(51).unwrap();
            let b = BesselZeroTable::new(nu + 1.0).unwrap().first(50).unwrap();
            for k in 0..50 {
                assert!(a[k] < b[k] && b[k] < a[k + 1], "nu={nu} k={k}");
            }
        }
    }

    #[test]
    fn residual_and_mcmahon_proximity() {
        let t = BesselZeroTable::new(1.3).unwrap();
        let zs = t.first(200).unwrap();
        for (i, &z) in zs.iter().enumerate() {
            let k = i + 1;
            let r = bessel_j(1.3_f64, z).unwrap().abs();
            assert!(r <= 1e-12, "k={k} r={r}");
            if k >= 10 {
                let m = (k as f64 + 0.65 - 0.25) * PI;
                assert!((z - m).abs() < 0.01 * m);
            }
        }
    }
}
