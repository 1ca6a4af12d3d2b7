//! Limits of partial sums over a geometric ladder of truncation points.
//!
//! Partial sums are modelled as S(N) = S + Σ_i c_i N^(−e_i) (ln N)^(l_i)
//! and the unknowns S, c_i are solved from consecutive ladder points.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

/// One family of tail terms N^(−(exponent + m)) (ln N)^l, m = 0, 1, …, l ≤ log_power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailClass<T> {
    pub exponent: T,
    pub log_power: u32,
}

impl<T: Scalar> TailClass<T> {
    pub fn power(exponent: T) -> Self {
        Self {
            exponent,
            log_power: 0,
        }
    }
}

/// Basis functions (exponent, log power) for the first `steps` integer
/// steps of each class, sorted by decay.
pub fn expand_basis<T: Scalar>(classes: &[TailClass<T>], steps: usize) -> Vec<(T, u32)> {
    let mut out: Vec<(T, u32)> = Vec::new();
    for c in classes {
        for m in 0..steps {
            let e = c.exponent + T::from_usize_lossy(m);
            for l in (0..=c.log_power).rev() {
                if !out
                    .iter()
                    .any(|&(e2, l2)| l2 == l && (e2 - e).abs() <= lit(1e-9))
                {
                    out.push((e, l));
                }
            }
        }
    }
    out.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(b.1.cmp(&a.1))
    });
    out
}

/// Merges classes whose exponents differ by an integer, keeping the smaller
/// exponent and the larger log power.
pub fn merge_classes<T: Scalar>(classes: Vec<TailClass<T>>) -> Vec<TailClass<T>> {
    let mut out: Vec<TailClass<T>> = Vec::new();
    for c in classes {
        let tol = lit::<T>(1e-9);
        match out.iter_mut().find(|o| {
            let d = o.exponent - c.exponent;
            (d - d.round()).abs() <= tol
        }) {
            Some(o) => {
                o.exponent = o.exponent.min(c.exponent);
                o.log_power = o.log_power.max(c.log_power);
            }
            None => out.push(c),
        }
    }
    out.sort_by(|a, b| a.exponent.partial_cmp(&b.exponent).unwrap_or(std::cmp::Ordering::Equal));
    out
}

/// Tail classes of the outer partial sums of Σ_{n₁>…>n_k} Π z_{n_j}^(−s_j)
/// when z_n grows like n^p with an expansion in integer steps.
///
/// Works inward-out: the innermost accumulator is the constant 1, and each
/// partial summation lowers exponents by one, adding a logarithm whenever
/// it passes through n^(−1).
pub fn mzv_tail_classes<T: Scalar>(p: T, exponents: &[T]) -> Vec<TailClass<T>> {
    let one = T::one();
    let mut inner = vec![TailClass::power(T::zero())];
    for &s in exponents.iter().skip(1).rev() {
        let mut next = vec![TailClass::power(T::zero())];
        for c in &inner {
            next.push(partial_sum_class(p * s + c.exponent, c.log_power));
        }
        inner = merge_classes(next);
    }
    let s1 = exponents[0];
    let outer: Vec<_> = inner
        .iter()
        .map(|c| {
            let f = p * s1 + c.exponent;
            TailClass {
                exponent: f - one,
                log_power: c.log_power,
            }
        })
        .collect();
    merge_classes(outer)
}

fn partial_sum_class<T: Scalar>(f: T, log_power: u32) -> TailClass<T> {
    let shift = T::one() - f;
    let hits_harmonic = shift >= -lit::<T>(1e-9) && (shift - shift.round()).abs() <= lit(1e-9);
    TailClass {
        exponent: f - T::one(),
        log_power: log_power + u32::from(hits_harmonic),
    }
}

/// Exact fit of S through `points` with the given basis (one more point than
/// basis functions). Returns the constant term.
pub fn fit_limit<T: Scalar>(points: &[(T, Complex<T>)], basis: &[(T, u32)]) -> Option<Complex<T>> {
    let n = basis.len() + 1;
    if points.len() < n {
        return None;
    }
    let pts = &points[points.len() - n..];
    // Unknowns scaled by their value at the last point to balance columns.
    let n_ref = pts[n - 1].0;
    let mut a = vec![vec![T::zero(); n]; n];
    let mut b_re = vec![T::zero(); n];
    let mut b_im = vec![T::zero(); n];
    for (row, &(nn, s)) in pts.iter().enumerate() {
        a[row][0] = T::one();
        for (col, &(e, l)) in basis.iter().enumerate() {
            let ratio = (nn / n_ref).powf(-e);
            let logs = (nn.ln() / n_ref.ln()).powi(l as i32);
            a[row][col + 1] = ratio * logs;
        }
        b_re[row] = s.re;
        b_im[row] = s.im;
    }
    let (re, im) = solve2(a, b_re, b_im)?;
    Some(Complex::new(re[0], im[0]))
}

/// Gaussian elimination with partial pivoting for two right-hand sides.
fn solve2<T: Scalar>(mut a: Vec<Vec<T>>, mut b1: Vec<T>, mut b2: Vec<T>) -> Option<(Vec<T>, Vec<T>)> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| {
            a[i][col]
                .abs()
                .partial_cmp(&a[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[piv][col] == T::zero() {
            return None;
        }
        a.swap(col, piv);
        b1.swap(col, piv);
        b2.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f == T::zero() {
                continue;
            }
            for k in col..n {
                let v = a[col][k];
                a[row][k] -= f * v;
            }
            let (c1, c2) = (b1[col], b2[col]);
            b1[row] -= f * c1;
            b2[row] -= f * c2;
        }
    }
    let mut x1 = vec![T::zero(); n];
    let mut x2 = vec![T::zero(); n];
    for row in (0..n).rev() {
        let mut s1 = b1[row];
        let mut s2 = b2[row];
        for k in row + 1..n {
            s1 -= a[row][k] * x1[k];
            s2 -= a[row][k] * x2[k];
        }
        x1[row] = s1 / a[row][row];
        x2[row] = s2 / a[row][row];
    }
    Some((x1, x2))
}

/// Limit estimate and error bar from the ladder so far.
///
/// The estimate uses all basis functions that the available points allow;
/// the error is four times the larger of the change from the previous
/// ladder point and the change from dropping the last basis function.
pub fn ladder_estimate<T: Scalar>(
    points: &[(T, Complex<T>)],
    basis: &[(T, u32)],
) -> Option<(Complex<T>, T)> {
    let usable = basis.len().min(points.len().saturating_sub(2));
    if usable == 0 {
        return None;
    }
    let best = fit_limit(points, &basis[..usable])?;
    let prev = fit_limit(&points[..points.len() - 1], &basis[..usable])?;
    let lower = fit_limit(points, &basis[..usable - 1])?;
    let err = lit::<T>(4.0) * (best - prev).norm().max((best - lower).norm());
    Some((best, err))
}

/// Richardson-style limit of partial sums of Σ z_n^(−s) with tail model
/// growth exponent `p`: the tail decays like N^(1 − p·s) in integer steps.
pub fn tail_extrapolate<T: Scalar>(
    partials: &[(usize, Complex<T>)],
    p: T,
    target_exponent: T,
) -> Result<Complex<T>> {
    if partials.len() < 3 {
        return Err(Error::Insufficient(format!(
            "tail extrapolation needs at least 3 partial sums, got {}",
            partials.len()
        )));
    }
    let class = TailClass::power(p * target_exponent - T::one());
    let basis = expand_basis(&[class], partials.len() - 1);
    let pts: Vec<_> = partials
        .iter()
        .map(|&(n, s)| (T::from_usize_lossy(n), s))
        .collect();
    fit_limit(&pts, &basis[..partials.len() - 1])
        .ok_or_else(|| Error::Insufficient("singular extrapolation system".into()))
}
