//! Complementary sequences z̃_k, their higher-order analogues z̃_n^(r), and
//! the associated complementary zeta functions.
//!
//! For an infinite sequence, the tail Σ_{i>M} z_k/(z_i(z_i − z_k)) is
//! expanded as Σ_m z_k^(m+1) T_{m+2}(M) with T_t(M) = Σ_{i>M} z_i^(−t).
//! The power tails T_t(M) do not depend on k, so they are computed once per
//! cutoff M and shared by every term.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};
use crate::sequences::SequenceSource;
use crate::summation::{
    drive, expand_basis, fit_limit, ComplexSum, EvalResult, SummationConfig,
    TailClass,
};

/// The quantity 1/z̃_k (or 1/z̃_n^(r)) with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplementaryTermResult<T> {
    pub inv_value: Complex<T>,
    pub abs_error_estimate: T,
    pub terms_used: usize,
}

/// Reading of the higher-order definition.
///
/// `ResidueDerived` gives every position of n the summand
/// (z_n/z_{n₁}) Π_{b≠n} 1/(z_b − z_n), which is what the partial-fraction
/// expansion of the rational identity produces. `LiteralPrinted` drops the
/// factor 1/(z_{n₂} − z_n) from the last position, as in the literal
/// display; it is only evaluated on finite sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HigherVariant {
    #[default]
    ResidueDerived,
    LiteralPrinted,
}

/// Largest power index t in the cached tails T_t(M).
const MAX_TAIL_POWER: usize = 48;
/// Doublings beyond M used to extrapolate the power tails.
const TAIL_LADDER: usize = 5;

#[derive(Debug)]
struct PowerTails<T> {
    /// (T_t(M), error) for t = 2..=MAX_TAIL_POWER.
    values: Vec<(Complex<T>, T)>,
}

/// Per-sequence cache of complementary terms and power tails.
#[derive(Debug)]
pub(crate) struct ComplementaryMemo<T> {
    terms: RwLock<HashMap<usize, ComplementaryTermResult<T>>>,
    tails: RwLock<HashMap<usize, Arc<PowerTails<T>>>>,
    multi: RwLock<MultiTailCache<T>>,
}

/// Multiple tails keyed by (cutoff, depth).
type MultiTailCache<T> = HashMap<(usize, usize), Arc<MultiTails<T>>>;

impl<T> Default for ComplementaryMemo<T> {
    fn default() -> Self {
        Self {
            terms: RwLock::new(HashMap::new()),
            tails: RwLock::new(HashMap::new()),
            multi: RwLock::new(HashMap::new()),
        }
    }
}

fn cutoff_for(k: usize) -> usize {
    (8 * k.next_power_of_two()).max(64)
}

fn power_tails<T: Scalar>(seq: &SequenceSource<T>, m: usize) -> Result<Arc<PowerTails<T>>> {
    if let Some(t) = seq.memo.tails.read().expect("tail cache lock").get(&m) {
        return Ok(Arc::clone(t));
    }
    let p = seq.tail_model().expect("infinite sequences carry a tail model").p;
    let count = MAX_TAIL_POWER - 1;
    let mut acc = vec![ComplexSum::new(); count];
    let mut ladder: Vec<(T, Vec<Complex<T>>)> = Vec::with_capacity(TAIL_LADDER);
    let mut done = m;
    for level in 1..=TAIL_LADDER {
        let upto = m << level;
        for z in seq.terms(done + 1, upto)? {
            let w = z.inv();
            let mut pw = w * w;
            for a in acc.iter_mut() {
                a.add(pw);
                pw *= w;
            }
        }
        done = upto;
        ladder.push((T::from_usize_lossy(upto), acc.iter().map(|a| a.value()).collect()));
    }
    let mut values = Vec::with_capacity(count);
    for idx in 0..count {
        let t = T::from_usize_lossy(idx + 2);
        let pts: Vec<(T, Complex<T>)> = ladder.iter().map(|(n, v)| (*n, v[idx])).collect();
        let basis = expand_basis(&[TailClass::power(p * t - T::one())], TAIL_LADDER);
        let best = fit_limit(&pts, &basis[..TAIL_LADDER - 1]);
        let lower = fit_limit(&pts, &basis[..TAIL_LADDER - 2]);
        let raw = pts[TAIL_LADDER - 1].1;
        let (value, err) = match (best, lower) {
            (Some(b), Some(l)) => (b, lit::<T>(4.0) * (b - l).norm()),
            _ => (raw, (raw - pts[TAIL_LADDER - 2].1).norm()),
        };
        values.push((value, err + T::epsilon() * value.norm()));
    }
    let tails = Arc::new(PowerTails { values });
    seq.memo
        .tails
        .write()
        .expect("tail cache lock")
        .insert(m, Arc::clone(&tails));
    Ok(tails)
}

fn finite_term<T: Scalar>(zs: &[Complex<T>], k: usize) -> Result<ComplementaryTermResult<T>> {
    let zk = zs[k - 1];
    let mut acc = ComplexSum::new();
    let mut mag = T::zero();
    for (i, &zi) in zs.iter().enumerate() {
        let idx = i + 1;
        if idx == k {
            continue;
        }
        if zi == zk {
            return Err(Error::Degenerate { i: idx.min(k), j: idx.max(k) });
        }
        let term = if idx < k {
            (zi - zk).inv()
        } else {
            zk / (zi * (zi - zk))
        };
        mag += term.norm();
        acc.add(term);
    }
    Ok(ComplementaryTermResult {
        inv_value: acc.value(),
        abs_error_estimate: lit::<T>(4.0) * T::epsilon() * mag,
        terms_used: zs.len(),
    })
}

fn infinite_term<T: Scalar>(seq: &SequenceSource<T>, k: usize) -> Result<ComplementaryTermResult<T>> {
    let m = cutoff_for(k);
    let tails = power_tails(seq, m)?;
    let zs = seq.terms(1, m)?;
    let zk = zs[k - 1];
    let mut acc = ComplexSum::new();
    let mut mag = T::zero();
    for (i, &zi) in zs.iter().enumerate() {
        let idx = i + 1;
        if idx == k {
            continue;
        }
        if zi == zk {
            return Err(Error::Degenerate { i: idx.min(k), j: idx.max(k) });
        }
        let term = if idx < k {
            (zi - zk).inv()
        } else {
            zk / (zi * (zi - zk))
        };
        mag += term.norm();
        acc.add(term);
    }
    // Σ_{i>M} z_k/(z_i(z_i − z_k)) = Σ_m z_k^(m+1) T_{m+2}(M)
    let mut pw = zk;
    let mut tail_err = T::zero();
    let mut last = T::infinity();
    for &(t_val, t_err) in &tails.values {
        let term = pw * t_val;
        acc.add(term);
        mag += term.norm();
        tail_err += pw.norm() * t_err;
        last = term.norm();
        if last <= lit::<T>(1e-3) * T::epsilon() * mag {
            break;
        }
        pw *= zk;
    }
    let truncation = if last <= lit::<T>(1e-3) * T::epsilon() * mag { T::zero() } else { last };
    Ok(ComplementaryTermResult {
        inv_value: acc.value(),
        abs_error_estimate: lit::<T>(4.0) * T::epsilon() * mag + tail_err + truncation,
        terms_used: m << TAIL_LADDER,
    })
}

/// 1/z̃_k = Σ_{i<k} 1/(z_i − z_k) + Σ_{i>k} (1/(z_i − z_k) − 1/z_i).
pub fn complementary_term<T: Scalar>(
    seq: &SequenceSource<T>,
    k: usize,
    config: &SummationConfig<T>,
) -> Result<ComplementaryTermResult<T>> {
    config.validate()?;
    seq.term(k)?;
    if let Some(n) = seq.len() {
        return finite_term(&seq.terms(1, n)?, k);
    }
    if let Some(r) = seq.memo.terms.read().expect("term cache lock").get(&k) {
        return Ok(*r);
    }
    let r = infinite_term(seq, k)?;
    seq.memo.terms.write().expect("term cache lock").insert(k, r);
    Ok(r)
}

/// e_0..=e_{depth} of {1/(z_i − z_n) : i < n}.
fn lower_symmetric<T: Scalar>(zs: &[Complex<T>], n: usize, depth: usize) -> Result<Vec<Complex<T>>> {
    let zn = zs[n - 1];
    let mut e = vec![Complex::new(T::zero(), T::zero()); depth + 1];
    e[0] = Complex::new(T::one(), T::zero());
    for (i, &zi) in zs[..n - 1].iter().enumerate() {
        if zi == zn {
            return Err(Error::Degenerate { i: i + 1, j: n });
        }
        let y = (zi - zn).inv();
        for m in (1..=depth).rev() {
            let prev = e[m - 1];
            e[m] += y * prev;
        }
    }
    Ok(e)
}

/// Streaming upper sums over b > n: U_m = Σ_{b₁>…>b_m>n} (z_n/z_{b₁}) Π 1/(z_{b_i} − z_n)
/// for m = 1..=depth, plus the printed-variant sum for the last position.
struct UpperSums<T> {
    zn: Complex<T>,
    n: usize,
    /// e_j{1/(z_c − z_n) : n < c < b}
    e: Vec<Complex<T>>,
    u: Vec<ComplexSum<T>>,
    literal_mid: Complex<T>,
    literal: ComplexSum<T>,
    seen: usize,
}

impl<T: Scalar> UpperSums<T> {
    fn new(zn: Complex<T>, n: usize, depth: usize) -> Self {
        let zero = Complex::new(T::zero(), T::zero());
        let mut e = vec![zero; depth + 1];
        e[0] = Complex::new(T::one(), T::zero());
        Self {
            zn,
            n,
            e,
            u: vec![ComplexSum::new(); depth + 1],
            literal_mid: zero,
            literal: ComplexSum::new(),
            seen: n,
        }
    }

    fn push(&mut self, zb: Complex<T>) -> Result<()> {
        self.seen += 1;
        if zb == self.zn {
            return Err(Error::Degenerate { i: self.n, j: self.seen });
        }
        let depth = self.e.len() - 1;
        let y = (zb - self.zn).inv();
        let top = self.zn / zb * y;
        for m in 1..=depth {
            self.u[m].add(top * self.e[m - 1]);
        }
        if depth >= 2 {
            self.literal.add(top * self.literal_mid);
            self.literal_mid += self.e[depth - 2];
        }
        for m in (1..=depth).rev() {
            let prev = self.e[m - 1];
            self.e[m] += y * prev;
        }
        Ok(())
    }
}

fn combine<T: Scalar>(lower: &[Complex<T>], upper: &[Complex<T>], r: usize) -> Complex<T> {
    let mut acc = ComplexSum::new();
    for j in 1..=r {
        acc.add(upper[j - 1] * lower[r - j]);
    }
    acc.value()
}

/// 1/z̃_n^(r) with the default (residue-derived) reading. By convention the
/// value is 1 for r = 1; r = 2 reproduces [`complementary_term`].
pub fn higher_complementary_term<T: Scalar>(
    seq: &SequenceSource<T>,
    n: usize,
    r: usize,
    config: &SummationConfig<T>,
) -> Result<ComplementaryTermResult<T>> {
    higher_complementary_term_with(seq, n, r, HigherVariant::ResidueDerived, config)
}

pub fn higher_complementary_term_with<T: Scalar>(
    seq: &SequenceSource<T>,
    n: usize,
    r: usize,
    variant: HigherVariant,
    config: &SummationConfig<T>,
) -> Result<ComplementaryTermResult<T>> {
    config.validate()?;
    if r == 0 {
        return Err(crate::error::invalid("r", "order must be at least 1"));
    }
    seq.term(n)?;
    let one = Complex::new(T::one(), T::zero());
    if r == 1 {
        return Ok(ComplementaryTermResult {
            inv_value: one,
            abs_error_estimate: T::zero(),
            terms_used: 0,
        });
    }
    if r == 2 {
        return complementary_term(seq, n, config);
    }
    let depth = r - 1;
    if let Some(len) = seq.len() {
        let zs = seq.terms(1, len)?;
        let lower = lower_symmetric(&zs, n, depth)?;
        let mut up = UpperSums::new(zs[n - 1], n, depth);
        for &zb in &zs[n..] {
            up.push(zb)?;
        }
        let mut upper: Vec<Complex<T>> = up.u.iter().map(|u| u.value()).collect();
        upper[0] = one;
        if variant == HigherVariant::LiteralPrinted {
            upper[depth] = up.literal.value();
        }
        let v = combine(&lower, &upper, r);
        let scale = lower.iter().chain(upper.iter()).fold(T::zero(), |a, z| a + z.norm());
        return Ok(ComplementaryTermResult {
            inv_value: v,
            abs_error_estimate: lit::<T>(16.0) * T::epsilon() * scale.max(v.norm()),
            terms_used: len,
        });
    }
    if variant == HigherVariant::LiteralPrinted {
        return Err(Error::Domain(
            "the printed higher-order reading is only evaluated on finite sequences".into(),
        ));
    }
    if depth > MAX_INFINITE_DEPTH {
        return Err(Error::Domain(format!(
            "higher-order terms on infinite sequences support r ≤ {}, got r = {r}",
            MAX_INFINITE_DEPTH + 1
        )));
    }
    let m_cut = cutoff_for(n);
    let zs = seq.terms(1, m_cut)?;
    let zn = zs[n - 1];
    let lower = lower_symmetric(&zs, n, depth)?;
    let mut up = UpperSums::new(zn, n, depth);
    for &zb in &zs[n..] {
        up.push(zb)?;
    }
    // Chains with j indices above the cutoff contribute Top_j · e_{m−j}(n, M].
    let mut tops = vec![(one, T::zero())];
    for j in 1..=depth {
        let tails = multi_tails(seq, m_cut, j)?;
        tops.push(tails.contract(zn));
    }
    let mut upper = vec![one; depth + 1];
    let mut err = T::zero();
    let mut scale = T::zero();
    for m in 1..=depth {
        let mut acc = ComplexSum::new();
        acc.add(up.u[m].value());
        scale += up.u[m].value().norm();
        for j in 1..=m {
            let e = up.e[m - j];
            let (top, top_err) = tops[j];
            acc.add(top * e);
            scale += (top * e).norm();
            err += top_err * e.norm() * lower[depth - m].norm().max(T::one());
        }
        upper[m] = acc.value();
    }
    scale += lower.iter().fold(T::zero(), |a, z| a + z.norm());
    let v = combine(&lower, &upper, r);
    Ok(ComplementaryTermResult {
        inv_value: v,
        abs_error_estimate: err + lit::<T>(16.0) * T::epsilon() * scale * scale.max(T::one()),
        terms_used: m_cut << TAIL_LADDER,
    })
}

/// Deepest chain above the cutoff handled for infinite sequences.
const MAX_INFINITE_DEPTH: usize = 3;

/// Multiple tails Z_M(u₁, …, u_j) = Σ_{b₁>…>b_j>M} Π z_{b_i}^(−u_i) for
/// u = (t₁+2, t₂+1, …, t_j+1), |t| ≤ order, with error estimates.
#[derive(Debug)]
struct MultiTails<T> {
    order: usize,
    /// Indexed like `tuples(depth, order)`.
    values: Vec<(Complex<T>, T)>,
    tuples: Vec<Vec<usize>>,
}

impl<T: Scalar> MultiTails<T> {
    /// Σ_t z_n^(1+|t|) Z_M(t₁+2, t₂+1, …) with its error.
    fn contract(&self, zn: Complex<T>) -> (Complex<T>, T) {
        let mut powers = Vec::with_capacity(self.order + 2);
        let mut pw = zn;
        for _ in 0..=self.order + 1 {
            powers.push(pw);
            pw *= zn;
        }
        let mut acc = ComplexSum::new();
        let mut err = T::zero();
        for (t, &(v, e)) in self.tuples.iter().zip(&self.values) {
            let deg: usize = t.iter().sum();
            let w = powers[deg];
            acc.add(w * v);
            err += w.norm() * e;
        }
        (acc.value(), err)
    }
}

/// All t ∈ ℕ^depth with |t| ≤ order, lexicographic.
fn tuples(depth: usize, order: usize) -> Vec<Vec<usize>> {
    if depth == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for head in 0..=order {
        for mut rest in tuples(depth - 1, order - head) {
            rest.insert(0, head);
            out.push(rest);
        }
    }
    out
}

/// Expansion order so that (z_{M/8}/z_{M+1})^order is below rounding.
fn expansion_order<T: Scalar>(zs: &[Complex<T>], m: usize) -> usize {
    let rho = (zs[m / 8 - 1].norm() / zs[m - 1].norm()).to_f64_lossy();
    let order = (-39.0 / rho.ln()).ceil() as usize;
    order.clamp(4, MAX_TAIL_POWER - 3)
}

fn multi_tails<T: Scalar>(seq: &SequenceSource<T>, m: usize, depth: usize) -> Result<Arc<MultiTails<T>>> {
    if let Some(t) = seq.memo.multi.read().expect("tail cache lock").get(&(m, depth)) {
        return Ok(Arc::clone(t));
    }
    let singles = power_tails(seq, m)?;
    let zs = seq.terms(1, m)?;
    let order = expansion_order(&zs, m);
    let p = seq.tail_model().expect("infinite sequences carry a tail model").p;
    let out = if depth == 1 {
        let tuples = tuples(1, order);
        let values = tuples.iter().map(|t| singles.values[t[0]]).collect();
        MultiTails { order, values, tuples }
    } else {
        let inner = if depth == 2 {
            let t1 = tuples(1, order);
            MultiTails {
                order,
                values: t1.iter().map(|t| singles.values[t[0]]).collect(),
                tuples: t1,
            }
        } else {
            let prev = multi_tails(seq, m, depth - 1)?;
            MultiTails {
                order: prev.order,
                values: prev.values.clone(),
                tuples: prev.tuples.clone(),
            }
        };
        extend_tails(seq, m, p, &inner, order)?
    };
    let out = Arc::new(out);
    seq.memo
        .multi
        .write()
        .expect("tail cache lock")
        .insert((m, depth), Arc::clone(&out));
    Ok(out)
}

/// Adds one level below `inner`: Z_M(u, v) = Σ_{b>M} z_b^(−v) Z_b(u), where
/// Z_b(u) = Z_M(u) − Σ_{M<c≤b} (summand of Z(u) at c) is the running tail.
fn extend_tails<T: Scalar>(
    seq: &SequenceSource<T>,
    m: usize,
    p: T,
    inner: &MultiTails<T>,
    order: usize,
) -> Result<MultiTails<T>> {
    let depth = inner.tuples[0].len() + 1;
    let out_tuples = tuples(depth, order);
    let lookup: HashMap<&[usize], usize> = inner
        .tuples
        .iter()
        .enumerate()
        .map(|(i, t)| (t.as_slice(), i))
        .collect();
    let links: Vec<(usize, usize)> = out_tuples
        .iter()
        .map(|t| (lookup[&t[..depth - 1]], t[depth - 1] + 1))
        .collect();
    // Running partial sums of the inner tails need the inner tuple's own
    // recursion; rebuild it from the single tails level by level.
    let singles = power_tails(seq, m)?;
    let mut chain: Vec<Vec<Vec<usize>>> = (1..depth).map(|d| tuples(d, order)).collect();
    let mut chain_values: Vec<Vec<Complex<T>>> = Vec::new();
    chain_values.push(chain[0].iter().map(|t| singles.values[t[0]].0).collect());
    for d in 2..depth {
        let prev = multi_tails(seq, m, d)?;
        chain_values.push(prev.values.iter().map(|v| v.0).collect());
    }
    let chain_links: Vec<Vec<(usize, usize)>> = (1..chain.len())
        .map(|d| {
            let up: HashMap<&[usize], usize> = chain[d - 1]
                .iter()
                .enumerate()
                .map(|(i, t)| (t.as_slice(), i))
                .collect();
            chain[d]
                .iter()
                .map(|t| (up[&t[..d]], t[d] + 1))
                .collect()
        })
        .collect();
    let mut subs: Vec<Vec<ComplexSum<T>>> = chain
        .iter()
        .map(|c| vec![ComplexSum::new(); c.len()])
        .collect();
    let mut acc = vec![ComplexSum::new(); out_tuples.len()];
    let mut ladder: Vec<(T, Vec<Complex<T>>)> = Vec::with_capacity(TAIL_LADDER);
    let zero = Complex::new(T::zero(), T::zero());
    let mut running: Vec<Vec<Complex<T>>> = chain.iter().map(|c| vec![zero; c.len()]).collect();
    let max_pow = order + 3;
    let mut done = m;
    for level in 1..=TAIL_LADDER {
        let upto = m << level;
        for z in seq.terms(done + 1, upto)? {
            let w = z.inv();
            let mut pw = vec![Complex::new(T::one(), T::zero()); max_pow + 1];
            for u in 1..=max_pow {
                pw[u] = pw[u - 1] * w;
            }
            // Level 1: Z_b(t+2) = T_{t+2}(M) − Σ_{M<c≤b} z_c^(−t−2).
            for (i, t) in chain[0].iter().enumerate() {
                subs[0][i].add(pw[t[0] + 2]);
                running[0][i] = chain_values[0][i] - subs[0][i].value();
            }
            for d in 1..chain.len() {
                for (i, &(parent, v)) in chain_links[d - 1].iter().enumerate() {
                    let term = pw[v] * running[d - 1][parent];
                    subs[d][i].add(term);
                }
                for i in 0..chain[d].len() {
                    running[d][i] = chain_values[d][i] - subs[d][i].value();
                }
            }
            let last = chain.len() - 1;
            for (i, &(parent, v)) in links.iter().enumerate() {
                acc[i].add(pw[v] * running[last][parent]);
            }
        }
        done = upto;
        ladder.push((T::from_usize_lossy(upto), acc.iter().map(|a| a.value()).collect()));
    }
    chain.clear();
    let mut values = Vec::with_capacity(out_tuples.len());
    for (i, t) in out_tuples.iter().enumerate() {
        let weight: usize = t.iter().sum::<usize>() + 2 + (depth - 1);
        let class = TailClass::power(p * T::from_usize_lossy(weight) - T::from_usize_lossy(depth));
        let basis = expand_basis(&[class], TAIL_LADDER);
        let pts: Vec<(T, Complex<T>)> = ladder.iter().map(|(n, v)| (*n, v[i])).collect();
        let best = fit_limit(&pts, &basis[..TAIL_LADDER - 1]);
        let lower = fit_limit(&pts, &basis[..TAIL_LADDER - 2]);
        let raw = pts[TAIL_LADDER - 1].1;
        let (value, err) = match (best, lower) {
            (Some(b), Some(l)) => (b, lit::<T>(4.0) * (b - l).norm()),
            _ => (raw, (raw - pts[TAIL_LADDER - 2].1).norm()),
        };
        // The inner tail enters every summand, so its relative error carries over.
        let (inner_v, inner_e) = inner.values[links[i].0];
        let inner_err = if inner_v.norm() > T::zero() {
            inner_e / inner_v.norm() * value.norm()
        } else {
            inner_e
        };
        values.push((value, err + inner_err + T::epsilon() * value.norm()));
    }
    Ok(MultiTails {
        order,
        values,
        tuples: out_tuples,
    })
}

/// Σ_{n≥1} h(n) z_n^(1−s), where h(n) is 1/z̃_n^(r).
fn complementary_series<T: Scalar>(
    seq: &SequenceSource<T>,
    r: usize,
    s: T,
    config: &SummationConfig<T>,
) -> Result<EvalResult<T>> {
    config.validate()?;
    let term = |n: usize| -> Result<(Complex<T>, T)> {
        let z = seq.term(n)?;
        let w = crate::scalar::inv_pow(z, s - T::one());
        // Each term only needs accuracy relative to its weight in the series.
        let mut local = *config;
        local.rel_tol = config.rel_tol * lit::<T>(0.1) / w.norm().min(T::one());
        let h = higher_complementary_term(seq, n, r, &local)?;
        Ok((h.inv_value * w, h.abs_error_estimate * w.norm()))
    };
    if let Some(len) = seq.len() {
        let mut acc = ComplexSum::new();
        let mut err = T::zero();
        let mut mag = T::zero();
        for n in 1..=len {
            let (v, e) = term(n)?;
            acc.add(v);
            err += e;
            mag += v.norm();
        }
        return Ok(EvalResult::exact(acc.value(), err + lit::<T>(4.0) * T::epsilon() * mag, len));
    }
    let model = seq.tail_model().expect("infinite sequences carry a tail model");
    // Summand behaves like n^(−(r−1) − p(s−1)).
    let r_t = T::from_usize_lossy(r);
    let lead = r_t - lit(2.0) + model.p * (s - T::one());
    if !(lead > T::zero()) {
        return Err(Error::Divergent {
            index: 1,
            detail: format!("complementary series of order {r} diverges at s = {s}"),
        });
    }
    let logs = if model.p == T::one() { (r - 2) as u32 } else { 0 };
    let classes = [TailClass {
        exponent: lead,
        log_power: logs,
    }];
    let mut acc = ComplexSum::new();
    let mut term_err = T::zero();
    let mut done = 0usize;
    let mut res = drive(config, config.min_terms, &classes, |upto| {
        while done < upto {
            done += 1;
            let (v, e) = term(done)?;
            acc.add(v);
            term_err += e;
        }
        Ok(acc.value())
    })?;
    res.abs_error_estimate += term_err;
    if res.converged && res.abs_error_estimate > config.rel_tol * res.value.norm().max(T::one()) {
        res.converged = false;
    }
    Ok(res)
}

/// ζ̃_Z(s) = Σ_{n≥1} 1/(z̃_n z_n^(s−1)).
pub fn complementary_zeta<T: Scalar>(
    seq: &SequenceSource<T>,
    s: T,
    config: &SummationConfig<T>,
) -> Result<EvalResult<T>> {
    complementary_series(seq, 2, s, config)
}

/// ζ̃_Z^(r)(s) = Σ_{n≥1} 1/(z̃_n^(r) z_n^(s−1)).
pub fn higher_complementary_zeta<T: Scalar>(
    seq: &SequenceSource<T>,
    r: usize,
    s: T,
    config: &SummationConfig<T>,
) -> Result<EvalResult<T>> {
    if r == 0 {
        return Err(crate::error::invalid("r", "order must be at least 1"));
    }
    complementary_series(seq, r, s, config)
}

/// ζ̃^(r)(s) over a finite sequence using the printed reading of the
/// higher-order terms.
pub fn higher_complementary_zeta_literal<T: Scalar>(
    seq: &SequenceSource<T>,
    r: usize,
    s: T,
    config: &SummationConfig<T>,
) -> Result<EvalResult<T>> {
    let len = seq.len().ok_or_else(|| {
        Error::Domain("the printed higher-order reading is only evaluated on finite sequences".into())
    })?;
    let mut acc = ComplexSum::new();
    let mut err = T::zero();
    for n in 1..=len {
        let h = higher_complementary_term_with(seq, n, r, HigherVariant::LiteralPrinted, config)?;
        let w = crate::scalar::inv_pow(seq.term(n)?, s - T::one());
        acc.add(h.inv_value * w);
        err += h.abs_error_estimate * w.norm();
    }
    Ok(EvalResult::exact(acc.value(), err, len))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::real;
    use crate::sequences::{make_sequence, Family, SequenceSpec};
    use crate::specialfn::polygamma;

    const ZETA3: f64 = 1.202_056_903_159_594_3;

    fn inf(f: Family<f64>) -> SequenceSource<f64> {
        make_sequence(SequenceSpec::infinite(f)).unwrap()
    }

    fn explicit(v: &[f64]) -> SequenceSource<f64> {
        make_sequence(SequenceSpec::infinite(Family::Explicit(v.iter().map(|&x| real(x)).collect())))
            .unwrap()
    }

    fn cfg() -> SummationConfig<f64> {
        SummationConfig::default()
    }

    #[test]
    fn natural_terms_are_reciprocals() {
        let s = inf(Family::Natural);
        for k in 1..=50 {
            let r = complementary_term(&s, k, &cfg()).unwrap();
            assert!((r.inv_value.re - 1.0 / k as f64).abs() < 1e-9, "k={k}");
        }
    }

    #[test]
    fn pronic_and_squares_terms() {
        let r = complementary_term(&inf(Family::Pronic), 3, &cfg()).unwrap();
        let want = 1.0 / 3.0 - 2.0 / 4.0 + 1.0 / 49.0;
        assert!((r.inv_value.re - want).abs() < 1e-9);
        let r = complementary_term(&inf(Family::Squares), 2, &cfg()).unwrap();
        let want = 3.0 / 16.0 - polygamma(1, 3.0).unwrap();
        assert!((r.inv_value.re - want).abs() < 1e-9);
    }

    #[test]
    fn finite_terms_and_degeneracy() {
        let s = explicit(&[1.0, 2.0, 3.0]);
        let r = complementary_term(&s, 2, &cfg()).unwrap();
        // 1/(1−2) + (1/(3−2) − 1/3)
        assert!((r.inv_value.re - (-1.0 + 2.0 / 3.0)).abs() < 1e-15);
        let d = explicit(&[1.0, 1.0, 2.0]);
        assert!(matches!(
            complementary_term(&d, 1, &cfg()),
            Err(Error::Degenerate { i: 1, j: 2 })
        ));
    }

    #[test]
    fn higher_terms_natural() {
        let s = inf(Family::Natural);
        let r = higher_complementary_term(&s, 4, 3, &cfg()).unwrap();
        assert!((r.inv_value.re - 1.0 / 16.0).abs() < 1e-8);
        let r = higher_complementary_term(&s, 7, 2, &cfg()).unwrap();
        assert!((r.inv_value.re - 1.0 / 7.0).abs() < 1e-9);
        let r = higher_complementary_term(&s, 3, 1, &cfg()).unwrap();
        assert_eq!(r.inv_value.re, 1.0);
        for n in [1, 5, 40, 300] {
            let r = higher_complementary_term(&s, n, 4, &cfg()).unwrap();
            let want = (n as f64).powi(-3);
            assert!((r.inv_value.re - want).abs() < 1e-8 * want.max(1e-3), "n={n}: {r:?}");
        }
        assert!(matches!(
            higher_complementary_term(&s, 2, 5, &cfg()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn higher_order_two_matches_first_order_on_finite() {
        let s = explicit(&[1.0, 2.0, 3.0]);
        for n in 1..=3 {
            let a = higher_complementary_term(&s, n, 2, &cfg()).unwrap().inv_value;
            let b = complementary_term(&s, n, &cfg()).unwrap().inv_value;
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn finite_higher_matches_brute_force() {
        let v = [1.0, 2.5, -3.0, 4.25, 6.0];
        let s = explicit(&v);
        let y = |b: usize, n: usize| 1.0 / (v[b] - v[n]);
        for n in 0..5 {
            // r = 3, every placement of n in a chain of three indices
            let mut want = 0.0;
            for a in 0..5 {
                for b in 0..a {
                    if a == n || b == n {
                        continue;
                    }
                    if n > a {
                        want += y(a, n) * y(b, n);
                    } else {
                        want += v[n] / v[a] * y(a, n) * y(b, n);
                    }
                }
            }
            let got = higher_complementary_term(&s, n + 1, 3, &cfg()).unwrap().inv_value.re;
            assert!((got - want).abs() < 1e-13, "n={n} got={got} want={want}");
        }
    }

    #[test]
    fn literal_reading_differs_for_order_three() {
        let s = explicit(&[1.0, 2.0, 3.0, 5.0]);
        let a = higher_complementary_term(&s, 1, 3, &cfg()).unwrap().inv_value;
        let b = higher_complementary_term_with(&s, 1, 3, HigherVariant::LiteralPrinted, &cfg())
            .unwrap()
            .inv_value;
        assert!((a - b).norm() > 1e-3);
        assert!(higher_complementary_term_with(
            &inf(Family::Natural),
            1,
            3,
            HigherVariant::LiteralPrinted,
            &cfg()
        )
        .is_err());
    }

    #[test]
    fn complementary_zeta_values() {
        let r = complementary_zeta(&inf(Family::Natural), 3.0, &cfg()).unwrap();
        assert!(r.converged && (r.value.re - ZETA3).abs() < 1e-9, "{r:?}");
        let r = complementary_zeta(&inf(Family::Pronic), 2.0, &cfg()).unwrap();
        assert!(r.value.re.abs() < 1e-8, "{r:?}");
        let pi2 = std::f64::consts::PI.powi(2);
        let r = complementary_zeta(&inf(Family::Pronic), 3.0, &cfg()).unwrap();
        assert!((r.value.re - (-7.0 + 5.0 * pi2 / 6.0 - ZETA3)).abs() < 1e-8, "{r:?}");
    }

    #[test]
    fn higher_zeta_natural() {
        let s = inf(Family::Natural);
        let r = higher_complementary_zeta(&s, 2, 3.0, &cfg()).unwrap();
        assert!((r.value.re - ZETA3).abs() < 1e-9);
        let r = higher_complementary_zeta(&s, 3, 2.0, &cfg()).unwrap();
        assert!((r.value.re - ZETA3).abs() < 1e-8, "{r:?}");
    }

    #[test]
    fn higher_zeta_finite() {
        let v = [1.0, 2.0, 3.0, 4.0];
        let s = explicit(&v);
        let r = higher_complementary_zeta(&s, 2, 3.0, &cfg()).unwrap();
        let mut want = 0.0;
        for n in 1..=4 {
            let a = complementary_term(&s, n, &cfg()).unwrap().inv_value.re;
            want += a / v[n - 1].powi(2);
        }
        assert!((r.value.re - want).abs() < 1e-14);
    }
}
