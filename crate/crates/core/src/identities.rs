//! Numerical verification of the structural identities, one
//! [`IdentityReport`] per check.
//!
//! Mathematical failures (divergence, non-convergence) are recorded in the
//! report. Configuration problems, degenerate sequences and pole collisions
//! are returned as errors.

use std::collections::BTreeMap;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::closedforms::{
    cf_bessel_small, cf_half_integer_with, cf_pronic, cf_shifted_linear, cf_squares, HalfIntegerForm,
};
use crate::complementary::{complementary_term, complementary_zeta, higher_complementary_term, higher_complementary_zeta};
use crate::error::{invalid, Error, Result};
use crate::scalar::{inv_pow, lit, real, Scalar};
use crate::sequences::{make_sequence, Family, SequenceSource, SequenceSpec};
use crate::specialfn::riemann_zeta;
use crate::summation::{
    drive, extended_mzv, extended_zeta, merge_classes, mzv_tail_classes, Composition, ComplexSum, EvalResult,
    SummationConfig, TailClass,
};

/// Outcome of one identity check. Values are stored in double precision
/// whatever scalar type the check ran in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity_id: String,
    pub sequence: SequenceSpec<f64>,
    pub parameters: BTreeMap<String, f64>,
    #[serde(with = "lenient::complex")]
    pub lhs: Complex<f64>,
    #[serde(with = "lenient::complex")]
    pub rhs: Complex<f64>,
    #[serde(with = "lenient::float")]
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(with = "lenient::float")]
    pub error_budget: f64,
    pub notes: Vec<String>,
    #[serde(default)]
    pub skipped: bool,
}

/// Serde helpers writing non-finite floats as the strings "NaN", "inf" and
/// "-inf" so that reports survive a JSON round trip.
mod lenient {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    fn to_repr(x: f64) -> Repr {
        if x.is_finite() {
            Repr::Num(x)
        } else if x.is_nan() {
            Repr::Text("NaN".into())
        } else if x > 0.0 {
            Repr::Text("inf".into())
        } else {
            Repr::Text("-inf".into())
        }
    }

    fn from_repr<E: serde::de::Error>(r: Repr) -> Result<f64, E> {
        match r {
            Repr::Num(x) => Ok(x),
            Repr::Text(t) => match t.as_str() {
                "NaN" => Ok(f64::NAN),
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                other => Err(E::custom(format!("unexpected float text `{other}`"))),
            },
        }
    }

    pub mod float {
        use super::*;

        pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
            to_repr(*x).serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
            from_repr(Repr::deserialize(d)?)
        }
    }

    pub mod complex {
        use super::*;
        use num_complex::Complex;

        pub fn serialize<S: Serializer>(z: &Complex<f64>, s: S) -> Result<S::Ok, S::Error> {
            [to_repr(z.re), to_repr(z.im)].serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex<f64>, D::Error> {
            let [re, im] = <[Repr; 2]>::deserialize(d)?;
            Ok(Complex::new(from_repr(re)?, from_repr(im)?))
        }
    }
}

impl IdentityReport {
    /// Equality that treats NaN fields as equal to each other.
    pub fn same_as(&self, other: &Self) -> bool {
        let f = |a: f64, b: f64| a == b || (a.is_nan() && b.is_nan());
        let c = |a: Complex<f64>, b: Complex<f64>| f(a.re, b.re) && f(a.im, b.im);
        self.identity_id == other.identity_id
            && self.sequence == other.sequence
            && self.parameters == other.parameters
            && c(self.lhs, other.lhs)
            && c(self.rhs, other.rhs)
            && f(self.residual, other.residual)
            && self.tolerance == other.tolerance
            && self.passed == other.passed
            && f(self.error_budget, other.error_budget)
            && self.notes == other.notes
            && self.skipped == other.skipped
    }
}

/// Default tolerances by identity family.
pub const TOL_EXACT: f64 = 1e-9;
pub const TOL_FAST: f64 = 1e-8;
pub const TOL_SLOW: f64 = 1e-6;

/// A value with an absolute error estimate.
#[derive(Debug, Clone, Copy)]
struct Val<T> {
    v: Complex<T>,
    e: T,
}

impl<T: Scalar> Val<T> {
    fn exact(v: Complex<T>) -> Self {
        Self {
            v,
            e: lit::<T>(4.0) * T::epsilon() * v.norm(),
        }
    }

    fn of(r: EvalResult<T>) -> Self {
        Self {
            v: r.value,
            e: r.abs_error_estimate,
        }
    }

    fn zero() -> Self {
        Self {
            v: Complex::new(T::zero(), T::zero()),
            e: T::zero(),
        }
    }

    fn add(self, o: Self) -> Self {
        Self {
            v: self.v + o.v,
            e: self.e + o.e,
        }
    }

    fn sub(self, o: Self) -> Self {
        Self {
            v: self.v - o.v,
            e: self.e + o.e,
        }
    }

    fn scale(self, c: T) -> Self {
        Self {
            v: self.v * c,
            e: self.e * c.abs(),
        }
    }

    fn mul(self, o: Self) -> Self {
        Self {
            v: self.v * o.v,
            e: self.v.norm() * o.e + o.v.norm() * self.e + self.e * o.e,
        }
    }
}

fn is_numeric_failure(e: &Error) -> bool {
    matches!(e, Error::Divergent { .. } | Error::NoConvergence(_) | Error::Insufficient(_))
}

fn to_f64<T: Scalar>(z: Complex<T>) -> Complex<f64> {
    Complex::new(z.re.to_f64_lossy(), z.im.to_f64_lossy())
}

/// Common report assembly: evaluates `body`, turning numeric failures into
/// a failed report.
fn check<T: Scalar>(
    id: &str,
    seq: &SequenceSource<T>,
    parameters: BTreeMap<String, f64>,
    tolerance: f64,
    body: impl FnOnce(&mut Vec<String>) -> Result<(Val<T>, Val<T>)>,
) -> Result<IdentityReport> {
    let mut notes = Vec::new();
    let mut report = IdentityReport {
        identity_id: id.to_string(),
        sequence: seq.spec().cast(),
        parameters,
        lhs: Complex::new(f64::NAN, f64::NAN),
        rhs: Complex::new(f64::NAN, f64::NAN),
        residual: f64::INFINITY,
        tolerance,
        passed: false,
        error_budget: f64::INFINITY,
        notes: Vec::new(),
        skipped: false,
    };
    match body(&mut notes) {
        Ok((lhs, rhs)) => {
            report.lhs = to_f64(lhs.v);
            report.rhs = to_f64(rhs.v);
            report.residual = (report.lhs - report.rhs).norm();
            report.error_budget = (lhs.e + rhs.e).to_f64_lossy();
            report.passed = report.residual.is_finite()
                && report.residual <= tolerance.max(4.0 * report.error_budget);
        }
        Err(e) if is_numeric_failure(&e) => notes.push(format!("evaluation failed: {e}")),
        Err(e) => return Err(e),
    }
    report.notes = notes;
    Ok(report)
}

fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

fn mzv<T: Scalar>(seq: &SequenceSource<T>, exps: &[T], config: &SummationConfig<T>) -> Result<Val<T>> {
    Ok(Val::of(extended_mzv(seq, &Composition::new(exps.to_vec())?, config)?))
}

fn zeta1<T: Scalar>(seq: &SequenceSource<T>, s: T, config: &SummationConfig<T>) -> Result<Val<T>> {
    Ok(Val::of(extended_zeta(seq, s, config)?))
}

fn integral<T: Scalar>(s: T) -> Option<u32> {
    (s.fract() == T::zero() && s >= T::zero() && s < lit(1e6)).then(|| s.to_u32().expect("small integer"))
}

/// ζ̃_Z(s), from a closed form when the family has one and numerically
/// otherwise. The source is recorded in `notes`.
fn complementary_value<T: Scalar>(
    seq: &SequenceSource<T>,
    s: T,
    config: &SummationConfig<T>,
    notes: &mut Vec<String>,
) -> Result<Val<T>> {
    if !seq.is_finite() {
        let k = integral(s);
        let closed = match (&seq.spec().family, k) {
            (Family::Natural, _) if s > T::one() => {
                Some(("ζ̃ = ζ(s)", Val::exact(real(riemann_zeta(s)?))))
            }
            (Family::Pronic, Some(k)) if k >= 2 => Some(("ζ̃ from the pronic μ/β/η closed form", Val::exact(real(cf_pronic(k)?)))),
            (Family::Squares, Some(k)) if k >= 2 => Some(("ζ̃ from the squares closed form", Val::of(cf_squares(k, config)?))),
            (Family::ShiftedLinear(a), Some(k)) if k >= 3 => Some((
                "ζ̃ from the shifted-linear Hurwitz series",
                Val::of(cf_shifted_linear(*a, k, config)?),
            )),
            (Family::HalfInteger, Some(k)) if k >= 3 => {
                let used = Val::of(cf_half_integer_with(k, HalfIntegerForm::Printed, config)?);
                let other = cf_half_integer_with(k, HalfIntegerForm::Unshifted, config)?;
                notes.push(format!(
                    "half-integer closed form: bilinear ψ-sum of order s−1 used; the order-s variant gives {:.17e} (difference {:.3e})",
                    other.value.re.to_f64_lossy(),
                    (other.value - used.v).norm().to_f64_lossy()
                ));
                Some(("ζ̃ from the half-integer t-value closed form", used))
            }
            _ => None,
        };
        if let Some((label, v)) = closed {
            notes.push(label.to_string());
            return Ok(v);
        }
    }
    notes.push("ζ̃ summed numerically".to_string());
    Ok(Val::of(complementary_zeta(seq, s, config)?))
}

/// ζ_Z(s,t) + ζ_Z(t,s) + ζ_Z(s+t) = ζ_Z(s) ζ_Z(t).
pub fn verify_reflection<T: Scalar>(
    seq: &SequenceSource<T>,
    s: T,
    t: T,
    config: &SummationConfig<T>,
) -> Result<IdentityReport> {
    let tol = default_tolerance(seq, TOL_FAST);
    let p = params(&[("s", s.to_f64_lossy()), ("t", t.to_f64_lossy())]);
    check("reflection", seq, p, tol, |_| {
        let lhs = mzv(seq, &[s, t], config)?
            .add(mzv(seq, &[t, s], config)?)
            .add(zeta1(seq, s + t, config)?);
        let rhs = zeta1(seq, s, config)?.mul(zeta1(seq, t, config)?);
        Ok((lhs, rhs))
    })
}

/// ζ_Z(2, 1) = ζ̃_Z(3).
pub fn verify_euler_generalized<T: Scalar>(seq: &SequenceSource<T>, config: &SummationConfig<T>) -> Result<IdentityReport> {
    let tol = default_tolerance(seq, TOL_FAST);
    check("euler", seq, BTreeMap::new(), tol, |notes| {
        let lhs = mzv(seq, &[lit(2.0), T::one()], config)?;
        let rhs = complementary_value(seq, lit(3.0), config, notes)?;
        Ok((lhs, rhs))
    })
}

fn finite_terms<T: Scalar>(seq: &SequenceSource<T>, what: &str) -> Result<Vec<Complex<T>>> {
    let n = seq
        .len()
        .ok_or_else(|| Error::Domain(format!("{what} is checked on finite sequences only")))?;
    seq.terms(1, n)
}

fn check_poles<T: Scalar>(zs: &[Complex<T>], x: Complex<T>) -> Result<()> {
    for (i, z) in zs.iter().enumerate() {
        if (z + x).norm() <= lit::<T>(1e-14) * z.norm().max(T::one()) {
            return Err(Error::Pole { index: i + 1 });
        }
    }
    Ok(())
}

/// Σ_{n₁>…>n_r} 1/(z_{n₁}(z_{n₁}+x)…(z_{n_r}+x)) summed exactly over a finite list.
fn chain_sum<T: Scalar>(zs: &[Complex<T>], r: usize, x: Complex<T>) -> Complex<T> {
    let one = Complex::new(T::one(), T::zero());
    let mut e = vec![Complex::new(T::zero(), T::zero()); r];
    e[0] = one;
    let mut total = ComplexSum::new();
    for &z in zs {
        let u = (z + x).inv();
        total.add(e[r - 1] * u / z);
        for j in (1..r).rev() {
            e[j] = e[j] + e[j - 1] * u;
        }
    }
    total.value()
}

fn rational_params<T: Scalar>(r: usize, x: Complex<T>) -> BTreeMap<String, f64> {
    params(&[("r", r as f64), ("x_re", x.re.to_f64_lossy()), ("x_im", x.im.to_f64_lossy())])
}

/// Σ_n 1/(z_n(z_n+x)) Σ_{m<n} 1/(z_m+x) = Σ_n 1/(z_n z̃_n (z_n+x)) for a finite sequence.
pub fn verify_rational_identity<T: Scalar>(
    seq: &SequenceSource<T>,
    x: Complex<T>,
    config: &SummationConfig<T>,
) -> Result<IdentityReport> {
    general_rational("rational", seq, 2, x, config)
}

/// Σ_{n₁>…>n_r} 1/(z_{n₁}(z_{n₁}+x)…(z_{n_r}+x)) = Σ_n 1/(z_n z̃_n^(r) (z_n+x)) for a finite sequence.
pub fn verify_general_rational<T: Scalar>(
    seq: &SequenceSource<T>,
    r: usize,
    x: Complex<T>,
    config: &SummationConfig<T>,
) -> Result<IdentityReport> {
    general_rational("general_rational", seq, r, x, config)
}

fn general_rational<T: Scalar>(
    id: &str,
    seq: &SequenceSource<T>,
    r: usize,
    x: Complex<T>,
    config: &SummationConfig<T>,
) -> Result<IdentityReport> {
    if r == 0 {
        return Err(invalid("r", "order must be at least 1"));
    }
    let zs = finite_terms(seq, id)?;
    check_poles(&zs, x)?;
    check(id, seq, rational_params(r, x), TOL_EXACT, |_| {
        let lhs = chain_sum(&zs, r, x);
        let mut rhs = ComplexSum::new();
        let mut scale = T::zero();
        for (i, &z) in zs.iter().enumerate() {
            let h = if r == 2 {
                complementary_term(seq, i + 1, config)?.inv_value
            } else {
                higher_complementary_term(seq, i + 1, r, config)?.inv_value
            };
            let term = h / (z * (z + x));
            scale += term.norm();
            rhs.add(term);
        }
        let rhs_v = rhs.value();
        let mut r_val = Val::exact(rhs_v);
        r_val.e = lit::<T>(4.0) * T::epsilon() * scale;
        Ok((Val::exact(lhs), r_val))
    })
}

/// ζ̃_Z(s+3) = Σ_{a+b=s} ζ_Z(2+a, 1+b).
pub fn verify_taylor_sum<T: Scalar>(seq: &SequenceSource<T>, s: u32, config: &SummationConfig<T>) -> Result<IdentityReport> {
    let tol = default_tolerance(seq, TOL_FAST);
    check("taylor_sum", seq, params(&[("s", f64::from(s))]), tol, |notes| {
        let lhs = complementary_value(seq, integer::<T>(s + 3), config, notes)?;
        let mut rhs = Val::zero();
        for a in 0..=s {
            rhs = rhs.add(mzv(seq, &[integer(2 + a), integer(1 + s - a)], config)?);
        }
        Ok((lhs, rhs))
    })
}

fn integer<T: Scalar>(k: u32) -> T {
    T::from_u32(k).expect("small integer")
}

/// Weak compositions of `total` into `parts` nonnegative parts, lexicographic.
fn weak_compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for head in (0..=total).rev() {
        for mut rest in weak_compositions(total - head, parts - 1) {
            rest.insert(0, head);
            out.push(rest);
        }
    }
    out
}

/// Σ_{Σs_i=s} ζ_Z(s₁+2, s₂+1, …, s_r+1) = ζ̃_Z^(r)(s+3).
///
/// The argument s + 3 is the coefficient of x^s in the generalized rational
/// identity; the reading ζ̃^(r)(r+s+1) coincides with it only at r = 2 and
/// is evaluated alongside for the notes.
pub fn verify_sum_formula<T: Scalar>(
    seq: &SequenceSource<T>,
    r: usize,
    s: u32,
    config: &SummationConfig<T>,
) -> Result<IdentityReport> {
    if r == 0 {
        return Err(invalid("r", "depth must be at least 1"));
    }
    let tol = default_tolerance(seq, TOL_FAST);
    check("sum_formula", seq, params(&[("r", r as f64), ("s", f64::from(s))]), tol, |notes| {
        let mut lhs = Val::zero();
        for comp in weak_compositions(s, r) {
            let exps: Vec<T> = comp
                .iter()
                .enumerate()
                .map(|(i, &a)| integer::<T>(a + if i == 0 { 2 } else { 1 }))
                .collect();
            lhs = lhs.add(mzv(seq, &exps, config)?);
        }
        let rhs = if r == 2 {
            complementary_value(seq, integer(s + 3), config, notes)?
        } else {
            Val::of(higher_complementary_zeta(seq, r, integer(s + 3), config)?)
        };
        let stated = r + s as usize + 1;
        if stated != s as usize + 3 {
            match higher_complementary_zeta(seq, r, T::from_usize_lossy(stated), config) {
                Ok(v) => notes.push(format!(
                    "argument r+s+1 = {stated} gives {:.17e}, residual {:.3e}; argument s+3 = {} used",
                    v.value.re.to_f64_lossy(),
                    (v.value - lhs.v).norm().to_f64_lossy(),
                    s + 3
                )),
                Err(e) => notes.push(format!("argument r+s+1 = {stated} not evaluated: {e}")),
            }
        }
        Ok((lhs, rhs))
    })
}

/// ζ_Z(s,1) = ζ̃_Z(s+1) + (s/2 − 1) ζ_Z(s+1) − ½ Σ_{k=1}^{s−2} ζ_Z(k+1) ζ_Z(s−k).
pub fn verify_reduction<T: Scalar>(seq: &SequenceSource<T>, s: u32, config: &SummationConfig<T>) -> Result<IdentityReport> {
    if s < 2 {
        return Err(invalid("s", format!("needs s ≥ 2, got {s}")));
    }
    let tol = default_tolerance(seq, TOL_FAST);
    check("reduction", seq, params(&[("s", f64::from(s))]), tol, |notes| {
        let lhs = mzv(seq, &[integer(s), T::one()], config)?;
        let mut rhs = complementary_value(seq, integer(s + 1), config, notes)?;
        let coef = integer::<T>(s) / lit(2.0) - T::one();
        rhs = rhs.add(zeta1(seq, integer(s + 1), config)?.scale(coef));
        for k in 1..=s.saturating_sub(2) {
            let prod = zeta1(seq, integer(k + 1), config)?.mul(zeta1(seq, integer(s - k), config)?);
            rhs = rhs.sub(prod.scale(lit(0.5)));
        }
        Ok((lhs, rhs))
    })
}

fn default_tolerance<T: Scalar>(seq: &SequenceSource<T>, fast: f64) -> f64 {
    match seq.spec().family {
        Family::BesselSquaredZeros(_) => TOL_SLOW,
        _ if seq.is_finite() => TOL_EXACT,
        _ => fast,
    }
}

/// Σ_{n≥0} (ζ_Z(n+2, s−n−2) − ζ_Z(s+n, −n)) = ζ̃_Z(s).
///
/// The n-th summand is evaluated as the single double sum
/// Σ_k z_k^(−s) Σ_{m<k} [(z_m/z_k)^(n+2−s) − (z_m/z_k)^n], with the inner
/// ratio sums updated recursively so that large n cannot overflow. The
/// summands decay like n^(−ps), so the outer sum is extrapolated rather
/// than truncated.
pub fn verify_hirose<T: Scalar>(seq: &SequenceSource<T>, s: T, config: &SummationConfig<T>) -> Result<IdentityReport> {
    let p = seq.tail_model().map_or(T::one(), |m| m.p);
    if !seq.is_finite() && !(p * s > lit(2.0)) {
        return Err(invalid("s", format!("needs p·s > 2, got s = {s}")));
    }
    let tol = default_tolerance(seq, TOL_SLOW);
    check("hirose", seq, params(&[("s", s.to_f64_lossy())]), tol, |notes| {
        let lhs = hirose_lhs(seq, s, p, config, notes)?;
        let rhs = complementary_value(seq, s, config, notes)?;
        Ok((lhs, rhs))
    })
}

const HIROSE_MAX_OUTER: usize = 4096;

fn hirose_lhs<T: Scalar>(
    seq: &SequenceSource<T>,
    s: T,
    p: T,
    config: &SummationConfig<T>,
    notes: &mut Vec<String>,
) -> Result<Val<T>> {
    let mut inner_cfg = *config;
    inner_cfg.rel_tol = config.rel_tol * lit(0.1);
    let mut outer_cfg = *config;
    outer_cfg.max_terms_per_axis = config.max_terms_per_axis.min(HIROSE_MAX_OUTER);
    let finite = seq.len().map(|n| seq.terms(1, n)).transpose()?;
    let mut acc = ComplexSum::new();
    let mut err = T::zero();
    let mut done = 0usize;
    let res = drive(&outer_cfg, config.min_terms, &[TailClass::power(p * s - T::one())], |upto| {
        while done < upto {
            let term = match &finite {
                Some(zs) => Val::exact(hirose_term_finite(zs, done, s)),
                None => Val::of(hirose_term_infinite(seq, done, s, p, &inner_cfg)?),
            };
            acc.add(term.v);
            err += term.e;
            done += 1;
        }
        Ok(acc.value())
    })?;
    notes.push(format!("outer sum over n used {} terms", res.terms_used));
    if !res.converged {
        notes.push("outer sum over n did not meet the tolerance".to_string());
    }
    Ok(Val {
        v: res.value,
        e: res.abs_error_estimate + err,
    })
}

fn hirose_term_finite<T: Scalar>(zs: &[Complex<T>], n: usize, s: T) -> Complex<T> {
    let nt = T::from_usize_lossy(n);
    let two = lit::<T>(2.0);
    let mut acc = ComplexSum::new();
    for k in 1..zs.len() {
        for m in 0..k {
            let a = inv_pow(zs[k], nt + two) * inv_pow(zs[m], s - nt - two);
            let b = inv_pow(zs[k], s + nt) * inv_pow(zs[m], -nt);
            acc.add(a - b);
        }
    }
    acc.value()
}

fn hirose_term_infinite<T: Scalar>(
    seq: &SequenceSource<T>,
    n: usize,
    s: T,
    p: T,
    config: &SummationConfig<T>,
) -> Result<EvalResult<T>> {
    let nt = T::from_usize_lossy(n);
    let two = lit::<T>(2.0);
    let q = nt + two - s;
    let mut classes = mzv_tail_classes(p, &[nt + two, s - nt - two]);
    classes.extend(mzv_tail_classes(p, &[s + nt, -nt]));
    let classes = merge_classes(classes);
    let (mut i_sum, mut j_sum) = (T::zero(), T::zero());
    let mut prev: Option<T> = None;
    let mut acc = ComplexSum::new();
    let mut done = 0usize;
    let start = config.min_terms.max(4 * (n + 2));
    drive(config, start, &classes, |upto| {
        for z in seq.terms(done + 1, upto)? {
            let z = z.re;
            if let Some(zp) = prev {
                let rho = zp / z;
                i_sum = rho.powf(q) * (i_sum + T::one());
                j_sum = rho.powi(n as i32) * (j_sum + T::one());
            }
            acc.add(real(z.powf(-s) * (i_sum - j_sum)));
            prev = Some(z);
        }
        done = upto;
        Ok(acc.value())
    })
}

fn bessel_nu<T: Scalar>(seq: &SequenceSource<T>) -> Result<T> {
    match seq.spec().family {
        Family::BesselSquaredZeros(nu) if !seq.is_finite() => Ok(nu),
        _ => Err(invalid("sequence", "Bessel identities need the infinite bessel_zeros family")),
    }
}

/// ζ_B(2s+6) = (2/(ν+1)) Σ_{a+b=s, a≥−1, b≥0} ζ_B(4+2a, 2+2b), written in
/// z_k = x²_{ν,k} as ζ_Z(s+3) = (2/(ν+1)) Σ_{a=−1}^{s} ζ_Z(2+a, 1+s−a).
pub fn verify_bessel<T: Scalar>(seq: &SequenceSource<T>, s: u32, config: &SummationConfig<T>) -> Result<IdentityReport> {
    let nu = bessel_nu(seq)?;
    check("bessel", seq, params(&[("s", f64::from(s))]), TOL_SLOW, |_| {
        let lhs = zeta1(seq, integer(s + 3), config)?;
        let mut sum = Val::zero();
        for a in -1i64..=i64::from(s) {
            let first = lit::<T>((2 + a) as f64);
            let second = lit::<T>((1 + i64::from(s) - a) as f64);
            sum = sum.add(mzv(seq, &[first, second], config)?);
        }
        Ok((lhs, sum.scale(lit::<T>(2.0) / (nu + T::one()))))
    })
}

/// ζ_B(6) = (2/(ν+3)) ζ_B(2) ζ_B(4), numerically over the zeros; the notes
/// record the same relation for the rational values.
pub fn verify_bessel_corollary<T: Scalar>(seq: &SequenceSource<T>, config: &SummationConfig<T>) -> Result<IdentityReport> {
    let nu = bessel_nu(seq)?;
    check("bessel_corollary", seq, BTreeMap::new(), TOL_SLOW, |notes| {
        let lhs = zeta1(seq, lit(3.0), config)?;
        let c = lit::<T>(2.0) / (nu + lit(3.0));
        let rhs = zeta1(seq, T::one(), config)?.mul(zeta1(seq, lit(2.0), config)?).scale(c);
        let exact = cf_bessel_small(nu, 6)? - c * cf_bessel_small(nu, 2)? * cf_bessel_small(nu, 4)?;
        notes.push(format!("rational values: residual {:.3e}", exact.abs().to_f64_lossy()));
        Ok((lhs, rhs))
    })
}

/// Numeric ζ_B(2s) against its rational value, for 2s ∈ {2, 4, 6}; the
/// tolerance is relative to the exact value.
pub fn verify_bessel_small<T: Scalar>(seq: &SequenceSource<T>, two_s: u32, config: &SummationConfig<T>) -> Result<IdentityReport> {
    let nu = bessel_nu(seq)?;
    let exact = cf_bessel_small(nu, two_s)?;
    let tol = TOL_SLOW * exact.abs().to_f64_lossy();
    check("bessel_small", seq, params(&[("two_s", f64::from(two_s))]), tol, |_| {
        let lhs = zeta1(seq, integer(two_s / 2), config)?;
        Ok((lhs, Val::exact(real(exact))))
    })
}

/// ζ_Z(s+3) = (2/(1−2ν)) [ζ_Z(s+2) + Σ_{a=−1}^{s} ζ_Z(2+a, 1+s−a)] over the
/// roots of θ_n, ν = n + ½.
pub fn verify_besselpoly<T: Scalar>(seq: &SequenceSource<T>, s: u32, config: &SummationConfig<T>) -> Result<IdentityReport> {
    let n = match seq.spec().family {
        Family::BesselPolyRoots(n) => n,
        _ => return Err(invalid("sequence", "needs the bessel_poly_roots family")),
    };
    let p = params(&[("s", f64::from(s))]);
    if n == 1 {
        let mut report = check("besselpoly", seq, p, TOL_EXACT, |_| Ok((Val::zero(), Val::zero())))?;
        report.passed = false;
        report.skipped = true;
        report.lhs = Complex::new(f64::NAN, f64::NAN);
        report.rhs = Complex::new(f64::NAN, f64::NAN);
        report.residual = f64::NAN;
        report.notes = vec!["skipped: a single root leaves every depth-2 sum empty".to_string()];
        return Ok(report);
    }
    let nu = T::from_usize_lossy(n) + lit(0.5);
    check("besselpoly", seq, p, TOL_EXACT, |notes| {
        let lhs = zeta1(seq, integer(s + 3), config)?;
        let mut sum = zeta1(seq, integer(s + 2), config)?;
        for a in -1i64..=i64::from(s) {
            let first = lit::<T>((2 + a) as f64);
            let second = lit::<T>((1 + i64::from(s) - a) as f64);
            sum = sum.add(mzv(seq, &[first, second], config)?);
        }
        let rhs = sum.scale(lit::<T>(2.0) / (T::one() - lit::<T>(2.0) * nu));
        if s == 0 {
            let z1 = zeta1(seq, T::one(), config)?;
            let z2 = zeta1(seq, lit(2.0), config)?;
            let z3 = zeta1(seq, lit(3.0), config)?;
            let special = z2.add(z1.mul(z2)).sub(z3.scale(lit::<T>(1.5) - nu));
            notes.push(format!(
                "ζ(2) + ζ(1)ζ(2) − (3/2 − ν)ζ(3) = {:.3e}",
                special.v.norm().to_f64_lossy()
            ));
        }
        if n == 2 {
            notes.push(
                "roots of z² + 3z + 3 from the coefficient formula; the printed θ₂ = z² + z + 3 has different roots"
                    .to_string(),
            );
        }
        Ok((lhs, rhs))
    })
}

/// One entry of an identity suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteEntry {
    pub identity_id: String,
    pub sequence: SequenceSpec<f64>,
    #[serde(default)]
    pub parameters: BTreeMap<String, f64>,
}

impl SuiteEntry {
    pub fn new(id: &str, family: Family<f64>, pairs: &[(&str, f64)]) -> Self {
        Self {
            identity_id: id.to_string(),
            sequence: SequenceSpec::infinite(family),
            parameters: params(pairs),
        }
    }
}

/// Identity ids accepted by [`run_identity`].
pub const IDENTITY_IDS: &[&str] = &[
    "reflection",
    "euler",
    "rational",
    "taylor_sum",
    "general_rational",
    "sum_formula",
    "reduction",
    "hirose",
    "bessel",
    "bessel_corollary",
    "bessel_small",
    "besselpoly",
];

fn param(entry: &SuiteEntry, key: &'static str, default: Option<f64>) -> Result<f64> {
    entry
        .parameters
        .get(key)
        .copied()
        .or(default)
        .ok_or_else(|| invalid(key, format!("identity `{}` needs parameter `{key}`", entry.identity_id)))
}

fn count_param(entry: &SuiteEntry, key: &'static str, default: Option<f64>) -> Result<u32> {
    let v = param(entry, key, default)?;
    if v.fract() != 0.0 || !(0.0..1e6).contains(&v) {
        return Err(invalid(key, format!("must be a nonnegative integer, got {v}")));
    }
    Ok(v as u32)
}

/// Runs one entry on an existing source built from `entry.sequence`.
pub fn run_identity<T: Scalar>(
    entry: &SuiteEntry,
    seq: &SequenceSource<T>,
    config: &SummationConfig<T>,
) -> Result<IdentityReport> {
    let t = |x: f64| T::lit(x);
    let mut report = match entry.identity_id.as_str() {
        "reflection" => verify_reflection(
            seq,
            t(param(entry, "s", Some(2.0))?),
            t(param(entry, "t", Some(2.0))?),
            config,
        )?,
        "euler" => verify_euler_generalized(seq, config)?,
        "rational" | "general_rational" => {
            let x = Complex::new(t(param(entry, "x_re", Some(0.0))?), t(param(entry, "x_im", Some(0.0))?));
            if entry.identity_id == "rational" {
                verify_rational_identity(seq, x, config)?
            } else {
                verify_general_rational(seq, count_param(entry, "r", Some(2.0))? as usize, x, config)?
            }
        }
        "taylor_sum" => verify_taylor_sum(seq, count_param(entry, "s", Some(1.0))?, config)?,
        "sum_formula" => verify_sum_formula(
            seq,
            count_param(entry, "r", Some(2.0))? as usize,
            count_param(entry, "s", Some(1.0))?,
            config,
        )?,
        "reduction" => verify_reduction(seq, count_param(entry, "s", Some(3.0))?, config)?,
        "hirose" => verify_hirose(seq, t(param(entry, "s", Some(5.0))?), config)?,
        "bessel" => verify_bessel(seq, count_param(entry, "s", Some(0.0))?, config)?,
        "bessel_corollary" => verify_bessel_corollary(seq, config)?,
        "bessel_small" => verify_bessel_small(seq, count_param(entry, "two_s", Some(2.0))?, config)?,
        "besselpoly" => verify_besselpoly(seq, count_param(entry, "s", Some(0.0))?, config)?,
        other => return Err(Error::UnknownIdentity(other.to_string())),
    };
    if let Some(&tol) = entry.parameters.get("tolerance") {
        report.tolerance = tol;
        report.parameters.insert("tolerance".to_string(), tol);
        report.passed = !report.skipped
            && report.residual.is_finite()
            && report.residual <= tol.max(4.0 * report.error_budget);
    }
    Ok(report)
}

/// Runs every entry, in parallel, returning reports in entry order. Unknown
/// ids are rejected before anything is evaluated. Entries with equal
/// sequence specs share one source and its caches.
pub fn run_suite<T: Scalar>(entries: &[SuiteEntry], config: &SummationConfig<T>) -> Result<Vec<IdentityReport>> {
    config.validate()?;
    if let Some(bad) = entries.iter().find(|e| !IDENTITY_IDS.contains(&e.identity_id.as_str())) {
        return Err(Error::UnknownIdentity(bad.identity_id.clone()));
    }
    let mut sources: Vec<(SequenceSpec<f64>, SequenceSource<T>)> = Vec::new();
    let mut source_of = Vec::with_capacity(entries.len());
    for e in entries {
        let idx = match sources.iter().position(|(spec, _)| *spec == e.sequence) {
            Some(i) => i,
            None => {
                sources.push((e.sequence.clone(), make_sequence(e.sequence.cast())?));
                sources.len() - 1
            }
        };
        source_of.push(idx);
    }
    let results: Vec<std::sync::Mutex<Option<Result<IdentityReport>>>> =
        entries.iter().map(|_| std::sync::Mutex::new(None)).collect();
    let next = std::sync::atomic::AtomicUsize::new(0);
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(entries.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= entries.len() {
                    break;
                }
                let r = run_identity(&entries[i], &sources[source_of[i]].1, config);
                *results[i].lock().expect("result slot") = Some(r);
            });
        }
    });
    results
        .into_iter()
        .map(|slot| slot.into_inner().expect("result slot").expect("every entry evaluated"))
        .collect()
}

/// Counts of passed, failed and skipped reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

pub fn summarize(reports: &[IdentityReport]) -> SuiteSummary {
    let skipped = reports.iter().filter(|r| r.skipped).count();
    let passed = reports.iter().filter(|r| r.passed).count();
    SuiteSummary {
        total: reports.len(),
        passed,
        failed: reports.len() - passed - skipped,
        skipped,
    }
}

fn explicit(values: &[f64]) -> Family<f64> {
    Family::Explicit(values.iter().map(|&v| real(v)).collect())
}

/// The standard verification suite over the built-in families.
pub fn default_suite() -> Vec<SuiteEntry> {
    use Family::*;
    let six = || {
        vec![
            Natural,
            Odd,
            ShiftedLinear(0.4),
            HalfInteger,
            Squares,
            Pronic,
        ]
    };
    let mut out = Vec::new();
    for f in six() {
        out.push(SuiteEntry::new("euler", f, &[]));
    }
    for nu in [0.0, 0.5, 1.3] {
        out.push(SuiteEntry::new("euler", BesselSquaredZeros(nu), &[]));
    }
    out.push(SuiteEntry::new("reflection", Natural, &[("s", 2.0), ("t", 2.0)]));
    out.push(SuiteEntry::new("reflection", Odd, &[("s", 3.0), ("t", 2.0)]));
    out.push(SuiteEntry::new("reflection", explicit(&[1.0, 2.0, 3.0]), &[("s", 1.0), ("t", 1.0)]));
    for s in 0..=2 {
        out.push(SuiteEntry::new("taylor_sum", Natural, &[("s", f64::from(s))]));
    }
    out.push(SuiteEntry::new("taylor_sum", Odd, &[("s", 2.0)]));
    for s in 0..=4 {
        out.push(SuiteEntry::new("sum_formula", Natural, &[("r", 2.0), ("s", f64::from(s))]));
    }
    for s in 0..=2 {
        out.push(SuiteEntry::new("sum_formula", Natural, &[("r", 3.0), ("s", f64::from(s))]));
    }
    out.push(SuiteEntry::new("sum_formula", Odd, &[("r", 2.0), ("s", 1.0)]));
    for f in six() {
        for s in 2..=5 {
            out.push(SuiteEntry::new("reduction", f.clone(), &[("s", f64::from(s))]));
        }
    }
    for f in [Natural, Odd, Pronic] {
        out.push(SuiteEntry::new("hirose", f, &[("s", 5.0)]));
    }
    out.push(SuiteEntry::new("hirose", explicit(&[1.0, 2.0, 3.0]), &[("s", 6.0)]));
    out.push(SuiteEntry::new("rational", explicit(&[1.0, 2.0, 3.0]), &[("x_re", 0.5)]));
    out.push(SuiteEntry::new("general_rational", explicit(&[1.0, 2.0, 3.0]), &[("r", 2.0), ("x_re", 0.7)]));
    out.push(SuiteEntry::new("general_rational", explicit(&[1.0, 2.0, 3.0, 4.0]), &[("r", 3.0), ("x_re", -0.2)]));
    out.push(SuiteEntry::new("bessel", BesselSquaredZeros(0.5), &[("s", 0.0)]));
    out.push(SuiteEntry::new("bessel", BesselSquaredZeros(1.3), &[("s", 1.0)]));
    for nu in [0.0, 0.5, 1.3] {
        out.push(SuiteEntry::new("bessel_corollary", BesselSquaredZeros(nu), &[]));
        for two_s in [2.0, 4.0, 6.0] {
            out.push(SuiteEntry::new("bessel_small", BesselSquaredZeros(nu), &[("two_s", two_s)]));
        }
    }
    for n in 2..=8 {
        for s in 0..=2 {
            out.push(SuiteEntry::new("besselpoly", BesselPolyRoots(n), &[("s", f64::from(s))]));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SummationConfig<f64> {
        SummationConfig::default()
    }

    fn src(family: Family<f64>) -> SequenceSource<f64> {
        make_sequence(SequenceSpec::infinite(family)).unwrap()
    }

    fn three() -> SequenceSource<f64> {
        src(explicit(&[1.0, 2.0, 3.0]))
    }

    fn assert_pass(r: &IdentityReport) {
        assert!(r.passed, "{} failed: {r:#?}", r.identity_id);
    }

    #[test]
    fn reflection_reports() {
        assert_pass(&verify_reflection(&src(Family::Natural), 2.0, 2.0, &cfg()).unwrap());
        assert_pass(&verify_reflection(&src(Family::Odd), 3.0, 2.0, &cfg()).unwrap());
        let r = verify_reflection(&three(), 1.0, 1.0, &cfg()).unwrap();
        assert_pass(&r);
        // (1 + 1/2 + 1/3)² = 2 ζ(1,1) + ζ(2) exactly
        assert!((r.rhs.re - (11.0_f64 / 6.0).powi(2)).abs() < 1e-14);
    }

    #[test]
    fn euler_reports() {
        for f in [Family::Natural, Family::Pronic, Family::BesselSquaredZeros(1.3)] {
            assert_pass(&verify_euler_generalized(&src(f), &cfg()).unwrap());
        }
    }

    #[test]
    fn rational_reports() {
        let r = verify_rational_identity(&three(), real(0.5), &cfg()).unwrap();
        assert_pass(&r);
        assert_eq!(r.tolerance, TOL_EXACT);
        let four = src(explicit(&[1.0, 2.0, 3.0, 4.0]));
        assert_pass(&verify_general_rational(&four, 3, real(-0.2), &cfg()).unwrap());
        assert!(matches!(
            verify_rational_identity(&three(), real(-2.0), &cfg()),
            Err(Error::Pole { index: 2 })
        ));
        assert!(matches!(
            verify_rational_identity(&src(Family::Natural), real(0.5), &cfg()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn chain_sum_matches_brute_force() {
        let zs: Vec<Complex<f64>> = [1.0, 2.5, 3.0, 7.0].iter().map(|&v| real(v)).collect();
        let x = Complex::new(0.3, 0.1);
        let mut brute = Complex::new(0.0, 0.0);
        for a in 0..4 {
            for b in 0..a {
                for c in 0..b {
                    brute += 1.0 / (zs[a] * (zs[a] + x) * (zs[b] + x) * (zs[c] + x));
                }
            }
        }
        assert!((chain_sum(&zs, 3, x) - brute).norm() < 1e-15);
    }

    #[test]
    fn sum_formula_reports() {
        let nat = src(Family::Natural);
        for (r, s) in [(2, 1), (3, 0), (3, 1)] {
            let rep = verify_sum_formula(&nat, r, s, &cfg()).unwrap();
            assert_pass(&rep);
        }
        // r = 3, s = 0: ζ(2,1,1) = ζ(4); the other argument reading is recorded
        let rep = verify_sum_formula(&nat, 3, 0, &cfg()).unwrap();
        assert!((rep.lhs.re - std::f64::consts::PI.powi(4) / 90.0).abs() < 1e-8);
        assert!(rep.notes.iter().any(|n| n.contains("r+s+1")));
    }

    #[test]
    fn weak_compositions_counts() {
        assert_eq!(weak_compositions(3, 2).len(), 4);
        assert_eq!(weak_compositions(4, 3).len(), 15);
        assert_eq!(weak_compositions(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn reduction_and_taylor() {
        for f in [Family::Natural, Family::Pronic, Family::Squares] {
            let seq = src(f);
            assert_pass(&verify_reduction(&seq, 3, &cfg()).unwrap());
            assert_pass(&verify_taylor_sum(&seq, 1, &cfg()).unwrap());
        }
        assert!(verify_reduction(&src(Family::Natural), 1, &cfg()).is_err());
    }

    #[test]
    fn hirose_reports() {
        let r = verify_hirose(&src(Family::Natural), 5.0, &cfg()).unwrap();
        assert_pass(&r);
        assert_pass(&verify_hirose(&three(), 6.0, &cfg()).unwrap());
        assert!(verify_hirose(&src(Family::Natural), 2.0, &cfg()).is_err());
    }

    #[test]
    fn hirose_terms_agree() {
        // the recursive evaluation of one summand against the direct double sum
        let seq = src(Family::Natural);
        let zs: Vec<Complex<f64>> = (1..=3000).map(|k| real(k as f64)).collect();
        for n in [0, 1, 4] {
            let direct = hirose_term_finite(&zs, n, 5.0);
            let rec = hirose_term_infinite(&seq, n, 5.0, 1.0, &cfg()).unwrap();
            assert!((rec.value - direct).norm() < 1e-3 * direct.norm().max(1e-6), "n = {n}");
        }
    }

    #[test]
    fn bessel_reports() {
        let seq = src(Family::BesselSquaredZeros(1.3));
        assert_pass(&verify_bessel(&seq, 1, &cfg()).unwrap());
        let cor = verify_bessel_corollary(&src(Family::BesselSquaredZeros(0.5)), &cfg()).unwrap();
        assert_pass(&cor);
        for two_s in [2, 4, 6] {
            assert_pass(&verify_bessel_small(&seq, two_s, &cfg()).unwrap());
        }
        assert!(verify_bessel(&src(Family::Natural), 0, &cfg()).is_err());
    }

    #[test]
    fn besselpoly_reports() {
        for n in [2, 3, 5] {
            let seq = src(Family::BesselPolyRoots(n));
            for s in 0..=2 {
                assert_pass(&verify_besselpoly(&seq, s, &cfg()).unwrap());
            }
        }
        let one = verify_besselpoly(&src(Family::BesselPolyRoots(1)), 0, &cfg()).unwrap();
        assert!(one.skipped && !one.passed);
    }

    #[test]
    fn report_json_round_trip() {
        let r = verify_besselpoly(&src(Family::BesselPolyRoots(1)), 0, &cfg()).unwrap();
        let text = serde_json::to_string(&r).unwrap();
        assert!(text.contains("\"NaN\""));
        let back: IdentityReport = serde_json::from_str(&text).unwrap();
        assert!(back.same_as(&r));
        let r = verify_reflection(&three(), 1.0, 1.0, &cfg()).unwrap();
        let back: IdentityReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn suite_runs_in_order() {
        let entries = vec![
            SuiteEntry::new("reflection", Family::Natural, &[("s", 2.0), ("t", 3.0)]),
            SuiteEntry::new("euler", Family::Odd, &[]),
            SuiteEntry::new("reduction", Family::Natural, &[("s", 2.0), ("tolerance", 1e-9)]),
        ];
        let reports = run_suite(&entries, &cfg()).unwrap();
        let ids: Vec<_> = reports.iter().map(|r| r.identity_id.as_str()).collect();
        assert_eq!(ids, ["reflection", "euler", "reduction"]);
        assert_eq!(reports[2].tolerance, 1e-9);
        assert_eq!(summarize(&reports).passed, 3);
        let bad = vec![entries[0].clone(), SuiteEntry::new("nope", Family::Natural, &[])];
        assert!(matches!(run_suite(&bad, &cfg()), Err(Error::UnknownIdentity(id)) if id == "nope"));
    }

    #[test]
    fn suite_entry_json() {
        let e: SuiteEntry = serde_json::from_str(
            r#"{"identity_id": "hirose", "sequence": {"family": "natural"}, "parameters": {"s": 5}}"#,
        )
        .unwrap();
        assert_eq!(e, SuiteEntry::new("hirose", Family::Natural, &[("s", 5.0)]));
    }
}

