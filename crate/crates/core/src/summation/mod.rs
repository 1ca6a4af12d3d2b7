//! Compensated single sums, simplex (strict) and star (weak) multiple sums,
//! and the ladder extrapolation that accelerates slowly convergent tails.

mod extrapolate;
mod kahan;
mod mzv;

use num_complex::Complex;

use crate::error::{invalid, Error, Result};
use crate::scalar::{lit, Scalar};
use crate::sequences::SequenceSource;

pub use extrapolate::{
    expand_basis, fit_limit, ladder_estimate, merge_classes, mzv_tail_classes, tail_extrapolate,
    TailClass,
};
pub use kahan::{ComplexSum, Neumaier};
pub use mzv::{extended_mzv, extended_star_mzv, extended_zeta, SimplexSum};

/// Exponents (s₁, …, s_k) of a multiple zeta value, outermost first.
#[derive(Debug, Clone, PartialEq)]
pub struct Composition<T> {
    exponents: Vec<T>,
}

impl<T: Scalar> Composition<T> {
    pub fn new(exponents: Vec<T>) -> Result<Self> {
        if exponents.is_empty() {
            return Err(invalid("composition", "depth must be at least 1"));
        }
        if exponents.iter().any(|s| !s.is_finite()) {
            return Err(invalid("composition", "exponents must be finite"));
        }
        Ok(Self { exponents })
    }

    pub fn from_ints(exponents: &[i64]) -> Result<Self> {
        Self::new(exponents.iter().map(|&s| lit(s as f64)).collect())
    }

    pub fn exponents(&self) -> &[T] {
        &self.exponents
    }

    pub fn depth(&self) -> usize {
        self.exponents.len()
    }

    pub fn weight(&self) -> T {
        self.exponents.iter().fold(T::zero(), |a, &s| a + s)
    }

    /// Checks p·(s₁ + … + s_j) > j for every j, where p is the growth
    /// exponent of the sequence's tail. Finite sequences always pass.
    pub fn check_gate(&self, seq: &SequenceSource<T>) -> Result<()> {
        let Some(model) = seq.tail_model() else {
            if seq.is_finite() {
                return Ok(());
            }
            return Err(Error::Domain("infinite sequence without a tail model".into()));
        };
        let mut partial = T::zero();
        for (j, &s) in self.exponents.iter().enumerate() {
            partial += s;
            let idx = T::from_usize_lossy(j + 1);
            if !(model.p * partial > idx) {
                return Err(Error::Divergent {
                    index: j + 1,
                    detail: format!(
                        "p·(s_1+…+s_{}) = {} must exceed {}",
                        j + 1,
                        model.p * partial,
                        j + 1
                    ),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extrapolation {
    None,
    Richardson { order: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummationConfig<T> {
    pub rel_tol: T,
    pub max_terms_per_axis: usize,
    pub extrapolation: Extrapolation,
    pub min_terms: usize,
}

impl<T: Scalar> Default for SummationConfig<T> {
    fn default() -> Self {
        Self {
            rel_tol: lit(1e-10),
            max_terms_per_axis: 1_000_000,
            extrapolation: Extrapolation::Richardson { order: 4 },
            min_terms: 32,
        }
    }
}

impl<T: Scalar> SummationConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > T::zero()) {
            return Err(invalid("rel_tol", "must be positive"));
        }
        if self.min_terms < 2 || self.max_terms_per_axis < self.min_terms {
            return Err(invalid(
                "max_terms_per_axis",
                "need max_terms_per_axis ≥ min_terms ≥ 2",
            ));
        }
        if let Extrapolation::Richardson { order } = self.extrapolation {
            if order == 0 {
                return Err(invalid("extrapolation", "Richardson order must be ≥ 1"));
            }
        }
        Ok(())
    }

    pub fn with_rel_tol(mut self, rel_tol: T) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_max_terms(mut self, max_terms: usize) -> Self {
        self.max_terms_per_axis = max_terms;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult<T> {
    pub value: Complex<T>,
    pub abs_error_estimate: T,
    pub terms_used: usize,
    pub converged: bool,
}

impl<T: Scalar> EvalResult<T> {
    pub fn exact(value: Complex<T>, abs_error_estimate: T, terms_used: usize) -> Self {
        Self {
            value,
            abs_error_estimate,
            terms_used,
            converged: true,
        }
    }

    /// Fails with [`Error::NoConvergence`] unless converged.
    pub fn require_converged(self, what: &str) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NoConvergence(format!(
                "{what}: error estimate {:e} after {} terms",
                self.abs_error_estimate, self.terms_used
            )))
        }
    }
}

/// Drives a partial-sum process over the ladder N = start·2^j, capped at
/// `max_terms_per_axis`.
///
/// `advance(N)` must return the partial sum through N terms; successive
/// calls receive increasing N. `classes` describes the tail of the partial
/// sums for the Richardson fit.
pub(crate) fn drive<T: Scalar>(
    config: &SummationConfig<T>,
    start: usize,
    classes: &[TailClass<T>],
    mut advance: impl FnMut(usize) -> Result<Complex<T>>,
) -> Result<EvalResult<T>> {
    config.validate()?;
    let basis = match config.extrapolation {
        Extrapolation::Richardson { order } => expand_basis(classes, order),
        Extrapolation::None => Vec::new(),
    };
    let mut points: Vec<(T, Complex<T>)> = Vec::new();
    let mut best: Option<EvalResult<T>> = None;
    let mut n = start.max(config.min_terms);
    while n <= config.max_terms_per_axis {
        let s = advance(n)?;
        points.push((T::from_usize_lossy(n), s));
        let mut candidates = Vec::with_capacity(2);
        if points.len() >= 2 {
            let prev = points[points.len() - 2].1;
            candidates.push((s, lit::<T>(4.0) * (s - prev).norm()));
        }
        if let Some(est) = ladder_estimate(&points, &basis) {
            candidates.push(est);
        }
        for (value, err) in candidates {
            if !(value.re.is_finite() && value.im.is_finite() && err.is_finite()) {
                continue;
            }
            let better = best.is_none_or(|b| err <= b.abs_error_estimate);
            if better {
                best = Some(EvalResult {
                    value,
                    abs_error_estimate: err,
                    terms_used: n,
                    converged: false,
                });
            }
        }
        if let Some(b) = best.as_mut() {
            if b.abs_error_estimate <= config.rel_tol * b.value.norm().max(T::one()) {
                b.converged = true;
                b.terms_used = n;
                return Ok(*b);
            }
        }
        n = match n.checked_mul(2) {
            Some(m) => m,
            None => break,
        };
    }
    Ok(best.unwrap_or(EvalResult {
        value: points.last().map_or(Complex::new(T::nan(), T::nan()), |p| p.1),
        abs_error_estimate: T::infinity(),
        terms_used: points.last().map_or(0, |p| p.0.to_usize().unwrap_or(0)),
        converged: false,
    }))
}

/// Sums the stream `term(1), term(2), …` with compensated accumulation.
///
/// Without structural knowledge of the tail, the Richardson fit assumes a
/// tail in integer powers of 1/N starting at 1/N; the plain difference of
/// successive ladder points is used when it is smaller.
pub fn compensated_sum<T: Scalar>(
    mut term: impl FnMut(usize) -> Complex<T>,
    config: &SummationConfig<T>,
) -> Result<EvalResult<T>> {
    let mut acc = ComplexSum::new();
    let mut done = 0usize;
    drive(config, config.min_terms, &[TailClass::power(T::one())], |upto| {
        while done < upto {
            done += 1;
            acc.add(term(done));
        }
        Ok(acc.value())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::real;
    use std::f64::consts::PI;

    #[test]
    fn geometric_stream() {
        let r = compensated_sum(|n| real(0.5f64.powi(n as i32)), &SummationConfig::default()).unwrap();
        assert!(r.converged);
        assert!((r.value.re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn basel_stream() {
        let r = compensated_sum(|n| real(1.0 / (n * n) as f64), &SummationConfig::default()).unwrap();
        assert!(r.converged);
        assert!((r.value.re - PI * PI / 6.0).abs() < 1e-10);
    }

    #[test]
    fn harmonic_stream_fails() {
        let cfg = SummationConfig::default().with_max_terms(100_000);
        let r = compensated_sum(|n| real(1.0 / n as f64), &cfg).unwrap();
        assert!(!r.converged);
    }

    #[test]
    fn config_validation() {
        let c = SummationConfig::<f64> {
            min_terms: 1,
            ..Default::default()
        };
        assert!(c.validate().is_err());
        assert!(SummationConfig::<f64>::default().with_rel_tol(0.0).validate().is_err());
        assert!(Composition::<f64>::new(vec![]).is_err());
    }
}
