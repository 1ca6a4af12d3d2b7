//! Strict and weak simplex sums Σ Π z_{n_j}^(−s_j).

use num_complex::Complex;

use crate::error::Result;
use crate::scalar::{inv_pow, Scalar};
use crate::sequences::SequenceSource;

use super::{drive, mzv_tail_classes, ComplexSum, Composition, EvalResult, SummationConfig};

/// Incremental simplex sum over n₁ > n₂ > … > n_k (or ≥ for star sums).
///
/// Terms are pushed in index order; `h[j]` holds the depth-(k−1−j) inner
/// sum over indices already seen, so each push costs O(k).
#[derive(Debug, Clone)]
pub struct SimplexSum<T> {
    exponents: Vec<T>,
    star: bool,
    h: Vec<ComplexSum<T>>,
    total: ComplexSum<T>,
    count: usize,
}

impl<T: Scalar> SimplexSum<T> {
    pub fn new(exponents: &[T], star: bool) -> Self {
        Self {
            exponents: exponents.to_vec(),
            star,
            h: vec![ComplexSum::new(); exponents.len().saturating_sub(1)],
            total: ComplexSum::new(),
            count: 0,
        }
    }

    #[inline]
    pub fn push(&mut self, z: Complex<T>) {
        let k = self.exponents.len();
        let one = Complex::new(T::one(), T::zero());
        self.count += 1;
        let w = |s: T| inv_pow(z, s);
        if k == 1 {
            self.total.add(w(self.exponents[0]));
            return;
        }
        // h[j-1] accumulates the sum that multiplies level j (0-based j ≥ 1).
        if self.star {
            for j in (1..k).rev() {
                let inner = if j + 1 < k { self.h[j].value() } else { one };
                self.h[j - 1].add(w(self.exponents[j]) * inner);
            }
            self.total.add(w(self.exponents[0]) * self.h[0].value());
        } else {
            self.total.add(w(self.exponents[0]) * self.h[0].value());
            for j in 1..k {
                let inner = if j + 1 < k { self.h[j].value() } else { one };
                self.h[j - 1].add(w(self.exponents[j]) * inner);
            }
        }
    }

    pub fn value(&self) -> Complex<T> {
        self.total.value()
    }

    pub fn count(&self) -> usize {
        self.count
    }
}

fn simplex<T: Scalar>(
    seq: &SequenceSource<T>,
    comp: &Composition<T>,
    star: bool,
    config: &SummationConfig<T>,
) -> Result<EvalResult<T>> {
    comp.check_gate(seq)?;
    let exps = comp.exponents();
    if let Some(n) = seq.len() {
        let terms = seq.terms(1, n)?;
        let mut acc = SimplexSum::new(exps, star);
        let mut mag = SimplexSum::new(exps, star);
        for &z in &terms {
            acc.push(z);
            mag.push(Complex::new(z.norm(), T::zero()));
        }
        let bound = T::epsilon() * T::from_usize_lossy(4 * (n + exps.len())) * mag.value().norm();
        return Ok(EvalResult::exact(acc.value(), bound, n));
    }
    let model = seq.tail_model().expect("gate checked the tail model");
    let classes = mzv_tail_classes(model.p, exps);
    let mut acc = SimplexSum::new(exps, star);
    drive(config, config.min_terms, &classes, |upto| {
        let from = acc.count() + 1;
        for z in seq.terms(from, upto)? {
            acc.push(z);
        }
        Ok(acc.value())
    })
}

/// ζ_Z(s₁, …, s_k) = Σ_{n₁>…>n_k≥1} Π z_{n_j}^(−s_j).
pub fn extended_mzv<T: Scalar>(
    seq: &SequenceSource<T>,
    comp: &Composition<T>,
    config: &SummationConfig<T>,
) -> Result<EvalResult<T>> {
    simplex(seq, comp, false, config)
}

/// ζ*_Z(s₁, …, s_k) = Σ_{n₁≥…≥n_k≥1} Π z_{n_j}^(−s_j).
pub fn extended_star_mzv<T: Scalar>(
    seq: &SequenceSource<T>,
    comp: &Composition<T>,
    config: &SummationConfig<T>,
) -> Result<EvalResult<T>> {
    simplex(seq, comp, true, config)
}

/// ζ_Z(s) = Σ_{n≥1} z_n^(−s).
pub fn extended_zeta<T: Scalar>(
    seq: &SequenceSource<T>,
    s: T,
    config: &SummationConfig<T>,
) -> Result<EvalResult<T>> {
    extended_mzv(seq, &Composition::new(vec![s])?, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::scalar::real;
    use crate::sequences::{make_sequence, Family, SequenceSpec};
    use std::f64::consts::PI;

    const ZETA3: f64 = 1.202_056_903_159_594_3;

    fn inf(f: Family<f64>) -> SequenceSource<f64> {
        make_sequence(SequenceSpec::infinite(f)).unwrap()
    }

    fn explicit(v: &[f64]) -> SequenceSource<f64> {
        make_sequence(SequenceSpec::infinite(Family::Explicit(v.iter().map(|&x| real(x)).collect())))
            .unwrap()
    }

    fn comp(s: &[i64]) -> Composition<f64> {
        Composition::from_ints(s).unwrap()
    }

    #[test]
    fn natural_single_values() {
        let cfg = SummationConfig::default();
        let r = extended_zeta(&inf(Family::Natural), 2.0, &cfg).unwrap();
        assert!(r.converged && (r.value.re - PI * PI / 6.0).abs() < 1e-10);
        let r = extended_zeta(&inf(Family::Odd), 2.0, &cfg).unwrap();
        assert!((r.value.re - PI * PI / 8.0).abs() < 1e-10);
        let r = extended_mzv(&inf(Family::Natural), &comp(&[4]), &cfg).unwrap();
        assert!((r.value.re - PI.powi(4) / 90.0).abs() < 1e-10);
    }

    #[test]
    fn euler_two_one() {
        let r = extended_mzv(&inf(Family::Natural), &comp(&[2, 1]), &SummationConfig::default()).unwrap();
        assert!(r.converged);
        assert!((r.value.re - ZETA3).abs() < 1e-9, "{}", r.value.re);
        let r = extended_star_mzv(&inf(Family::Natural), &comp(&[2, 1]), &SummationConfig::default())
            .unwrap();
        assert!((r.value.re - 2.0 * ZETA3).abs() < 1e-9);
    }

    #[test]
    fn small_explicit_cases() {
        let cfg = SummationConfig::default();
        let s = explicit(&[1.0, 2.0]);
        assert_eq!(extended_mzv(&s, &comp(&[1, 1]), &cfg).unwrap().value.re, 0.5);
        assert_eq!(extended_star_mzv(&s, &comp(&[1, 1]), &cfg).unwrap().value.re, 1.75);
    }

    #[test]
    fn bessel_zeta_two() {
        let nu = 1.3;
        let r = extended_zeta(&inf(Family::BesselSquaredZeros(nu)), 1.0, &SummationConfig::default())
            .unwrap();
        assert!((r.value.re - 1.0 / (4.0 * (nu + 1.0))).abs() < 1e-8, "{r:?}");
    }

    #[test]
    fn gate_names_failing_index() {
        let cfg = SummationConfig::default();
        match extended_mzv(&inf(Family::Natural), &comp(&[1, 2]), &cfg) {
            Err(Error::Divergent { index, .. }) => assert_eq!(index, 1),
            other => panic!("{other:?}"),
        }
        match extended_mzv(&inf(Family::Natural), &comp(&[2, 0]), &cfg) {
            Err(Error::Divergent { index, .. }) => assert_eq!(index, 2),
            other => panic!("{other:?}"),
        }
        assert!(extended_mzv(&inf(Family::Squares), &comp(&[1, 1]), &cfg).is_ok());
    }

    #[test]
    fn brute_force_explicit() {
        let v = [1.5, -2.0, 3.25, 0.75, 4.0, -5.5];
        let s = explicit(&v);
        let cfg = SummationConfig::default();
        let got = extended_mzv(&s, &comp(&[2, 1, 3]), &cfg).unwrap().value.re;
        let mut want = 0.0;
        for a in 0..6 {
            for b in 0..a {
                for c in 0..b {
                    want += v[a].powi(-2) * v[b].powi(-1) * v[c].powi(-3);
                }
            }
        }
        assert!((got - want).abs() < 1e-14);
    }
}
