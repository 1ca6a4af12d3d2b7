//! Sequences {z_k} underlying every zeta object.
//!
//! A [`SequenceSource`] is built from a [`SequenceSpec`] and serves terms
//! z_1, z_2, … by index. Terms are complex; all built-in families except
//! Bessel polynomial roots produce exactly-real values.

use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::complementary::ComplementaryMemo;
use crate::error::{invalid, Error, Result};
use crate::scalar::{lit, real, Scalar};
use crate::specialfn::{bessel_poly_roots, BesselZeroTable};

#[derive(Debug, Clone, PartialEq)]
pub enum Family<T> {
    /// z_k = k.
    Natural,
    /// z_k = 2k − 1, the odd integers starting at 1.
    Odd,
    /// z_k = k + a − 1 with a ∈ (0, 1].
    ShiftedLinear(T),
    /// z_k = k − 1/2.
    HalfInteger,
    /// z_k = k².
    Squares,
    /// z_k = k(k + 1).
    Pronic,
    /// z_k = x²_{ν,k}, squared positive zeros of J_ν.
    BesselSquaredZeros(T),
    /// Roots of the degree-n Bessel polynomial θ_n.
    BesselPolyRoots(usize),
    /// A user-supplied finite list.
    Explicit(Vec<Complex<T>>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Length {
    Finite(usize),
    Infinite,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequenceSpec<T> {
    pub family: Family<T>,
    pub length: Length,
}

impl<T: Scalar> SequenceSpec<T> {
    /// The same spec with parameters converted to another scalar type.
    pub fn cast<U: Scalar>(&self) -> SequenceSpec<U> {
        let conv = |x: T| U::lit(x.to_f64_lossy());
        let family = match &self.family {
            Family::Natural => Family::Natural,
            Family::Odd => Family::Odd,
            Family::ShiftedLinear(a) => Family::ShiftedLinear(conv(*a)),
            Family::HalfInteger => Family::HalfInteger,
            Family::Squares => Family::Squares,
            Family::Pronic => Family::Pronic,
            Family::BesselSquaredZeros(nu) => Family::BesselSquaredZeros(conv(*nu)),
            Family::BesselPolyRoots(n) => Family::BesselPolyRoots(*n),
            Family::Explicit(v) => Family::Explicit(v.iter().map(|z| Complex::new(conv(z.re), conv(z.im))).collect()),
        };
        SequenceSpec {
            family,
            length: self.length,
        }
    }
}

impl<T> SequenceSpec<T> {
    pub fn infinite(family: Family<T>) -> Self {
        Self {
            family,
            length: Length::Infinite,
        }
    }

    pub fn finite(family: Family<T>, n: usize) -> Self {
        Self {
            family,
            length: Length::Finite(n),
        }
    }
}

/// z_k ≈ c·(k + d)^p for large k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailModel<T> {
    pub p: T,
    pub c: T,
    pub d: T,
}

/// A constructed sequence. Cheap to share across threads; Bessel zeros and
/// complementary terms are cached internally behind locks.
pub struct SequenceSource<T: Scalar> {
    spec: SequenceSpec<T>,
    zeros: Option<BesselZeroTable<T>>,
    listed: Option<Vec<Complex<T>>>,
    pub(crate) memo: ComplementaryMemo<T>,
}

impl<T: Scalar> fmt::Debug for SequenceSource<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SequenceSource")
            .field("spec", &self.spec)
            .finish_non_exhaustive()
    }
}

/// Validates `spec` and builds its source.
pub fn make_sequence<T: Scalar>(spec: SequenceSpec<T>) -> Result<SequenceSource<T>> {
    SequenceSource::new(spec)
}

impl<T: Scalar> SequenceSource<T> {
    pub fn new(mut spec: SequenceSpec<T>) -> Result<Self> {
        if spec.length == Length::Finite(0) {
            return Err(invalid("length", "finite length must be positive"));
        }
        let mut zeros = None;
        let mut listed = None;
        match &spec.family {
            Family::ShiftedLinear(a) => {
                if !(*a > T::zero() && *a <= T::one()) {
                    return Err(invalid(
                        "a",
                        format!("shift must lie in (0, 1] so that z_1 = a ≠ 0, got {a}"),
                    ));
                }
            }
            Family::BesselSquaredZeros(nu) => {
                if !(*nu > -T::one()) || !nu.is_finite() {
                    return Err(invalid("nu", format!("Bessel order must exceed −1, got {nu}")));
                }
                zeros = Some(BesselZeroTable::new(*nu)?);
            }
            Family::BesselPolyRoots(n) => {
                if *n < 1 {
                    return Err(invalid("n", "Bessel polynomial degree must be ≥ 1"));
                }
                listed = Some(bessel_poly_roots::<T>(*n)?);
            }
            Family::Explicit(values) => {
                if values.is_empty() {
                    return Err(invalid("values", "explicit list is empty"));
                }
                if let Some(i) = values.iter().position(|z| z.re == T::zero() && z.im == T::zero()) {
                    return Err(invalid("values", format!("entry {} is zero", i + 1)));
                }
                if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                    return Err(invalid("values", "entries must be finite"));
                }
                listed = Some(values.clone());
            }
            _ => {}
        }
        if let Some(list) = &mut listed {
            match spec.length {
                Length::Infinite => spec.length = Length::Finite(list.len()),
                Length::Finite(n) if n > list.len() => {
                    return Err(invalid(
                        "length",
                        format!("requested {n} terms but only {} are available", list.len()),
                    ))
                }
                Length::Finite(n) => list.truncate(n),
            }
        }
        Ok(Self {
            spec,
            zeros,
            listed,
            memo: ComplementaryMemo::default(),
        })
    }

    pub fn spec(&self) -> &SequenceSpec<T> {
        &self.spec
    }

    pub fn length(&self) -> Length {
        self.spec.length
    }

    /// Number of terms for finite sequences.
    pub fn len(&self) -> Option<usize> {
        match self.spec.length {
            Length::Finite(n) => Some(n),
            Length::Infinite => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.len().is_some()
    }

    /// z_k for k ≥ 1.
    pub fn term(&self, k: usize) -> Result<Complex<T>> {
        self.check_index(k)?;
        Ok(match &self.spec.family {
            Family::BesselSquaredZeros(_) => {
                let x = self.zero_table().zero(k)?;
                real(x * x)
            }
            Family::BesselPolyRoots(_) | Family::Explicit(_) => self.listed_values()[k - 1],
            _ => real(self.closed_term(k)),
        })
    }

    /// Terms z_from, …, z_to (inclusive, 1-based).
    pub fn terms(&self, from: usize, to: usize) -> Result<Vec<Complex<T>>> {
        if from > to {
            return Ok(Vec::new());
        }
        self.check_index(from)?;
        self.check_index(to)?;
        Ok(match &self.spec.family {
            Family::BesselSquaredZeros(_) => {
                let xs = self.zero_table().first(to)?;
                xs[from - 1..].iter().map(|&x| real(x * x)).collect()
            }
            Family::BesselPolyRoots(_) | Family::Explicit(_) => {
                self.listed_values()[from - 1..to].to_vec()
            }
            _ => (from..=to).map(|k| real(self.closed_term(k))).collect(),
        })
    }

    /// Asymptotic model for infinite built-in families; `None` otherwise.
    pub fn tail_model(&self) -> Option<TailModel<T>> {
        if self.is_finite() {
            return None;
        }
        let (p, c, d) = match &self.spec.family {
            Family::Natural => (1.0, 1.0, 0.0),
            Family::Odd => (1.0, 2.0, -0.5),
            Family::ShiftedLinear(a) => {
                return Some(TailModel {
                    p: T::one(),
                    c: T::one(),
                    d: *a - T::one(),
                })
            }
            Family::HalfInteger => (1.0, 1.0, -0.5),
            Family::Squares => (2.0, 1.0, 0.0),
            Family::Pronic => (2.0, 1.0, 0.5),
            Family::BesselSquaredZeros(nu) => {
                return Some(TailModel {
                    p: lit(2.0),
                    c: T::PI() * T::PI(),
                    d: *nu * lit(0.5) - lit(0.25),
                })
            }
            Family::BesselPolyRoots(_) | Family::Explicit(_) => return None,
        };
        Some(TailModel {
            p: lit(p),
            c: lit(c),
            d: lit(d),
        })
    }

    /// True when every term is real and positive.
    pub fn is_positive_real(&self) -> bool {
        match &self.listed {
            Some(v) => v.iter().all(|z| z.im == T::zero() && z.re > T::zero()),
            None => true,
        }
    }

    fn check_index(&self, k: usize) -> Result<()> {
        match self.len() {
            _ if k == 0 => Err(Error::OutOfRange { index: 0, len: self.len().unwrap_or(0) }),
            Some(n) if k > n => Err(Error::OutOfRange { index: k, len: n }),
            _ => Ok(()),
        }
    }

    fn zero_table(&self) -> &BesselZeroTable<T> {
        self.zeros.as_ref().expect("Bessel family carries a zero table")
    }

    fn listed_values(&self) -> &[Complex<T>] {
        self.listed.as_deref().expect("listed family carries values")
    }

    fn closed_term(&self, k: usize) -> T {
        let x = T::from_usize_lossy(k);
        match &self.spec.family {
            Family::Natural => x,
            Family::Odd => lit::<T>(2.0) * x - T::one(),
            Family::ShiftedLinear(a) => x + *a - T::one(),
            Family::HalfInteger => x - lit(0.5),
            Family::Squares => x * x,
            Family::Pronic => x * (x + T::one()),
            _ => unreachable!("closed_term on a tabulated family"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
enum FamilyRepr {
    Natural,
    Odd,
    ShiftedLinear { a: f64 },
    HalfInteger,
    Squares,
    Pronic,
    BesselZeros { nu: f64 },
    BesselPolyRoots { n: usize },
    Explicit { values: Vec<ValueRepr> },
}

/// A real number, or `[re, im]`.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ValueRepr {
    Real(f64),
    Complex([f64; 2]),
}

#[derive(Serialize, Deserialize)]
struct SpecRepr {
    #[serde(flatten)]
    family: FamilyRepr,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    length: Option<usize>,
}

impl<T: Scalar> Serialize for SequenceSpec<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let family = match &self.family {
            Family::Natural => FamilyRepr::Natural,
            Family::Odd => FamilyRepr::Odd,
            Family::ShiftedLinear(a) => FamilyRepr::ShiftedLinear { a: a.to_f64_lossy() },
            Family::HalfInteger => FamilyRepr::HalfInteger,
            Family::Squares => FamilyRepr::Squares,
            Family::Pronic => FamilyRepr::Pronic,
            Family::BesselSquaredZeros(nu) => FamilyRepr::BesselZeros { nu: nu.to_f64_lossy() },
            Family::BesselPolyRoots(n) => FamilyRepr::BesselPolyRoots { n: *n },
            Family::Explicit(v) => FamilyRepr::Explicit {
                values: v
                    .iter()
                    .map(|z| {
                        if z.im == T::zero() {
                            ValueRepr::Real(z.re.to_f64_lossy())
                        } else {
                            ValueRepr::Complex([z.re.to_f64_lossy(), z.im.to_f64_lossy()])
                        }
                    })
                    .collect(),
            },
        };
        let length = match self.length {
            Length::Finite(n) => Some(n),
            Length::Infinite => None,
        };
        SpecRepr { family, length }.serialize(serializer)
    }
}

impl<'de, T: Scalar> Deserialize<'de> for SequenceSpec<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = SpecRepr::deserialize(deserializer)?;
        let family = match repr.family {
            FamilyRepr::Natural => Family::Natural,
            FamilyRepr::Odd => Family::Odd,
            FamilyRepr::ShiftedLinear { a } => Family::ShiftedLinear(lit(a)),
            FamilyRepr::HalfInteger => Family::HalfInteger,
            FamilyRepr::Squares => Family::Squares,
            FamilyRepr::Pronic => Family::Pronic,
            FamilyRepr::BesselZeros { nu } => Family::BesselSquaredZeros(lit(nu)),
            FamilyRepr::BesselPolyRoots { n } => Family::BesselPolyRoots(n),
            FamilyRepr::Explicit { values } => Family::Explicit(
                values
                    .into_iter()
                    .map(|v| match v {
                        ValueRepr::Real(x) => real(lit(x)),
                        ValueRepr::Complex([re, im]) => Complex::new(lit(re), lit(im)),
                    })
                    .collect(),
            ),
        };
        Ok(Self {
            family,
            length: repr.length.map_or(Length::Infinite, Length::Finite),
        })
    }
}

impl<T: Scalar> fmt::Display for SequenceSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            Family::Natural => write!(f, "natural")?,
            Family::Odd => write!(f, "odd")?,
            Family::ShiftedLinear(a) => write!(f, "shifted_linear(a={a})")?,
            Family::HalfInteger => write!(f, "half_integer")?,
            Family::Squares => write!(f, "squares")?,
            Family::Pronic => write!(f, "pronic")?,
            Family::BesselSquaredZeros(nu) => write!(f, "bessel_zeros(nu={nu})")?,
            Family::BesselPolyRoots(n) => write!(f, "bessel_poly_roots(n={n})")?,
            Family::Explicit(v) => write!(f, "explicit[{}]", v.len())?,
        }
        if let Length::Finite(n) = self.length {
            write!(f, " N={n}")?;
        }
        Ok(())
    }
}
