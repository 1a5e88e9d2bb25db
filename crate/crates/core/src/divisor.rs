//! Exact divisors supported on the exceptional curves of one chain level.

use std::fmt;

use num_rational::Ratio;
use num_traits::Signed;

use crate::blowup::{IntersectionForm, PullbackMap};
use crate::error::{Error, Result};
use crate::scalar::{int, pow2, ExactInt};

/// Rational combination `sum_i c_i E_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QDivisor<T: ExactInt> {
    coeffs: Vec<Ratio<T>>,
}

/// Integral combination `sum_i c_i E_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegralDivisor<T> {
    coeffs: Vec<T>,
}

impl<T: ExactInt> QDivisor<T> {
    pub fn new(coeffs: Vec<Ratio<T>>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::LevelOutOfRange { level: 0, max: 0 });
        }
        Ok(QDivisor { coeffs })
    }

    /// `F(l) = sum_i (2^i - 1) / 2^(i-1) E_i`.
    pub fn paper(level: usize) -> Result<Self> {
        if level == 0 {
            return Err(Error::LevelOutOfRange { level, max: 0 });
        }
        let coeffs = (1..=level)
            .map(|i| Ratio::new(pow2::<T>(i) - T::one(), pow2::<T>(i - 1)))
            .collect();
        Ok(QDivisor { coeffs })
    }

    pub fn level(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Ratio<T>] {
        &self.coeffs
    }

    /// `ceil(m F)` coefficientwise.
    pub fn ceil_multiple(&self, m: &T) -> Result<IntegralDivisor<T>> {
        if !m.is_positive() {
            return Err(Error::NonPositiveMultiplier);
        }
        let m = Ratio::from_integer(m.clone());
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| (c * &m).ceil().to_integer())
            .collect();
        Ok(IntegralDivisor { coeffs })
    }

    pub fn is_effective(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }
}

impl<T: ExactInt> IntegralDivisor<T> {
    pub fn new(coeffs: Vec<T>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::LevelOutOfRange { level: 0, max: 0 });
        }
        Ok(IntegralDivisor { coeffs })
    }

    pub fn zero(level: usize) -> Self {
        IntegralDivisor {
            coeffs: vec![T::zero(); level.max(1)],
        }
    }

    /// The single curve `E_n` on level `level`.
    pub fn curve(level: usize, n: usize) -> Result<Self> {
        if n == 0 || n > level {
            return Err(Error::CurveOutOfRange { index: n, level });
        }
        let mut d = Self::zero(level);
        d.coeffs[n - 1] = T::one();
        Ok(d)
    }

    /// `D(l)_m = ceil(m F(l))`.
    pub fn paper(level: usize, m: &T) -> Result<Self> {
        QDivisor::paper(level)?.ceil_multiple(m)
    }

    pub fn level(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of `E_n`, 1-based.
    pub fn coeff(&self, n: usize) -> Result<&T> {
        if n == 0 || n > self.level() {
            return Err(Error::CurveOutOfRange {
                index: n,
                level: self.level(),
            });
        }
        Ok(&self.coeffs[n - 1])
    }

    pub fn negated(&self) -> Self {
        IntegralDivisor {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.level() != other.level() {
            return Err(Error::LevelMismatch {
                expected: self.level(),
                found: other.level(),
            });
        }
        Ok(IntegralDivisor {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }

    /// Coefficientwise `self <= other`.
    pub fn le(&self, other: &Self) -> bool {
        self.level() == other.level() && self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a <= b)
    }

    /// `(D . E_n)`.
    pub fn intersect_curve(&self, n: usize, form: &IntersectionForm<T>) -> Result<T> {
        form.pair_with_curve(&self.coeffs, n)
    }

    /// `(D . D')`.
    pub fn intersect(&self, other: &Self, form: &IntersectionForm<T>) -> Result<T> {
        form.pair(&self.coeffs, &other.coeffs)
    }

    /// `(-D . E_n)` for every curve, `n = 1..=level`.
    pub fn negated_intersections(&self, form: &IntersectionForm<T>) -> Result<Vec<T>> {
        (1..=self.level())
            .map(|n| self.intersect_curve(n, form).map(|v| -v))
            .collect()
    }

    /// Whether `-D` is nef: `(-D . E_n) >= 0` for all exceptional curves.
    pub fn is_antinef(&self, form: &IntersectionForm<T>) -> Result<bool> {
        Ok(self
            .negated_intersections(form)?
            .iter()
            .all(|v| !v.is_negative()))
    }

    pub fn pullback(&self, map: &PullbackMap) -> Result<Self> {
        Ok(IntegralDivisor {
            coeffs: map.apply(&self.coeffs)?,
        })
    }
}

impl<T: fmt::Display> fmt::Display for IntegralDivisor<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", cells.join(", "))
    }
}

impl<T: ExactInt> fmt::Display for QDivisor<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", cells.join(", "))
    }
}

/// Which residue class of `m` decides `(-D(l)_m . E_n)`.
///
/// Writing `m = q x + r` for the period `q` of the curve (`2` for `E_1`,
/// `2^n` for an interior curve, `2^(l-1)` for the last one), the
/// intersection number is `x` or `x + 1` according to where `r` falls.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ResidueCase {
    /// `n = 1`, `m` even.
    FirstEven,
    /// `n = 1`, `m` odd.
    FirstOdd,
    /// `1 < n < l`, `r < 2^(n-2)`.
    InteriorFirstQuarter,
    /// `1 < n < l`, `2^(n-2) <= r < 2^(n-1)`.
    InteriorSecondQuarter,
    /// `1 < n < l`, `r = 2^(n-1) + s` with `s < 2^(n-2)`.
    InteriorThirdQuarter,
    /// `1 < n < l`, `r = 2^(n-1) + s` with `s >= 2^(n-2)`.
    InteriorFourthQuarter,
    /// `n = l`, `r < 2^(l-2)`.
    LastLowerHalf,
    /// `n = l`, `r >= 2^(l-2)`.
    LastUpperHalf,
}

impl ResidueCase {
    /// Whether the intersection number is `x + 1` rather than `x`.
    pub fn adds_one(self) -> bool {
        matches!(
            self,
            ResidueCase::InteriorSecondQuarter
                | ResidueCase::InteriorFourthQuarter
                | ResidueCase::LastUpperHalf
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseAnalysis<T> {
    pub case: ResidueCase,
    /// Quotient of `m` by the period of the curve.
    pub quotient: T,
    pub remainder: T,
    pub value: T,
}

fn check_closed_form_args<T: ExactInt>(m: &T, n: usize, l: usize) -> Result<()> {
    if l < 2 {
        return Err(Error::ClosedFormLevel(l));
    }
    if n == 0 || n > l {
        return Err(Error::CurveOutOfRange { index: n, level: l });
    }
    if !m.is_positive() {
        return Err(Error::NonPositiveMultiplier);
    }
    Ok(())
}

/// `(-D(l)_m . E_n)` on the standard chain from floor sums alone:
///
/// * `n = 1`: `floor(m/2)`
/// * `1 < n < l`: `floor(m/2^(n-2)) - 2 floor(m/2^(n-1)) + floor(m/2^n)`
/// * `n = l`: `floor(m/2^(l-2)) - floor(m/2^(l-1))`
pub fn closed_form_intersection<T: ExactInt>(m: &T, n: usize, l: usize) -> Result<T> {
    check_closed_form_args(m, n, l)?;
    let fl = |k: usize| m.div_floor(&pow2::<T>(k));
    Ok(if n == 1 {
        fl(1)
    } else if n < l {
        fl(n - 2) - int::<T>(2) * fl(n - 1) + fl(n)
    } else {
        fl(l - 2) - fl(l - 1)
    })
}

/// Classifies `m` into its residue case and evaluates `x` or `x + 1`.
pub fn classify_residue<T: ExactInt>(m: &T, n: usize, l: usize) -> Result<CaseAnalysis<T>> {
    check_closed_form_args(m, n, l)?;
    let (case, quotient, remainder) = if n == 1 {
        let (x, r) = m.div_mod_floor(&int(2));
        let case = if r.is_zero() {
            ResidueCase::FirstEven
        } else {
            ResidueCase::FirstOdd
        };
        (case, x, r)
    } else if n < l {
        let (x, r) = m.div_mod_floor(&pow2(n));
        let half = pow2::<T>(n - 1);
        let quarter = pow2::<T>(n - 2);
        let case = if r < half {
            if r < quarter {
                ResidueCase::InteriorFirstQuarter
            } else {
                ResidueCase::InteriorSecondQuarter
            }
        } else if r.clone() - half < quarter {
            ResidueCase::InteriorThirdQuarter
        } else {
            ResidueCase::InteriorFourthQuarter
        };
        (case, x, r)
    } else {
        let (x, r) = m.div_mod_floor(&pow2(l - 1));
        let case = if r < pow2(l - 2) {
            ResidueCase::LastLowerHalf
        } else {
            ResidueCase::LastUpperHalf
        };
        (case, x, r)
    };
    let value = if case.adds_one() {
        quotient.clone() + T::one()
    } else {
        quotient.clone()
    };
    Ok(CaseAnalysis {
        case,
        quotient,
        remainder,
        value,
    })
}
