//! Value sequences `m -> v(I_m)` of graded families and the asymptotic
//! invariant `gamma_v = inf_m v(I_m) / m`.
//!
//! Sequences are truncated at a bound `M`. A finite truncation can exhibit
//! an index where the infimum is reached, but it can never prove that the
//! infimum is missed, so the report types keep those two outcomes apart.

use std::fmt;

use num_bigint::BigInt;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::blowup::BlowupChain;
use crate::divisor::{IntegralDivisor, QDivisor};
use crate::error::{Error, Result};

/// Values of a rank-one or rank-two valuation on ideals.
pub trait GroupValue: Clone + Ord + fmt::Debug + fmt::Display + Send + Sync {
    /// `value / m`, ordered compatibly with `Self`.
    type Scaled: Clone + Ord + fmt::Debug + fmt::Display + Send + Sync;

    fn plus(&self, other: &Self) -> Self;
    fn is_nonnegative(&self) -> bool;
    fn scaled(&self, m: usize) -> Self::Scaled;
}

impl GroupValue for i64 {
    type Scaled = Ratio<i64>;

    fn plus(&self, other: &Self) -> Self {
        self + other
    }

    fn is_nonnegative(&self) -> bool {
        *self >= 0
    }

    fn scaled(&self, m: usize) -> Ratio<i64> {
        Ratio::new(*self, m as i64)
    }
}

/// An element of `Z^2` with the lexicographic order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LexPair(pub i64, pub i64);

impl fmt::Display for LexPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0, self.1)
    }
}

/// A pair of rationals with the lexicographic order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LexRatio(pub Ratio<i64>, pub Ratio<i64>);

impl fmt::Display for LexRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0, self.1)
    }
}

impl GroupValue for LexPair {
    type Scaled = LexRatio;

    fn plus(&self, other: &Self) -> Self {
        LexPair(self.0 + other.0, self.1 + other.1)
    }

    fn is_nonnegative(&self) -> bool {
        *self >= LexPair(0, 0)
    }

    fn scaled(&self, m: usize) -> LexRatio {
        LexRatio(Ratio::new(self.0, m as i64), Ratio::new(self.1, m as i64))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Formula,
    Table,
}

/// `v(I_1), ..., v(I_M)` for a graded family `I_a I_b ⊆ I_{a+b}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueSequence<V> {
    values: Vec<V>,
    provenance: Provenance,
}

/// First pair `(m, n)`, `m <= n`, with `v(I_{m+n}) > v(I_m) + v(I_n)`.
pub fn find_subadditivity_violation<V: GroupValue>(values: &[V]) -> Option<(usize, usize)> {
    let bound = values.len();
    for m in 1..=bound / 2 {
        for n in m..=bound - m {
            if values[m + n - 1] > values[m - 1].plus(&values[n - 1]) {
                return Some((m, n));
            }
        }
    }
    None
}

impl<V: GroupValue> ValueSequence<V> {
    /// Validates nonnegativity and subadditivity. `values[0]` is `v(I_1)`.
    pub fn new(values: Vec<V>, provenance: Provenance) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySequence);
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !v.is_nonnegative()) {
            return Err(Error::NegativeValue {
                m: i + 1,
                value: v.to_string(),
            });
        }
        if let Some((m, n)) = find_subadditivity_violation(&values) {
            return Err(Error::NotSubadditive {
                m,
                n,
                sum: m + n,
                lhs: values[m + n - 1].to_string(),
                rhs: values[m - 1].plus(&values[n - 1]).to_string(),
            });
        }
        Ok(ValueSequence { values, provenance })
    }

    pub fn bound(&self) -> usize {
        self.values.len()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn values(&self) -> &[V] {
        &self.values
    }

    /// `v(I_m)` for `1 <= m <= M`.
    pub fn get(&self, m: usize) -> Option<&V> {
        m.checked_sub(1).and_then(|i| self.values.get(i))
    }

    pub fn ratio(&self, m: usize) -> Option<V::Scaled> {
        self.get(m).map(|v| v.scaled(m))
    }
}

/// `v_{E_n}(I_m) = ceil(m (2^n - 1) / 2^(n-1))`, evaluated as
/// `2m - floor(m / 2^(n-1))`.
pub fn divisorial_value(n: usize, m: u64) -> i64 {
    assert!(n >= 1, "curve index is 1-based");
    let shift = (n - 1) as u32;
    let floor = if shift >= 64 { 0 } else { m >> shift };
    (2 * m - floor) as i64
}

fn check_curve(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::CurveOutOfRange { index: 0, level: 0 })
    } else {
        Ok(())
    }
}

/// `m -> v_{E_n}(I_m)` for `1 <= m <= bound`.
pub fn paper_value_sequence(n: usize, bound: usize) -> Result<ValueSequence<i64>> {
    check_curve(n)?;
    let values = (1..=bound as u64).map(|m| divisorial_value(n, m)).collect();
    ValueSequence::new(values, Provenance::Formula)
}

/// `m -> v(I_m) = (v_{E_n}(I_m), 0)` for the rank-two valuation refining
/// `v_{E_n}` at a general point of `E_n`.
pub fn composite_value_sequence(n: usize, bound: usize) -> Result<ValueSequence<LexPair>> {
    check_curve(n)?;
    let values = (1..=bound as u64)
        .map(|m| LexPair(divisorial_value(n, m), 0))
        .collect();
    ValueSequence::new(values, Provenance::Formula)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Attainment {
    /// Smallest `m` with `v(I_m)/m = gamma`, confirmed at every multiple of
    /// `m` up to the bound.
    Attained {
        witness: usize,
    },
    NotAttainedUpTo {
        bound: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaReport<S> {
    /// Minimum of `v(I_m)/m` over `m <= M`.
    pub gamma: S,
    pub status: Attainment,
    /// Every `(m, v(I_m)/m)` that lowered the running minimum.
    pub trace: Vec<(usize, S)>,
}

/// Truncated `gamma_v`.
///
/// The infimum is reported as attained at the smallest `m*` realising the
/// minimum only if `2 m* <= M` and the ratio stays equal to the minimum at
/// every multiple `k m* <= M`. A minimum that only shows up at the end of
/// the window (as for `v(I_m) = m + 1`) is left as not attained.
pub fn gamma<V: GroupValue>(seq: &ValueSequence<V>) -> GammaReport<V::Scaled> {
    let mut trace: Vec<(usize, V::Scaled)> = Vec::new();
    for m in 1..=seq.bound() {
        let r = seq.ratio(m).expect("m within bound");
        if trace.last().is_none_or(|(_, best)| r < *best) {
            trace.push((m, r));
        }
    }
    let (first, gamma) = trace.last().cloned().expect("sequence is nonempty");
    let bound = seq.bound();
    let propagates = 2 * first <= bound
        && (2..=bound / first).all(|k| seq.ratio(k * first).as_ref() == Some(&gamma));
    let status = if propagates {
        Attainment::Attained { witness: first }
    } else {
        Attainment::NotAttainedUpTo { bound }
    };
    GammaReport {
        gamma,
        status,
        trace,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CenterStatus {
    HasCenter { witness: usize },
    UnknownUpTo { bound: usize },
}

/// A valuation has a centre on the Proj of the Rees algebra exactly when
/// the infimum of `v(I_m)/m` is reached at some `m`; only that direction can
/// be certified from finitely many terms.
pub fn center_criterion<V: GroupValue>(seq: &ValueSequence<V>) -> CenterStatus {
    match gamma(seq).status {
        Attainment::Attained { witness } => CenterStatus::HasCenter { witness },
        Attainment::NotAttainedUpTo { bound } => CenterStatus::UnknownUpTo { bound },
    }
}

/// Outcome of comparing divisor coefficients against the valuation formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientCheck {
    pub n: usize,
    pub m: u64,
    /// `ceil(m (2^n - 1) / 2^(n-1))`.
    pub expected: i64,
    /// Levels `l` inspected, all with `n <= l` and `m < 2^(l-1)`.
    pub levels: Vec<usize>,
    /// Coefficient of `E_n` in `D(l)_m` at each inspected level.
    pub coefficients: Vec<BigInt>,
    /// Coefficient of `E_n` in the pullback of `D(l0)_m` from the first
    /// inspected level.
    pub pulled_back: Vec<BigInt>,
    pub consistent: bool,
}

/// Smallest `l >= n` with `m < 2^(l-1)`.
pub fn stable_level(n: usize, m: u64) -> usize {
    let mut l = n.max(1);
    while (l - 1) < 64 && m >= (1u64 << (l - 1)) {
        l += 1;
    }
    l
}

/// Checks that the coefficient of `E_n` in `D(l)_m` has stopped moving once
/// `m < 2^(l-1)`, that the pullbacks of the first stable divisor agree with
/// the later ones, and that the common value is `v_{E_n}(I_m)`.
pub fn coefficient_cross_check(n: usize, m: u64) -> Result<CoefficientCheck> {
    check_curve(n)?;
    if m == 0 {
        return Err(Error::NonPositiveMultiplier);
    }
    let first = stable_level(n, m);
    let log2_ceil = (64 - (m - 1).leading_zeros()) as usize;
    let last = (log2_ceil + 3).max(first + 2);
    let chain = BlowupChain::paper(last)?;
    let mb = BigInt::from(m);
    let base = IntegralDivisor::paper(first, &mb)?;
    let mut levels = Vec::new();
    let mut coefficients = Vec::new();
    let mut pulled_back = Vec::new();
    for l in first..=last {
        let d = QDivisor::<BigInt>::paper(l)?.ceil_multiple(&mb)?;
        let p = base.pullback(&chain.pullback_map(first, l)?)?;
        levels.push(l);
        coefficients.push(d.coeff(n)?.clone());
        pulled_back.push(p.coeff(n)?.clone());
    }
    let expected = divisorial_value(n, m);
    let e = BigInt::from(expected);
    let consistent = coefficients.iter().chain(&pulled_back).all(|c| *c == e);
    Ok(CoefficientCheck {
        n,
        m,
        expected,
        levels,
        coefficients,
        pulled_back,
        consistent,
    })
}

/// Seeded subadditive sequence with `a(0) = 0`, built as the min-plus
/// closure of random increments.
pub fn random_subadditive<R: rand::Rng>(rng: &mut R, bound: usize, max_step: i64) -> Vec<i64> {
    let mut a = vec![0i64; bound + 1];
    for i in 1..=bound {
        let candidate = a[i - 1] + rng.gen_range(0..=max_step);
        let split = (1..i).map(|j| a[j] + a[i - j]).min();
        a[i] = split.map_or(candidate, |s| s.min(candidate));
    }
    a
}

/// A user-supplied sequence of either value kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnySequence {
    Rank1(ValueSequence<i64>),
    Rank2(ValueSequence<LexPair>),
}

impl AnySequence {
    pub fn bound(&self) -> usize {
        match self {
            AnySequence::Rank1(s) => s.bound(),
            AnySequence::Rank2(s) => s.bound(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ceil_oracle(n: usize, m: u64) -> BigInt {
        let two = BigInt::from(2);
        let num = BigInt::from(m) * (two.pow(n as u32) - 1);
        BigRational::new(num, two.pow(n as u32 - 1))
            .ceil()
            .to_integer()
    }

    #[test]
    fn value_formula_matches_ceiling() {
        for n in 1..=40 {
            for m in (1..=300).chain([4095, 4096, 1 << 20]) {
                assert_eq!(
                    BigInt::from(divisorial_value(n, m)),
                    ceil_oracle(n, m),
                    "n={n} m={m}"
                );
            }
        }
        assert_eq!(divisorial_value(1, 5), 5);
        assert_eq!(divisorial_value(2, 3), 5);
        assert_eq!(divisorial_value(3, 4), 7);
    }

    #[test]
    fn paper_sequences() {
        let s = paper_value_sequence(1, 10).unwrap();
        assert_eq!(s.get(5), Some(&5));
        let s = paper_value_sequence(2, 10).unwrap();
        assert_eq!(s.get(3), Some(&5));
        assert_eq!(s.get(0), None);
        assert_eq!(s.get(11), None);
        assert_eq!(s.provenance(), Provenance::Formula);
        assert!(paper_value_sequence(0, 10).is_err());
    }

    #[test]
    fn composite_sequences() {
        let s = composite_value_sequence(2, 8).unwrap();
        assert_eq!(s.get(2), Some(&LexPair(3, 0)));
        assert_eq!(s.get(1), Some(&LexPair(2, 0)));
        let s = composite_value_sequence(3, 8).unwrap();
        assert_eq!(s.get(8), Some(&LexPair(14, 0)));
    }

    #[test]
    fn gamma_of_builtin_sequence() {
        let report = gamma(&paper_value_sequence(2, 64).unwrap());
        assert_eq!(report.gamma, Ratio::new(3, 2));
        assert_eq!(report.status, Attainment::Attained { witness: 2 });
        assert_eq!(
            report.trace,
            vec![(1, Ratio::new(2, 1)), (2, Ratio::new(3, 2))]
        );
    }

    #[test]
    fn gamma_not_attained() {
        let values: Vec<i64> = (1..=100).map(|m| m + 1).collect();
        let seq = ValueSequence::new(values, Provenance::Table).unwrap();
        let report = gamma(&seq);
        assert_eq!(report.gamma, Ratio::new(101, 100));
        assert_eq!(report.status, Attainment::NotAttainedUpTo { bound: 100 });
        assert_eq!(report.trace.len(), 100);
        assert!(report.trace.windows(2).all(|w| w[1].1 < w[0].1));
        assert_eq!(
            center_criterion(&seq),
            CenterStatus::UnknownUpTo { bound: 100 }
        );
    }

    #[test]
    fn gamma_identity() {
        let seq = ValueSequence::new((1..=20).collect(), Provenance::Table).unwrap();
        let report = gamma(&seq);
        assert_eq!(report.gamma, Ratio::from_integer(1));
        assert_eq!(report.status, Attainment::Attained { witness: 1 });
        let seq = ValueSequence::new((1..=20).map(|m| 3 * m).collect(), Provenance::Table).unwrap();
        assert_eq!(
            center_criterion(&seq),
            CenterStatus::HasCenter { witness: 1 }
        );
    }

    #[test]
    fn composite_center() {
        let seq = composite_value_sequence(3, 64).unwrap();
        assert_eq!(
            center_criterion(&seq),
            CenterStatus::HasCenter { witness: 4 }
        );
        let report = gamma(&seq);
        assert_eq!(
            report.gamma,
            LexRatio(Ratio::new(7, 4), Ratio::from_integer(0))
        );
    }

    #[test]
    fn single_term_sequence_is_unknown() {
        let seq = ValueSequence::new(vec![4i64], Provenance::Table).unwrap();
        assert_eq!(
            center_criterion(&seq),
            CenterStatus::UnknownUpTo { bound: 1 }
        );
    }

    #[test]
    fn rejects_bad_sequences() {
        match ValueSequence::new(vec![3i64, 2, 2, 4, 5], Provenance::Table) {
            Err(Error::NotSubadditive { m: 2, n: 3, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            ValueSequence::new(vec![1i64, -1], Provenance::Table),
            Err(Error::NegativeValue { m: 2, .. })
        ));
        assert!(matches!(
            ValueSequence::<i64>::new(vec![], Provenance::Table),
            Err(Error::EmptySequence)
        ));
        assert!(ValueSequence::new(vec![LexPair(1, 5), LexPair(2, 9)], Provenance::Table).is_ok());
        assert!(matches!(
            ValueSequence::new(
                vec![LexPair(1, 5), LexPair(2, 9), LexPair(3, 15)],
                Provenance::Table
            ),
            Err(Error::NotSubadditive { m: 1, n: 2, .. })
        ));
    }

    #[test]
    fn cross_check_examples() {
        let c = coefficient_cross_check(2, 3).unwrap();
        assert!(c.consistent);
        assert_eq!(c.expected, 5);
        assert_eq!(c.levels.first(), Some(&3));
        let c = coefficient_cross_check(1, 1).unwrap();
        assert!(c.consistent);
        assert_eq!(c.expected, 1);
        let c = coefficient_cross_check(4, 16).unwrap();
        assert!(c.consistent);
        assert_eq!(c.expected, 30);
        assert!(c.levels.iter().all(|&l| 16 < 1u64 << (l - 1) && l >= 4));
    }

    #[test]
    fn random_subadditive_is_subadditive() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let a = random_subadditive(&mut rng, 64, 5);
            assert_eq!(a[0], 0);
            assert!(find_subadditivity_violation(&a[1..]).is_none());
        }
    }
}
