//! Gauss extension of the `t`-adic valuation to polynomials in `z`.
//!
//! The base field is Laurent polynomials in `t` over an exact coefficient
//! ring, valued by the order of the lowest term. A polynomial
//! `f = a_0 + a_1 z + ... + a_d z^d` gets `w(f) = min { v(a_i) + i }`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg};

use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// A valuation value, with `+inf` for zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(i64),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<i64> {
        match self {
            Order::Finite(v) => Some(v),
            Order::Infinite => None,
        }
    }
}

impl Add for Order {
    type Output = Order;

    fn add(self, rhs: Order) -> Order {
        match (self, rhs) {
            (Order::Finite(a), Order::Finite(b)) => Order::Finite(a + b),
            _ => Order::Infinite,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(v) => write!(f, "{v}"),
            Order::Infinite => write!(f, "inf"),
        }
    }
}

/// Finite Laurent polynomial `sum_k c_k t^k`; only nonzero terms are stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Laurent<T> {
    terms: BTreeMap<i64, T>,
}

impl<T: Clone + Zero + One + PartialEq> Laurent<T> {
    pub fn from_terms<I: IntoIterator<Item = (i64, T)>>(terms: I) -> Self {
        let mut out = Laurent {
            terms: BTreeMap::new(),
        };
        for (k, c) in terms {
            out.add_term(k, c);
        }
        out
    }

    pub fn monomial(coeff: T, exponent: i64) -> Self {
        Self::from_terms([(exponent, coeff)])
    }

    pub fn t_power(exponent: i64) -> Self {
        Self::monomial(T::one(), exponent)
    }

    pub fn constant(coeff: T) -> Self {
        Self::monomial(coeff, 0)
    }

    fn add_term(&mut self, exponent: i64, coeff: T) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exponent).or_insert_with(T::zero);
        *entry = entry.clone() + coeff;
        if entry.is_zero() {
            self.terms.remove(&exponent);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &T)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    /// `t`-adic order of the lowest surviving term.
    pub fn valuation(&self) -> Order {
        self.terms
            .keys()
            .next()
            .map_or(Order::Infinite, |&k| Order::Finite(k))
    }
}

impl<T: Clone + Zero + One + PartialEq> Zero for Laurent<T> {
    fn zero() -> Self {
        Laurent {
            terms: BTreeMap::new(),
        }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<T: Clone + Zero + One + PartialEq> One for Laurent<T> {
    fn one() -> Self {
        Self::constant(T::one())
    }
}

impl<T: Clone + Zero + One + PartialEq> Add for Laurent<T> {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        for (k, c) in rhs.terms {
            self.add_term(k, c);
        }
        self
    }
}

impl<T: Clone + Zero + One + PartialEq> Mul for Laurent<T> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zero();
        for (i, a) in &self.terms {
            for (j, b) in &rhs.terms {
                out.add_term(i + j, a.clone() * b.clone());
            }
        }
        out
    }
}

impl<T: Clone + Zero + One + PartialEq + Neg<Output = T>> Neg for Laurent<T> {
    type Output = Self;

    fn neg(self) -> Self {
        Laurent {
            terms: self.terms.into_iter().map(|(k, c)| (k, -c)).collect(),
        }
    }
}

impl<T: fmt::Display> fmt::Display for Laurent<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| format!("({c})t^{k}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `a_0 + a_1 z + ... + a_d z^d` with Laurent coefficients; trailing zero
/// coefficients are trimmed so the degree is that of the last stored entry.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussPolynomial<T> {
    coeffs: Vec<Laurent<T>>,
}

impl<T: Clone + Zero + One + PartialEq> GaussPolynomial<T> {
    pub fn new(mut coeffs: Vec<Laurent<T>>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        GaussPolynomial { coeffs }
    }

    /// `z^d`.
    pub fn z_power(d: usize) -> Self {
        let mut coeffs = vec![Laurent::zero(); d];
        coeffs.push(Laurent::one());
        Self::new(coeffs)
    }

    pub fn constant(c: Laurent<T>) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[Laurent<T>] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// `w(f) = min { v(a_i) + i : a_i != 0 }`, infinite for `f = 0`.
    pub fn gauss_value(&self) -> Order {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| a.valuation() + Order::Finite(i as i64))
            .min()
            .unwrap_or(Order::Infinite)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(Vec::new());
        }
        let mut out = vec![Laurent::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                let prod = a.clone() * b.clone();
                out[i + j] = std::mem::take(&mut out[i + j]) + prod;
            }
        }
        Self::new(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| {
                let a = self.coeffs.get(i).cloned().unwrap_or_else(Laurent::zero);
                let b = other.coeffs.get(i).cloned().unwrap_or_else(Laurent::zero);
                a + b
            })
            .collect();
        Self::new(coeffs)
    }
}

impl<T: Clone + Zero + One + PartialEq> Default for Laurent<T> {
    fn default() -> Self {
        Self::zero()
    }
}

/// Multiplies out `f g` and checks `w(fg) = w(f) + w(g)`.
pub fn gauss_multiplicativity_check<T: Clone + Zero + One + PartialEq>(
    f: &GaussPolynomial<T>,
    g: &GaussPolynomial<T>,
) -> Result<bool> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(f.mul(g).gauss_value() == f.gauss_value() + g.gauss_value())
}

/// Value of `I_w(n) = sum_{i+j=n} I_v(i) z^j`: `min_{i+j=n} a(i) + j`, where
/// `a(i)` is the value of `I_v(i)` and `a(0) = 0`.
pub fn extended_ideal_value(a: &[i64], n: usize) -> Result<i64> {
    if a.first() != Some(&0) {
        return Err(Error::NonzeroBase);
    }
    if n >= a.len() {
        return Err(Error::BeyondBound {
            index: n,
            bound: a.len() - 1,
        });
    }
    Ok((0..=n)
        .map(|i| a[i] + (n - i) as i64)
        .min()
        .expect("range contains i = 0"))
}

/// For `v` the order on the monomial ring generated by `t^g`, `g` in
/// `generators`: the dimension of `I_v(n)/I_v(n+1)` for `n = 0..=bound`,
/// which is 1 when `n` lies in the numerical semigroup and 0 otherwise.
pub fn associated_graded_dimensions(generators: &[u64], bound: usize) -> Result<Vec<u64>> {
    if generators.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    if generators.contains(&0) {
        return Err(Error::NonPositiveGenerator);
    }
    let mut member = vec![false; bound + 1];
    member[0] = true;
    for n in 1..=bound {
        member[n] = generators
            .iter()
            .any(|&g| (g as usize) <= n && member[n - g as usize]);
    }
    Ok(member.into_iter().map(u64::from).collect())
}

/// Random polynomial with `t`-exponents in `-1..=max_t` and up to
/// `max_z + 1` coefficients, each a small rational.
pub fn random_polynomial<R: rand::Rng>(
    rng: &mut R,
    max_t: i64,
    max_z: usize,
) -> GaussPolynomial<num_rational::BigRational> {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    loop {
        let deg = rng.gen_range(0..=max_z);
        let coeffs = (0..=deg)
            .map(|_| {
                let terms: Vec<(i64, BigRational)> = (0..rng.gen_range(0..=3))
                    .map(|_| {
                        let num = BigInt::from(rng.gen_range(-4i64..=4));
                        let den = BigInt::from(rng.gen_range(1i64..=3));
                        (rng.gen_range(-1..=max_t), BigRational::new(num, den))
                    })
                    .collect();
                Laurent::from_terms(terms)
            })
            .collect();
        let f = GaussPolynomial::new(coeffs);
        if !f.is_zero() {
            return f;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    type Q = BigRational;

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    fn lp(terms: &[(i64, i64)]) -> Laurent<Q> {
        Laurent::from_terms(terms.iter().map(|&(k, c)| (k, q(c))))
    }

    fn poly(coeffs: &[&[(i64, i64)]]) -> GaussPolynomial<Q> {
        GaussPolynomial::new(coeffs.iter().map(|c| lp(c)).collect())
    }

    #[test]
    fn gauss_value_examples() {
        for d in 0..6 {
            assert_eq!(
                GaussPolynomial::<Q>::z_power(d).gauss_value(),
                Order::Finite(d as i64)
            );
        }
        let f = poly(&[&[(1, 1)], &[(0, 1)]]);
        assert_eq!(f.gauss_value(), Order::Finite(1));
        let g = poly(&[&[(2, 1)], &[(1, 1)], &[], &[(0, 1)]]);
        assert_eq!(g.gauss_value(), Order::Finite(2));
        assert_eq!(poly(&[]).gauss_value(), Order::Infinite);
        assert_eq!(poly(&[&[], &[]]).degree(), None);
    }

    #[test]
    fn square_of_t_plus_z() {
        let f = poly(&[&[(1, 1)], &[(0, 1)]]);
        let sq = f.mul(&f);
        assert_eq!(sq, poly(&[&[(2, 1)], &[(1, 2)], &[(0, 1)]]));
        assert!(gauss_multiplicativity_check(&f, &f).unwrap());
        assert_eq!(sq.gauss_value(), Order::Finite(2));
    }

    #[test]
    fn cancellation_in_base_field() {
        let a = lp(&[(0, 1), (2, 3)]);
        let b = lp(&[(0, -1), (1, 5)]);
        assert_eq!((a + b).valuation(), Order::Finite(1));
        let c = lp(&[(-1, 2)]);
        assert_eq!((c.clone() + (-c)).valuation(), Order::Infinite);
    }

    #[test]
    fn multiplicativity_with_monomials() {
        let z = GaussPolynomial::<Q>::z_power(1);
        for g in [
            poly(&[&[(3, 2)]]),
            poly(&[&[], &[], &[(-1, 1)]]),
            poly(&[&[(0, 7)]]),
        ] {
            assert!(gauss_multiplicativity_check(&z, &g).unwrap());
        }
        assert!(matches!(
            gauss_multiplicativity_check(&z, &poly(&[])),
            Err(Error::ZeroPolynomial)
        ));
    }

    #[test]
    fn restricts_to_v_on_constants() {
        let c = lp(&[(3, 2), (5, 1)]);
        assert_eq!(
            GaussPolynomial::constant(c.clone()).gauss_value(),
            c.valuation()
        );
    }

    #[test]
    fn extended_ideal_examples() {
        let id: Vec<i64> = (0..=7).collect();
        assert_eq!(extended_ideal_value(&id, 7).unwrap(), 7);
        let a = [0, 2, 2, 3];
        assert_eq!(extended_ideal_value(&a, 1).unwrap(), 1);
        assert_eq!(extended_ideal_value(&a, 3).unwrap(), 3);
        assert!(matches!(
            extended_ideal_value(&a, 4),
            Err(Error::BeyondBound { .. })
        ));
        assert!(matches!(
            extended_ideal_value(&[1, 2], 1),
            Err(Error::NonzeroBase)
        ));
        assert!(extended_ideal_value(&[], 0).is_err());
    }

    #[test]
    fn graded_dimensions() {
        assert_eq!(associated_graded_dimensions(&[1], 6).unwrap(), vec![1; 7]);
        assert_eq!(
            associated_graded_dimensions(&[2, 3], 7).unwrap(),
            vec![1, 0, 1, 1, 1, 1, 1, 1]
        );
        assert_eq!(
            associated_graded_dimensions(&[3, 5], 8).unwrap(),
            vec![1, 0, 0, 1, 0, 1, 1, 0, 1]
        );
        assert!(matches!(
            associated_graded_dimensions(&[], 3),
            Err(Error::EmptyGenerators)
        ));
        assert!(associated_graded_dimensions(&[0, 2], 3).is_err());
    }

    fn laurent_strategy() -> impl Strategy<Value = Laurent<Q>> {
        prop::collection::vec((-2i64..4, -3i64..=3), 0..4).prop_map(|terms| lp(&terms))
    }

    proptest! {
        #[test]
        fn valuation_axioms(x in laurent_strategy(), y in laurent_strategy()) {
            let vx = x.valuation();
            let vy = y.valuation();
            prop_assert_eq!((x.clone() * y.clone()).valuation(), vx + vy);
            let vs = (x + y).valuation();
            prop_assert!(vs >= vx.min(vy));
            if vx != vy {
                prop_assert_eq!(vs, vx.min(vy));
            }
        }

        #[test]
        fn extended_value_at_most_n(steps in prop::collection::vec(0i64..4, 1..20)) {
            let mut a = vec![0i64];
            for s in steps {
                let next = a.last().unwrap() + s;
                a.push(next);
            }
            for n in 0..a.len() {
                let w = extended_ideal_value(&a, n).unwrap();
                prop_assert!(w <= n as i64);
                let dominates = (0..=n).all(|i| a[i] >= i as i64);
                prop_assert_eq!(w == n as i64, dominates);
            }
        }
    }
}
