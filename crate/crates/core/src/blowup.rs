//! Chains of point blowups over a regular surface germ.
//!
//! A chain is purely combinatorial: blowup `i` (1-based) either happens at a
//! point lying on exactly one earlier exceptional curve `E_c`, or at a point
//! lying on none of them. From that data alone we get the intersection
//! matrix `(E_i . E_j)` on every level and the pullback maps between levels.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::ExactInt;

/// Where the centre of a blowup sits relative to the earlier curves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parent {
    Free,
    /// 1-based index of the unique earlier curve containing the centre.
    On(usize),
}

impl Parent {
    /// `0` encodes `Free`, any other value a curve index.
    pub fn from_code(code: usize) -> Self {
        if code == 0 {
            Parent::Free
        } else {
            Parent::On(code)
        }
    }

    pub fn code(self) -> usize {
        match self {
            Parent::Free => 0,
            Parent::On(c) => c,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlowupChain {
    parents: Vec<Parent>,
}

impl BlowupChain {
    pub fn new(parents: Vec<Parent>) -> Result<Self> {
        if parents.is_empty() {
            return Err(Error::EmptyChain);
        }
        for (i, p) in parents.iter().enumerate() {
            if let Parent::On(c) = *p {
                let index = i + 1;
                if c == 0 || c >= index {
                    return Err(Error::InvalidParent { index, parent: c });
                }
            }
        }
        Ok(BlowupChain { parents })
    }

    pub fn from_codes(codes: &[usize]) -> Result<Self> {
        Self::new(codes.iter().map(|&c| Parent::from_code(c)).collect())
    }

    /// The chain in which each centre lies on the newest curve only:
    /// parents `[Free, 1, 2, ..., length - 1]`.
    pub fn paper(length: usize) -> Result<Self> {
        if length == 0 {
            return Err(Error::EmptyChain);
        }
        let parents = (0..length)
            .map(|i| if i == 0 { Parent::Free } else { Parent::On(i) })
            .collect();
        Self::new(parents)
    }

    pub fn len(&self) -> usize {
        self.parents.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn parents(&self) -> &[Parent] {
        &self.parents
    }

    /// Parent of curve `index` (1-based).
    pub fn parent(&self, index: usize) -> Result<Parent> {
        self.check_level(index)?;
        Ok(self.parents[index - 1])
    }

    /// The chain made of the first `level` blowups.
    pub fn truncate(&self, level: usize) -> Result<Self> {
        self.check_level(level)?;
        Ok(BlowupChain {
            parents: self.parents[..level].to_vec(),
        })
    }

    fn check_level(&self, level: usize) -> Result<()> {
        if level == 0 || level > self.len() {
            Err(Error::LevelOutOfRange {
                level,
                max: self.len(),
            })
        } else {
            Ok(())
        }
    }

    /// Intersection form on the model obtained after the first `level`
    /// blowups.
    ///
    /// Each blowup appends a curve of self-intersection `-1` meeting its
    /// parent once, and lowers the parent's self-intersection by one. All
    /// other pairings are carried over by the strict transforms.
    pub fn intersection_form<T: ExactInt>(&self, level: usize) -> Result<IntersectionForm<T>> {
        self.check_level(level)?;
        let mut rows: Vec<Vec<T>> = Vec::with_capacity(level);
        for (i, parent) in self.parents[..level].iter().enumerate() {
            for row in rows.iter_mut() {
                row.push(T::zero());
            }
            let mut row = vec![T::zero(); i + 1];
            row[i] = -T::one();
            rows.push(row);
            if let Parent::On(c) = *parent {
                let c = c - 1;
                rows[c][i] = T::one();
                rows[i][c] = T::one();
                rows[c][c] = rows[c][c].clone() - T::one();
            }
        }
        Ok(IntersectionForm { rows })
    }

    pub fn full_form<T: ExactInt>(&self) -> IntersectionForm<T> {
        self.intersection_form(self.len())
            .expect("full level is always in range")
    }

    pub fn pullback_map(&self, from: usize, to: usize) -> Result<PullbackMap> {
        self.check_level(from)?;
        self.check_level(to)?;
        if to < from {
            return Err(Error::PullbackDirection { from, to });
        }
        Ok(PullbackMap {
            parents: self.parents[..to].to_vec(),
            from,
            to,
        })
    }
}

/// Symmetric integer matrix `(E_i . E_j)` on one level of a chain.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntersectionForm<T> {
    rows: Vec<Vec<T>>,
}

impl<T: ExactInt> IntersectionForm<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == rows.len()));
        IntersectionForm { rows }
    }

    pub fn level(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    /// `(E_i . E_j)`, 1-based.
    pub fn get(&self, i: usize, j: usize) -> Result<&T> {
        let level = self.level();
        for index in [i, j] {
            if index == 0 || index > level {
                return Err(Error::CurveOutOfRange { index, level });
            }
        }
        Ok(&self.rows[i - 1][j - 1])
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.level() {
            return Err(Error::LevelMismatch {
                expected: self.level(),
                found: len,
            });
        }
        Ok(())
    }

    /// `(D . E_n)` for a divisor given by its coefficient vector.
    pub fn pair_with_curve(&self, coeffs: &[T], n: usize) -> Result<T> {
        self.check_len(coeffs.len())?;
        if n == 0 || n > self.level() {
            return Err(Error::CurveOutOfRange {
                index: n,
                level: self.level(),
            });
        }
        Ok(coeffs
            .iter()
            .zip(&self.rows[n - 1])
            .fold(T::zero(), |acc, (c, e)| acc + c.clone() * e.clone()))
    }

    /// `(D . D')` for two coefficient vectors.
    pub fn pair(&self, lhs: &[T], rhs: &[T]) -> Result<T> {
        self.check_len(lhs.len())?;
        self.check_len(rhs.len())?;
        let mut total = T::zero();
        for (a, row) in lhs.iter().zip(&self.rows) {
            if a.is_zero() {
                continue;
            }
            let inner = row
                .iter()
                .zip(rhs)
                .fold(T::zero(), |acc, (e, b)| acc + e.clone() * b.clone());
            total = total + a.clone() * inner;
        }
        Ok(total)
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.level();
        (0..n).all(|i| (0..i).all(|j| self.rows[i][j] == self.rows[j][i]))
    }

    /// Determinants of the leading `k x k` blocks, `k = 1..=level`.
    pub fn leading_minors(&self) -> Vec<T> {
        (1..=self.level())
            .map(|k| {
                let block: Vec<Vec<T>> = self.rows[..k].iter().map(|r| r[..k].to_vec()).collect();
                determinant(block)
            })
            .collect()
    }

    /// Sylvester's criterion for `-Q`: the `k`-th leading minor has sign
    /// `(-1)^k`.
    pub fn is_negative_definite(&self) -> bool {
        self.leading_minors().iter().enumerate().all(|(i, minor)| {
            if i % 2 == 0 {
                minor.is_negative()
            } else {
                minor.is_positive()
            }
        })
    }

    pub fn determinant(&self) -> T {
        determinant(self.rows.clone())
    }
}

impl<T: fmt::Display> fmt::Display for IntersectionForm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", cells.join("\t"))?;
        }
        Ok(())
    }
}

/// Fraction-free (Bareiss) elimination with row pivoting.
pub fn determinant<T: ExactInt>(mut a: Vec<Vec<T>>) -> T {
    let n = a.len();
    if n == 0 {
        return T::one();
    }
    let mut sign_flip = false;
    let mut prev = T::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign_flip = !sign_flip;
                }
                None => return T::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].clone() * a[k][k].clone() - a[i][k].clone() * a[k][j].clone();
                a[i][j] = v / prev.clone();
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign_flip {
        -det
    } else {
        det
    }
}

/// Total transform of divisors from level `from` to level `to >= from`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PullbackMap {
    parents: Vec<Parent>,
    from: usize,
    to: usize,
}

impl PullbackMap {
    pub fn source(&self) -> usize {
        self.from
    }

    pub fn target(&self) -> usize {
        self.to
    }

    /// One blowup at a point of `E_c` only: old coefficients stay, the new
    /// curve picks up the coefficient of `E_c` (zero for a free point).
    pub fn apply<C: Clone + Zero>(&self, coeffs: &[C]) -> Result<Vec<C>> {
        if coeffs.len() != self.from {
            return Err(Error::LevelMismatch {
                expected: self.from,
                found: coeffs.len(),
            });
        }
        let mut out = coeffs.to_vec();
        out.reserve(self.to - self.from);
        for parent in &self.parents[self.from..self.to] {
            let c = match *parent {
                Parent::Free => C::zero(),
                Parent::On(c) => out[c - 1].clone(),
            };
            out.push(c);
        }
        Ok(out)
    }

    /// `self: a -> b` followed by `next: b -> c`.
    pub fn then(&self, next: &PullbackMap) -> Result<PullbackMap> {
        if self.to != next.from || next.parents[..self.to] != self.parents[..] {
            return Err(Error::PullbackComposition {
                first_to: self.to,
                second_from: next.from,
            });
        }
        Ok(PullbackMap {
            parents: next.parents.clone(),
            from: self.from,
            to: next.to,
        })
    }
}

/// Used by tests and the CLI to get a deterministic spread of chains.
pub fn random_chain<R: rand::Rng>(rng: &mut R, length: usize) -> BlowupChain {
    let parents = (1..=length)
        .map(|i| {
            if i == 1 || rng.gen_ratio(1, 8) {
                Parent::Free
            } else {
                Parent::On(rng.gen_range(1..i))
            }
        })
        .collect();
    BlowupChain::new(parents).expect("generated parents precede their children")
}

impl<T: ExactInt> IntersectionForm<T> {
    /// Whether every off-diagonal entry is 0 or 1 and the diagonal is
    /// negative.
    pub fn has_exceptional_shape(&self) -> bool {
        let n = self.level();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let v = &self.rows[i][j];
                if i == j {
                    v.is_negative()
                } else {
                    v.is_zero() || v.is_one()
                }
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn form(chain: &BlowupChain, level: usize) -> Vec<Vec<i64>> {
        chain
            .intersection_form::<i64>(level)
            .unwrap()
            .rows()
            .to_vec()
    }

    #[test]
    fn single_blowup() {
        let chain = BlowupChain::from_codes(&[0]).unwrap();
        assert_eq!(form(&chain, 1), vec![vec![-1]]);
    }

    #[test]
    fn small_paper_chains() {
        let two = BlowupChain::from_codes(&[0, 1]).unwrap();
        assert_eq!(form(&two, 2), vec![vec![-2, 1], vec![1, -1]]);
        let three = BlowupChain::from_codes(&[0, 1, 2]).unwrap();
        assert_eq!(
            form(&three, 3),
            vec![vec![-2, 1, 0], vec![1, -2, 1], vec![0, 1, -1]]
        );
        assert_eq!(BlowupChain::paper(3).unwrap(), three);
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn paper_chain_levels() {
        let chain = BlowupChain::paper(5).unwrap();
        assert_eq!(form(&chain, 2), vec![vec![-2, 1], vec![1, -1]]);
        assert_eq!(form(&chain, 1), vec![vec![-1]]);
        let full = form(&chain, 5);
        for i in 0..5usize {
            for j in 0..5 {
                let expected = if i == j {
                    if i == 4 {
                        -1
                    } else {
                        -2
                    }
                } else if i.abs_diff(j) == 1 {
                    1
                } else {
                    0
                };
                assert_eq!(full[i][j], expected, "entry ({}, {})", i + 1, j + 1);
            }
        }
    }

    #[test]
    fn rejects_bad_parents() {
        assert!(matches!(
            BlowupChain::from_codes(&[]),
            Err(Error::EmptyChain)
        ));
        assert!(matches!(
            BlowupChain::from_codes(&[1]),
            Err(Error::InvalidParent {
                index: 1,
                parent: 1
            })
        ));
        assert!(matches!(
            BlowupChain::from_codes(&[0, 1, 3]),
            Err(Error::InvalidParent {
                index: 3,
                parent: 3
            })
        ));
        assert!(BlowupChain::paper(0).is_err());
    }

    #[test]
    fn level_out_of_range() {
        let chain = BlowupChain::paper(3).unwrap();
        assert!(chain.intersection_form::<i64>(0).is_err());
        assert!(chain.intersection_form::<i64>(4).is_err());
        assert!(chain.pullback_map(3, 2).is_err());
    }

    #[test]
    fn branching_chain() {
        // E_3 blown up on E_1 instead of E_2.
        let chain = BlowupChain::from_codes(&[0, 1, 1]).unwrap();
        assert_eq!(
            form(&chain, 3),
            vec![vec![-3, 1, 1], vec![1, -1, 0], vec![1, 0, -1]]
        );
    }

    #[test]
    fn bareiss_matches_known_determinants() {
        let m = vec![vec![2i64, 0, 1], vec![1, 3, 2], vec![1, 1, 2]];
        assert_eq!(determinant(m), 6);
        let singular = vec![vec![1i64, 2], vec![2, 4]];
        assert_eq!(determinant(singular), 0);
        let needs_pivot = vec![vec![0i64, 1], vec![1, 0]];
        assert_eq!(determinant(needs_pivot), -1);
    }

    #[test]
    fn pullback_single_steps() {
        let chain = BlowupChain::paper(4).unwrap();
        let map = chain.pullback_map(3, 4).unwrap();
        assert_eq!(map.apply(&[3i64, 5, 6]).unwrap(), vec![3, 5, 6, 6]);
        let map = chain.pullback_map(1, 2).unwrap();
        assert_eq!(map.apply(&[1i64]).unwrap(), vec![1, 1]);
        assert_eq!(
            chain.pullback_map(2, 4).unwrap().apply(&[0i64, 0]).unwrap(),
            vec![0, 0, 0, 0]
        );
        assert!(chain.pullback_map(2, 4).unwrap().apply(&[1i64]).is_err());
    }

    #[test]
    fn pullback_composition() {
        let chain = BlowupChain::from_codes(&[0, 1, 1, 3, 0, 2]).unwrap();
        let ab = chain.pullback_map(2, 4).unwrap();
        let bc = chain.pullback_map(4, 6).unwrap();
        let ac = ab.then(&bc).unwrap();
        assert_eq!(ac, chain.pullback_map(2, 6).unwrap());
        assert!(bc.then(&ab).is_err());
    }

    #[test]
    fn bigint_form_matches_machine_form() {
        let chain = BlowupChain::paper(7).unwrap();
        let big = chain.full_form::<BigInt>();
        let small = chain.full_form::<i64>();
        for (rb, rs) in big.rows().iter().zip(small.rows()) {
            for (b, s) in rb.iter().zip(rs) {
                assert_eq!(*b, BigInt::from(*s));
            }
        }
    }
}
