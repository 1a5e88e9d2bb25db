//! Finite evidence that the fiber cone of the rounded family has at least
//! `N` distinct minimal primes.
//!
//! For `m = 2^N + 1` and any level `l > N` with `m < 2^(l-1)`, every curve
//! `E_1, ..., E_N` meets `-D(l)_m` positively, so none of them is
//! contracted by the morphism defined by `-D(l)_m`, and the valuations
//! `v_{E_1}, ..., v_{E_N}` have pairwise different value sequences.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::blowup::BlowupChain;
use crate::divisor::IntegralDivisor;
use crate::error::{Error, Result};
use crate::filtration::{divisorial_value, stable_level};

/// Largest `N` for which `2^N + 1` and the divisor coefficients fit in the
/// JSON integer fields.
pub const MAX_COMPONENTS: usize = 60;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistinguishingWitness {
    pub a: usize,
    pub b: usize,
    pub m: u64,
    pub va: i64,
    pub vb: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    #[serde(rename = "N")]
    pub n: usize,
    pub m: u64,
    pub l: usize,
    /// `(-D(l)_m . E_n)` for `n = 1..=N`.
    pub intersections: Vec<i64>,
    pub distinguishing_witnesses: Vec<DistinguishingWitness>,
}

fn check_size(n: usize) -> Result<()> {
    if !(2..=MAX_COMPONENTS).contains(&n) {
        return Err(Error::CertificateSize {
            n,
            max: MAX_COMPONENTS,
        });
    }
    Ok(())
}

fn mismatch(msg: String) -> Error {
    Error::CertificateMismatch(msg)
}

/// `(-D(l)_m . E_n)` for `n = 1..=count`, from the intersection matrix.
fn matrix_intersections(l: usize, m: u64, count: usize) -> Result<Vec<BigInt>> {
    let form = BlowupChain::paper(l)?.full_form::<BigInt>();
    let d = IntegralDivisor::paper(l, &BigInt::from(m))?;
    (1..=count)
        .map(|n| d.intersect_curve(n, &form).map(|v| -v))
        .collect()
}

fn to_i64(v: &BigInt) -> Result<i64> {
    v.to_i64()
        .ok_or_else(|| mismatch(format!("intersection number {v} overflows")))
}

/// Builds the certificate for `N` components.
///
/// The pair `(a, b)` is separated at `m = 2^(b-1)`, where `v_{E_b}` takes
/// the value `2^b - 1` and `v_{E_a}` the smaller value `2^b - 2^(b-a)`.
pub fn distinct_components_certificate(n: usize) -> Result<Certificate> {
    check_size(n)?;
    let m = (1u64 << n) + 1;
    let l = n + m.ilog2() as usize + 2;
    let intersections = matrix_intersections(l, m, n)?;
    if let Some((i, v)) = intersections
        .iter()
        .enumerate()
        .find(|(_, v)| !v.is_positive())
    {
        return Err(mismatch(format!(
            "(-D . E_{}) = {v} is not positive",
            i + 1
        )));
    }
    let intersections = intersections
        .iter()
        .map(to_i64)
        .collect::<Result<Vec<_>>>()?;

    let mut witnesses = Vec::with_capacity(n * (n - 1) / 2);
    for a in 1..=n {
        for b in a + 1..=n {
            let wm = 1u64 << (b - 1);
            let (va, vb) = (divisorial_value(a, wm), divisorial_value(b, wm));
            if va == vb {
                return Err(mismatch(format!("v_E{a} and v_E{b} agree at m = {wm}")));
            }
            witnesses.push(DistinguishingWitness {
                a,
                b,
                m: wm,
                va,
                vb,
            });
        }
    }
    Ok(Certificate {
        n,
        m,
        l,
        intersections,
        distinguishing_witnesses: witnesses,
    })
}

impl Certificate {
    /// Re-checks every claim from the intersection matrix and from the
    /// coefficients of `D(l)_m`, without using the closed forms.
    pub fn reverify(&self) -> Result<()> {
        check_size(self.n)?;
        if self.l <= self.n {
            return Err(mismatch(format!(
                "level {} does not exceed N = {}",
                self.l, self.n
            )));
        }
        if self.m <= 1u64 << self.n {
            return Err(mismatch(format!("m = {} is not above 2^N", self.m)));
        }
        if self.l - 1 < 64 && self.m >= 1u64 << (self.l - 1) {
            return Err(mismatch(format!("m = {} is not below 2^(l-1)", self.m)));
        }
        let recomputed = matrix_intersections(self.l, self.m, self.n)?;
        if recomputed.len() != self.intersections.len() {
            return Err(mismatch("wrong number of intersection numbers".into()));
        }
        for (i, (claimed, actual)) in self.intersections.iter().zip(&recomputed).enumerate() {
            if BigInt::from(*claimed) != *actual || !actual.is_positive() {
                return Err(mismatch(format!(
                    "(-D . E_{}) claimed {claimed}, matrix gives {actual}",
                    i + 1
                )));
            }
        }

        let expected_pairs = self.n * (self.n - 1) / 2;
        if self.distinguishing_witnesses.len() != expected_pairs {
            return Err(mismatch(format!(
                "{} witnesses for {expected_pairs} pairs",
                self.distinguishing_witnesses.len()
            )));
        }
        let mut covered = vec![false; expected_pairs];
        for w in &self.distinguishing_witnesses {
            if !(1 <= w.a && w.a < w.b && w.b <= self.n) {
                return Err(mismatch(format!("bad pair ({}, {})", w.a, w.b)));
            }
            let level = stable_level(w.b, w.m);
            let d = IntegralDivisor::paper(level, &BigInt::from(w.m))?;
            let (ca, cb) = (d.coeff(w.a)?, d.coeff(w.b)?);
            if *ca != BigInt::from(w.va) || *cb != BigInt::from(w.vb) || ca == cb {
                return Err(mismatch(format!(
                    "pair ({}, {}) at m = {}: divisor gives ({ca}, {cb}), claimed ({}, {})",
                    w.a, w.b, w.m, w.va, w.vb
                )));
            }
            // index of (a, b) in lexicographic order of pairs
            let idx = (w.a - 1) * (2 * self.n - w.a) / 2 + (w.b - w.a - 1);
            covered[idx] = true;
        }
        if covered.iter().any(|c| !c) {
            return Err(mismatch("some pair has no witness".into()));
        }
        Ok(())
    }

    pub fn summary(&self) -> String {
        format!(
            "certified {} distinct one-dimensional components at truncation (m = {}, l = {}, {} positivity and {} distinguishing witnesses)",
            self.n,
            self.m,
            self.l,
            self.intersections.len(),
            self.distinguishing_witnesses.len()
        )
    }
}
