//! JSON documents for chains, divisors, value sequences and polynomials.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_rational::{BigRational, Ratio};
use serde::{Deserialize, Serialize};

use crate::blowup::BlowupChain;
use crate::divisor::QDivisor;
use crate::error::{Error, Result};
use crate::filtration::{AnySequence, LexPair, Provenance, ValueSequence};
use crate::gauss::{GaussPolynomial, Laurent};
use crate::scalar::ExactInt;

/// `{"length": 3, "parents": [0, 1, 2]}` with `0` for a free point, or
/// `{"preset": "paper_chain", "length": 5}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChainDocument {
    Preset { preset: String, length: usize },
    Explicit { length: usize, parents: Vec<usize> },
}

impl ChainDocument {
    pub fn into_chain(self) -> Result<BlowupChain> {
        match self {
            ChainDocument::Preset { preset, length } => match preset.as_str() {
                "paper_chain" | "paper" => BlowupChain::paper(length),
                _ => Err(Error::UnknownPreset(preset)),
            },
            ChainDocument::Explicit { length, parents } => {
                if length == 0 {
                    return Err(Error::EmptyChain);
                }
                if parents.len() != length {
                    return Err(Error::LevelMismatch {
                        expected: length,
                        found: parents.len(),
                    });
                }
                BlowupChain::from_codes(&parents)
            }
        }
    }

    pub fn from_chain(chain: &BlowupChain) -> Self {
        ChainDocument::Explicit {
            length: chain.len(),
            parents: chain.parents().iter().map(|p| p.code()).collect(),
        }
    }
}

pub fn parse_chain(json: &str) -> Result<BlowupChain> {
    serde_json::from_str::<ChainDocument>(json)?.into_chain()
}

/// `{"level": 3, "coeffs": ["1", "3/2", "7/4"]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorDocument {
    pub level: usize,
    pub coeffs: Vec<String>,
}

pub fn parse_rational<T: ExactInt + FromStr>(s: &str) -> Result<Ratio<T>> {
    Ratio::<T>::from_str(s.trim()).map_err(|_| Error::ParseRational(s.to_string()))
}

impl DivisorDocument {
    pub fn from_divisor<T: ExactInt>(d: &QDivisor<T>) -> Self {
        DivisorDocument {
            level: d.level(),
            coeffs: d.coeffs().iter().map(|c| c.to_string()).collect(),
        }
    }

    pub fn to_divisor<T: ExactInt + FromStr>(&self) -> Result<QDivisor<T>> {
        if self.coeffs.len() != self.level {
            return Err(Error::LevelMismatch {
                expected: self.level,
                found: self.coeffs.len(),
            });
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        QDivisor::new(coeffs)
    }
}

/// `{"M": 4, "values": [2, 3, 5, 6]}`; values may also be `[a, b]` pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceDocument {
    #[serde(rename = "M")]
    pub bound: usize,
    pub values: Vec<serde_json::Value>,
}

impl SequenceDocument {
    pub fn into_sequence(self) -> Result<AnySequence> {
        if self.values.len() != self.bound {
            return Err(Error::BoundMismatch {
                declared: self.bound,
                actual: self.values.len(),
            });
        }
        if self.values.is_empty() {
            return Err(Error::EmptySequence);
        }
        if self.values.iter().all(|v| v.is_i64()) {
            let values = self.values.iter().filter_map(|v| v.as_i64()).collect();
            return Ok(AnySequence::Rank1(ValueSequence::new(
                values,
                Provenance::Table,
            )?));
        }
        let pairs = self
            .values
            .iter()
            .map(|v| serde_json::from_value::<(i64, i64)>(v.clone()).map(|(a, b)| LexPair(a, b)))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::MixedValueKinds)?;
        Ok(AnySequence::Rank2(ValueSequence::new(
            pairs,
            Provenance::Table,
        )?))
    }
}

pub fn parse_sequence(json: &str) -> Result<AnySequence> {
    serde_json::from_str::<SequenceDocument>(json)?.into_sequence()
}

/// One polynomial: per `z`-degree, a map from `t`-exponent to a rational.
pub type PolynomialDocument = Vec<BTreeMap<String, String>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GaussDocument {
    Many {
        polynomials: Vec<PolynomialDocument>,
    },
    One(PolynomialDocument),
}

impl GaussDocument {
    pub fn into_polynomials(self) -> Result<Vec<GaussPolynomial<BigRational>>> {
        let docs = match self {
            GaussDocument::Many { polynomials } => polynomials,
            GaussDocument::One(p) => vec![p],
        };
        docs.iter().map(polynomial_from_document).collect()
    }
}

pub fn polynomial_from_document(doc: &PolynomialDocument) -> Result<GaussPolynomial<BigRational>> {
    let coeffs = doc
        .iter()
        .map(|terms| {
            let parsed = terms
                .iter()
                .map(|(k, c)| {
                    let exp = k
                        .trim()
                        .parse::<i64>()
                        .map_err(|_| Error::ParseExponent(k.clone()))?;
                    Ok((exp, parse_rational(c)?))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Laurent::from_terms(parsed))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GaussPolynomial::new(coeffs))
}

pub fn polynomial_to_document(f: &GaussPolynomial<BigRational>) -> PolynomialDocument {
    f.coeffs()
        .iter()
        .map(|c| {
            c.terms()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect()
        })
        .collect()
}

pub fn parse_polynomials(json: &str) -> Result<Vec<GaussPolynomial<BigRational>>> {
    serde_json::from_str::<GaussDocument>(json)?.into_polynomials()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::Order;
    use num_bigint::BigInt;

    #[test]
    fn chain_documents() {
        let c = parse_chain(r#"{"length": 2, "parents": [0, 1]}"#).unwrap();
        assert_eq!(c, BlowupChain::paper(2).unwrap());
        let c = parse_chain(r#"{"preset": "paper_chain", "length": 5}"#).unwrap();
        assert_eq!(c, BlowupChain::paper(5).unwrap());
        assert!(parse_chain(r#"{"length": 0, "parents": []}"#).is_err());
        assert!(parse_chain(r#"{"length": 2, "parents": [0]}"#).is_err());
        assert!(parse_chain(r#"{"preset": "nope", "length": 2}"#).is_err());
        assert!(matches!(parse_chain("{"), Err(Error::Json(_))));
        let doc = ChainDocument::from_chain(&BlowupChain::from_codes(&[0, 1, 1]).unwrap());
        assert_eq!(doc.into_chain().unwrap().parents().len(), 3);
    }

    #[test]
    fn divisor_documents() {
        let f = QDivisor::<BigInt>::paper(3).unwrap();
        let doc = DivisorDocument::from_divisor(&f);
        assert_eq!(doc.coeffs, vec!["1", "3/2", "7/4"]);
        let json = serde_json::to_string(&doc).unwrap();
        assert_eq!(json, r#"{"level":3,"coeffs":["1","3/2","7/4"]}"#);
        let back: DivisorDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_divisor::<BigInt>().unwrap(), f);
        let bad = DivisorDocument {
            level: 1,
            coeffs: vec!["1/0".into()],
        };
        assert!(bad.to_divisor::<i64>().is_err());
        let short = DivisorDocument {
            level: 2,
            coeffs: vec!["1".into()],
        };
        assert!(short.to_divisor::<i64>().is_err());
    }

    #[test]
    fn sequence_documents() {
        match parse_sequence(r#"{"M": 3, "values": [1, 2, 3]}"#).unwrap() {
            AnySequence::Rank1(s) => assert_eq!(s.values(), &[1, 2, 3]),
            other => panic!("{other:?}"),
        }
        match parse_sequence(r#"{"M": 2, "values": [[2, 0], [3, 0]]}"#).unwrap() {
            AnySequence::Rank2(s) => assert_eq!(s.values(), &[LexPair(2, 0), LexPair(3, 0)]),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_sequence(r#"{"M": 2, "values": [1, [3, 0]]}"#),
            Err(Error::MixedValueKinds)
        ));
        assert!(matches!(
            parse_sequence(r#"{"M": 3, "values": [1, 2]}"#),
            Err(Error::BoundMismatch { .. })
        ));
        assert!(matches!(
            parse_sequence(r#"{"M": 5, "values": [3, 2, 2, 4, 5]}"#),
            Err(Error::NotSubadditive { m: 2, n: 3, .. })
        ));
    }

    #[test]
    fn polynomial_documents() {
        let fs = parse_polynomials(r#"[{"1": "1"}, {"0": "1"}]"#).unwrap();
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0].gauss_value(), Order::Finite(1));
        let fs = parse_polynomials(
            r#"{"polynomials": [[{"2": "1"}, {"1": "1"}, {}, {"0": "1"}], [{"0": "1/2", "-1": "3"}]]}"#,
        )
        .unwrap();
        assert_eq!(fs[0].gauss_value(), Order::Finite(2));
        assert_eq!(fs[1].gauss_value(), Order::Finite(-1));
        assert_eq!(
            polynomial_from_document(&polynomial_to_document(&fs[1])).unwrap(),
            fs[1]
        );
        assert!(parse_polynomials(r#"[{"x": "1"}]"#).is_err());
        assert!(parse_polynomials(r#"[{"0": "a"}]"#).is_err());
        let zero = parse_polynomials(r#"[{"0": "0"}]"#).unwrap();
        assert!(zero[0].is_zero());
    }
}
