//! The JSON bundle document: a 2×2 matrix of term lists with exact
//! Gaussian-rational coefficients.
//!
//! ```json
//! {"format_version":"1","j_hint":2,"trunc":2,
//!  "entries":[[[{"l":2,"i":0,"re":[1,1],"im":[0,1]}],[...]],[[...],[...]]]}
//! ```
//!
//! Numerators and denominators are JSON integers of any size.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Number;

use blowup_core::algebra::{BiLaurentPoly, ExactScalar, Matrix2, TransitionMatrix2};

pub const FORMAT_VERSION: &str = "1";

/// An integer of arbitrary size, written as a bare JSON number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Int(pub BigInt);

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let n = Number::from_str(&self.0.to_string()).map_err(serde::ser::Error::custom)?;
        n.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let n = Number::deserialize(d)?;
        BigInt::from_str(&n.to_string())
            .map(Int)
            .map_err(|_| D::Error::custom(format!("expected an integer, found {n}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub l: i64,
    pub i: u32,
    pub re: [Int; 2],
    pub im: [Int; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleDocument {
    pub format_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j_hint: Option<u32>,
    pub trunc: u32,
    pub entries: [[Vec<Term>; 2]; 2],
}

#[derive(Debug, thiserror::Error)]
pub enum DocumentError {
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format_version {0:?}")]
    Version(String),
    #[error("zero denominator in entry ({row},{col}) term z^{l} u^{i}")]
    ZeroDenominator { row: usize, col: usize, l: i64, i: u32 },
    #[error("duplicate term z^{l} u^{i} in entry ({row},{col})")]
    Duplicate { row: usize, col: usize, l: i64, i: u32 },
    #[error("term z^{l} u^{i} in entry ({row},{col}) exceeds trunc {trunc}")]
    AboveTrunc { row: usize, col: usize, l: i64, i: u32, trunc: u32 },
}

fn rational(pair: &[Int; 2]) -> Option<BigRational> {
    if pair[1].0 == BigInt::from(0) {
        return None;
    }
    Some(BigRational::new(pair[0].0.clone(), pair[1].0.clone()))
}

fn pair(r: &BigRational) -> [Int; 2] {
    [Int(r.numer().clone()), Int(r.denom().clone())]
}

impl Term {
    pub fn new(l: i64, i: u32, c: &ExactScalar) -> Self {
        Self { l, i, re: pair(c.re()), im: pair(c.im()) }
    }
}

impl BundleDocument {
    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        let doc: Self = serde_json::from_str(text)?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn validate(&self) -> Result<(), DocumentError> {
        if self.format_version != FORMAT_VERSION {
            return Err(DocumentError::Version(self.format_version.clone()));
        }
        for (row, cols) in self.entries.iter().enumerate() {
            for (col, terms) in cols.iter().enumerate() {
                let mut seen = std::collections::BTreeSet::new();
                for t in terms {
                    let (l, i) = (t.l, t.i);
                    if rational(&t.re).is_none() || rational(&t.im).is_none() {
                        return Err(DocumentError::ZeroDenominator { row, col, l, i });
                    }
                    if !seen.insert((i, l)) {
                        return Err(DocumentError::Duplicate { row, col, l, i });
                    }
                    if i > self.trunc {
                        return Err(DocumentError::AboveTrunc { row, col, l, i, trunc: self.trunc });
                    }
                }
            }
        }
        Ok(())
    }

    /// Compact serialization; terms are written in the order stored.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("documents always serialize")
    }

    pub fn matrix(&self) -> Matrix2 {
        let entry = |terms: &Vec<Term>| {
            BiLaurentPoly::from_terms(
                terms.iter().map(|t| {
                    let c = ExactScalar::new(rational(&t.re).unwrap(), rational(&t.im).unwrap());
                    (t.l, t.i, c)
                }),
                self.trunc,
            )
        };
        let [[a, b], [c, d]] = &self.entries;
        Matrix2::new([[entry(a), entry(b)], [entry(c), entry(d)]])
    }

    pub fn transition(&self) -> blowup_core::Result<TransitionMatrix2> {
        TransitionMatrix2::new(self.matrix())
    }

    /// Canonical document of a matrix: nonzero terms in ascending `(i, l)`
    /// order, reduced fractions with positive denominators.
    pub fn from_matrix(m: &Matrix2, j_hint: Option<u32>) -> Self {
        let entry = |p: &BiLaurentPoly| p.terms().map(|(l, i, c)| Term::new(l, i, c)).collect::<Vec<_>>();
        let e = m.entries();
        Self {
            format_version: FORMAT_VERSION.to_string(),
            j_hint,
            trunc: m.trunc(),
            entries: [[entry(&e[0][0]), entry(&e[0][1])], [entry(&e[1][0]), entry(&e[1][1])]],
        }
    }

    /// `true` when the document is already in canonical form.
    pub fn is_canonical(&self) -> bool {
        Self::from_matrix(&self.matrix(), self.j_hint) == *self
    }
}

impl fmt::Display for BundleDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_identity() {
        let text = r#"{"format_version":"1","j_hint":2,"trunc":2,"entries":[[[{"l":2,"i":0,"re":[1,1],"im":[0,1]}],[{"l":0,"i":1,"re":[-3,7],"im":[123456789012345678901234567890,1]}]],[[],[{"l":-2,"i":0,"re":[1,1],"im":[0,1]}]]]}"#;
        let doc = BundleDocument::parse(text).unwrap();
        assert_eq!(doc.to_json(), text);
        assert!(doc.is_canonical());
        assert_eq!(BundleDocument::from_matrix(&doc.matrix(), Some(2)), doc);
    }

    #[test]
    fn rejects_bad_documents() {
        let base = |terms: &str, trunc: u32| {
            format!(r#"{{"format_version":"1","trunc":{trunc},"entries":[[[{terms}],[]],[[],[]]]}}"#)
        };
        let t = r#"{"l":0,"i":0,"re":[1,0],"im":[0,1]}"#;
        assert!(matches!(BundleDocument::parse(&base(t, 1)), Err(DocumentError::ZeroDenominator { .. })));
        let t = r#"{"l":0,"i":0,"re":[1,1],"im":[0,1]},{"l":0,"i":0,"re":[2,1],"im":[0,1]}"#;
        assert!(matches!(BundleDocument::parse(&base(t, 1)), Err(DocumentError::Duplicate { .. })));
        let t = r#"{"l":0,"i":3,"re":[1,1],"im":[0,1]}"#;
        assert!(matches!(BundleDocument::parse(&base(t, 1)), Err(DocumentError::AboveTrunc { .. })));
        let t = r#"{"l":0,"i":0,"re":[1.5,1],"im":[0,1]}"#;
        assert!(matches!(BundleDocument::parse(&base(t, 1)), Err(DocumentError::Json(_))));
        assert!(matches!(
            BundleDocument::parse(r#"{"format_version":"9","trunc":0,"entries":[[[],[]],[[],[]]]}"#),
            Err(DocumentError::Version(_))
        ));
    }

    #[test]
    fn non_reduced_fractions_are_not_canonical() {
        let text = r#"{"format_version":"1","trunc":0,"entries":[[[{"l":0,"i":0,"re":[2,4],"im":[0,1]}],[]],[[],[]]]}"#;
        let doc = BundleDocument::parse(text).unwrap();
        assert_eq!(doc.to_json(), text);
        assert!(!doc.is_canonical());
    }
}
