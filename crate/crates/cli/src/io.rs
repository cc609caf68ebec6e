//! Tensor and subspace file formats.
//!
//! A tensor file is JSON of the form
//! `{"n": 6, "k": 3, "terms": [{"coeff": "2/3", "indices": [1, 2, 4]}]}`
//! with 1-based, strictly increasing indices. A subspace file is
//! `{"n": 6, "basis": [["1", "0", "1/2", "0", "0", "0"], ...]}`.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use skewrank_core::rational;
use skewrank_core::{Error, GrassPoint, IndexSet, Multivector, Result, Subspace};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coeff {
    Text(String),
    Int(i64),
}

impl Coeff {
    fn value(&self) -> Result<rational::Rational> {
        match self {
            Coeff::Text(s) => rational::parse(s),
            Coeff::Int(v) => Ok(rational::int(*v)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermEntry {
    pub coeff: Coeff,
    pub indices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorFile {
    pub n: usize,
    pub k: usize,
    pub terms: Vec<TermEntry>,
}

impl TensorFile {
    /// Canonical form: lexicographically sorted terms, coefficients in lowest terms.
    pub fn from_multivector(t: &Multivector) -> Self {
        let terms = t
            .terms()
            .iter()
            .map(|(s, c)| TermEntry { coeff: Coeff::Text(rational::format(c)), indices: s.to_one_based() })
            .collect();
        TensorFile { n: t.dim(), k: t.grade(), terms }
    }

    pub fn to_multivector(&self) -> Result<Multivector> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for term in &self.terms {
            if term.indices.len() != self.k {
                return Err(Error::Parse(format!(
                    "term {:?} has {} indices, expected k = {}",
                    term.indices,
                    term.indices.len(),
                    self.k
                )));
            }
            let set = IndexSet::from_one_based(&term.indices, self.n).map_err(|e| Error::Parse(e.to_string()))?;
            terms.push((set, term.coeff.value()?));
        }
        Multivector::from_terms(self.n, self.k, terms).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("tensor file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serialisable")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubspaceFile {
    pub n: usize,
    pub basis: Vec<Vec<Coeff>>,
}

impl SubspaceFile {
    pub fn from_subspace(s: &Subspace) -> Self {
        let basis = s
            .basis_vectors()
            .iter()
            .map(|v| v.iter().map(|c| Coeff::Text(rational::format(c))).collect())
            .collect();
        SubspaceFile { n: s.ambient_dim(), basis }
    }

    pub fn to_subspace(&self) -> Result<Subspace> {
        let mut rows = Vec::with_capacity(self.basis.len());
        for row in &self.basis {
            if row.len() != self.n {
                return Err(Error::Parse(format!("basis vector of length {}, expected {}", row.len(), self.n)));
            }
            rows.push(row.iter().map(Coeff::value).collect::<Result<Vec<_>>>()?);
        }
        Subspace::span(self.n, &rows).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Contents of an input file.
#[derive(Clone, Debug)]
pub enum Input {
    Tensor(Multivector),
    Subspace(Subspace),
}

impl Input {
    pub fn parse(text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
        if value.get("basis").is_some() {
            let f: SubspaceFile =
                serde_json::from_value(value).map_err(|e| Error::Parse(format!("subspace file: {e}")))?;
            Ok(Input::Subspace(f.to_subspace()?))
        } else {
            let f: TensorFile = serde_json::from_value(value).map_err(|e| Error::Parse(format!("tensor file: {e}")))?;
            Ok(Input::Tensor(f.to_multivector()?))
        }
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// SHA-256 of the canonical serialisation.
    pub fn digest(&self) -> String {
        let canonical = match self {
            Input::Tensor(t) => TensorFile::from_multivector(t).to_json(),
            Input::Subspace(s) => serde_json::to_string(&SubspaceFile::from_subspace(s)).expect("serialisable"),
        };
        sha256_hex(canonical.as_bytes())
    }

    pub fn into_tensor(self) -> Result<Multivector> {
        match self {
            Input::Tensor(t) => Ok(t),
            Input::Subspace(s) => Ok(GrassPoint::new(s)?.pluecker().clone()),
        }
    }

    /// Point of the Grassmannian; tensors must be decomposable.
    pub fn into_point(self) -> Result<GrassPoint> {
        match self {
            Input::Tensor(t) => Ok(GrassPoint::from_multivector(&t)?.0),
            Input::Subspace(s) => GrassPoint::new(s),
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(7 + 64);
    out.push_str("sha256:");
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tensor_round_trip() {
        let text = r#"{"n": 6, "k": 3, "terms": [{"coeff": "-2/4", "indices": [4, 5, 6]}, {"coeff": 1, "indices": [1, 2, 3]}]}"#;
        let t = TensorFile::parse(text).unwrap().to_multivector().unwrap();
        let canon = TensorFile::from_multivector(&t);
        assert_eq!(canon.terms[0].indices, vec![1, 2, 3]);
        assert_eq!(canon.terms[1].coeff, Coeff::Text("-1/2".into()));
        assert_eq!(TensorFile::parse(&canon.to_json()).unwrap().to_multivector().unwrap(), t);
    }

    #[test]
    fn rejects_malformed_tensors() {
        for bad in [
            r#"{"n": 4, "k": 2, "terms": [{"coeff": "1", "indices": [2, 1]}]}"#,
            r#"{"n": 4, "k": 2, "terms": [{"coeff": "1", "indices": [1, 5]}]}"#,
            r#"{"n": 4, "k": 2, "terms": [{"coeff": "1", "indices": [1]}]}"#,
            r#"{"n": 4, "k": 2, "terms": [{"coeff": "1/0", "indices": [1, 2]}]}"#,
            r#"{"n": 4, "k": 2}"#,
            r#"{"n": 4, "k": 2, "terms": [], "extra": 1}"#,
        ] {
            assert!(matches!(Input::parse(bad), Err(Error::Parse(_))), "{bad}");
        }
    }

    #[test]
    fn digest_ignores_presentation() {
        let a = Input::parse(r#"{"n": 4, "k": 2, "terms": [{"coeff": "2/2", "indices": [1, 2]}]}"#).unwrap();
        let b = Input::parse(r#"{"n":4,"k":2,"terms":[{"coeff":1,"indices":[1,2]}]}"#).unwrap();
        assert_eq!(a.digest(), b.digest());
    }

    #[test]
    fn subspace_input() {
        let s = Input::parse(r#"{"n": 3, "basis": [["1", "1", "0"], ["0", "2", "2"]]}"#).unwrap();
        let p = s.into_point().unwrap();
        assert_eq!(p.k(), 2);
    }
}
