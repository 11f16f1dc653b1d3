use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{DeltaComplex, SignCocycle};
use crate::error::{Error, Result};

/// Wire form of a [`DeltaComplex`]: simplex counts per dimension and face
/// lists keyed by dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexJson {
    pub dims: Vec<usize>,
    #[serde(default)]
    pub faces: BTreeMap<usize, Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<Vec<String>>>,
}

/// Wire form of a ℤ/2-valued cochain; only nonzero values are emitted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignCocycleJson {
    pub degree: usize,
    pub values: BTreeMap<usize, u8>,
}

impl From<&DeltaComplex> for ComplexJson {
    fn from(x: &DeltaComplex) -> Self {
        let faces = (1..=x.dim())
            .map(|d| (d, (0..x.count(d)).map(|s| x.faces(d, s).to_vec()).collect()))
            .collect();
        ComplexJson { dims: x.f_vector(), faces, labels: x.labels().cloned() }
    }
}

impl ComplexJson {
    pub fn into_complex(self) -> Result<DeltaComplex> {
        if self.dims.is_empty() {
            return Err(Error::Parse("\"dims\" must list at least the vertex count".into()));
        }
        let top = self.dims.len() - 1;
        if let Some((&d, _)) = self.faces.iter().find(|(&d, _)| d == 0 || d > top) {
            return Err(Error::Parse(format!("face list for dimension {d} outside 1..={top}")));
        }
        let mut levels = Vec::with_capacity(top);
        for d in 1..=top {
            let level = self.faces.get(&d).cloned().unwrap_or_default();
            if level.len() != self.dims[d] {
                return Err(Error::Parse(format!(
                    "dimension {d}: dims says {} simplices but {} face lists given",
                    self.dims[d],
                    level.len()
                )));
            }
            levels.push(level);
        }
        let x = DeltaComplex::new(self.dims[0], levels)?;
        if x.f_vector() != self.dims {
            return Err(Error::Parse("trailing empty dimensions in \"dims\"".into()));
        }
        match self.labels {
            Some(l) => x.with_labels(l),
            None => Ok(x),
        }
    }
}

impl DeltaComplex {
    pub fn to_json(&self) -> ComplexJson {
        ComplexJson::from(self)
    }

    /// Canonical JSON text; byte-identical for identical complexes.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("complex serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: ComplexJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        j.into_complex()
    }
}

impl SignCocycleJson {
    pub fn from_bits(degree: usize, bits: &[bool]) -> Self {
        SignCocycleJson {
            degree,
            values: bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| (i, 1)).collect(),
        }
    }

    /// Expands to a dense bit vector over the `len` simplices of the degree.
    pub fn to_bits(&self, len: usize) -> Result<Vec<bool>> {
        let mut bits = vec![false; len];
        for (&i, &v) in &self.values {
            if i >= len {
                return Err(Error::InvalidCocycle(format!(
                    "simplex index {i} out of range for degree {} ({len} simplices)",
                    self.degree
                )));
            }
            match v {
                0 => {}
                1 => bits[i] = true,
                _ => return Err(Error::InvalidCocycle(format!("value {v} is not 0 or 1"))),
            }
        }
        Ok(bits)
    }

    pub fn into_sign_cocycle(self, complex: &DeltaComplex) -> Result<SignCocycle> {
        if self.degree != 1 {
            return Err(Error::DegreeMismatch(format!(
                "sign cocycle must have degree 1, got {}",
                self.degree
            )));
        }
        let bits = self.to_bits(complex.count(1))?;
        SignCocycle::new(complex, bits)
    }
}

impl From<&SignCocycle> for SignCocycleJson {
    fn from(c: &SignCocycle) -> Self {
        SignCocycleJson::from_bits(1, c.values())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_sphere;

    #[test]
    fn round_trip() {
        let x = build_sphere(2);
        let s = x.to_json_string();
        let y = DeltaComplex::from_json_str(&s).unwrap();
        assert_eq!(x, y);
        assert_eq!(s, y.to_json_string());
        assert!(s.starts_with("{\"dims\":[4,6,4],\"faces\":{\"1\":"));
    }

    #[test]
    fn count_mismatch_is_parse_error() {
        let err = DeltaComplex::from_json_str(r#"{"dims":[2,2],"faces":{"1":[[1,0]]}}"#).unwrap_err();
        assert!(matches!(err, Error::Parse(_)));
    }

    #[test]
    fn cocycle_values_checked() {
        let x = build_sphere(2);
        let j: SignCocycleJson = serde_json::from_str(r#"{"degree":1,"values":{"0":2}}"#).unwrap();
        assert!(j.into_sign_cocycle(&x).is_err());
        let j: SignCocycleJson = serde_json::from_str(r#"{"degree":2,"values":{}}"#).unwrap();
        assert!(matches!(j.into_sign_cocycle(&x), Err(Error::DegreeMismatch(_))));
    }
}
