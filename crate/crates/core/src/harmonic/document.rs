//! JSON interchange format for polynomial harmonic maps.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::PolyMap;
use crate::polynomial::Polynomial;

use super::map::HarmonicMap;

/// `{"n": 2, "degree": 2, "components": [{"2,0": 1.0, "0,2": -1.0}, {"1,1": 2.0}]}`.
///
/// Keys are comma-separated exponent lists; a bracketed form such as
/// `"[2, 0]"` is also accepted on input.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDocument {
    pub n: usize,
    pub degree: u32,
    pub components: Vec<BTreeMap<String, f64>>,
}

impl MapDocument {
    pub fn from_map(map: &HarmonicMap<f64>) -> Result<Self> {
        let pm = map
            .to_poly_map()
            .ok_or_else(|| Error::precondition("only polynomial maps can be serialized"))?;
        Ok(Self {
            n: pm.components().len(),
            degree: pm.degree(),
            components: pm.components().iter().map(Polynomial::to_table).collect(),
        })
    }

    /// Parses the tables and checks the shape and declared degree, without
    /// requiring harmonicity.
    pub fn to_poly_map(&self) -> Result<PolyMap<f64>> {
        if self.components.len() != self.n {
            return Err(Error::domain(format!(
                "document declares n = {} but has {} components",
                self.n,
                self.components.len()
            )));
        }
        let polys = self
            .components
            .iter()
            .map(|t| Polynomial::from_table(self.n, t))
            .collect::<Result<Vec<_>>>()?;
        let pm = PolyMap::new(polys);
        if pm.degree() > self.degree {
            return Err(Error::domain(format!(
                "component degree {} exceeds declared degree {}",
                pm.degree(),
                self.degree
            )));
        }
        Ok(pm)
    }

    /// [`Self::to_poly_map`] plus a harmonicity check.
    pub fn to_map(&self) -> Result<HarmonicMap<f64>> {
        HarmonicMap::from_poly_map(&self.to_poly_map()?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::VectorField;
    use crate::geometry::PointN;

    const SQUARE: &str = r#"{"n": 2, "degree": 2, "components": [{"2,0": 1.0, "0,2": -1.0}, {"[1, 1]": 2.0}]}"#;

    #[test]
    fn parse_and_round_trip() {
        let doc = MapDocument::from_json(SQUARE).unwrap();
        let map = doc.to_map().unwrap();
        let x = PointN::from_f64(&[0.3, 0.4]).unwrap();
        let y = map.eval(&x);
        assert!((y[0] - (0.09 - 0.16)).abs() < 1e-15);
        assert!((y[1] - 0.24).abs() < 1e-15);
        let again = MapDocument::from_json(&MapDocument::from_map(&map).unwrap().to_json().unwrap()).unwrap();
        assert_eq!(again.components[1].get("1,1"), Some(&2.0));
    }

    #[test]
    fn rejects_bad_documents() {
        let not_harmonic = r#"{"n": 2, "degree": 2, "components": [{"2,0": 1.0}, {"0,1": 1.0}]}"#;
        assert!(MapDocument::from_json(not_harmonic).unwrap().to_map().is_err());
        let short = r#"{"n": 3, "degree": 1, "components": [{"1,0,0": 1.0}]}"#;
        assert!(MapDocument::from_json(short).unwrap().to_map().is_err());
        let degree = r#"{"n": 2, "degree": 1, "components": [{"2,0": 1.0, "0,2": -1.0}, {"0,1": 1.0}]}"#;
        assert!(MapDocument::from_json(degree).unwrap().to_map().is_err());
        assert!(MapDocument::from_json(r#"{"n": 2}"#).is_err());
    }
}
