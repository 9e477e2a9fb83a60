//! JSON interchange format for spaces: a name, a point count, and the open
//! family as arrays of ascending point indices. Canonical form orders the
//! opens canonically and serializes compactly; canonical documents round-trip
//! byte for byte.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::space::{set_members, FiniteSpace, PointSet, TopologyError};

#[derive(Debug, Error)]
pub enum DocError {
    #[error("document parse failed: {message}")]
    Parse { message: String },
    #[error("open {open_index} lists point {point}, but the document has {points} points")]
    BadPoint { open_index: usize, point: usize, points: usize },
    #[error("document family is not a topology: {source}")]
    Invalid {
        #[from]
        source: TopologyError,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceDocument {
    #[serde(default)]
    pub name: String,
    pub points: usize,
    pub opens: Vec<Vec<usize>>,
}

impl SpaceDocument {
    pub fn from_space(name: &str, x: &FiniteSpace) -> Self {
        SpaceDocument {
            name: name.to_string(),
            points: x.point_count(),
            opens: x.opens().iter().map(|&u| set_members(u)).collect(),
        }
    }

    pub fn to_space(&self) -> Result<FiniteSpace, DocError> {
        let mut opens: Vec<PointSet> = Vec::with_capacity(self.opens.len());
        for (open_index, open) in self.opens.iter().enumerate() {
            let mut mask: PointSet = 0;
            for &point in open {
                if point >= self.points || point >= 64 {
                    return Err(DocError::BadPoint { open_index, point, points: self.points });
                }
                mask |= 1u64 << point;
            }
            opens.push(mask);
        }
        Ok(FiniteSpace::validate(self.points, &opens)?)
    }

    pub fn from_json(text: &str) -> Result<Self, DocError> {
        serde_json::from_str(text).map_err(|e| DocError::Parse {
            message: format!("{e} (line {}, column {})", e.line(), e.column()),
        })
    }

    /// Compact JSON with opens in canonical order: the canonical form.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("document serializes")
    }

    /// Canonical document for a space under this name.
    pub fn canonicalize(name: &str, x: &FiniteSpace) -> String {
        SpaceDocument::from_space(name, x).canonical_json()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_byte_identical_for_canonical_docs() {
        for x in [
            FiniteSpace::empty(),
            FiniteSpace::point(),
            FiniteSpace::sierpinski(),
            FiniteSpace::discrete(3),
            FiniteSpace::indiscrete(2),
        ] {
            let text = SpaceDocument::canonicalize("sample", &x);
            let doc = SpaceDocument::from_json(&text).unwrap();
            let space = doc.to_space().unwrap();
            assert_eq!(space, x);
            assert_eq!(SpaceDocument::canonicalize("sample", &space), text);
        }
    }

    #[test]
    fn parse_and_validation_errors() {
        let err = SpaceDocument::from_json("{\"points\": 2").unwrap_err();
        assert!(matches!(err, DocError::Parse { .. }));
        let doc = SpaceDocument { name: String::new(), points: 1, opens: vec![vec![], vec![0, 3]] };
        let err = doc.to_space().unwrap_err();
        assert!(matches!(err, DocError::BadPoint { open_index: 1, point: 3, points: 1 }));
        let doc = SpaceDocument { name: String::new(), points: 2, opens: vec![vec![], vec![0]] };
        let err = doc.to_space().unwrap_err();
        assert!(matches!(
            err,
            DocError::Invalid { source: TopologyError::MissingEmptyOrFull }
        ));
    }

    #[test]
    fn non_canonical_input_is_accepted_and_canonicalized() {
        // Opens out of order and with unordered indices still parse.
        let text = "{\"name\":\"x\",\"points\":2,\"opens\":[[1,0],[],[1]]}";
        let doc = SpaceDocument::from_json(text).unwrap();
        let space = doc.to_space().unwrap();
        assert_eq!(space, FiniteSpace::sierpinski());
        let canon = SpaceDocument::canonicalize("x", &space);
        assert_eq!(canon, "{\"name\":\"x\",\"points\":2,\"opens\":[[],[1],[0,1]]}");
    }
}
