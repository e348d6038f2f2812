//! The two on-disk formats for complexes, both bit-exact under canonical
//! write:
//!
//! * facet-list text: optional `#` comment lines, then one facet per line as
//!   space-separated positive integers; the canonical writer sorts vertices
//!   within lines and lines lexicographically;
//! * JSON: an object with an optional `"name"` and a `"facets"` array.

use std::path::Path;

use thiserror::Error;

use crate::complex::{ComplexError, FacetComplex};
use crate::simplex::VertexId;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Parses the facet-list text format; dimension is inferred.
pub fn parse_facet_list(text: &str) -> Result<FacetComplex, IoError> {
    let mut facets: Vec<Vec<VertexId>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut facet = Vec::new();
        for token in line.split_whitespace() {
            let id: VertexId = token.parse().map_err(|_| {
                IoError::Parse(format!("line {}: bad vertex id {token:?}", lineno + 1))
            })?;
            facet.push(id);
        }
        facets.push(facet);
    }
    if facets.is_empty() {
        return Err(IoError::Parse("no facets in input".into()));
    }
    Ok(FacetComplex::build(&facets)?)
}

/// Canonical facet-list text: sorted lines, one trailing newline.
pub fn write_facet_list(c: &FacetComplex) -> String {
    let mut out = String::new();
    for facet in c.facets() {
        let ids: Vec<String> = facet.vertices().iter().map(|v| v.to_string()).collect();
        out.push_str(&ids.join(" "));
        out.push('\n');
    }
    out
}

/// Canonical JSON form (single line, fields in declaration order).
pub fn to_json(c: &FacetComplex) -> String {
    serde_json::to_string(c).expect("complex serializes")
}

pub fn from_json(text: &str) -> Result<FacetComplex, IoError> {
    Ok(serde_json::from_str(text)?)
}

/// Reads a complex by extension: `.json` gets the JSON format, everything
/// else the facet-list text format.
pub fn read_complex_file(path: impl AsRef<Path>) -> Result<FacetComplex, IoError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    if path.extension().is_some_and(|e| e == "json") {
        from_json(&text)
    } else {
        parse_facet_list(&text)
    }
}

pub fn write_complex_file(path: impl AsRef<Path>, c: &FacetComplex) -> Result<(), IoError> {
    let path = path.as_ref();
    let text = if path.extension().is_some_and(|e| e == "json") {
        let mut t = to_json(c);
        t.push('\n');
        t
    } else {
        write_facet_list(c)
    };
    std::fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_format_roundtrip_with_comments() {
        let text = "# a sphere\n3 2 1\n1 2 4\n\n1 3 4\n2 3 4\n";
        let c = parse_facet_list(text).unwrap();
        assert_eq!(c.face_counts(), vec![4, 6, 4]);
        let canonical = write_facet_list(&c);
        assert_eq!(canonical, "1 2 3\n1 2 4\n1 3 4\n2 3 4\n");
        assert_eq!(parse_facet_list(&canonical).unwrap(), c);
    }

    #[test]
    fn json_roundtrip_preserves_name() {
        let c = FacetComplex::build(&[vec![1, 2], vec![2, 3]])
            .unwrap()
            .with_name("path");
        let json = to_json(&c);
        assert_eq!(json, r#"{"name":"path","facets":[[1,2],[2,3]]}"#);
        assert_eq!(from_json(&json).unwrap(), c);
    }

    #[test]
    fn bad_inputs_error_out() {
        assert!(parse_facet_list("1 2\n1 2 3\n").is_err());
        assert!(parse_facet_list("0 1\n").is_err());
        assert!(parse_facet_list("# only comments\n").is_err());
        assert!(from_json(r#"{"facets":[[1,2],[1,2,3]]}"#).is_err());
    }
}
