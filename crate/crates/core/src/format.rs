//! Text and JSON encodings of matrices and matrix sets.
//!
//! Text: one row per line, digits without separators (`011\n110`); matrices
//! in a set are separated by blank lines. Rows may instead be written as
//! whitespace-separated integers, which is also how alphabets above 10 are
//! printed. Lines starting with `#` are comments. Text cannot express an empty
//! matrix or a declared alphabet wider than the entries; JSON can.
//!
//! JSON: `{"k": 2, "rows": [[0,1,1],[1,1,0]]}`; a set is an array of those.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::FormatError;
use crate::matrix::Matrix;

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    k: usize,
    rows: Vec<Vec<i64>>,
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MatrixJson {
            k: self.alphabet(),
            rows: self
                .row_iter()
                .map(|r| r.iter().map(|&v| v as i64).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(d)?;
        let cols = raw.rows.first().map_or(0, Vec::len);
        Matrix::new(raw.rows.len(), cols, raw.k, &raw.rows).map_err(serde::de::Error::custom)
    }
}

pub fn matrix_to_text(m: &Matrix) -> String {
    m.to_string()
}

/// Matrices separated by blank lines, with a trailing newline.
pub fn matrices_to_text(ms: &[Matrix]) -> String {
    let mut out = String::new();
    for (i, m) in ms.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&matrix_to_text(m));
        out.push('\n');
    }
    out
}

pub fn matrix_to_json(m: &Matrix) -> String {
    serde_json::to_string(m).expect("matrix serialization cannot fail")
}

fn parse_row(line: &str, lineno: usize) -> Result<Vec<u8>, FormatError> {
    let bad = |msg: String| FormatError::Text { line: lineno, msg };
    if line.split_whitespace().count() > 1 {
        line.split_whitespace()
            .map(|tok| {
                tok.parse::<u8>()
                    .map_err(|_| bad(format!("bad entry {tok:?}")))
            })
            .collect()
    } else {
        line.trim()
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as u8)
                    .ok_or_else(|| bad(format!("bad character {c:?}")))
            })
            .collect()
    }
}

/// Parses a blank-line separated list of text matrices.
pub fn parse_matrices_text(text: &str) -> Result<Vec<Matrix>, FormatError> {
    let mut out = Vec::new();
    let mut block: Vec<Vec<u8>> = Vec::new();
    let mut block_start = 0;
    let mut flush = |block: &mut Vec<Vec<u8>>, start: usize| -> Result<(), FormatError> {
        if block.is_empty() {
            return Ok(());
        }
        let m = Matrix::from_rows(block).map_err(|e| FormatError::Text {
            line: start,
            msg: e.to_string(),
        })?;
        out.push(m);
        block.clear();
        Ok(())
    };
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.starts_with('#') {
            continue;
        }
        if trimmed.is_empty() {
            flush(&mut block, block_start)?;
            continue;
        }
        if block.is_empty() {
            block_start = lineno;
        }
        block.push(parse_row(trimmed, lineno)?);
    }
    flush(&mut block, block_start)?;
    Ok(out)
}

/// Parses exactly one text matrix.
pub fn parse_matrix_text(text: &str) -> Result<Matrix, FormatError> {
    exactly_one(parse_matrices_text(text)?)
}

fn exactly_one(mut ms: Vec<Matrix>) -> Result<Matrix, FormatError> {
    match ms.len() {
        1 => Ok(ms.pop().unwrap()),
        n => Err(FormatError::Invalid(format!("expected one matrix, found {n}"))),
    }
}

/// Parses a matrix set in either format. JSON is recognized by a leading `{`
/// (single matrix) or `[` (array of matrices).
pub fn parse_matrices(text: &str) -> Result<Vec<Matrix>, FormatError> {
    let body = text.trim_start();
    if body.starts_with('{') {
        Ok(vec![serde_json::from_str(body)?])
    } else if body.starts_with('[') {
        Ok(serde_json::from_str(body)?)
    } else {
        let ms = parse_matrices_text(text)?;
        if ms.is_empty() {
            return Err(FormatError::Invalid("no matrix found".into()));
        }
        Ok(ms)
    }
}

pub fn parse_matrix(text: &str) -> Result<Matrix, FormatError> {
    exactly_one(parse_matrices(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_roundtrip() {
        let text = "011\n110";
        let m = parse_matrix_text(text).unwrap();
        assert_eq!(m.to_rows(), vec![vec![0, 1, 1], vec![1, 1, 0]]);
        assert_eq!(matrix_to_text(&m), text);
    }

    #[test]
    fn sets_split_on_blank_lines() {
        let text = "011\n110\n\n# diagonal\n100\n010\n001\n";
        let ms = parse_matrices(text).unwrap();
        assert_eq!(ms.len(), 2);
        assert_eq!(ms[1], Matrix::diagonal(3));
        assert_eq!(matrices_to_text(&ms), "011\n110\n\n100\n010\n001\n");
    }

    #[test]
    fn json_roundtrip_keeps_declared_alphabet() {
        let m = Matrix::new(2, 2, 5, &[vec![0, 1], vec![1, 0]]).unwrap();
        let json = matrix_to_json(&m);
        assert_eq!(json, r#"{"k":5,"rows":[[0,1],[1,0]]}"#);
        assert_eq!(parse_matrix(&json).unwrap(), m);
    }

    #[test]
    fn json_empty_matrix() {
        let m = parse_matrix(r#"{"k":1,"rows":[[],[]]}"#).unwrap();
        assert!(m.is_empty());
        assert_eq!(m.rows(), 2);
    }

    #[test]
    fn wide_alphabet_text() {
        let m = Matrix::from_rows(&[[0u8, 11], [12, 0]]).unwrap();
        let text = matrix_to_text(&m);
        assert_eq!(parse_matrix_text(&text).unwrap(), m);
    }

    #[test]
    fn errors_carry_positions() {
        match parse_matrix_text("01\n0x") {
            Err(FormatError::Text { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_matrix_text("01\n011").is_err());
        assert!(parse_matrix(r#"{"k":2,"rows":[[0,2]]}"#).is_err());
        assert!(parse_matrix("").is_err());
        assert!(parse_matrix("01\n\n10").is_err());
    }
}
