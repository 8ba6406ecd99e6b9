#![allow(dead_code)]

use mclex::decision::{DerivationStep, LexTableau, RowSource};
use mclex::Matrix;

pub mod invariants;

pub fn mat(rows: &[&str]) -> Matrix {
    let rows: Vec<Vec<u8>> = rows
        .iter()
        .map(|r| r.bytes().map(|b| b - b'0').collect())
        .collect();
    Matrix::from_rows(&rows).unwrap()
}

pub fn maltsev() -> Matrix {
    mat(&["011", "110"])
}

/// Mal'tsev matrix with its columns sorted.
pub fn maltsev_sorted() -> Matrix {
    mat(&["011", "101"])
}

pub fn d(n: usize) -> Matrix {
    Matrix::diagonal(n)
}

/// `D_3` with rows in lexicographic order.
pub fn d3_sorted() -> Matrix {
    mat(&["001", "010", "100"])
}

pub fn d4_sorted() -> Matrix {
    mat(&["0001", "0010", "0100", "1000"])
}

pub fn minority() -> Matrix {
    mat(&["011", "101", "110"])
}

/// Arithmetical matrix in its usual presentation.
pub fn arithmetical() -> Matrix {
    mat(&["011", "110", "010"])
}

/// Arithmetical matrix, doubly lexi-ordered.
pub fn arithmetical_sorted() -> Matrix {
    mat(&["001", "011", "101"])
}

/// The class of the Mal'tsev and `D_4` conjunction.
pub fn a_prime() -> Matrix {
    mat(&["0001", "0010", "0111", "1011"])
}

pub fn refinement() -> Matrix {
    mat(&["00011", "10101", "10011", "11010"])
}

pub fn refinement_sorted() -> Matrix {
    mat(&["00011", "00111", "01101", "10110"])
}

pub fn refinement_truncated() -> Matrix {
    mat(&["0001", "0011", "0110", "1011"])
}

pub fn intro() -> Matrix {
    mat(&["11022", "00110", "20121"])
}

pub fn intro_partner() -> Matrix {
    mat(&["0011", "0101", "1220"])
}

pub fn normal_local_projections() -> Matrix {
    mat(&["000111", "011001", "101011"])
}

/// Four pairs of equivalent matrices, a 3-row and a 4-row presentation each.
pub fn equivalent_pairs() -> Vec<(Matrix, Matrix)> {
    vec![
        (
            mat(&["00011", "01101", "10221"]),
            mat(&["00011", "00101", "01110", "11001"]),
        ),
        (
            mat(&["0000111", "0112002", "1022021"]),
            mat(&["00011", "00101", "01010", "10110"]),
        ),
        (
            mat(&["00000111", "01112012", "10122020"]),
            mat(&["000011", "000101", "011010", "101110"]),
        ),
        (
            mat(&["00001111", "01110001", "10120122"]),
            mat(&["00000111", "00011001", "01101010", "10110110"]),
        ),
    ]
}

/// Finds a source row of `m` and a map sending it to `shown` with 0 sent to
/// `right`. Values not in the row map to 0 (or to `right` for 0 itself).
fn source_for(m: &Matrix, matrix: usize, shown: &[u8], right: u8) -> RowSource {
    'rows: for r in 0..m.rows() {
        let mut map: Vec<Option<u8>> = vec![None; m.alphabet()];
        map[0] = Some(right);
        for (&v, &s) in m.row(r).iter().zip(shown) {
            match map[v as usize] {
                Some(prev) if prev != s => continue 'rows,
                _ => map[v as usize] = Some(s),
            }
        }
        return RowSource {
            matrix,
            row: r,
            map: map.into_iter().map(|x| x.unwrap_or(0)).collect(),
        };
    }
    panic!("no row of premise {matrix} yields {shown:?} | {right}");
}

/// Builds a tableau from written-out blocks. Each block names the premise matrix
/// its rows come from and lists rows as `"left|right"`.
pub fn transcribe(premise: Vec<Matrix>, goal: Matrix, blocks: &[(usize, &[&str])]) -> LexTableau {
    let steps = blocks
        .iter()
        .map(|&(matrix, rows)| {
            let mut sources = Vec::new();
            let mut derived = Vec::new();
            for row in rows {
                let (left, right) = row.split_once('|').unwrap();
                let shown: Vec<u8> = left.bytes().map(|b| b - b'0').collect();
                let right = right.parse::<u8>().unwrap();
                sources.push(source_for(&premise[matrix], matrix, &shown, right));
                derived.push(right);
            }
            DerivationStep {
                rows: sources,
                derived,
            }
        })
        .collect();
    LexTableau {
        premise,
        goal,
        steps,
    }
}

/// Six worked lex-tableaux, labelled.
pub fn worked_tableaux() -> Vec<(&'static str, LexTableau)> {
    vec![
        (
            "refinement M' proves N",
            transcribe(
                vec![refinement_sorted()],
                refinement_truncated(),
                &[
                    (0, &["10010|1", "10010|1", "01001|1", "10110|0"]),
                    (0, &["00011|0", "00111|0", "01101|0", "10110|0"]),
                ],
            ),
        ),
        (
            "introduction matrix proves its partner",
            transcribe(
                vec![intro()],
                intro_partner(),
                &[(0, &["00101|0", "00110|0", "11022|0"])],
            ),
        ),
        (
            "partner proves the introduction matrix",
            transcribe(
                vec![intro_partner()],
                intro(),
                &[
                    (0, &["2211|2", "1100|1", "2220|0"]),
                    (0, &["1220|0", "0011|0", "0101|0"]),
                ],
            ),
        ),
        (
            "arithmetical proves D3",
            transcribe(
                vec![arithmetical_sorted()],
                d3_sorted(),
                &[
                    (0, &["001|0", "100|1", "010|1"]),
                    (0, &["000|0", "101|0", "011|0"]),
                ],
            ),
        ),
        (
            "Mal'tsev and D3 prove arithmetical",
            transcribe(
                vec![maltsev_sorted(), d3_sorted()],
                arithmetical_sorted(),
                &[
                    (1, &["001|0", "101|1", "011|1"]),
                    (0, &["000|0", "011|0", "101|0"]),
                ],
            ),
        ),
        (
            "Mal'tsev and D4 prove A'",
            transcribe(
                vec![maltsev_sorted(), d4_sorted()],
                a_prime(),
                &[
                    (1, &["0001|0", "0010|0", "1011|1", "0111|1"]),
                    (0, &["000|0", "000|0", "011|0", "101|0"]),
                ],
            ),
        ),
    ]
}
