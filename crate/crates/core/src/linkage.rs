//! Linkage classes and the combinatorial triviality test.
//!
//! For two rows of a matrix, the linkage classes are the blocks of the join of
//! the two kernel partitions on column indices. A non-empty matrix is
//! non-trivial exactly when every row holds a 0 and, for every pair of rows,
//! some linkage class contains a 0-position of each row.

use serde::{Deserialize, Serialize};

use crate::error::MatrixError;
use crate::matrix::Matrix;

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // smaller index wins so block ids are stable
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Partition of the column indices induced by a pair of rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkagePartition {
    pub row_pair: (usize, usize),
    /// Blocks of column indices, each sorted, ordered by smallest member.
    pub classes: Vec<Vec<usize>>,
}

impl LinkagePartition {
    /// Index of the block holding column `j`.
    pub fn class_of(&self, j: usize) -> usize {
        self.classes
            .iter()
            .position(|c| c.binary_search(&j).is_ok())
            .expect("every column lies in some class")
    }
}

/// Linkage classes for rows `i` and `j` (0-based).
pub fn linkage_classes(m: &Matrix, i: usize, j: usize) -> Result<LinkagePartition, MatrixError> {
    for r in [i, j] {
        if r >= m.rows() {
            return Err(MatrixError::RowOutOfRange { row: r, rows: m.rows() });
        }
    }
    if i == j {
        return Err(MatrixError::SameRow(i));
    }
    if m.is_empty() {
        return Err(MatrixError::EmptyMatrix);
    }
    Ok(LinkagePartition {
        row_pair: (i, j),
        classes: join_of_kernels(m.row(i), m.row(j)),
    })
}

fn join_of_kernels(a: &[u8], b: &[u8]) -> Vec<Vec<usize>> {
    let cols = a.len();
    let mut sets = DisjointSets::new(cols);
    for row in [a, b] {
        let mut first = [usize::MAX; 256];
        for (c, &v) in row.iter().enumerate() {
            match first[v as usize] {
                usize::MAX => first[v as usize] = c,
                f => sets.union(f, c),
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut block_of_root = vec![usize::MAX; cols];
    for c in 0..cols {
        let r = sets.find(c);
        if block_of_root[r] == usize::MAX {
            block_of_root[r] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[block_of_root[r]].push(c);
    }
    blocks
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TrivialityVerdict {
    NonTrivial,
    TrivialNonEmpty,
    Empty,
}

/// Evidence that a non-empty matrix is trivial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrivialityWitness {
    /// A row with no 0 entry.
    RowWithoutZero { row: usize },
    /// Two rows whose 0-positions never share a linkage class.
    DisconnectedZeros { first: usize, second: usize },
}

impl TrivialityWitness {
    /// Re-derives the witness from the matrix.
    pub fn check(&self, m: &Matrix) -> bool {
        match *self {
            TrivialityWitness::RowWithoutZero { row } => {
                row < m.rows() && !m.row(row).contains(&0)
            }
            TrivialityWitness::DisconnectedZeros { first, second } => {
                first < m.rows()
                    && second < m.rows()
                    && first != second
                    && !m.is_empty()
                    && !zeros_linked(m.row(first), m.row(second))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrivialityReport {
    pub verdict: TrivialityVerdict,
    pub witness: Option<TrivialityWitness>,
}

impl TrivialityReport {
    pub fn is_trivial(&self) -> bool {
        self.verdict == TrivialityVerdict::TrivialNonEmpty
    }
}

/// Some linkage class holds a 0 of row `a` and a 0 of row `b`.
fn zeros_linked(a: &[u8], b: &[u8]) -> bool {
    let blocks = join_of_kernels(a, b);
    blocks
        .iter()
        .any(|blk| blk.iter().any(|&c| a[c] == 0) && blk.iter().any(|&c| b[c] == 0))
}

pub fn triviality(m: &Matrix) -> TrivialityReport {
    if m.is_empty() {
        return TrivialityReport {
            verdict: TrivialityVerdict::Empty,
            witness: None,
        };
    }
    let trivial = |w| TrivialityReport {
        verdict: TrivialityVerdict::TrivialNonEmpty,
        witness: Some(w),
    };
    if let Some(row) = (0..m.rows()).find(|&i| !m.row(i).contains(&0)) {
        return trivial(TrivialityWitness::RowWithoutZero { row });
    }
    for first in 0..m.rows() {
        for second in first + 1..m.rows() {
            if !zeros_linked(m.row(first), m.row(second)) {
                return trivial(TrivialityWitness::DisconnectedZeros { first, second });
            }
        }
    }
    TrivialityReport {
        verdict: TrivialityVerdict::NonTrivial,
        witness: None,
    }
}

pub fn is_trivial(m: &Matrix) -> bool {
    triviality(m).is_trivial()
}
