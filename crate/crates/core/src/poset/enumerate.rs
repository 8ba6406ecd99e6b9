//! Candidate generation for the boxes `matr(n', m', k')`, `n' <= n`,
//! `m' <= m`, `k' <= k`.

use serde::{Deserialize, Serialize};

use crate::linkage::is_trivial;
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EnumerationFilter {
    pub rows: usize,
    pub cols: usize,
    pub alphabet: usize,
    /// No repeated rows or columns.
    pub dedup: bool,
    /// Rows and columns in non-decreasing lexicographic order.
    pub doubly_lexi: bool,
    /// In each row, a nonzero value `i+1` never occurs before some `i`.
    pub row_value_order: bool,
    pub exclude_zero_column: bool,
    pub exclude_trivial: bool,
    /// Also yield an empty (`n x 0`) matrix.
    pub include_empty: bool,
}

impl EnumerationFilter {
    /// Every filter on; degenerate candidates (zero column, trivial, empty)
    /// left out.
    pub fn canonical(rows: usize, cols: usize, alphabet: usize) -> EnumerationFilter {
        EnumerationFilter {
            rows,
            cols,
            alphabet,
            dedup: true,
            doubly_lexi: true,
            row_value_order: true,
            exclude_zero_column: true,
            exclude_trivial: true,
            include_empty: false,
        }
    }

    /// Every filter on, degenerate candidates kept (the empty matrix still
    /// needs `include_empty`).
    pub fn with_degenerates(rows: usize, cols: usize, alphabet: usize) -> EnumerationFilter {
        EnumerationFilter {
            exclude_zero_column: false,
            exclude_trivial: false,
            ..Self::canonical(rows, cols, alphabet)
        }
    }

    /// No filter at all: every grid in the box.
    pub fn unfiltered(rows: usize, cols: usize, alphabet: usize) -> EnumerationFilter {
        EnumerationFilter {
            rows,
            cols,
            alphabet,
            dedup: false,
            doubly_lexi: false,
            row_value_order: false,
            exclude_zero_column: false,
            exclude_trivial: false,
            include_empty: false,
        }
    }

    /// Whether a single matrix passes the filters (the box bounds included).
    pub fn accepts(&self, m: &Matrix) -> bool {
        if m.is_empty() {
            return self.include_empty && m.rows() <= self.rows && (!self.dedup || m.rows() == 1);
        }
        m.rows() <= self.rows
            && m.cols() <= self.cols
            && m.used_alphabet() <= self.alphabet
            && !(self.dedup && m.has_duplicate_rows_or_cols())
            && !(self.doubly_lexi && !m.is_doubly_lexi_ordered())
            && !(self.row_value_order && !m.has_row_value_order())
            && !(self.exclude_zero_column && m.has_zero_column())
            && !(self.exclude_trivial && is_trivial(m))
    }
}

/// All candidates passing `f`, each once, with alphabets shrunk to fit.
///
/// With `dedup` and `doubly_lexi` set, candidates are built column by column
/// in increasing order; otherwise every grid in the box is tested.
pub fn enumerate(f: &EnumerationFilter) -> Vec<Matrix> {
    let mut out = Vec::new();
    for_each_candidate(f, &mut |m| out.push(m));
    out
}

pub fn for_each_candidate(f: &EnumerationFilter, emit: &mut dyn FnMut(Matrix)) {
    if f.rows == 0 || f.alphabet == 0 {
        return;
    }
    if f.include_empty {
        if f.dedup {
            emit(Matrix::empty(1));
        } else {
            for n in 1..=f.rows {
                emit(Matrix::empty(n));
            }
        }
    }
    if f.dedup && f.doubly_lexi {
        for n in 1..=f.rows {
            ColumnWalk::new(f, n).run(emit);
        }
    } else {
        naive(f, emit);
    }
}

fn naive(f: &EnumerationFilter, emit: &mut dyn FnMut(Matrix)) {
    let k = f.alphabet as u8;
    for n in 1..=f.rows {
        for m in 1..=f.cols {
            let mut grid = vec![0u8; n * m];
            loop {
                let rows: Vec<&[u8]> = grid.chunks(m).collect();
                let candidate = Matrix::from_rows(&rows).expect("grid fits");
                if f.accepts(&candidate) {
                    emit(candidate);
                }
                let Some(pos) = grid.iter().rposition(|&v| v + 1 < k) else {
                    break;
                };
                grid[pos] += 1;
                grid[pos + 1..].fill(0);
            }
        }
    }
}

/// Depth-first choice of strictly increasing column codes for a fixed row
/// count, tracking which adjacent row pairs are already strictly ordered.
struct ColumnWalk<'a> {
    f: &'a EnumerationFilter,
    n: usize,
    space: usize,
    columns: Vec<Vec<u8>>,
    /// `less[i]`: row `i` is already strictly below row `i + 1`.
    less: Vec<bool>,
    /// Largest value seen so far in each row.
    seen_max: Vec<u8>,
}

impl<'a> ColumnWalk<'a> {
    fn new(f: &'a EnumerationFilter, n: usize) -> Self {
        let space = (f.alphabet as u64)
            .checked_pow(n as u32)
            .filter(|&s| s <= u32::MAX as u64)
            .expect("column space too large") as usize;
        ColumnWalk {
            f,
            n,
            space,
            columns: Vec::new(),
            less: vec![false; n.saturating_sub(1)],
            seen_max: vec![0; n],
        }
    }

    fn decode(&self, mut code: usize) -> Vec<u8> {
        let k = self.f.alphabet;
        let mut col = vec![0u8; self.n];
        for slot in col.iter_mut().rev() {
            *slot = (code % k) as u8;
            code /= k;
        }
        col
    }

    fn run(mut self, emit: &mut dyn FnMut(Matrix)) {
        let first = usize::from(self.f.exclude_zero_column);
        self.extend(first, emit);
    }

    fn extend(&mut self, from: usize, emit: &mut dyn FnMut(Matrix)) {
        for code in from..self.space {
            let col = self.decode(code);
            if (0..self.n - 1).any(|i| !self.less[i] && col[i] > col[i + 1]) {
                continue;
            }
            if self.f.row_value_order
                && (0..self.n).any(|i| col[i] > 0 && col[i] > self.seen_max[i] + 1)
            {
                continue;
            }
            let saved_less = self.less.clone();
            let saved_max = self.seen_max.clone();
            for i in 0..self.n - 1 {
                if col[i] < col[i + 1] {
                    self.less[i] = true;
                }
            }
            for i in 0..self.n {
                self.seen_max[i] = self.seen_max[i].max(col[i]);
            }
            self.columns.push(col);
            if self.less.iter().all(|&l| l) {
                self.emit_current(emit);
            }
            if self.columns.len() < self.f.cols {
                self.extend(code + 1, emit);
            }
            self.columns.pop();
            self.less = saved_less;
            self.seen_max = saved_max;
        }
    }

    fn emit_current(&self, emit: &mut dyn FnMut(Matrix)) {
        let rows: Vec<Vec<u8>> = (0..self.n)
            .map(|i| self.columns.iter().map(|c| c[i]).collect())
            .collect();
        let m = Matrix::from_rows(&rows).expect("rows fit");
        if self.f.exclude_trivial && is_trivial(&m) {
            return;
        }
        emit(m);
    }
}
