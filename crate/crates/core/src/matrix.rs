//! Dense integer matrices over a finite alphabet `{0, .., k-1}`.
//!
//! A [`Matrix`] is immutable once built. Row and column operations return new
//! values; nothing here mutates in place through a shared reference.

use std::fmt;

use crate::error::MatrixError;

/// Largest alphabet supported; entries are stored as bytes.
pub const MAX_ALPHABET: usize = 255;

/// An `n x m` matrix with entries in `{0, .., k-1}`.
///
/// `n >= 1` and `k >= 1` always hold. `m == 0` is allowed and encodes an empty
/// matrix. The declared alphabet may be wider than the entries require.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    alphabet: usize,
    entries: Vec<u8>,
}

/// Sort key selecting canonical representatives: fewer rows, then fewer
/// columns, then smaller greatest entry, then the column-major entry sequence.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey {
    pub rows: usize,
    pub cols: usize,
    pub greatest: u8,
    pub column_major: Vec<u8>,
}

impl Matrix {
    /// Validating constructor from a signed integer grid.
    pub fn new(
        rows: usize,
        cols: usize,
        alphabet: usize,
        grid: &[Vec<i64>],
    ) -> Result<Matrix, MatrixError> {
        if rows == 0 {
            return Err(MatrixError::BadShape("a matrix needs at least one row".into()));
        }
        if alphabet == 0 || alphabet > MAX_ALPHABET {
            return Err(MatrixError::BadShape(format!(
                "alphabet size {alphabet} outside 1..={MAX_ALPHABET}"
            )));
        }
        if grid.len() != rows {
            return Err(MatrixError::BadShape(format!(
                "expected {rows} rows, found {}",
                grid.len()
            )));
        }
        let mut entries = Vec::with_capacity(rows * cols);
        for (i, row) in grid.iter().enumerate() {
            if row.len() != cols {
                return Err(MatrixError::BadShape(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (j, &value) in row.iter().enumerate() {
                if value < 0 || value >= alphabet as i64 {
                    return Err(MatrixError::EntryOutOfRange {
                        row: i,
                        col: j,
                        value,
                        alphabet,
                    });
                }
                entries.push(value as u8);
            }
        }
        Ok(Matrix {
            rows,
            cols,
            alphabet,
            entries,
        })
    }

    /// Builds a matrix from byte rows, using the smallest alphabet that fits.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Matrix, MatrixError> {
        if rows.is_empty() {
            return Err(MatrixError::BadShape("a matrix needs at least one row".into()));
        }
        let cols = rows[0].as_ref().len();
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(MatrixError::BadShape(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if v as usize >= MAX_ALPHABET {
                    return Err(MatrixError::EntryOutOfRange {
                        row: i,
                        col: j,
                        value: v as i64,
                        alphabet: MAX_ALPHABET,
                    });
                }
            }
            entries.extend_from_slice(row);
        }
        let alphabet = entries.iter().copied().max().map_or(1, |v| v as usize + 1);
        Ok(Matrix {
            rows: rows.len(),
            cols,
            alphabet,
            entries,
        })
    }

    /// The `n x 1` all-zero column `[0]_n`.
    pub fn zero_column(n: usize) -> Matrix {
        assert!(n >= 1);
        Matrix {
            rows: n,
            cols: 1,
            alphabet: 1,
            entries: vec![0; n],
        }
    }

    /// `D_n`: ones on the diagonal, zeros elsewhere.
    pub fn diagonal(n: usize) -> Matrix {
        assert!(n >= 1);
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        Matrix {
            rows: n,
            cols: n,
            alphabet: 2,
            entries,
        }
    }

    /// An `n x 0` matrix.
    pub fn empty(n: usize) -> Matrix {
        assert!(n >= 1);
        Matrix {
            rows: n,
            cols: 0,
            alphabet: 1,
            entries: Vec::new(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn is_empty(&self) -> bool {
        self.cols == 0
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[u8]> + '_ {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn column(&self, j: usize) -> Vec<u8> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u8>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn max_entry(&self) -> Option<u8> {
        self.entries.iter().copied().max()
    }

    /// Smallest alphabet the entries fit in.
    pub fn used_alphabet(&self) -> usize {
        self.max_entry().map_or(1, |v| v as usize + 1)
    }

    pub fn has_zero_column(&self) -> bool {
        (0..self.cols).any(|j| (0..self.rows).all(|i| self.get(i, j) == 0))
    }

    /// Row-major copy of the entries.
    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        self.row_iter().map(<[u8]>::to_vec).collect()
    }

    /// Same entries viewed over a wider alphabet.
    pub fn with_alphabet(&self, alphabet: usize) -> Result<Matrix, MatrixError> {
        if alphabet < self.used_alphabet() || alphabet > MAX_ALPHABET {
            return Err(MatrixError::BadShape(format!(
                "alphabet {alphabet} cannot hold entries up to {}",
                self.used_alphabet() - 1
            )));
        }
        Ok(Matrix {
            alphabet,
            ..self.clone()
        })
    }

    pub fn shrink_alphabet(&self) -> Matrix {
        Matrix {
            alphabet: self.used_alphabet(),
            ..self.clone()
        }
    }

    /// The matrix whose `i`-th row is row `picks[i]` of `self`.
    pub fn select_rows(&self, picks: &[usize]) -> Matrix {
        assert!(!picks.is_empty());
        let rows: Vec<&[u8]> = picks.iter().map(|&i| self.row(i)).collect();
        Matrix {
            rows: picks.len(),
            cols: self.cols,
            alphabet: self.alphabet,
            entries: rows.concat(),
        }
    }

    /// The matrix whose `j`-th column is column `picks[j]` of `self`.
    pub fn select_cols(&self, picks: &[usize]) -> Matrix {
        let mut entries = Vec::with_capacity(self.rows * picks.len());
        for i in 0..self.rows {
            entries.extend(picks.iter().map(|&j| self.get(i, j)));
        }
        Matrix {
            rows: self.rows,
            cols: picks.len(),
            alphabet: self.alphabet,
            entries,
        }
    }

    pub fn canonical_key(&self) -> CanonicalKey {
        let mut column_major = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            column_major.extend((0..self.rows).map(|i| self.get(i, j)));
        }
        CanonicalKey {
            rows: self.rows,
            cols: self.cols,
            greatest: self.max_entry().unwrap_or(0),
            column_major,
        }
    }

    /// Rows and columns both in non-decreasing lexicographic order.
    pub fn is_doubly_lexi_ordered(&self) -> bool {
        let rows_sorted = (1..self.rows).all(|i| self.row(i - 1) <= self.row(i));
        let cols = self.columns();
        rows_sorted && cols.windows(2).all(|w| w[0] <= w[1])
    }

    /// In every row the non-zero values first occur in the order 1, 2, 3, ...
    pub fn has_row_value_order(&self) -> bool {
        self.row_iter().all(row_values_in_order)
    }

    pub fn has_duplicate_rows_or_cols(&self) -> bool {
        let mut rows = self.to_rows();
        rows.sort();
        let mut cols = self.columns();
        cols.sort();
        rows.windows(2).any(|w| w[0] == w[1]) || cols.windows(2).any(|w| w[0] == w[1])
    }

    /// A representative of the same matrix class with no duplicate rows or
    /// columns, doubly lexi-ordered, with per-row non-zero values relabeled in
    /// first-occurrence order and the alphabet shrunk to fit.
    pub fn normalize(&self) -> Result<Matrix, MatrixError> {
        Ok(self.normalize_traced()?.0)
    }

    /// Like [`normalize`](Self::normalize) but also reports how many
    /// alternating passes ran, or `None` when the exhaustive fallback was used.
    pub fn normalize_traced(&self) -> Result<(Matrix, Option<usize>), MatrixError> {
        if self.is_empty() {
            return Err(MatrixError::EmptyMatrix);
        }
        let mut grid = Grid::from_matrix(self);
        let cap = self.rows * self.cols + 2;
        for pass in 1..=cap {
            let before = grid.clone();
            grid.dedup_rows();
            grid.dedup_cols();
            grid.relabel_rows();
            grid.dedup_rows();
            grid.sort_cols();
            grid.sort_rows();
            if grid == before {
                return Ok((grid.into_matrix(), Some(pass)));
            }
        }
        Ok((exhaustive_normal_form(grid).into_matrix(), None))
    }

    /// Deletes rows and columns that contribute no interpretation of their
    /// own, giving a matrix of the same class.
    ///
    /// An interpretation only sees which entries of a row are equal, with the
    /// derived entry counting as a 0. So a row whose equalities include those
    /// of another row adds nothing, and a column that in each row is either
    /// alone or equal to one fixed other column can always be filled in as a
    /// copy of that column.
    pub fn reduce(&self) -> Matrix {
        let mut m = self.clone();
        loop {
            let rows = m.rows;
            if let Some(r) = (0..rows).find(|&r| (0..rows).any(|q| q != r && coarser(m.row(r), m.row(q)))) {
                let keep: Vec<usize> = (0..rows).filter(|&q| q != r).collect();
                m = m.select_rows(&keep);
                continue;
            }
            let cols = m.cols;
            let redundant = (0..cols).find(|&j| {
                (0..cols).any(|other| {
                    other != j
                        && m.row_iter().all(|row| {
                            row[j] == row[other]
                                || (row[j] != 0 && row.iter().filter(|&&x| x == row[j]).count() == 1)
                        })
                })
            });
            match redundant {
                Some(j) => {
                    let keep: Vec<usize> = (0..cols).filter(|&c| c != j).collect();
                    m = m.select_cols(&keep);
                }
                None => return m,
            }
        }
    }

    /// Matrix product whose columns are all vertical stacks of one column
    /// from each factor. The empty product is `[0]`.
    pub fn product(factors: &[Matrix]) -> Matrix {
        if factors.is_empty() {
            return Matrix::zero_column(1);
        }
        let rows: usize = factors.iter().map(|m| m.rows).sum();
        let cols: usize = factors.iter().map(|m| m.cols).product();
        let alphabet = factors.iter().map(|m| m.alphabet).max().unwrap_or(1);
        let mut entries = vec![0u8; rows * cols];
        let mut choice = vec![0usize; factors.len()];
        for c in 0..cols {
            let mut offset = 0;
            for (f, m) in factors.iter().enumerate() {
                for i in 0..m.rows {
                    entries[(offset + i) * cols + c] = m.get(i, choice[f]);
                }
                offset += m.rows;
            }
            // odometer with the last factor varying fastest
            for f in (0..factors.len()).rev() {
                choice[f] += 1;
                if choice[f] < factors[f].cols {
                    break;
                }
                choice[f] = 0;
            }
        }
        Matrix {
            rows,
            cols,
            alphabet,
            entries,
        }
    }
}

/// Every equality among the entries of `fine` (0 included) holds in `coarse`.
fn coarser(coarse: &[u8], fine: &[u8]) -> bool {
    let mut image = [None::<u8>; 256];
    image[0] = Some(0);
    fine.iter().zip(coarse).all(|(&f, &c)| match image[f as usize] {
        Some(v) => v == c,
        None => {
            image[f as usize] = Some(c);
            true
        }
    })
}

fn row_values_in_order(row: &[u8]) -> bool {
    let mut seen = 0u8;
    for &v in row {
        if v > seen {
            if v != seen + 1 {
                return false;
            }
            seen = v;
        }
    }
    true
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix[{}x{}/{}](", self.rows, self.cols, self.alphabet)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, " ")?;
            }
            for &v in self.row(i) {
                if self.alphabet <= 10 {
                    write!(f, "{v}")?;
                } else {
                    write!(f, "{v},")?;
                }
            }
        }
        write!(f, ")")
    }
}

impl fmt::Display for Matrix {
    /// Digit grid, one row per line. Alphabets above 10 use space separators.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                writeln!(f)?;
            }
            let row = self.row(i);
            if self.alphabet <= 10 {
                for &v in row {
                    write!(f, "{v}")?;
                }
            } else {
                let cells: Vec<String> = row.iter().map(u8::to_string).collect();
                write!(f, "{}", cells.join(" "))?;
            }
        }
        Ok(())
    }
}

/// Mutable working copy used by normalization.
#[derive(Clone, PartialEq, Eq)]
struct Grid {
    rows: Vec<Vec<u8>>,
}

impl Grid {
    fn from_matrix(m: &Matrix) -> Grid {
        Grid { rows: m.to_rows() }
    }

    fn cols(&self) -> usize {
        self.rows[0].len()
    }

    fn columns(&self) -> Vec<Vec<u8>> {
        (0..self.cols())
            .map(|j| self.rows.iter().map(|r| r[j]).collect())
            .collect()
    }

    fn set_columns(&mut self, cols: &[Vec<u8>]) {
        for (i, row) in self.rows.iter_mut().enumerate() {
            *row = cols.iter().map(|c| c[i]).collect();
        }
    }

    fn dedup_rows(&mut self) {
        let mut kept: Vec<Vec<u8>> = Vec::with_capacity(self.rows.len());
        for r in self.rows.drain(..) {
            if !kept.contains(&r) {
                kept.push(r);
            }
        }
        self.rows = kept;
    }

    fn dedup_cols(&mut self) {
        let mut kept: Vec<Vec<u8>> = Vec::new();
        for c in self.columns() {
            if !kept.contains(&c) {
                kept.push(c);
            }
        }
        self.set_columns(&kept);
    }

    fn relabel_rows(&mut self) {
        for row in &mut self.rows {
            let mut map = [0u8; 256];
            let mut next = 1u8;
            for v in row.iter_mut() {
                if *v == 0 {
                    continue;
                }
                if map[*v as usize] == 0 {
                    map[*v as usize] = next;
                    next += 1;
                }
                *v = map[*v as usize];
            }
        }
    }

    fn sort_cols(&mut self) {
        let mut cols = self.columns();
        cols.sort();
        self.set_columns(&cols);
    }

    fn sort_rows(&mut self) {
        self.rows.sort();
    }

    fn is_normal(&self) -> bool {
        let m = self.clone().into_matrix();
        m.is_doubly_lexi_ordered() && m.has_row_value_order() && !m.has_duplicate_rows_or_cols()
    }

    fn into_matrix(self) -> Matrix {
        Matrix::from_rows(&self.rows).expect("grid rows are rectangular")
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for len in 0..n {
        let mut next = Vec::new();
        for p in &out {
            for pos in 0..=len {
                let mut q = p.clone();
                q.insert(pos, len);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// Cold path: search row and column permutations for the smallest normal form.
/// Only reachable when alternating sorts fail to settle within the pass cap.
fn exhaustive_normal_form(mut grid: Grid) -> Grid {
    grid.dedup_rows();
    grid.dedup_cols();
    grid.relabel_rows();
    grid.dedup_rows();
    let cols = grid.columns();
    let mut best: Option<Grid> = None;
    for rp in permutations(grid.rows.len()) {
        for cp in permutations(cols.len()) {
            let permuted_cols: Vec<Vec<u8>> = cp
                .iter()
                .map(|&j| rp.iter().map(|&i| cols[j][i]).collect())
                .collect();
            let mut cand = grid.clone();
            cand.rows = vec![Vec::new(); rp.len()];
            cand.set_columns(&permuted_cols);
            cand.relabel_rows();
            if !cand.is_normal() {
                continue;
            }
            let better = match &best {
                None => true,
                Some(b) => {
                    cand.clone().into_matrix().canonical_key() < b.clone().into_matrix().canonical_key()
                }
            };
            if better {
                best = Some(cand);
            }
        }
    }
    best.unwrap_or(grid)
}
