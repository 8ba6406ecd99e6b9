//! Sets of `n`-tuples over `{0, .., k-1}`, stored as a bitset over the
//! big-endian base-`k` code of each tuple. Code order equals lexicographic
//! order of tuples.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::matrix::Matrix;

/// Upper bound on `k^n` for a tuple space.
pub const MAX_TUPLE_SPACE: usize = 1 << 26;

/// Number of tuples in `{0..k-1}^n`, or `None` past [`MAX_TUPLE_SPACE`].
pub fn tuple_space(arity: usize, alphabet: usize) -> Option<usize> {
    let mut size = 1usize;
    for _ in 0..arity {
        size = size.checked_mul(alphabet)?;
        if size > MAX_TUPLE_SPACE {
            return None;
        }
    }
    Some(size)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ColumnSet {
    arity: usize,
    alphabet: usize,
    len: usize,
    bits: Vec<u64>,
}

impl ColumnSet {
    /// Empty set of `arity`-tuples over `{0..alphabet-1}`.
    ///
    /// Panics when `alphabet^arity` exceeds [`MAX_TUPLE_SPACE`].
    pub fn new(arity: usize, alphabet: usize) -> ColumnSet {
        assert!(alphabet >= 1, "alphabet must be non-empty");
        let space = tuple_space(arity, alphabet)
            .unwrap_or_else(|| panic!("tuple space {alphabet}^{arity} is too large"));
        ColumnSet {
            arity,
            alphabet,
            len: 0,
            bits: vec![0; space.div_ceil(64)],
        }
    }

    /// The columns of `m`, over the smallest alphabet holding its entries.
    pub fn of_matrix(m: &Matrix) -> ColumnSet {
        Self::of_matrix_over(m, m.used_alphabet())
    }

    pub fn of_matrix_over(m: &Matrix, alphabet: usize) -> ColumnSet {
        let mut set = ColumnSet::new(m.rows(), alphabet);
        for j in 0..m.cols() {
            set.insert(&m.column(j));
        }
        set
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn space(&self) -> usize {
        tuple_space(self.arity, self.alphabet).expect("checked at construction")
    }

    pub fn encode(&self, tuple: &[u8]) -> usize {
        debug_assert_eq!(tuple.len(), self.arity);
        tuple
            .iter()
            .fold(0, |acc, &v| acc * self.alphabet + v as usize)
    }

    pub fn decode(&self, mut code: usize) -> Vec<u8> {
        let mut t = vec![0u8; self.arity];
        for slot in t.iter_mut().rev() {
            *slot = (code % self.alphabet) as u8;
            code /= self.alphabet;
        }
        t
    }

    fn fits(&self, tuple: &[u8]) -> bool {
        tuple.len() == self.arity && tuple.iter().all(|&v| (v as usize) < self.alphabet)
    }

    pub fn contains(&self, tuple: &[u8]) -> bool {
        self.fits(tuple) && self.contains_code(self.encode(tuple))
    }

    pub fn contains_code(&self, code: usize) -> bool {
        self.bits[code >> 6] >> (code & 63) & 1 == 1
    }

    /// Adds a tuple; returns whether it was new. Panics on ill-formed tuples.
    pub fn insert(&mut self, tuple: &[u8]) -> bool {
        assert!(self.fits(tuple), "tuple {tuple:?} does not fit the set");
        self.insert_code(self.encode(tuple))
    }

    pub fn insert_code(&mut self, code: usize) -> bool {
        let word = &mut self.bits[code >> 6];
        let mask = 1u64 << (code & 63);
        if *word & mask != 0 {
            return false;
        }
        *word |= mask;
        self.len += 1;
        true
    }

    /// Codes in increasing order.
    pub fn codes(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(w, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(w * 64 + b)
            })
        })
    }

    /// Tuples in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = Vec<u8>> + '_ {
        self.codes().map(move |c| self.decode(c))
    }

    pub fn contains_zero(&self) -> bool {
        self.contains_code(0)
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.bits
    }

    pub fn is_subset(&self, other: &ColumnSet) -> bool {
        self.iter().all(|t| other.contains(&t))
    }
}

impl std::fmt::Debug for ColumnSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Serialize, Deserialize)]
struct ColumnSetJson {
    arity: usize,
    alphabet: usize,
    tuples: Vec<Vec<u8>>,
}

impl Serialize for ColumnSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ColumnSetJson {
            arity: self.arity,
            alphabet: self.alphabet,
            tuples: self.iter().collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ColumnSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = ColumnSetJson::deserialize(d)?;
        if raw.alphabet == 0 || tuple_space(raw.arity, raw.alphabet).is_none() {
            return Err(D::Error::custom("tuple space empty or too large"));
        }
        let mut set = ColumnSet::new(raw.arity, raw.alphabet);
        for t in &raw.tuples {
            if !set.fits(t) {
                return Err(D::Error::custom(format!("tuple {t:?} does not fit")));
            }
            set.insert(t);
        }
        Ok(set)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn columns_of_maltsev() {
        let m = Matrix::from_rows(&[[0u8, 1, 1], [1, 1, 0]]).unwrap();
        let c = ColumnSet::of_matrix(&m);
        assert_eq!(c.iter().collect::<Vec<_>>(), vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert!(!c.contains_zero());
    }

    #[test]
    fn empty_matrix_has_no_columns() {
        assert!(ColumnSet::of_matrix(&Matrix::empty(3)).is_empty());
    }

    #[test]
    fn diagonal_three_columns() {
        let c = ColumnSet::of_matrix(&Matrix::diagonal(3));
        assert_eq!(c.len(), 3);
        for t in [[1u8, 0, 0], [0, 1, 0], [0, 0, 1]] {
            assert!(c.contains(&t));
        }
    }

    #[test]
    fn encode_is_lexicographic() {
        let s = ColumnSet::new(3, 3);
        assert!(s.encode(&[0, 2, 2]) < s.encode(&[1, 0, 0]));
        assert_eq!(s.decode(s.encode(&[2, 0, 1])), vec![2, 0, 1]);
    }

    #[test]
    fn ill_formed_tuples_are_not_members() {
        let s = ColumnSet::new(2, 2);
        assert!(!s.contains(&[0, 2]));
        assert!(!s.contains(&[0]));
    }

    #[test]
    fn json_roundtrip() {
        let mut s = ColumnSet::new(2, 3);
        s.insert(&[2, 1]);
        s.insert(&[0, 1]);
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"arity":2,"alphabet":3,"tuples":[[0,1],[2,1]]}"#);
        let back: ColumnSet = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }
}
