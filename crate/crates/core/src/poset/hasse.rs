//! Transitive reduction of finite partial orders.

use crate::error::PosetError;

/// Square boolean matrix stored as bit rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct BitRelation {
    size: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitRelation {
    pub fn new(size: usize) -> Self {
        let words = size.div_ceil(64).max(1);
        BitRelation {
            size,
            words,
            bits: vec![0; size * words],
        }
    }

    pub fn from_pairs(size: usize, pairs: &[(usize, usize)]) -> Self {
        let mut r = BitRelation::new(size);
        for &(i, j) in pairs {
            r.set(i, j);
        }
        r
    }

    pub fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    fn ones(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let size = self.size;
        self.row(i).iter().enumerate().flat_map(move |(w, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(w * 64 + b)
            })
            .filter(move |&j| j < size)
        })
    }

    /// All pairs `(i, j)` with `i != j`, sorted.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.size)
            .flat_map(|i| self.ones(i).filter(move |&j| j != i).map(move |j| (i, j)))
            .collect()
    }

    /// Warshall closure over the strict part.
    pub fn transitive_closure(&self) -> BitRelation {
        let mut c = self.clone();
        for k in 0..self.size {
            let row_k = c.row(k).to_vec();
            for i in 0..self.size {
                if i != k && c.get(i, k) {
                    let base = i * c.words;
                    for (w, &bits) in row_k.iter().enumerate() {
                        c.bits[base + w] |= bits;
                    }
                }
            }
        }
        c
    }
}

/// The covering pairs of a partial order given by its pairs `(i, j)`
/// meaning `i <= j` over elements `0..size`. Reflexive pairs are ignored.
pub fn hasse_reduce(size: usize, order: &[(usize, usize)]) -> Result<Vec<(usize, usize)>, PosetError> {
    if let Some(&(i, j)) = order.iter().find(|&&(i, j)| i >= size || j >= size) {
        return Err(PosetError::NotAPartialOrder(format!(
            "pair ({i}, {j}) outside 0..{size}"
        )));
    }
    let mut strict = BitRelation::new(size);
    for &(i, j) in order {
        if i != j {
            strict.set(i, j);
        }
    }
    for (i, j) in strict.strict_pairs() {
        if strict.get(j, i) {
            return Err(PosetError::NotAPartialOrder(format!(
                "{i} and {j} are distinct but each below the other"
            )));
        }
        if let Some(k) = strict.ones(j).find(|&k| k != i && !strict.get(i, k)) {
            return Err(PosetError::NotAPartialOrder(format!(
                "{i} <= {j} <= {k} but not {i} <= {k}"
            )));
        }
    }
    let mut edges = Vec::new();
    for i in 0..size {
        let above: Vec<usize> = strict.ones(i).collect();
        for &j in &above {
            if !above.iter().any(|&k| k != j && strict.get(k, j)) {
                edges.push((i, j));
            }
        }
    }
    Ok(edges)
}
