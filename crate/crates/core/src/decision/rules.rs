//! Interpretations compiled into Horn rules over a tuple space of at most
//! 64 codes, so that closures become a handful of word operations.
//!
//! Every interpretation of a premise into `{0..x-1}^a` says: if all its left
//! columns are in the relation, so is its derived column. As a rule this is
//! a mask of left-column codes and one conclusion code. Rules whose
//! conclusion is among their own premises, and rules with a strictly larger
//! premise mask than another rule with the same conclusion, are dropped.

use super::search::PremiseImages;
use crate::columns::tuple_space;
use crate::matrix::Matrix;

/// Largest tuple space a [`HornRules`] can index.
pub(crate) const MAX_CODES: usize = 64;

#[derive(Debug, Clone)]
pub(crate) struct HornRules {
    /// `(premise mask, conclusion)`.
    rules: Vec<(u64, u8)>,
}

impl HornRules {
    /// The rules of a non-empty `premise` for relations of the given arity
    /// over `{0..alphabet-1}`, or `None` if that space exceeds 64 codes.
    pub fn compile(premise: &Matrix, arity: usize, alphabet: usize) -> Option<HornRules> {
        let space = tuple_space(arity, alphabet)?;
        if space > MAX_CODES || premise.cols() == 0 {
            return None;
        }
        let p = PremiseImages::build(0, premise, alphabet);
        let mut walk = Walk {
            p: &p,
            arity,
            alphabet,
            codes: vec![0; (arity + 1) * p.cols],
            minimal: vec![Vec::new(); space],
        };
        walk.go(0, 0, 0);
        for masks in &mut walk.minimal {
            minimize(masks);
        }
        // The walk only visited non-decreasing tuples of images. Every other
        // tuple permutes one of those, and so permutes its rule; a minimal
        // rule is a permutation of a minimal rule of the walk.
        let mut minimal = walk.minimal.clone();
        for perm in permutations(arity).iter().skip(1) {
            let table: Vec<usize> = (0..space).map(|code| permute_code(code, perm, alphabet)).collect();
            for (concl, masks) in walk.minimal.iter().enumerate() {
                for &mask in masks {
                    let moved = bits(mask).fold(0u64, |m, b| m | 1 << table[b]);
                    insert_minimal(&mut minimal[table[concl]], moved);
                }
            }
        }
        Some(HornRules::from_minimal(minimal))
    }

    fn from_minimal(minimal: Vec<Vec<u64>>) -> HornRules {
        let mut rules: Vec<(u64, u8)> = minimal
            .into_iter()
            .enumerate()
            .flat_map(|(c, masks)| masks.into_iter().map(move |m| (m, c as u8)))
            .collect();
        // fewer premises first: those fire earliest
        rules.sort_unstable_by_key(|&(m, c)| (m.count_ones(), m, c));
        HornRules { rules }
    }

    /// Least fixpoint above `start`. With `stop_at_zero`, returns as soon as
    /// code 0 is present.
    pub fn closure(&self, start: u64, stop_at_zero: bool) -> u64 {
        let mut r = start;
        loop {
            if stop_at_zero && r & 1 == 1 {
                return r;
            }
            let before = r;
            for &(mask, concl) in &self.rules {
                if mask & !r == 0 {
                    r |= 1 << concl;
                }
            }
            if r == before {
                return r;
            }
        }
    }

    pub fn reaches_zero(&self, start: u64) -> bool {
        self.closure(start, true) & 1 == 1
    }
}

/// Depth-first walk over the non-decreasing `arity`-tuples of images.
struct Walk<'a> {
    p: &'a PremiseImages,
    arity: usize,
    alphabet: usize,
    /// `codes[l * cols + c]`: code of column `c` over the first `l` rows.
    codes: Vec<usize>,
    /// Premise masks per conclusion; minimized after the walk.
    minimal: Vec<Vec<u64>>,
}

impl Walk<'_> {
    fn go(&mut self, level: usize, right: usize, first: usize) {
        let cols = self.p.cols;
        let base = level * cols;
        if level == self.arity {
            let mask = self.codes[base..base + cols].iter().fold(0u64, |m, &c| m | 1 << c);
            if mask >> right & 1 == 0 {
                self.minimal[right].push(mask);
            }
            return;
        }
        for (i, img) in self.p.images.iter().enumerate().skip(first) {
            for c in 0..cols {
                self.codes[base + cols + c] = self.codes[base + c] * self.alphabet + img.values[c] as usize;
            }
            self.go(level + 1, right * self.alphabet + img.right as usize, i);
        }
    }
}

fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (mask != 0).then(|| {
            let b = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            b
        })
    })
}

/// The code whose digit `perm[t]` is digit `t` of `code`.
fn permute_code(code: usize, perm: &[usize], alphabet: usize) -> usize {
    let arity = perm.len();
    let mut digits = vec![0usize; arity];
    let mut rest = code;
    for t in (0..arity).rev() {
        digits[t] = rest % alphabet;
        rest /= alphabet;
    }
    let mut moved = vec![0usize; arity];
    for t in 0..arity {
        moved[perm[t]] = digits[t];
    }
    moved.iter().fold(0, |acc, &d| acc * alphabet + d)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Keeps the inclusion-minimal masks, sorted.
fn minimize(masks: &mut Vec<u64>) {
    masks.sort_unstable_by_key(|&m| (m.count_ones(), m));
    masks.dedup();
    let mut kept: Vec<u64> = Vec::with_capacity(masks.len());
    for &m in masks.iter() {
        if !kept.iter().any(|&k| k & !m == 0) {
            kept.push(m);
        }
    }
    *masks = kept;
}

fn insert_minimal(masks: &mut Vec<u64>, mask: u64) {
    if masks.iter().any(|&m| m & !mask == 0) {
        return;
    }
    masks.retain(|&m| mask & !m != 0);
    masks.push(mask);
}

/// The columns of `goal` as a mask over `arity`-tuples, repeating its last
/// row to fill the arity. Row duplication does not change the class, so the
/// padded goal decides the same implications. `None` if the goal has more
/// rows than `arity`, uses a value outside the alphabet, or the space is too
/// large.
pub(crate) fn goal_mask(goal: &Matrix, arity: usize, alphabet: usize) -> Option<u64> {
    let space = tuple_space(arity, alphabet)?;
    if space > MAX_CODES || goal.rows() > arity || goal.rows() == 0 {
        return None;
    }
    if goal.max_entry().is_some_and(|v| v as usize >= alphabet) {
        return None;
    }
    let last = goal.rows() - 1;
    let mut mask = 0u64;
    for j in 0..goal.cols() {
        let code = (0..arity).fold(0usize, |acc, t| acc * alphabet + goal.get(t.min(last), j) as usize);
        mask |= 1 << code;
    }
    Some(mask)
}
