//! Backtracking search for row-wise interpretations whose left columns lie in
//! a growing relation, and the worklist saturation built on it.
//!
//! An interpretation of a premise `M` into `{0..k-1}^n` picks, for each target
//! row, a row of `M` and a map on `M`'s values. Each (row, map) pair is
//! precomputed as a [`RowImage`]; the search then assigns images to target
//! rows one at a time and keeps, per column, the partial tuple built so far,
//! pruning as soon as some partial tuple is not a prefix of a member.

use std::collections::VecDeque;

use crate::columns::ColumnSet;
use crate::matrix::Matrix;

/// One premise row pushed through one map.
#[derive(Debug, Clone)]
pub(crate) struct RowImage {
    pub values: Vec<u8>,
    /// Image of 0, the entry this row contributes to the derived column.
    pub right: u8,
    pub row: usize,
    /// The map on the whole declared alphabet of the premise; values absent
    /// from the row are sent to 0.
    pub map: Vec<u8>,
}

/// All distinct row images of one premise for a target alphabet.
pub(crate) struct PremiseImages {
    pub matrix: usize,
    pub cols: usize,
    /// Target alphabet.
    pub k: usize,
    pub images: Vec<RowImage>,
    all: Vec<u32>,
    /// `by_value[j][a]`: images whose column `j` equals `a`.
    by_value: Vec<Vec<Vec<u32>>>,
}

impl PremiseImages {
    pub fn build(matrix: usize, m: &Matrix, k: usize) -> PremiseImages {
        let mut images: Vec<RowImage> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for r in 0..m.rows() {
            let row = m.row(r);
            if (0..r).any(|q| m.row(q) == row) {
                continue;
            }
            let mut domain: Vec<u8> = row.to_vec();
            domain.push(0);
            domain.sort_unstable();
            domain.dedup();
            // odometer over maps domain -> k, first domain value slowest
            let mut digits = vec![0u8; domain.len()];
            loop {
                let mut map = vec![0u8; m.alphabet()];
                for (&d, &v) in domain.iter().zip(&digits) {
                    map[d as usize] = v;
                }
                let values: Vec<u8> = row.iter().map(|&x| map[x as usize]).collect();
                let right = map[0];
                if seen.insert((values.clone(), right)) {
                    images.push(RowImage {
                        values,
                        right,
                        row: r,
                        map,
                    });
                }
                let mut pos = digits.len();
                let advanced = loop {
                    if pos == 0 {
                        break false;
                    }
                    pos -= 1;
                    digits[pos] += 1;
                    if (digits[pos] as usize) < k {
                        break true;
                    }
                    digits[pos] = 0;
                };
                if !advanced {
                    break;
                }
            }
        }
        let cols = m.cols();
        let mut by_value = vec![vec![Vec::new(); k]; cols];
        for (id, img) in images.iter().enumerate() {
            for (j, &v) in img.values.iter().enumerate() {
                by_value[j][v as usize].push(id as u32);
            }
        }
        PremiseImages {
            matrix,
            cols,
            k,
            all: (0..images.len() as u32).collect(),
            images,
            by_value,
        }
    }
}

/// Membership bitsets for every prefix length of the tuples in a relation.
pub(crate) struct PrefixIndex {
    arity: usize,
    alphabet: usize,
    /// `levels[l]` marks the codes of length-`l` prefixes; `levels[0]` unused.
    levels: Vec<Vec<u64>>,
}

impl PrefixIndex {
    pub fn new(arity: usize, alphabet: usize) -> PrefixIndex {
        let mut levels = Vec::with_capacity(arity + 1);
        let mut size = 1usize;
        for _ in 0..=arity {
            levels.push(vec![0u64; size.div_ceil(64)]);
            size *= alphabet;
        }
        PrefixIndex {
            arity,
            alphabet,
            levels,
        }
    }

    pub fn of(set: &ColumnSet) -> PrefixIndex {
        let mut idx = PrefixIndex::new(set.arity(), set.alphabet());
        for code in set.codes() {
            idx.insert(code);
        }
        idx
    }

    pub fn insert(&mut self, mut code: usize) {
        for level in (1..=self.arity).rev() {
            self.levels[level][code >> 6] |= 1 << (code & 63);
            code /= self.alphabet;
        }
    }

    #[inline]
    fn contains(&self, level: usize, code: usize) -> bool {
        self.levels[level][code >> 6] >> (code & 63) & 1 == 1
    }
}

/// Prefixes that still have some completion outside the relation. Lets the
/// search drop an interpretation as soon as its derived column is bound to
/// be old.
struct OpenIndex {
    arity: usize,
    alphabet: usize,
    levels: Vec<Vec<u64>>,
}

impl OpenIndex {
    fn new(arity: usize, alphabet: usize) -> OpenIndex {
        let mut levels = Vec::with_capacity(arity + 1);
        let mut size = 1usize;
        for _ in 0..=arity {
            let mut words = vec![u64::MAX; size.div_ceil(64)];
            if !size.is_multiple_of(64) {
                *words.last_mut().unwrap() = (1u64 << (size % 64)) - 1;
            }
            levels.push(words);
            size *= alphabet;
        }
        OpenIndex {
            arity,
            alphabet,
            levels,
        }
    }

    fn close(&mut self, mut code: usize) {
        let k = self.alphabet;
        self.levels[self.arity][code >> 6] &= !(1 << (code & 63));
        for level in (0..self.arity).rev() {
            let parent = code / k;
            let first = parent * k;
            if (first..first + k).any(|c| self.contains(level + 1, c)) {
                return;
            }
            self.levels[level][parent >> 6] &= !(1 << (parent & 63));
            code = parent;
        }
    }

    #[inline]
    fn contains(&self, level: usize, code: usize) -> bool {
        self.levels[level][code >> 6] >> (code & 63) & 1 == 1
    }

    fn is_full(&self) -> bool {
        !self.contains(0, 0)
    }
}

/// A relation under construction, indexed for the search.
pub(crate) struct Relation {
    pub set: ColumnSet,
    members: PrefixIndex,
    open: OpenIndex,
}

impl Relation {
    pub fn new(set: ColumnSet) -> Relation {
        let mut open = OpenIndex::new(set.arity(), set.alphabet());
        for code in set.codes() {
            open.close(code);
        }
        Relation {
            members: PrefixIndex::of(&set),
            open,
            set,
        }
    }

    pub fn insert(&mut self, code: usize) -> bool {
        if !self.set.insert_code(code) {
            return false;
        }
        self.members.insert(code);
        self.open.close(code);
        true
    }

    pub fn is_full(&self) -> bool {
        self.open.is_full()
    }
}

/// What the search does with an interpretation whose derived column is new.
pub(crate) enum Found {
    /// Add the column to the relation right away and keep going.
    Grow,
    /// Add it and stop the search.
    Stop,
}

/// Enumerates assignments of images to target rows whose left columns all
/// lie in the relation and whose derived column does not. Left columns are
/// checked against `frozen` when given, otherwise against `rel` itself, which
/// then grows as columns are found. With `pin = Some((j, t))`, column `j` of
/// the interpretation must equal `t`. Returns `false` if `visit` stopped it.
pub(crate) fn search(
    p: &PremiseImages,
    rel: &mut Relation,
    frozen: Option<&PrefixIndex>,
    pin: Option<(usize, &[u8])>,
    visit: &mut dyn FnMut(&[u32], usize) -> Found,
) -> bool {
    let n = rel.set.arity();
    let mut state = Dfs {
        p,
        rel,
        frozen,
        n,
        k: p.k,
        pin,
        codes: vec![0; (n + 1) * p.cols],
        right: vec![0; n + 1],
        chosen: vec![0; n],
    };
    state.go(0, visit)
}

struct Dfs<'a> {
    p: &'a PremiseImages,
    rel: &'a mut Relation,
    frozen: Option<&'a PrefixIndex>,
    n: usize,
    k: usize,
    pin: Option<(usize, &'a [u8])>,
    /// `codes[l * cols + c]`: code of column `c` restricted to the first `l` rows.
    codes: Vec<usize>,
    /// `right[l]`: code of the derived column over the first `l` rows.
    right: Vec<usize>,
    chosen: Vec<u32>,
}

impl Dfs<'_> {
    fn go(&mut self, level: usize, visit: &mut dyn FnMut(&[u32], usize) -> Found) -> bool {
        if level == self.n {
            let code = self.right[level];
            if !self.rel.insert(code) {
                return true;
            }
            return match visit(&self.chosen, code) {
                Found::Grow => true,
                Found::Stop => false,
            };
        }
        let p = self.p;
        let cols = p.cols;
        let k = self.k;
        let candidates: &[u32] = match self.pin {
            Some((j, t)) => &p.by_value[j][t[level] as usize],
            None => &p.all,
        };
        let base = level * cols;
        let next = base + cols;
        for &id in candidates {
            let img = &p.images[id as usize];
            let right = self.right[level] * k + img.right as usize;
            if !self.rel.open.contains(level + 1, right) {
                continue;
            }
            let members = self.frozen.unwrap_or(&self.rel.members);
            let mut ok = true;
            for c in 0..cols {
                let code = self.codes[base + c] * k + img.values[c] as usize;
                if !members.contains(level + 1, code) {
                    ok = false;
                    break;
                }
                self.codes[next + c] = code;
            }
            if ok {
                self.right[level + 1] = right;
                self.chosen[level] = id;
                if !self.go(level + 1, visit) {
                    return false;
                }
            }
        }
        true
    }
}

/// A derivation recorded during saturation: the premise and the image chosen
/// for every target row.
#[derive(Debug, Clone)]
pub(crate) struct Recorded {
    pub premise: usize,
    pub images: Vec<u32>,
    pub derived: usize,
}

/// Result of saturating `col(N)` under a premise list.
pub(crate) struct Saturation {
    pub set: ColumnSet,
    pub initial: ColumnSet,
    pub premises: Vec<PremiseImages>,
    pub steps: Vec<Recorded>,
    /// `origin[code]`: index into `steps` of the step deriving `code`.
    pub origin: std::collections::HashMap<usize, usize>,
    pub reached_zero: bool,
}

/// Saturates `start` under `premises` (all non-empty), recording a step per
/// derived column. With `stop_at_zero`, returns as soon as the zero tuple is
/// present; otherwise, and whenever the zero tuple is never reached, `set` is
/// the full fixpoint.
pub(crate) fn saturate(premises: &[&Matrix], start: ColumnSet, stop_at_zero: bool) -> Saturation {
    run_saturation(premises, start, stop_at_zero, true)
}

/// The fixpoint alone.
pub(crate) fn fixpoint(premises: &[&Matrix], start: ColumnSet) -> ColumnSet {
    run_saturation(premises, start, false, false).set
}

/// Whether the fixpoint contains the zero tuple, without recording steps.
pub(crate) fn reaches_zero(premises: &[&Matrix], start: ColumnSet) -> bool {
    run_saturation(premises, start, true, false).reached_zero
}

fn run_saturation(premises: &[&Matrix], start: ColumnSet, stop_at_zero: bool, record: bool) -> Saturation {
    let k = start.alphabet();
    let images: Vec<PremiseImages> = premises
        .iter()
        .enumerate()
        .map(|(i, m)| PremiseImages::build(i, m, k))
        .collect();
    let mut steps = Vec::new();
    let mut origin = std::collections::HashMap::new();
    let mut rel = Relation::new(start.clone());
    let mut queue: VecDeque<usize> = start.codes().collect();
    let mut reached_zero = start.contains_zero();

    if !(reached_zero && stop_at_zero) {
        let mut visit = |premise: usize, chosen: &[u32], code: usize, queue: &mut VecDeque<usize>| {
            if record {
                origin.insert(code, steps.len());
                steps.push(Recorded {
                    premise,
                    images: chosen.to_vec(),
                    derived: code,
                });
            }
            queue.push_back(code);
            if code == 0 {
                reached_zero = true;
                if stop_at_zero {
                    return Found::Stop;
                }
            }
            Found::Grow
        };
        'outer: {
            // Premises without columns interpret vacuously: one unrestricted pass.
            for p in images.iter().filter(|p| p.cols == 0) {
                let done = !search(p, &mut rel, None, None, &mut |chosen, code| {
                    visit(p.matrix, chosen, code, &mut queue)
                });
                if done || rel.is_full() {
                    break 'outer;
                }
            }
            while let Some(code) = queue.pop_front() {
                let tuple = rel.set.decode(code);
                for p in images.iter().filter(|p| p.cols > 0) {
                    for j in 0..p.cols {
                        let stopped = !search(p, &mut rel, None, Some((j, &tuple)), &mut |chosen, code| {
                            visit(p.matrix, chosen, code, &mut queue)
                        });
                        if stopped || rel.is_full() {
                            break 'outer;
                        }
                    }
                }
            }
        }
    }
    Saturation {
        set: rel.set,
        initial: start,
        premises: images,
        steps,
        origin,
        reached_zero,
    }
}

/// `S(R)`: `R` together with the derived column of every interpretation whose
/// left columns lie in `R`.
pub(crate) fn expand(premises: &[&Matrix], r: &ColumnSet) -> ColumnSet {
    let k = r.alphabet();
    let frozen = PrefixIndex::of(r);
    let mut out = Relation::new(r.clone());
    for (i, m) in premises.iter().enumerate() {
        let p = PremiseImages::build(i, m, k);
        search(&p, &mut out, Some(&frozen), None, &mut |_, _| Found::Grow);
    }
    out.set
}
