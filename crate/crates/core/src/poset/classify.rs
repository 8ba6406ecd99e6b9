//! Grouping candidate matrices into classes and ordering the classes.
//!
//! For a non-trivial `M`, the relations closed under every interpretation of
//! `M` depend only on the class of `M`. Hence the closure of a fixed probe
//! relation under `{M}` is a class invariant, and the closures of a fixed list
//! of probes form a fingerprint: matrices with different fingerprints are in
//! different classes, and `mclex{A} ⊆ mclex{B}` forces each closure under `B`
//! to lie inside the corresponding closure under `A`. Fingerprints only narrow
//! the search; every equivalence and every order pair is confirmed by the
//! decision procedure.
//!
//! Inside boxes small enough for compiled Horn rules, fingerprints are not
//! needed: each class is compiled once and implications become bitmask
//! closures.

use std::collections::HashMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cache::{pair_key, DecisionCache};
use super::enumerate::{enumerate, EnumerationFilter};
use super::hasse::hasse_reduce;
use super::universe::{Compiled, Ranked, Universe};
use crate::columns::ColumnSet;
use crate::decision::{self, search};
use crate::error::PosetError;
use crate::linkage::is_trivial;
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DegenerateTag {
    /// The class of empty matrices: only the terminal category.
    Terminal,
    /// Trivial non-empty matrices: left exact preorders.
    Preorder,
    /// Matrices with a zero column: every left exact category.
    AllLex,
}

impl DegenerateTag {
    pub fn of(m: &Matrix) -> Option<DegenerateTag> {
        if m.is_empty() {
            Some(DegenerateTag::Terminal)
        } else if m.has_zero_column() {
            Some(DegenerateTag::AllLex)
        } else if is_trivial(m) {
            Some(DegenerateTag::Preorder)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixClass {
    /// The member with the smallest [`CanonicalKey`](crate::CanonicalKey).
    pub canonical: Matrix,
    /// Members in increasing key order; the first is `canonical`.
    pub members: Vec<Matrix>,
    pub degenerate: Option<DegenerateTag>,
}

impl MatrixClass {
    /// Fewest columns among the members.
    pub fn min_cols(&self) -> usize {
        self.members.iter().map(Matrix::cols).min().unwrap_or(0)
    }
}

/// Matrix classes ordered by inclusion of `mclex`. Non-degenerate classes
/// come first in increasing canonical order, then degenerate ones by tag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassPoset {
    pub classes: Vec<MatrixClass>,
    /// Pairs `(i, j)` with `mclex{canonical_i} ⊆ mclex{canonical_j}`,
    /// reflexive pairs included, sorted.
    pub order: Vec<(usize, usize)>,
    pub hasse: Vec<(usize, usize)>,
}

impl ClassPoset {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn nondegenerate(&self) -> impl Iterator<Item = (usize, &MatrixClass)> {
        self.classes
            .iter()
            .enumerate()
            .filter(|(_, c)| c.degenerate.is_none())
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.order.binary_search(&(i, j)).is_ok()
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Fingerprint(Vec<u64>);

impl Fingerprint {
    fn within(&self, other: &Fingerprint) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

/// What the classes found so far are compared by.
enum Index {
    /// Compiled representatives with their order, inside a small universe.
    Ranked(Universe, Ranked),
    /// Fingerprints of representatives otherwise.
    Prints(HashMap<Fingerprint, Vec<usize>>),
}

struct Partition {
    /// First member of each class found so far.
    reps: Vec<Matrix>,
    members: Vec<Vec<Matrix>>,
    index: Index,
    /// Class of every normalized matrix seen, members and their reductions.
    class_of: HashMap<Matrix, usize>,
}

/// Builds class posets. Holds the worker count, an optional decision cache
/// and the probe relations used for fingerprints.
pub struct Classifier {
    jobs: usize,
    cache: Option<Arc<DecisionCache>>,
    probes: Vec<ColumnSet>,
}

impl Default for Classifier {
    fn default() -> Self {
        Classifier::new()
    }
}

const PROBE_SEED: u64 = 0x006d_636c_6578;

fn default_probes() -> Vec<ColumnSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED);
    let mut probes = Vec::new();
    for (arity, alphabet, count) in [(2, 2, 4), (3, 2, 8), (4, 2, 8), (2, 3, 4), (3, 3, 6)] {
        for _ in 0..count {
            let mut r = ColumnSet::new(arity, alphabet);
            let space = r.space();
            let size: usize = rng.gen_range(1..=4.min(space - 1));
            while r.len() < size {
                r.insert_code(rng.gen_range(1..space));
            }
            probes.push(r);
        }
    }
    for m in [Matrix::diagonal(3), Matrix::diagonal(4)] {
        probes.push(ColumnSet::of_matrix(&m));
    }
    probes
}

impl Classifier {
    pub fn new() -> Classifier {
        Classifier {
            jobs: 0,
            cache: None,
            probes: default_probes(),
        }
    }

    /// Worker threads for the parallel phases; 0 uses the global pool.
    pub fn with_jobs(mut self, jobs: usize) -> Classifier {
        self.jobs = jobs;
        self
    }

    pub fn with_cache(mut self, cache: Arc<DecisionCache>) -> Classifier {
        self.cache = Some(cache);
        self
    }

    pub fn cache(&self) -> Option<&DecisionCache> {
        self.cache.as_deref()
    }

    fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> T {
        if self.jobs == 0 {
            return f();
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs)
            .build()
            .expect("thread pool")
            .install(f)
    }

    /// `mclex{a} ⊆ mclex{b}`, through the cache when one is attached.
    pub fn holds(&self, a: &Matrix, b: &Matrix) -> bool {
        let decide = || decision::holds(std::slice::from_ref(a), std::slice::from_ref(b));
        match &self.cache {
            None => decide(),
            Some(cache) => {
                let key = pair_key(std::slice::from_ref(a), b);
                if let Some(v) = cache.get(&key) {
                    return v;
                }
                let v = decide();
                cache.insert(key, v);
                v
            }
        }
    }

    pub fn equivalent(&self, a: &Matrix, b: &Matrix) -> bool {
        a == b || (self.holds(a, b) && self.holds(b, a))
    }

    fn fingerprint(&self, m: &Matrix) -> Fingerprint {
        let mut words = Vec::new();
        for probe in &self.probes {
            let closed = search::fixpoint(&[m], probe.clone());
            words.extend_from_slice(closed.words());
        }
        Fingerprint(words)
    }

    /// Splits candidates into classes, without computing the order.
    ///
    /// Candidates are handled in layers of equal shape, smallest first, and
    /// a candidate equivalent to its [`Matrix::reduce`] joins that class at
    /// once. When the box is small enough for compiled rules, the others are
    /// placed by the classes below them. Otherwise deleting a column never
    /// strengthens a matrix and deleting a row never weakens it, so one
    /// decision per deletion tells whether `M` is equivalent to a smaller
    /// matrix whose class is already known, and the survivors are compared by
    /// fingerprint.
    pub fn partition(&self, candidates: impl IntoIterator<Item = Matrix>) -> Vec<MatrixClass> {
        let mut degenerate: HashMap<DegenerateTag, Vec<Matrix>> = HashMap::new();
        let mut regular = Vec::new();
        for m in candidates {
            match DegenerateTag::of(&m) {
                Some(tag) => degenerate.entry(tag).or_default().push(m),
                None => regular.push(m),
            }
        }
        regular.sort_by_cached_key(Matrix::canonical_key);
        regular.dedup();

        let mut state = Partition {
            reps: Vec::new(),
            members: Vec::new(),
            index: match Universe::of(&regular) {
                Some(u) => Index::Ranked(u, Ranked::default()),
                None => Index::Prints(HashMap::new()),
            },
            class_of: HashMap::new(),
        };
        let mut start = 0;
        while start < regular.len() {
            let shape = (regular[start].rows(), regular[start].cols());
            let end = start + regular[start..].partition_point(|m| (m.rows(), m.cols()) == shape);
            self.install(|| self.partition_layer(&mut state, &regular[start..end]));
            start = end;
        }

        let mut classes: Vec<MatrixClass> = state
            .members
            .into_iter()
            .map(|mut members| {
                members.sort_by_cached_key(Matrix::canonical_key);
                MatrixClass {
                    canonical: members[0].clone(),
                    members,
                    degenerate: None,
                }
            })
            .collect();
        classes.sort_by_cached_key(|c| c.canonical.canonical_key());
        for tag in [DegenerateTag::Terminal, DegenerateTag::Preorder, DegenerateTag::AllLex] {
            if let Some(mut members) = degenerate.remove(&tag) {
                members.sort_by_cached_key(Matrix::canonical_key);
                members.dedup();
                classes.push(MatrixClass {
                    canonical: members[0].clone(),
                    members,
                    degenerate: Some(tag),
                });
            }
        }
        classes
    }

    /// The class of a matrix obtained by deleting rows or columns, if that
    /// matrix has been seen.
    fn known_class(&self, state: &Partition, m: &Matrix) -> Option<usize> {
        if DegenerateTag::of(m).is_some() {
            return None;
        }
        state.class_of.get(&m.normalize().ok()?).copied()
    }

    /// Some class known before this layer that `m` belongs to, found by
    /// deletions alone. With compiled classes only the free lookup of the
    /// reduction is tried: comparing against the classes is cheaper than one
    /// decision per deletion.
    fn by_deletion(&self, state: &Partition, m: &Matrix) -> Option<usize> {
        if let Some(c) = self.known_class(state, &m.reduce()) {
            return Some(c);
        }
        if matches!(state.index, Index::Ranked(..)) {
            return None;
        }
        let cols: Vec<usize> = (0..m.cols()).collect();
        for j in 0..m.cols() {
            let mut keep = cols.clone();
            keep.remove(j);
            let smaller = m.select_cols(&keep);
            if let Some(c) = self.known_class(state, &smaller) {
                if self.holds(m, &smaller) {
                    return Some(c);
                }
            }
        }
        let rows: Vec<usize> = (0..m.rows()).collect();
        for i in 0..m.rows() {
            let mut keep = rows.clone();
            keep.remove(i);
            let smaller = m.select_rows(&keep);
            if let Some(c) = self.known_class(state, &smaller) {
                if self.holds(&smaller, m) {
                    return Some(c);
                }
            }
        }
        None
    }

    /// A class among `range` that `m` belongs to. With compiled classes, the
    /// only candidate is the unique maximal class below `m`.
    fn find_class(&self, state: &Partition, m: &Matrix, range: std::ops::Range<usize>) -> Option<usize> {
        match &state.index {
            Index::Ranked(u, ranked) => match ranked.maximal_below(&u.goal(m), range)[..] {
                [c] if self.holds(m, &state.reps[c]) => Some(c),
                _ => None,
            },
            Index::Prints(by_print) => by_print.get(&self.fingerprint(m)).and_then(|cs| {
                cs.iter()
                    .copied()
                    .filter(|i| range.contains(i))
                    .find(|&i| self.equivalent(&state.reps[i], m))
            }),
        }
    }

    fn partition_layer(&self, state: &mut Partition, layer: &[Matrix]) {
        let before = state.reps.len();
        let found: Vec<Option<usize>> = {
            let state = &*state;
            layer
                .par_iter()
                .map(|m| self.by_deletion(state, m).or_else(|| self.find_class(state, m, 0..before)))
                .collect()
        };
        // classes born in this layer, in key order
        for (m, found) in layer.iter().zip(found) {
            let c = match found.or_else(|| self.find_class(state, m, before..state.reps.len())) {
                Some(c) => c,
                None => {
                    let c = state.reps.len();
                    state.reps.push(m.clone());
                    state.members.push(Vec::new());
                    match &mut state.index {
                        Index::Ranked(u, ranked) => ranked.push(u.compile(m)),
                        Index::Prints(by_print) => by_print.entry(self.fingerprint(m)).or_default().push(c),
                    }
                    c
                }
            };
            state.members[c].push(m.clone());
            state.class_of.insert(m.clone(), c);
            if let Ok(key) = m.reduce().normalize() {
                state.class_of.entry(key).or_insert(c);
            }
        }
    }

    /// The inclusion order between classes, reflexive pairs included.
    pub fn order(&self, classes: &[MatrixClass]) -> Vec<(usize, usize)> {
        let regular: Vec<usize> = (0..classes.len())
            .filter(|&i| classes[i].degenerate.is_none())
            .collect();
        let canon: Vec<&Matrix> = regular.iter().map(|&i| &classes[i].canonical).collect();
        let mut pairs: Vec<(usize, usize)> = self.install(|| match Universe::of(canon.iter().copied()) {
            Some(u) => {
                let compiled: Vec<Compiled> = canon.par_iter().map(|m| u.compile(m)).collect();
                (0..regular.len())
                    .into_par_iter()
                    .flat_map_iter(|a| {
                        let (compiled, regular) = (&compiled, &regular);
                        (0..regular.len())
                            .filter(move |&b| a != b && compiled[a].implies(&compiled[b].goal))
                            .map(move |b| (regular[a], regular[b]))
                    })
                    .collect()
            }
            None => {
                let prints: Vec<Fingerprint> = canon.par_iter().map(|m| self.fingerprint(m)).collect();
                let candidates: Vec<(usize, usize)> = (0..regular.len())
                    .flat_map(|a| (0..regular.len()).map(move |b| (a, b)))
                    .filter(|&(a, b)| a != b && prints[b].within(&prints[a]))
                    .collect();
                candidates
                    .par_iter()
                    .filter(|&&(a, b)| self.holds(canon[a], canon[b]))
                    .map(|&(a, b)| (regular[a], regular[b]))
                    .collect()
            }
        });
        for i in 0..classes.len() {
            pairs.push((i, i));
            for j in 0..classes.len() {
                if i != j && degenerate_leq(classes[i].degenerate, classes[j].degenerate) {
                    pairs.push((i, j));
                }
            }
        }
        pairs.sort_unstable();
        pairs.dedup();
        pairs
    }

    pub fn classify(&self, candidates: impl IntoIterator<Item = Matrix>) -> Result<ClassPoset, PosetError> {
        let classes = self.partition(candidates);
        let order = self.order(&classes);
        let hasse = hasse_reduce(classes.len(), &order)?;
        Ok(ClassPoset {
            classes,
            order,
            hasse,
        })
    }

    /// `|Mclex[n, m, k]|` for `m = 1..=m_max`, counting the preorder and
    /// all-lex classes but not the empty-matrix class.
    pub fn count_table(&self, n: usize, k: usize, m_max: usize) -> Vec<usize> {
        let candidates = enumerate(&EnumerationFilter::canonical(n, m_max, k));
        let classes = self.partition(candidates);
        let widths: Vec<usize> = classes
            .iter()
            .filter(|c| c.degenerate.is_none())
            .map(MatrixClass::min_cols)
            .collect();
        (1..=m_max)
            .map(|m| {
                let regular = widths.iter().filter(|&&w| w <= m).count();
                let preorder = usize::from(k >= 2);
                regular + preorder + 1
            })
            .collect()
    }

    /// Pairs `(i, j)` of classes of `a` and `b` determining the same class.
    pub fn matching(&self, a: &[MatrixClass], b: &[MatrixClass]) -> Vec<(usize, usize)> {
        let a_regular: Vec<usize> = (0..a.len()).filter(|&i| a[i].degenerate.is_none()).collect();
        let b_regular: Vec<usize> = (0..b.len()).filter(|&j| b[j].degenerate.is_none()).collect();
        let mut pairs: Vec<(usize, usize)> = self.install(|| {
            let ua = Universe::of(a_regular.iter().map(|&i| &a[i].canonical));
            let ub = Universe::of(b_regular.iter().map(|&j| &b[j].canonical));
            match (ua, ub) {
                (Some(ua), Some(ub)) => {
                    // each side as premises for the goals of the other
                    let compile = |u: Universe, v: Universe, cs: &[MatrixClass], idx: &[usize]| {
                        idx.par_iter()
                            .map(|&i| (u.goal(&cs[i].canonical), v.premise(&cs[i].canonical)))
                            .collect::<Vec<_>>()
                    };
                    let left = compile(ua, ub, a, &a_regular);
                    let right = compile(ub, ua, b, &b_regular);
                    (0..a_regular.len())
                        .into_par_iter()
                        .filter_map(|x| {
                            let (goal, premise) = &left[x];
                            (0..b_regular.len())
                                .find(|&y| premise.implies(&right[y].0) && right[y].1.implies(goal))
                                .map(|y| (a_regular[x], b_regular[y]))
                        })
                        .collect()
                }
                _ => {
                    let b_prints: Vec<Fingerprint> = b_regular
                        .par_iter()
                        .map(|&j| self.fingerprint(&b[j].canonical))
                        .collect();
                    let mut index: HashMap<&Fingerprint, Vec<usize>> = HashMap::new();
                    for (pos, fp) in b_prints.iter().enumerate() {
                        index.entry(fp).or_default().push(b_regular[pos]);
                    }
                    a_regular
                        .par_iter()
                        .filter_map(|&i| {
                            let fp = self.fingerprint(&a[i].canonical);
                            let js = index.get(&fp)?;
                            let j = js.iter().copied().find(|&j| self.equivalent(&a[i].canonical, &b[j].canonical))?;
                            Some((i, j))
                        })
                        .collect()
                }
            }
        });
        for (i, class) in a.iter().enumerate() {
            if let Some(tag) = class.degenerate {
                if let Some(j) = b.iter().position(|c| c.degenerate == Some(tag)) {
                    pairs.push((i, j));
                }
            }
        }
        pairs.sort_unstable();
        pairs
    }

    /// Classes present in both posets, with the inclusion order between them.
    pub fn intersect(&self, a: &ClassPoset, b: &ClassPoset) -> Result<ClassPoset, PosetError> {
        let matches = self.matching(&a.classes, &b.classes);
        let mut merged: Vec<(usize, MatrixClass)> = matches
            .iter()
            .map(|&(i, j)| {
                let (x, y) = (&a.classes[i], &b.classes[j]);
                let mut members = x.members.clone();
                members.extend(y.members.iter().cloned());
                members.sort_by_cached_key(Matrix::canonical_key);
                members.dedup();
                let class = MatrixClass {
                    canonical: members[0].clone(),
                    members,
                    degenerate: x.degenerate,
                };
                (i, class)
            })
            .collect();
        merged.sort_by_cached_key(|(_, c)| (c.degenerate.is_some(), c.degenerate, c.canonical.canonical_key()));
        let position: HashMap<usize, usize> = merged.iter().enumerate().map(|(p, (i, _))| (*i, p)).collect();
        let mut order: Vec<(usize, usize)> = a
            .order
            .iter()
            .filter_map(|(i, j)| Some((*position.get(i)?, *position.get(j)?)))
            .collect();
        order.sort_unstable();
        let classes: Vec<MatrixClass> = merged.into_iter().map(|(_, c)| c).collect();
        let hasse = hasse_reduce(classes.len(), &order)?;
        Ok(ClassPoset {
            classes,
            order,
            hasse,
        })
    }
}

fn degenerate_leq(a: Option<DegenerateTag>, b: Option<DegenerateTag>) -> bool {
    use DegenerateTag::*;
    match (a, b) {
        (Some(Terminal), _) => true,
        (_, Some(Terminal)) => false,
        (Some(Preorder), _) => true,
        (_, Some(Preorder)) => false,
        (_, Some(AllLex)) => true,
        (Some(AllLex), _) => false,
        (None, None) => false,
    }
}

/// [`Classifier::classify`] with default settings.
pub fn classify(candidates: impl IntoIterator<Item = Matrix>) -> ClassPoset {
    Classifier::new()
        .classify(candidates)
        .expect("decided inclusions form a partial order")
}

/// [`Classifier::count_table`] with default settings.
pub fn count_table(n: usize, k: usize, m_max: usize) -> Vec<usize> {
    Classifier::new().count_table(n, k, m_max)
}

/// [`Classifier::intersect`] with default settings.
pub fn box_intersect(a: &ClassPoset, b: &ClassPoset) -> ClassPoset {
    Classifier::new()
        .intersect(a, b)
        .expect("restriction of a partial order is a partial order")
}

/// Class poset of `Mclex[n, m, k]`, degenerate classes included or not.
pub fn box_poset(n: usize, m: usize, k: usize, include_degenerate: bool) -> ClassPoset {
    let f = if include_degenerate {
        EnumerationFilter::with_degenerates(n, m, k)
    } else {
        EnumerationFilter::canonical(n, m, k)
    };
    classify(enumerate(&f))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u8]]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn fingerprint_is_invariant_within_a_class() {
        let c = Classifier::new();
        let a = m(&[&[0, 1, 1], &[1, 1, 0]]);
        let b = m(&[&[1, 0, 1, 1], &[0, 1, 1, 0]]);
        assert!(c.equivalent(&a, &b));
        assert!(c.fingerprint(&a) == c.fingerprint(&b));
    }

    #[test]
    fn one_row_box_has_two_classes() {
        for mm in 1..=4 {
            let p = box_poset(1, mm, 2, true);
            assert_eq!(p.len(), 2, "m = {mm}");
            assert_eq!(p.hasse, vec![(0, 1)]);
        }
    }

    #[test]
    fn two_row_box_is_maltsev_only() {
        let p = box_poset(2, 5, 3, false);
        assert_eq!(p.len(), 1);
        assert_eq!(p.classes[0].canonical, m(&[&[0, 1, 1], &[1, 0, 1]]));
    }

    #[test]
    fn degenerate_order() {
        use DegenerateTag::*;
        assert!(degenerate_leq(Some(Terminal), Some(AllLex)));
        assert!(degenerate_leq(Some(Preorder), None));
        assert!(degenerate_leq(None, Some(AllLex)));
        assert!(!degenerate_leq(Some(AllLex), None));
        assert!(!degenerate_leq(None, None));
    }

    #[test]
    fn self_intersection_is_identity() {
        let p = box_poset(3, 3, 2, true);
        let q = box_intersect(&p, &p);
        assert_eq!(q, p);
    }
}
