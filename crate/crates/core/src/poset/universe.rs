//! Deciding many implications inside a small box at once.
//!
//! When every goal has at most `arity` rows and `alphabet` values and the
//! tuple space fits 64 codes, a goal can be padded to `arity` rows (row
//! duplication keeps the class) and each premise compiled once per goal
//! alphabet into Horn rules. An implication is then one bitmask closure.

use crate::columns::tuple_space;
use crate::decision::rules::{self, HornRules};
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Universe {
    arity: usize,
    alphabet: usize,
}

impl Universe {
    /// The smallest universe holding all of `ms`, if it fits.
    pub fn of<'a>(ms: impl IntoIterator<Item = &'a Matrix>) -> Option<Universe> {
        let (mut arity, mut alphabet) = (0, 0);
        for m in ms {
            arity = arity.max(m.rows());
            alphabet = alphabet.max(m.used_alphabet());
        }
        let fits = arity > 0 && alphabet >= 2 && tuple_space(arity, alphabet)? <= rules::MAX_CODES;
        fits.then_some(Universe { arity, alphabet })
    }

    /// `m` as a goal. It must be non-degenerate and inside the universe.
    pub fn goal(&self, m: &Matrix) -> Goal {
        let alphabet = m.used_alphabet();
        Goal {
            alphabet,
            mask: rules::goal_mask(m, self.arity, alphabet).expect("matrix inside the universe"),
        }
    }

    /// `m` as a premise for goals of the universe. `m` itself may lie
    /// outside.
    pub fn premise(&self, m: &Matrix) -> Premise {
        Premise(
            (0..=self.alphabet)
                .map(|x| if x >= 2 { HornRules::compile(m, self.arity, x) } else { None })
                .collect(),
        )
    }

    /// `m` as premise and goal.
    pub fn compile(&self, m: &Matrix) -> Compiled {
        Compiled {
            premise: self.premise(m),
            goal: self.goal(m),
        }
    }
}

/// The padded columns of a goal over its own alphabet.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Goal {
    alphabet: usize,
    mask: u64,
}

/// Rules of one premise, indexed by goal alphabet.
pub(crate) struct Premise(Vec<Option<HornRules>>);

impl Premise {
    /// `mclex{self} ⊆ mclex{goal}`.
    pub fn implies(&self, goal: &Goal) -> bool {
        self.0[goal.alphabet]
            .as_ref()
            .expect("rules for every alphabet of the universe")
            .reaches_zero(goal.mask)
    }
}

pub(crate) struct Compiled {
    pub premise: Premise,
    pub goal: Goal,
}

impl Compiled {
    pub fn implies(&self, goal: &Goal) -> bool {
        self.premise.implies(goal)
    }
}

/// Pairwise distinct classes with the inclusion order between them, grown
/// one class at a time.
#[derive(Default)]
pub(crate) struct Ranked {
    compiled: Vec<Compiled>,
    /// `above[c]`: bitset of the classes `d != c` with `c ⊆ d`.
    above: Vec<Vec<u64>>,
    /// `below[c]`: bitset of the classes `d != c` with `d ⊆ c`.
    below: Vec<Vec<u64>>,
}

impl Ranked {
    #[cfg(test)]
    fn leq(&self, c: usize, d: usize) -> bool {
        c == d || has(&self.above[c], d)
    }

    pub fn len(&self) -> usize {
        self.compiled.len()
    }

    pub fn push(&mut self, c: Compiled) {
        let id = self.compiled.len();
        let words = (id + 1).div_ceil(64);
        for row in self.above.iter_mut().chain(&mut self.below) {
            row.resize(words, 0);
        }
        let mut above = vec![0u64; words];
        let mut below = vec![0u64; words];
        for (d, other) in self.compiled.iter().enumerate() {
            if other.implies(&c.goal) {
                set(&mut self.above[d], id);
                set(&mut below, d);
            }
            if c.implies(&other.goal) {
                set(&mut self.below[d], id);
                set(&mut above, d);
            }
        }
        self.above.push(above);
        self.below.push(below);
        self.compiled.push(c);
    }

    /// The classes in `range` below `goal` that are maximal among those. If
    /// `goal` lies in one of these classes, that class is the only maximal
    /// one; otherwise deciding `goal ⊆ c` for each is what remains.
    pub fn maximal_below(&self, goal: &Goal, range: std::ops::Range<usize>) -> Vec<usize> {
        let words = self.len().div_ceil(64);
        // Inclusion is transitive, so one decision settles a whole down-set
        // or up-set of classes.
        let mut inside = vec![0u64; words];
        let mut outside = vec![0u64; words];
        for c in range.clone() {
            if has(&inside, c) || has(&outside, c) {
                continue;
            }
            let (settled, cone) = if self.compiled[c].implies(goal) {
                (&mut inside, &self.below[c])
            } else {
                (&mut outside, &self.above[c])
            };
            set(settled, c);
            settled.iter_mut().zip(cone).for_each(|(s, x)| *s |= x);
        }
        range
            .clone()
            .filter(|&c| has(&inside, c))
            .filter(|&c| {
                self.above[c]
                    .iter()
                    .zip(&inside)
                    .enumerate()
                    .all(|(w, (a, b))| a & b & range_mask(w, &range) == 0)
            })
            .collect()
    }
}

fn set(bits: &mut [u64], i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}

fn has(bits: &[u64], i: usize) -> bool {
    bits[i / 64] >> (i % 64) & 1 == 1
}

/// The bits of word `w` that fall in `range`.
fn range_mask(w: usize, range: &std::ops::Range<usize>) -> u64 {
    let lo = range.start.saturating_sub(w * 64).min(64);
    let hi = range.end.saturating_sub(w * 64).min(64);
    let upto = |n: usize| if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    upto(hi) & !upto(lo)
}
