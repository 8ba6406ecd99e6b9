//! Lex-tableaux: replayable certificates for a positive implication verdict,
//! and their independent verifier.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::search::Saturation;
use crate::matrix::Matrix;

/// Where a target row of a derivation step comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowSource {
    /// Index into the tableau's premise list.
    pub matrix: usize,
    pub row: usize,
    /// Image of each value of the premise's declared alphabet.
    pub map: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationStep {
    pub rows: Vec<RowSource>,
    pub derived: Vec<u8>,
}

impl DerivationStep {
    /// The columns `(f_1(M[r_1][j]), .., f_n(M[r_n][j]))`, or `None` when the
    /// step does not fit the premise list.
    pub fn left_columns(&self, premise: &[Matrix]) -> Option<Vec<Vec<u8>>> {
        let first = self.rows.first()?;
        let m = premise.get(first.matrix)?;
        let mut cols = vec![Vec::with_capacity(self.rows.len()); m.cols()];
        for src in &self.rows {
            if src.matrix != first.matrix || src.row >= m.rows() {
                return None;
            }
            for (j, &v) in m.row(src.row).iter().enumerate() {
                cols[j].push(*src.map.get(v as usize)?);
            }
        }
        Some(cols)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexTableau {
    pub premise: Vec<Matrix>,
    pub goal: Matrix,
    pub steps: Vec<DerivationStep>,
}

/// Why a tableau was rejected. Step indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableauDefect {
    #[error("step {step}: {found} rows given, the goal has {expected}")]
    RowCount {
        step: usize,
        expected: usize,
        found: usize,
    },
    #[error("step {step}: premise matrix {index} does not exist")]
    UnknownMatrix { step: usize, index: usize },
    #[error("step {step}: rows are drawn from more than one premise matrix")]
    MixedMatrices { step: usize },
    #[error("step {step}, target row {target}: source row {row} does not exist")]
    UnknownRow {
        step: usize,
        target: usize,
        row: usize,
    },
    #[error("step {step}, target row {target}: map has {found} entries, the source alphabet has {expected}")]
    MapNotTotal {
        step: usize,
        target: usize,
        expected: usize,
        found: usize,
    },
    #[error("step {step}, target row {target}: map value {value} lies outside the goal alphabet 0..{alphabet}")]
    MapValueOutOfRange {
        step: usize,
        target: usize,
        value: u8,
        alphabet: usize,
    },
    #[error("step {step}: derived column {found:?} differs from the images of 0, {expected:?}")]
    DerivedMismatch {
        step: usize,
        expected: Vec<u8>,
        found: Vec<u8>,
    },
    #[error("step {step}: left column {column:?} is not available")]
    Unavailable { step: usize, column: Vec<u8> },
    #[error("step {step}: derived column {column:?} was already available")]
    NotNew { step: usize, column: Vec<u8> },
    #[error("final derived column {0:?} is not all zeros")]
    FinalNotZero(Vec<u8>),
    #[error("no steps, and the goal has no zero column")]
    NoSteps,
}

/// Checks a tableau, reporting the first defect found.
///
/// A tableau without steps is accepted exactly when the goal already has a
/// zero column.
pub fn check_tableau(t: &LexTableau) -> Result<(), TableauDefect> {
    let n = t.goal.rows();
    let k = t.goal.alphabet();
    let mut available: HashSet<Vec<u8>> = t.goal.columns().into_iter().collect();
    let zero = vec![0u8; n];
    if t.steps.is_empty() {
        return if available.contains(&zero) {
            Ok(())
        } else {
            Err(TableauDefect::NoSteps)
        };
    }
    for (step, s) in t.steps.iter().enumerate() {
        if s.rows.len() != n {
            return Err(TableauDefect::RowCount {
                step,
                expected: n,
                found: s.rows.len(),
            });
        }
        let index = s.rows[0].matrix;
        let m = t
            .premise
            .get(index)
            .ok_or(TableauDefect::UnknownMatrix { step, index })?;
        for (target, src) in s.rows.iter().enumerate() {
            if src.matrix != index {
                return Err(TableauDefect::MixedMatrices { step });
            }
            if src.row >= m.rows() {
                return Err(TableauDefect::UnknownRow {
                    step,
                    target,
                    row: src.row,
                });
            }
            if src.map.len() != m.alphabet() {
                return Err(TableauDefect::MapNotTotal {
                    step,
                    target,
                    expected: m.alphabet(),
                    found: src.map.len(),
                });
            }
            if let Some(&value) = src.map.iter().find(|&&v| v as usize >= k) {
                return Err(TableauDefect::MapValueOutOfRange {
                    step,
                    target,
                    value,
                    alphabet: k,
                });
            }
        }
        let expected: Vec<u8> = s.rows.iter().map(|src| src.map[0]).collect();
        if s.derived != expected {
            return Err(TableauDefect::DerivedMismatch {
                step,
                expected,
                found: s.derived.clone(),
            });
        }
        let left = s.left_columns(&t.premise).expect("validated above");
        if let Some(column) = left.into_iter().find(|c| !available.contains(c)) {
            return Err(TableauDefect::Unavailable { step, column });
        }
        if !available.insert(s.derived.clone()) {
            return Err(TableauDefect::NotNew {
                step,
                column: s.derived.clone(),
            });
        }
    }
    let last = &t.steps[t.steps.len() - 1].derived;
    if *last != zero {
        return Err(TableauDefect::FinalNotZero(last.clone()));
    }
    Ok(())
}

pub fn verify_tableau(t: &LexTableau) -> bool {
    check_tableau(t).is_ok()
}

/// Back-chains from the zero tuple through the steps whose derived columns
/// it consumed, keeping derivation order.
pub(crate) fn certificate(premise: &[Matrix], goal: &Matrix, sat: &Saturation) -> LexTableau {
    debug_assert!(sat.reached_zero);
    let mut keep: Vec<usize> = Vec::new();
    let mut visited = HashSet::new();
    let mut pending = vec![0usize];
    while let Some(code) = pending.pop() {
        if sat.initial.contains_code(code) || !visited.insert(code) {
            continue;
        }
        let idx = sat.origin[&code];
        keep.push(idx);
        let rec = &sat.steps[idx];
        let p = &sat.premises[rec.premise];
        let k = sat.set.alphabet();
        for j in 0..p.cols {
            let col = rec.images.iter().fold(0usize, |acc, &id| {
                acc * k + p.images[id as usize].values[j] as usize
            });
            pending.push(col);
        }
    }
    keep.sort_unstable();
    let steps = keep
        .into_iter()
        .map(|idx| {
            let rec = &sat.steps[idx];
            let p = &sat.premises[rec.premise];
            DerivationStep {
                rows: rec
                    .images
                    .iter()
                    .map(|&id| {
                        let img = &p.images[id as usize];
                        RowSource {
                            matrix: p.matrix,
                            row: img.row,
                            map: img.map.clone(),
                        }
                    })
                    .collect(),
                derived: sat.set.decode(rec.derived),
            }
        })
        .collect();
    LexTableau {
        premise: premise.to_vec(),
        goal: goal.clone(),
        steps,
    }
}
