//! Deciding `mclex S ⊆ mclex U` by saturating the columns of each goal.

mod oracle;
pub(crate) mod rules;
pub(crate) mod search;
mod tableau;

use std::collections::HashSet;

use serde::Serialize;

use crate::columns::ColumnSet;
use crate::linkage::is_trivial;
use crate::matrix::Matrix;

pub use oracle::{oracle_functional, oracle_implies};
pub use tableau::{check_tableau, verify_tableau, DerivationStep, LexTableau, RowSource, TableauDefect};

/// A finite set of matrices, deduplicated by normalized form. Members keep
/// the shape they were inserted with; the first of several equal-normal-form
/// matrices is retained. All empty matrices count as one member.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MatrixSet {
    members: Vec<Matrix>,
    keys: HashSet<Option<Matrix>>,
}

fn set_key(m: &Matrix) -> Option<Matrix> {
    m.normalize().ok()
}

impl MatrixSet {
    pub fn new() -> MatrixSet {
        MatrixSet::default()
    }

    /// Adds `m` unless an equal normal form is present; returns whether it was added.
    pub fn insert(&mut self, m: Matrix) -> bool {
        if self.keys.insert(set_key(&m)) {
            self.members.push(m);
            true
        } else {
            false
        }
    }

    pub fn members(&self) -> &[Matrix] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Matrix> {
        self.members.iter()
    }
}

impl FromIterator<Matrix> for MatrixSet {
    fn from_iter<I: IntoIterator<Item = Matrix>>(iter: I) -> Self {
        let mut s = MatrixSet::new();
        for m in iter {
            s.insert(m);
        }
        s
    }
}

impl From<Vec<Matrix>> for MatrixSet {
    fn from(v: Vec<Matrix>) -> Self {
        v.into_iter().collect()
    }
}

impl From<Matrix> for MatrixSet {
    fn from(m: Matrix) -> Self {
        std::iter::once(m).collect()
    }
}

/// The columns of `n` as a relation over `{0..max+1}`.
pub fn col(n: &Matrix) -> ColumnSet {
    ColumnSet::of_matrix(n)
}

/// One expansion round `S(R)`.
pub fn expand_once(s: &MatrixSet, r: &ColumnSet) -> ColumnSet {
    let premises: Vec<&Matrix> = s.iter().collect();
    search::expand(&premises, r)
}

/// The least relation containing `col(n)` that is closed under every
/// interpretation of every member of `s`.
pub fn closure(s: &MatrixSet, n: &Matrix) -> ColumnSet {
    let premises: Vec<&Matrix> = s.iter().collect();
    search::fixpoint(&premises, col(n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ShortCircuit {
    EmptyInS,
    TrivialInS,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureWitness {
    /// Goal `goal` (index into `U`) is an empty matrix.
    EmptyMatrixInU { goal: usize },
    /// The saturated columns of goal `goal` lack the zero tuple.
    Saturated { goal: usize, closure: ColumnSet },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    /// One tableau per goal, in goal order, when the closure step ran.
    pub certificates: Vec<LexTableau>,
    pub failure: Option<FailureWitness>,
    pub short_circuit: Option<ShortCircuit>,
}

impl Verdict {
    fn short(holds: bool, short_circuit: Option<ShortCircuit>, failure: Option<FailureWitness>) -> Verdict {
        Verdict {
            holds,
            certificates: Vec::new(),
            failure,
            short_circuit,
        }
    }
}

enum Precheck {
    Holds(ShortCircuit),
    EmptyGoal(usize),
    Saturate,
}

fn precheck(s: &[Matrix], u: &[Matrix]) -> Precheck {
    if s.iter().any(Matrix::is_empty) {
        return Precheck::Holds(ShortCircuit::EmptyInS);
    }
    if let Some(goal) = u.iter().position(Matrix::is_empty) {
        return Precheck::EmptyGoal(goal);
    }
    if s.iter().any(is_trivial) {
        return Precheck::Holds(ShortCircuit::TrivialInS);
    }
    Precheck::Saturate
}

/// Decides `mclex S ⊆ mclex U`, with a certificate per goal when it holds.
pub fn implies(s: &MatrixSet, u: &MatrixSet) -> Verdict {
    let members = s.members();
    match precheck(members, u.members()) {
        Precheck::Holds(sc) => return Verdict::short(true, Some(sc), None),
        Precheck::EmptyGoal(goal) => {
            return Verdict::short(false, None, Some(FailureWitness::EmptyMatrixInU { goal }))
        }
        Precheck::Saturate => {}
    }
    let premises: Vec<&Matrix> = members.iter().collect();
    let mut certificates = Vec::with_capacity(u.len());
    for (goal, n) in u.iter().enumerate() {
        let sat = search::saturate(&premises, col(n), true);
        if !sat.reached_zero {
            return Verdict::short(
                false,
                None,
                Some(FailureWitness::Saturated {
                    goal,
                    closure: sat.set,
                }),
            );
        }
        certificates.push(tableau::certificate(members, n, &sat));
    }
    Verdict {
        holds: true,
        certificates,
        failure: None,
        short_circuit: None,
    }
}

/// The verdict of [`implies`] without building certificates or witnesses.
pub fn holds(s: &[Matrix], u: &[Matrix]) -> bool {
    match precheck(s, u) {
        Precheck::Holds(_) => true,
        Precheck::EmptyGoal(_) => false,
        Precheck::Saturate => {
            let premises: Vec<&Matrix> = s.iter().collect();
            u.iter()
                .all(|n| search::reaches_zero(&premises, col(n)))
        }
    }
}

/// `mclex{a} = mclex{b}`.
pub fn equivalent(a: &Matrix, b: &Matrix) -> bool {
    holds(std::slice::from_ref(a), std::slice::from_ref(b))
        && holds(std::slice::from_ref(b), std::slice::from_ref(a))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u8]]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    fn maltsev() -> Matrix {
        m(&[&[0, 1, 1], &[1, 1, 0]])
    }

    #[test]
    fn col_examples() {
        assert_eq!(col(&maltsev()).len(), 3);
        assert!(col(&Matrix::empty(2)).is_empty());
    }

    #[test]
    fn expand_once_adds_zero_by_identity() {
        let s = MatrixSet::from(maltsev());
        let r = col(&maltsev());
        let e = expand_once(&s, &r);
        assert!(e.contains(&[0, 0]));
        assert!(r.is_subset(&e));
    }

    #[test]
    fn reflexive_with_certificate() {
        let s = MatrixSet::from(maltsev());
        let v = implies(&s, &s);
        assert!(v.holds);
        assert_eq!(v.certificates.len(), 1);
        assert!(verify_tableau(&v.certificates[0]));
        assert_eq!(v.certificates[0].steps.len(), 1);
    }

    #[test]
    fn majority_does_not_give_maltsev() {
        let v = implies(&Matrix::diagonal(3).into(), &maltsev().into());
        assert!(!v.holds);
        match v.failure {
            Some(FailureWitness::Saturated { goal: 0, closure }) => assert!(!closure.contains_zero()),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn short_circuits() {
        let empty = MatrixSet::from(Matrix::empty(2));
        let v = implies(&empty, &maltsev().into());
        assert_eq!((v.holds, v.short_circuit), (true, Some(ShortCircuit::EmptyInS)));
        let v = implies(&maltsev().into(), &empty);
        assert_eq!(v.failure, Some(FailureWitness::EmptyMatrixInU { goal: 0 }));
        let v = implies(&Matrix::diagonal(2).into(), &Matrix::diagonal(4).into());
        assert_eq!((v.holds, v.short_circuit), (true, Some(ShortCircuit::TrivialInS)));
    }

    #[test]
    fn goal_with_zero_column_needs_no_steps() {
        let goal = m(&[&[0, 1], &[0, 0]]);
        let v = implies(&Matrix::diagonal(3).into(), &goal.into());
        assert!(v.holds);
        assert!(v.certificates[0].steps.is_empty());
        assert!(verify_tableau(&v.certificates[0]));
    }

    #[test]
    fn set_dedups_by_normal_form() {
        let s: MatrixSet = vec![maltsev(), m(&[&[1, 1, 0], &[0, 1, 1]]), Matrix::empty(1), Matrix::empty(3)].into();
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn equivalent_examples() {
        assert!(equivalent(&maltsev(), &m(&[&[1, 0, 1], &[0, 1, 1]])));
        assert!(!equivalent(&maltsev(), &Matrix::diagonal(3)));
    }
}
