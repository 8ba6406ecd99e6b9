//! Brute-force semantic checks used to test the decision procedure.
//!
//! These share no code with the closure search: they enumerate maps and
//! relations over a small set `{0..x-1}` directly.

use std::collections::HashSet;

use crate::error::OracleError;
use crate::linkage::is_trivial;
use crate::matrix::Matrix;

const MAX_SET: usize = 4;
const MAX_RELATION_SPACE: usize = 16;
const MAX_INTERPRETATIONS: u64 = 1 << 26;

/// All maps `{0..domain-1} -> {0..x-1}`, as vectors.
fn all_maps(domain: usize, x: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..domain {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..x as u8).map(move |v| {
                    let mut next = prefix.clone();
                    next.push(v);
                    next
                })
            })
            .collect();
    }
    out
}

fn checked_pow(base: usize, exp: usize) -> Option<u64> {
    (base as u64).checked_pow(exp as u32)
}

/// Whether `m` is functional in a set of size `x`: no two rows, pushed
/// through maps `f` and `g`, agree while `f(0) != g(0)`.
pub fn oracle_functional(m: &Matrix, x: usize) -> Result<bool, OracleError> {
    if x > MAX_SET {
        return Err(OracleError::GuardExceeded(format!("set size {x} > {MAX_SET}")));
    }
    if m.is_empty() {
        return Err(OracleError::EmptyPremise(0));
    }
    let k = m.alphabet();
    match checked_pow(x, k) {
        Some(c) if c <= 1 << 16 => {}
        _ => {
            return Err(OracleError::GuardExceeded(format!(
                "{x}^{k} maps per row"
            )))
        }
    }
    let maps = all_maps(k, x);
    for r in 0..m.rows() {
        for s in 0..m.rows() {
            for f in &maps {
                let left: Vec<u8> = m.row(r).iter().map(|&v| f[v as usize]).collect();
                for g in &maps {
                    if f[0] != g[0] && m.row(s).iter().map(|&v| g[v as usize]).eq(left.iter().copied()) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Interpretations as (bitmask of left columns, code of the right column)
/// over tuples in `{0..x-1}^n`.
type Rule = (u16, u8);

fn code(t: impl Iterator<Item = u8>, x: usize) -> usize {
    t.fold(0, |acc, v| acc * x + v as usize)
}

/// Reductions of `m` to `n` rows: any `n` rows with repetition, each through
/// its own map.
fn sharp_rules(m: &Matrix, n: usize, x: usize) -> Result<Vec<Rule>, OracleError> {
    let per_row = (m.rows() as u64).saturating_mul(checked_pow(x, m.alphabet()).unwrap_or(u64::MAX));
    let total = per_row.checked_pow(n as u32).unwrap_or(u64::MAX);
    if total > MAX_INTERPRETATIONS {
        return Err(OracleError::GuardExceeded(format!(
            "{total} reductions of a {}-row premise",
            m.rows()
        )));
    }
    let maps = all_maps(m.alphabet(), x);
    // (row images as tuples per column, image of 0) for every (row, map)
    let choices: Vec<(Vec<u8>, u8)> = (0..m.rows())
        .flat_map(|r| {
            maps.iter()
                .map(move |f| (m.row(r).iter().map(|&v| f[v as usize]).collect(), f[0]))
        })
        .collect();
    let mut rules = HashSet::new();
    let mut pick = vec![0usize; n];
    loop {
        let mut left = 0u16;
        for j in 0..m.cols() {
            left |= 1 << code(pick.iter().map(|&c| choices[c].0[j]), x);
        }
        let right = code(pick.iter().map(|&c| choices[c].1), x) as u8;
        rules.insert((left, right));
        let mut i = n;
        loop {
            if i == 0 {
                let mut v: Vec<Rule> = rules.into_iter().collect();
                v.sort_unstable();
                return Ok(v);
            }
            i -= 1;
            pick[i] += 1;
            if pick[i] < choices.len() {
                break;
            }
            pick[i] = 0;
        }
    }
}

/// Interpretations of `n` through a single map.
fn closed_rules(n: &Matrix, x: usize) -> Vec<Rule> {
    let mut rules: Vec<Rule> = all_maps(n.alphabet(), x)
        .into_iter()
        .map(|f| {
            let mut left = 0u16;
            for j in 0..n.cols() {
                left |= 1 << code(n.column(j).iter().map(|&v| f[v as usize]), x);
            }
            let right = code(std::iter::repeat_n(f[0], n.rows()), x) as u8;
            (left, right)
        })
        .collect();
    rules.sort_unstable();
    rules.dedup();
    rules
}

fn respects(relation: u32, rules: &[Rule]) -> bool {
    rules
        .iter()
        .all(|&(left, right)| relation & left as u32 != left as u32 || relation >> right & 1 == 1)
}

/// Whether every relation on `{0..x-1}` that is sharp for each member of `s`
/// is closed under each member of `u`.
pub fn oracle_implies(s: &[Matrix], u: &[Matrix], x: usize) -> Result<bool, OracleError> {
    for (i, m) in s.iter().enumerate() {
        if m.is_empty() {
            return Err(OracleError::EmptyPremise(i));
        }
        if is_trivial(m) {
            return Err(OracleError::TrivialPremise(i));
        }
    }
    for goal in u {
        let n = goal.rows();
        let space = match checked_pow(x, n) {
            Some(c) if c as usize <= MAX_RELATION_SPACE => c as usize,
            _ => {
                return Err(OracleError::GuardExceeded(format!(
                    "{x}^{n} tuples exceed {MAX_RELATION_SPACE}"
                )))
            }
        };
        if checked_pow(x, goal.alphabet()).is_none_or(|c| c > 1 << 20) {
            return Err(OracleError::GuardExceeded(format!(
                "{x}^{} goal interpretations",
                goal.alphabet()
            )));
        }
        let mut sharp = Vec::new();
        for m in s {
            sharp.extend(sharp_rules(m, n, x)?);
        }
        let closed = closed_rules(goal, x);
        for relation in 0..(1u32 << space) {
            if respects(relation, &sharp) && !respects(relation, &closed) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u8]]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn functional_examples() {
        let maltsev = m(&[&[0, 1, 1], &[1, 1, 0]]);
        assert!(oracle_functional(&maltsev, 2).unwrap());
        assert!(!oracle_functional(&m(&[&[1]]), 2).unwrap());
        assert!(oracle_functional(&m(&[&[1]]), 1).unwrap());
        assert!(oracle_functional(&Matrix::diagonal(2), 1).unwrap());
        assert!(!oracle_functional(&Matrix::diagonal(2), 2).unwrap());
        assert!(matches!(
            oracle_functional(&maltsev, 5),
            Err(OracleError::GuardExceeded(_))
        ));
    }

    #[test]
    fn implies_examples() {
        let maltsev = m(&[&[0, 1, 1], &[1, 1, 0]]);
        let d3 = Matrix::diagonal(3);
        assert!(oracle_implies(&[maltsev.clone()], &[maltsev.clone()], 2).unwrap());
        assert!(!oracle_implies(&[d3.clone()], &[maltsev.clone()], 2).unwrap());
        assert_eq!(
            oracle_implies(&[Matrix::diagonal(2)], &[maltsev.clone()], 2),
            Err(OracleError::TrivialPremise(0))
        );
        assert!(matches!(
            oracle_implies(&[maltsev], &[Matrix::diagonal(5)], 2),
            Err(OracleError::GuardExceeded(_))
        ));
    }
}
