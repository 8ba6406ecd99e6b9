//! Invariants of the decision procedure as property tests, shared by the
//! properties target and the acceptance suite.

use mclex::{closure, equivalent, holds, ColumnSet, Matrix, MatrixSet};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

pub const CASES: u32 = 1000;

pub type Property = fn(&mut TestRunner) -> Result<(), String>;

/// Every property, by name.
pub fn suite() -> Vec<(&'static str, Property)> {
    vec![
        ("closure is idempotent", closure_is_idempotent),
        ("closure is monotone", closure_is_monotone),
        ("implication is reflexive", implication_is_reflexive),
        ("implication is transitive", implication_is_transitive),
        ("product is the conjunction", product_is_the_conjunction),
        ("permutations keep the class", permutations_keep_the_class),
        ("duplicates keep the class", duplicates_keep_the_class),
        ("widening keeps the class", widening_keeps_the_class),
        ("normalizing keeps the class", normalizing_keeps_the_class),
        ("reduction keeps the class", reduction_keeps_the_class),
    ]
}

/// Runs one property over [`CASES`] cases with a fixed seed.
pub fn run(property: Property) -> Result<(), String> {
    let config = Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    };
    property(&mut TestRunner::new_with_rng(config, proptest::test_runner::TestRng::deterministic_rng(
        proptest::test_runner::RngAlgorithm::ChaCha,
    )))
}

/// Matrices with at most `n` rows and `m` columns over `{0..k-1}`.
fn matrix(n: usize, m: usize, k: u8) -> impl Strategy<Value = Matrix> {
    (1..=n, 1..=m).prop_flat_map(move |(rows, cols)| {
        prop::collection::vec(prop::collection::vec(0..k, cols), rows)
            .prop_map(|grid| Matrix::from_rows(&grid).unwrap())
    })
}

fn small() -> impl Strategy<Value = Matrix> {
    matrix(3, 4, 3)
}

fn set(ms: &[&Matrix]) -> MatrixSet {
    ms.iter().map(|m| (*m).clone()).collect()
}

/// The matrix whose columns are the members of `r`.
fn matrix_of(r: &ColumnSet) -> Matrix {
    let columns: Vec<Vec<u8>> = r.iter().collect();
    let rows: Vec<Vec<u8>> = (0..r.arity()).map(|i| columns.iter().map(|c| c[i]).collect()).collect();
    Matrix::from_rows(&rows).unwrap().with_alphabet(r.alphabet()).unwrap()
}

fn implies(a: &Matrix, b: &Matrix) -> bool {
    holds(std::slice::from_ref(a), std::slice::from_ref(b))
}

/// `m` with rows and columns reordered by rotations.
fn rotate(m: &Matrix, by_rows: usize, by_cols: usize) -> Matrix {
    let rows: Vec<usize> = (0..m.rows()).map(|i| (i + by_rows) % m.rows()).collect();
    let cols: Vec<usize> = (0..m.cols()).map(|j| (j + by_cols) % m.cols()).collect();
    m.select_rows(&rows).select_cols(&cols)
}

fn done(r: Result<(), proptest::test_runner::TestError<impl std::fmt::Debug>>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

fn closure_is_idempotent(runner: &mut TestRunner) -> Result<(), String> {
    done(runner.run(&(small(), small()), |(s, n)| {
        let r = closure(&set(&[&s]), &n);
        let again = closure(&set(&[&s]), &matrix_of(&r));
        prop_assert_eq!(again, r);
        Ok(())
    }))
}

fn closure_is_monotone(runner: &mut TestRunner) -> Result<(), String> {
    done(runner.run(&(small(), small(), small(), 0usize..4), |(s, extra, n, more)| {
        let base = closure(&set(&[&s]), &n);
        // more premises
        prop_assert!(base.is_subset(&closure(&set(&[&s, &extra]), &n)));
        // more starting columns: the last column repeated, then changed
        let mut bigger = n.to_rows();
        for row in bigger.iter_mut() {
            let last = *row.last().unwrap();
            row.extend(std::iter::repeat_n(last, more));
            if more > 0 {
                *row.last_mut().unwrap() = (last + 1) % n.alphabet() as u8;
            }
        }
        let bigger = Matrix::from_rows(&bigger).unwrap().with_alphabet(n.alphabet()).unwrap();
        prop_assert!(base.is_subset(&closure(&set(&[&s]), &bigger)));
        Ok(())
    }))
}

fn implication_is_reflexive(runner: &mut TestRunner) -> Result<(), String> {
    done(runner.run(&small(), |m| {
        prop_assert!(implies(&m, &m));
        Ok(())
    }))
}

fn implication_is_transitive(runner: &mut TestRunner) -> Result<(), String> {
    let m = || matrix(3, 3, 2);
    done(runner.run(&(m(), m(), m()), |(a, b, c)| {
        if implies(&a, &b) && implies(&b, &c) {
            prop_assert!(implies(&a, &c));
        }
        Ok(())
    }))
}

fn product_is_the_conjunction(runner: &mut TestRunner) -> Result<(), String> {
    done(runner.run(&(matrix(2, 3, 3), matrix(2, 3, 3)), |(a, b)| {
        let p = Matrix::product(&[a.clone(), b.clone()]);
        prop_assert!(holds(&[a.clone(), b.clone()], std::slice::from_ref(&p)));
        prop_assert!(implies(&p, &a));
        prop_assert!(implies(&p, &b));
        Ok(())
    }))
}

fn permutations_keep_the_class(runner: &mut TestRunner) -> Result<(), String> {
    done(runner.run(&(small(), 0usize..3, 0usize..4), |(m, r, c)| {
        prop_assert!(equivalent(&m, &rotate(&m, r, c)));
        Ok(())
    }))
}

fn duplicates_keep_the_class(runner: &mut TestRunner) -> Result<(), String> {
    done(runner.run(&(small(), 0usize..3, 0usize..4), |(m, i, j)| {
        let (i, j) = (i % m.rows(), j % m.cols());
        let mut rows: Vec<usize> = (0..m.rows()).collect();
        rows.insert(i, i);
        let mut cols: Vec<usize> = (0..m.cols()).collect();
        cols.insert(j, j);
        prop_assert!(equivalent(&m, &m.select_rows(&rows)));
        prop_assert!(equivalent(&m, &m.select_cols(&cols)));
        Ok(())
    }))
}

fn widening_keeps_the_class(runner: &mut TestRunner) -> Result<(), String> {
    done(runner.run(&(small(), 1usize..3), |(m, extra)| {
        let wide = m.with_alphabet(m.alphabet() + extra).unwrap();
        prop_assert!(equivalent(&m, &wide));
        Ok(())
    }))
}

fn normalizing_keeps_the_class(runner: &mut TestRunner) -> Result<(), String> {
    done(runner.run(&small(), |m| {
        let n = m.normalize().unwrap();
        prop_assert!(equivalent(&m, &n));
        prop_assert_eq!(n.normalize().unwrap(), n.clone());
        Ok(())
    }))
}

fn reduction_keeps_the_class(runner: &mut TestRunner) -> Result<(), String> {
    done(runner.run(&small(), |m| {
        prop_assert!(equivalent(&m, &m.reduce()));
        Ok(())
    }))
}
