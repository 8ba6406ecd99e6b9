mod common;

use common::invariants::{run, suite};

fn check(name: &str) {
    let (_, property) = suite().into_iter().find(|(n, _)| *n == name).expect("known property");
    if let Err(e) = run(property) {
        panic!("{name}: {e}");
    }
}

#[test]
fn closure_is_idempotent() {
    check("closure is idempotent");
}

#[test]
fn closure_is_monotone() {
    check("closure is monotone");
}

#[test]
fn implication_is_reflexive() {
    check("implication is reflexive");
}

#[test]
fn implication_is_transitive() {
    check("implication is transitive");
}

#[test]
fn product_is_the_conjunction() {
    check("product is the conjunction");
}

#[test]
fn permutations_keep_the_class() {
    check("permutations keep the class");
}

#[test]
fn duplicates_keep_the_class() {
    check("duplicates keep the class");
}

#[test]
fn widening_keeps_the_class() {
    check("widening keeps the class");
}

#[test]
fn normalizing_keeps_the_class() {
    check("normalizing keeps the class");
}

#[test]
fn reduction_keeps_the_class() {
    check("reduction keeps the class");
}

#[test]
fn suite_is_complete() {
    assert_eq!(suite().len(), 10);
}
