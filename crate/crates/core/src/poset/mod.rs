//! Enumeration, classification and ordering of matrix classes in bounded boxes.

mod cache;
mod classify;
mod enumerate;
mod hasse;
mod io;
mod universe;

pub use cache::{pair_key, DecisionCache, CACHE_ENV};
pub use classify::{
    box_intersect, box_poset, classify, count_table, ClassPoset, Classifier, DegenerateTag,
    MatrixClass,
};
pub use enumerate::{enumerate, for_each_candidate, EnumerationFilter};
pub use hasse::hasse_reduce;
pub use io::{poset_from_json, poset_to_dot, poset_to_json};
