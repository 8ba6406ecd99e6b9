//! Poset exchange formats: JSON and Graphviz DOT.

use serde::{Deserialize, Serialize};

use super::classify::{ClassPoset, DegenerateTag, MatrixClass};
use super::hasse::{hasse_reduce, BitRelation};
use crate::error::FormatError;
use crate::matrix::Matrix;

#[derive(Serialize, Deserialize)]
struct ClassJson {
    canonical: Matrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    degenerate: Option<DegenerateTag>,
}

#[derive(Serialize, Deserialize)]
struct PosetJson {
    classes: Vec<ClassJson>,
    hasse: Vec<(usize, usize)>,
}

pub fn poset_to_json(p: &ClassPoset) -> String {
    let doc = PosetJson {
        classes: p
            .classes
            .iter()
            .map(|c| ClassJson {
                canonical: c.canonical.clone(),
                degenerate: c.degenerate,
            })
            .collect(),
        hasse: p.hasse.clone(),
    };
    serde_json::to_string(&doc).expect("poset serialization cannot fail")
}

/// Reads a poset written by [`poset_to_json`]. Classes come back with their
/// canonical matrix as sole member; the order is the reflexive-transitive
/// closure of the Hasse pairs.
pub fn poset_from_json(text: &str) -> Result<ClassPoset, FormatError> {
    let doc: PosetJson = serde_json::from_str(text)?;
    let size = doc.classes.len();
    if let Some(&(i, j)) = doc.hasse.iter().find(|&&(i, j)| i >= size || j >= size) {
        return Err(FormatError::Invalid(format!("hasse pair ({i}, {j}) out of range")));
    }
    let closure = BitRelation::from_pairs(size, &doc.hasse).transitive_closure();
    let mut order = closure.strict_pairs();
    order.extend((0..size).map(|i| (i, i)));
    order.sort_unstable();
    let hasse = hasse_reduce(size, &order).map_err(|e| FormatError::Invalid(e.to_string()))?;
    if hasse != {
        let mut h = doc.hasse.clone();
        h.sort_unstable();
        h.dedup();
        h
    } {
        return Err(FormatError::Invalid("hasse pairs are not a transitive reduction".into()));
    }
    let classes = doc
        .classes
        .into_iter()
        .map(|c| MatrixClass {
            members: vec![c.canonical.clone()],
            canonical: c.canonical,
            degenerate: c.degenerate,
        })
        .collect();
    Ok(ClassPoset {
        classes,
        order,
        hasse,
    })
}

/// One node per non-degenerate class, labelled by its digit grid, and one
/// edge per Hasse pair between such classes; smaller classes drawn lower.
pub fn poset_to_dot(p: &ClassPoset) -> String {
    let mut out = String::from("digraph mclex {\n  rankdir=BT;\n  node [shape=box, fontname=\"monospace\"];\n");
    for (i, c) in p.nondegenerate() {
        let label = c.canonical.to_string().replace('\n', "\\n");
        out.push_str(&format!("  c{i} [label=\"{label}\"];\n"));
    }
    for &(i, j) in &p.hasse {
        if p.classes[i].degenerate.is_none() && p.classes[j].degenerate.is_none() {
            out.push_str(&format!("  c{i} -> c{j};\n"));
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::box_poset;

    #[test]
    fn json_roundtrip() {
        let p = box_poset(2, 3, 2, true);
        let text = poset_to_json(&p);
        let back = poset_from_json(&text).unwrap();
        assert_eq!(back.order, p.order);
        assert_eq!(back.hasse, p.hasse);
        assert_eq!(poset_to_json(&back), text);
    }

    #[test]
    fn dot_omits_degenerates() {
        let p = box_poset(2, 3, 2, true);
        let dot = poset_to_dot(&p);
        assert_eq!(dot.matches("[label=").count(), 1);
        assert!(dot.contains("label=\"011\\n101\""));
        assert!(!dot.contains("->"));
    }

    #[test]
    fn rejects_bad_hasse() {
        let m = r#"{"k":2,"rows":[[0,1,1],[1,0,1]]}"#;
        let text = format!(r#"{{"classes":[{{"canonical":{m}}}],"hasse":[[0,3]]}}"#);
        assert!(poset_from_json(&text).is_err());
    }
}
