//! Graphviz export of Hasse diagrams.

use std::fmt::Write;

use crate::order::FiniteLattice;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Hasse diagram of `l`, bottom at the bottom. Nodes appear in index order
/// and edges in cover order, so output is stable.
pub fn hasse_dot(l: &FiniteLattice, name: &str) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(name)).unwrap();
    writeln!(out, "  rankdir=BT;").unwrap();
    writeln!(out, "  node [shape=plaintext];").unwrap();
    for a in l.elements() {
        writeln!(out, "  n{a} [label={}];", quote(l.label(a))).unwrap();
    }
    for (a, b) in l.covers() {
        writeln!(out, "  n{a} -> n{b} [arrowhead=none];").unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_has_two_edges() {
        let dot = hasse_dot(&FiniteLattice::chain(3), "c3");
        assert_eq!(dot.matches("->").count(), 2);
        assert!(dot.starts_with("digraph \"c3\" {"));
    }

    #[test]
    fn labels_are_escaped() {
        let l = FiniteLattice::chain(2);
        assert!(hasse_dot(&l, "a\"b").contains("\"a\\\"b\""));
    }
}
