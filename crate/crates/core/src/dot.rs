//! Graphviz rendering of weighted dual graphs.

use std::fmt::Write;

use num_bigint::BigInt;
use num_traits::One;

use crate::dual_graph::WeightedDualGraph;

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Vertices in name order labelled `name (self²=w)`; an edge of
/// multiplicity `m` is written as `m` parallel edge lines.
pub fn export_dot(g: &WeightedDualGraph) -> String {
    let mut out = String::from("graph dual {\n");
    for v in g.vertices() {
        let label = format!("{} (self²={})", v.name, v.self_intersection);
        writeln!(out, "  {} [label={}];", quote(&v.name), quote(&label)).unwrap();
    }
    for (a, b, m) in g.edges() {
        let mut k = BigInt::one();
        while &k <= m {
            writeln!(out, "  {} -- {};", quote(a), quote(b)).unwrap();
            k += 1;
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_vertex() {
        let g = WeightedDualGraph::from_parts(&[("E0", -5)], &[]).unwrap();
        assert_eq!(export_dot(&g), "graph dual {\n  \"E0\" [label=\"E0 (self²=-5)\"];\n}\n");
    }

    #[test]
    fn multi_edges_and_quoting() {
        let g = WeightedDualGraph::from_parts(&[("b\"x", -2), ("a", -1)], &[("a", "b\"x", 2)]).unwrap();
        let dot = export_dot(&g);
        assert_eq!(dot.matches("\"a\" -- \"b\\\"x\";").count(), 2);
        assert!(dot.find("\"a\" [").unwrap() < dot.find("\"b\\\"x\" [").unwrap());
        assert_eq!(dot, export_dot(&g.clone()));
    }
}
