//! DOT export of the chain picture: everything at the top, the descending
//! clones below it, the almost unary functions at the bottom.

use std::fmt::Write;

/// DOT digraph of the chain `O = M2 -> M3 = Pol(T1) -> … -> M<max_n> -> … ->
/// U`, as a single path with an ellipsis node before the sink.
pub fn export_chain_dot(max_n: usize) -> String {
    assert!(max_n >= 2, "the chain starts at M2");
    let mut out = String::new();
    out.push_str("digraph chain {\n");
    out.push_str("  rankdir=TB;\n");
    out.push_str("  node [shape=box];\n");
    for m in 2..=max_n {
        let label = match m {
            2 => "O = M2".to_string(),
            3 => "Pol(T1) = M3".to_string(),
            m => format!("M{m}"),
        };
        let _ = writeln!(out, "  m{m} [label=\"{label}\"];");
    }
    out.push_str("  dots [label=\"...\" shape=none];\n");
    out.push_str("  u [label=\"U (almost unary)\"];\n");
    for m in 2..max_n {
        let _ = writeln!(out, "  m{m} -> m{next};", next = m + 1);
    }
    let _ = writeln!(out, "  m{max_n} -> dots;");
    out.push_str("  dots -> u;\n");
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_chain_nodes_plus_sink() {
        let dot = export_chain_dot(5);
        // M2..M5 plus the ellipsis node, then the sink.
        let nodes = dot.lines().filter(|l| l.contains("[label=")).count();
        assert_eq!(nodes, 6);
        assert!(dot.contains("Pol(T1) = M3"));
    }

    #[test]
    fn edges_form_a_path() {
        let dot = export_chain_dot(6);
        let edges: Vec<&str> = dot.lines().filter(|l| l.contains("->")).collect();
        // m2->m3, m3->m4, m4->m5, m5->m6, m6->dots, dots->u
        assert_eq!(edges.len(), 6);
        // No branching: every edge source occurs exactly once.
        let mut sources: Vec<&str> = edges
            .iter()
            .map(|e| e.trim().split(" ->").next().unwrap())
            .collect();
        sources.sort_unstable();
        sources.dedup();
        assert_eq!(sources.len(), edges.len());
    }
}
