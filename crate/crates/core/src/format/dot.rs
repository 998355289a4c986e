//! Graphviz output for zone and region graphs.

use crate::hdta::{HdtaModel, RegionEdge, RegionGraph, ZoneGraph};

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Nodes are listed by (cube name, discovery index); node ids are discovery
/// indices so that edges stay readable.
pub fn zone_graph_dot(model: &HdtaModel, graph: &ZoneGraph) -> String {
    let mut out =
        String::from("digraph zonegraph {\n  node [shape=box, fontname=\"monospace\"];\n");
    let mut order: Vec<usize> = (0..graph.nodes.len()).collect();
    order.sort_by(|&a, &b| {
        let na = model.name(graph.nodes[a].cube);
        let nb = model.name(graph.nodes[b].cube);
        na.cmp(nb).then(a.cmp(&b))
    });
    for i in order {
        let s = &graph.nodes[i];
        let shape = if model.is_final(s.cube) {
            ", peripheries=2"
        } else {
            ""
        };
        out.push_str(&format!(
            "  n{i} [label=\"{}\\n{}\"{shape}];\n",
            escape(model.name(s.cube)),
            escape(&s.zone.render(model.clocks())),
        ));
    }
    let mut edges: Vec<_> = graph.edges.iter().collect();
    edges.sort_by_key(|(a, mv, b)| (*a, *b, mv.kind(), mv.index()));
    for (a, mv, b) in edges {
        out.push_str(&format!("  n{a} -> n{b} [label=\"{mv}\"];\n"));
    }
    out.push_str("}\n");
    out
}

pub fn region_graph_dot(model: &HdtaModel, graph: &RegionGraph) -> String {
    let mut out =
        String::from("digraph regiongraph {\n  node [shape=box, fontname=\"monospace\"];\n");
    let mut order: Vec<usize> = (0..graph.nodes.len()).collect();
    order.sort_by(|&a, &b| {
        let na = model.name(graph.nodes[a].0);
        let nb = model.name(graph.nodes[b].0);
        na.cmp(nb).then(a.cmp(&b))
    });
    for i in order {
        let (cube, region) = &graph.nodes[i];
        let shape = if model.is_final(*cube) {
            ", peripheries=2"
        } else {
            ""
        };
        out.push_str(&format!(
            "  n{i} [label=\"{}\\n{}\"{shape}];\n",
            escape(model.name(*cube)),
            escape(&region.render(model.clocks(), graph.cmax)),
        ));
    }
    for (a, e, b) in &graph.edges {
        let label = match e {
            RegionEdge::Delay => "delay".to_string(),
            RegionEdge::Discrete(mv) => mv.to_string(),
        };
        out.push_str(&format!("  n{a} -> n{b} [label=\"{label}\"];\n"));
    }
    out.push_str("}\n");
    out
}
