//! Rule matching and step application.
//!
//! An occurrence of a rule's left-hand side in a host graph `G` is exactly
//! a decomposition `G = K[e/lhs]` with an injective attachment for `e`:
//!
//! * an injective node map and injective edge map preserving labels and
//!   attachments selector-wise;
//! * every image of an internal (non-external) left-hand-side node has all
//!   of its incident host edges inside the matched edge image, and is not
//!   an external node of the host (the dangling condition — those nodes
//!   are removed by the step).

use std::collections::{BTreeMap, BTreeSet};

use crate::hypergraph::{replace, Hypergraph};
use crate::symbol::{fresh_like, Sym};

use super::{EngineError, HtRule};

/// An embedding of a rule's left-hand side into a host graph.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Occurrence {
    pub node_map: BTreeMap<Sym, Sym>,
    pub edge_map: BTreeMap<Sym, Sym>,
}

fn host_incident_edges(host: &Hypergraph, v: &Sym) -> BTreeSet<Sym> {
    host.edges()
        .iter()
        .filter(|(_, e)| e.att.values().any(|w| w == v))
        .map(|(id, _)| id.clone())
        .collect()
}

/// Checks the conditions that make an embedding an actual decomposition.
fn embedding_ok(lhs: &Hypergraph, host: &Hypergraph, occ: &Occurrence) -> bool {
    // injectivity
    let mut node_targets = BTreeSet::new();
    if !occ.node_map.values().all(|v| node_targets.insert(v.clone())) {
        return false;
    }
    let mut edge_targets = BTreeSet::new();
    if !occ.edge_map.values().all(|e| edge_targets.insert(e.clone())) {
        return false;
    }
    if occ.node_map.len() != lhs.nodes().len() || occ.edge_map.len() != lhs.edges().len() {
        return false;
    }
    // labels and attachments
    for (id, e) in lhs.edges() {
        let Some(host_id) = occ.edge_map.get(id) else {
            return false;
        };
        let Some(host_edge) = host.edge(host_id) else {
            return false;
        };
        if host_edge.label != e.label || host_edge.att.len() != e.att.len() {
            return false;
        }
        for (sel, v) in &e.att {
            if host_edge.att.get(sel) != occ.node_map.get(v) {
                return false;
            }
        }
    }
    for v in lhs.nodes() {
        if !host.nodes().contains(&occ.node_map[v]) {
            return false;
        }
    }
    // dangling condition on internal nodes
    let host_ext = host.external_nodes();
    let matched_edges: BTreeSet<Sym> = occ.edge_map.values().cloned().collect();
    for v in lhs.internal_nodes() {
        let image = &occ.node_map[&v];
        if host_ext.contains(image) {
            return false;
        }
        if !host_incident_edges(host, image).is_subset(&matched_edges) {
            return false;
        }
    }
    true
}

/// All occurrences of the rule's left-hand side in the host graph, in a
/// deterministic order.
pub fn applicable_matches(host: &Hypergraph, rule: &HtRule) -> Vec<Occurrence> {
    let lhs = &rule.lhs;
    let lhs_edges: Vec<Sym> = lhs.edges().keys().cloned().collect();
    let mut found = Vec::new();

    fn extend_nodes(
        node_map: &mut BTreeMap<Sym, Sym>,
        used: &mut BTreeSet<Sym>,
        pairs: &[(Sym, Sym)],
    ) -> Option<Vec<Sym>> {
        let mut added = Vec::new();
        for (v, w) in pairs {
            match node_map.get(v) {
                Some(prev) if prev == w => {}
                Some(_) => {
                    for a in added.iter().rev() {
                        let img = node_map.remove(a).unwrap();
                        used.remove(&img);
                    }
                    return None;
                }
                None => {
                    if !used.insert(w.clone()) {
                        for a in added.iter().rev() {
                            let img = node_map.remove(a).unwrap();
                            used.remove(&img);
                        }
                        return None;
                    }
                    node_map.insert(v.clone(), w.clone());
                    added.push(v.clone());
                }
            }
        }
        Some(added)
    }

    fn retract(node_map: &mut BTreeMap<Sym, Sym>, used: &mut BTreeSet<Sym>, added: &[Sym]) {
        for a in added.iter().rev() {
            let img = node_map.remove(a).unwrap();
            used.remove(&img);
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn backtrack(
        host: &Hypergraph,
        lhs: &Hypergraph,
        lhs_edges: &[Sym],
        pos: usize,
        node_map: &mut BTreeMap<Sym, Sym>,
        used_nodes: &mut BTreeSet<Sym>,
        edge_map: &mut BTreeMap<Sym, Sym>,
        found: &mut Vec<Occurrence>,
    ) {
        if pos == lhs_edges.len() {
            // map the edge-free nodes; internal ones must be fully isolated
            // in the host and non-external
            let unmapped: Vec<Sym> = lhs
                .nodes()
                .iter()
                .filter(|v| !node_map.contains_key(*v))
                .cloned()
                .collect();
            let host_ext = host.external_nodes();
            let internal = lhs.internal_nodes();
            fn assign(
                host: &Hypergraph,
                unmapped: &[Sym],
                pos: usize,
                internal: &BTreeSet<Sym>,
                host_ext: &BTreeSet<Sym>,
                node_map: &mut BTreeMap<Sym, Sym>,
                used_nodes: &mut BTreeSet<Sym>,
                out: &mut Vec<BTreeMap<Sym, Sym>>,
            ) {
                if pos == unmapped.len() {
                    out.push(node_map.clone());
                    return;
                }
                let v = &unmapped[pos];
                for w in host.nodes() {
                    if used_nodes.contains(w) {
                        continue;
                    }
                    if internal.contains(v)
                        && (host_ext.contains(w) || !host_incident_edges(host, w).is_empty())
                    {
                        continue;
                    }
                    node_map.insert(v.clone(), w.clone());
                    used_nodes.insert(w.clone());
                    assign(host, unmapped, pos + 1, internal, host_ext, node_map, used_nodes, out);
                    node_map.remove(v);
                    used_nodes.remove(w);
                }
            }
            let mut complete = Vec::new();
            assign(
                host,
                &unmapped,
                0,
                &internal,
                &host_ext,
                node_map,
                used_nodes,
                &mut complete,
            );
            for nm in complete {
                let occ = Occurrence {
                    node_map: nm,
                    edge_map: edge_map.clone(),
                };
                if embedding_ok(lhs, host, &occ) {
                    found.push(occ);
                }
            }
            return;
        }
        let lhs_edge = lhs.edge(&lhs_edges[pos]).unwrap();
        for (host_id, host_edge) in host.edges() {
            if edge_map.values().any(|e| e == host_id) {
                continue;
            }
            if host_edge.label != lhs_edge.label
                || host_edge.att.len() != lhs_edge.att.len()
                || !lhs_edge.att.keys().all(|s| host_edge.att.contains_key(s))
            {
                continue;
            }
            let pairs: Vec<(Sym, Sym)> = lhs_edge
                .att
                .iter()
                .map(|(sel, v)| (v.clone(), host_edge.att[sel].clone()))
                .collect();
            if let Some(added) = extend_nodes(node_map, used_nodes, &pairs) {
                edge_map.insert(lhs_edges[pos].clone(), host_id.clone());
                backtrack(
                    host, lhs, lhs_edges, pos + 1, node_map, used_nodes, edge_map, found,
                );
                edge_map.remove(&lhs_edges[pos]);
                retract(node_map, used_nodes, &added);
            }
        }
    }

    backtrack(
        host,
        lhs,
        &lhs_edges,
        0,
        &mut BTreeMap::new(),
        &mut BTreeSet::new(),
        &mut BTreeMap::new(),
        &mut found,
    );
    found.sort();
    found.dedup();
    found
}

/// Applies one rewriting step: cuts out the matched left-hand side
/// (matched edges and the images of internal nodes), stands a fresh edge
/// in for the hole, and replaces that edge by the right-hand side.
pub fn apply(host: &Hypergraph, rule: &HtRule, occ: &Occurrence) -> Result<Hypergraph, EngineError> {
    if !embedding_ok(&rule.lhs, host, occ) {
        return Err(EngineError::StaleOccurrence);
    }
    let removed_nodes: BTreeSet<Sym> = rule
        .lhs
        .internal_nodes()
        .iter()
        .map(|v| occ.node_map[v].clone())
        .collect();
    let removed_edges: BTreeSet<Sym> = occ.edge_map.values().cloned().collect();
    let mut context = Hypergraph::empty();
    for v in host.nodes() {
        if !removed_nodes.contains(v) {
            context.add_node(v.clone());
        }
    }
    for (id, e) in host.edges() {
        if !removed_edges.contains(id) {
            context
                .add_edge(id.clone(), e.label.clone(), e.att.clone())
                .expect("context nodes are kept");
        }
    }
    for (sel, v) in host.ext() {
        context.set_ext(sel.clone(), v.clone()).expect("external nodes are kept");
    }
    let hole = fresh_like(&Sym::new("hole"), &|s| context.edges().contains_key(s));
    let att: BTreeMap<Sym, Sym> = rule
        .lhs
        .ext()
        .iter()
        .map(|(sel, v)| (sel.clone(), occ.node_map[v].clone()))
        .collect();
    context
        .add_edge(hole.clone(), Sym::new("?hole"), att)
        .expect("attachment nodes are kept");
    replace(&context, &hole, &rule.rhs).map_err(|e| EngineError::Malformed(e.to_string()))
}

/// Brute-force reference for tests: enumerates every pair of injective
/// maps and filters by the embedding conditions. Exponential, but
/// independent of the backtracking order above.
pub fn brute_force_matches(host: &Hypergraph, rule: &HtRule) -> Vec<Occurrence> {
    fn injections(from: &[Sym], to: &[Sym]) -> Vec<BTreeMap<Sym, Sym>> {
        fn go(
            from: &[Sym],
            to: &[Sym],
            pos: usize,
            cur: &mut BTreeMap<Sym, Sym>,
            used: &mut BTreeSet<Sym>,
            out: &mut Vec<BTreeMap<Sym, Sym>>,
        ) {
            if pos == from.len() {
                out.push(cur.clone());
                return;
            }
            for t in to {
                if used.insert(t.clone()) {
                    cur.insert(from[pos].clone(), t.clone());
                    go(from, to, pos + 1, cur, used, out);
                    cur.remove(&from[pos]);
                    used.remove(t);
                }
            }
        }
        let mut out = Vec::new();
        go(from, to, 0, &mut BTreeMap::new(), &mut BTreeSet::new(), &mut out);
        out
    }
    let lhs_nodes: Vec<Sym> = rule.lhs.nodes().iter().cloned().collect();
    let host_nodes: Vec<Sym> = host.nodes().iter().cloned().collect();
    let lhs_edges: Vec<Sym> = rule.lhs.edges().keys().cloned().collect();
    let host_edges: Vec<Sym> = host.edges().keys().cloned().collect();
    let mut out = Vec::new();
    for node_map in injections(&lhs_nodes, &host_nodes) {
        for edge_map in injections(&lhs_edges, &host_edges) {
            let occ = Occurrence {
                node_map: node_map.clone(),
                edge_map,
            };
            if embedding_ok(&rule.lhs, host, &occ) {
                out.push(occ);
            }
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{
        disjoint_union, is_isomorphic, string_graph_str, TypedAlphabet,
    };

    fn sym(s: &str) -> Sym {
        Sym::new(s)
    }

    /// The boxed rule: an A,B fan into external x and y rewrites to a
    /// C-hyperedge gadget with a D edge between x and y.
    fn fan_rule() -> HtRule {
        let mut lhs = Hypergraph::empty();
        for v in ["u1", "u2", "u3"] {
            lhs.add_node(sym(v));
        }
        lhs.add_edge(
            sym("e1"),
            sym("A"),
            BTreeMap::from([(sym("s"), sym("u2")), (sym("t"), sym("u1"))]),
        )
        .unwrap();
        lhs.add_edge(
            sym("e2"),
            sym("B"),
            BTreeMap::from([(sym("s"), sym("u2")), (sym("t"), sym("u3"))]),
        )
        .unwrap();
        lhs.set_ext(sym("x"), sym("u1")).unwrap();
        lhs.set_ext(sym("y"), sym("u3")).unwrap();
        let mut rhs = Hypergraph::empty();
        for v in ["v1", "v2", "v3", "v4"] {
            rhs.add_node(sym(v));
        }
        rhs.add_edge(
            sym("e1"),
            sym("C"),
            BTreeMap::from([(sym("1"), sym("v1")), (sym("2"), sym("v3")), (sym("3"), sym("v4"))]),
        )
        .unwrap();
        rhs.add_edge(
            sym("e2"),
            sym("D"),
            BTreeMap::from([(sym("s"), sym("v3")), (sym("t"), sym("v4"))]),
        )
        .unwrap();
        rhs.set_ext(sym("x"), sym("v3")).unwrap();
        rhs.set_ext(sym("y"), sym("v4")).unwrap();
        HtRule::new("fan-to-gadget", lhs, rhs).unwrap()
    }

    /// Host graph for the fan rule: the fan plus an X back-edge and a
    /// unary Y hyperedge on the y-node.
    fn fan_host() -> Hypergraph {
        let mut g = Hypergraph::empty();
        for v in ["n", "n1", "n2"] {
            g.add_node(sym(v));
        }
        g.add_edge(
            sym("a"),
            sym("A"),
            BTreeMap::from([(sym("s"), sym("n")), (sym("t"), sym("n1"))]),
        )
        .unwrap();
        g.add_edge(
            sym("b"),
            sym("B"),
            BTreeMap::from([(sym("s"), sym("n")), (sym("t"), sym("n2"))]),
        )
        .unwrap();
        g.add_edge(
            sym("x"),
            sym("X"),
            BTreeMap::from([(sym("s"), sym("n2")), (sym("t"), sym("n1"))]),
        )
        .unwrap();
        g.add_edge(sym("y"), sym("Y"), BTreeMap::from([(sym("1"), sym("n2"))]))
            .unwrap();
        g
    }

    #[test]
    fn fan_rule_has_one_occurrence() {
        let rule = fan_rule();
        let host = fan_host();
        let occs = applicable_matches(&host, &rule);
        assert_eq!(occs.len(), 1);
        assert_eq!(occs, brute_force_matches(&host, &rule));
    }

    #[test]
    fn fan_rule_application_shape() {
        let rule = fan_rule();
        let host = fan_host();
        let occ = &applicable_matches(&host, &rule)[0];
        let out = apply(&host, &rule, occ).unwrap();
        // C, D, X, Y edges; 4 nodes (v1, v2 fresh + the two glue nodes)
        assert_eq!(out.edges().len(), 4);
        assert_eq!(out.nodes().len(), 4);
        let labels = out.label_counts();
        for l in ["C", "D", "X", "Y"] {
            assert_eq!(labels[&sym(l)], 1, "missing {l}");
        }
        assert!(out.hg_type().is_empty());
    }

    #[test]
    fn dangling_condition_blocks() {
        // the internal node n carries an extra incident edge: no match
        let rule = fan_rule();
        let mut host = fan_host();
        host.add_edge(
            sym("extra"),
            sym("X"),
            BTreeMap::from([(sym("s"), sym("n")), (sym("t"), sym("n1"))]),
        )
        .unwrap();
        assert!(applicable_matches(&host, &rule).is_empty());
        assert!(brute_force_matches(&host, &rule).is_empty());
    }

    #[test]
    fn external_image_must_not_dangle_internally() {
        // making the internal node external in the host also blocks
        let rule = fan_rule();
        let mut host = fan_host();
        host.set_ext(sym("q"), sym("n")).unwrap();
        assert!(applicable_matches(&host, &rule).is_empty());
    }

    #[test]
    fn handle_rule_on_handle_free_graph() {
        let alpha = TypedAlphabet::with(&[("A", &["s", "t"]), ("a", &["s", "t"])]);
        let rule = HtRule::new(
            "unfold",
            alpha.handle(&sym("A")).unwrap(),
            string_graph_str("aa"),
        )
        .unwrap();
        let host = string_graph_str("aa");
        assert!(applicable_matches(&host, &rule).is_empty());
    }

    #[test]
    fn identity_rule_preserves_graph() {
        let alpha = TypedAlphabet::with(&[("a", &["s", "t"])]);
        let handle = alpha.handle(&sym("a")).unwrap();
        let rule = HtRule::new("same", handle.clone(), handle).unwrap();
        let host = string_graph_str("aba");
        for occ in &applicable_matches(&host, &rule) {
            let out = apply(&host, &rule, &occ).unwrap();
            assert!(is_isomorphic(&host, &out).is_some());
        }
    }

    #[test]
    fn stale_occurrence_rejected() {
        let rule = fan_rule();
        let host = fan_host();
        let occ = &applicable_matches(&host, &rule)[0];
        let other = string_graph_str("ab");
        assert!(matches!(
            apply(&other, &rule, occ),
            Err(EngineError::StaleOccurrence)
        ));
    }

    #[test]
    fn matches_agree_with_brute_force_on_multi_occurrence_hosts() {
        let alpha = TypedAlphabet::with(&[("a", &["s", "t"])]);
        let handle = alpha.handle(&sym("a")).unwrap();
        let rule = HtRule::new("any-a", handle.clone(), handle).unwrap();
        let host = string_graph_str("aaa");
        let occs = applicable_matches(&host, &rule);
        assert_eq!(occs.len(), 3);
        assert_eq!(occs, brute_force_matches(&host, &rule));
    }

    #[test]
    fn disjoint_union_lhs_matching() {
        // a two-part left-hand side (handle plus nullary marker) matches
        // only when both parts are present
        let alpha = TypedAlphabet::with(&[("S", &["s", "t"]), ("Q", &[]), ("a", &["s", "t"])]);
        let lhs = disjoint_union(
            &alpha.handle(&sym("S")).unwrap(),
            &alpha.handle(&sym("Q")).unwrap(),
        )
        .unwrap();
        let rhs = disjoint_union(&string_graph_str("a"), &alpha.handle(&sym("Q")).unwrap()).unwrap();
        let rule = HtRule::new("emit", lhs, rhs).unwrap();
        let with_marker = disjoint_union(
            &alpha.handle(&sym("S")).unwrap(),
            &alpha.handle(&sym("Q")).unwrap(),
        )
        .unwrap();
        assert_eq!(applicable_matches(&with_marker, &rule).len(), 1);
        let without = alpha.handle(&sym("S")).unwrap();
        assert!(applicable_matches(&without, &rule).is_empty());
        let out = apply(&with_marker, &rule, &applicable_matches(&with_marker, &rule)[0]).unwrap();
        let expected = disjoint_union(&string_graph_str("a"), &alpha.handle(&sym("Q")).unwrap()).unwrap();
        assert!(is_isomorphic(&out, &expected).is_some());
    }
}
