//! Isomorphism testing and canonical forms for small hypergraphs.
//!
//! Both are exact: `is_isomorphic` backtracks over node bijections guided
//! by iterated color refinement, and `canonical_form` uses
//! individualization-refinement, taking the minimal serialization over all
//! orderings consistent with the refined partition. Instances in scope are
//! small (tens of nodes), so worst-case cost is acceptable.

use std::collections::BTreeMap;

use crate::symbol::Sym;

use super::Hypergraph;

/// A witness bijection pair between two hypergraphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isomorphism {
    pub node_map: BTreeMap<Sym, Sym>,
    pub edge_map: BTreeMap<Sym, Sym>,
}

impl Isomorphism {
    /// Verifies that the maps are bijections preserving labels,
    /// attachments selector-wise, and the external map selector-wise.
    pub fn check(&self, h1: &Hypergraph, h2: &Hypergraph) -> bool {
        if self.node_map.len() != h1.nodes().len() || self.node_map.len() != h2.nodes().len() {
            return false;
        }
        if self.edge_map.len() != h1.edges().len() || self.edge_map.len() != h2.edges().len() {
            return false;
        }
        let mut node_targets = std::collections::BTreeSet::new();
        for (v, w) in &self.node_map {
            if !h1.nodes().contains(v) || !h2.nodes().contains(w) || !node_targets.insert(w.clone())
            {
                return false;
            }
        }
        let mut edge_targets = std::collections::BTreeSet::new();
        for (a, b) in &self.edge_map {
            let (Some(e1), Some(e2)) = (h1.edge(a), h2.edge(b)) else {
                return false;
            };
            if !edge_targets.insert(b.clone()) || e1.label != e2.label {
                return false;
            }
            if e1.att.len() != e2.att.len() {
                return false;
            }
            for (sel, v) in &e1.att {
                if e2.att.get(sel) != self.node_map.get(v) {
                    return false;
                }
            }
        }
        if h1.ext().len() != h2.ext().len() {
            return false;
        }
        for (sel, v) in h1.ext() {
            if h2.ext().get(sel) != self.node_map.get(v) {
                return false;
            }
        }
        true
    }
}

/// Per-node structural signature used to seed color refinement.
fn initial_signature(h: &Hypergraph, v: &Sym) -> Vec<String> {
    let mut sig = Vec::new();
    for (sel, node) in h.ext() {
        if node == v {
            sig.push(format!("x:{sel}"));
        }
    }
    for e in h.edges().values() {
        for (sel, node) in &e.att {
            if node == v {
                sig.push(format!("i:{}:{}", e.label, sel));
            }
        }
    }
    sig.sort();
    sig
}

struct Colored {
    index: BTreeMap<Sym, usize>,
    colors: Vec<u32>,
    class_count: usize,
}

fn assign_ranks<T: Ord + Clone>(sigs: &[T]) -> (Vec<u32>, usize) {
    let mut sorted: Vec<&T> = sigs.iter().collect();
    sorted.sort();
    sorted.dedup();
    let rank: BTreeMap<&T, u32> = sorted.iter().cloned().zip(0..).collect();
    (sigs.iter().map(|s| rank[s]).collect(), sorted.len())
}

fn refine(h: &Hypergraph, seed: Option<(&BTreeMap<Sym, usize>, &[u32])>) -> Colored {
    let nodes: Vec<Sym> = h.nodes().iter().cloned().collect();
    let index: BTreeMap<Sym, usize> = nodes.iter().cloned().zip(0..).collect();
    let init: Vec<(Vec<String>, u32)> = nodes
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let extra = seed.map(|(idx, cs)| cs[idx[&nodes[i]]]).unwrap_or(0);
            (initial_signature(h, v), extra)
        })
        .collect();
    let (mut colors, mut class_count) = assign_ranks(&init);
    loop {
        let sigs: Vec<(u32, Vec<(Sym, Sym, Vec<(Sym, u32)>)>)> = nodes
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let mut inc = Vec::new();
                for e in h.edges().values() {
                    for (sel, node) in &e.att {
                        if node == v {
                            let mut others: Vec<(Sym, u32)> = e
                                .att
                                .iter()
                                .filter(|(s, _)| *s != sel)
                                .map(|(s, w)| (s.clone(), colors[index[w]]))
                                .collect();
                            others.sort();
                            inc.push((e.label.clone(), sel.clone(), others));
                        }
                    }
                }
                inc.sort();
                (colors[i], inc)
            })
            .collect();
        let (next, next_count) = assign_ranks(&sigs);
        if next_count == class_count {
            return Colored {
                index,
                colors: next,
                class_count: next_count,
            };
        }
        colors = next;
        class_count = next_count;
    }
}

fn is_isolated(h: &Hypergraph, v: &Sym) -> bool {
    !h.external_nodes().contains(v)
        && !h.edges().values().any(|e| e.att.values().any(|w| w == v))
}

/// Multiset of (label, attachment-through-map) for edges fully inside the
/// assigned region; `None` entries in `map` mark unassigned nodes.
fn mapped_edges(h: &Hypergraph, assigned: &BTreeMap<Sym, Sym>) -> Vec<(Sym, Vec<(Sym, Sym)>)> {
    let mut out = Vec::new();
    for e in h.edges().values() {
        if let Some(att) = e
            .att
            .iter()
            .map(|(s, v)| assigned.get(v).map(|w| (s.clone(), w.clone())))
            .collect::<Option<Vec<_>>>()
        {
            out.push((e.label.clone(), att));
        }
    }
    out.sort();
    out
}

fn region_edges(h: &Hypergraph, region: &std::collections::BTreeSet<Sym>) -> Vec<(Sym, Vec<(Sym, Sym)>)> {
    let mut out = Vec::new();
    for e in h.edges().values() {
        if e.att.values().all(|v| region.contains(v)) {
            out.push((
                e.label.clone(),
                e.att.iter().map(|(s, v)| (s.clone(), v.clone())).collect(),
            ));
        }
    }
    out.sort();
    out
}

/// Searches for an isomorphism, returning a checked witness or `None`.
pub fn is_isomorphic(h1: &Hypergraph, h2: &Hypergraph) -> Option<Isomorphism> {
    if h1.nodes().len() != h2.nodes().len()
        || h1.edges().len() != h2.edges().len()
        || h1.hg_type() != h2.hg_type()
        || h1.label_counts() != h2.label_counts()
    {
        return None;
    }
    let c1 = refine(h1, None);
    let c2 = refine(h2, None);
    if c1.class_count != c2.class_count {
        return None;
    }
    // color class sizes must match; colors are comparable because refinement
    // ranks identical signature structures identically on both sides
    let mut sizes1 = BTreeMap::new();
    let mut sizes2 = BTreeMap::new();
    for c in &c1.colors {
        *sizes1.entry(*c).or_insert(0usize) += 1;
    }
    for c in &c2.colors {
        *sizes2.entry(*c).or_insert(0usize) += 1;
    }
    if sizes1 != sizes2 {
        return None;
    }

    let mut assigned: BTreeMap<Sym, Sym> = BTreeMap::new();
    let mut used: std::collections::BTreeSet<Sym> = Default::default();
    // forced assignments from the external map
    for (sel, v) in h1.ext() {
        let w = h2.ext()[sel].clone();
        match assigned.get(v) {
            Some(prev) if *prev != w => return None,
            Some(_) => {}
            None => {
                if !used.insert(w.clone()) {
                    return None;
                }
                if c1.colors[c1.index[v]] != c2.colors[c2.index[&w]] {
                    return None;
                }
                assigned.insert(v.clone(), w);
            }
        }
    }

    let mut order: Vec<Sym> = h1
        .nodes()
        .iter()
        .filter(|v| !assigned.contains_key(*v))
        .cloned()
        .collect();
    // assign rare colors first
    order.sort_by_key(|v| (sizes1[&c1.colors[c1.index[v]]], c1.colors[c1.index[v]], v.clone()));

    fn consistent(h1: &Hypergraph, h2: &Hypergraph, assigned: &BTreeMap<Sym, Sym>) -> bool {
        let region: std::collections::BTreeSet<Sym> = assigned.values().cloned().collect();
        mapped_edges(h1, assigned) == region_edges(h2, &region)
    }

    fn backtrack(
        h1: &Hypergraph,
        h2: &Hypergraph,
        c1: &Colored,
        c2: &Colored,
        order: &[Sym],
        pos: usize,
        assigned: &mut BTreeMap<Sym, Sym>,
        used: &mut std::collections::BTreeSet<Sym>,
    ) -> bool {
        if pos == order.len() {
            return consistent(h1, h2, assigned);
        }
        let v = &order[pos];
        let color = c1.colors[c1.index[v]];
        let v_isolated = is_isolated(h1, v);
        for w in h2.nodes() {
            if used.contains(w) || c2.colors[c2.index[w]] != color {
                continue;
            }
            assigned.insert(v.clone(), w.clone());
            used.insert(w.clone());
            if consistent(h1, h2, assigned)
                && backtrack(h1, h2, c1, c2, order, pos + 1, assigned, used)
            {
                return true;
            }
            assigned.remove(v);
            used.remove(w);
            // isolated nodes of one color are interchangeable
            if v_isolated && is_isolated(h2, w) {
                break;
            }
        }
        false
    }

    if !consistent(h1, h2, &assigned)
        || !backtrack(h1, h2, &c1, &c2, &order, 0, &mut assigned, &mut used)
    {
        return None;
    }

    // pair edges by (label, mapped attachment)
    let mut pool: BTreeMap<(Sym, Vec<(Sym, Sym)>), Vec<Sym>> = BTreeMap::new();
    for (id, e) in h2.edges() {
        let key = (
            e.label.clone(),
            e.att.iter().map(|(s, v)| (s.clone(), v.clone())).collect(),
        );
        pool.entry(key).or_default().push(id.clone());
    }
    let mut edge_map = BTreeMap::new();
    for (id, e) in h1.edges() {
        let key = (
            e.label.clone(),
            e.att
                .iter()
                .map(|(s, v)| (s.clone(), assigned[v].clone()))
                .collect(),
        );
        let slot = pool.get_mut(&key)?;
        edge_map.insert(id.clone(), slot.pop()?);
    }
    let iso = Isomorphism {
        node_map: assigned,
        edge_map,
    };
    debug_assert!(iso.check(h1, h2));
    Some(iso)
}

fn serialize_with_order(h: &Hypergraph, position: &BTreeMap<Sym, usize>) -> String {
    let mut out = format!("n{};", h.nodes().len());
    for (sel, v) in h.ext() {
        out.push_str(&format!("x{}={};", sel, position[v]));
    }
    let mut edges: Vec<String> = h
        .edges()
        .values()
        .map(|e| {
            let att: Vec<String> = e
                .att
                .iter()
                .map(|(s, v)| format!("{}={}", s, position[v]))
                .collect();
            format!("{}({})", e.label, att.join(","))
        })
        .collect();
    edges.sort();
    out.push_str(&edges.join("|"));
    out
}

fn canonical_search(h: &Hypergraph, seed: &BTreeMap<Sym, u32>, best: &mut Option<String>) {
    let seeded: Vec<u32>;
    let colored = {
        let nodes: Vec<Sym> = h.nodes().iter().cloned().collect();
        let index: BTreeMap<Sym, usize> = nodes.iter().cloned().zip(0..).collect();
        seeded = nodes.iter().map(|v| seed[v]).collect();
        refine(h, Some((&index, &seeded)))
    };
    // find first non-singleton class
    let mut by_color: BTreeMap<u32, Vec<Sym>> = BTreeMap::new();
    for v in h.nodes() {
        by_color
            .entry(colored.colors[colored.index[v]])
            .or_default()
            .push(v.clone());
    }
    if colored.class_count == h.nodes().len() {
        let position: BTreeMap<Sym, usize> = by_color
            .values()
            .flatten()
            .cloned()
            .zip(0..)
            .collect();
        let ser = serialize_with_order(h, &position);
        if best.as_ref().map(|b| ser < *b).unwrap_or(true) {
            *best = Some(ser);
        }
        return;
    }
    let (_, class) = by_color
        .iter()
        .find(|(_, members)| members.len() > 1)
        .expect("non-discrete partition has a class of size > 1");
    let interchangeable = class.iter().all(|v| is_isolated(h, v));
    for v in class {
        // individualize on top of the compressed refined colors
        let mut next: BTreeMap<Sym, u32> = h
            .nodes()
            .iter()
            .map(|w| (w.clone(), colored.colors[colored.index[w]] * 2))
            .collect();
        next.insert(v.clone(), next[v] + 1);
        canonical_search(h, &next, best);
        if interchangeable {
            break;
        }
    }
}

/// Canonical byte string: equal for two hypergraphs exactly when they are
/// isomorphic. Used as the dedup key for search frontiers.
pub fn canonical_form(h: &Hypergraph) -> String {
    if h.nodes().is_empty() {
        let mut edges: Vec<String> = h.edges().values().map(|e| format!("{}()", e.label)).collect();
        edges.sort();
        return format!("n0;{}", edges.join("|"));
    }
    let seed: BTreeMap<Sym, u32> = h.nodes().iter().map(|v| (v.clone(), 0)).collect();
    let mut best = None;
    canonical_search(h, &seed, &mut best);
    best.expect("nonempty graph has at least one labeling")
}
