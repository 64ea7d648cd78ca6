//! Derivation search: breadth-first exploration of the rewriting relation
//! with canonical-form deduplication.
//!
//! Shortest derivations are found first. Frontier states are deduplicated
//! by canonical form, so isomorphic graphs are explored once. Two sound
//! prunes keep target-directed searches finite-ish at desk scale: when no
//! rule consumes a terminal-labeled edge, per-label terminal counts may
//! never exceed the target's; and the net size change per step bounds how
//! large an intermediate graph may grow and still shrink back in the
//! remaining steps.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::hypergraph::{canonical_form, Hypergraph};
use crate::symbol::Sym;

use super::matching::{applicable_matches, apply, Occurrence};
use super::{HtRule, HtSystem};

/// One replayable step: rule, occurrence, and the produced graph.
#[derive(Debug, Clone)]
pub struct DerivationStep {
    pub rule: Sym,
    pub occurrence: Occurrence,
    pub result: Hypergraph,
}

/// A replayable derivation from `start`.
#[derive(Debug, Clone)]
pub struct Derivation {
    pub start: Hypergraph,
    pub steps: Vec<DerivationStep>,
}

impl Derivation {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn result(&self) -> &Hypergraph {
        self.steps.last().map(|s| &s.result).unwrap_or(&self.start)
    }

    /// Re-applies every step and checks it reproduces the stored result.
    pub fn replays(&self, rules: &[HtRule]) -> bool {
        let mut current = self.start.clone();
        for step in &self.steps {
            let Some(rule) = rules.iter().find(|r| r.name == step.rule) else {
                return false;
            };
            match apply(&current, rule, &step.occurrence) {
                Ok(next) if next == step.result => current = next,
                _ => return false,
            }
        }
        true
    }
}

struct Node {
    graph: Hypergraph,
    parent: Option<usize>,
    step: Option<(Sym, Occurrence)>,
    depth: usize,
    /// residual multiset of exactly-once rules, as sorted indices
    residual: Vec<usize>,
}

fn rebuild(nodes: &[Node], mut at: usize) -> Derivation {
    let mut steps = Vec::new();
    while let Some(parent) = nodes[at].parent {
        let (rule, occ) = nodes[at].step.clone().expect("non-root has a step");
        steps.push(DerivationStep {
            rule,
            occurrence: occ,
            result: nodes[at].graph.clone(),
        });
        at = parent;
    }
    steps.reverse();
    Derivation {
        start: nodes[at].graph.clone(),
        steps,
    }
}

/// Per-label terminal-edge counts.
fn terminal_counts(sys_terminals: &crate::hypergraph::TypedAlphabet, g: &Hypergraph) -> BTreeMap<Sym, usize> {
    let mut out = BTreeMap::new();
    for e in g.edges().values() {
        if sys_terminals.contains(&e.label) {
            *out.entry(e.label.clone()).or_insert(0) += 1;
        }
    }
    out
}

fn exceeds(counts: &BTreeMap<Sym, usize>, bound: &BTreeMap<Sym, usize>) -> bool {
    counts.iter().any(|(l, n)| n > bound.get(l).unwrap_or(&0))
}

/// Largest per-step shrink over the rules (0 when no rule shrinks).
fn max_shrink(rules: &[&HtRule]) -> i64 {
    rules
        .iter()
        .map(|r| (-r.size_delta()).max(0))
        .max()
        .unwrap_or(0)
}

/// Searches for a derivation from the system's start graph to a graph
/// isomorphic to `target` in at most `max_steps` steps.
pub fn derives(sys: &HtSystem, target: &Hypergraph, max_steps: usize) -> Option<Derivation> {
    let rules: Vec<&HtRule> = sys.rules.iter().collect();
    let target_counts = terminal_counts(&sys.terminals, target);
    let use_terminal_prune = sys.terminals_persist();
    let shrink = max_shrink(&rules);
    let target_key = canonical_form(target);

    let mut nodes = vec![Node {
        graph: sys.start.clone(),
        parent: None,
        step: None,
        depth: 0,
        residual: Vec::new(),
    }];
    let mut seen = BTreeSet::from([canonical_form(&sys.start)]);
    let mut queue = VecDeque::from([0usize]);
    if canonical_form(&sys.start) == target_key {
        return Some(rebuild(&nodes, 0));
    }
    while let Some(at) = queue.pop_front() {
        let depth = nodes[at].depth;
        if depth == max_steps {
            continue;
        }
        let graph = nodes[at].graph.clone();
        for rule in &rules {
            for occ in applicable_matches(&graph, rule) {
                let next = apply(&graph, rule, &occ).expect("occurrence is fresh");
                let remaining = (max_steps - depth - 1) as i64;
                if next.size() as i64 > target.size() as i64 + shrink * remaining {
                    continue;
                }
                if use_terminal_prune
                    && exceeds(&terminal_counts(&sys.terminals, &next), &target_counts)
                {
                    continue;
                }
                let key = canonical_form(&next);
                if !seen.insert(key.clone()) {
                    continue;
                }
                nodes.push(Node {
                    graph: next,
                    parent: Some(at),
                    step: Some((rule.name.clone(), occ)),
                    depth: depth + 1,
                    residual: Vec::new(),
                });
                let idx = nodes.len() - 1;
                if key == target_key {
                    return Some(rebuild(&nodes, idx));
                }
                queue.push_back(idx);
            }
        }
    }
    None
}

/// Searches for a derivation from `from` to a graph isomorphic to `to`
/// that uses each rule of `exactly_once` exactly once and rules of
/// `reusable` any number of times, within `max_steps` steps.
pub fn derives_with_rule_multiset(
    from: &Hypergraph,
    to: &Hypergraph,
    reusable: &[HtRule],
    exactly_once: &[HtRule],
    max_steps: usize,
) -> Option<Derivation> {
    let all_rules: Vec<&HtRule> = reusable.iter().chain(exactly_once.iter()).collect();
    let shrink = max_shrink(&all_rules);
    let to_key = canonical_form(to);

    let full_residual: Vec<usize> = (0..exactly_once.len()).collect();
    let mut nodes = vec![Node {
        graph: from.clone(),
        parent: None,
        step: None,
        depth: 0,
        residual: full_residual.clone(),
    }];
    let state_key = |g: &Hypergraph, residual: &[usize]| {
        format!("{}::{:?}", canonical_form(g), residual)
    };
    let mut seen = BTreeSet::from([state_key(from, &full_residual)]);
    let mut queue = VecDeque::from([0usize]);
    if full_residual.is_empty() && canonical_form(from) == to_key {
        return Some(rebuild(&nodes, 0));
    }
    while let Some(at) = queue.pop_front() {
        let depth = nodes[at].depth;
        if depth == max_steps {
            continue;
        }
        let graph = nodes[at].graph.clone();
        let residual = nodes[at].residual.clone();
        if residual.len() > max_steps - depth {
            continue;
        }
        // candidate moves: any reusable rule, or any distinct residual rule
        let mut moves: Vec<(&HtRule, Option<usize>)> =
            reusable.iter().map(|r| (r, None)).collect();
        let mut seen_residual = BTreeSet::new();
        for (pos, idx) in residual.iter().enumerate() {
            if seen_residual.insert(*idx) {
                moves.push((&exactly_once[*idx], Some(pos)));
            }
        }
        for (rule, consume_pos) in moves {
            for occ in applicable_matches(&graph, rule) {
                let next = apply(&graph, rule, &occ).expect("occurrence is fresh");
                let next_residual: Vec<usize> = match consume_pos {
                    Some(pos) => {
                        let mut r = residual.clone();
                        r.remove(pos);
                        r
                    }
                    None => residual.clone(),
                };
                let remaining = (max_steps - depth - 1) as i64;
                if next.size() as i64 > to.size() as i64 + shrink * remaining {
                    continue;
                }
                let key = state_key(&next, &next_residual);
                if !seen.insert(key) {
                    continue;
                }
                let hit = next_residual.is_empty() && canonical_form(&next) == to_key;
                nodes.push(Node {
                    graph: next,
                    parent: Some(at),
                    step: Some((rule.name.clone(), occ)),
                    depth: depth + 1,
                    residual: next_residual,
                });
                let idx = nodes.len() - 1;
                if hit {
                    return Some(rebuild(&nodes, idx));
                }
                queue.push_back(idx);
            }
        }
    }
    None
}

/// All terminal-labeled graphs of size at most `size_bound` reachable in
/// at most `step_bound` steps, as canonical forms.
pub fn enumerate_language(
    sys: &HtSystem,
    size_bound: usize,
    step_bound: usize,
) -> BTreeSet<String> {
    let rules: Vec<&HtRule> = sys.rules.iter().collect();
    let shrink = max_shrink(&rules);
    let mut out = BTreeSet::new();
    let mut seen = BTreeSet::from([canonical_form(&sys.start)]);
    let mut queue = VecDeque::from([(sys.start.clone(), 0usize)]);
    if sys.is_terminal_graph(&sys.start) && sys.start.size() <= size_bound {
        out.insert(canonical_form(&sys.start));
    }
    while let Some((graph, depth)) = queue.pop_front() {
        if depth == step_bound {
            continue;
        }
        for rule in &rules {
            for occ in applicable_matches(&graph, rule) {
                let next = apply(&graph, rule, &occ).expect("occurrence is fresh");
                let remaining = (step_bound - depth - 1) as i64;
                if next.size() as i64 > size_bound as i64 + shrink * remaining {
                    continue;
                }
                let key = canonical_form(&next);
                if !seen.insert(key.clone()) {
                    continue;
                }
                if sys.is_terminal_graph(&next) && next.size() <= size_bound {
                    out.insert(key);
                }
                queue.push_back((next, depth + 1));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{disjoint_union, string_graph_str, TypedAlphabet};

    fn sym(s: &str) -> Sym {
        Sym::new(s)
    }

    /// S -> a S | a: generates sg(a^n).
    fn chain_system() -> HtSystem {
        let n = TypedAlphabet::with(&[("S", &["s", "t"])]);
        let t = TypedAlphabet::with(&[("a", &["s", "t"])]);
        let s_handle = n.handle(&sym("S")).unwrap();
        let grow_rhs = {
            let mut g = string_graph_str("a");
            // append an S edge after the a edge: a then S
            g.add_node(sym("v2"));
            g.add_edge(
                sym("e2"),
                sym("S"),
                BTreeMap::from([(sym("s"), sym("v1")), (sym("t"), sym("v2"))]),
            )
            .unwrap();
            let mut out = Hypergraph::empty();
            for v in g.nodes() {
                out.add_node(v.clone());
            }
            for (id, e) in g.edges() {
                out.add_edge(id.clone(), e.label.clone(), e.att.clone()).unwrap();
            }
            out.set_ext(sym("s"), sym("v0")).unwrap();
            out.set_ext(sym("t"), sym("v2")).unwrap();
            out
        };
        let rules = vec![
            HtRule::new("grow", s_handle.clone(), grow_rhs).unwrap(),
            HtRule::new("stop", s_handle.clone(), string_graph_str("a")).unwrap(),
        ];
        HtSystem::new(n, t, rules, s_handle).unwrap()
    }

    #[test]
    fn zero_step_derivation_is_empty() {
        let sys = chain_system();
        let d = derives(&sys, &sys.start, 0).unwrap();
        assert!(d.is_empty());
        assert!(d.replays(&sys.rules));
    }

    #[test]
    fn chain_system_reaches_words() {
        let sys = chain_system();
        for n in 1..=4 {
            let target = string_graph_str(&"a".repeat(n));
            let d = derives(&sys, &target, 8).expect("derivable");
            assert_eq!(d.len(), n); // n-1 grows + 1 stop
            assert!(d.replays(&sys.rules));
        }
        let b_target = string_graph_str("b");
        // b is not even in the alphabet; never found
        assert!(derives(&sys, &b_target, 8).is_none());
    }

    #[test]
    fn enumerate_language_chain() {
        let sys = chain_system();
        let langs = enumerate_language(&sys, 7, 6);
        let expected: BTreeSet<String> = (1..=3)
            .map(|n| canonical_form(&string_graph_str(&"a".repeat(n))))
            .collect();
        assert_eq!(langs, expected);
    }

    #[test]
    fn single_rule_language() {
        let n = TypedAlphabet::with(&[("S", &["s", "t"])]);
        let t = TypedAlphabet::with(&[("a", &["s", "t"])]);
        let s_handle = n.handle(&sym("S")).unwrap();
        let rules = vec![HtRule::new("only", s_handle.clone(), string_graph_str("a")).unwrap()];
        let sys = HtSystem::new(n, t, rules, s_handle).unwrap();
        let lang = enumerate_language(&sys, 10, 5);
        assert_eq!(lang.len(), 1);
        assert!(lang.contains(&canonical_form(&string_graph_str("a"))));
    }

    #[test]
    fn exactly_once_zero_case() {
        let g = string_graph_str("ab");
        let d = derives_with_rule_multiset(&g, &g, &[], &[], 4).unwrap();
        assert!(d.is_empty());
        let other = string_graph_str("ba");
        assert!(derives_with_rule_multiset(&g, &other, &[], &[], 4).is_none());
    }

    #[test]
    fn exactly_once_single_rule() {
        let alpha = TypedAlphabet::with(&[("a", &["s", "t"]), ("b", &["s", "t"])]);
        let rule = HtRule::new(
            "swap",
            alpha.handle(&sym("a")).unwrap(),
            alpha.handle(&sym("b")).unwrap(),
        )
        .unwrap();
        let from = string_graph_str("aa");
        let to_one = string_graph_str("ab");
        // one swap
        let d = derives_with_rule_multiset(&from, &to_one, &[], std::slice::from_ref(&rule), 4)
            .unwrap();
        assert_eq!(d.len(), 1);
        assert!(d.replays(std::slice::from_ref(&rule)));
        // the multiset must be used exactly: zero swaps cannot stay at aa
        assert!(
            derives_with_rule_multiset(&from, &from, &[], std::slice::from_ref(&rule), 4).is_none()
        );
        // two copies of the rule swap both letters
        let to_both = string_graph_str("bb");
        let d2 = derives_with_rule_multiset(
            &from,
            &to_both,
            &[],
            &[rule.clone(), rule.clone()],
            4,
        )
        .unwrap();
        assert_eq!(d2.len(), 2);
        // reusable rules cover any count
        let d3 = derives_with_rule_multiset(&from, &to_both, std::slice::from_ref(&rule), &[], 4)
            .unwrap();
        assert_eq!(d3.len(), 2);
    }

    #[test]
    fn disjoint_marker_system_step() {
        // marker-controlled growth: S + Q rewrites keep the marker around
        let n = TypedAlphabet::with(&[("S", &["s", "t"]), ("Q", &[])]);
        let t = TypedAlphabet::with(&[("a", &["s", "t"])]);
        let s_plus_q = disjoint_union(
            &n.handle(&sym("S")).unwrap(),
            &n.handle(&sym("Q")).unwrap(),
        )
        .unwrap();
        let rhs = disjoint_union(&string_graph_str("a"), &n.handle(&sym("Q")).unwrap()).unwrap();
        let drop_q = {
            let mut g = string_graph_str("a");
            g = disjoint_union(&g, &Hypergraph::empty()).unwrap();
            g
        };
        let rules = vec![
            HtRule::new("emit", s_plus_q.clone(), rhs).unwrap(),
            HtRule::new("emit-and-drop", s_plus_q.clone(), drop_q).unwrap(),
        ];
        let sys = HtSystem::new(n, t, rules, s_plus_q).unwrap();
        let lang = enumerate_language(&sys, 4, 3);
        // both rules produce sg(a), one with a leftover Q marker (not terminal)
        assert_eq!(lang.len(), 1);
    }
}
