//! Built-in corpus system: a linear-time transformation system over
//! string graphs whose language encodes exact cover by 3-sets.
//!
//! Generated graphs are string graphs of the shape
//! `b w1 b  b w2 b … b wm b  c  a x1 a y1 a z1 … a xn a yn a zn`
//! where all blocks are nonempty binary words and the multiset
//! `{w1,…,wm}` equals the multiset of the words of some subset of the
//! `(x,y,z)` triples. Membership therefore decides whether a set can be
//! exactly covered by chosen 3-sets, which is NP-complete.
//!
//! Every rule except the single switch to the scanning phase strictly
//! increases the number of terminal edges, so the system is linear-time
//! with time constant 1 (relative to the size of the generated graph).

use std::collections::BTreeMap;

use crate::hypergraph::{disjoint_union, Hypergraph, TypedAlphabet};
use crate::symbol::Sym;

use super::{HtRule, HtSystem};

fn sym(s: &str) -> Sym {
    Sym::new(s)
}

fn edge(g: &mut Hypergraph, id: &str, label: &str, pairs: &[(&str, &str)]) {
    let att: BTreeMap<Sym, Sym> = pairs
        .iter()
        .map(|(sel, v)| (sym(sel), sym(v)))
        .collect();
    for (_, v) in pairs {
        g.add_node(sym(v));
    }
    g.add_edge(sym(id), sym(label), att).unwrap();
}

/// String graph of a word given as labels, as a fresh builder (nodes
/// `n0..`, edges `g1..`), with `s`/`t` external.
fn word_graph(labels: &[&str]) -> Hypergraph {
    let mut g = Hypergraph::empty();
    g.add_node(sym("n0"));
    for (i, l) in labels.iter().enumerate() {
        let from = format!("n{i}");
        let to = format!("n{}", i + 1);
        edge(&mut g, &format!("g{}", i + 1), l, &[("s", &from), ("t", &to)]);
    }
    g.set_ext(sym("s"), sym("n0")).unwrap();
    g.set_ext(sym("t"), sym(&format!("n{}", labels.len()))).unwrap();
    g
}

/// The seven rule groups of the exact-cover system.
pub fn np_complete_system() -> HtSystem {
    let nonterminals = TypedAlphabet::with(&[
        ("P", &["s", "t"]),
        ("Q1", &[]),
        ("Q2", &[]),
        ("S", &["s", "t"]),
        ("T1", &["s", "t"]),
        ("T2", &["1", "2", "3", "4"]),
        ("U", &["s", "t"]),
    ]);
    let terminals = TypedAlphabet::with(&[
        ("0", &["s", "t"]),
        ("1", &["s", "t"]),
        ("a", &["s", "t"]),
        ("b", &["s", "t"]),
        ("c", &["s", "t"]),
    ]);
    let handle = |l: &str| nonterminals.handle(&sym(l)).unwrap();
    let with_q1 = |g: &Hypergraph| disjoint_union(g, &handle("Q1")).unwrap();
    let with_q2 = |g: &Hypergraph| disjoint_union(g, &handle("Q2")).unwrap();
    let s_q1 = with_q1(&handle("S"));
    let t1_q1 = with_q1(&handle("T1"));
    let t2_q1 = with_q1(&handle("T2"));
    let u_q2 = with_q2(&handle("U"));

    let mut rules = Vec::new();

    // 1: spawn a free triple of T1 word slots
    rules.push(
        HtRule::new(
            "free-triple",
            s_q1.clone(),
            with_q1(&word_graph(&["S", "a", "T1", "a", "T1", "a", "T1"])),
        )
        .unwrap(),
    );

    // 2: T1 expands to a nonempty binary word
    for k in ["0", "1"] {
        rules.push(
            HtRule::new(
                format!("word-grow-{k}"),
                t1_q1.clone(),
                with_q1(&word_graph(&[k, "T1"])),
            )
            .unwrap(),
        );
        rules.push(
            HtRule::new(
                format!("word-stop-{k}"),
                t1_q1.clone(),
                with_q1(&word_graph(&[k])),
            )
            .unwrap(),
        );
    }

    // 3: spawn a chosen triple: three T2 gadgets writing each word both
    // into the main chain and into a parallel P block
    rules.push(
        HtRule::new("chosen-triple", s_q1.clone(), {
            let mut g = Hypergraph::empty();
            edge(&mut g, "e1", "S", &[("s", "n0"), ("t", "n1")]);
            edge(&mut g, "e2", "a", &[("s", "n1"), ("t", "n2")]);
            edge(&mut g, "e3", "a", &[("s", "n3"), ("t", "n4")]);
            edge(&mut g, "e4", "a", &[("s", "n5"), ("t", "n6")]);
            for (i, (lo, hi)) in [("n2", "n3"), ("n4", "n5"), ("n6", "n7")].iter().enumerate() {
                let top_l = format!("m{}", 2 * i);
                let top_r = format!("m{}", 2 * i + 1);
                edge(
                    &mut g,
                    &format!("p{i}"),
                    "P",
                    &[("s", &top_l), ("t", &top_r)],
                );
                edge(
                    &mut g,
                    &format!("t2_{i}"),
                    "T2",
                    &[("1", &top_l), ("2", &top_r), ("3", lo), ("4", hi)],
                );
            }
            g.set_ext(sym("s"), sym("n0")).unwrap();
            g.set_ext(sym("t"), sym("n7")).unwrap();
            disjoint_union(&g, &handle("Q1")).unwrap()
        })
        .unwrap(),
    );

    // 4: T2 writes one letter onto both of its rails
    for k in ["0", "1"] {
        rules.push(
            HtRule::new(format!("pair-grow-{k}"), t2_q1.clone(), {
                let mut g = Hypergraph::empty();
                edge(&mut g, "e1", k, &[("s", "p0"), ("t", "p1")]);
                edge(&mut g, "e2", k, &[("s", "q0"), ("t", "q1")]);
                edge(
                    &mut g,
                    "e3",
                    "T2",
                    &[("1", "p1"), ("2", "p2"), ("3", "q1"), ("4", "q2")],
                );
                g.set_ext(sym("1"), sym("p0")).unwrap();
                g.set_ext(sym("2"), sym("p2")).unwrap();
                g.set_ext(sym("3"), sym("q0")).unwrap();
                g.set_ext(sym("4"), sym("q2")).unwrap();
                disjoint_union(&g, &handle("Q1")).unwrap()
            })
            .unwrap(),
        );
        rules.push(
            HtRule::new(format!("pair-stop-{k}"), t2_q1.clone(), {
                let mut g = Hypergraph::empty();
                edge(&mut g, "e1", k, &[("s", "p0"), ("t", "p1")]);
                edge(&mut g, "e2", k, &[("s", "q0"), ("t", "q1")]);
                g.set_ext(sym("1"), sym("p0")).unwrap();
                g.set_ext(sym("2"), sym("p1")).unwrap();
                g.set_ext(sym("3"), sym("q0")).unwrap();
                g.set_ext(sym("4"), sym("q1")).unwrap();
                disjoint_union(&g, &handle("Q1")).unwrap()
            })
            .unwrap(),
        );
    }

    // 5: switch to the scanning phase
    rules.push(HtRule::new("start-scan", s_q1.clone(), u_q2.clone()).unwrap());

    // 6: the scanner turns a P block into an inline b-delimited block
    rules.push(
        HtRule::new(
            "collect-block",
            {
                let mut g = Hypergraph::empty();
                edge(&mut g, "e1", "P", &[("s", "x1"), ("t", "x2")]);
                edge(&mut g, "e2", "U", &[("s", "y1"), ("t", "y2")]);
                g.set_ext(sym("1"), sym("x1")).unwrap();
                g.set_ext(sym("2"), sym("x2")).unwrap();
                g.set_ext(sym("3"), sym("y1")).unwrap();
                g.set_ext(sym("4"), sym("y2")).unwrap();
                disjoint_union(&g, &handle("Q2")).unwrap()
            },
            {
                let mut g = Hypergraph::empty();
                edge(&mut g, "e1", "b", &[("s", "y1"), ("t", "x1")]);
                edge(&mut g, "e2", "b", &[("s", "x2"), ("t", "y2")]);
                edge(&mut g, "e3", "U", &[("s", "y2"), ("t", "y3")]);
                g.set_ext(sym("1"), sym("x1")).unwrap();
                g.set_ext(sym("2"), sym("x2")).unwrap();
                g.set_ext(sym("3"), sym("y1")).unwrap();
                g.set_ext(sym("4"), sym("y3")).unwrap();
                disjoint_union(&g, &handle("Q2")).unwrap()
            },
        )
        .unwrap(),
    );

    // 7: finish scanning
    rules.push(
        HtRule::new("finish", u_q2, {
            let mut g = Hypergraph::empty();
            edge(&mut g, "e1", "c", &[("s", "s"), ("t", "t")]);
            g.set_ext(sym("s"), sym("s")).unwrap();
            g.set_ext(sym("t"), sym("t")).unwrap();
            g
        })
        .unwrap(),
    );

    HtSystem::new(nonterminals, terminals, rules, s_q1).unwrap()
}

/// The string graph of shape `(1)` for an exact-cover instance given as
/// the ground-set words and the chosen-collection triples.
pub fn exact_cover_target(set_words: &[&str], triples: &[(&str, &str, &str)]) -> Hypergraph {
    let mut labels: Vec<String> = Vec::new();
    for w in set_words {
        labels.push("b".into());
        labels.extend(w.chars().map(|c| c.to_string()));
        labels.push("b".into());
    }
    labels.push("c".into());
    for (x, y, z) in triples {
        for w in [x, y, z] {
            labels.push("a".into());
            labels.extend(w.chars().map(|c| c.to_string()));
        }
    }
    let refs: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
    word_graph(&refs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{applicable_matches, derives, enumerate_language};
    use crate::hypergraph::canonical_form;

    #[test]
    fn rule_inventory() {
        let sys = np_complete_system();
        assert_eq!(sys.rules.len(), 13);
        assert_eq!(
            sys.nonterminals.type_of(&sym("T2")).unwrap().len(),
            4,
            "the pairing gadget has four tentacles"
        );
        assert!(sys.terminals_persist());
        // the scan switch is the only non-growing rule
        let non_growing: Vec<&str> = sys
            .rules
            .iter()
            .filter(|r| {
                let lt = r
                    .lhs
                    .edges()
                    .values()
                    .filter(|e| sys.terminals.contains(&e.label))
                    .count();
                let rt = r
                    .rhs
                    .edges()
                    .values()
                    .filter(|e| sys.terminals.contains(&e.label))
                    .count();
                rt <= lt
            })
            .map(|r| r.name.as_str())
            .collect();
        assert_eq!(non_growing, vec!["start-scan"]);
    }

    #[test]
    fn start_graph_shape() {
        let sys = np_complete_system();
        assert_eq!(sys.start.nodes().len(), 2);
        assert_eq!(sys.start.edges().len(), 2);
    }

    #[test]
    fn scan_switch_applies_once() {
        let sys = np_complete_system();
        let rule = sys.rule(&sym("start-scan")).unwrap();
        assert_eq!(applicable_matches(&sys.start, rule).len(), 1);
    }

    #[test]
    fn smallest_positive_instance_derivable() {
        // one chosen triple (0,1,0); ground set as the same multiset
        let sys = np_complete_system();
        let target = exact_cover_target(&["0", "1", "0"], &[("0", "1", "0")]);
        let d = derives(&sys, &target, target.size()).expect("positive instance");
        assert_eq!(d.len(), 9);
        assert!(d.replays(&sys.rules));
    }

    #[test]
    fn enumerated_prefixes_match_hand_derivation() {
        // within six steps and size 17 the reachable terminal graphs are
        // the bare separator and the one-free-triple strings: scanning
        // before any expansion gives sg(c); one free triple with three
        // one-letter words gives sg(c a k1 a k2 a k3)
        let sys = np_complete_system();
        let langs = enumerate_language(&sys, 17, 6);
        let mut expected = std::collections::BTreeSet::new();
        expected.insert(canonical_form(&word_graph(&["c"])));
        for k1 in ["0", "1"] {
            for k2 in ["0", "1"] {
                for k3 in ["0", "1"] {
                    expected.insert(canonical_form(&word_graph(&[
                        "c", "a", k1, "a", k2, "a", k3,
                    ])));
                }
            }
        }
        assert_eq!(langs, expected);
    }

    #[test]
    fn negative_instance_not_derivable_within_linear_bound() {
        let sys = np_complete_system();
        let negative = exact_cover_target(&["0", "0", "0"], &[("0", "1", "0")]);
        assert!(derives(&sys, &negative, negative.size()).is_none());
    }
}
