//! Worked examples bundled as constructors: small grammars, rules, and
//! graphs used by the test suites and the command-line corpus runner.

use std::collections::{BTreeMap, BTreeSet};

use crate::engine::{HtRule, HtSystem};
use crate::grammars::{HypergraphGrammar, StringGrammar};
use crate::hypergraph::{string_graph_str, Hypergraph, TypedAlphabet};
use crate::logic::parse_formula;
use crate::symbol::Sym;

fn sym(s: &str) -> Sym {
    Sym::new(s)
}

fn f(s: &str) -> crate::logic::Formula {
    parse_formula(s).unwrap()
}

fn edge(g: &mut Hypergraph, id: &str, label: &str, pairs: &[(&str, &str)]) {
    let att: BTreeMap<Sym, Sym> = pairs.iter().map(|(sel, v)| (sym(sel), sym(v))).collect();
    for (_, v) in pairs {
        g.add_node(sym(v));
    }
    g.add_edge(sym(id), sym(label), att).unwrap();
}

/// One-letter alphabet, two types per letter: the grammar accepts exactly
/// the two-letter word `aa`.
pub fn two_step_string_grammar() -> StringGrammar {
    StringGrammar::new(
        [sym("a")].into(),
        f("q(s,t)"),
        vec![
            (sym("a"), f("p(s,t)")),
            (sym("a"), f("fa x. (p(x,s) -o q(x,t))")),
        ],
    )
    .unwrap()
}

/// The node-counting grammar: a binary `a`, a ternary `b`, and a start
/// formula demanding one reachability atom and exactly three spare node
/// atoms, so only four-node graphs of the right shape are accepted.
pub fn node_counting_grammar() -> HypergraphGrammar {
    crate::grammars::parse_grammar(
        "\
logic mill1
type a { s, t }
type b { 1, 2, 3 }
ext { s, t }
start : p(s,t) * r * r * r
lex a : q(s,t)
lex a : fa x. (q(x,s) -o p(x,t))
lex b : q(2,3) -o p(1,1) -o p(2,3)
lex node : r
lex node : fa y. p(x_,y)
",
    )
    .unwrap()
}

/// The three membership witnesses for the node-counting grammar: the
/// mixed a/b hypergraph, the two-letter string graph, and the edge-free
/// four-node graph.
pub fn node_counting_graphs() -> (Hypergraph, Hypergraph, Hypergraph) {
    let mut h = Hypergraph::empty();
    for v in ["v1", "v2", "v3", "v4"] {
        h.add_node(sym(v));
    }
    edge(&mut h, "e1", "a", &[("s", "v3"), ("t", "v4")]);
    edge(&mut h, "e2", "b", &[("1", "v1"), ("2", "v3"), ("3", "v4")]);
    h.set_ext(sym("s"), sym("v3")).unwrap();
    h.set_ext(sym("t"), sym("v4")).unwrap();

    let chain = string_graph_str("aa");

    let mut bare = Hypergraph::empty();
    for v in ["w1", "w2", "w3", "w4"] {
        bare.add_node(sym(v));
    }
    bare.set_ext(sym("s"), sym("w1")).unwrap();
    bare.set_ext(sym("t"), sym("w4")).unwrap();

    (h, chain, bare)
}

/// The fan rewrite rule: an A,B fan out of a shared internal node into
/// the external nodes x and y becomes a ternary C gadget with a D edge.
/// Its encoded formula is the worked rule-formula example.
pub fn fan_rule() -> HtRule {
    let mut lhs = Hypergraph::empty();
    edge(&mut lhs, "e1", "A", &[("s", "u2"), ("t", "u1")]);
    edge(&mut lhs, "e2", "B", &[("s", "u2"), ("t", "u3")]);
    lhs.set_ext(sym("x"), sym("u1")).unwrap();
    lhs.set_ext(sym("y"), sym("u3")).unwrap();
    let mut rhs = Hypergraph::empty();
    rhs.add_node(sym("v2"));
    edge(&mut rhs, "e1", "C", &[("1", "v1"), ("2", "v3"), ("3", "v4")]);
    edge(&mut rhs, "e2", "D", &[("s", "v3"), ("t", "v4")]);
    rhs.set_ext(sym("x"), sym("v3")).unwrap();
    rhs.set_ext(sym("y"), sym("v4")).unwrap();
    HtRule::new("fan-to-gadget", lhs, rhs).unwrap()
}

/// Host graph for the fan rule: the fan plus an X back-edge and a unary
/// Y hyperedge.
pub fn fan_host() -> Hypergraph {
    let mut g = Hypergraph::empty();
    edge(&mut g, "a", "A", &[("s", "n"), ("t", "n1")]);
    edge(&mut g, "b", "B", &[("s", "n"), ("t", "n2")]);
    edge(&mut g, "x", "X", &[("s", "n2"), ("t", "n1")]);
    edge(&mut g, "y", "Y", &[("1", "n2")]);
    g
}

/// Result of applying the fan rule to its host: the C/D gadget with the
/// X and Y edges re-attached, plus the isolated gadget node.
pub fn fan_result() -> Hypergraph {
    let mut g = Hypergraph::empty();
    g.add_node(sym("v2"));
    edge(&mut g, "e1", "C", &[("1", "v1"), ("2", "v3"), ("3", "v4")]);
    edge(&mut g, "e2", "D", &[("s", "v3"), ("t", "v4")]);
    edge(&mut g, "e3", "X", &[("s", "v4"), ("t", "v3")]);
    edge(&mut g, "e4", "Y", &[("1", "v4")]);
    g
}

/// The four-tentacle chain-growing rule: the hyperedge label `A` has type
/// `{i, o, i2, o2}`; one application prepends an `a` edge on the i-rail
/// and a `b` edge on the i2-rail.
pub fn rail_rule() -> HtRule {
    let ty = ["i", "o", "i2", "o2"];
    let mut lhs = Hypergraph::empty();
    let att: BTreeMap<Sym, Sym> = ty.iter().map(|s| (sym(s), sym(s))).collect();
    for s in ty {
        lhs.add_node(sym(s));
    }
    lhs.add_edge(sym("e1"), sym("A"), att).unwrap();
    for s in ty {
        lhs.set_ext(sym(s), sym(s)).unwrap();
    }
    let mut rhs = Hypergraph::empty();
    edge(&mut rhs, "g1", "a", &[("s", "ni"), ("t", "m1")]);
    edge(&mut rhs, "g2", "b", &[("s", "ni2"), ("t", "m2")]);
    edge(
        &mut rhs,
        "g3",
        "A",
        &[("i", "m1"), ("o", "no"), ("i2", "m2"), ("o2", "no2")],
    );
    rhs.set_ext(sym("i"), sym("ni")).unwrap();
    rhs.set_ext(sym("o"), sym("no")).unwrap();
    rhs.set_ext(sym("i2"), sym("ni2")).unwrap();
    rhs.set_ext(sym("o2"), sym("no2")).unwrap();
    HtRule::new("grow-rails", lhs, rhs).unwrap()
}

/// The rail-rule demonstration graphs: start host, after one application,
/// after two.
pub fn rail_graphs() -> (Hypergraph, Hypergraph, Hypergraph) {
    let mut start = Hypergraph::empty();
    edge(&mut start, "c", "c", &[("s", "w0"), ("t", "w1")]);
    edge(&mut start, "d", "d", &[("s", "w0"), ("t", "w2")]);
    start.add_node(sym("w3"));
    edge(
        &mut start,
        "A",
        "A",
        &[("i", "w1"), ("o", "w3"), ("i2", "w0"), ("o2", "w2")],
    );

    let mut once = Hypergraph::empty();
    edge(&mut once, "c", "c", &[("s", "w0"), ("t", "w1")]);
    edge(&mut once, "d", "d", &[("s", "w0"), ("t", "w2")]);
    edge(&mut once, "a1", "a", &[("s", "w1"), ("t", "m1")]);
    edge(&mut once, "b1", "b", &[("s", "w0"), ("t", "m2")]);
    once.add_node(sym("w3"));
    edge(
        &mut once,
        "A",
        "A",
        &[("i", "m1"), ("o", "w3"), ("i2", "m2"), ("o2", "w2")],
    );

    let mut twice = Hypergraph::empty();
    edge(&mut twice, "c", "c", &[("s", "w0"), ("t", "w1")]);
    edge(&mut twice, "d", "d", &[("s", "w0"), ("t", "w2")]);
    edge(&mut twice, "a1", "a", &[("s", "w1"), ("t", "m1")]);
    edge(&mut twice, "b1", "b", &[("s", "w0"), ("t", "m2")]);
    edge(&mut twice, "a2", "a", &[("s", "m1"), ("t", "m3")]);
    edge(&mut twice, "b2", "b", &[("s", "m2"), ("t", "m4")]);
    twice.add_node(sym("w3"));
    edge(
        &mut twice,
        "A",
        "A",
        &[("i", "m3"), ("o", "w3"), ("i2", "m4"), ("o2", "w2")],
    );

    (start, once, twice)
}

/// Transformation system generating the chains `sg(a^n)`, n >= 1.
pub fn chain_system() -> HtSystem {
    let n = TypedAlphabet::with(&[("S", &["s", "t"])]);
    let t = TypedAlphabet::with(&[("a", &["s", "t"])]);
    let s_handle = n.handle(&sym("S")).unwrap();
    let mut grow_rhs = Hypergraph::empty();
    edge(&mut grow_rhs, "g1", "a", &[("s", "v0"), ("t", "v1")]);
    edge(&mut grow_rhs, "g2", "S", &[("s", "v1"), ("t", "v2")]);
    grow_rhs.set_ext(sym("s"), sym("v0")).unwrap();
    grow_rhs.set_ext(sym("t"), sym("v2")).unwrap();
    let rules = vec![
        HtRule::new("grow", s_handle.clone(), grow_rhs).unwrap(),
        HtRule::new("stop", s_handle.clone(), string_graph_str("a")).unwrap(),
    ];
    HtSystem::new(n, t, rules, s_handle).unwrap()
}

/// Transformation system with a non-string rule: it grows clusters of
/// unary `e` hyperedges on fresh nodes; the generated graphs have empty
/// type and k >= 1 single-tentacle edges.
pub fn cluster_system() -> HtSystem {
    let n = TypedAlphabet::with(&[("S", &[])]);
    let t = TypedAlphabet::with(&[("e", &["1"])]);
    let s_handle = n.handle(&sym("S")).unwrap();
    let mut grow_rhs = Hypergraph::empty();
    edge(&mut grow_rhs, "g1", "e", &[("1", "v0")]);
    grow_rhs.add_edge(sym("g2"), sym("S"), BTreeMap::new()).unwrap();
    let mut stop_rhs = Hypergraph::empty();
    edge(&mut stop_rhs, "g1", "e", &[("1", "v0")]);
    let rules = vec![
        HtRule::new("grow", s_handle.clone(), grow_rhs).unwrap(),
        HtRule::new("stop", s_handle.clone(), stop_rhs).unwrap(),
    ];
    HtSystem::new(n, t, rules, s_handle).unwrap()
}

/// Balanced-block grammar: the string language is the nonempty
/// concatenations of balanced blocks `a^n b^n`.
pub fn balanced_blocks_grammar() -> StringGrammar {
    StringGrammar::new(
        [sym("a"), sym("b")].into(),
        f("str(s,t)"),
        vec![
            // one block, as a whole block of a larger word or alone
            (sym("a"), f("fa u. (bb(t,u) -o seg(s,u))")),
            (sym("a"), f("fa u. (seg(t,u) -o fa v. (bb(u,v) -o seg(s,v)))")),
            (sym("a"), f("fa u. (bb(t,u) -o str(s,u))")),
            (sym("a"), f("fa u. (seg(t,u) -o fa v. (bb(u,v) -o str(s,v)))")),
            (sym("a"), f("fa u. (bb(t,u) -o fa v. (str(u,v) -o str(s,v)))")),
            (
                sym("a"),
                f("fa u. (seg(t,u) -o fa v. (bb(u,v) -o fa w. (str(v,w) -o str(s,w))))"),
            ),
            (sym("b"), f("bb(s,t)")),
        ],
    )
    .unwrap()
}

/// Staggered-block grammar: the string language is
/// `a^(n+1) (b^k a^k)^n b^+` — an `a` prefix whose length exceeds the
/// number of mirrored blocks by one, then a `b` tail.
pub fn staggered_blocks_grammar() -> StringGrammar {
    StringGrammar::new(
        [sym("a"), sym("b")].into(),
        f("s2(s,t)"),
        vec![
            (sym("a"), f("fa u. (bt(t,u) -o s2(s,u))")),
            (sym("a"), f("fa u. (mid(t,u) -o fa v. (bt(u,v) -o s2(s,v)))")),
            (sym("a"), f("fa u. (wseg(t,u) -o mid(s,u))")),
            (sym("a"), f("fa u. (mid(t,u) -o fa v. (wseg(u,v) -o mid(s,v)))")),
            (sym("a"), f("ah(s,t)")),
            (sym("b"), f("bt(s,t)")),
            (sym("b"), f("fa u. (bt(t,u) -o bt(s,u))")),
            (sym("b"), f("fa u. (ah(t,u) -o wseg(s,u))")),
            (sym("b"), f("fa u. (wseg(t,u) -o fa v. (ah(u,v) -o wseg(s,v)))")),
        ],
    )
    .unwrap()
}

/// The external-node fusion demonstration: two triangles of isolated
/// external nodes sharing two selectors.
pub fn triangle_pair() -> (Hypergraph, Hypergraph) {
    let mut h1 = Hypergraph::empty();
    for (sel, v) in [("x", "p1"), ("y", "p2"), ("z", "p3")] {
        h1.add_node(sym(v));
        h1.set_ext(sym(sel), sym(v)).unwrap();
    }
    let mut h2 = Hypergraph::empty();
    for (sel, v) in [("y", "q1"), ("z", "q2"), ("t", "q3")] {
        h2.add_node(sym(v));
        h2.set_ext(sym(sel), sym(v)).unwrap();
    }
    (h1, h2)
}

/// All hypergraphs over the alphabet with external type exactly
/// `ext_type` and size at most `max_size`, one per isomorphism class.
pub fn all_graphs_of_type(
    alphabet: &TypedAlphabet,
    ext_type: &BTreeSet<Sym>,
    max_size: usize,
) -> Vec<Hypergraph> {
    let universe = crate::semantics::BoundedUniverse {
        alphabet: alphabet.clone(),
        window: ext_type.clone(),
        max_nodes: max_size,
        max_edges: max_size,
    };
    universe
        .enumerate()
        .into_iter()
        .filter(|g| g.size() <= max_size && g.hg_type() == *ext_type)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{applicable_matches, apply};
    use crate::grammars::{accepts_string, string_language_member, Membership};
    use crate::hypergraph::is_isomorphic;
    use crate::prover::DEFAULT_BUDGET;

    fn letters(word: &str) -> Vec<Sym> {
        word.chars().map(|c| Sym::new(&c.to_string())).collect()
    }

    #[test]
    fn rail_rule_applies_twice_as_depicted() {
        let rule = rail_rule();
        let (start, once, twice) = rail_graphs();
        let occs = applicable_matches(&start, &rule);
        assert_eq!(occs.len(), 1);
        let step1 = apply(&start, &rule, &occs[0]).unwrap();
        assert!(is_isomorphic(&step1, &once).is_some());
        let occs2 = applicable_matches(&step1, &rule);
        assert_eq!(occs2.len(), 1);
        let step2 = apply(&step1, &rule, &occs2[0]).unwrap();
        assert!(is_isomorphic(&step2, &twice).is_some());
    }

    #[test]
    fn fan_rule_replays_application() {
        let rule = fan_rule();
        let host = fan_host();
        let occs = applicable_matches(&host, &rule);
        assert_eq!(occs.len(), 1);
        let result = apply(&host, &rule, &occs[0]).unwrap();
        assert!(is_isomorphic(&result, &fan_result()).is_some());
    }

    #[test]
    fn balanced_blocks_language_small_words() {
        let g = balanced_blocks_grammar();
        let positive = ["ab", "abab", "aabb", "ababab", "aabbab", "abaabb"];
        for w in positive {
            assert!(
                accepts_string(&g, &letters(w), DEFAULT_BUDGET).unwrap().is_accepted(),
                "expected {w} accepted"
            );
        }
        let negative = ["a", "b", "ba", "aab", "abba", "bbaa", "aabbb"];
        for w in negative {
            assert!(
                !accepts_string(&g, &letters(w), DEFAULT_BUDGET).unwrap().is_accepted(),
                "expected {w} rejected"
            );
        }
    }

    #[test]
    fn staggered_blocks_language_small_words() {
        let g = staggered_blocks_grammar();
        // the a-prefix length always exceeds the block count by one
        let positive = ["ab", "abb", "aabab", "aababb", "aabbaab", "aabbaabb"];
        for w in positive {
            assert!(
                accepts_string(&g, &letters(w), DEFAULT_BUDGET).unwrap().is_accepted(),
                "expected {w} accepted"
            );
        }
        let negative = ["a", "b", "ba", "aab", "abab", "abba", "aabb", "bab"];
        for w in negative {
            assert!(
                !accepts_string(&g, &letters(w), DEFAULT_BUDGET).unwrap().is_accepted(),
                "expected {w} rejected"
            );
        }
    }

    #[test]
    fn node_counting_grammar_accepts_its_graphs() {
        let g = node_counting_grammar();
        let (h, chain, bare) = node_counting_graphs();
        for (name, graph) in [("mixed", &h), ("chain", &chain), ("bare", &bare)] {
            let m = crate::grammars::accepts_hypergraph(&g, graph, DEFAULT_BUDGET).unwrap();
            assert!(m.is_accepted(), "{name} should be accepted");
            assert!(m.witness().unwrap().replays());
        }
    }

    #[test]
    fn node_counting_string_language() {
        let g = node_counting_grammar();
        assert!(string_language_member(&g, &letters("aa"), DEFAULT_BUDGET)
            .unwrap()
            .is_accepted());
        assert!(matches!(
            string_language_member(&g, &letters("ab"), DEFAULT_BUDGET),
            Err(crate::grammars::GrammarError::AlphabetMismatch)
        ));
        assert!(!string_language_member(&g, &letters("a"), DEFAULT_BUDGET)
            .unwrap()
            .is_accepted());
    }

    #[test]
    fn node_counting_rejects_fused_chain() {
        // fusing the chain endpoints drops the node count to two, which
        // the three spare node atoms in the start formula rule out; the
        // underlying sequent-level substitution would still be derivable,
        // which is exactly why node formulas are part of membership
        let g = node_counting_grammar();
        let chain = string_graph_str("aa");
        let fused =
            crate::hypergraph::quotient(&chain, &[(sym("v0"), sym("v1"))]).unwrap();
        let m = crate::grammars::accepts_hypergraph(&g, &fused, DEFAULT_BUDGET).unwrap();
        assert!(!m.is_accepted());
        // the sequent-level shadow of the fused graph stays derivable
        let seq = crate::logic::parse_sequent(
            "q(x0,x0), fa x. (q(x,x0) -o p(x,x1)) |- p(x0,x1)",
        )
        .unwrap();
        assert!(crate::prover::prove_mill1(&seq).unwrap().is_derivable());
    }

    #[test]
    fn cluster_system_language() {
        let sys = cluster_system();
        let lang = crate::engine::enumerate_language(&sys, 6, 5);
        // k = 1..3 clusters fit in size 6
        assert_eq!(lang.len(), 3);
    }

    #[test]
    fn all_graphs_enumerator_counts() {
        let alpha = TypedAlphabet::with(&[("a", &["s", "t"])]);
        let graphs = all_graphs_of_type(&alpha, &[sym("s"), sym("t")].into(), 3);
        // every graph has the full chain type and at most 3 nodes+edges
        assert!(graphs.iter().all(|g| g.hg_type().len() == 2 && g.size() <= 3));
        assert!(graphs.iter().any(|g| is_isomorphic(g, &string_graph_str("a")).is_some()));
        // a 1-node graph with s=t plus loops, 2-node graphs, chains
        assert!(graphs.len() > 3);
    }
}
