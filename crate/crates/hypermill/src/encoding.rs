//! The graph-to-logic encodings.
//!
//! A hypergraph becomes a multiset of atoms — one atom per edge, with the
//! attachment nodes as arguments under a fixed selector enumeration, and
//! one `nu(v)` atom per node. Existentially closing the internal nodes
//! over the tensor of that multiset gives the diagram formula `D(H)`. A
//! transformation rule becomes the closed formula
//! `fa u… (D(rhs) -o D(lhs)[chi])`, where `chi` renames each external
//! node of the left side to the equally-selected external node of the
//! right side. Stacking rule formulas in front of a diagram yields
//! sequents whose derivability coincides with reachability in the
//! rewriting engine; the grammar constructions below package that
//! correspondence as categorial grammars.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::engine::{HtRule, HtSystem};
use crate::grammars::{
    collect_predicates, GrammarMode, HypergraphGrammar, LexKey, Logic, StringGrammar,
};
use crate::hypergraph::{string_graph, Hypergraph, TypedAlphabet, NODE_PREDICATE, NODE_VARIABLE};
use crate::logic::{Formula, Sequent};
use crate::symbol::{fresh_like, Sym};

#[derive(Debug, Error)]
pub enum EncodingError {
    #[error("the empty hypergraph has no diagram formula (empty tensor)")]
    EmptyTensor,
    #[error("rule `{0}` is not well-formed: {1}")]
    MalformedRule(String, String),
    #[error("graphs must share a type and have injective external maps")]
    IncompatibleGraphs,
    #[error("string rewriting rules must have nonempty sides")]
    EmptyRuleSide,
    #[error("{0}")]
    Grammar(String),
}

/// Atom for one edge: the label applied to its attachment nodes in sorted
/// selector order.
fn edge_atom(edge: &crate::hypergraph::Edge) -> Formula {
    let args: Vec<Sym> = edge.att.values().cloned().collect();
    Formula::Atom(edge.label.clone(), args)
}

/// The diagram: edge atoms in sorted order, then one node atom per node.
pub fn diagram(graph: &Hypergraph) -> Vec<Formula> {
    let mut atoms: Vec<Formula> = graph.edges().values().map(edge_atom).collect();
    atoms.sort();
    for v in graph.nodes() {
        atoms.push(Formula::atom(NODE_PREDICATE, [v.clone()]));
    }
    atoms
}

/// `D(H)`: the internal nodes existentially quantified over the tensor of
/// the diagram. The empty hypergraph is rejected (empty tensor).
pub fn diagram_formula(graph: &Hypergraph) -> Result<Formula, EncodingError> {
    let atoms = diagram(graph);
    let body = Formula::big_tensor(atoms).ok_or(EncodingError::EmptyTensor)?;
    Ok(Formula::exists_many(
        graph.internal_nodes().into_iter(),
        body,
    ))
}

/// A rule formula together with its external-node substitution.
#[derive(Debug, Clone)]
pub struct EncodedRule {
    pub rule_name: Sym,
    pub formula: Formula,
    /// chi: external node of the left side → external node of the right.
    pub subst: BTreeMap<Sym, Sym>,
}

/// `fm(p) = fa u… (D(rhs) -o D(lhs)[chi])`, a closed formula.
pub fn rule_formula(rule: &HtRule) -> Result<EncodedRule, EncodingError> {
    if rule.lhs.hg_type() != rule.rhs.hg_type() {
        return Err(EncodingError::MalformedRule(
            rule.name.to_string(),
            "sides differ in type".into(),
        ));
    }
    if !rule.lhs.has_injective_ext() || !rule.rhs.has_injective_ext() {
        return Err(EncodingError::MalformedRule(
            rule.name.to_string(),
            "external maps must be injective".into(),
        ));
    }
    let chi: BTreeMap<Sym, Sym> = rule
        .lhs
        .ext()
        .iter()
        .map(|(sel, v)| (v.clone(), rule.rhs.ext()[sel].clone()))
        .collect();
    let antecedent = diagram_formula(&rule.rhs)?;
    let succedent = diagram_formula(&rule.lhs)?.apply_subst(&chi);
    let universals: Vec<Sym> = rule.rhs.external_nodes().into_iter().collect();
    let formula = Formula::forall_many(universals, Formula::lolli(antecedent, succedent));
    debug_assert!(formula.free_vars().is_empty(), "rule formulas are closed");
    Ok(EncodedRule {
        rule_name: rule.name.clone(),
        formula,
        subst: chi,
    })
}

/// Substitution sending each external node of `graph` to its selector,
/// turning a diagram formula into a start formula over the type.
pub fn selector_substitution(graph: &Hypergraph) -> BTreeMap<Sym, Sym> {
    graph
        .ext()
        .iter()
        .map(|(sel, v)| (v.clone(), sel.clone()))
        .collect()
}

/// The sequent whose derivability coincides with: some graph isomorphic
/// to `target` is derivable from `source` using every rule of
/// `exactly_once` exactly once and rules of `reusable` freely.
pub fn reachability_sequent(
    source: &Hypergraph,
    target: &Hypergraph,
    reusable: &[HtRule],
    exactly_once: &[HtRule],
) -> Result<Sequent, EncodingError> {
    if source.hg_type() != target.hg_type()
        || !source.has_injective_ext()
        || !target.has_injective_ext()
    {
        return Err(EncodingError::IncompatibleGraphs);
    }
    let chi: BTreeMap<Sym, Sym> = source
        .ext()
        .iter()
        .map(|(sel, v)| (v.clone(), target.ext()[sel].clone()))
        .collect();
    let mut antecedent: Vec<Formula> = Vec::new();
    for r in reusable {
        antecedent.push(Formula::bang(rule_formula(r)?.formula));
    }
    for r in exactly_once {
        antecedent.push(rule_formula(r)?.formula);
    }
    antecedent.extend(diagram(target));
    let succedent = diagram_formula(source)?.apply_subst(&chi);
    Ok(Sequent::new(antecedent, succedent))
}

/// Lexicon of plain diagram atoms: each label maps to its own atom over
/// its selectors, and the node symbol maps to the node atom.
fn diagram_lexicon(terminals: &TypedAlphabet) -> Vec<(LexKey, Formula)> {
    let mut lexicon = Vec::new();
    for (label, ty) in terminals.iter() {
        let args: Vec<Sym> = ty.iter().cloned().collect();
        lexicon.push((
            LexKey::Label(label.clone()),
            Formula::Atom(label.clone(), args),
        ));
    }
    lexicon.push((
        LexKey::Node,
        Formula::atom(NODE_PREDICATE, [Sym::new(NODE_VARIABLE)]),
    ));
    lexicon
}

/// Grammar with `!`-guarded rule formulas in the start implication: its
/// language is exactly the language of the transformation system.
pub fn ill1_grammar_of(sys: &HtSystem) -> Result<HypergraphGrammar, EncodingError> {
    let h_s = selector_substitution(&sys.start);
    let start_diagram = diagram_formula(&sys.start)?.apply_subst(&h_s);
    let mut bangs: Vec<Formula> = sys
        .rules
        .iter()
        .map(|r| Ok(Formula::bang(rule_formula(r)?.formula)))
        .collect::<Result<_, EncodingError>>()?;
    bangs.sort();
    let start = match Formula::big_tensor(bangs) {
        Some(product) => Formula::lolli(product, start_diagram),
        None => start_diagram, // no rules: the start graph alone
    };
    HypergraphGrammar::new(
        sys.terminals.clone(),
        sys.start.hg_type(),
        start,
        diagram_lexicon(&sys.terminals),
        Logic::Ill1,
        GrammarMode::Explicit,
    )
    .map_err(|e| EncodingError::Grammar(e.to_string()))
}

/// Grammar equivalent to a linear-time transformation system with time
/// constant `time_const`: plain diagram lexicon, rule formulas carried
/// symbolically (the combinatorial lexicon of the underlying construction
/// is exponential in the constant, so it is not materialized).
pub fn mill1_grammar_of(
    sys: &HtSystem,
    time_const: usize,
) -> Result<HypergraphGrammar, EncodingError> {
    let h_s = selector_substitution(&sys.start);
    let start = diagram_formula(&sys.start)?.apply_subst(&h_s);
    let rule_formulas: Vec<Formula> = sys
        .rules
        .iter()
        .map(|r| Ok(rule_formula(r)?.formula))
        .collect::<Result<_, EncodingError>>()?;
    HypergraphGrammar::new(
        sys.terminals.clone(),
        sys.start.hg_type(),
        start,
        diagram_lexicon(&sys.terminals),
        Logic::Mill1,
        GrammarMode::LinearTime {
            rule_formulas,
            time_const,
        },
    )
    .map_err(|e| EncodingError::Grammar(e.to_string()))
}

fn rename_predicates(f: &Formula, map: &BTreeMap<Sym, Sym>) -> Formula {
    match f {
        Formula::Atom(p, args) => Formula::Atom(
            map.get(p).cloned().unwrap_or_else(|| p.clone()),
            args.clone(),
        ),
        Formula::Tensor(a, b) => {
            Formula::tensor(rename_predicates(a, map), rename_predicates(b, map))
        }
        Formula::Lolli(a, b) => {
            Formula::lolli(rename_predicates(a, map), rename_predicates(b, map))
        }
        Formula::Exists(x, a) => Formula::exists(x.clone(), rename_predicates(a, map)),
        Formula::Forall(x, a) => Formula::forall(x.clone(), rename_predicates(a, map)),
        Formula::Bang(a) => Formula::bang(rename_predicates(a, map)),
    }
}

/// A canonical empty grammar over the given alphabet and type.
fn empty_grammar(
    alphabet: TypedAlphabet,
    ext_type: BTreeSet<Sym>,
) -> Result<HypergraphGrammar, EncodingError> {
    HypergraphGrammar::new(
        alphabet,
        ext_type,
        Formula::atom("q$never", Vec::<Sym>::new()),
        Vec::new(),
        Logic::Mill1,
        GrammarMode::Explicit,
    )
    .map_err(|e| EncodingError::Grammar(e.to_string()))
}

/// Intersection grammar: start formulas and lexicon entries are paired by
/// tensors after making the two grammars' predicate families disjoint.
/// Membership splits back into the two component memberships, so the
/// language is the intersection. Grammars with different external types
/// have disjoint languages, giving the empty grammar.
pub fn intersection_grammar(
    g1: &HypergraphGrammar,
    g2: &HypergraphGrammar,
) -> Result<HypergraphGrammar, EncodingError> {
    if !matches!(g1.mode, GrammarMode::Explicit) || !matches!(g2.mode, GrammarMode::Explicit) {
        return Err(EncodingError::Grammar(
            "intersection needs explicit lexicons".into(),
        ));
    }
    if g1.alphabet != g2.alphabet {
        return Err(EncodingError::Grammar(
            "intersection needs a common alphabet".into(),
        ));
    }
    if g1.ext_type != g2.ext_type {
        return empty_grammar(g1.alphabet.clone(), g1.ext_type.clone());
    }
    // rename the second grammar's predicates away from the first's
    let mut taken = g1.predicates();
    taken.extend(g2.predicates());
    let nu = Sym::new(NODE_PREDICATE);
    let mut rename = BTreeMap::new();
    for p in g2.predicates() {
        if p == nu {
            continue; // the node predicate is shared vocabulary
        }
        if g1.predicates().contains(&p) {
            let fresh = fresh_like(&Sym::new(&format!("{p}$2")), &|s| taken.contains(s));
            taken.insert(fresh.clone());
            rename.insert(p, fresh);
        }
    }
    let start = Formula::tensor(g1.start.clone(), rename_predicates(&g2.start, &rename));
    let mut lexicon = Vec::new();
    for label in g1.alphabet.labels() {
        for a1 in g1.label_entries(label) {
            for a2 in g2.label_entries(label) {
                lexicon.push((
                    LexKey::Label(label.clone()),
                    Formula::tensor(a1.clone(), rename_predicates(a2, &rename)),
                ));
            }
        }
    }
    for c1 in g1.node_entries() {
        for c2 in g2.node_entries() {
            lexicon.push((
                LexKey::Node,
                Formula::tensor(c1.clone(), rename_predicates(c2, &rename)),
            ));
        }
    }
    HypergraphGrammar::new(
        g1.alphabet.clone(),
        g1.ext_type.clone(),
        start,
        lexicon,
        Logic::Mill1,
        GrammarMode::Explicit,
    )
    .map_err(|e| EncodingError::Grammar(e.to_string()))
}

fn fresh_predicate(base: &str, used: &BTreeSet<Sym>) -> Sym {
    fresh_like(&Sym::new(base), &|s| used.contains(s))
}

/// Lifts a string grammar to a hypergraph grammar with the same string
/// language: a fresh nullary predicate `q` makes `q -o q` the do-nothing
/// node formula, and the start formula absorbs the spare copy.
pub fn string_to_hyper_grammar(g: &StringGrammar) -> Result<HypergraphGrammar, EncodingError> {
    let q = fresh_predicate("q", &g.predicates());
    let q_loop = Formula::lolli(
        Formula::Atom(q.clone(), vec![]),
        Formula::Atom(q.clone(), vec![]),
    );
    let mut alphabet = TypedAlphabet::new();
    for a in &g.alphabet {
        alphabet
            .insert(a.clone(), [Sym::new("s"), Sym::new("t")].into())
            .map_err(|e| EncodingError::Grammar(e.to_string()))?;
    }
    let start = Formula::tensor(g.start.clone(), q_loop.clone());
    let mut lexicon: Vec<(LexKey, Formula)> = g
        .lexicon
        .iter()
        .map(|(a, f)| (LexKey::Label(a.clone()), f.clone()))
        .collect();
    lexicon.push((LexKey::Node, q_loop));
    HypergraphGrammar::new(
        alphabet,
        [Sym::new("s"), Sym::new("t")].into(),
        start,
        lexicon,
        Logic::Mill1,
        GrammarMode::Explicit,
    )
    .map_err(|e| EncodingError::Grammar(e.to_string()))
}

/// Projects a hypergraph grammar with external type `{s, t}` onto a
/// string grammar for its nonempty string language. Entries come in two
/// flavors per letter: a border entry (first letter) additionally carries
/// a fresh marker atom and the node formulas of both endpoints, a
/// non-border entry carries the node formula of its right endpoint.
pub fn hyper_to_string_grammar(g: &HypergraphGrammar) -> Result<StringGrammar, EncodingError> {
    let chain: BTreeSet<Sym> = [Sym::new("s"), Sym::new("t")].into();
    if g.ext_type != chain {
        return Err(EncodingError::Grammar(
            "string projection needs external type { s, t }".into(),
        ));
    }
    if !matches!(g.mode, GrammarMode::Explicit) {
        return Err(EncodingError::Grammar(
            "string projection needs an explicit lexicon".into(),
        ));
    }
    let mu = fresh_predicate("mu", &g.predicates());
    let s = Sym::new("s");
    let t = Sym::new("t");
    let x_node = Sym::new(NODE_VARIABLE);
    let mu_s = Formula::Atom(mu.clone(), vec![s.clone()]);
    let start = Formula::tensor(mu_s.clone(), g.start.clone());
    let mut alphabet = BTreeSet::new();
    let mut lexicon = Vec::new();
    for (label, ty) in g.alphabet.iter() {
        if *ty != chain {
            continue; // only chain-shaped labels appear in string graphs
        }
        alphabet.insert(label.clone());
        for b in g.label_entries(label) {
            for c in g.node_entries() {
                // non-border: the entry covers its right endpoint
                lexicon.push((
                    label.clone(),
                    Formula::tensor(b.clone(), c.subst_one(&x_node, &t)),
                ));
            }
            for c1 in g.node_entries() {
                for c2 in g.node_entries() {
                    // border: also the left endpoint and the marker
                    let f = Formula::tensor(
                        Formula::tensor(
                            Formula::tensor(b.clone(), mu_s.clone()),
                            c1.subst_one(&x_node, &s),
                        ),
                        c2.subst_one(&x_node, &t),
                    );
                    lexicon.push((label.clone(), f));
                }
            }
        }
    }
    StringGrammar::new(alphabet, start, lexicon).map_err(|e| EncodingError::Grammar(e.to_string()))
}

/// Converts a string rewriting system into a transformation system over
/// string graphs: every rule `alpha -> beta` becomes
/// `sg(alpha) -> sg(beta)`; the language is the image of the string
/// language under `sg`.
pub fn srs_to_hts(
    rules: &[(Vec<Sym>, Vec<Sym>)],
    start: &[Sym],
    terminals: &BTreeSet<Sym>,
) -> Result<HtSystem, EncodingError> {
    let chain: BTreeSet<Sym> = [Sym::new("s"), Sym::new("t")].into();
    let mut all_symbols: BTreeSet<Sym> = terminals.clone();
    for (alpha, beta) in rules {
        if alpha.is_empty() || beta.is_empty() {
            return Err(EncodingError::EmptyRuleSide);
        }
        all_symbols.extend(alpha.iter().cloned());
        all_symbols.extend(beta.iter().cloned());
    }
    all_symbols.extend(start.iter().cloned());
    let mut nonterminal_alpha = TypedAlphabet::new();
    let mut terminal_alpha = TypedAlphabet::new();
    for sym in &all_symbols {
        let target = if terminals.contains(sym) {
            &mut terminal_alpha
        } else {
            &mut nonterminal_alpha
        };
        target
            .insert(sym.clone(), chain.clone())
            .map_err(|e| EncodingError::Grammar(e.to_string()))?;
    }
    let ht_rules: Vec<HtRule> = rules
        .iter()
        .enumerate()
        .map(|(i, (alpha, beta))| {
            HtRule::new(
                format!("srs{}", i + 1),
                string_graph(alpha),
                string_graph(beta),
            )
            .map_err(|e| EncodingError::Grammar(e.to_string()))
        })
        .collect::<Result<_, _>>()?;
    HtSystem::new(
        nonterminal_alpha,
        terminal_alpha,
        ht_rules,
        string_graph(start),
    )
    .map_err(|e| EncodingError::Grammar(e.to_string()))
}

/// Collects every predicate symbol in a sequent; used by callers that
/// need fresh names.
pub fn sequent_predicates(sequent: &Sequent) -> BTreeSet<Sym> {
    let mut out = BTreeSet::new();
    for f in sequent.antecedent() {
        collect_predicates(f, &mut out);
    }
    collect_predicates(&sequent.succedent, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::string_graph_str;
    use crate::logic::parse_formula;

    fn sym(s: &str) -> Sym {
        Sym::new(s)
    }

    /// The worked diagram example: a C-hyperedge over three nodes, a D and
    /// an X edge, a unary Y, and one isolated node.
    fn cdxy_graph() -> Hypergraph {
        let mut g = Hypergraph::empty();
        for v in ["v1", "v2", "v3", "v4"] {
            g.add_node(sym(v));
        }
        g.add_edge(
            sym("e1"),
            sym("c1"),
            BTreeMap::from([(sym("1"), sym("v1")), (sym("2"), sym("v3")), (sym("3"), sym("v4"))]),
        )
        .unwrap();
        g.add_edge(
            sym("e2"),
            sym("d1"),
            BTreeMap::from([(sym("s"), sym("v3")), (sym("t"), sym("v4"))]),
        )
        .unwrap();
        g.add_edge(
            sym("e3"),
            sym("x1"),
            BTreeMap::from([(sym("s"), sym("v4")), (sym("t"), sym("v3"))]),
        )
        .unwrap();
        g.add_edge(sym("e4"), sym("y1"), BTreeMap::from([(sym("1"), sym("v4"))]))
            .unwrap();
        g
    }

    #[test]
    fn diagram_lists_edges_then_nodes() {
        let g = cdxy_graph();
        let atoms: Vec<String> = diagram(&g).iter().map(|f| f.render()).collect();
        assert_eq!(
            atoms,
            vec![
                "c1(v1,v3,v4)",
                "d1(v3,v4)",
                "x1(v4,v3)",
                "y1(v4)",
                "nu(v1)",
                "nu(v2)",
                "nu(v3)",
                "nu(v4)",
            ]
        );
    }

    #[test]
    fn diagram_of_isolated_node_and_string() {
        let mut point = Hypergraph::empty();
        point.add_node(sym("v"));
        assert_eq!(diagram(&point).len(), 1);
        let sg = string_graph_str("a");
        let atoms: Vec<String> = diagram(&sg).iter().map(|f| f.render()).collect();
        assert_eq!(atoms, vec!["a(v0,v1)", "nu(v0)", "nu(v1)"]);
    }

    #[test]
    fn diagram_formula_quantifies_internal_nodes() {
        let sg = string_graph_str("ab");
        let f = diagram_formula(&sg).unwrap();
        // only v1 is internal
        assert!(f
            .alpha_eq(&parse_formula("ex v1. (a(v0,v1) * b(v1,v2) * nu(v0) * nu(v1) * nu(v2))").unwrap()));
        assert!(diagram_formula(&Hypergraph::empty()).is_err());
        let mut ext_only = Hypergraph::empty();
        ext_only.add_node(sym("v"));
        ext_only.set_ext(sym("x"), sym("v")).unwrap();
        assert_eq!(diagram_formula(&ext_only).unwrap().render(), "nu(v)");
    }

    /// The two-letter chain rewrite: sg(AB) -> sg(BCD).
    fn ab_to_bcd_rule() -> HtRule {
        HtRule::new("ab-to-bcd", string_graph_str("AB"), string_graph_str("BCD")).unwrap()
    }

    #[test]
    fn rule_formula_matches_displayed_shape() {
        let enc = rule_formula(&ab_to_bcd_rule()).unwrap();
        let expected = parse_formula(
            "fa v0. fa v3. ((ex v1. ex v2. (B(v0,v1) * C(v1,v2) * D(v2,v3) * nu(v0) * nu(v1) * nu(v2) * nu(v3))) \
             -o (ex v1. (A(v0,v1) * B(v1,v3) * nu(v0) * nu(v1) * nu(v3))))",
        )
        .unwrap();
        assert!(
            enc.formula.alpha_eq(&expected),
            "got {}",
            enc.formula.render()
        );
        assert!(enc.formula.free_vars().is_empty());
    }

    #[test]
    fn identity_rule_formula_closed() {
        let alpha = TypedAlphabet::with(&[("a", &["s", "t"])]);
        let handle = alpha.handle(&sym("a")).unwrap();
        let rule = HtRule::new("same", handle.clone(), handle).unwrap();
        let enc = rule_formula(&rule).unwrap();
        assert!(enc.formula.free_vars().is_empty());
        // the bound node names are the selectors themselves
        let expected = parse_formula(
            "fa u1. fa u2. ((a(u1,u2) * nu(u1) * nu(u2)) -o (a(u1,u2) * nu(u1) * nu(u2)))",
        )
        .unwrap();
        assert!(enc.formula.alpha_eq(&expected), "got {}", enc.formula.render());
    }

    #[test]
    fn srs_conversion_shapes() {
        let rules = vec![(
            vec![sym("A"), sym("B")],
            vec![sym("B"), sym("C"), sym("D")],
        )];
        let sys = srs_to_hts(&rules, &[sym("A"), sym("B")], &BTreeSet::new()).unwrap();
        assert_eq!(sys.rules.len(), 1);
        assert_eq!(sys.rules[0].lhs.edges().len(), 2);
        assert_eq!(sys.rules[0].rhs.edges().len(), 3);
        assert!(srs_to_hts(
            &[(vec![], vec![sym("A")])],
            &[sym("A")],
            &BTreeSet::new()
        )
        .is_err());
    }

    #[test]
    fn reachability_sequent_shape() {
        let rule = ab_to_bcd_rule();
        let from = string_graph_str("AB");
        let to = string_graph_str("BCD");
        let seq = reachability_sequent(&from, &to, &[], std::slice::from_ref(&rule)).unwrap();
        // 1 rule formula + 3 edge atoms + 4 node atoms
        assert_eq!(seq.antecedent().len(), 8);
        assert!(!seq.contains_bang());
        let with_bang = reachability_sequent(&to, &to, std::slice::from_ref(&rule), &[]).unwrap();
        assert!(with_bang.contains_bang());
    }
}
