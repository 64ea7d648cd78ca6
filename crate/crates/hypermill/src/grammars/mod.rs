//! Categorial grammars over strings and hypergraphs.
//!
//! A grammar assigns formulas to alphabet symbols (and, for hypergraph
//! grammars, to the anonymous node symbol). A string belongs to the
//! language when some choice of lexicon formulas, instantiated with chain
//! variables, yields a derivable sequent; a hypergraph belongs when its
//! type matches the grammar's external type and some per-edge/per-node
//! choice yields a derivable sequent whose succedent is the start formula
//! instantiated at the external nodes.
//!
//! Membership wraps proof search: every acceptance carries a witness whose
//! sequent replays the definition and whose proof passes the checker.

mod text;

pub use text::{parse_grammar, render_grammar, GramParseError};

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::hypergraph::{Hypergraph, TypedAlphabet, NODE_VARIABLE};
use crate::logic::{check_arities, Formula, Sequent};
use crate::prover::{check_proof, prove_ill1, prove_mill1, ProofTree, Verdict};
use crate::symbol::Sym;

#[derive(Debug, Error)]
pub enum GrammarError {
    #[error("letter `{0}` is not in the grammar alphabet")]
    UnknownLetter(String),
    #[error("lexicon entry for `{key}` has free variables outside {allowed}: {formula}")]
    FreeVariables {
        key: String,
        allowed: String,
        formula: String,
    },
    #[error("start formula has free variables outside the external type")]
    StartFreeVariables,
    #[error("the empty word is outside string-grammar membership")]
    EmptyWord,
    #[error("graph uses labels or selector sets not in the grammar alphabet")]
    AlphabetMismatch,
    #[error("{0}")]
    Logic(#[from] crate::logic::LogicError),
    #[error("{0}")]
    Malformed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Logic {
    Mill1,
    Ill1,
}

/// Lexicon key: a labeled hyperedge symbol, or the anonymous node symbol.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum LexKey {
    Label(Sym),
    Node,
}

/// How membership finds its antecedents.
#[derive(Debug, Clone)]
pub enum GrammarMode {
    /// Plain lexicon enumeration.
    Explicit,
    /// Linear-time transformation semantics: the lexicon of diagram atoms
    /// is extended, per edge and node, by up to `time_const` factors drawn
    /// from `rule_formulas`. The factor lexicon is not materialized;
    /// membership enumerates rule multisets of size at most
    /// `time_const * |H|` directly, which defines the same language.
    LinearTime {
        rule_formulas: Vec<Formula>,
        time_const: usize,
    },
}

#[derive(Debug, Clone)]
pub struct StringGrammar {
    pub alphabet: BTreeSet<Sym>,
    pub start: Formula,
    pub lexicon: Vec<(Sym, Formula)>,
}

impl StringGrammar {
    pub fn new(
        alphabet: BTreeSet<Sym>,
        start: Formula,
        lexicon: Vec<(Sym, Formula)>,
    ) -> Result<StringGrammar, GrammarError> {
        let chain: BTreeSet<Sym> = [Sym::new("s"), Sym::new("t")].into();
        if !start.free_vars().is_subset(&chain) {
            return Err(GrammarError::StartFreeVariables);
        }
        for (a, f) in &lexicon {
            if !alphabet.contains(a) {
                return Err(GrammarError::UnknownLetter(a.to_string()));
            }
            if !f.free_vars().is_subset(&chain) {
                return Err(GrammarError::FreeVariables {
                    key: a.to_string(),
                    allowed: "{s, t}".into(),
                    formula: f.render(),
                });
            }
        }
        check_arities(lexicon.iter().map(|(_, f)| f).chain([&start]))?;
        Ok(StringGrammar {
            alphabet,
            start,
            lexicon,
        })
    }

    pub fn entries(&self, letter: &Sym) -> Vec<&Formula> {
        self.lexicon
            .iter()
            .filter(|(a, _)| a == letter)
            .map(|(_, f)| f)
            .collect()
    }

    /// All predicate symbols used anywhere in the grammar.
    pub fn predicates(&self) -> BTreeSet<Sym> {
        let mut out = BTreeSet::new();
        for f in self.lexicon.iter().map(|(_, f)| f).chain([&self.start]) {
            collect_predicates(f, &mut out);
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct HypergraphGrammar {
    pub alphabet: TypedAlphabet,
    pub ext_type: BTreeSet<Sym>,
    pub start: Formula,
    pub lexicon: Vec<(LexKey, Formula)>,
    pub logic: Logic,
    pub mode: GrammarMode,
}

impl HypergraphGrammar {
    pub fn new(
        alphabet: TypedAlphabet,
        ext_type: BTreeSet<Sym>,
        start: Formula,
        lexicon: Vec<(LexKey, Formula)>,
        logic: Logic,
        mode: GrammarMode,
    ) -> Result<HypergraphGrammar, GrammarError> {
        if !start.free_vars().is_subset(&ext_type) {
            return Err(GrammarError::StartFreeVariables);
        }
        let node_var: BTreeSet<Sym> = [Sym::new(NODE_VARIABLE)].into();
        for (key, f) in &lexicon {
            let allowed = match key {
                LexKey::Label(a) => alphabet
                    .type_of(a)
                    .ok_or_else(|| GrammarError::UnknownLetter(a.to_string()))?
                    .clone(),
                LexKey::Node => node_var.clone(),
            };
            if !f.free_vars().is_subset(&allowed) {
                return Err(GrammarError::FreeVariables {
                    key: match key {
                        LexKey::Label(a) => a.to_string(),
                        LexKey::Node => "node".into(),
                    },
                    allowed: format!("{{{}}}", itertools::join(allowed.iter(), ", ")),
                    formula: f.render(),
                });
            }
        }
        let mode_formulas: Vec<&Formula> = match &mode {
            GrammarMode::Explicit => Vec::new(),
            GrammarMode::LinearTime { rule_formulas, .. } => rule_formulas.iter().collect(),
        };
        check_arities(
            lexicon
                .iter()
                .map(|(_, f)| f)
                .chain([&start])
                .chain(mode_formulas),
        )?;
        Ok(HypergraphGrammar {
            alphabet,
            ext_type,
            start,
            lexicon,
            logic,
            mode,
        })
    }

    pub fn label_entries(&self, label: &Sym) -> Vec<&Formula> {
        self.lexicon
            .iter()
            .filter(|(k, _)| matches!(k, LexKey::Label(a) if a == label))
            .map(|(_, f)| f)
            .collect()
    }

    pub fn node_entries(&self) -> Vec<&Formula> {
        self.lexicon
            .iter()
            .filter(|(k, _)| matches!(k, LexKey::Node))
            .map(|(_, f)| f)
            .collect()
    }

    pub fn predicates(&self) -> BTreeSet<Sym> {
        let mut out = BTreeSet::new();
        let mode_formulas: Vec<&Formula> = match &self.mode {
            GrammarMode::Explicit => Vec::new(),
            GrammarMode::LinearTime { rule_formulas, .. } => rule_formulas.iter().collect(),
        };
        for f in self
            .lexicon
            .iter()
            .map(|(_, f)| f)
            .chain([&self.start])
            .chain(mode_formulas)
        {
            collect_predicates(f, &mut out);
        }
        out
    }
}

pub(crate) fn collect_predicates(f: &Formula, out: &mut BTreeSet<Sym>) {
    match f {
        Formula::Atom(p, _) => {
            out.insert(p.clone());
        }
        Formula::Tensor(a, b) | Formula::Lolli(a, b) => {
            collect_predicates(a, out);
            collect_predicates(b, out);
        }
        Formula::Exists(_, a) | Formula::Forall(_, a) | Formula::Bang(a) => {
            collect_predicates(a, out)
        }
    }
}

/// A checked certificate of membership.
#[derive(Debug, Clone)]
pub struct MembershipWitness {
    /// Chosen lexicon formula per edge (before attachment substitution).
    pub edge_choice: BTreeMap<Sym, Formula>,
    /// Chosen lexicon formula per node (before node substitution).
    pub node_choice: BTreeMap<Sym, Formula>,
    pub sequent: Sequent,
    pub proof: ProofTree,
}

impl MembershipWitness {
    pub fn replays(&self) -> bool {
        check_proof(&self.proof, &self.sequent)
    }
}

#[derive(Debug)]
pub enum Membership {
    Accepted(Box<MembershipWitness>),
    Rejected,
    /// Some candidate sequent ran out of budget; the question is open.
    Unknown,
}

impl Membership {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Membership::Accepted(_))
    }

    pub fn witness(&self) -> Option<&MembershipWitness> {
        match self {
            Membership::Accepted(w) => Some(w),
            _ => None,
        }
    }
}

/// Polarity-weighted atom counts: a derivable multiplicative sequent pairs
/// every positive occurrence with a negative one, so unbalanced candidate
/// sequents can be skipped without calling the prover.
fn polarity_counts(f: &Formula, positive: bool, out: &mut BTreeMap<Sym, i64>) {
    match f {
        Formula::Atom(p, _) => {
            *out.entry(p.clone()).or_insert(0) += if positive { 1 } else { -1 };
        }
        Formula::Tensor(a, b) => {
            polarity_counts(a, positive, out);
            polarity_counts(b, positive, out);
        }
        Formula::Lolli(a, b) => {
            polarity_counts(a, !positive, out);
            polarity_counts(b, positive, out);
        }
        Formula::Exists(_, a) | Formula::Forall(_, a) => polarity_counts(a, positive, out),
        Formula::Bang(a) => polarity_counts(a, positive, out),
    }
}

fn balanced(antecedent: &[&Formula], succedent: &Formula) -> bool {
    let mut counts = BTreeMap::new();
    for f in antecedent {
        if f.contains_bang() {
            // reusable formulas break the one-to-one pairing
            return true;
        }
        polarity_counts(f, false, &mut counts);
    }
    polarity_counts(succedent, true, &mut counts);
    counts.values().all(|v| *v == 0)
}

fn prove(logic: Logic, sequent: &Sequent, budget: u64) -> Verdict {
    match logic {
        Logic::Mill1 if !sequent.contains_bang() => {
            prove_mill1(sequent).expect("bang-free by the guard")
        }
        _ => prove_ill1(sequent, budget),
    }
}

/// Decides string membership by lexicon choice plus proof search.
pub fn accepts_string(
    grammar: &StringGrammar,
    word: &[Sym],
    budget: u64,
) -> Result<Membership, GrammarError> {
    if word.is_empty() {
        return Err(GrammarError::EmptyWord);
    }
    for a in word {
        if !grammar.alphabet.contains(a) {
            return Err(GrammarError::UnknownLetter(a.to_string()));
        }
    }
    let s = Sym::new("s");
    let t = Sym::new("t");
    let chain: Vec<Sym> = (0..=word.len())
        .map(|i| Sym::new(&format!("x{i}")))
        .collect();
    let succedent = grammar.start.apply_subst(&BTreeMap::from([
        (s.clone(), chain[0].clone()),
        (t.clone(), chain[word.len()].clone()),
    ]));
    let options: Vec<Vec<&Formula>> = word.iter().map(|a| grammar.entries(a)).collect();
    if options.iter().any(|o| o.is_empty()) {
        return Ok(Membership::Rejected);
    }
    let mut choice = vec![0usize; word.len()];
    let mut saw_budget = false;
    loop {
        let picked: Vec<&Formula> = choice.iter().zip(&options).map(|(i, o)| o[*i]).collect();
        let instantiated: Vec<Formula> = picked
            .iter()
            .enumerate()
            .map(|(i, f)| {
                f.apply_subst(&BTreeMap::from([
                    (s.clone(), chain[i].clone()),
                    (t.clone(), chain[i + 1].clone()),
                ]))
            })
            .collect();
        if balanced(&instantiated.iter().collect::<Vec<_>>(), &succedent) {
            let sequent = Sequent::new(instantiated, succedent.clone());
            match prove(Logic::Mill1, &sequent, budget) {
                Verdict::Derivable(proof) => {
                    let edge_choice = (0..word.len())
                        .map(|i| (Sym::new(&format!("e{}", i + 1)), picked[i].clone()))
                        .collect();
                    return Ok(Membership::Accepted(Box::new(MembershipWitness {
                        edge_choice,
                        node_choice: BTreeMap::new(),
                        sequent,
                        proof,
                    })));
                }
                Verdict::BudgetExhausted(_) => saw_budget = true,
                Verdict::NotDerivable => {}
            }
        }
        // advance the choice vector
        let mut pos = 0;
        loop {
            if pos == choice.len() {
                return Ok(if saw_budget {
                    Membership::Unknown
                } else {
                    Membership::Rejected
                });
            }
            choice[pos] += 1;
            if choice[pos] < options[pos].len() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

/// Decides hypergraph membership per the grammar's mode.
pub fn accepts_hypergraph(
    grammar: &HypergraphGrammar,
    graph: &Hypergraph,
    budget: u64,
) -> Result<Membership, GrammarError> {
    if graph.hg_type() != grammar.ext_type {
        return Ok(Membership::Rejected);
    }
    if !graph.respects(&grammar.alphabet) {
        return Err(GrammarError::AlphabetMismatch);
    }
    let succedent = grammar.start.apply_subst(graph.ext());
    match &grammar.mode {
        GrammarMode::Explicit => explicit_membership(grammar, graph, &succedent, budget),
        GrammarMode::LinearTime {
            rule_formulas,
            time_const,
        } => linear_time_membership(
            grammar,
            graph,
            &succedent,
            rule_formulas,
            *time_const,
            budget,
        ),
    }
}

fn explicit_membership(
    grammar: &HypergraphGrammar,
    graph: &Hypergraph,
    succedent: &Formula,
    budget: u64,
) -> Result<Membership, GrammarError> {
    let node_var = Sym::new(NODE_VARIABLE);
    let edges: Vec<Sym> = graph.edges().keys().cloned().collect();
    let nodes: Vec<Sym> = graph.nodes().iter().cloned().collect();
    let mut options: Vec<Vec<Formula>> = Vec::new();
    for id in &edges {
        let label = &graph.edge(id).unwrap().label;
        let entries = grammar.label_entries(label);
        if entries.is_empty() {
            return Ok(Membership::Rejected);
        }
        options.push(entries.into_iter().cloned().collect());
    }
    let node_options: Vec<Formula> = grammar.node_entries().into_iter().cloned().collect();
    if !nodes.is_empty() && node_options.is_empty() {
        return Ok(Membership::Rejected);
    }
    for _ in &nodes {
        options.push(node_options.clone());
    }

    let mut choice = vec![0usize; options.len()];
    let mut saw_budget = false;
    loop {
        let mut antecedent = Vec::with_capacity(options.len());
        for (i, id) in edges.iter().enumerate() {
            let edge = graph.edge(id).unwrap();
            antecedent.push(options[i][choice[i]].apply_subst(&edge.att));
        }
        for (j, v) in nodes.iter().enumerate() {
            let f = &options[edges.len() + j][choice[edges.len() + j]];
            antecedent.push(f.subst_one(&node_var, v));
        }
        if balanced(&antecedent.iter().collect::<Vec<_>>(), succedent) {
            let sequent = Sequent::new(antecedent, succedent.clone());
            match prove(grammar.logic, &sequent, budget) {
                Verdict::Derivable(proof) => {
                    let edge_choice = edges
                        .iter()
                        .enumerate()
                        .map(|(i, id)| (id.clone(), options[i][choice[i]].clone()))
                        .collect();
                    let node_choice = nodes
                        .iter()
                        .enumerate()
                        .map(|(j, v)| {
                            (
                                v.clone(),
                                options[edges.len() + j][choice[edges.len() + j]].clone(),
                            )
                        })
                        .collect();
                    return Ok(Membership::Accepted(Box::new(MembershipWitness {
                        edge_choice,
                        node_choice,
                        sequent,
                        proof,
                    })));
                }
                Verdict::BudgetExhausted(_) => saw_budget = true,
                Verdict::NotDerivable => {}
            }
        }
        let mut pos = 0;
        loop {
            if pos == choice.len() {
                return Ok(if saw_budget {
                    Membership::Unknown
                } else {
                    Membership::Rejected
                });
            }
            choice[pos] += 1;
            if choice[pos] < options[pos].len() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

/// Membership for the linear-time mode: the diagram of the graph plus a
/// multiset of rule formulas of size at most `time_const * |H|`.
fn linear_time_membership(
    grammar: &HypergraphGrammar,
    graph: &Hypergraph,
    succedent: &Formula,
    rule_formulas: &[Formula],
    time_const: usize,
    budget: u64,
) -> Result<Membership, GrammarError> {
    let diagram = crate::encoding::diagram(graph);
    let bound = time_const * graph.size();
    // enumerate multisets by total size so shorter derivations come first
    let mut counts = vec![0usize; rule_formulas.len()];
    let mut saw_budget = false;
    loop {
        let total: usize = counts.iter().sum();
        if total <= bound {
            let mut antecedent = diagram.clone();
            for (i, n) in counts.iter().enumerate() {
                for _ in 0..*n {
                    antecedent.push(rule_formulas[i].clone());
                }
            }
            if balanced(&antecedent.iter().collect::<Vec<_>>(), succedent) {
                let sequent = Sequent::new(antecedent, succedent.clone());
                match prove(grammar.logic, &sequent, budget) {
                    Verdict::Derivable(proof) => {
                        return Ok(Membership::Accepted(Box::new(MembershipWitness {
                            edge_choice: BTreeMap::new(),
                            node_choice: BTreeMap::new(),
                            sequent,
                            proof,
                        })))
                    }
                    Verdict::BudgetExhausted(_) => saw_budget = true,
                    Verdict::NotDerivable => {}
                }
            }
        }
        // advance the count vector within the bound
        let mut pos = 0;
        loop {
            if pos == counts.len() {
                return Ok(if saw_budget {
                    Membership::Unknown
                } else {
                    Membership::Rejected
                });
            }
            counts[pos] += 1;
            if counts.iter().sum::<usize>() <= bound {
                break;
            }
            counts[pos] = 0;
            pos += 1;
        }
    }
}

/// Membership of a word in the string language of a hypergraph grammar.
pub fn string_language_member(
    grammar: &HypergraphGrammar,
    word: &[Sym],
    budget: u64,
) -> Result<Membership, GrammarError> {
    let graph = crate::hypergraph::string_graph(word);
    accepts_hypergraph(grammar, &graph, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    fn letters(word: &str) -> Vec<Sym> {
        word.chars().map(|c| Sym::new(&c.to_string())).collect()
    }

    /// Single-letter grammar: a ▷ p(s,t) and a ▷ fa x. (p(x,s) -o q(x,t));
    /// start q(s,t). Accepts exactly `aa`.
    fn two_step_grammar() -> StringGrammar {
        StringGrammar::new(
            [Sym::new("a")].into(),
            parse_formula("q(s,t)").unwrap(),
            vec![
                (Sym::new("a"), parse_formula("p(s,t)").unwrap()),
                (
                    Sym::new("a"),
                    parse_formula("fa x. (p(x,s) -o q(x,t))").unwrap(),
                ),
            ],
        )
        .unwrap()
    }

    #[test]
    fn two_step_grammar_accepts_aa() {
        let g = two_step_grammar();
        let m = accepts_string(&g, &letters("aa"), 10_000).unwrap();
        let w = m.witness().expect("aa accepted");
        assert!(w.replays());
        assert_eq!(
            w.sequent,
            crate::logic::parse_sequent(
                "p(x0,x1), fa x. (p(x,x1) -o q(x,x2)) |- q(x0,x2)"
            )
            .unwrap()
        );
    }

    #[test]
    fn two_step_grammar_rejects_single_and_triple() {
        let g = two_step_grammar();
        assert!(matches!(
            accepts_string(&g, &letters("a"), 10_000).unwrap(),
            Membership::Rejected
        ));
        assert!(matches!(
            accepts_string(&g, &letters("aaa"), 10_000).unwrap(),
            Membership::Rejected
        ));
    }

    #[test]
    fn empty_lexicon_rejects_everything() {
        let g = StringGrammar::new(
            [Sym::new("a")].into(),
            parse_formula("q(s,t)").unwrap(),
            vec![],
        )
        .unwrap();
        assert!(matches!(
            accepts_string(&g, &letters("a"), 10_000).unwrap(),
            Membership::Rejected
        ));
    }

    #[test]
    fn unknown_letter_and_empty_word_are_errors() {
        let g = two_step_grammar();
        assert!(accepts_string(&g, &letters("ab"), 10_000).is_err());
        assert!(matches!(
            accepts_string(&g, &[], 10_000),
            Err(GrammarError::EmptyWord)
        ));
    }

    #[test]
    fn lexicon_free_variable_condition_enforced() {
        let bad = StringGrammar::new(
            [Sym::new("a")].into(),
            parse_formula("q(s,t)").unwrap(),
            vec![(Sym::new("a"), parse_formula("p(s,u)").unwrap())],
        );
        assert!(matches!(bad, Err(GrammarError::FreeVariables { .. })));
    }

    #[test]
    fn balance_prune_agrees_with_prover_on_small_cases() {
        let f = |s: &str| parse_formula(s).unwrap();
        // balanced and derivable
        assert!(balanced(&[&f("p"), &f("p -o q")], &f("q")));
        // unbalanced: q missing a positive partner
        assert!(!balanced(&[&f("p")], &f("q")));
        // balance is necessary but not sufficient
        assert!(balanced(&[&f("p -o q"), &f("q -o p")], &f("p -o p")));
    }
}
