//! Hypergraph language models: formulas evaluated as sets of abstract
//! hypergraphs.
//!
//! Tensor is elementwise parallel composition, implication is its
//! residual over a bounded universe, and quantifiers are unions and
//! intersections over a finite variable window standing in for the
//! countable variable supply. The window and the node/edge caps make
//! evaluation terminate; every check that depends on them is
//! window-relative and reports when a composition was clipped by the
//! caps, so exact checks can assert that no clipping occurred.
//!
//! The canonical-model construction turns a derivable sequent into a
//! hypergraph whose nodes are free variables and whose edges are labeled
//! by antecedent formulas with their free-variable occurrences replaced
//! by placeholders.

mod text;

pub use text::{parse_valuation, render_report, SemParseError};

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::hypergraph::{
    canonical_form, parallel_composition, substitute, Hypergraph, TypedAlphabet,
};
use crate::logic::{Formula, Sequent};
use crate::symbol::Sym;

#[derive(Debug, Error)]
pub enum SemanticsError {
    #[error("variable `{0}` is outside the window")]
    WindowViolation(String),
    #[error("`!` has no language interpretation here")]
    BangNotSupported,
    #[error("the external set must be drawn from the antecedent variables and the node set")]
    ExternalOutsideNodes,
}

/// Finite stand-in for the space of all hypergraphs: a label alphabet,
/// a variable window, and caps on node and edge counts.
#[derive(Debug, Clone)]
pub struct BoundedUniverse {
    pub alphabet: TypedAlphabet,
    pub window: BTreeSet<Sym>,
    pub max_nodes: usize,
    pub max_edges: usize,
}

impl BoundedUniverse {
    pub fn fits(&self, g: &Hypergraph) -> bool {
        g.nodes().len() <= self.max_nodes
            && g.edges().len() <= self.max_edges
            && g.hg_type().is_subset(&self.window)
    }

    /// Enumerates one representative per isomorphism class of the graphs
    /// in the universe. Exponential; keep the caps small.
    pub fn enumerate(&self) -> Vec<Hypergraph> {
        let mut out: BTreeMap<String, Hypergraph> = BTreeMap::new();
        let window: Vec<Sym> = self.window.iter().cloned().collect();
        for n in 0..=self.max_nodes {
            let nodes: Vec<Sym> = (0..n).map(|i| Sym::new(&format!("u{i}"))).collect();
            // all single edges over n nodes
            let mut single_edges: Vec<(Sym, BTreeMap<Sym, Sym>)> = Vec::new();
            for (label, ty) in self.alphabet.iter() {
                let sels: Vec<Sym> = ty.iter().cloned().collect();
                let mut stack = vec![BTreeMap::new()];
                for sel in &sels {
                    let mut next = Vec::new();
                    for partial in &stack {
                        for v in &nodes {
                            let mut m: BTreeMap<Sym, Sym> = partial.clone();
                            m.insert(sel.clone(), v.clone());
                            next.push(m);
                        }
                    }
                    stack = next;
                }
                for att in stack {
                    single_edges.push((label.clone(), att));
                }
            }
            // edge multisets up to max_edges (combinations with repetition)
            let mut edge_sets: Vec<Vec<usize>> = vec![Vec::new()];
            for _ in 0..self.max_edges {
                let mut next = edge_sets.clone();
                for set in &edge_sets {
                    let lo = set.last().copied().unwrap_or(0);
                    for i in lo..single_edges.len() {
                        let mut s = set.clone();
                        s.push(i);
                        next.push(s);
                    }
                }
                edge_sets = next;
                edge_sets.sort();
                edge_sets.dedup();
            }
            // ext maps: partial window -> nodes
            let mut ext_maps: Vec<BTreeMap<Sym, Sym>> = vec![BTreeMap::new()];
            for sel in &window {
                let mut next = Vec::new();
                for partial in &ext_maps {
                    next.push(partial.clone());
                    for v in &nodes {
                        let mut m = partial.clone();
                        m.insert(sel.clone(), v.clone());
                        next.push(m);
                    }
                }
                ext_maps = next;
            }
            for edges in &edge_sets {
                for ext in &ext_maps {
                    let mut g = Hypergraph::empty();
                    for v in &nodes {
                        g.add_node(v.clone());
                    }
                    for (k, idx) in edges.iter().enumerate() {
                        let (label, att) = &single_edges[*idx];
                        g.add_edge(Sym::new(&format!("e{k}")), label.clone(), att.clone())
                            .unwrap();
                    }
                    for (sel, v) in ext {
                        g.set_ext(sel.clone(), v.clone()).unwrap();
                    }
                    out.entry(canonical_form(&g)).or_insert(g);
                }
            }
        }
        out.into_values().collect()
    }
}

/// A finite set of abstract hypergraphs: canonical form → representative.
/// Equality compares the canonical forms, not the representatives.
#[derive(Debug, Clone, Default)]
pub struct Language {
    graphs: BTreeMap<String, Hypergraph>,
}

impl PartialEq for Language {
    fn eq(&self, other: &Self) -> bool {
        self.graphs.keys().eq(other.graphs.keys())
    }
}

impl Eq for Language {}

impl Language {
    pub fn empty() -> Language {
        Language::default()
    }

    pub fn singleton(g: &Hypergraph) -> Language {
        let mut out = Language::empty();
        out.insert(g);
        out
    }

    pub fn insert(&mut self, g: &Hypergraph) {
        self.graphs.entry(canonical_form(g)).or_insert_with(|| g.clone());
    }

    pub fn contains(&self, g: &Hypergraph) -> bool {
        self.graphs.contains_key(&canonical_form(g))
    }

    pub fn is_subset(&self, other: &Language) -> bool {
        self.graphs.keys().all(|k| other.graphs.contains_key(k))
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Hypergraph> {
        self.graphs.values()
    }

    pub fn union_with(&mut self, other: &Language) {
        for (k, g) in &other.graphs {
            self.graphs.entry(k.clone()).or_insert_with(|| g.clone());
        }
    }

    pub fn intersect(&self, other: &Language) -> Language {
        Language {
            graphs: self
                .graphs
                .iter()
                .filter(|(k, _)| other.graphs.contains_key(*k))
                .map(|(k, g)| (k.clone(), g.clone()))
                .collect(),
        }
    }
}

/// A valuation: atom languages over a bounded universe. Composite values
/// come from the model clauses.
#[derive(Debug, Clone)]
pub struct Valuation {
    pub universe: BoundedUniverse,
    pub atoms: BTreeMap<Formula, Language>,
}

impl Valuation {
    pub fn atom_language(&self, atom: &Formula) -> Language {
        self.atoms.get(atom).cloned().unwrap_or_default()
    }
}

/// Clause-by-clause evaluation with memoization and clip tracking.
pub struct Evaluator<'a> {
    pub valuation: &'a Valuation,
    memo: BTreeMap<Formula, Language>,
    universe_cache: Option<Vec<Hypergraph>>,
    /// Set when some composition left the bounded universe; checks that
    /// need exactness assert this stayed false.
    pub clipped: bool,
}

impl<'a> Evaluator<'a> {
    pub fn new(valuation: &'a Valuation) -> Evaluator<'a> {
        Evaluator {
            valuation,
            memo: BTreeMap::new(),
            universe_cache: None,
            clipped: false,
        }
    }

    fn universe(&mut self) -> Vec<Hypergraph> {
        if self.universe_cache.is_none() {
            self.universe_cache = Some(self.valuation.universe.enumerate());
        }
        self.universe_cache.clone().unwrap()
    }

    fn check_window(&self, f: &Formula) -> Result<(), SemanticsError> {
        for v in f.free_vars() {
            if !self.valuation.universe.window.contains(&v) {
                return Err(SemanticsError::WindowViolation(v.to_string()));
            }
        }
        Ok(())
    }

    /// Elementwise parallel composition, clipped to the universe.
    /// The second component reports whether some composition left the
    /// universe; a graph outside the universe belongs to no language, so
    /// strict inclusion checks treat an overflow as a failure.
    pub fn compose_strict(&mut self, a: &Language, b: &Language) -> (Language, bool) {
        let mut out = Language::empty();
        let mut overflow = false;
        for g1 in a.iter() {
            for g2 in b.iter() {
                let c = parallel_composition(g1, g2);
                if self.valuation.universe.fits(&c) {
                    out.insert(&c);
                } else {
                    self.clipped = true;
                    overflow = true;
                }
            }
        }
        (out, overflow)
    }

    /// Elementwise parallel composition, clipped to the universe.
    pub fn compose(&mut self, a: &Language, b: &Language) -> Language {
        self.compose_strict(a, b).0
    }

    pub fn eval(&mut self, f: &Formula) -> Result<Language, SemanticsError> {
        self.check_window(f)?;
        let key = f.alpha_normalize();
        if let Some(hit) = self.memo.get(&key) {
            return Ok(hit.clone());
        }
        let out = match f {
            Formula::Atom(..) => self.valuation.atom_language(&key),
            Formula::Tensor(a, b) => {
                let la = self.eval(a)?;
                let lb = self.eval(b)?;
                self.compose(&la, &lb)
            }
            Formula::Lolli(a, b) => {
                let la = self.eval(a)?;
                let lb = self.eval(b)?;
                let mut out = Language::empty();
                for h in self.universe() {
                    let mut all_in = true;
                    for g in la.iter() {
                        let c = parallel_composition(&h, g);
                        if !self.valuation.universe.fits(&c) {
                            self.clipped = true;
                            all_in = false;
                            break;
                        }
                        if !lb.contains(&c) {
                            all_in = false;
                            break;
                        }
                    }
                    if all_in {
                        out.insert(&h);
                    }
                }
                out
            }
            Formula::Exists(x, body) => {
                let mut out = Language::empty();
                for y in self.valuation.universe.window.clone() {
                    out.union_with(&self.eval(&body.subst_one(x, &y))?);
                }
                out
            }
            Formula::Forall(x, body) => {
                let window: Vec<Sym> = self.valuation.universe.window.iter().cloned().collect();
                let mut acc: Option<Language> = None;
                for y in window {
                    let l = self.eval(&body.subst_one(x, &y))?;
                    acc = Some(match acc {
                        None => l,
                        Some(prev) => prev.intersect(&l),
                    });
                }
                acc.unwrap_or_default()
            }
            Formula::Bang(_) => return Err(SemanticsError::BangNotSupported),
        };
        self.memo.insert(key, out.clone());
        Ok(out)
    }

    /// A sequent is true when the composition of the antecedent languages
    /// is included in the succedent language; with an empty antecedent,
    /// when the empty hypergraph lies in the succedent language.
    pub fn sequent_true(&mut self, s: &Sequent) -> Result<bool, SemanticsError> {
        let succedent = self.eval(&s.succedent)?;
        match s.antecedent() {
            [] => Ok(succedent.contains(&Hypergraph::empty())),
            [first, rest @ ..] => {
                let mut acc = self.eval(first)?;
                for f in rest {
                    let l = self.eval(f)?;
                    let (next, overflow) = self.compose_strict(&acc, &l);
                    if overflow {
                        // a composition outside the universe belongs to no
                        // language, so the inclusion fails
                        return Ok(false);
                    }
                    acc = next;
                }
                Ok(acc.is_subset(&succedent))
            }
        }
    }
}

/// The canonical hypergraph of a sequent context: nodes are the free
/// variables of the antecedent plus `extra_nodes`, each antecedent
/// formula becomes one edge labeled by its placeholder form and attached
/// to its free-variable occurrences, and the external nodes are those
/// free in the succedent plus `external`.
pub fn canonical_hypergraph(
    antecedent: &[Formula],
    succedent: &Formula,
    extra_nodes: &BTreeSet<Sym>,
    external: &BTreeSet<Sym>,
) -> Result<Hypergraph, SemanticsError> {
    let mut nodes: BTreeSet<Sym> = extra_nodes.clone();
    for f in antecedent {
        nodes.extend(f.free_vars());
    }
    if !external.is_subset(&nodes) {
        return Err(SemanticsError::ExternalOutsideNodes);
    }
    let mut g = Hypergraph::empty();
    for v in &nodes {
        g.add_node(v.clone());
    }
    for (i, f) in antecedent.iter().enumerate() {
        let (shape, occurrences) = f.alpha_normalize().placeholder_form();
        let label = Sym::new(&shape.render());
        let att: BTreeMap<Sym, Sym> = occurrences
            .iter()
            .enumerate()
            .map(|(j, v)| (Sym::new(&format!("xi{}", j + 1)), v.clone()))
            .collect();
        g.add_edge(Sym::new(&format!("e{}", i + 1)), label, att)
            .expect("occurrence variables are nodes");
    }
    let succedent_free = succedent.free_vars();
    for v in &nodes {
        if succedent_free.contains(v) || external.contains(v) {
            g.set_ext(v.clone(), v.clone()).expect("node present");
        }
    }
    Ok(g)
}

/// Saturates the atom assignments under substitution: for every total
/// window map, the substituted image of each member is added to the
/// target atom's language, to a fixpoint. The result satisfies the
/// substitution-monotonicity clause by construction.
pub fn close_under_substitution(valuation: &Valuation) -> Valuation {
    let mut out = valuation.clone();
    let window: Vec<Sym> = out.universe.window.iter().cloned().collect();
    let mut maps: Vec<BTreeMap<Sym, Sym>> = vec![BTreeMap::new()];
    for v in &window {
        let mut next = Vec::new();
        for partial in &maps {
            for w in &window {
                let mut m = partial.clone();
                m.insert(v.clone(), w.clone());
                next.push(m);
            }
        }
        maps = next;
    }
    loop {
        let mut changed = false;
        let snapshot: Vec<(Formula, Vec<Hypergraph>)> = out
            .atoms
            .iter()
            .map(|(a, l)| (a.clone(), l.iter().cloned().collect()))
            .collect();
        for (atom, members) in snapshot {
            for h in &maps {
                let target_atom = atom.apply_subst(h).alpha_normalize();
                for g in &members {
                    let sub = substitute(g, h);
                    if !out.universe.fits(&sub) {
                        continue;
                    }
                    let entry = out.atoms.entry(target_atom.clone()).or_default();
                    if !entry.contains(&sub) {
                        entry.insert(&sub);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return out;
        }
    }
}

/// One failed model-clause check.
#[derive(Debug, Clone)]
pub struct ClauseViolation {
    pub clause: u8,
    pub detail: String,
}

/// Report of [`check_model_axioms`].
#[derive(Debug, Clone, Default)]
pub struct ModelReport {
    pub violations: Vec<ClauseViolation>,
    pub checks: usize,
    pub clipped: bool,
}

impl ModelReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Verifies the model clauses over the valuation: substitution
/// monotonicity of the atom assignments under every total window map,
/// and the composite clauses recomputed from member-level operations on
/// each sample formula.
pub fn check_model_axioms(valuation: &Valuation, samples: &[Formula]) -> ModelReport {
    let mut report = ModelReport::default();
    let window: Vec<Sym> = valuation.universe.window.iter().cloned().collect();

    // every total map window -> window
    let mut maps: Vec<BTreeMap<Sym, Sym>> = vec![BTreeMap::new()];
    for v in &window {
        let mut next = Vec::new();
        for partial in &maps {
            for w in &window {
                let mut m = partial.clone();
                m.insert(v.clone(), w.clone());
                next.push(m);
            }
        }
        maps = next;
    }

    // clause 1 on the atom assignments
    for (atom, language) in &valuation.atoms {
        for h in &maps {
            report.checks += 1;
            let target_atom = atom.apply_subst(h).alpha_normalize();
            let target = valuation.atom_language(&target_atom);
            for g in language.iter() {
                let sub = substitute(g, h);
                if !valuation.universe.fits(&sub) {
                    report.clipped = true;
                    continue;
                }
                if !target.contains(&sub) {
                    report.violations.push(ClauseViolation {
                        clause: 1,
                        detail: format!(
                            "sub_h of a member of u({}) is missing from u({})",
                            atom.render(),
                            target_atom.render()
                        ),
                    });
                }
            }
        }
    }

    // clauses 2-5 recomputed on the samples
    let mut ev = Evaluator::new(valuation);
    for f in samples {
        match f {
            Formula::Tensor(a, b) => {
                report.checks += 1;
                let (Ok(whole), Ok(la), Ok(lb)) = (ev.eval(f), ev.eval(a), ev.eval(b)) else {
                    continue;
                };
                let mut direct = Language::empty();
                for g1 in la.iter() {
                    for g2 in lb.iter() {
                        let c = parallel_composition(g1, g2);
                        if ev.valuation.universe.fits(&c) {
                            direct.insert(&c);
                        } else {
                            report.clipped = true;
                        }
                    }
                }
                if whole != direct {
                    report.violations.push(ClauseViolation {
                        clause: 2,
                        detail: format!("tensor clause fails on {}", f.render()),
                    });
                }
            }
            Formula::Lolli(a, b) => {
                report.checks += 1;
                let (Ok(whole), Ok(la), Ok(lb)) = (ev.eval(f), ev.eval(a), ev.eval(b)) else {
                    continue;
                };
                for h in valuation.universe.enumerate() {
                    let all_in = la.iter().all(|g| {
                        let c = parallel_composition(&h, g);
                        valuation.universe.fits(&c) && lb.contains(&c)
                    });
                    if all_in != whole.contains(&h) {
                        report.violations.push(ClauseViolation {
                            clause: 3,
                            detail: format!("implication clause fails on {}", f.render()),
                        });
                        break;
                    }
                }
            }
            Formula::Exists(x, body) => {
                report.checks += 1;
                let Ok(whole) = ev.eval(f) else { continue };
                let mut direct = Language::empty();
                for y in &window {
                    if let Ok(l) = ev.eval(&body.subst_one(x, y)) {
                        direct.union_with(&l);
                    }
                }
                if whole != direct {
                    report.violations.push(ClauseViolation {
                        clause: 4,
                        detail: format!("existential clause fails on {}", f.render()),
                    });
                }
            }
            Formula::Forall(x, body) => {
                report.checks += 1;
                let Ok(whole) = ev.eval(f) else { continue };
                let mut direct: Option<Language> = None;
                for y in &window {
                    if let Ok(l) = ev.eval(&body.subst_one(x, y)) {
                        direct = Some(match direct {
                            None => l,
                            Some(prev) => prev.intersect(&l),
                        });
                    }
                }
                if whole != direct.unwrap_or_default() {
                    report.violations.push(ClauseViolation {
                        clause: 5,
                        detail: format!("universal clause fails on {}", f.render()),
                    });
                }
            }
            _ => {}
        }
    }
    report.clipped |= ev.clipped;
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::string_graph_str;
    use crate::logic::{parse_formula, parse_sequent};

    fn sym(s: &str) -> Sym {
        Sym::new(s)
    }

    fn tiny_valuation() -> Valuation {
        // p and q nullary over an alphabet with a single binary label;
        // the window carries the chain selectors so string graphs fit
        let universe = BoundedUniverse {
            alphabet: TypedAlphabet::with(&[("a", &["s", "t"])]),
            window: [sym("s"), sym("t")].into(),
            max_nodes: 2,
            max_edges: 1,
        };
        let mut atoms = BTreeMap::new();
        atoms.insert(
            parse_formula("p").unwrap(),
            Language::singleton(&string_graph_str("a")),
        );
        atoms.insert(
            parse_formula("q").unwrap(),
            Language::singleton(&Hypergraph::empty()),
        );
        close_under_substitution(&Valuation { universe, atoms })
    }

    #[test]
    fn tensor_on_singletons_composes() {
        // unclosed raw valuation: the tensor of two singleton languages
        // is the singleton of the parallel composition
        let universe = BoundedUniverse {
            alphabet: TypedAlphabet::with(&[("a", &["s", "t"])]),
            window: [sym("s"), sym("t")].into(),
            max_nodes: 3,
            max_edges: 2,
        };
        let mut atoms = BTreeMap::new();
        atoms.insert(
            parse_formula("p").unwrap(),
            Language::singleton(&string_graph_str("a")),
        );
        atoms.insert(
            parse_formula("q").unwrap(),
            Language::singleton(&string_graph_str("a")),
        );
        let val = Valuation { universe, atoms };
        let mut ev = Evaluator::new(&val);
        let l = ev.eval(&parse_formula("p * q").unwrap()).unwrap();
        assert_eq!(l.len(), 1);
        // sharing both selectors, the two copies fuse endpoint to endpoint
        let mut expected = string_graph_str("a");
        let extra = BTreeMap::from([(sym("s"), sym("v0")), (sym("t"), sym("v1"))]);
        expected
            .add_edge(sym("e9"), sym("a"), extra)
            .unwrap();
        assert!(l.contains(&expected));
        assert!(!ev.clipped);
    }

    #[test]
    fn implication_with_unit_antecedent_is_identityish() {
        // u(q) = {empty}: composing with the empty graph is the identity,
        // so u(q -o p) = u(p) within the universe
        let val = tiny_valuation();
        let mut ev = Evaluator::new(&val);
        let imp = ev.eval(&parse_formula("q -o p").unwrap()).unwrap();
        let p = ev.eval(&parse_formula("p").unwrap()).unwrap();
        assert_eq!(imp, p);
    }

    #[test]
    fn identity_and_pairing_sequents_true() {
        let val = tiny_valuation();
        let mut ev = Evaluator::new(&val);
        assert!(ev.sequent_true(&parse_sequent("p |- p").unwrap()).unwrap());
        assert!(ev.sequent_true(&parse_sequent("p, q |- p * q").unwrap()).unwrap());
        assert!(ev.sequent_true(&parse_sequent("|- q").unwrap()).unwrap());
        assert!(!ev.sequent_true(&parse_sequent("|- p").unwrap()).unwrap());
    }

    #[test]
    fn residuation_both_ways() {
        // inclusion reads strictly: a composition that leaves the
        // universe belongs to no language
        let val = tiny_valuation();
        let mut ev = Evaluator::new(&val);
        for (a, b, c) in [("p", "q", "p"), ("q", "p", "p"), ("p", "q", "q"), ("q", "q", "p")] {
            let la = ev.eval(&parse_formula(a).unwrap()).unwrap();
            let lb = ev.eval(&parse_formula(b).unwrap()).unwrap();
            let lc = ev.eval(&parse_formula(c).unwrap()).unwrap();
            let (composed, overflow) = ev.compose_strict(&la, &lb);
            let lhs = !overflow && composed.is_subset(&lc);
            let residual = ev
                .eval(&parse_formula(&format!("{b} -o {c}")).unwrap())
                .unwrap();
            let rhs = la.is_subset(&residual);
            assert_eq!(lhs, rhs, "residuation failed on {a},{b},{c}");
        }
    }

    #[test]
    fn window_violation_rejected() {
        let val = tiny_valuation();
        let mut ev = Evaluator::new(&val);
        assert!(matches!(
            ev.eval(&parse_formula("r(zz)").unwrap()),
            Err(SemanticsError::WindowViolation(_))
        ));
    }

    #[test]
    fn canonical_hypergraph_single_atom() {
        let p = parse_formula("p(x,y)").unwrap();
        let g = canonical_hypergraph(
            std::slice::from_ref(&p),
            &p,
            &BTreeSet::new(),
            &BTreeSet::new(),
        )
        .unwrap();
        assert_eq!(g.nodes().len(), 2);
        assert_eq!(g.edges().len(), 1);
        let e = g.edges().values().next().unwrap();
        assert_eq!(e.label.as_str(), "p(xi1,xi2)");
        assert_eq!(e.att[&sym("xi1")], sym("x"));
        assert_eq!(e.att[&sym("xi2")], sym("y"));
        assert_eq!(g.hg_type().len(), 2);
        assert_eq!(g.ext()[&sym("x")], sym("x"));
    }

    #[test]
    fn canonical_hypergraph_empty_context_is_empty_graph() {
        let closed = parse_formula("fa x. p(x) -o p(x)").unwrap();
        let g = canonical_hypergraph(&[], &closed, &BTreeSet::new(), &BTreeSet::new()).unwrap();
        assert!(g.is_empty());
    }

    #[test]
    fn canonical_hypergraph_type_determined_by_goal_and_external() {
        // equality as concrete graphs depends only on the type
        let gamma = [parse_formula("p(x,y)").unwrap()];
        let a1 = parse_formula("q(x)").unwrap();
        let a2 = parse_formula("r(x) * r(x)").unwrap();
        let g1 = canonical_hypergraph(&gamma, &a1, &BTreeSet::new(), &BTreeSet::new()).unwrap();
        let g2 = canonical_hypergraph(&gamma, &a2, &BTreeSet::new(), &BTreeSet::new()).unwrap();
        assert_eq!(g1, g2);
        let g3 = canonical_hypergraph(
            &gamma,
            &a1,
            &BTreeSet::new(),
            &[sym("y")].into(),
        )
        .unwrap();
        assert_ne!(g1, g3);
        assert!(canonical_hypergraph(
            &gamma,
            &a1,
            &BTreeSet::new(),
            &[sym("zz")].into()
        )
        .is_err());
    }

    #[test]
    fn isolated_node_removal() {
        // an extra node not free in the antecedent is isolated; removing
        // it from the node and external sets removes exactly that node
        let gamma = [parse_formula("p(x,y)").unwrap()];
        let a = parse_formula("p(x,y)").unwrap();
        let with: BTreeSet<Sym> = [sym("v")].into();
        let g_with =
            canonical_hypergraph(&gamma, &a, &with, &BTreeSet::new()).unwrap();
        let g_without =
            canonical_hypergraph(&gamma, &a, &BTreeSet::new(), &BTreeSet::new()).unwrap();
        assert_eq!(g_with.nodes().len(), 3);
        assert_eq!(g_without.nodes().len(), 2);
        let mut removed = g_with.clone();
        removed = {
            let mut out = Hypergraph::empty();
            for v in removed.nodes().iter().filter(|v| **v != sym("v")) {
                out.add_node(v.clone());
            }
            for (id, e) in removed.edges() {
                out.add_edge(id.clone(), e.label.clone(), e.att.clone()).unwrap();
            }
            for (sel, v) in removed.ext() {
                out.set_ext(sel.clone(), v.clone()).unwrap();
            }
            out
        };
        assert_eq!(removed, g_without);
    }

    #[test]
    fn model_axioms_hold_on_closed_valuation() {
        let val = tiny_valuation();
        let samples = [
            parse_formula("p * q").unwrap(),
            parse_formula("q -o p").unwrap(),
        ];
        let report = check_model_axioms(&val, &samples);
        assert!(report.ok(), "violations: {:?}", report.violations);
        assert!(report.checks > 0);
    }

    #[test]
    fn dropped_image_is_reported() {
        // u(p(x)) nonempty but u(p(y)) empty: substitution monotonicity
        // fails for the map sending x to y
        let universe = BoundedUniverse {
            alphabet: TypedAlphabet::with(&[("a", &["s", "t"])]),
            window: [sym("x"), sym("y")].into(),
            max_nodes: 2,
            max_edges: 1,
        };
        let mut atoms = BTreeMap::new();
        atoms.insert(
            parse_formula("p(x)").unwrap(),
            Language::singleton(&Hypergraph::empty()),
        );
        let val = Valuation { universe, atoms };
        let report = check_model_axioms(&val, &[]);
        assert!(!report.ok());
        assert!(report.violations.iter().all(|v| v.clause == 1));
    }
}
