//! Focused proof search for the multiplicative first-order fragment with `!`.
//!
//! The engine is a two-sided focused system with an unbounded zone for
//! bodies of `!`-formulas and a linear zone consumed lazily (input/output
//! context threading with backtracking, so multiset splits are never
//! enumerated eagerly). Atoms are positive: an axiom closes a right focus
//! on an atom against a matching antecedent atom.
//!
//! Quantifier witnesses are chosen by unification: `exists`-right and
//! `forall`-left introduce metavariables which atom matching resolves;
//! creation timestamps guard against out-of-scope eigenvariable bindings.
//! In a function-free logic this is equivalent to backtracking over the
//! free variables of the sequent plus a fresh one.
//!
//! With `!` in play the search space is infinite, so the ILL1 entry point
//! takes a step budget (counting decide steps) and prunes any branch that
//! revisits a decide state equal to an ancestor up to variable renaming
//! (minimal proofs never loop, so pruning keeps the search complete).
//! An exhausted search without a budget cut is a sound refutation.
//!
//! Search results are replayed into ordinary sequent-calculus trees whose
//! every node carries its conclusion; `check_proof` validates them
//! independently.

use std::collections::{BTreeMap, BTreeSet};
use std::rc::Rc;

use crate::logic::{Formula, Sequent};
use crate::symbol::Sym;

use super::tree::{ProofTree, Rule};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchStats {
    pub decide_steps: u64,
}

#[derive(Debug)]
pub enum Outcome {
    Proved(ProofTree),
    Exhausted(SearchStats),
    OutOfBudget(SearchStats),
}

const META_PREFIX: &str = "?m";

fn is_meta(s: &Sym) -> bool {
    s.as_str().starts_with(META_PREFIX)
}

/// Search structure: what happened, with enough data to replay the proof
/// deterministically from the root sequent.
#[derive(Debug, Clone)]
enum FTree {
    LolliR(Box<FTree>),
    ForallR { eigen: Sym, inner: Box<FTree> },
    TensorL(Box<FTree>),
    ExistsL { eigen: Sym, inner: Box<FTree> },
    BangL(Box<FTree>),
    Park(Box<FTree>),
    DecideLinear { slot: usize, chain: Box<FTree> },
    DecideTheta { index: usize, chain: Box<FTree> },
    DecideRight(Box<FTree>),
    RAtom { slot: usize },
    RAtomTheta { index: usize },
    RTensor { left: Box<FTree>, right: Box<FTree> },
    RExists { meta: Sym, chain: Box<FTree> },
    RBang(Box<FTree>),
    RRelease(Box<FTree>),
    LForall { meta: Sym, chain: Box<FTree> },
    LLolli { arg: Box<FTree>, cont: Box<FTree> },
    LRelease(Box<FTree>),
}

#[derive(Debug)]
struct Slot {
    formula: Formula,
    consumed: bool,
}

enum Trail {
    Bind(Sym),
    Consume(usize),
    PushSlot,
}

/// Branch-scoped context: the unbounded zone and the ancestor decide
/// states of the current proof branch. Cloned at multiplicative branch
/// points so siblings do not see each other's absorptions.
#[derive(Clone, Default)]
struct Zone {
    theta: Vec<Formula>,
    ancestors: Option<Rc<AncNode>>,
}

struct AncNode {
    key: String,
    rest: Option<Rc<AncNode>>,
}

impl Zone {
    fn with_theta(&self, f: Formula) -> Zone {
        let mut z = self.clone();
        z.theta.push(f);
        z
    }

    fn with_ancestor(&self, key: String) -> Zone {
        let mut z = self.clone();
        z.ancestors = Some(Rc::new(AncNode {
            key,
            rest: self.ancestors.clone(),
        }));
        z
    }

    fn has_ancestor(&self, key: &str) -> bool {
        let mut cur = self.ancestors.as_ref();
        while let Some(node) = cur {
            if node.key == key {
                return true;
            }
            cur = node.rest.as_ref();
        }
        false
    }
}

struct Search {
    slots: Vec<Slot>,
    env: BTreeMap<Sym, Sym>,
    meta_ts: BTreeMap<Sym, u64>,
    eigen_ts: BTreeMap<Sym, u64>,
    stamp: u64,
    next_meta: u64,
    next_eigen: u64,
    next_default: u64,
    used_names: BTreeSet<Sym>,
    consumed_total: usize,
    budget: Option<u64>,
    decide_steps: u64,
    budget_hit: bool,
    loop_check: bool,
    trail: Vec<Trail>,
}

type K<'a> = &'a mut dyn FnMut(&mut Search, FTree) -> Option<FTree>;

impl Search {
    fn new(sequent: &Sequent, budget: Option<u64>, loop_check: bool) -> Search {
        let mut used_names = BTreeSet::new();
        fn collect(f: &Formula, out: &mut BTreeSet<Sym>) {
            match f {
                Formula::Atom(_, args) => out.extend(args.iter().cloned()),
                Formula::Tensor(a, b) | Formula::Lolli(a, b) => {
                    collect(a, out);
                    collect(b, out);
                }
                Formula::Exists(x, a) | Formula::Forall(x, a) => {
                    out.insert(x.clone());
                    collect(a, out);
                }
                Formula::Bang(a) => collect(a, out),
            }
        }
        for f in sequent.antecedent() {
            collect(f, &mut used_names);
        }
        collect(&sequent.succedent, &mut used_names);
        Search {
            slots: Vec::new(),
            env: BTreeMap::new(),
            meta_ts: BTreeMap::new(),
            eigen_ts: BTreeMap::new(),
            stamp: 0,
            next_meta: 0,
            next_eigen: 0,
            next_default: 0,
            used_names,
            consumed_total: 0,
            budget,
            decide_steps: 0,
            budget_hit: false,
            loop_check,
            trail: Vec::new(),
        }
    }

    fn mark(&self) -> usize {
        self.trail.len()
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().unwrap() {
                Trail::Bind(m) => {
                    self.env.remove(&m);
                }
                Trail::Consume(i) => {
                    self.slots[i].consumed = false;
                    self.consumed_total -= 1;
                }
                Trail::PushSlot => {
                    self.slots.pop();
                }
            }
        }
    }

    fn push_slot(&mut self, f: Formula) {
        self.slots.push(Slot {
            formula: f,
            consumed: false,
        });
        self.trail.push(Trail::PushSlot);
    }

    fn consume(&mut self, i: usize) {
        debug_assert!(!self.slots[i].consumed);
        self.slots[i].consumed = true;
        self.consumed_total += 1;
        self.trail.push(Trail::Consume(i));
    }

    fn locals_closed(&self, slot_mark: usize) -> bool {
        self.slots[slot_mark..].iter().all(|s| s.consumed)
    }

    fn consumed_below(&self, slot_mark: usize) -> usize {
        self.slots[..slot_mark].iter().filter(|s| s.consumed).count()
    }

    fn new_eigen(&mut self) -> Sym {
        loop {
            self.next_eigen += 1;
            let cand = Sym::new(&format!("z{}", self.next_eigen));
            if !self.used_names.contains(&cand) {
                self.used_names.insert(cand.clone());
                self.stamp += 1;
                self.eigen_ts.insert(cand.clone(), self.stamp);
                return cand;
            }
        }
    }

    fn new_meta(&mut self) -> Sym {
        self.next_meta += 1;
        let m = Sym::new(&format!("{}{}", META_PREFIX, self.next_meta));
        self.stamp += 1;
        self.meta_ts.insert(m.clone(), self.stamp);
        m
    }

    fn new_default(&mut self) -> Sym {
        loop {
            self.next_default += 1;
            let cand = Sym::new(&format!("w{}", self.next_default));
            if !self.used_names.contains(&cand) {
                self.used_names.insert(cand.clone());
                return cand;
            }
        }
    }

    fn resolve(&self, s: &Sym) -> Sym {
        let mut cur = s.clone();
        while let Some(next) = self.env.get(&cur) {
            cur = next.clone();
        }
        cur
    }

    fn bind(&mut self, m: Sym, v: Sym) {
        self.trail.push(Trail::Bind(m.clone()));
        self.env.insert(m, v);
    }

    /// Unification of two variables; no function symbols, so this is
    /// binding or equality. Rigid variables never bind; a metavariable may
    /// take an eigenvariable only if the eigenvariable is older.
    fn unify(&mut self, a: &Sym, b: &Sym) -> bool {
        let ra = self.resolve(a);
        let rb = self.resolve(b);
        if ra == rb {
            return true;
        }
        match (is_meta(&ra), is_meta(&rb)) {
            (true, true) => {
                // point the younger at the older so scope checks use the
                // oldest metavariable of the class
                if self.meta_ts[&ra] > self.meta_ts[&rb] {
                    self.bind(ra, rb);
                } else {
                    self.bind(rb, ra);
                }
                true
            }
            (true, false) => self.bind_rigid(ra, rb),
            (false, true) => self.bind_rigid(rb, ra),
            (false, false) => false,
        }
    }

    fn bind_rigid(&mut self, meta: Sym, rigid: Sym) -> bool {
        if let Some(ets) = self.eigen_ts.get(&rigid) {
            if *ets > self.meta_ts[&meta] {
                return false;
            }
        }
        self.bind(meta, rigid);
        true
    }

    fn apply_env(&self, f: &Formula) -> Formula {
        let mut map = BTreeMap::new();
        for v in f.free_vars() {
            if is_meta(&v) {
                let r = self.resolve(&v);
                if r != v {
                    map.insert(v, r);
                }
            }
        }
        f.apply_subst(&map)
    }

    fn has_unresolved_meta(&self, f: &Formula) -> bool {
        f.free_vars().iter().any(|v| is_meta(&self.resolve(v)))
    }

    fn tick_budget(&mut self) -> bool {
        if let Some(b) = self.budget {
            if self.decide_steps >= b {
                self.budget_hit = true;
                return false;
            }
        }
        self.decide_steps += 1;
        true
    }
}

/// Renaming-invariant key for a decide state: the state is encoded as a
/// hypergraph (formulas become edges labeled by their placeholder shape,
/// variables become nodes) and canonicalized.
fn state_key(st: &Search, zone: &Zone, goal: &Formula) -> Option<String> {
    use crate::hypergraph::Hypergraph;
    let mut graph = Hypergraph::empty();
    let mut edge_id = 0;
    let mut add = |graph: &mut Hypergraph, tag: &str, f: &Formula| -> bool {
        let f = st.apply_env(f);
        if st.has_unresolved_meta(&f) {
            return false;
        }
        let (shape, occ) = f.alpha_normalize().placeholder_form();
        let label = Sym::new(&format!("{}:{}", tag, shape.render()));
        let mut att = BTreeMap::new();
        for (i, v) in occ.iter().enumerate() {
            graph.add_node(v.clone());
            att.insert(Sym::new(&format!("{}", i + 1)), v.clone());
        }
        edge_id += 1;
        graph
            .add_edge(Sym::new(&format!("k{edge_id}")), label, att)
            .unwrap();
        true
    };
    for f in &zone.theta {
        if !add(&mut graph, "T", f) {
            return None;
        }
    }
    for s in &st.slots {
        if !s.consumed && !add(&mut graph, "L", &s.formula) {
            return None;
        }
    }
    if !add(&mut graph, "G", goal) {
        return None;
    }
    Some(crate::hypergraph::canonical_form(&graph))
}

fn prove_async(
    st: &mut Search,
    zone: &Zone,
    mut pending: Vec<Formula>,
    goal: Formula,
    k: K,
) -> Option<FTree> {
    match goal {
        Formula::Lolli(b, a) => {
            pending.push(*b);
            return prove_async(st, zone, pending, *a, &mut |st, t| {
                k(st, FTree::LolliR(Box::new(t)))
            });
        }
        Formula::Forall(x, body) => {
            let z = st.new_eigen();
            let inst = body.subst_one(&x, &z);
            return prove_async(st, zone, pending, inst, &mut |st, t| {
                k(
                    st,
                    FTree::ForallR {
                        eigen: z.clone(),
                        inner: Box::new(t),
                    },
                )
            });
        }
        _ => {}
    }
    if pending.is_empty() {
        return decide(st, zone, &goal, k);
    }
    let f = pending.remove(0);
    match f {
        Formula::Tensor(a, b) => {
            let mut next = vec![*a, *b];
            next.extend(pending);
            prove_async(st, zone, next, goal, &mut |st, t| {
                k(st, FTree::TensorL(Box::new(t)))
            })
        }
        Formula::Exists(x, body) => {
            let z = st.new_eigen();
            let mut next = vec![body.subst_one(&x, &z)];
            next.extend(pending);
            prove_async(st, zone, next, goal, &mut |st, t| {
                k(
                    st,
                    FTree::ExistsL {
                        eigen: z.clone(),
                        inner: Box::new(t),
                    },
                )
            })
        }
        Formula::Bang(a) => {
            let zone2 = zone.with_theta(*a);
            prove_async(st, &zone2, pending, goal, &mut |st, t| {
                k(st, FTree::BangL(Box::new(t)))
            })
        }
        other => {
            st.push_slot(other);
            prove_async(st, zone, pending, goal, &mut |st, t| {
                k(st, FTree::Park(Box::new(t)))
            })
        }
    }
}

fn decide(st: &mut Search, zone: &Zone, goal: &Formula, k: K) -> Option<FTree> {
    let zone_here;
    let zone = if st.loop_check {
        match state_key(st, zone, goal) {
            Some(key) => {
                if zone.has_ancestor(&key) {
                    return None;
                }
                zone_here = zone.with_ancestor(key);
                &zone_here
            }
            None => zone,
        }
    } else {
        zone
    };

    // right focus first
    if st.tick_budget() {
        let mark = st.mark();
        if let Some(t) = focus_right(st, zone, goal.clone(), &mut |st, chain| {
            k(st, FTree::DecideRight(Box::new(chain)))
        }) {
            return Some(t);
        }
        st.undo_to(mark);
    } else {
        return None;
    }

    // left focus on a stable negative
    let mut seen: BTreeSet<String> = BTreeSet::new();
    for i in 0..st.slots.len() {
        if st.slots[i].consumed {
            continue;
        }
        if !matches!(
            st.slots[i].formula,
            Formula::Lolli(..) | Formula::Forall(..)
        ) {
            continue;
        }
        let rendered = st.apply_env(&st.slots[i].formula).alpha_normalize().render();
        if !seen.insert(format!("L:{rendered}")) {
            continue;
        }
        if !st.tick_budget() {
            return None;
        }
        let mark = st.mark();
        st.consume(i);
        let f = st.slots[i].formula.clone();
        if let Some(t) = focus_left(st, zone, f, goal, &mut |st, chain| {
            k(
                st,
                FTree::DecideLinear {
                    slot: i,
                    chain: Box::new(chain),
                },
            )
        }) {
            return Some(t);
        }
        st.undo_to(mark);
    }

    // copy from the unbounded zone; atoms are closed directly by the
    // theta axiom under right focus, so deciding on them is never useful
    for i in 0..zone.theta.len() {
        if matches!(zone.theta[i], Formula::Atom(..)) {
            continue;
        }
        let rendered = st.apply_env(&zone.theta[i]).alpha_normalize().render();
        if !seen.insert(format!("T:{rendered}")) {
            continue;
        }
        if !st.tick_budget() {
            return None;
        }
        let mark = st.mark();
        let f = zone.theta[i].clone();
        if let Some(t) = focus_left(st, zone, f, goal, &mut |st, chain| {
            k(
                st,
                FTree::DecideTheta {
                    index: i,
                    chain: Box::new(chain),
                },
            )
        }) {
            return Some(t);
        }
        st.undo_to(mark);
    }
    None
}

fn focus_right(st: &mut Search, zone: &Zone, goal: Formula, k: K) -> Option<FTree> {
    match goal {
        Formula::Atom(ref p, ref args) => {
            for i in 0..st.slots.len() {
                if st.slots[i].consumed {
                    continue;
                }
                let Formula::Atom(q, brgs) = &st.slots[i].formula else {
                    continue;
                };
                if q != p || brgs.len() != args.len() {
                    continue;
                }
                let mark = st.mark();
                let brgs = brgs.clone();
                if args.iter().zip(brgs.iter()).all(|(a, b)| st.unify(a, b)) {
                    st.consume(i);
                    if let Some(t) = k(st, FTree::RAtom { slot: i }) {
                        return Some(t);
                    }
                }
                st.undo_to(mark);
            }
            for i in 0..zone.theta.len() {
                let Formula::Atom(q, brgs) = &zone.theta[i] else {
                    continue;
                };
                if q != p || brgs.len() != args.len() {
                    continue;
                }
                let mark = st.mark();
                let brgs = brgs.clone();
                if args.iter().zip(brgs.iter()).all(|(a, b)| st.unify(a, b)) {
                    if let Some(t) = k(st, FTree::RAtomTheta { index: i }) {
                        return Some(t);
                    }
                }
                st.undo_to(mark);
            }
            None
        }
        Formula::Tensor(a, b) => {
            let slot_mark = st.slots.len();
            let zone_b = zone.clone();
            let b = (*b).clone();
            focus_right(st, zone, *a, &mut |st, l| {
                if !st.locals_closed(slot_mark) {
                    return None;
                }
                let l = l.clone();
                focus_right(st, &zone_b, b.clone(), &mut |st, r| {
                    k(
                        st,
                        FTree::RTensor {
                            left: Box::new(l.clone()),
                            right: Box::new(r),
                        },
                    )
                })
            })
        }
        Formula::Exists(x, body) => {
            let m = st.new_meta();
            let inst = body.subst_one(&x, &m);
            focus_right(st, zone, inst, &mut |st, chain| {
                k(
                    st,
                    FTree::RExists {
                        meta: m.clone(),
                        chain: Box::new(chain),
                    },
                )
            })
        }
        Formula::Bang(a) => {
            let slot_mark = st.slots.len();
            let old_consumed = st.consumed_below(slot_mark);
            prove_async(st, zone, Vec::new(), *a, &mut |st, inner| {
                if st.consumed_below(slot_mark) != old_consumed || !st.locals_closed(slot_mark) {
                    return None;
                }
                k(st, FTree::RBang(Box::new(inner)))
            })
        }
        negative @ (Formula::Lolli(..) | Formula::Forall(..)) => {
            prove_async(st, zone, Vec::new(), negative, &mut |st, inner| {
                k(st, FTree::RRelease(Box::new(inner)))
            })
        }
    }
}

fn focus_left(st: &mut Search, zone: &Zone, focus: Formula, goal: &Formula, k: K) -> Option<FTree> {
    match focus {
        Formula::Forall(x, body) => {
            let m = st.new_meta();
            let inst = body.subst_one(&x, &m);
            focus_left(st, zone, inst, goal, &mut |st, chain| {
                k(
                    st,
                    FTree::LForall {
                        meta: m.clone(),
                        chain: Box::new(chain),
                    },
                )
            })
        }
        Formula::Lolli(b, a) => {
            let slot_mark = st.slots.len();
            let zone_cont = zone.clone();
            let a = (*a).clone();
            let goal = goal.clone();
            focus_right(st, zone, *b, &mut |st, arg| {
                if !st.locals_closed(slot_mark) {
                    return None;
                }
                let arg = arg.clone();
                focus_left(st, &zone_cont, a.clone(), &goal, &mut |st, cont| {
                    k(
                        st,
                        FTree::LLolli {
                            arg: Box::new(arg.clone()),
                            cont: Box::new(cont),
                        },
                    )
                })
            })
        }
        positive => {
            // a positive under left focus releases into the asynchronous phase
            prove_async(st, zone, vec![positive], goal.clone(), &mut |st, inner| {
                k(st, FTree::LRelease(Box::new(inner)))
            })
        }
    }
}

/// Runs the search and, on success, replays the structure into an ordinary
/// sequent-calculus proof of the (sorted) input sequent.
pub(crate) fn run_search(sequent: &Sequent, budget: Option<u64>, loop_check: bool) -> Outcome {
    // the continuation-passing search nests one stack frame group per
    // decide step, so deep budgets need a deep stack
    let sequent = sequent.clone();
    std::thread::Builder::new()
        .stack_size(1 << 30)
        .spawn(move || run_search_inner(&sequent, budget, loop_check))
        .expect("spawn search thread")
        .join()
        .expect("search thread panicked")
}

fn run_search_inner(sequent: &Sequent, budget: Option<u64>, loop_check: bool) -> Outcome {
    let mut st = Search::new(sequent, budget, loop_check);
    let zone = Zone::default();
    let pending: Vec<Formula> = sequent.antecedent().to_vec();
    let goal = sequent.succedent.clone();
    let found = prove_async(&mut st, &zone, pending, goal, &mut |st, t| {
        if st.slots.iter().all(|s| s.consumed) {
            Some(t)
        } else {
            None
        }
    });
    let stats = SearchStats {
        decide_steps: st.decide_steps,
    };
    match found {
        Some(ftree) => {
            // default any unresolved metavariables to fresh variables
            let metas: Vec<Sym> = st.meta_ts.keys().cloned().collect();
            for m in metas {
                let r = st.resolve(&m);
                if is_meta(&r) {
                    let w = st.new_default();
                    st.env.insert(r, w);
                }
            }
            let tree = Emitter { st: &st }.emit_root(&ftree, sequent);
            Outcome::Proved(tree)
        }
        None if st.budget_hit => Outcome::OutOfBudget(stats),
        None => Outcome::Exhausted(stats),
    }
}
/// Deterministic replay: walks the search structure from the root sequent
/// with the final variable bindings applied, rebuilding every conclusion.
///
/// A node's antecedent is the banged unbounded zone, plus the formulas
/// still pending decomposition at that node, plus the consumed slots that
/// already existed when the node was reached. Slots created deeper (by
/// parking a released or pending formula) are internal to the subproof:
/// the pending/focus accounting already covers them.
struct Emitter<'a> {
    st: &'a Search,
}

struct Mirror {
    slots: Vec<Formula>,
}

fn filtered(consumed: &[usize], below: usize) -> Vec<usize> {
    consumed.iter().copied().filter(|i| *i < below).collect()
}

impl<'a> Emitter<'a> {
    fn emit_root(&self, ftree: &FTree, sequent: &Sequent) -> ProofTree {
        let mut mirror = Mirror { slots: Vec::new() };
        let pending: Vec<Formula> = sequent
            .antecedent()
            .iter()
            .map(|f| self.st.apply_env(f))
            .collect();
        let goal = self.st.apply_env(&sequent.succedent);
        let (tree, _) = self.emit_async(ftree, &mut mirror, &Vec::new(), pending, goal);
        tree
    }

    fn conclusion(
        &self,
        theta: &[Formula],
        extra: &[Formula],
        consumed: &[usize],
        below: usize,
        mirror: &Mirror,
        goal: &Formula,
    ) -> Sequent {
        let mut ant: Vec<Formula> = theta.iter().map(|f| Formula::bang(f.clone())).collect();
        ant.extend(extra.iter().cloned());
        ant.extend(
            filtered(consumed, below)
                .iter()
                .map(|i| mirror.slots[*i].clone()),
        );
        Sequent::new(ant, goal.clone())
    }

    /// Wraps `tree` in one contraction per theta element, duplicating the
    /// banged context before a two-premise split.
    fn contraction_wrap(&self, theta: &[Formula], tree: ProofTree) -> ProofTree {
        let mut cur = tree;
        for t in theta.iter().rev() {
            let mut ant = cur.conclusion.antecedent().to_vec();
            let bang = Formula::bang(t.clone());
            let pos = ant
                .iter()
                .position(|f| *f == bang)
                .expect("duplicated bang present");
            ant.remove(pos);
            let conclusion = Sequent::new(ant, cur.conclusion.succedent.clone());
            cur = ProofTree::node(Rule::BangC, conclusion, vec![cur]);
        }
        cur
    }

    fn emit_async(
        &self,
        node: &FTree,
        mirror: &mut Mirror,
        theta: &[Formula],
        mut pending: Vec<Formula>,
        goal: Formula,
    ) -> (ProofTree, Vec<usize>) {
        let below = mirror.slots.len();
        match node {
            FTree::LolliR(inner) => {
                let Formula::Lolli(b, a) = goal.clone() else {
                    unreachable!("lolli-r on a non-implication")
                };
                pending.push((*b).clone());
                let (t, consumed) = self.emit_async(inner, mirror, theta, pending.clone(), *a);
                pending.pop();
                let conclusion = self.conclusion(theta, &pending, &consumed, below, mirror, &goal);
                (
                    ProofTree::node(Rule::LolliR, conclusion, vec![t]),
                    consumed,
                )
            }
            FTree::ForallR { eigen, inner } => {
                let Formula::Forall(x, body) = goal.clone() else {
                    unreachable!("forall-r on a non-universal")
                };
                let inst = body.subst_one(&x, eigen);
                let (t, consumed) = self.emit_async(inner, mirror, theta, pending.clone(), inst);
                let conclusion = self.conclusion(theta, &pending, &consumed, below, mirror, &goal);
                (
                    ProofTree::node(Rule::ForallR, conclusion, vec![t]).with_witness(eigen.clone()),
                    consumed,
                )
            }
            FTree::TensorL(inner) => {
                let first = pending.remove(0);
                let Formula::Tensor(a, b) = first.clone() else {
                    unreachable!("tensor-l on a non-tensor")
                };
                let mut next = vec![(*a).clone(), (*b).clone()];
                next.extend(pending.clone());
                let (t, consumed) = self.emit_async(inner, mirror, theta, next, goal.clone());
                pending.insert(0, first);
                let conclusion = self.conclusion(theta, &pending, &consumed, below, mirror, &goal);
                (
                    ProofTree::node(Rule::TensorL, conclusion, vec![t]),
                    consumed,
                )
            }
            FTree::ExistsL { eigen, inner } => {
                let first = pending.remove(0);
                let Formula::Exists(x, body) = first.clone() else {
                    unreachable!("exists-l on a non-existential")
                };
                let mut next = vec![body.subst_one(&x, eigen)];
                next.extend(pending.clone());
                let (t, consumed) = self.emit_async(inner, mirror, theta, next, goal.clone());
                pending.insert(0, first);
                let conclusion = self.conclusion(theta, &pending, &consumed, below, mirror, &goal);
                (
                    ProofTree::node(Rule::ExistsL, conclusion, vec![t]).with_witness(eigen.clone()),
                    consumed,
                )
            }
            FTree::BangL(inner) => {
                // the formula only changes zones; the sequent is unchanged
                let first = pending.remove(0);
                let Formula::Bang(a) = first else {
                    unreachable!("bang absorption on a non-bang")
                };
                let mut theta2 = theta.to_vec();
                theta2.push((*a).clone());
                self.emit_async(inner, mirror, &theta2, pending, goal)
            }
            FTree::Park(inner) => {
                let first = pending.remove(0);
                mirror.slots.push(first);
                self.emit_async(inner, mirror, theta, pending, goal)
            }
            FTree::DecideLinear { slot, chain } => {
                let focus = mirror.slots[*slot].clone();
                let (t, mut consumed) = self.emit_left(chain, mirror, theta, &goal, focus);
                consumed.push(*slot);
                consumed.sort();
                (t, consumed)
            }
            FTree::DecideTheta { index, chain } => {
                let focus = theta[*index].clone();
                let (t, consumed) = self.emit_left(chain, mirror, theta, &goal, focus.clone());
                // contraction then dereliction reintroduce the copy
                let mut derel_ant = t.conclusion.antecedent().to_vec();
                let pos = derel_ant
                    .iter()
                    .position(|f| *f == focus)
                    .expect("copied formula present in premise");
                derel_ant[pos] = Formula::bang(focus.clone());
                let derel = ProofTree::node(
                    Rule::BangD,
                    Sequent::new(derel_ant.clone(), goal.clone()),
                    vec![t],
                );
                let mut contr_ant = derel_ant;
                let pos = contr_ant
                    .iter()
                    .position(|f| *f == Formula::bang(focus.clone()))
                    .expect("bang of copy present");
                contr_ant.remove(pos);
                let contr = ProofTree::node(
                    Rule::BangC,
                    Sequent::new(contr_ant, goal.clone()),
                    vec![derel],
                );
                (contr, consumed)
            }
            FTree::DecideRight(chain) => self.emit_right(chain, mirror, theta, goal),
            other => unreachable!("async emit reached {:?}", other),
        }
    }

    fn emit_right(
        &self,
        node: &FTree,
        mirror: &mut Mirror,
        theta: &[Formula],
        goal: Formula,
    ) -> (ProofTree, Vec<usize>) {
        let below = mirror.slots.len();
        match node {
            FTree::RAtom { slot } => {
                let atom = mirror.slots[*slot].clone();
                debug_assert_eq!(atom, goal, "axiom atom must equal the goal");
                let mut tree =
                    ProofTree::leaf(Rule::Ax, Sequent::new(vec![atom.clone()], goal.clone()));
                for t in theta {
                    let mut ant = tree.conclusion.antecedent().to_vec();
                    ant.push(Formula::bang(t.clone()));
                    tree = ProofTree::node(
                        Rule::BangW,
                        Sequent::new(ant, goal.clone()),
                        vec![tree],
                    );
                }
                (tree, vec![*slot])
            }
            FTree::RAtomTheta { index } => {
                // close against an absorbed atom: dereliction then axiom,
                // weakening away the rest of the zone
                debug_assert_eq!(theta[*index], goal, "theta axiom must equal the goal");
                let mut tree =
                    ProofTree::leaf(Rule::Ax, Sequent::new(vec![goal.clone()], goal.clone()));
                tree = ProofTree::node(
                    Rule::BangD,
                    Sequent::new(vec![Formula::bang(goal.clone())], goal.clone()),
                    vec![tree],
                );
                for (j, t) in theta.iter().enumerate() {
                    if j == *index {
                        continue;
                    }
                    let mut ant = tree.conclusion.antecedent().to_vec();
                    ant.push(Formula::bang(t.clone()));
                    tree = ProofTree::node(
                        Rule::BangW,
                        Sequent::new(ant, goal.clone()),
                        vec![tree],
                    );
                }
                (tree, Vec::new())
            }
            FTree::RTensor { left, right } => {
                let Formula::Tensor(a, b) = goal.clone() else {
                    unreachable!("tensor-r on a non-tensor")
                };
                let (tl, cl) = self.emit_right(left, mirror, theta, (*a).clone());
                let (tr, cr) = self.emit_right(right, mirror, theta, (*b).clone());
                let mut consumed = cl;
                consumed.extend(cr);
                consumed.sort();
                let mut doubled: Vec<Formula> = theta
                    .iter()
                    .flat_map(|t| [Formula::bang(t.clone()), Formula::bang(t.clone())])
                    .collect();
                doubled.extend(
                    filtered(&consumed, below)
                        .iter()
                        .map(|i| mirror.slots[*i].clone()),
                );
                let split = ProofTree::node(
                    Rule::TensorR,
                    Sequent::new(doubled, goal.clone()),
                    vec![tl, tr],
                );
                (self.contraction_wrap(theta, split), consumed)
            }
            FTree::RExists { meta, chain } => {
                let Formula::Exists(x, body) = goal.clone() else {
                    unreachable!("exists-r on a non-existential")
                };
                let w = self.st.resolve(meta);
                let inst = body.subst_one(&x, &w);
                let (t, consumed) = self.emit_right(chain, mirror, theta, inst);
                let conclusion = self.conclusion(theta, &[], &consumed, below, mirror, &goal);
                (
                    ProofTree::node(Rule::ExistsR, conclusion, vec![t]).with_witness(w),
                    consumed,
                )
            }
            FTree::RBang(inner) => {
                let Formula::Bang(a) = goal.clone() else {
                    unreachable!("promotion on a non-bang")
                };
                let (t, consumed) =
                    self.emit_async(inner, mirror, theta, Vec::new(), (*a).clone());
                debug_assert!(
                    filtered(&consumed, below).is_empty(),
                    "promotion premise consumed outer resources"
                );
                let conclusion = self.conclusion(theta, &[], &[], below, mirror, &goal);
                (
                    ProofTree::node(Rule::BangR, conclusion, vec![t]),
                    consumed,
                )
            }
            FTree::RRelease(inner) => self.emit_async(inner, mirror, theta, Vec::new(), goal),
            other => unreachable!("right emit reached {:?}", other),
        }
    }

    fn emit_left(
        &self,
        node: &FTree,
        mirror: &mut Mirror,
        theta: &[Formula],
        goal: &Formula,
        focus: Formula,
    ) -> (ProofTree, Vec<usize>) {
        let below = mirror.slots.len();
        match node {
            FTree::LForall { meta, chain } => {
                let Formula::Forall(x, body) = focus.clone() else {
                    unreachable!("forall-l on a non-universal")
                };
                let w = self.st.resolve(meta);
                let inst = body.subst_one(&x, &w);
                let (t, consumed) = self.emit_left(chain, mirror, theta, goal, inst);
                let mut ant: Vec<Formula> =
                    theta.iter().map(|f| Formula::bang(f.clone())).collect();
                ant.extend(
                    filtered(&consumed, below)
                        .iter()
                        .map(|i| mirror.slots[*i].clone()),
                );
                ant.push(focus.clone());
                (
                    ProofTree::node(Rule::ForallL, Sequent::new(ant, goal.clone()), vec![t])
                        .with_witness(w),
                    consumed,
                )
            }
            FTree::LLolli { arg, cont } => {
                let Formula::Lolli(b, a) = focus.clone() else {
                    unreachable!("lolli-l on a non-implication")
                };
                let (ta, ca) = self.emit_right(arg, mirror, theta, (*b).clone());
                let (tc, cc) = self.emit_left(cont, mirror, theta, goal, (*a).clone());
                let mut consumed = ca;
                consumed.extend(cc);
                consumed.sort();
                let mut doubled: Vec<Formula> = theta
                    .iter()
                    .flat_map(|t| [Formula::bang(t.clone()), Formula::bang(t.clone())])
                    .collect();
                doubled.extend(
                    filtered(&consumed, below)
                        .iter()
                        .map(|i| mirror.slots[*i].clone()),
                );
                doubled.push(focus.clone());
                let split = ProofTree::node(
                    Rule::LolliL,
                    Sequent::new(doubled, goal.clone()),
                    vec![ta, tc],
                );
                (self.contraction_wrap(theta, split), consumed)
            }
            FTree::LRelease(inner) => {
                self.emit_async(inner, mirror, theta, vec![focus], goal.clone())
            }
            other => unreachable!("left emit reached {:?}", other),
        }
    }
}
