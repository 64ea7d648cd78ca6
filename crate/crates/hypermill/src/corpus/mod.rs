//! Bundled example fixtures, seeded random generators, and the
//! cross-checking suites run by the command line and the acceptance
//! tests.

pub mod fixtures;
mod suites;

pub use suites::{
    algebra_suite, lemma1_oracle_suite, logic_suite, paper_examples_suite, semantics_suite,
    OracleReport, SuiteOutcome,
};

use std::collections::{BTreeMap, BTreeSet};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::engine::HtRule;
use crate::hypergraph::{Hypergraph, TypedAlphabet};
use crate::logic::{Formula, Sequent};
use crate::symbol::Sym;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random hypergraph over the alphabet with the requested external
/// selectors; the external assignment is injective when asked (rules and
/// reachability instances need that).
pub fn random_graph(
    rng: &mut ChaCha8Rng,
    alphabet: &TypedAlphabet,
    max_nodes: usize,
    max_edges: usize,
    ext_selectors: &BTreeSet<Sym>,
    injective_ext: bool,
) -> Hypergraph {
    let min_nodes = if injective_ext { ext_selectors.len().max(1) } else { 1 };
    let n = rng.gen_range(min_nodes..=max_nodes.max(min_nodes));
    let mut g = Hypergraph::empty();
    let nodes: Vec<Sym> = (0..n).map(|i| Sym::new(&format!("n{i}"))).collect();
    for v in &nodes {
        g.add_node(v.clone());
    }
    let labels: Vec<Sym> = alphabet.labels().cloned().collect();
    let e = rng.gen_range(0..=max_edges);
    for k in 0..e {
        let label = labels[rng.gen_range(0..labels.len())].clone();
        let ty = alphabet.type_of(&label).unwrap().clone();
        let att: BTreeMap<Sym, Sym> = ty
            .iter()
            .map(|sel| (sel.clone(), nodes[rng.gen_range(0..n)].clone()))
            .collect();
        g.add_edge(Sym::new(&format!("e{k}")), label, att).unwrap();
    }
    if injective_ext {
        let mut picks: Vec<Sym> = nodes.clone();
        picks.shuffle(rng);
        for (sel, v) in ext_selectors.iter().zip(picks) {
            g.set_ext(sel.clone(), v).unwrap();
        }
    } else {
        for sel in ext_selectors {
            g.set_ext(sel.clone(), nodes[rng.gen_range(0..n)].clone())
                .unwrap();
        }
    }
    g
}

/// Random partial selector map from `from` into `pool`.
pub fn random_selector_map(
    rng: &mut ChaCha8Rng,
    from: &BTreeSet<Sym>,
    pool: &[Sym],
    total: bool,
) -> BTreeMap<Sym, Sym> {
    let mut out = BTreeMap::new();
    for sel in from {
        if total || rng.gen_bool(0.8) {
            out.insert(sel.clone(), pool[rng.gen_range(0..pool.len())].clone());
        }
    }
    out
}

/// Random non-shrinking rewrite rule over the alphabet: the right side
/// extends a copy of the left side by fresh structure, so applications
/// never reduce graph size and target-bounded searches stay complete.
pub fn random_growing_rule(
    rng: &mut ChaCha8Rng,
    alphabet: &TypedAlphabet,
    name: &str,
    strictly: bool,
) -> HtRule {
    let ext_count = rng.gen_range(0..=2usize);
    let selectors: BTreeSet<Sym> = ["s", "t"]
        .iter()
        .take(ext_count)
        .map(|s| Sym::new(s))
        .collect();
    let lhs = random_graph(rng, alphabet, 3, 2, &selectors, true);
    let mut rhs = lhs.clone();
    let grow = rng.gen_range(if strictly { 1..=2 } else { 0..=2 });
    let labels: Vec<Sym> = alphabet.labels().cloned().collect();
    for k in 0..grow {
        let label = labels[rng.gen_range(0..labels.len())].clone();
        let ty = alphabet.type_of(&label).unwrap().clone();
        // attach to existing or fresh nodes
        let mut att = BTreeMap::new();
        for sel in &ty {
            let existing: Vec<Sym> = rhs.nodes().iter().cloned().collect();
            if !existing.is_empty() && rng.gen_bool(0.6) {
                att.insert(sel.clone(), existing[rng.gen_range(0..existing.len())].clone());
            } else {
                let fresh = Sym::new(&format!("f{k}_{sel}"));
                rhs.add_node(fresh.clone());
                att.insert(sel.clone(), fresh);
            }
        }
        rhs.add_edge(Sym::new(&format!("x{k}")), label, att).unwrap();
    }
    HtRule::new(name, lhs, rhs).expect("copy keeps type and external maps")
}

/// Builds a derivable sequent by construction: the antecedent is grown
/// recursively so that it proves the goal.
pub fn derivable_sequent(rng: &mut ChaCha8Rng, depth: usize) -> Sequent {
    let vars = ["c1", "c2", "c3"];
    let goal = random_goal(rng, depth, &vars);
    let ant = context_for(rng, &goal, depth);
    Sequent::new(ant, goal)
}

fn random_goal(rng: &mut ChaCha8Rng, depth: usize, vars: &[&str]) -> Formula {
    let atom = |rng: &mut ChaCha8Rng| {
        let preds = ["p", "q", "r"];
        let p = preds[rng.gen_range(0..preds.len())];
        let arity = rng.gen_range(0..=2usize);
        let args: Vec<Sym> = (0..arity)
            .map(|_| Sym::new(vars[rng.gen_range(0..vars.len())]))
            .collect();
        Formula::Atom(Sym::new(p), args)
    };
    if depth == 0 || rng.gen_bool(0.4) {
        return atom(rng);
    }
    match rng.gen_range(0..3) {
        0 => Formula::tensor(
            random_goal(rng, depth - 1, vars),
            random_goal(rng, depth - 1, vars),
        ),
        1 => Formula::lolli(atom(rng), random_goal(rng, depth - 1, vars)),
        _ => {
            let body = random_goal(rng, depth - 1, vars);
            let free: Vec<Sym> = body.free_vars().into_iter().collect();
            if free.is_empty() {
                body
            } else {
                let x = free[rng.gen_range(0..free.len())].clone();
                let binder = Sym::new("bx");
                Formula::exists(binder.clone(), body.subst_one(&x, &binder))
            }
        }
    }
}

/// A context multiset proving the goal, built by mirroring its shape.
fn context_for(rng: &mut ChaCha8Rng, goal: &Formula, depth: usize) -> Vec<Formula> {
    if depth == 0 || rng.gen_bool(0.3) {
        return vec![goal.clone()];
    }
    match goal {
        Formula::Tensor(a, b) => {
            let mut out = context_for(rng, a, depth - 1);
            out.extend(context_for(rng, b, depth - 1));
            out
        }
        Formula::Atom(p, args) => {
            // prove the atom through an implication chain
            if rng.gen_bool(0.5) {
                let helper = Formula::atom("h", args.iter().cloned());
                let mut out = context_for(rng, &helper, depth - 1);
                out.push(Formula::lolli(helper, Formula::Atom(p.clone(), args.clone())));
                out
            } else if !args.is_empty() && rng.gen_bool(0.5) {
                // through a universal instantiated at the first argument
                let x = Sym::new("ux");
                let mut gen_args = args.clone();
                gen_args[0] = x.clone();
                let body = Formula::lolli(
                    Formula::atom("h", gen_args.iter().cloned()),
                    Formula::Atom(p.clone(), gen_args.clone()),
                );
                let mut out = vec![Formula::forall(x.clone(), body)];
                let mut h_args = args.clone();
                let helper = Formula::atom("h", {
                    h_args[0] = args[0].clone();
                    h_args
                });
                out.extend(context_for(rng, &helper, depth - 1));
                out
            } else {
                vec![goal.clone()]
            }
        }
        Formula::Exists(x, body) => {
            let witness = Sym::new("c1");
            context_for(rng, &body.subst_one(x, &witness), depth - 1)
        }
        _ => vec![goal.clone()],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prover::{check_proof, prove_mill1, Verdict};

    #[test]
    fn derivable_sequents_are_derivable() {
        let mut rng = seeded_rng(11);
        for _ in 0..30 {
            let s = derivable_sequent(&mut rng, 3);
            match prove_mill1(&s).unwrap() {
                Verdict::Derivable(t) => assert!(check_proof(&t, &s)),
                other => panic!("generated sequent not derivable: {s} ({other:?})"),
            }
        }
    }

    #[test]
    fn random_rules_are_well_formed_and_growing() {
        let mut rng = seeded_rng(5);
        let alpha = TypedAlphabet::with(&[("a", &["s", "t"]), ("m", &["1"]), ("z", &[])]);
        for i in 0..40 {
            let rule = random_growing_rule(&mut rng, &alpha, &format!("r{i}"), true);
            assert!(rule.size_delta() >= 1);
            assert_eq!(rule.lhs.hg_type(), rule.rhs.hg_type());
        }
    }

    #[test]
    fn random_graphs_respect_alphabet() {
        let mut rng = seeded_rng(7);
        let alpha = TypedAlphabet::with(&[("a", &["s", "t"]), ("m", &["1"])]);
        for _ in 0..40 {
            let ext: BTreeSet<Sym> = [Sym::new("s"), Sym::new("t")].into();
            let g = random_graph(&mut rng, &alpha, 4, 3, &ext, true);
            assert!(g.respects(&alpha));
            assert!(g.has_injective_ext());
            assert_eq!(g.hg_type(), ext);
        }
    }
}
