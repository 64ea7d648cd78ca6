//! Proof trees and the independent proof checker.
//!
//! Every node stores its full conclusion sequent, so a tree is a
//! self-contained certificate: the checker validates each node locally
//! against its rule, premises, and instantiation data, with no reference
//! to how the tree was found.

use std::fmt;

use crate::logic::{Formula, Sequent};
use crate::symbol::Sym;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    Ax,
    TensorL,
    TensorR,
    LolliL,
    LolliR,
    ExistsL,
    ExistsR,
    ForallL,
    ForallR,
    /// `!`-dereliction.
    BangD,
    /// `!`-contraction.
    BangC,
    /// `!`-weakening.
    BangW,
    /// `!`-promotion (right rule; all antecedent formulas banged).
    BangR,
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Ax => "ax",
            Rule::TensorL => "tensor-l",
            Rule::TensorR => "tensor-r",
            Rule::LolliL => "lolli-l",
            Rule::LolliR => "lolli-r",
            Rule::ExistsL => "exists-l",
            Rule::ExistsR => "exists-r",
            Rule::ForallL => "forall-l",
            Rule::ForallR => "forall-r",
            Rule::BangD => "bang-d",
            Rule::BangC => "bang-c",
            Rule::BangW => "bang-w",
            Rule::BangR => "bang-r",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofTree {
    pub rule: Rule,
    pub conclusion: Sequent,
    /// Witness variable for `exists-r`/`forall-l`; eigenvariable for
    /// `exists-l`/`forall-r`.
    pub witness: Option<Sym>,
    pub premises: Vec<ProofTree>,
}

impl ProofTree {
    pub fn leaf(rule: Rule, conclusion: Sequent) -> ProofTree {
        ProofTree {
            rule,
            conclusion,
            witness: None,
            premises: Vec::new(),
        }
    }

    pub fn node(rule: Rule, conclusion: Sequent, premises: Vec<ProofTree>) -> ProofTree {
        ProofTree {
            rule,
            conclusion,
            witness: None,
            premises,
        }
    }

    pub fn with_witness(mut self, w: Sym) -> ProofTree {
        self.witness = Some(w);
        self
    }

    pub fn len(&self) -> usize {
        1 + self.premises.iter().map(ProofTree::len).sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Stable s-expression rendering: `(rule [w=v] "sequent" premise*)`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out, 0);
        out
    }

    fn render_into(&self, out: &mut String, indent: usize) {
        for _ in 0..indent {
            out.push(' ');
        }
        out.push('(');
        out.push_str(self.rule.name());
        if let Some(w) = &self.witness {
            out.push_str(&format!(" w={w}"));
        }
        out.push_str(&format!(" \"{}\"", self.conclusion.render()));
        for p in &self.premises {
            out.push('\n');
            p.render_into(out, indent + 2);
        }
        out.push(')');
    }
}

impl fmt::Display for ProofTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

fn multiset_remove(v: &[Formula], f: &Formula) -> Option<Vec<Formula>> {
    let pos = v.iter().position(|g| g == f)?;
    let mut out = v.to_vec();
    out.remove(pos);
    Some(out)
}

fn same_multiset(a: &[Formula], b: &[Formula]) -> bool {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort();
    y.sort();
    x == y
}

/// One-node legality: does `node.conclusion` follow from its premises'
/// conclusions by `node.rule` with the stored instantiation data?
fn node_is_legal(node: &ProofTree) -> bool {
    let ant = node.conclusion.antecedent();
    let succ = &node.conclusion.succedent;
    match node.rule {
        Rule::Ax => {
            node.premises.is_empty() && ant.len() == 1 && &ant[0] == succ
        }
        Rule::TensorL => {
            let [p] = node.premises.as_slice() else {
                return false;
            };
            if p.conclusion.succedent != *succ {
                return false;
            }
            ant.iter().any(|f| {
                let Formula::Tensor(a, b) = f else {
                    return false;
                };
                let Some(mut rest) = multiset_remove(ant, f) else {
                    return false;
                };
                rest.push((**a).clone());
                rest.push((**b).clone());
                same_multiset(&rest, p.conclusion.antecedent())
            })
        }
        Rule::TensorR => {
            let [p1, p2] = node.premises.as_slice() else {
                return false;
            };
            let Formula::Tensor(a, b) = succ else {
                return false;
            };
            p1.conclusion.succedent == **a
                && p2.conclusion.succedent == **b
                && same_multiset(
                    &[p1.conclusion.antecedent(), p2.conclusion.antecedent()].concat(),
                    ant,
                )
        }
        Rule::LolliL => {
            let [p1, p2] = node.premises.as_slice() else {
                return false;
            };
            if p2.conclusion.succedent != *succ {
                return false;
            }
            ant.iter().any(|f| {
                let Formula::Lolli(b, a) = f else {
                    return false;
                };
                if p1.conclusion.succedent != **b {
                    return false;
                }
                let Some(p2_rest) = multiset_remove(p2.conclusion.antecedent(), a) else {
                    return false;
                };
                let Some(rest) = multiset_remove(ant, f) else {
                    return false;
                };
                same_multiset(
                    &rest,
                    &[p1.conclusion.antecedent(), &p2_rest].concat(),
                )
            })
        }
        Rule::LolliR => {
            let [p] = node.premises.as_slice() else {
                return false;
            };
            let Formula::Lolli(b, a) = succ else {
                return false;
            };
            if p.conclusion.succedent != **a {
                return false;
            }
            let mut expected = ant.to_vec();
            expected.push((**b).clone());
            same_multiset(&expected, p.conclusion.antecedent())
        }
        Rule::ExistsL => {
            let [p] = node.premises.as_slice() else {
                return false;
            };
            let Some(z) = &node.witness else {
                return false;
            };
            if p.conclusion.succedent != *succ {
                return false;
            }
            // side condition: the eigenvariable is fresh for the conclusion
            if node.conclusion.free_vars().contains(z) {
                return false;
            }
            ant.iter().any(|f| {
                let Formula::Exists(x, body) = f else {
                    return false;
                };
                let Some(mut rest) = multiset_remove(ant, f) else {
                    return false;
                };
                rest.push(body.subst_one(x, z));
                same_multiset(&rest, p.conclusion.antecedent())
            })
        }
        Rule::ExistsR => {
            let [p] = node.premises.as_slice() else {
                return false;
            };
            let Some(y) = &node.witness else {
                return false;
            };
            let Formula::Exists(x, body) = succ else {
                return false;
            };
            p.conclusion.succedent == body.subst_one(x, y)
                && same_multiset(ant, p.conclusion.antecedent())
        }
        Rule::ForallL => {
            let [p] = node.premises.as_slice() else {
                return false;
            };
            let Some(y) = &node.witness else {
                return false;
            };
            if p.conclusion.succedent != *succ {
                return false;
            }
            ant.iter().any(|f| {
                let Formula::Forall(x, body) = f else {
                    return false;
                };
                let Some(mut rest) = multiset_remove(ant, f) else {
                    return false;
                };
                rest.push(body.subst_one(x, y));
                same_multiset(&rest, p.conclusion.antecedent())
            })
        }
        Rule::ForallR => {
            let [p] = node.premises.as_slice() else {
                return false;
            };
            let Some(z) = &node.witness else {
                return false;
            };
            let Formula::Forall(x, body) = succ else {
                return false;
            };
            if node.conclusion.free_vars().contains(z) {
                return false;
            }
            p.conclusion.succedent == body.subst_one(x, z)
                && same_multiset(ant, p.conclusion.antecedent())
        }
        Rule::BangD => {
            let [p] = node.premises.as_slice() else {
                return false;
            };
            if p.conclusion.succedent != *succ {
                return false;
            }
            ant.iter().any(|f| {
                let Formula::Bang(a) = f else {
                    return false;
                };
                let Some(mut rest) = multiset_remove(ant, f) else {
                    return false;
                };
                rest.push((**a).clone());
                same_multiset(&rest, p.conclusion.antecedent())
            })
        }
        Rule::BangC => {
            let [p] = node.premises.as_slice() else {
                return false;
            };
            if p.conclusion.succedent != *succ {
                return false;
            }
            ant.iter().any(|f| {
                if !matches!(f, Formula::Bang(_)) {
                    return false;
                }
                let mut expected = ant.to_vec();
                expected.push(f.clone());
                same_multiset(&expected, p.conclusion.antecedent())
            })
        }
        Rule::BangW => {
            let [p] = node.premises.as_slice() else {
                return false;
            };
            if p.conclusion.succedent != *succ {
                return false;
            }
            ant.iter().any(|f| {
                if !matches!(f, Formula::Bang(_)) {
                    return false;
                }
                multiset_remove(ant, f)
                    .map(|rest| same_multiset(&rest, p.conclusion.antecedent()))
                    .unwrap_or(false)
            })
        }
        Rule::BangR => {
            let [p] = node.premises.as_slice() else {
                return false;
            };
            let Formula::Bang(a) = succ else {
                return false;
            };
            ant.iter().all(|f| matches!(f, Formula::Bang(_)))
                && p.conclusion.succedent == **a
                && same_multiset(ant, p.conclusion.antecedent())
        }
    }
}

/// True iff `tree` is a legal derivation of `target`, eigenvariable side
/// conditions included. Independent of the search engine.
pub fn check_proof(tree: &ProofTree, target: &Sequent) -> bool {
    if tree.conclusion != *target && !tree.conclusion.alpha_eq(target) {
        return false;
    }
    fn walk(node: &ProofTree) -> bool {
        node_is_legal(node) && node.premises.iter().all(walk)
    }
    walk(tree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_formula, parse_sequent};

    fn seq(s: &str) -> Sequent {
        parse_sequent(s).unwrap()
    }

    #[test]
    fn hand_built_modus_ponens_checks() {
        // p, p -o q |- q  via lolli-l from  p |- p  and  q |- q
        let tree = ProofTree::node(
            Rule::LolliL,
            seq("p, p -o q |- q"),
            vec![
                ProofTree::leaf(Rule::Ax, seq("p |- p")),
                ProofTree::leaf(Rule::Ax, seq("q |- q")),
            ],
        );
        assert!(check_proof(&tree, &seq("p, p -o q |- q")));
        assert!(!check_proof(&tree, &seq("p, p -o q |- p")));
    }

    #[test]
    fn eigenvariable_reuse_rejected() {
        // forall-r must use a variable not free in the conclusion
        let bad = ProofTree::node(
            Rule::ForallR,
            seq("p(y) |- fa x. p(x)"),
            vec![ProofTree::leaf(Rule::Ax, seq("p(y) |- p(y)"))],
        )
        .with_witness(Sym::new("y"));
        assert!(!check_proof(&bad, &seq("p(y) |- fa x. p(x)")));
        let good = ProofTree::node(
            Rule::ForallR,
            seq("fa x. p(x) |- fa x. p(x)"),
            vec![ProofTree::node(
                Rule::ForallL,
                seq("fa x. p(x) |- p(z)"),
                vec![ProofTree::leaf(Rule::Ax, seq("p(z) |- p(z)"))],
            )
            .with_witness(Sym::new("z"))],
        )
        .with_witness(Sym::new("z"));
        assert!(check_proof(&good, &seq("fa x. p(x) |- fa x. p(x)")));
    }

    #[test]
    fn tensor_r_splits_context() {
        let tree = ProofTree::node(
            Rule::TensorR,
            seq("p, q |- p * q"),
            vec![
                ProofTree::leaf(Rule::Ax, seq("p |- p")),
                ProofTree::leaf(Rule::Ax, seq("q |- q")),
            ],
        );
        assert!(check_proof(&tree, &seq("q, p |- p * q")));
        // wrong split is rejected
        let bad = ProofTree::node(
            Rule::TensorR,
            seq("p, q |- p * q"),
            vec![
                ProofTree::leaf(Rule::Ax, seq("q |- p")),
                ProofTree::leaf(Rule::Ax, seq("p |- q")),
            ],
        );
        assert!(!check_proof(&bad, &seq("p, q |- p * q")));
    }

    #[test]
    fn bang_rules_check() {
        // !p |- p by dereliction
        let derel = ProofTree::node(
            Rule::BangD,
            seq("!p |- p"),
            vec![ProofTree::leaf(Rule::Ax, seq("p |- p"))],
        );
        assert!(check_proof(&derel, &seq("!p |- p")));
        // !p |- p * p by contraction, tensor-r, two derelictions
        let both = ProofTree::node(
            Rule::BangC,
            seq("!p |- p * p"),
            vec![ProofTree::node(
                Rule::TensorR,
                seq("!p, !p |- p * p"),
                vec![derel.clone(), derel.clone()],
            )],
        );
        assert!(check_proof(&both, &seq("!p |- p * p")));
        // weakening
        let weak = ProofTree::node(
            Rule::BangW,
            seq("p, !q |- p"),
            vec![ProofTree::leaf(Rule::Ax, seq("p |- p"))],
        );
        assert!(check_proof(&weak, &seq("p, !q |- p")));
        // promotion needs a fully banged antecedent
        let promo = ProofTree::node(
            Rule::BangR,
            seq("!p |- !p"),
            vec![derel.clone()],
        );
        assert!(check_proof(&promo, &seq("!p |- !p")));
        let bad_promo = ProofTree::node(
            Rule::BangR,
            seq("p |- !p"),
            vec![ProofTree::leaf(Rule::Ax, seq("p |- p"))],
        );
        assert!(!check_proof(&bad_promo, &seq("p |- !p")));
    }

    #[test]
    fn render_is_stable_and_nested() {
        let tree = ProofTree::node(
            Rule::LolliL,
            seq("p, p -o q |- q"),
            vec![
                ProofTree::leaf(Rule::Ax, seq("p |- p")),
                ProofTree::leaf(Rule::Ax, seq("q |- q")),
            ],
        );
        let r = tree.render();
        assert!(r.starts_with("(lolli-l \""));
        assert!(r.contains("(ax \"p |- p\")"));
        assert_eq!(r, tree.render());
    }
}
