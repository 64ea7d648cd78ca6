//! Hypergraph transformation systems: rule matching, step application,
//! and derivation search.
//!
//! A rule rewrites its left-hand side into its right-hand side; both are
//! hypergraphs of the same type with injective external maps. A step on a
//! host graph is any decomposition of the host as "context plus left-hand
//! side", which concretely is an injective, label- and attachment-
//! preserving embedding subject to the dangling condition on internal
//! nodes. Applying a step cuts the matched part out and glues the
//! right-hand side in along the external nodes.

mod matching;
mod search;
mod systems;
mod text;

pub use matching::{applicable_matches, apply, Occurrence};
pub use search::{
    derives, derives_with_rule_multiset, enumerate_language, Derivation, DerivationStep,
};
pub use systems::{exact_cover_target, np_complete_system};
pub use text::{parse_rules, parse_system, render_rule, render_system, HtsParseError};

use thiserror::Error;

use crate::hypergraph::{Hypergraph, TypedAlphabet};
use crate::symbol::Sym;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("rule `{0}`: left and right sides have different types")]
    RuleTypeMismatch(String),
    #[error("rule `{0}`: external map is not injective")]
    NonInjectiveExt(String),
    #[error("label `{0}` is not declared in the system alphabets")]
    UndeclaredLabel(String),
    #[error("start hypergraph must have an injective external map")]
    StartExtNotInjective,
    #[error("stale occurrence: the match does not embed into the host graph")]
    StaleOccurrence,
    #[error("{0}")]
    Malformed(String),
}

/// A hypergraph transformation rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HtRule {
    pub name: Sym,
    pub lhs: Hypergraph,
    pub rhs: Hypergraph,
}

impl HtRule {
    pub fn new(name: impl Into<Sym>, lhs: Hypergraph, rhs: Hypergraph) -> Result<HtRule, EngineError> {
        let name = name.into();
        if lhs.hg_type() != rhs.hg_type() {
            return Err(EngineError::RuleTypeMismatch(name.to_string()));
        }
        if !lhs.has_injective_ext() || !rhs.has_injective_ext() {
            return Err(EngineError::NonInjectiveExt(name.to_string()));
        }
        Ok(HtRule { name, lhs, rhs })
    }

    /// Net size change of one application: internal nodes and edges added
    /// minus internal nodes and edges removed.
    pub fn size_delta(&self) -> i64 {
        let removed = self.lhs.internal_nodes().len() + self.lhs.edges().len();
        let added = self.rhs.internal_nodes().len() + self.rhs.edges().len();
        added as i64 - removed as i64
    }
}

/// A hypergraph transformation system: alphabets, rules, start graph.
#[derive(Debug, Clone)]
pub struct HtSystem {
    pub nonterminals: TypedAlphabet,
    pub terminals: TypedAlphabet,
    pub rules: Vec<HtRule>,
    pub start: Hypergraph,
}

impl HtSystem {
    pub fn new(
        nonterminals: TypedAlphabet,
        terminals: TypedAlphabet,
        rules: Vec<HtRule>,
        start: Hypergraph,
    ) -> Result<HtSystem, EngineError> {
        if !start.has_injective_ext() {
            return Err(EngineError::StartExtNotInjective);
        }
        let all = nonterminals
            .union(&terminals)
            .map_err(|e| EngineError::Malformed(e.to_string()))?;
        let check = |g: &Hypergraph| -> Result<(), EngineError> {
            for e in g.edges().values() {
                match all.type_of(&e.label) {
                    None => return Err(EngineError::UndeclaredLabel(e.label.to_string())),
                    Some(ty) if *ty != e.selector_type() => {
                        return Err(EngineError::Malformed(format!(
                            "edge labeled `{}` used with selectors {{{}}}, declared {{{}}}",
                            e.label,
                            itertools::join(e.selector_type().iter(), ","),
                            itertools::join(ty.iter(), ","),
                        )))
                    }
                    _ => {}
                }
            }
            Ok(())
        };
        check(&start)?;
        for r in &rules {
            check(&r.lhs)?;
            check(&r.rhs)?;
        }
        Ok(HtSystem {
            nonterminals,
            terminals,
            rules,
            start,
        })
    }

    pub fn alphabet(&self) -> TypedAlphabet {
        self.nonterminals.union(&self.terminals).expect("validated at construction")
    }

    /// True when every edge of the graph carries a terminal label.
    pub fn is_terminal_graph(&self, g: &Hypergraph) -> bool {
        g.edges().values().all(|e| self.terminals.contains(&e.label))
    }

    /// True when no rule consumes a terminal-labeled edge; then terminal
    /// edge counts grow monotonically along derivations.
    pub fn terminals_persist(&self) -> bool {
        self.rules.iter().all(|r| {
            r.lhs
                .edges()
                .values()
                .all(|e| !self.terminals.contains(&e.label))
        })
    }

    pub fn rule(&self, name: &Sym) -> Option<&HtRule> {
        self.rules.iter().find(|r| &r.name == name)
    }
}
