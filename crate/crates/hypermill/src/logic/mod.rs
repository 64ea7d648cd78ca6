//! Formulas and sequents of first-order multiplicative intuitionistic
//! linear logic, extended with the `!` modality.
//!
//! There are no function symbols and no constants: atom arguments are
//! variables, and variables double as hypergraph nodes and selectors.
//! Antecedents are multisets; we store them sorted by the derived formula
//! ordering so that iteration and serialization are deterministic, while
//! equality stays order-insensitive.

mod parse;

pub use parse::{parse_formula, parse_sequent, FormulaParseError};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::symbol::{fresh_like, Sym};

#[derive(Debug, Error)]
pub enum LogicError {
    #[error("predicate `{pred}` used with arity {found} but declared with {expected}")]
    ArityMismatch {
        pred: String,
        expected: usize,
        found: usize,
    },
    #[error("{0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    /// `p(x1, …, xn)`; nullary atoms have an empty argument list.
    Atom(Sym, Vec<Sym>),
    Tensor(Box<Formula>, Box<Formula>),
    /// `Lolli(a, b)` is the linear implication `a -o b`.
    Lolli(Box<Formula>, Box<Formula>),
    Exists(Sym, Box<Formula>),
    Forall(Sym, Box<Formula>),
    Bang(Box<Formula>),
}

impl Formula {
    pub fn atom(pred: impl Into<Sym>, args: impl IntoIterator<Item = impl Into<Sym>>) -> Formula {
        Formula::Atom(pred.into(), args.into_iter().map(Into::into).collect())
    }

    pub fn tensor(a: Formula, b: Formula) -> Formula {
        Formula::Tensor(Box::new(a), Box::new(b))
    }

    pub fn lolli(a: Formula, b: Formula) -> Formula {
        Formula::Lolli(Box::new(a), Box::new(b))
    }

    pub fn exists(x: impl Into<Sym>, body: Formula) -> Formula {
        Formula::Exists(x.into(), Box::new(body))
    }

    pub fn forall(x: impl Into<Sym>, body: Formula) -> Formula {
        Formula::Forall(x.into(), Box::new(body))
    }

    pub fn bang(a: Formula) -> Formula {
        Formula::Bang(Box::new(a))
    }

    /// Left-associated tensor over a nonempty sequence.
    pub fn big_tensor(parts: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        parts.into_iter().reduce(Formula::tensor)
    }

    /// Quantifies `fa x1. fa x2. …` over the body, first variable outermost.
    pub fn forall_many(vars: impl IntoIterator<Item = Sym>, body: Formula) -> Formula {
        let vars: Vec<Sym> = vars.into_iter().collect();
        vars.into_iter()
            .rev()
            .fold(body, |acc, x| Formula::forall(x, acc))
    }

    /// Quantifies `ex x1. ex x2. …` over the body, first variable outermost.
    pub fn exists_many(vars: impl IntoIterator<Item = Sym>, body: Formula) -> Formula {
        let vars: Vec<Sym> = vars.into_iter().collect();
        vars.into_iter()
            .rev()
            .fold(body, |acc, x| Formula::exists(x, acc))
    }

    pub fn free_vars(&self) -> BTreeSet<Sym> {
        fn walk(f: &Formula, bound: &mut Vec<Sym>, out: &mut BTreeSet<Sym>) {
            match f {
                Formula::Atom(_, args) => {
                    for a in args {
                        if !bound.contains(a) {
                            out.insert(a.clone());
                        }
                    }
                }
                Formula::Tensor(a, b) | Formula::Lolli(a, b) => {
                    walk(a, bound, out);
                    walk(b, bound, out);
                }
                Formula::Exists(x, body) | Formula::Forall(x, body) => {
                    bound.push(x.clone());
                    walk(body, bound, out);
                    bound.pop();
                }
                Formula::Bang(a) => walk(a, bound, out),
            }
        }
        let mut out = BTreeSet::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn contains_bang(&self) -> bool {
        match self {
            Formula::Atom(..) => false,
            Formula::Tensor(a, b) | Formula::Lolli(a, b) => a.contains_bang() || b.contains_bang(),
            Formula::Exists(_, a) | Formula::Forall(_, a) => a.contains_bang(),
            Formula::Bang(_) => true,
        }
    }

    /// Connective-and-atom count; substitution never changes it.
    pub fn weight(&self) -> usize {
        match self {
            Formula::Atom(..) => 1,
            Formula::Tensor(a, b) | Formula::Lolli(a, b) => 1 + a.weight() + b.weight(),
            Formula::Exists(_, a) | Formula::Forall(_, a) | Formula::Bang(a) => 1 + a.weight(),
        }
    }

    /// Simultaneous capture-avoiding substitution of free variables.
    pub fn apply_subst(&self, h: &BTreeMap<Sym, Sym>) -> Formula {
        if h.is_empty() {
            return self.clone();
        }
        match self {
            Formula::Atom(p, args) => Formula::Atom(
                p.clone(),
                args.iter()
                    .map(|a| h.get(a).cloned().unwrap_or_else(|| a.clone()))
                    .collect(),
            ),
            Formula::Tensor(a, b) => Formula::tensor(a.apply_subst(h), b.apply_subst(h)),
            Formula::Lolli(a, b) => Formula::lolli(a.apply_subst(h), b.apply_subst(h)),
            Formula::Bang(a) => Formula::bang(a.apply_subst(h)),
            Formula::Exists(x, body) | Formula::Forall(x, body) => {
                let body_free = body.free_vars();
                let mut restricted: BTreeMap<Sym, Sym> = h
                    .iter()
                    .filter(|(k, _)| *k != x && body_free.contains(*k))
                    .map(|(k, v)| (k.clone(), v.clone()))
                    .collect();
                let binder;
                if restricted.values().any(|v| v == x) {
                    // incoming substitution would be captured; rename the binder
                    let used: BTreeSet<Sym> = body_free
                        .iter()
                        .chain(restricted.values())
                        .chain(restricted.keys())
                        .cloned()
                        .collect();
                    binder = fresh_like(x, &|cand| used.contains(cand));
                    restricted.insert(x.clone(), binder.clone());
                } else {
                    binder = x.clone();
                }
                let new_body = body.apply_subst(&restricted);
                match self {
                    Formula::Exists(..) => Formula::exists(binder, new_body),
                    _ => Formula::forall(binder, new_body),
                }
            }
        }
    }

    /// `A[y/x]`: replace free occurrences of `x` by `y`.
    pub fn subst_one(&self, x: &Sym, y: &Sym) -> Formula {
        self.apply_subst(&BTreeMap::from([(x.clone(), y.clone())]))
    }

    /// Renames bound variables to canonical placeholders (`#1`, `#2`, … in
    /// traversal order). The placeholder names are outside the concrete
    /// syntax, so they can never collide with free variables.
    pub fn alpha_normalize(&self) -> Formula {
        fn walk(f: &Formula, map: &mut BTreeMap<Sym, Vec<Sym>>, counter: &mut usize) -> Formula {
            match f {
                Formula::Atom(p, args) => Formula::Atom(
                    p.clone(),
                    args.iter()
                        .map(|a| {
                            map.get(a)
                                .and_then(|stack| stack.last())
                                .cloned()
                                .unwrap_or_else(|| a.clone())
                        })
                        .collect(),
                ),
                Formula::Tensor(a, b) => {
                    Formula::tensor(walk(a, map, counter), walk(b, map, counter))
                }
                Formula::Lolli(a, b) => {
                    Formula::lolli(walk(a, map, counter), walk(b, map, counter))
                }
                Formula::Bang(a) => Formula::bang(walk(a, map, counter)),
                Formula::Exists(x, body) | Formula::Forall(x, body) => {
                    *counter += 1;
                    let fresh = Sym::new(&format!("#{counter}"));
                    map.entry(x.clone()).or_default().push(fresh.clone());
                    let new_body = walk(body, map, counter);
                    map.get_mut(x).unwrap().pop();
                    match f {
                        Formula::Exists(..) => Formula::exists(fresh, new_body),
                        _ => Formula::forall(fresh, new_body),
                    }
                }
            }
        }
        walk(self, &mut BTreeMap::new(), &mut 0)
    }

    pub fn alpha_eq(&self, other: &Formula) -> bool {
        self == other || self.alpha_normalize() == other.alpha_normalize()
    }

    /// Replaces the i-th free variable occurrence (left to right) by the
    /// placeholder `xi<i>`, starting at `xi1`. Returns the rewritten
    /// formula together with the original variables in occurrence order,
    /// i.e. the substitution taking the result back to the input.
    pub fn placeholder_form(&self) -> (Formula, Vec<Sym>) {
        fn walk(f: &Formula, bound: &mut Vec<Sym>, occ: &mut Vec<Sym>) -> Formula {
            match f {
                Formula::Atom(p, args) => Formula::Atom(
                    p.clone(),
                    args.iter()
                        .map(|a| {
                            if bound.contains(a) {
                                a.clone()
                            } else {
                                occ.push(a.clone());
                                Sym::new(&format!("xi{}", occ.len()))
                            }
                        })
                        .collect(),
                ),
                Formula::Tensor(a, b) => {
                    let left = walk(a, bound, occ);
                    let right = walk(b, bound, occ);
                    Formula::tensor(left, right)
                }
                Formula::Lolli(a, b) => {
                    let left = walk(a, bound, occ);
                    let right = walk(b, bound, occ);
                    Formula::lolli(left, right)
                }
                Formula::Bang(a) => Formula::bang(walk(a, bound, occ)),
                Formula::Exists(x, body) | Formula::Forall(x, body) => {
                    bound.push(x.clone());
                    let new_body = walk(body, bound, occ);
                    bound.pop();
                    match f {
                        Formula::Exists(..) => Formula::exists(x.clone(), new_body),
                        _ => Formula::forall(x.clone(), new_body),
                    }
                }
            }
        }
        let mut occ = Vec::new();
        let out = walk(self, &mut Vec::new(), &mut occ);
        (out, occ)
    }

    pub fn render(&self) -> String {
        parse::render_formula(self)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// `Γ ⊢ B` with a multiset antecedent.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sequent {
    antecedent: Vec<Formula>,
    pub succedent: Formula,
}

impl Sequent {
    pub fn new(mut antecedent: Vec<Formula>, succedent: Formula) -> Sequent {
        antecedent.sort();
        Sequent {
            antecedent,
            succedent,
        }
    }

    pub fn antecedent(&self) -> &[Formula] {
        &self.antecedent
    }

    pub fn contains_bang(&self) -> bool {
        self.antecedent.iter().any(|f| f.contains_bang()) || self.succedent.contains_bang()
    }

    pub fn free_vars(&self) -> BTreeSet<Sym> {
        let mut out = self.succedent.free_vars();
        for f in &self.antecedent {
            out.extend(f.free_vars());
        }
        out
    }

    /// Multiset equality on antecedents, alpha-insensitive on both zones.
    pub fn alpha_eq(&self, other: &Sequent) -> bool {
        if self.antecedent.len() != other.antecedent.len() {
            return false;
        }
        let mut lhs: Vec<Formula> = self.antecedent.iter().map(|f| f.alpha_normalize()).collect();
        let mut rhs: Vec<Formula> = other.antecedent.iter().map(|f| f.alpha_normalize()).collect();
        lhs.sort();
        rhs.sort();
        lhs == rhs && self.succedent.alpha_eq(&other.succedent)
    }

    pub fn render(&self) -> String {
        let ant: Vec<String> = self.antecedent.iter().map(|f| f.render()).collect();
        if ant.is_empty() {
            format!("|- {}", self.succedent.render())
        } else {
            format!("{} |- {}", ant.join(", "), self.succedent.render())
        }
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Global predicate-arity consistency over a set of formulas. The reserved
/// node predicate is pinned at arity 1.
pub fn check_arities<'a>(
    formulas: impl IntoIterator<Item = &'a Formula>,
) -> Result<BTreeMap<Sym, usize>, LogicError> {
    let mut table: BTreeMap<Sym, usize> =
        BTreeMap::from([(Sym::new(crate::hypergraph::NODE_PREDICATE), 1)]);
    fn walk(f: &Formula, table: &mut BTreeMap<Sym, usize>) -> Result<(), LogicError> {
        match f {
            Formula::Atom(p, args) => match table.get(p) {
                Some(expected) if *expected != args.len() => Err(LogicError::ArityMismatch {
                    pred: p.to_string(),
                    expected: *expected,
                    found: args.len(),
                }),
                Some(_) => Ok(()),
                None => {
                    table.insert(p.clone(), args.len());
                    Ok(())
                }
            },
            Formula::Tensor(a, b) | Formula::Lolli(a, b) => {
                walk(a, table)?;
                walk(b, table)
            }
            Formula::Exists(_, a) | Formula::Forall(_, a) | Formula::Bang(a) => walk(a, table),
        }
    }
    for f in formulas {
        walk(f, &mut table)?;
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn free_vars_lexicon_entry() {
        // quantified implication from a lexicon: x is bound, s and t are free
        let a = f("fa x. (p(x,s) -o q(x,t))");
        let fv: Vec<String> = a.free_vars().iter().map(|v| v.to_string()).collect();
        assert_eq!(fv, vec!["s", "t"]);
    }

    #[test]
    fn free_vars_basics() {
        assert_eq!(f("p(x,y)").free_vars().len(), 2);
        assert!(f("ex x. p(x,x)").free_vars().is_empty());
    }

    #[test]
    fn subst_instantiates_lexicon() {
        let a = f("p(s,t)");
        let h = BTreeMap::from([
            (Sym::new("s"), Sym::new("x0")),
            (Sym::new("t"), Sym::new("x1")),
        ]);
        assert_eq!(a.apply_subst(&h), f("p(x0,x1)"));
    }

    #[test]
    fn subst_avoids_capture() {
        // (fa x. p(x,s))[x/s] must rename the binder
        let a = f("fa x. p(x,s)");
        let out = a.subst_one(&Sym::new("s"), &Sym::new("x"));
        assert!(out.alpha_eq(&f("fa y. p(y,x)")));
        assert!(!out.alpha_eq(&f("fa x. p(x,x)")));
    }

    #[test]
    fn subst_identity() {
        let a = f("fa x. (p(x,s) -o q(x,t))");
        assert_eq!(a.apply_subst(&BTreeMap::new()), a);
        let id = BTreeMap::from([(Sym::new("s"), Sym::new("s"))]);
        assert_eq!(a.apply_subst(&id), a);
    }

    #[test]
    fn subst_preserves_binder_count_and_free_var_image() {
        let a = f("fa x. (p(x,s) -o ex y. q(y,t))");
        let h = BTreeMap::from([
            (Sym::new("s"), Sym::new("u")),
            (Sym::new("t"), Sym::new("u")),
        ]);
        let out = a.apply_subst(&h);
        assert_eq!(out.weight(), a.weight());
        let fv = out.free_vars();
        assert_eq!(fv.len(), 1);
        assert!(fv.contains(&Sym::new("u")));
    }

    #[test]
    fn alpha_eq_cases() {
        assert!(f("fa x. p(x)").alpha_eq(&f("fa y. p(y)")));
        assert!(!f("p(x)").alpha_eq(&f("p(y)")));
        assert!(f("ex x. (p(x) * fa y. q(y,x))").alpha_eq(&f("ex a. (p(a) * fa b. q(b,a))")));
    }

    #[test]
    fn placeholder_form_example() {
        // every free occurrence numbered left to right, bound ones untouched
        let a = f("ex x. (a(x,y,y) * fa z. b(z,y,t))");
        let (out, occ) = a.placeholder_form();
        assert!(out.alpha_eq(&f("ex x. (a(x,xi1,xi2) * fa z. b(z,xi3,xi4))")));
        let names: Vec<String> = occ.iter().map(|v| v.to_string()).collect();
        assert_eq!(names, vec!["y", "y", "y", "t"]);
    }

    #[test]
    fn placeholder_form_closed_and_double() {
        let closed = f("ex x. p(x,x)");
        assert_eq!(closed.placeholder_form().0, closed);
        let (out, occ) = f("p(y,y)").placeholder_form();
        assert_eq!(out, f("p(xi1,xi2)"));
        assert_eq!(occ.len(), 2);
    }

    #[test]
    fn placeholder_occurrences_are_distinct() {
        let (out, occ) = f("p(y,y) * ex x. q(x,y)").placeholder_form();
        let mut seen = BTreeSet::new();
        let mut count = 0;
        fn atoms(fm: &Formula, seen: &mut BTreeSet<Sym>, count: &mut usize) {
            match fm {
                Formula::Atom(_, args) => {
                    for a in args {
                        if a.as_str().starts_with("xi") {
                            seen.insert(a.clone());
                            *count += 1;
                        }
                    }
                }
                Formula::Tensor(a, b) | Formula::Lolli(a, b) => {
                    atoms(a, seen, count);
                    atoms(b, seen, count);
                }
                Formula::Exists(_, a) | Formula::Forall(_, a) | Formula::Bang(a) => {
                    atoms(a, seen, count)
                }
            }
        }
        atoms(&out, &mut seen, &mut count);
        assert_eq!(seen.len(), count);
        assert_eq!(count, occ.len());
    }

    #[test]
    fn sequent_multiset_semantics() {
        let s1 = Sequent::new(vec![f("p"), f("q")], f("r"));
        let s2 = Sequent::new(vec![f("q"), f("p")], f("r"));
        assert_eq!(s1, s2);
        let s3 = Sequent::new(vec![f("p"), f("p")], f("r"));
        assert_ne!(s1, s3);
    }

    #[test]
    fn arity_table_consistency() {
        assert!(check_arities([&f("p(x) * p(y)")]).is_ok());
        assert!(check_arities([&f("p(x) * p(x,y)")]).is_err());
        assert!(check_arities([&f("nu(x,y)")]).is_err());
    }
}
