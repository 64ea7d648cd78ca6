//! Interned symbols.
//!
//! Selectors, logic variables, node identifiers, edge identifiers and
//! predicate names all live in one symbol space; the encodings between
//! graphs and formulas depend on being able to move a name from one role
//! to another without translation.

use std::collections::HashSet;
use std::fmt;
use std::sync::{Arc, Mutex};

use once_cell::sync::Lazy;

static INTERNER: Lazy<Mutex<HashSet<Arc<str>>>> = Lazy::new(|| Mutex::new(HashSet::new()));

/// An interned symbol. Cheap to clone; ordered and compared by content so
/// every derived ordering is stable across runs and threads.
#[derive(Clone)]
pub struct Sym(Arc<str>);

impl Sym {
    pub fn new(name: &str) -> Sym {
        assert!(!name.is_empty(), "symbols must be nonempty");
        let mut table = INTERNER.lock().unwrap();
        if let Some(existing) = table.get(name) {
            return Sym(existing.clone());
        }
        let arc: Arc<str> = Arc::from(name);
        table.insert(arc.clone());
        Sym(arc)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl PartialEq for Sym {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Sym {}

impl PartialOrd for Sym {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Sym {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.cmp(&other.0)
    }
}

impl std::hash::Hash for Sym {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state);
    }
}

impl fmt::Debug for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<&str> for Sym {
    fn from(s: &str) -> Sym {
        Sym::new(s)
    }
}

impl From<String> for Sym {
    fn from(s: String) -> Sym {
        Sym::new(&s)
    }
}

/// Returns `base` if it is not in `used`, otherwise `base_1`, `base_2`, …
/// (first name not in `used`). The caller records the result as used.
pub fn fresh_like(base: &Sym, used: &dyn Fn(&Sym) -> bool) -> Sym {
    if !used(base) {
        return base.clone();
    }
    for k in 1.. {
        let candidate = Sym::new(&format!("{}_{}", base, k));
        if !used(&candidate) {
            return candidate;
        }
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_dedupes() {
        let a = Sym::new("x");
        let b = Sym::new("x");
        assert!(Arc::ptr_eq(&a.0, &b.0));
        assert_eq!(a, b);
    }

    #[test]
    fn ordering_is_by_content() {
        assert!(Sym::new("a") < Sym::new("b"));
        assert!(Sym::new("v10") < Sym::new("v2")); // lexicographic, by design
    }

    #[test]
    fn fresh_like_skips_used_names() {
        let used = |s: &Sym| s.as_str() == "v" || s.as_str() == "v_1";
        assert_eq!(fresh_like(&Sym::new("v"), &used).as_str(), "v_2");
        assert_eq!(fresh_like(&Sym::new("w"), &used).as_str(), "w");
    }
}
