//! Symbols and symbol contexts.
//!
//! Every polynomial lives in an explicit, immutable symbol context (an
//! ordered list of distinct names). Mixing values from different contexts is
//! an error, never a silent union; values can be lifted into a superset
//! context explicitly.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(String);

impl Symbol {
    pub fn new(name: &str) -> Result<Self> {
        if is_valid_name(name) {
            Ok(Symbol(name.to_owned()))
        } else {
            Err(Error::InvalidSymbolName(name.to_owned()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug)]
pub struct SymbolContext {
    symbols: Vec<Symbol>,
    index: HashMap<String, usize>,
}

/// Shared handle to a context. Contexts compare by their symbol lists, so
/// two independently built contexts with the same names are interchangeable.
pub type Context = Arc<SymbolContext>;

impl PartialEq for SymbolContext {
    fn eq(&self, other: &Self) -> bool {
        self.symbols == other.symbols
    }
}

impl Eq for SymbolContext {}

impl SymbolContext {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Context> {
        let mut symbols = Vec::with_capacity(names.len());
        let mut index = HashMap::with_capacity(names.len());
        for name in names {
            let sym = Symbol::new(name.as_ref())?;
            if index.insert(sym.0.clone(), symbols.len()).is_some() {
                return Err(Error::DuplicateSymbol(sym.0));
            }
            symbols.push(sym);
        }
        Ok(Arc::new(SymbolContext { symbols, index }))
    }

    pub fn empty() -> Context {
        SymbolContext::new::<&str>(&[]).expect("empty context")
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn symbol(&self, i: usize) -> &Symbol {
        &self.symbols[i]
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn names(&self) -> Vec<String> {
        self.symbols.iter().map(|s| s.0.clone()).collect()
    }

    /// True when every symbol of `other` is declared here.
    pub fn contains_all(&self, other: &SymbolContext) -> bool {
        other.symbols.iter().all(|s| self.index.contains_key(&s.0))
    }

    /// New context with `self`'s symbols followed by `other`'s new ones.
    pub fn union(a: &Context, b: &Context) -> Context {
        let mut names = a.names();
        for s in b.symbols() {
            if a.position(s.as_str()).is_none() {
                names.push(s.as_str().to_owned());
            }
        }
        SymbolContext::new(&names).expect("union of valid contexts")
    }

    /// New context extending `self` by `extra` names (which must be fresh).
    pub fn extend<S: AsRef<str>>(base: &Context, extra: &[S]) -> Result<Context> {
        let mut names = base.names();
        for n in extra {
            names.push(n.as_ref().to_owned());
        }
        SymbolContext::new(&names)
    }

    pub fn describe(&self) -> String {
        self.names().join(", ")
    }
}

/// Indexed coordinate names `x1..xn`, avoiding clashes with `taken`.
/// Falls back to `gx1..` style prefixes when the plain name is taken.
pub fn coordinate_names(prefix: &str, n: usize, taken: &SymbolContext) -> Vec<String> {
    for p in [
        prefix.to_owned(),
        format!("g{prefix}"),
        format!("c_{prefix}"),
    ] {
        let names: Vec<String> = (1..=n).map(|i| format!("{p}{i}")).collect();
        if names.iter().all(|name| taken.position(name).is_none()) {
            return names;
        }
    }
    (1..=n).map(|i| format!("{prefix}_{i}")).collect()
}

pub fn context_mismatch(a: &SymbolContext, b: &SymbolContext) -> Error {
    Error::ContextMismatch {
        left: a.describe(),
        right: b.describe(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_names() {
        assert!(SymbolContext::new(&["1x"]).is_err());
        assert!(SymbolContext::new(&[""]).is_err());
        assert!(SymbolContext::new(&["x-y"]).is_err());
        assert!(SymbolContext::new(&["x1", "x1"]).is_err());
    }

    #[test]
    fn union_keeps_order_and_dedupes() {
        let a = SymbolContext::new(&["lambda", "x1"]).unwrap();
        let b = SymbolContext::new(&["x1", "y1"]).unwrap();
        let u = SymbolContext::union(&a, &b);
        assert_eq!(u.names(), vec!["lambda", "x1", "y1"]);
        assert!(u.contains_all(&a));
        assert!(u.contains_all(&b));
    }

    #[test]
    fn coordinate_names_avoid_clashes() {
        let taken = SymbolContext::new(&["y2"]).unwrap();
        let names = coordinate_names("y", 3, &taken);
        assert_eq!(names, vec!["gy1", "gy2", "gy3"]);
    }
}
