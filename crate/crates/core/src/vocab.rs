//! Symbol tables: vocabularies and constructor sets.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

/// Interned-ish symbol name. Cloning is a reference-count bump.
pub type Name = Arc<str>;

/// A symbol together with its arity, e.g. `cons/2` or `member/2`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Symbol {
    pub name: Name,
    pub arity: usize,
}

impl Symbol {
    pub fn new(name: impl Into<Name>, arity: usize) -> Self {
        Symbol {
            name: name.into(),
            arity,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", crate::term::display_name(&self.name), self.arity)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SymbolKind {
    Constant,
    Function,
    Predicate,
}

impl SymbolKind {
    /// Kind of a function-like symbol of the given arity.
    pub fn of_function(arity: usize) -> Self {
        if arity == 0 {
            SymbolKind::Constant
        } else {
            SymbolKind::Function
        }
    }

    pub fn is_predicate(self) -> bool {
        self == SymbolKind::Predicate
    }
}

/// A finite set of typed symbols.
///
/// Constants are function symbols of arity zero; the kind is derived from the
/// arity for non-predicates, so `(name, arity, kind)` uniquely identifies an
/// entry.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Vocabulary {
    symbols: BTreeSet<(SymbolKind, Symbol)>,
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_predicate(&mut self, symbol: Symbol) {
        self.symbols.insert((SymbolKind::Predicate, symbol));
    }

    pub fn add_function(&mut self, symbol: Symbol) {
        let kind = SymbolKind::of_function(symbol.arity);
        self.symbols.insert((kind, symbol));
    }

    pub fn insert(&mut self, kind: SymbolKind, symbol: Symbol) {
        if kind.is_predicate() {
            self.add_predicate(symbol)
        } else {
            self.add_function(symbol)
        }
    }

    pub fn contains(&self, kind: SymbolKind, symbol: &Symbol) -> bool {
        let kind = if kind.is_predicate() {
            kind
        } else {
            SymbolKind::of_function(symbol.arity)
        };
        self.symbols.contains(&(kind, symbol.clone()))
    }

    pub fn iter(&self) -> impl Iterator<Item = &(SymbolKind, Symbol)> {
        self.symbols.iter()
    }

    pub fn predicates(&self) -> impl Iterator<Item = &Symbol> {
        self.symbols
            .iter()
            .filter(|(k, _)| k.is_predicate())
            .map(|(_, s)| s)
    }

    /// Constants and function symbols.
    pub fn functions(&self) -> impl Iterator<Item = &Symbol> {
        self.symbols
            .iter()
            .filter(|(k, _)| !k.is_predicate())
            .map(|(_, s)| s)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn union(&self, other: &Vocabulary) -> Vocabulary {
        let mut out = self.clone();
        out.symbols.extend(other.symbols.iter().cloned());
        out
    }
}

impl FromIterator<(SymbolKind, Symbol)> for Vocabulary {
    fn from_iter<I: IntoIterator<Item = (SymbolKind, Symbol)>>(iter: I) -> Self {
        let mut v = Vocabulary::new();
        for (k, s) in iter {
            v.insert(k, s);
        }
        v
    }
}

/// The constructor symbols `CF` of a Herbrand axiom: constants and function
/// symbols only, never predicates.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ConstructorSet {
    members: BTreeSet<Symbol>,
}

impl ConstructorSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, symbol: Symbol) {
        self.members.insert(symbol);
    }

    pub fn contains(&self, symbol: &Symbol) -> bool {
        self.members.contains(symbol)
    }

    pub fn contains_functor(&self, name: &str, arity: usize) -> bool {
        self.members.contains(&Symbol::new(name, arity))
    }

    pub fn iter(&self) -> impl Iterator<Item = &Symbol> {
        self.members.iter()
    }

    pub fn constants(&self) -> impl Iterator<Item = &Symbol> {
        self.members.iter().filter(|s| s.arity == 0)
    }

    /// Function symbols of arity at least one.
    pub fn functors(&self) -> impl Iterator<Item = &Symbol> {
        self.members.iter().filter(|s| s.arity > 0)
    }

    pub fn has_constants(&self) -> bool {
        self.constants().next().is_some()
    }

    pub fn has_functors(&self) -> bool {
        self.functors().next().is_some()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn vocabulary(&self) -> Vocabulary {
        self.members
            .iter()
            .map(|s| (SymbolKind::of_function(s.arity), s.clone()))
            .collect()
    }
}

impl FromIterator<Symbol> for ConstructorSet {
    fn from_iter<I: IntoIterator<Item = Symbol>>(iter: I) -> Self {
        ConstructorSet {
            members: iter.into_iter().collect(),
        }
    }
}

impl Extend<Symbol> for ConstructorSet {
    fn extend<I: IntoIterator<Item = Symbol>>(&mut self, iter: I) {
        self.members.extend(iter);
    }
}

impl IntoIterator for ConstructorSet {
    type Item = Symbol;
    type IntoIter = std::collections::btree_set::IntoIter<Symbol>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.into_iter()
    }
}

impl fmt::Display for ConstructorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, s) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_are_arity_zero_functions() {
        let mut v = Vocabulary::new();
        v.add_function(Symbol::new("nil", 0));
        v.add_function(Symbol::new("cons", 2));
        v.add_predicate(Symbol::new("member", 2));
        assert!(v.contains(SymbolKind::Constant, &Symbol::new("nil", 0)));
        assert!(v.contains(SymbolKind::Function, &Symbol::new("nil", 0)));
        assert_eq!(v.predicates().count(), 1);
        assert_eq!(v.functions().count(), 2);
    }

    #[test]
    fn duplicate_entries_collapse() {
        let mut v = Vocabulary::new();
        v.add_predicate(Symbol::new("p", 1));
        v.add_predicate(Symbol::new("p", 1));
        v.add_predicate(Symbol::new("p", 2));
        assert_eq!(v.len(), 2);
    }

    #[test]
    fn constructor_set_split() {
        let cf: ConstructorSet = [Symbol::new("cons", 2)].into_iter().collect();
        assert!(!cf.has_constants());
        assert!(cf.has_functors());
    }
}
