//! Ground terms, open terms and Herbrand universe enumeration.
//!
//! Lists use the constructors `nil/0` and `cons/2`. They print with the usual
//! bracket sugar (`[]`, `[1,2,3]`, `[H|T]`).

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::vocab::{ConstructorSet, Name, Symbol};

pub const NIL: &str = "nil";
pub const CONS: &str = "cons";

/// A finite ground term. Clones share structure.
#[derive(Clone)]
pub struct GroundTerm(Arc<Node>);

struct Node {
    functor: Name,
    args: Vec<GroundTerm>,
    depth: usize,
}

impl GroundTerm {
    pub fn constant(name: impl Into<Name>) -> Self {
        GroundTerm(Arc::new(Node {
            functor: name.into(),
            args: Vec::new(),
            depth: 0,
        }))
    }

    pub fn app(functor: impl Into<Name>, args: Vec<GroundTerm>) -> Self {
        let depth = args.iter().map(|a| a.depth() + 1).max().unwrap_or(0);
        GroundTerm(Arc::new(Node {
            functor: functor.into(),
            args,
            depth,
        }))
    }

    pub fn numeral(n: u64) -> Self {
        GroundTerm::constant(n.to_string())
    }

    pub fn nil() -> Self {
        GroundTerm::constant(NIL)
    }

    pub fn cons(head: GroundTerm, tail: GroundTerm) -> Self {
        GroundTerm::app(CONS, vec![head, tail])
    }

    /// Builds a proper list from its elements.
    pub fn list(items: impl IntoIterator<Item = GroundTerm>) -> Self {
        let items: Vec<_> = items.into_iter().collect();
        items
            .into_iter()
            .rev()
            .fold(GroundTerm::nil(), |tail, head| GroundTerm::cons(head, tail))
    }

    pub fn functor(&self) -> &Name {
        &self.0.functor
    }

    pub fn args(&self) -> &[GroundTerm] {
        &self.0.args
    }

    pub fn arity(&self) -> usize {
        self.0.args.len()
    }

    pub fn symbol(&self) -> Symbol {
        Symbol::new(self.0.functor.clone(), self.arity())
    }

    /// `depth(c) = 0`, `depth(f(t1..tn)) = 1 + max depth(ti)`.
    pub fn depth(&self) -> usize {
        self.0.depth
    }

    pub fn is_constant(&self) -> bool {
        self.0.args.is_empty()
    }

    /// Value of a numeral constant such as `42`.
    pub fn as_numeral(&self) -> Option<u64> {
        if self.is_constant() {
            parse_numeral(&self.0.functor)
        } else {
            None
        }
    }

    /// Adds this term and all of its subterms to `out`.
    pub fn collect_subterms(&self, out: &mut BTreeSet<GroundTerm>) {
        if out.insert(self.clone()) {
            for a in self.args() {
                a.collect_subterms(out);
            }
        }
    }
}

pub fn parse_numeral(name: &str) -> Option<u64> {
    if !name.is_empty() && name.bytes().all(|b| b.is_ascii_digit()) {
        name.parse().ok()
    } else {
        None
    }
}

impl PartialEq for GroundTerm {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.depth == other.0.depth
                && self.0.functor == other.0.functor
                && self.0.args == other.0.args)
    }
}

impl Eq for GroundTerm {}

impl Hash for GroundTerm {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.functor.hash(state);
        self.0.args.hash(state);
    }
}

fn name_cmp(a: &str, b: &str) -> Ordering {
    match (parse_numeral(a), parse_numeral(b)) {
        (Some(x), Some(y)) => x.cmp(&y),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => a.cmp(b),
    }
}

/// Terms order by depth, then numerals numerically, then by name, then
/// argument-wise. Listings therefore read small terms first.
impl Ord for GroundTerm {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.depth()
            .cmp(&other.depth())
            .then_with(|| name_cmp(self.functor(), other.functor()))
            .then_with(|| self.arity().cmp(&other.arity()))
            .then_with(|| self.args().cmp(other.args()))
    }
}

impl PartialOrd for GroundTerm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for GroundTerm {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Writes a symbol name, quoting it when it would not read back as an atom.
pub fn display_name(name: &str) -> String {
    if name == NIL {
        return "[]".to_string();
    }
    if is_plain_atom(name) || parse_numeral(name).is_some() {
        name.to_string()
    } else {
        format!("'{}'", name.replace('\\', "\\\\").replace('\'', "\\'"))
    }
}

fn is_plain_atom(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !matches!(name, "not" | "true" | "false")
}

fn fmt_list<T: fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    first: &T,
    mut tail_of: impl FnMut() -> ListTail<T>,
) -> fmt::Result {
    write!(f, "[{first}")?;
    loop {
        match tail_of() {
            ListTail::Nil => return f.write_str("]"),
            ListTail::More(h) => write!(f, ",{h}")?,
            ListTail::Improper(t) => return write!(f, "|{t}]"),
        }
    }
}

enum ListTail<T> {
    Nil,
    More(T),
    Improper(T),
}

impl fmt::Display for GroundTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.functor().as_ref() == CONS && self.arity() == 2 {
            let mut rest = self.args()[1].clone();
            return fmt_list(f, &self.args()[0], || {
                if rest.functor().as_ref() == NIL && rest.is_constant() {
                    ListTail::Nil
                } else if rest.functor().as_ref() == CONS && rest.arity() == 2 {
                    let head = rest.args()[0].clone();
                    rest = rest.args()[1].clone();
                    ListTail::More(head)
                } else {
                    ListTail::Improper(rest.clone())
                }
            });
        }
        f.write_str(&display_name(self.functor()))?;
        if !self.is_constant() {
            f.write_str("(")?;
            for (i, a) in self.args().iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for GroundTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A term that may contain variables.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Term {
    Var(Name),
    App(Name, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<Name>) -> Self {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<Name>) -> Self {
        Term::App(name.into(), Vec::new())
    }

    pub fn app(name: impl Into<Name>, args: Vec<Term>) -> Self {
        Term::App(name.into(), args)
    }

    pub fn nil() -> Self {
        Term::constant(NIL)
    }

    pub fn cons(head: Term, tail: Term) -> Self {
        Term::app(CONS, vec![head, tail])
    }

    pub fn from_ground(t: &GroundTerm) -> Self {
        Term::App(
            t.functor().clone(),
            t.args().iter().map(Term::from_ground).collect(),
        )
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Converts a variable-free term.
    pub fn to_ground(&self) -> Option<GroundTerm> {
        match self {
            Term::Var(_) => None,
            Term::App(f, args) => {
                let args = args
                    .iter()
                    .map(Term::to_ground)
                    .collect::<Option<Vec<_>>>()?;
                Some(GroundTerm::app(f.clone(), args))
            }
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Name>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    /// Every non-variable symbol occurring in the term, with its arity.
    pub fn collect_functions(&self, out: &mut BTreeSet<Symbol>) {
        if let Term::App(f, args) = self {
            out.insert(Symbol::new(f.clone(), args.len()));
            args.iter().for_each(|a| a.collect_functions(out));
        }
    }

    /// Whether `needle` occurs in `self` along a path of constructor symbols
    /// only (the root counts, so every term is its own constructor subterm).
    pub fn has_constructor_subterm(&self, needle: &Term, cf: &ConstructorSet) -> bool {
        if self == needle {
            return true;
        }
        match self {
            Term::App(f, args) if cf.contains_functor(f, args.len()) => {
                args.iter().any(|a| a.has_constructor_subterm(needle, cf))
            }
            _ => false,
        }
    }

    /// Ground subterms of this term.
    pub fn collect_ground_subterms(&self, out: &mut BTreeSet<GroundTerm>) {
        if let Some(g) = self.to_ground() {
            g.collect_subterms(out);
        } else if let Term::App(_, args) = self {
            args.iter().for_each(|a| a.collect_ground_subterms(out));
        }
    }

    pub fn substitute(&self, binding: &BTreeMap<Name, Term>) -> Term {
        match self {
            Term::Var(v) => binding.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|a| a.substitute(binding)).collect())
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::App(name, args) if name.as_ref() == CONS && args.len() == 2 => {
                let mut rest = args[1].clone();
                fmt_list(f, &args[0], || match &rest {
                    Term::App(n, a) if n.as_ref() == NIL && a.is_empty() => ListTail::Nil,
                    Term::App(n, a) if n.as_ref() == CONS && a.len() == 2 => {
                        let head = a[0].clone();
                        let tail = a[1].clone();
                        rest = tail;
                        ListTail::More(head)
                    }
                    other => ListTail::Improper(other.clone()),
                })
            }
            Term::App(name, args) => {
                f.write_str(&display_name(name))?;
                if !args.is_empty() {
                    f.write_str("(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            f.write_str(",")?;
                        }
                        write!(f, "{a}")?;
                    }
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

/// All ground terms over `cf` of depth at most `depth_bound`.
///
/// Empty exactly when `cf` has no constants.
pub fn herbrand_universe(cf: &ConstructorSet, depth_bound: usize) -> BTreeSet<GroundTerm> {
    let mut all: Vec<GroundTerm> = cf.constants().map(|c| GroundTerm::constant(c.name.clone())).collect();
    // `frontier` holds the terms of the maximal depth found so far.
    if all.is_empty() {
        return BTreeSet::new();
    }
    let mut frontier_start = 0;
    for _ in 0..depth_bound {
        let previous = all.len();
        let mut next = Vec::new();
        for f in cf.functors() {
            // Argument tuples over `all` that use at least one frontier term.
            let mut tuple = vec![0usize; f.arity];
            'tuples: loop {
                if tuple.iter().any(|&i| i >= frontier_start) {
                    next.push(GroundTerm::app(
                        f.name.clone(),
                        tuple.iter().map(|&i| all[i].clone()).collect(),
                    ));
                }
                for slot in tuple.iter_mut().rev() {
                    *slot += 1;
                    if *slot < previous {
                        continue 'tuples;
                    }
                    *slot = 0;
                }
                break;
            }
        }
        if next.is_empty() {
            break;
        }
        frontier_start = previous;
        all.extend(next);
    }
    all.into_iter().collect()
}

/// Size of [`herbrand_universe`] without materializing it, or `None` when it
/// exceeds `usize`.
pub fn herbrand_universe_size(cf: &ConstructorSet, depth_bound: usize) -> Option<usize> {
    let constants = cf.constants().count();
    let mut total = constants;
    for _ in 0..depth_bound {
        // Terms of depth <= d are constants plus f(args) with args of depth < d.
        let mut next = constants;
        for f in cf.functors() {
            let mut n: usize = 1;
            for _ in 0..f.arity {
                n = n.checked_mul(total)?;
            }
            next = next.checked_add(n)?;
        }
        if next == total {
            break;
        }
        total = next;
    }
    Some(total)
}
