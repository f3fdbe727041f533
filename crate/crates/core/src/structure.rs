//! First-order structures in two forms.
//!
//! An *extensional* structure lists a finite domain of named elements and
//! gives every symbol a table. A *term-generated* structure takes its domain
//! from a constructor set: every ground term over the constructors up to a
//! depth bound, with constructors interpreted as term formation. Any other
//! function symbol of a term-generated structure is a table or a builtin.
//!
//! Domain elements are represented as [`GroundTerm`]s in both forms; an
//! extensional element `a` is the constant term `a`.

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::rule::{Atom, Literal};
use crate::term::{herbrand_universe, herbrand_universe_size, GroundTerm, Term};
use crate::vocab::{ConstructorSet, Name, Symbol, SymbolKind, Vocabulary};

pub type Tuple = Vec<GroundTerm>;
pub type Relation = BTreeSet<Tuple>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("a structure needs a non-empty domain")]
    EmptyDomain,
    #[error("constructor set {0} has no constants, so its Herbrand universe is empty")]
    EmptyUniverse(String),
    #[error("symbol {0} is not interpreted by the structure")]
    UnknownSymbol(String),
    #[error("variable {0} is not assigned")]
    UnboundVariable(String),
    #[error("term {term} exceeds the depth bound {bound}")]
    DepthExceeded { term: String, bound: usize },
    #[error("value {value} of {term} lies outside the finite universe")]
    OutsideUniverse { term: String, value: String },
    #[error("element {element} used by {symbol} is not in the domain")]
    UnknownElement { element: String, symbol: String },
    #[error("{symbol} expects {expected} arguments, got {found}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("function {symbol} has no value for ({tuple}) and no default")]
    NotTotal { symbol: String, tuple: String },
    #[error("{symbol} is a constructor and cannot be given a table")]
    ConstructorRedefined { symbol: String },
    #[error("operation requires an extensional structure")]
    UnsupportedForm,
}

impl ModelError {
    /// Errors caused by the finite cut of an infinite universe rather than by
    /// malformed input.
    pub fn is_truncation(&self) -> bool {
        matches!(
            self,
            ModelError::DepthExceeded { .. } | ModelError::OutsideUniverse { .. }
        )
    }
}

/// Interpreted arithmetic on numeral constants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BuiltinOp {
    Product,
    Sum,
}

impl BuiltinOp {
    pub fn name(self) -> &'static str {
        match self {
            BuiltinOp::Product => "product",
            BuiltinOp::Sum => "sum",
        }
    }

    pub fn apply(self, a: u64, b: u64) -> Option<u64> {
        match self {
            BuiltinOp::Product => a.checked_mul(b),
            BuiltinOp::Sum => a.checked_add(b),
        }
    }
}

/// Value of a non-constructor function symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctionValue {
    /// Explicit entries, with `default` for every tuple not listed.
    Table {
        entries: BTreeMap<Tuple, GroundTerm>,
        default: Option<GroundTerm>,
    },
    /// Binary arithmetic on numerals; any non-numeral argument yields `default`.
    Builtin { op: BuiltinOp, default: GroundTerm },
}

impl FunctionValue {
    pub fn constant(value: GroundTerm) -> Self {
        FunctionValue::Table {
            entries: [(Vec::new(), value)].into_iter().collect(),
            default: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Form {
    Extensional {
        domain: BTreeSet<GroundTerm>,
    },
    TermGenerated {
        constructors: ConstructorSet,
        depth_bound: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Structure {
    form: Form,
    predicates: BTreeMap<Symbol, Relation>,
    functions: BTreeMap<Symbol, FunctionValue>,
}

/// Source of variable values for term evaluation.
pub trait Valuation {
    fn value(&self, var: &str) -> Option<&GroundTerm>;
}

impl Valuation for BTreeMap<Name, GroundTerm> {
    fn value(&self, var: &str) -> Option<&GroundTerm> {
        self.get(var)
    }
}

impl Valuation for std::collections::HashMap<Name, GroundTerm> {
    fn value(&self, var: &str) -> Option<&GroundTerm> {
        self.get(var)
    }
}

/// The empty assignment.
pub struct NoVars;

impl Valuation for NoVars {
    fn value(&self, _var: &str) -> Option<&GroundTerm> {
        None
    }
}

impl Structure {
    /// An extensional structure with the given domain and no symbols yet.
    pub fn extensional(domain: impl IntoIterator<Item = GroundTerm>) -> Result<Self, ModelError> {
        let domain: BTreeSet<_> = domain.into_iter().collect();
        if domain.is_empty() {
            return Err(ModelError::EmptyDomain);
        }
        Ok(Structure {
            form: Form::Extensional { domain },
            predicates: BTreeMap::new(),
            functions: BTreeMap::new(),
        })
    }

    /// Extensional domain from element names.
    pub fn with_elements<S: AsRef<str>>(names: &[S]) -> Result<Self, ModelError> {
        Structure::extensional(names.iter().map(|n| GroundTerm::constant(n.as_ref())))
    }

    /// A term-generated structure over `constructors`, cut at `depth_bound`.
    pub fn term_generated(constructors: ConstructorSet, depth_bound: usize) -> Result<Self, ModelError> {
        if !constructors.has_constants() {
            return Err(ModelError::EmptyUniverse(constructors.to_string()));
        }
        Ok(Structure {
            form: Form::TermGenerated {
                constructors,
                depth_bound,
            },
            predicates: BTreeMap::new(),
            functions: BTreeMap::new(),
        })
    }

    pub fn form(&self) -> &Form {
        &self.form
    }

    pub fn is_extensional(&self) -> bool {
        matches!(self.form, Form::Extensional { .. })
    }

    pub fn constructors(&self) -> Option<&ConstructorSet> {
        match &self.form {
            Form::TermGenerated { constructors, .. } => Some(constructors),
            Form::Extensional { .. } => None,
        }
    }

    pub fn depth_bound(&self) -> Option<usize> {
        match &self.form {
            Form::TermGenerated { depth_bound, .. } => Some(*depth_bound),
            Form::Extensional { .. } => None,
        }
    }

    /// Same structure with a different depth bound (term-generated only).
    pub fn with_depth_bound(mut self, bound: usize) -> Self {
        if let Form::TermGenerated { depth_bound, .. } = &mut self.form {
            *depth_bound = bound;
        }
        self
    }

    pub fn is_constructor(&self, name: &str, arity: usize) -> bool {
        self.constructors()
            .is_some_and(|cf| cf.contains_functor(name, arity))
    }

    /// Whether `t` is an element of the domain.
    pub fn contains(&self, t: &GroundTerm) -> bool {
        match &self.form {
            Form::Extensional { domain } => domain.contains(t),
            Form::TermGenerated {
                constructors,
                depth_bound,
            } => t.depth() <= *depth_bound && is_term_over(t, constructors),
        }
    }

    /// Number of domain elements, `None` if it overflows.
    pub fn domain_size(&self) -> Option<usize> {
        match &self.form {
            Form::Extensional { domain } => Some(domain.len()),
            Form::TermGenerated {
                constructors,
                depth_bound,
            } => herbrand_universe_size(constructors, *depth_bound),
        }
    }

    /// The domain. Materializes the Herbrand universe for term-generated
    /// structures; check [`Structure::domain_size`] first.
    pub fn domain(&self) -> Cow<'_, BTreeSet<GroundTerm>> {
        match &self.form {
            Form::Extensional { domain } => Cow::Borrowed(domain),
            Form::TermGenerated {
                constructors,
                depth_bound,
            } => Cow::Owned(herbrand_universe(constructors, *depth_bound)),
        }
    }

    /// Symbols the structure interprets.
    pub fn vocabulary(&self) -> Vocabulary {
        let mut v = Vocabulary::new();
        if let Some(cf) = self.constructors() {
            v = cf.vocabulary();
        }
        for p in self.predicates.keys() {
            v.add_predicate(p.clone());
        }
        for f in self.functions.keys() {
            v.add_function(f.clone());
        }
        v
    }

    pub fn interprets(&self, kind: SymbolKind, symbol: &Symbol) -> bool {
        if kind.is_predicate() {
            self.predicates.contains_key(symbol)
        } else {
            self.functions.contains_key(symbol) || self.is_constructor(&symbol.name, symbol.arity)
        }
    }

    pub fn predicate(&self, symbol: &Symbol) -> Option<&Relation> {
        self.predicates.get(symbol)
    }

    pub fn predicates(&self) -> &BTreeMap<Symbol, Relation> {
        &self.predicates
    }

    pub fn function(&self, symbol: &Symbol) -> Option<&FunctionValue> {
        self.functions.get(symbol)
    }

    pub fn functions(&self) -> &BTreeMap<Symbol, FunctionValue> {
        &self.functions
    }

    /// Sets the value of a predicate, checking arity and domain membership.
    pub fn set_predicate(
        &mut self,
        symbol: Symbol,
        tuples: impl IntoIterator<Item = Tuple>,
    ) -> Result<(), ModelError> {
        let mut rel = Relation::new();
        for t in tuples {
            if t.len() != symbol.arity {
                return Err(ModelError::ArityMismatch {
                    symbol: symbol.to_string(),
                    expected: symbol.arity,
                    found: t.len(),
                });
            }
            if let Some(bad) = t.iter().find(|e| !self.contains(e)) {
                return Err(ModelError::UnknownElement {
                    element: bad.to_string(),
                    symbol: symbol.to_string(),
                });
            }
            rel.insert(t);
        }
        self.predicates.insert(symbol, rel);
        Ok(())
    }

    pub fn with_predicate(
        mut self,
        symbol: Symbol,
        tuples: impl IntoIterator<Item = Tuple>,
    ) -> Result<Self, ModelError> {
        self.set_predicate(symbol, tuples)?;
        Ok(self)
    }

    /// Sets a function value, checking totality for extensional structures.
    pub fn set_function(&mut self, symbol: Symbol, value: FunctionValue) -> Result<(), ModelError> {
        if self.is_constructor(&symbol.name, symbol.arity) {
            return Err(ModelError::ConstructorRedefined {
                symbol: symbol.to_string(),
            });
        }
        match &value {
            FunctionValue::Table { entries, default } => {
                for (args, v) in entries {
                    if args.len() != symbol.arity {
                        return Err(ModelError::ArityMismatch {
                            symbol: symbol.to_string(),
                            expected: symbol.arity,
                            found: args.len(),
                        });
                    }
                    if let Some(bad) = args.iter().chain(std::iter::once(v)).find(|e| !self.contains(e)) {
                        return Err(ModelError::UnknownElement {
                            element: bad.to_string(),
                            symbol: symbol.to_string(),
                        });
                    }
                }
                if let Some(d) = default {
                    if !self.contains(d) {
                        return Err(ModelError::UnknownElement {
                            element: d.to_string(),
                            symbol: symbol.to_string(),
                        });
                    }
                } else {
                    self.check_total(&symbol, entries)?;
                }
            }
            FunctionValue::Builtin { default, .. } => {
                if symbol.arity != 2 {
                    return Err(ModelError::ArityMismatch {
                        symbol: symbol.to_string(),
                        expected: 2,
                        found: symbol.arity,
                    });
                }
                if !self.contains(default) {
                    return Err(ModelError::UnknownElement {
                        element: default.to_string(),
                        symbol: symbol.to_string(),
                    });
                }
            }
        }
        self.functions.insert(symbol, value);
        Ok(())
    }

    pub fn with_function(mut self, symbol: Symbol, value: FunctionValue) -> Result<Self, ModelError> {
        self.set_function(symbol, value)?;
        Ok(self)
    }

    /// Interprets a constant symbol as a domain element.
    pub fn with_constant(self, name: impl Into<Name>, value: GroundTerm) -> Result<Self, ModelError> {
        self.with_function(Symbol::new(name, 0), FunctionValue::constant(value))
    }

    fn check_total(&self, symbol: &Symbol, entries: &BTreeMap<Tuple, GroundTerm>) -> Result<(), ModelError> {
        let total = match self.domain_size() {
            Some(n) => n.checked_pow(symbol.arity as u32),
            None => None,
        };
        if total == Some(entries.len()) {
            return Ok(());
        }
        // Find a witness for the error message.
        let domain: Vec<_> = self.domain().iter().cloned().collect();
        for tuple in tuples_over(&domain, symbol.arity) {
            if !entries.contains_key(&tuple) {
                return Err(ModelError::NotTotal {
                    symbol: symbol.to_string(),
                    tuple: join(&tuple),
                });
            }
        }
        Ok(())
    }

    /// Drops the values of the given predicates.
    pub fn without_predicates<'a>(&self, symbols: impl IntoIterator<Item = &'a Symbol>) -> Structure {
        let mut out = self.clone();
        for s in symbols {
            out.predicates.remove(s);
        }
        out
    }

    /// Keeps only the symbols in `vocabulary` (constructors stay).
    pub fn reduct(&self, vocabulary: &Vocabulary) -> Structure {
        let mut out = self.clone();
        out.predicates
            .retain(|s, _| vocabulary.contains(SymbolKind::Predicate, s));
        out.functions
            .retain(|s, _| vocabulary.contains(SymbolKind::of_function(s.arity), s));
        out
    }

    /// Value of `t` under this structure and `valuation`.
    pub fn evaluate_term(&self, valuation: &dyn Valuation, t: &Term) -> Result<GroundTerm, ModelError> {
        match t {
            Term::Var(v) => valuation
                .value(v)
                .cloned()
                .ok_or_else(|| ModelError::UnboundVariable(v.to_string())),
            Term::App(f, args) => {
                let values = args
                    .iter()
                    .map(|a| self.evaluate_term(valuation, a))
                    .collect::<Result<Vec<_>, _>>()?;
                self.apply_function(f, values)
            }
        }
    }

    /// Applies the function symbol `name/values.len()` to domain elements.
    pub fn apply_function(&self, name: &Name, values: Vec<GroundTerm>) -> Result<GroundTerm, ModelError> {
        let symbol = Symbol::new(name.clone(), values.len());
        if let Form::TermGenerated {
            constructors,
            depth_bound,
        } = &self.form
        {
            if constructors.contains(&symbol) {
                let t = GroundTerm::app(name.clone(), values);
                if t.depth() > *depth_bound {
                    return Err(ModelError::DepthExceeded {
                        term: t.to_string(),
                        bound: *depth_bound,
                    });
                }
                return Ok(t);
            }
        }
        match self.functions.get(&symbol) {
            Some(FunctionValue::Table { entries, default }) => entries
                .get(&values)
                .or(default.as_ref())
                .cloned()
                .ok_or_else(|| ModelError::NotTotal {
                    symbol: symbol.to_string(),
                    tuple: join(&values),
                }),
            Some(FunctionValue::Builtin { op, default }) => {
                match (values[0].as_numeral(), values[1].as_numeral()) {
                    (Some(a), Some(b)) => {
                        let describe = || format!("{}({},{})", name, values[0], values[1]);
                        let n = op.apply(a, b).ok_or_else(|| ModelError::OutsideUniverse {
                            term: describe(),
                            value: "overflow".into(),
                        })?;
                        let v = GroundTerm::numeral(n);
                        if self.contains(&v) {
                            Ok(v)
                        } else {
                            Err(ModelError::OutsideUniverse {
                                term: describe(),
                                value: v.to_string(),
                            })
                        }
                    }
                    _ => Ok(default.clone()),
                }
            }
            None => Err(ModelError::UnknownSymbol(symbol.to_string())),
        }
    }

    /// Truth of a predicate atom.
    pub fn holds(&self, symbol: &Symbol, tuple: &[GroundTerm]) -> Result<bool, ModelError> {
        self.predicates
            .get(symbol)
            .map(|r| r.contains(tuple))
            .ok_or_else(|| ModelError::UnknownSymbol(symbol.to_string()))
    }

    pub fn evaluate_atom(&self, valuation: &dyn Valuation, atom: &Atom) -> Result<bool, ModelError> {
        let args = atom
            .args
            .iter()
            .map(|a| self.evaluate_term(valuation, a))
            .collect::<Result<Vec<_>, _>>()?;
        self.holds(&atom.symbol(), &args)
    }

    /// Truth of a body literal: predicate atoms, their negations, `true`,
    /// `false`, `s = t` and `s \= t` (identity of domain elements).
    pub fn evaluate_literal(&self, valuation: &dyn Valuation, literal: &Literal) -> Result<bool, ModelError> {
        match literal {
            Literal::Pos(a) => self.evaluate_atom(valuation, a),
            Literal::Neg(a) => self.evaluate_atom(valuation, a).map(|b| !b),
            Literal::True => Ok(true),
            Literal::False => Ok(false),
            Literal::Eq(s, t) => Ok(self.evaluate_term(valuation, s)? == self.evaluate_term(valuation, t)?),
            Literal::Neq(s, t) => Ok(self.evaluate_term(valuation, s)? != self.evaluate_term(valuation, t)?),
        }
    }
}

/// Whether `t` is built from constructors in `cf` only.
pub fn is_term_over(t: &GroundTerm, cf: &ConstructorSet) -> bool {
    cf.contains_functor(t.functor(), t.arity()) && t.args().iter().all(|a| is_term_over(a, cf))
}

/// All tuples of the given length over `items`, in lexicographic order.
pub fn tuples_over(items: &[GroundTerm], arity: usize) -> impl Iterator<Item = Tuple> + '_ {
    let total = if items.is_empty() && arity > 0 {
        0
    } else {
        items.len().pow(arity as u32)
    };
    (0..total).map(move |mut code| {
        let mut tuple = vec![GroundTerm::nil(); arity];
        for slot in tuple.iter_mut().rev() {
            *slot = items[code % items.len()].clone();
            code /= items.len();
        }
        tuple
    })
}

fn join(tuple: &[GroundTerm]) -> String {
    tuple
        .iter()
        .map(|t| t.to_string())
        .collect::<Vec<_>>()
        .join(",")
}
