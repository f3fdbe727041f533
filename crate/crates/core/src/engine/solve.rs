//! Join-based rule evaluation. Variables are bound by matching positive body
//! atoms against relations, destructuring constructor patterns on the way;
//! the remaining variables range over the scope.

use std::cell::{Cell, RefCell};
use std::collections::{BTreeMap, BTreeSet};

use super::scope::Scope;
use super::{EngineError, Interpretation};
use crate::rule::{Atom, GroundAtom, Literal, Rule};
use crate::structure::{FunctionValue, ModelError, Relation, Structure, Valuation};
use crate::term::{GroundTerm, Term};
use crate::vocab::{Name, Symbol};

static EMPTY: Relation = Relation::new();

/// Variable assignment built up during a search; a stack so that
/// backtracking is a truncate.
#[derive(Default, Debug, Clone)]
pub(crate) struct Bindings(Vec<(Name, GroundTerm)>);

impl Bindings {
    pub(crate) fn get(&self, v: &str) -> Option<&GroundTerm> {
        self.0.iter().rev().find(|(n, _)| &**n == v).map(|(_, t)| t)
    }

    fn push(&mut self, v: Name, t: GroundTerm) {
        self.0.push((v, t));
    }

    pub(crate) fn with(mut self, v: Name, t: GroundTerm) -> Self {
        self.push(v, t);
        self
    }

    pub(crate) fn to_map(&self) -> BTreeMap<Name, GroundTerm> {
        self.0.iter().cloned().collect()
    }
}

impl Valuation for Bindings {
    fn value(&self, var: &str) -> Option<&GroundTerm> {
        self.get(var)
    }
}

/// Shared state of one evaluation: the structure, the scope, and a log of
/// truncation events (terms that fall outside the depth-bounded domain).
pub(crate) struct Ctx<'a> {
    pub m: &'a Structure,
    pub scope: &'a Scope,
    events: Cell<usize>,
    first_event: RefCell<Option<String>>,
}

impl<'a> Ctx<'a> {
    pub(crate) fn new(m: &'a Structure, scope: &'a Scope) -> Self {
        Ctx {
            m,
            scope,
            events: Cell::new(0),
            first_event: RefCell::new(None),
        }
    }

    fn event(&self, describe: impl FnOnce() -> String) {
        if self.events.get() == 0 {
            *self.first_event.borrow_mut() = Some(describe());
        }
        self.events.set(self.events.get() + 1);
    }

    pub(crate) fn first_event(&self) -> Option<String> {
        self.first_event.borrow().clone()
    }

    /// Value of a term with constructors applied freely, so that the result
    /// may lie beyond the depth bound.
    pub(crate) fn eval(&self, b: &Bindings, t: &Term) -> Result<GroundTerm, EngineError> {
        match t {
            Term::Var(v) => b
                .get(v)
                .cloned()
                .ok_or_else(|| ModelError::UnboundVariable(v.to_string()).into()),
            Term::App(f, args) => {
                let values = args.iter().map(|a| self.eval(b, a)).collect::<Result<Vec<_>, _>>()?;
                if self.m.is_constructor(f, values.len()) {
                    return Ok(GroundTerm::app(f.clone(), values));
                }
                let symbol = Symbol::new(f.clone(), values.len());
                match self.m.function(&symbol) {
                    Some(FunctionValue::Table { entries, default }) => entries
                        .get(&values)
                        .or(default.as_ref())
                        .cloned()
                        .ok_or_else(|| {
                            ModelError::NotTotal {
                                symbol: symbol.to_string(),
                                tuple: values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","),
                            }
                            .into()
                        }),
                    Some(FunctionValue::Builtin { op, default }) => {
                        match (values[0].as_numeral(), values[1].as_numeral()) {
                            (Some(x), Some(y)) => match op.apply(x, y) {
                                Some(n) => Ok(GroundTerm::numeral(n)),
                                None => Err(ModelError::OutsideUniverse {
                                    term: format!("{t}"),
                                    value: "overflow".into(),
                                }
                                .into()),
                            },
                            _ => Ok(default.clone()),
                        }
                    }
                    None => Err(ModelError::UnknownSymbol(symbol.to_string()).into()),
                }
            }
        }
    }

    /// Evaluated arguments of an atom, or `None` (with a truncation event)
    /// when one of them lies outside the domain.
    fn ground_args(&self, b: &Bindings, a: &Atom) -> Result<Option<Vec<GroundTerm>>, EngineError> {
        let mut out = Vec::with_capacity(a.args.len());
        for t in &a.args {
            let v = self.eval(b, t)?;
            if !self.m.contains(&v) {
                self.event(|| format!("{v} in {a} lies outside the depth-bounded universe"));
                return Ok(None);
            }
            out.push(v);
        }
        Ok(Some(out))
    }

    /// The instantiated head, if it lies inside the scope. Heads beyond the
    /// depth bound count as truncation events; heads inside the domain but
    /// outside a focused scope are dropped silently.
    pub(crate) fn head(&self, b: &Bindings, a: &Atom) -> Result<Option<GroundAtom>, EngineError> {
        Ok(self.ground_args(b, a)?.and_then(|args| {
            args.iter().all(|v| self.scope.contains(v)).then(|| GroundAtom {
                predicate: a.symbol(),
                args,
            })
        }))
    }

    /// Like [`Ctx::head`] but only requires domain membership.
    pub(crate) fn atom_in_domain(&self, b: &Bindings, a: &Atom) -> Result<Option<GroundAtom>, EngineError> {
        Ok(self.ground_args(b, a)?.map(|args| GroundAtom {
            predicate: a.symbol(),
            args,
        }))
    }
}

/// Where predicate values come from: `facts` for the predicates in
/// `defined`, the structure for all others.
pub(crate) struct View<'a> {
    pub defined: &'a BTreeSet<Symbol>,
    pub facts: &'a Interpretation,
    pub m: &'a Structure,
}

impl<'a> View<'a> {
    pub(crate) fn relation(&self, p: &Symbol) -> Result<&'a Relation, EngineError> {
        if self.defined.contains(p) {
            Ok(self.facts.get(p).unwrap_or(&EMPTY))
        } else {
            self.m
                .predicate(p)
                .ok_or_else(|| ModelError::UnknownSymbol(p.to_string()).into())
        }
    }
}

/// Calls `emit` once for every assignment of the rule's variables (head
/// included) that makes the body true. With `delta = Some((i, rel))` the
/// positive literal at position `i` is matched against `rel` instead of its
/// full relation.
pub(crate) fn solve(
    ctx: &Ctx,
    rule: &Rule,
    view: &View,
    delta: Option<(usize, &Relation)>,
    emit: &mut dyn FnMut(&Bindings) -> Result<(), EngineError>,
) -> Result<(), EngineError> {
    let mut vars: Vec<Name> = Vec::new();
    let mut seen = BTreeSet::new();
    let mut note = |t: &Term| {
        let mut vs = Vec::new();
        collect_ordered(t, &mut vs);
        for v in vs {
            if seen.insert(v.clone()) {
                vars.push(v);
            }
        }
    };
    for l in &rule.body {
        l.terms().into_iter().for_each(&mut note);
    }
    rule.head.args.iter().for_each(&mut note);
    let mut s = Solver {
        ctx,
        rule,
        view,
        delta,
        done: vec![false; rule.body.len()],
        vars,
        b: Bindings::default(),
    };
    s.go(emit)
}

fn collect_ordered(t: &Term, out: &mut Vec<Name>) {
    match t {
        Term::Var(v) => out.push(v.clone()),
        Term::App(_, args) => args.iter().for_each(|a| collect_ordered(a, out)),
    }
}

struct Solver<'s, 'a> {
    ctx: &'s Ctx<'a>,
    rule: &'s Rule,
    view: &'s View<'s>,
    delta: Option<(usize, &'s Relation)>,
    done: Vec<bool>,
    vars: Vec<Name>,
    b: Bindings,
}

enum Step {
    /// Every remaining literal is checked; emit.
    Emit,
    Check(usize),
    Match(usize),
    /// `s = t` where `s` can be evaluated and `t` matched against it
    /// (`flip` swaps the sides).
    Unify(usize, bool),
    Enumerate(Name),
}

impl<'s, 'a> Solver<'s, 'a> {
    fn bound(&self, t: &Term) -> bool {
        match t {
            Term::Var(v) => self.b.get(v).is_some(),
            Term::App(_, args) => args.iter().all(|a| self.bound(a)),
        }
    }

    /// Can `t` be matched against a value: every unbound variable sits
    /// under constructors only.
    fn matchable(&self, t: &Term) -> bool {
        match t {
            Term::Var(_) => true,
            Term::App(f, args) => {
                self.bound(t) || (self.ctx.m.is_constructor(f, args.len()) && args.iter().all(|a| self.matchable(a)))
            }
        }
    }

    fn literal_bound(&self, l: &Literal) -> bool {
        l.terms().into_iter().all(|t| self.bound(t))
    }

    fn next_step(&self) -> Step {
        if let Some((i, _)) = self.delta {
            let atom = self.rule.body[i].atom().expect("delta literals are atoms");
            if !self.done[i] && atom.args.iter().all(|t| self.matchable(t)) {
                return Step::Match(i);
            }
        }
        let body = &self.rule.body;
        let open = || (0..body.len()).filter(|&i| !self.done[i]);
        if let Some(i) = open().find(|&i| self.literal_bound(&body[i])) {
            return Step::Check(i);
        }
        for i in open() {
            if let Literal::Pos(a) = &body[i] {
                if a.args.iter().all(|t| self.matchable(t)) {
                    return Step::Match(i);
                }
            }
        }
        for i in open() {
            if let Literal::Eq(s, t) = &body[i] {
                if self.bound(s) && self.matchable(t) {
                    return Step::Unify(i, false);
                }
                if self.bound(t) && self.matchable(s) {
                    return Step::Unify(i, true);
                }
            }
        }
        match self.vars.iter().find(|v| self.b.get(v).is_none()) {
            Some(v) => Step::Enumerate(v.clone()),
            None => Step::Emit,
        }
    }

    fn go(&mut self, emit: &mut dyn FnMut(&Bindings) -> Result<(), EngineError>) -> Result<(), EngineError> {
        match self.next_step() {
            Step::Emit => emit(&self.b),
            Step::Check(i) => {
                if self.check(i)? {
                    self.done[i] = true;
                    let r = self.go(emit);
                    self.done[i] = false;
                    r?;
                }
                Ok(())
            }
            Step::Match(i) => {
                let atom = self.rule.body[i].atom().expect("matched literals are atoms");
                let rel = match self.delta {
                    Some((j, rel)) if j == i => rel,
                    _ => self.view.relation(&atom.symbol())?,
                };
                self.done[i] = true;
                let mark = self.b.0.len();
                for tuple in rel {
                    let mut ok = true;
                    for (t, v) in atom.args.iter().zip(tuple) {
                        if !self.match_term(t, v)? {
                            ok = false;
                            break;
                        }
                    }
                    if ok {
                        self.go(emit)?;
                    }
                    self.b.0.truncate(mark);
                }
                self.done[i] = false;
                Ok(())
            }
            Step::Unify(i, flip) => {
                let (s, t) = match &self.rule.body[i] {
                    Literal::Eq(s, t) if !flip => (s, t),
                    Literal::Eq(t, s) => (s, t),
                    _ => unreachable!(),
                };
                let v = self.ctx.eval(&self.b, s)?;
                let mark = self.b.0.len();
                if self.match_term(t, &v)? {
                    self.done[i] = true;
                    let r = self.go(emit);
                    self.done[i] = false;
                    r?;
                }
                self.b.0.truncate(mark);
                Ok(())
            }
            Step::Enumerate(v) => {
                let scope = self.ctx.scope;
                for e in scope.universe() {
                    self.b.push(v.clone(), e.clone());
                    let r = self.go(emit);
                    self.b.0.pop();
                    r?;
                }
                Ok(())
            }
        }
    }

    fn match_term(&mut self, t: &Term, v: &GroundTerm) -> Result<bool, EngineError> {
        match t {
            Term::Var(x) => match self.b.get(x) {
                Some(w) => Ok(w == v),
                None => {
                    self.b.push(x.clone(), v.clone());
                    Ok(true)
                }
            },
            Term::App(..) if self.bound(t) => Ok(&self.ctx.eval(&self.b, t)? == v),
            Term::App(f, args) => {
                if v.functor() != f || v.arity() != args.len() {
                    return Ok(false);
                }
                for (a, w) in args.iter().zip(v.args()) {
                    if !self.match_term(a, w)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    fn check(&self, i: usize) -> Result<bool, EngineError> {
        if let (Some((j, rel)), Literal::Pos(a)) = (self.delta, &self.rule.body[i]) {
            if i == j {
                return Ok(match self.ctx.atom_in_domain(&self.b, a)? {
                    Some(g) => rel.contains(&g.args),
                    None => false,
                });
            }
        }
        Ok(match &self.rule.body[i] {
            Literal::True => true,
            Literal::False => false,
            Literal::Eq(s, t) => self.ctx.eval(&self.b, s)? == self.ctx.eval(&self.b, t)?,
            Literal::Neq(s, t) => self.ctx.eval(&self.b, s)? != self.ctx.eval(&self.b, t)?,
            Literal::Pos(a) => self.holds(a)?,
            Literal::Neg(a) => !self.holds(a)?,
        })
    }

    /// Truth of an atom; atoms over elements outside the domain are false.
    fn holds(&self, a: &Atom) -> Result<bool, EngineError> {
        match self.ctx.atom_in_domain(&self.b, a)? {
            Some(g) => Ok(self.view.relation(&g.predicate)?.contains(&g.args)),
            None => Ok(false),
        }
    }
}
