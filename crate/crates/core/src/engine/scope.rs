use std::collections::{BTreeSet, HashSet};

use crate::definition::Definition;
use crate::rule::Literal;
use crate::structure::{Form, FunctionValue, Structure};
use crate::term::{herbrand_universe, herbrand_universe_size, GroundTerm, Term};
use crate::vocab::ConstructorSet;

/// Limits for choosing the evaluation universe of a term-generated structure.
#[derive(Clone, Debug)]
pub struct ScopeOptions {
    /// Extra terms (with their subterms) that must be part of the universe.
    pub focus: Vec<GroundTerm>,
    /// Largest universe materialized.
    pub max_universe: usize,
    /// Largest number of free-variable assignments tried per round.
    pub max_enumeration: u128,
}

impl Default for ScopeOptions {
    fn default() -> Self {
        ScopeOptions {
            focus: Vec::new(),
            max_universe: 1024,
            max_enumeration: 200_000,
        }
    }
}

/// The finite set of elements variables range over during evaluation.
///
/// For extensional structures this is the domain. For a term-generated
/// structure it is the whole depth-bounded universe when that is small enough
/// (`is_full`), and otherwise every term up to some smaller depth plus the
/// subterm closure of the seed terms: the program's ground terms, the terms
/// in the structure's tables and the focus terms.
#[derive(Clone, Debug)]
pub struct Scope {
    universe: Vec<GroundTerm>,
    members: HashSet<GroundTerm>,
    full: bool,
    complete_depth: Option<usize>,
}

impl Scope {
    pub fn new(m: &Structure, d: &Definition, options: &ScopeOptions) -> Scope {
        let (cf, k) = match m.form() {
            Form::Extensional { domain } => {
                return Scope::from_terms(domain.iter().cloned().collect(), true, None);
            }
            Form::TermGenerated {
                constructors,
                depth_bound,
            } => (constructors, *depth_bound),
        };
        let mut seeds = BTreeSet::new();
        for r in d.rules() {
            r.head.args.iter().for_each(|t| t.collect_ground_subterms(&mut seeds));
            for l in &r.body {
                l.terms().into_iter().for_each(|t| t.collect_ground_subterms(&mut seeds));
            }
        }
        for rel in m.predicates().values() {
            for tuple in rel {
                tuple.iter().for_each(|t| t.collect_subterms(&mut seeds));
            }
        }
        for f in m.functions().values() {
            match f {
                FunctionValue::Table { entries, default } => {
                    for (args, v) in entries {
                        args.iter().chain([v]).for_each(|t| t.collect_subterms(&mut seeds));
                    }
                    if let Some(v) = default {
                        v.collect_subterms(&mut seeds);
                    }
                }
                FunctionValue::Builtin { default, .. } => default.collect_subterms(&mut seeds),
            }
        }
        options.focus.iter().for_each(|t| t.collect_subterms(&mut seeds));
        seeds.retain(|t| m.contains(t));

        let free: Vec<usize> = d.rules().iter().map(|r| free_variables(r.vars().len(), &r.body)).collect();
        let affordable = |size: usize| {
            size <= options.max_universe
                && free
                    .iter()
                    .map(|&n| (size as u128).checked_pow(n as u32).unwrap_or(u128::MAX))
                    .fold(0u128, u128::saturating_add)
                    <= options.max_enumeration
        };
        let mut depth = 0;
        for j in 0..=k {
            match herbrand_universe_size(cf, j) {
                Some(n) if affordable(n.saturating_add(seeds.len())) => depth = j,
                _ => break,
            }
            // Deeper levels are the same set once no functor exists.
            if !cf.has_functors() {
                depth = k;
                break;
            }
        }
        let mut terms = herbrand_universe(cf, depth);
        let full = depth == k;
        terms.extend(seeds);
        Scope::from_terms(terms, full, Some(depth))
    }

    /// The whole domain of an extensional structure, or all terms over `cf`
    /// up to `depth`.
    pub fn full_universe(cf: &ConstructorSet, depth: usize) -> Scope {
        Scope::from_terms(herbrand_universe(cf, depth), true, Some(depth))
    }

    fn from_terms(terms: BTreeSet<GroundTerm>, full: bool, complete_depth: Option<usize>) -> Scope {
        let universe: Vec<GroundTerm> = terms.into_iter().collect();
        let members = universe.iter().cloned().collect();
        Scope {
            universe,
            members,
            full,
            complete_depth,
        }
    }

    pub fn universe(&self) -> &[GroundTerm] {
        &self.universe
    }

    pub fn contains(&self, t: &GroundTerm) -> bool {
        self.members.contains(t)
    }

    pub fn contains_all(&self, tuple: &[GroundTerm]) -> bool {
        tuple.iter().all(|t| self.members.contains(t))
    }

    pub fn len(&self) -> usize {
        self.universe.len()
    }

    pub fn is_empty(&self) -> bool {
        self.universe.is_empty()
    }

    /// Whether the scope is the structure's entire domain.
    pub fn is_full(&self) -> bool {
        self.full
    }

    /// Depth up to which every term is included (term-generated only).
    pub fn complete_depth(&self) -> Option<usize> {
        self.complete_depth
    }
}

/// Variables not bound by a positive body atom; those are enumerated.
fn free_variables(total: usize, body: &[Literal]) -> usize {
    let mut bound = BTreeSet::new();
    for l in body {
        if let Literal::Pos(a) = l {
            bound.extend(a.vars());
        }
    }
    total - bound.len()
}

/// Every variable occurs in the head under constructors only, and every
/// argument of a body atom is ground or such a head subterm. Derivations of
/// an atom then only involve atoms over its own subterms, so restricting the
/// universe to a subterm-closed set loses nothing for the atoms inside it.
pub fn is_subterm_guarded(d: &Definition, cf: &ConstructorSet) -> bool {
    d.rules().iter().all(|r| {
        let in_head = |t: &Term| r.head.args.iter().any(|h| h.has_constructor_subterm(t, cf));
        let vars_ok = r.vars().into_iter().all(|v| in_head(&Term::Var(v)));
        let args_ok = r.body.iter().filter_map(Literal::atom).all(|a| {
            a.args.iter().all(|t| match t.to_ground() {
                Some(g) => crate::structure::is_term_over(&g, cf),
                None => in_head(t),
            })
        });
        vars_ok && args_ok
    })
}
