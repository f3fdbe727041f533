use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::scope::{is_subterm_guarded, Scope};
use super::solve::{solve, Ctx, View};
use super::{EngineError, EvalOptions, Interpretation, Strategy};
use crate::definition::{stratify, Definition};
use crate::exactness::Exactness;
use crate::rule::{GroundAtom, Literal, Rule};
use crate::structure::{ModelError, Relation, Structure};
use crate::term::GroundTerm;
use crate::vocab::{Name, Symbol};

/// One new atom of an induction step, with the rule instance that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Derivation {
    pub atom: GroundAtom,
    /// Index of the rule in the definition.
    pub rule: usize,
    pub bindings: BTreeMap<Name, GroundTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    /// Position of the stratum in [`stratify`] order.
    pub stratum: usize,
    /// 1-based step number, counted across strata.
    pub step: usize,
    /// Number of rule instances whose body held.
    pub fired: usize,
    /// Atoms not present before this step, in first-derivation order.
    pub derived: Vec<Derivation>,
}

/// The sequence `S_1, S_2, ...` of all-rules applications starting from the
/// empty interpretation, one stratum after the other. The last step of each
/// stratum derives nothing and confirms the fixpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InductionTrace {
    pub strata: Vec<BTreeSet<Symbol>>,
    pub steps: Vec<TraceStep>,
    pub limit: Interpretation,
    pub exactness: Exactness,
}

impl InductionTrace {
    /// The step in which `atom` was first derived.
    pub fn step_of(&self, atom: &GroundAtom) -> Option<usize> {
        self.steps
            .iter()
            .find(|s| s.derived.iter().any(|d| &d.atom == atom))
            .map(|s| s.step)
    }

    /// Every derived atom in first-derivation order.
    pub fn order(&self) -> Vec<&GroundAtom> {
        self.steps.iter().flat_map(|s| s.derived.iter().map(|d| &d.atom)).collect()
    }

    /// The interpretation after `step` steps.
    pub fn state_after(&self, step: usize) -> Interpretation {
        let mut out = empty_interpretation(self.limit.keys());
        for s in self.steps.iter().take_while(|s| s.step <= step) {
            for d in &s.derived {
                out.entry(d.atom.predicate.clone()).or_default().insert(d.atom.args.clone());
            }
        }
        out
    }
}

/// A structure extended with the values of the defined predicates.
#[derive(Clone, Debug)]
pub struct Expansion {
    pub structure: Structure,
    pub values: Interpretation,
    pub exactness: Exactness,
    pub scope: Scope,
}

impl Expansion {
    pub fn atoms(&self) -> BTreeSet<GroundAtom> {
        to_atoms(&self.values)
    }

    pub fn contains(&self, atom: &GroundAtom) -> bool {
        self.values.get(&atom.predicate).is_some_and(|r| r.contains(&atom.args))
    }
}

pub fn to_atoms(i: &Interpretation) -> BTreeSet<GroundAtom> {
    i.iter()
        .flat_map(|(p, rel)| {
            rel.iter().map(move |t| GroundAtom {
                predicate: p.clone(),
                args: t.clone(),
            })
        })
        .collect()
}

fn empty_interpretation<'a>(symbols: impl IntoIterator<Item = &'a Symbol>) -> Interpretation {
    symbols.into_iter().map(|s| (s.clone(), Relation::new())).collect()
}

/// Checks that `m` interprets the parameters of `d`.
pub(crate) fn check_parameters(d: &Definition, m: &Structure) -> Result<(), EngineError> {
    for p in d.parameter_predicates() {
        if m.predicate(p).is_none() {
            return Err(ModelError::UnknownSymbol(p.to_string()).into());
        }
    }
    for f in d.parameters().functions() {
        if !m.is_constructor(&f.name, f.arity) && m.function(f).is_none() {
            return Err(ModelError::UnknownSymbol(f.to_string()).into());
        }
    }
    Ok(())
}

pub(crate) fn exactness(ctx: &Ctx, d: &Definition) -> Exactness {
    let Some(cf) = ctx.m.constructors() else {
        return Exactness::Exact;
    };
    if is_subterm_guarded(d, cf) {
        return Exactness::Exact;
    }
    if !ctx.scope.is_full() {
        return Exactness::Truncated(format!(
            "variables range over {} terms (all terms to depth {} plus focus terms), not the whole depth-{} universe",
            ctx.scope.len(),
            ctx.scope.complete_depth().unwrap_or(0),
            ctx.m.depth_bound().unwrap_or(0),
        ));
    }
    match ctx.first_event() {
        None => Exactness::Exact,
        Some(e) => Exactness::Truncated(e),
    }
}

struct Setup<'a> {
    d: &'a Definition,
    strata: Vec<BTreeSet<Symbol>>,
}

impl<'a> Setup<'a> {
    fn new(d: &'a Definition, m: &Structure) -> Result<Self, EngineError> {
        check_parameters(d, m)?;
        Ok(Setup { d, strata: stratify(d)? })
    }

    fn rules_of(&self, stratum: &BTreeSet<Symbol>) -> Vec<(usize, &'a Rule)> {
        self.d
            .rules()
            .iter()
            .enumerate()
            .filter(|(_, r)| stratum.contains(&r.head.symbol()))
            .collect()
    }
}

/// One all-rules application: the heads of every rule instance whose body
/// holds in `m` extended with `s`. Not cumulative.
pub fn immediate_consequence(
    d: &Definition,
    m: &Structure,
    s: &Interpretation,
    options: &EvalOptions,
) -> Result<Interpretation, EngineError> {
    check_parameters(d, m)?;
    let scope = Scope::new(m, d, &options.scope);
    let ctx = Ctx::new(m, &scope);
    let view = View {
        defined: d.defined(),
        facts: s,
        m,
    };
    let mut out = empty_interpretation(d.defined());
    for r in d.rules() {
        solve(&ctx, r, &view, None, &mut |b| {
            if let Some(h) = ctx.head(b, &r.head)? {
                out.entry(h.predicate).or_default().insert(h.args);
            }
            Ok(())
        })?;
    }
    Ok(out)
}

/// The induction process of `d` over the parameter values in `m`.
pub fn induction_process(d: &Definition, m: &Structure, options: &EvalOptions) -> Result<InductionTrace, EngineError> {
    let setup = Setup::new(d, m)?;
    let scope = Scope::new(m, d, &options.scope);
    let ctx = Ctx::new(m, &scope);
    let mut facts = empty_interpretation(d.defined());
    let mut steps = Vec::new();
    for (si, stratum) in setup.strata.iter().enumerate() {
        let rules = setup.rules_of(stratum);
        loop {
            let (fired, derived) = naive_round(&ctx, d, &rules, &facts, true)?;
            let done = derived.is_empty();
            for dv in &derived {
                facts.get_mut(&dv.atom.predicate).unwrap().insert(dv.atom.args.clone());
            }
            steps.push(TraceStep {
                stratum: si,
                step: steps.len() + 1,
                fired,
                derived,
            });
            if done {
                break;
            }
        }
    }
    Ok(InductionTrace {
        exactness: exactness(&ctx, d),
        strata: setup.strata,
        steps,
        limit: facts,
    })
}

/// Applies every rule once against `facts`; returns the number of firing
/// instances and the atoms not already in `facts`.
fn naive_round(
    ctx: &Ctx,
    d: &Definition,
    rules: &[(usize, &Rule)],
    facts: &Interpretation,
    record: bool,
) -> Result<(usize, Vec<Derivation>), EngineError> {
    let view = View {
        defined: d.defined(),
        facts,
        m: ctx.m,
    };
    let mut fired = 0;
    let mut seen = BTreeSet::new();
    let mut derived = Vec::new();
    for &(ri, r) in rules {
        solve(ctx, r, &view, None, &mut |b| {
            if let Some(h) = ctx.head(b, &r.head)? {
                fired += 1;
                if !facts[&h.predicate].contains(&h.args) && seen.insert(h.clone()) {
                    derived.push(Derivation {
                        atom: h,
                        rule: ri,
                        bindings: if record { b.to_map() } else { BTreeMap::new() },
                    });
                }
            }
            Ok(())
        })?;
    }
    Ok((fired, derived))
}

/// Least fixpoint of `d` over `m`, stratum by stratum.
pub fn least_fixpoint(
    d: &Definition,
    m: &Structure,
    options: &EvalOptions,
) -> Result<(Interpretation, Exactness, Scope), EngineError> {
    let setup = Setup::new(d, m)?;
    let scope = Scope::new(m, d, &options.scope);
    let ctx = Ctx::new(m, &scope);
    let mut facts = empty_interpretation(d.defined());
    for stratum in &setup.strata {
        let rules = setup.rules_of(stratum);
        match options.strategy {
            Strategy::Naive => loop {
                let (_, derived) = naive_round(&ctx, d, &rules, &facts, false)?;
                if derived.is_empty() {
                    break;
                }
                for dv in derived {
                    facts.get_mut(&dv.atom.predicate).unwrap().insert(dv.atom.args);
                }
            },
            Strategy::SemiNaive => semi_naive(&ctx, d, stratum, &rules, &mut facts)?,
        }
    }
    let exactness = exactness(&ctx, d);
    drop(ctx);
    Ok((facts, exactness, scope))
}

fn semi_naive(
    ctx: &Ctx,
    d: &Definition,
    stratum: &BTreeSet<Symbol>,
    rules: &[(usize, &Rule)],
    facts: &mut Interpretation,
) -> Result<(), EngineError> {
    let (_, first) = naive_round(ctx, d, rules, facts, false)?;
    let mut delta = empty_interpretation(stratum);
    for dv in first {
        delta.get_mut(&dv.atom.predicate).unwrap().insert(dv.atom.args);
    }
    // Rules with a positive body atom of this stratum, with those positions.
    let recursive: Vec<(&Rule, Vec<usize>)> = rules
        .iter()
        .filter_map(|&(_, r)| {
            let positions: Vec<usize> = r
                .body
                .iter()
                .enumerate()
                .filter(|(_, l)| matches!(l, Literal::Pos(a) if stratum.contains(&a.symbol())))
                .map(|(i, _)| i)
                .collect();
            (!positions.is_empty()).then_some((r, positions))
        })
        .collect();
    while delta.values().any(|r| !r.is_empty()) {
        for (p, rel) in &delta {
            facts.get_mut(p).unwrap().extend(rel.iter().cloned());
        }
        let mut next = empty_interpretation(stratum);
        {
            let view = View {
                defined: d.defined(),
                facts,
                m: ctx.m,
            };
            for (r, positions) in &recursive {
                for &i in positions {
                    let p = r.body[i].atom().unwrap().symbol();
                    let rel = &delta[&p];
                    if rel.is_empty() {
                        continue;
                    }
                    solve(ctx, r, &view, Some((i, rel)), &mut |b| {
                        if let Some(h) = ctx.head(b, &r.head)? {
                            if !facts[&h.predicate].contains(&h.args) {
                                next.get_mut(&h.predicate).unwrap().insert(h.args);
                            }
                        }
                        Ok(())
                    })?;
                }
            }
        }
        delta = next;
    }
    Ok(())
}

/// Extends the parameter values of `m` with the least-fixpoint values of the
/// defined predicates. Any values `m` gives to defined predicates are ignored.
///
/// ```
/// use defcheck::parse::{parse_program, parse_structure};
/// use defcheck::engine::{unique_expansion, EvalOptions};
///
/// let p = parse_program("'R'(X,Y) :- 'G'(X,Y).\n'R'(X,Z) :- 'R'(X,Y), 'G'(Y,Z).", None).unwrap();
/// let m = parse_structure("domain: a, b, c.\npred G/2 = { (a,b), (b,a), (c,c) }.", None).unwrap();
/// let e = unique_expansion(&p.definition, &m, &EvalOptions::default()).unwrap();
/// assert_eq!(e.atoms().len(), 5);
/// ```
pub fn unique_expansion(d: &Definition, m: &Structure, options: &EvalOptions) -> Result<Expansion, EngineError> {
    let (values, exactness, scope) = least_fixpoint(d, m, options)?;
    let mut structure = m.without_predicates(d.defined());
    for (p, rel) in &values {
        structure.set_predicate(p.clone(), rel.iter().cloned())?;
    }
    Ok(Expansion {
        structure,
        values,
        exactness,
        scope,
    })
}
