use std::collections::BTreeSet;

use serde::Serialize;

use super::fixpoint::{check_parameters, unique_expansion, Expansion};
use super::scope::Scope;
use super::solve::{solve, Ctx, View};
use super::{EngineError, EvalOptions, Interpretation, Verdict};
use crate::definition::{stratify, validate_partition, Definition, DefinitionError, PartitionReport, Program};
use crate::exactness::Exactness;
use crate::iso::{find_isomorphism, satisfies_herbrand_axiom, HerbrandCheck};
use crate::rule::{GroundAtom, Literal};
use crate::structure::{FunctionValue, ModelError, Structure};
use crate::term::GroundTerm;
use crate::vocab::{Symbol, SymbolKind, Vocabulary};

fn check_defined(d: &Definition, m: &Structure) -> Result<(), EngineError> {
    check_parameters(d, m)?;
    for p in d.defined() {
        if m.predicate(p).is_none() {
            return Err(ModelError::UnknownSymbol(p.to_string()).into());
        }
    }
    Ok(())
}

/// Whether every rule instance, read as a material implication, holds in `m`.
/// Negated literals are classical negation.
pub fn satisfies_fo(m: &Structure, d: &Definition, options: &EvalOptions) -> Result<Verdict, EngineError> {
    check_defined(d, m)?;
    let scope = Scope::new(m, d, &options.scope);
    let ctx = Ctx::new(m, &scope);
    let nothing = BTreeSet::new();
    let facts = Interpretation::new();
    let view = View {
        defined: &nothing,
        facts: &facts,
        m,
    };
    let mut witness = None;
    for r in d.rules() {
        solve(&ctx, r, &view, None, &mut |b| {
            if witness.is_none() {
                if let Some(h) = ctx.atom_in_domain(b, &r.head)? {
                    if !m.holds(&h.predicate, &h.args)? {
                        let instance = r
                            .vars()
                            .iter()
                            .map(|v| format!("{v}={}", b.get(v).unwrap()))
                            .collect::<Vec<_>>()
                            .join(", ");
                        witness = Some(format!("the body of `{r}` holds for {instance} but {h} is false"));
                    }
                }
            }
            Ok(())
        })?;
        if witness.is_some() {
            break;
        }
    }
    let exactness = if m.is_extensional() {
        Exactness::Exact
    } else if !scope.is_full() {
        Exactness::Truncated(format!(
            "rule instances checked over {} of the universe's terms",
            scope.len()
        ))
    } else {
        match ctx.first_event() {
            None => Exactness::Exact,
            Some(e) => Exactness::Truncated(e),
        }
    };
    Ok(Verdict {
        holds: witness.is_none(),
        exactness: if witness.is_some() { Exactness::Exact } else { exactness },
        witness,
    })
}

/// `m ⊨_D d`: the defined predicates of `m` are exactly the unique expansion
/// of `m`'s parameter values.
pub fn satisfies_def(m: &Structure, d: &Definition, options: &EvalOptions) -> Result<Verdict, EngineError> {
    check_defined(d, m)?;
    let mut options = options.clone();
    for p in d.defined() {
        for tuple in m.predicate(p).unwrap() {
            options.scope.focus.extend(tuple.iter().cloned());
        }
    }
    let params = m.without_predicates(d.defined());
    let e = unique_expansion(d, &params, &options)?;
    let mut witness = None;
    for p in d.defined() {
        let given = m.predicate(p).unwrap();
        let least = &e.values[p];
        let atom = |t: &Vec<GroundTerm>| GroundAtom {
            predicate: p.clone(),
            args: t.clone(),
        };
        if let Some(t) = given.iter().find(|t| e.scope.contains_all(t) && !least.contains(*t)) {
            witness = Some(format!("{} is true in the structure but not derivable", atom(t)));
        } else if let Some(t) = least.difference(given).next() {
            witness = Some(format!("{} is derivable but false in the structure", atom(t)));
        }
        if witness.is_some() {
            break;
        }
    }
    Ok(Verdict {
        holds: witness.is_none(),
        exactness: e.exactness,
        witness,
    })
}

/// The least Herbrand model of `p`: the term-generated structure over the
/// program's constructors at `depth`, expanded by the defined predicates.
pub fn lhm(p: &Program, depth: usize, options: &EvalOptions) -> Result<Expansion, EngineError> {
    let open = p.non_constructor_functions();
    if !open.is_empty() {
        return Err(EngineError::NonConstructorFunctions(open));
    }
    let params: Vec<Symbol> = p.definition.parameter_predicates().cloned().collect();
    if !params.is_empty() {
        return Err(EngineError::OpenParameters(params));
    }
    stratify(&p.definition)?;
    let m = Structure::term_generated(p.constructors.clone(), depth)?;
    unique_expansion(&p.definition, &m, options)
}

/// Truth of a ground literal over a defined predicate in the least Herbrand
/// model. By the uniqueness of models up to isomorphism this is entailment.
pub fn entails_literal(
    p: &Program,
    literal: &Literal,
    depth: usize,
    options: &EvalOptions,
) -> Result<Verdict, EngineError> {
    let (atom, positive) = match literal {
        Literal::Pos(a) => (a, true),
        Literal::Neg(a) => (a, false),
        other => return Err(EngineError::NotAQuery(other.to_string())),
    };
    let g = atom
        .to_ground()
        .ok_or_else(|| EngineError::NotAQuery(literal.to_string()))?;
    if !p.definition.is_defined(&g.predicate) {
        return Err(EngineError::UndefinedPredicate(g.predicate));
    }
    let mut options = options.clone();
    options.scope.focus.extend(g.args.iter().cloned());
    let e = lhm(p, depth, &options)?;
    if let Some(t) = g.args.iter().find(|t| !e.structure.contains(t)) {
        return Err(ModelError::DepthExceeded {
            term: t.to_string(),
            bound: depth,
        }
        .into());
    }
    Ok(Verdict::new(e.contains(&g) == positive, e.exactness))
}

/// Outcome of checking a structure against a program.
#[derive(Clone, Debug, Serialize)]
pub struct ModelReport {
    pub holds: bool,
    /// `None` when the program has no constructors, so that it is a plain
    /// definition with nothing to say about the universe.
    pub herbrand: Option<HerbrandCheck>,
    /// `m ⊨_D D`.
    pub definition: Verdict,
    /// `m ⊨_FO D`, which tells a failed rule apart from a failure of minimality.
    pub horn: Verdict,
    pub exactness: Exactness,
}

/// `m` satisfies the program's definition and, when it has constructors, `H(CF)`.
pub fn check_program_model(m: &Structure, p: &Program, options: &EvalOptions) -> Result<ModelReport, EngineError> {
    let herbrand = (!p.constructors.is_empty()).then(|| satisfies_herbrand_axiom(m, &p.constructors));
    let definition = satisfies_def(m, &p.definition, options)?;
    let horn = satisfies_fo(m, &p.definition, options)?;
    let h_holds = herbrand.as_ref().map_or(true, |h| h.holds);
    let h_exactness = herbrand.as_ref().map_or(Exactness::Exact, |h| h.exactness.clone());
    let holds = h_holds && definition.holds;
    let exactness = if holds {
        h_exactness.and(definition.exactness.clone())
    } else if !h_holds {
        h_exactness
    } else {
        definition.exactness.clone()
    };
    Ok(ModelReport {
        holds,
        herbrand,
        definition,
        horn,
        exactness,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ModuleVerdict {
    pub name: String,
    pub verdict: Verdict,
}

/// The three statements of the modularity theorem for a program split into
/// modules `D_1 ... D_n`, evaluated on one structure.
#[derive(Clone, Debug, Serialize)]
pub struct SplitReport {
    pub partition: PartitionReport,
    pub herbrand: HerbrandCheck,
    /// Statement (1): `m` is isomorphic to the least Herbrand model. Only
    /// decided for extensional `m` and constant-only constructor sets.
    pub isomorphic_to_lhm: Option<bool>,
    /// Statement (2): `H(CF)` and `m ⊨_D D`.
    pub whole: bool,
    /// Statement (3): `H(CF)` and `m ⊨_D D_i` for every module.
    pub all_modules: bool,
    pub definition: Verdict,
    pub modules: Vec<ModuleVerdict>,
    pub agree: bool,
    pub exactness: Exactness,
}

pub fn check_split_equivalence(p: &Program, m: &Structure, options: &EvalOptions) -> Result<SplitReport, EngineError> {
    if p.modules.is_empty() {
        return Err(DefinitionError::NotAPartition("the program declares no modules".into()).into());
    }
    let partition = validate_partition(&p.definition, &p.modules)?;
    if !partition.is_valid() {
        let text = partition
            .violations
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join("; ");
        return Err(DefinitionError::InvalidPartition(text).into());
    }
    let herbrand = satisfies_herbrand_axiom(m, &p.constructors);
    let definition = satisfies_def(m, &p.definition, options)?;
    let mut exactness = herbrand.exactness.clone().and(definition.exactness.clone());
    let mut modules = Vec::new();
    for part in &p.modules {
        let sub = p.definition.subdefinition(&part.rules)?;
        let verdict = satisfies_def(m, &sub, options)?;
        exactness = exactness.and(verdict.exactness.clone());
        modules.push(ModuleVerdict {
            name: part.name.clone(),
            verdict,
        });
    }
    let whole = herbrand.holds && definition.holds;
    let all_modules = herbrand.holds && modules.iter().all(|v| v.verdict.holds);
    let isomorphic_to_lhm = isomorphic_to_lhm(p, m, options)?;
    let agree = whole == all_modules && isomorphic_to_lhm.map_or(true, |i| i == whole);
    Ok(SplitReport {
        partition,
        herbrand,
        isomorphic_to_lhm,
        whole,
        all_modules,
        definition,
        modules,
        agree,
        exactness,
    })
}

/// The least Herbrand model as an extensional structure. `None` unless the
/// constructors are constants only and the program has no parameters.
pub fn finite_lhm(p: &Program, options: &EvalOptions) -> Result<Option<Structure>, EngineError> {
    if p.constructors.has_functors()
        || !p.constructors.has_constants()
        || p.definition.parameter_predicates().next().is_some()
        || !p.non_constructor_functions().is_empty()
    {
        return Ok(None);
    }
    let model = lhm(p, 0, options)?;
    let mut n = Structure::extensional(model.scope.universe().iter().cloned())?;
    for c in p.constructors.constants() {
        n.set_function(c.clone(), FunctionValue::constant(GroundTerm::constant(c.name.clone())))?;
    }
    for (s, rel) in &model.values {
        n.set_predicate(s.clone(), rel.iter().cloned())?;
    }
    Ok(Some(n))
}

fn isomorphic_to_lhm(p: &Program, m: &Structure, options: &EvalOptions) -> Result<Option<bool>, EngineError> {
    if !m.is_extensional() {
        return Ok(None);
    }
    let Some(n) = finite_lhm(p, options)? else {
        return Ok(None);
    };
    let mut sigma = Vocabulary::new();
    for s in p.definition.defined() {
        sigma.add_predicate(s.clone());
    }
    for c in p.constructors.constants() {
        sigma.insert(SymbolKind::Constant, c.clone());
    }
    if sigma.iter().any(|(kind, s)| !m.interprets(*kind, s)) {
        return Ok(Some(false));
    }
    Ok(Some(find_isomorphism(m, &n, &sigma)?.is_some()))
}
