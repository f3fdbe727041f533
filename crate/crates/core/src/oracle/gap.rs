use serde::Serialize;

use super::OracleError;
use crate::definition::Program;
use crate::engine::{entails_literal, satisfies_fo, EvalOptions, Verdict};
use crate::exactness::Exactness;
use crate::rule::{Atom, GroundAtom, Literal};
use crate::structure::{tuples_over, Structure};
use crate::term::{herbrand_universe, herbrand_universe_size, GroundTerm, Term};

const ALL_TRUE_TUPLES: usize = 20_000;

/// How an atom fares in the least Herbrand model and in the Horn reading of
/// the program.
#[derive(Clone, Debug, Serialize)]
pub struct GapEntry {
    pub atom: GroundAtom,
    /// True in the least Herbrand model, which for a Horn program is also
    /// entailment by the rules read as implications.
    pub in_lhm: bool,
    /// True in some model of the rules read as implications.
    pub true_in_some_horn_model: bool,
    pub exactness: Exactness,
}

/// For each atom, compares truth in the least Herbrand model with truth in
/// some model of the Horn reading. The witness for the second is the
/// interpretation making every defined atom true, which satisfies every rule
/// because every head is true; `all_true` records the check of that claim on
/// a small term-generated structure.
pub fn horn_entailment_gap_report(
    p: &Program,
    atoms: &[GroundAtom],
    depth: usize,
    options: &EvalOptions,
) -> Result<(Vec<GapEntry>, Verdict), OracleError> {
    if !p.definition.is_negation_free() {
        return Err(OracleError::Negation);
    }
    for a in atoms {
        if !p.definition.is_defined(&a.predicate) {
            return Err(OracleError::UndefinedPredicate(a.predicate.clone()));
        }
    }
    let all_true = all_true_check(p, depth, options)?;
    let mut out = Vec::new();
    for a in atoms {
        let query = Literal::Pos(Atom::new(
            a.predicate.name.clone(),
            a.args.iter().map(Term::from_ground).collect(),
        ));
        let v = entails_literal(p, &query, depth, options)?;
        out.push(GapEntry {
            atom: a.clone(),
            in_lhm: v.holds,
            true_in_some_horn_model: all_true.holds,
            exactness: v.exactness,
        });
    }
    Ok((out, all_true))
}

fn all_true_check(p: &Program, depth: usize, options: &EvalOptions) -> Result<Verdict, OracleError> {
    let d = &p.definition;
    let tuples = |j: usize| -> Option<usize> {
        let n = herbrand_universe_size(&p.constructors, j)?;
        d.defined()
            .iter()
            .try_fold(0usize, |acc, s| acc.checked_add(n.checked_pow(s.arity as u32)?))
    };
    let j = (0..=depth)
        .take_while(|&j| tuples(j).is_some_and(|t| t <= ALL_TRUE_TUPLES))
        .last()
        .unwrap_or(0);
    let universe: Vec<GroundTerm> = herbrand_universe(&p.constructors, j).into_iter().collect();
    let mut m = Structure::term_generated(p.constructors.clone(), j)?;
    for s in d.defined() {
        m.set_predicate(s.clone(), tuples_over(&universe, s.arity))?;
    }
    Ok(satisfies_fo(&m, d, options)?)
}
