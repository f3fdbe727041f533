//! Brute-force oracles that restate the definitions directly, independent of
//! the engine, plus the Clark completion for comparison.

mod completion;
mod gap;
mod minimal;

use std::collections::HashMap;

use thiserror::Error;

pub use completion::{clark_completion, enumerate_completion_models, Completion, CompletionTheory, Disjunct};
pub use gap::{horn_entailment_gap_report, GapEntry};
pub use minimal::brute_force_minimal_check;

use crate::engine::EngineError;
use crate::rule::{GroundAtom, Literal, Rule};
use crate::structure::{tuples_over, ModelError, Structure};
use crate::term::GroundTerm;
use crate::vocab::{Name, Symbol};

/// Default number of candidate interpretations an oracle may enumerate.
pub const DEFAULT_BUDGET: u128 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("enumeration needs {required} candidates, over the budget of {budget}")]
    BudgetExceeded { required: String, budget: u128 },
    #[error("the oracle needs an extensional structure")]
    NotExtensional,
    #[error("the oracle handles negation-free definitions only")]
    Negation,
    #[error("predicate {0} is not defined by the program")]
    UndefinedPredicate(Symbol),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Every atom of the given predicates over the domain, numbered.
pub(crate) struct AtomTable {
    pub atoms: Vec<GroundAtom>,
    index: HashMap<GroundAtom, usize>,
}

impl AtomTable {
    pub(crate) fn new<'a>(predicates: impl IntoIterator<Item = &'a Symbol>, domain: &[GroundTerm]) -> Self {
        let mut atoms = Vec::new();
        for p in predicates {
            for args in tuples_over(domain, p.arity) {
                atoms.push(GroundAtom {
                    predicate: p.clone(),
                    args,
                });
            }
        }
        let index = atoms.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
        AtomTable { atoms, index }
    }

    pub(crate) fn get(&self, a: &GroundAtom) -> Option<usize> {
        self.index.get(a).copied()
    }

    /// Fails unless `2^len` fits the budget.
    pub(crate) fn check_budget(&self, budget: u128) -> Result<(), OracleError> {
        let n = self.atoms.len();
        if n >= 127 || (1u128 << n) > budget {
            return Err(OracleError::BudgetExceeded {
                required: format!("2^{n}"),
                budget,
            });
        }
        Ok(())
    }
}

/// A rule instance reduced to defined atoms: `head <- pos, not neg`.
pub(crate) struct Clause {
    pub head: usize,
    pub pos: Vec<usize>,
    pub neg: Vec<usize>,
}

impl Clause {
    pub(crate) fn satisfied_by(&self, set: u128) -> bool {
        let body = self.pos.iter().all(|&i| set >> i & 1 == 1) && self.neg.iter().all(|&i| set >> i & 1 == 0);
        !body || set >> self.head & 1 == 1
    }
}

/// Instantiates `rules` over the whole domain by plain enumeration of
/// variable assignments, evaluating everything that is not a defined atom.
pub(crate) fn ground_clauses(rules: &[Rule], m: &Structure, table: &AtomTable) -> Result<Vec<Clause>, OracleError> {
    let domain: Vec<GroundTerm> = m.domain().iter().cloned().collect();
    let mut out = Vec::new();
    for r in rules {
        let vars: Vec<Name> = r.vars().into_iter().collect();
        'assign: for values in tuples_over(&domain, vars.len()) {
            let valuation: std::collections::BTreeMap<Name, GroundTerm> =
                vars.iter().cloned().zip(values).collect();
            let head_atom = GroundAtom {
                predicate: r.head.symbol(),
                args: r
                    .head
                    .args
                    .iter()
                    .map(|t| m.evaluate_term(&valuation, t))
                    .collect::<Result<_, _>>()?,
            };
            let head = table.get(&head_atom).expect("heads are defined atoms over the domain");
            let mut clause = Clause {
                head,
                pos: Vec::new(),
                neg: Vec::new(),
            };
            for l in &r.body {
                match l {
                    Literal::Pos(a) | Literal::Neg(a) => {
                        let g = GroundAtom {
                            predicate: a.symbol(),
                            args: a
                                .args
                                .iter()
                                .map(|t| m.evaluate_term(&valuation, t))
                                .collect::<Result<_, _>>()?,
                        };
                        let positive = matches!(l, Literal::Pos(_));
                        match table.get(&g) {
                            Some(i) if positive => clause.pos.push(i),
                            Some(i) => clause.neg.push(i),
                            None => {
                                if m.holds(&g.predicate, &g.args)? != positive {
                                    continue 'assign;
                                }
                            }
                        }
                    }
                    other => {
                        if !m.evaluate_literal(&valuation, other)? {
                            continue 'assign;
                        }
                    }
                }
            }
            out.push(clause);
        }
    }
    Ok(out)
}
