//! Evaluation: grounding, the immediate-consequence operator, induction
//! traces, stratified least fixpoints and the satisfaction checks built on
//! them.
//!
//! Over term-generated structures every result carries an [`Exactness`]
//! flag; see [`Scope`] for how the evaluation universe is chosen.

mod check;
mod fixpoint;
mod ground;
mod scope;
mod solve;

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

pub use check::{
    check_program_model, check_split_equivalence, entails_literal, finite_lhm, lhm, satisfies_def, satisfies_fo, ModelReport,
    ModuleVerdict, SplitReport,
};
pub use fixpoint::{
    immediate_consequence, induction_process, least_fixpoint, to_atoms, unique_expansion, Derivation, Expansion,
    InductionTrace, TraceStep,
};
pub use ground::{ground, GroundLiteral, GroundRule, Grounding, GROUNDING_LIMIT};
pub use scope::{is_subterm_guarded, Scope, ScopeOptions};

use crate::definition::DefinitionError;
use crate::exactness::Exactness;
use crate::structure::{ModelError, Relation};
use crate::vocab::Symbol;

/// Values of the defined predicates.
pub type Interpretation = BTreeMap<Symbol, Relation>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Definition(#[from] DefinitionError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("predicate {0} is not defined by the program; the program says nothing about it")]
    UndefinedPredicate(Symbol),
    #[error("expected a ground predicate literal, found {0}")]
    NotAQuery(String),
    #[error("function symbols {} are not constructors, so the program has no Herbrand model to compute", list(.0))]
    NonConstructorFunctions(Vec<Symbol>),
    #[error("predicates {} are parameters of the program; give them a structure instead", list(.0))]
    OpenParameters(Vec<Symbol>),
    #[error("grounding needs {0} rule instances, more than the limit")]
    TooLarge(u128),
}

fn list(symbols: &[Symbol]) -> String {
    symbols.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(", ")
}

/// How fixpoints are computed. Both give the same result.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Re-apply every rule to all facts until nothing changes.
    Naive,
    /// Only consider rule instances that use a fact derived in the last round.
    #[default]
    SemiNaive,
}

#[derive(Clone, Debug, Default)]
pub struct EvalOptions {
    pub strategy: Strategy,
    pub scope: ScopeOptions,
}

impl EvalOptions {
    pub fn naive() -> Self {
        EvalOptions {
            strategy: Strategy::Naive,
            ..Default::default()
        }
    }
}

/// A yes/no answer with its exactness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub exactness: Exactness,
    /// A counterexample or difference explaining a negative answer.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Verdict {
    pub(crate) fn new(holds: bool, exactness: Exactness) -> Self {
        Verdict {
            holds,
            exactness,
            witness: None,
        }
    }
}
