use serde::Serialize;

use super::fixpoint::{check_parameters, exactness};
use super::scope::Scope;
use super::solve::{Bindings, Ctx};
use super::{EngineError, EvalOptions};
use crate::definition::Definition;
use crate::exactness::Exactness;
use crate::rule::{GroundAtom, Literal};
use crate::structure::{tuples_over, Structure};

/// Most rule instances [`ground`] will enumerate.
pub const GROUNDING_LIMIT: u128 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum GroundLiteral {
    Pos(GroundAtom),
    Neg(GroundAtom),
}

/// A rule instance whose remaining body mentions defined predicates only.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroundRule {
    pub rule: usize,
    pub head: GroundAtom,
    pub body: Vec<GroundLiteral>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Grounding {
    /// Number of variable assignments tried, before simplification.
    pub instantiations: usize,
    pub rules: Vec<GroundRule>,
    pub exactness: Exactness,
}

/// Instantiates every rule over the scope of `m`. Parameter atoms,
/// `=`, `\=`, `true` and `false` are evaluated; instances with a false
/// literal are dropped and true literals are removed.
pub fn ground(d: &Definition, m: &Structure, options: &EvalOptions) -> Result<Grounding, EngineError> {
    check_parameters(d, m)?;
    let scope = Scope::new(m, d, &options.scope);
    let total: u128 = d
        .rules()
        .iter()
        .map(|r| (scope.len() as u128).saturating_pow(r.vars().len() as u32))
        .sum();
    if total > GROUNDING_LIMIT {
        return Err(EngineError::TooLarge(total));
    }
    let ctx = Ctx::new(m, &scope);
    let mut instantiations = 0;
    let mut rules = Vec::new();
    for (ri, r) in d.rules().iter().enumerate() {
        let vars: Vec<_> = r.vars().into_iter().collect();
        'instances: for tuple in tuples_over(scope.universe(), vars.len()) {
            instantiations += 1;
            let mut b = Bindings::default();
            for (v, t) in vars.iter().zip(tuple) {
                b = b.with(v.clone(), t);
            }
            let mut body = Vec::new();
            for l in &r.body {
                let keep = match l {
                    Literal::True => None,
                    Literal::False => continue 'instances,
                    Literal::Eq(s, t) if ctx.eval(&b, s)? == ctx.eval(&b, t)? => None,
                    Literal::Neq(s, t) if ctx.eval(&b, s)? != ctx.eval(&b, t)? => None,
                    Literal::Eq(..) | Literal::Neq(..) => continue 'instances,
                    Literal::Pos(a) | Literal::Neg(a) => {
                        let positive = matches!(l, Literal::Pos(_));
                        let g = match ctx.head(&b, a)? {
                            Some(g) => g,
                            // Atoms outside the scope are false.
                            None if positive => continue 'instances,
                            None => continue,
                        };
                        if d.is_defined(&g.predicate) {
                            Some(if positive { GroundLiteral::Pos(g) } else { GroundLiteral::Neg(g) })
                        } else if m.holds(&g.predicate, &g.args)? == positive {
                            None
                        } else {
                            continue 'instances;
                        }
                    }
                };
                body.extend(keep);
            }
            if let Some(head) = ctx.head(&b, &r.head)? {
                rules.push(GroundRule { rule: ri, head, body });
            }
        }
    }
    Ok(Grounding {
        instantiations,
        rules,
        exactness: exactness(&ctx, d),
    })
}
