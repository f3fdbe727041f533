use super::{ground_clauses, AtomTable, OracleError};
use crate::definition::Definition;
use crate::structure::Structure;
use crate::term::GroundTerm;

/// `m ⊨_D d` read off the definition of minimal satisfaction: `m` satisfies
/// the rules as implications, and every interpretation of the defined
/// predicates over the same domain and parameters that also does contains
/// `m`'s values. Enumerates all `2^n` interpretations of the `n` defined atoms.
///
/// ```
/// use defcheck::oracle::{brute_force_minimal_check, DEFAULT_BUDGET};
/// use defcheck::parse::{parse_program, parse_structure};
///
/// let d = parse_program("'R'(X,Y) :- 'G'(X,Y).\n'R'(X,Z) :- 'R'(X,Y), 'G'(Y,Z).", None).unwrap().definition;
/// let m = parse_structure(
///     "domain: a, b, c.\npred G/2 = { (a,b), (b,a), (c,c) }.\n\
///      pred R/2 = { (a,a), (b,b), (c,c), (a,b), (b,a) }.",
///     None,
/// ).unwrap();
/// assert!(brute_force_minimal_check(&m, &d, DEFAULT_BUDGET).unwrap());
/// ```
pub fn brute_force_minimal_check(m: &Structure, d: &Definition, budget: u128) -> Result<bool, OracleError> {
    if !m.is_extensional() {
        return Err(OracleError::NotExtensional);
    }
    if !d.is_negation_free() {
        return Err(OracleError::Negation);
    }
    let domain: Vec<GroundTerm> = m.domain().iter().cloned().collect();
    let table = AtomTable::new(d.defined(), &domain);
    table.check_budget(budget)?;
    let mut own = 0u128;
    for (i, a) in table.atoms.iter().enumerate() {
        if m.holds(&a.predicate, &a.args)? {
            own |= 1 << i;
        }
    }
    let clauses = ground_clauses(d.rules(), m, &table)?;
    let is_model = |set: u128| clauses.iter().all(|c| c.satisfied_by(set));
    if !is_model(own) {
        return Ok(false);
    }
    let n = table.atoms.len();
    Ok((0..1u128 << n).all(|set| !is_model(set) || own & !set == 0))
}
