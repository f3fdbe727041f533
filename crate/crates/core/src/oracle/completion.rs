use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{AtomTable, OracleError};
use crate::definition::Definition;
use crate::engine::Interpretation;
use crate::rule::{Atom, GroundAtom, Literal};
use crate::structure::{tuples_over, Structure};
use crate::term::{GroundTerm, Term};
use crate::vocab::{Name, Symbol};

/// The completed definition of every defined predicate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompletionTheory {
    pub completions: Vec<Completion>,
}

/// `p(X1,...,Xn) ↔ disjunct ∨ ... ∨ disjunct`, one disjunct per rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Completion {
    pub predicate: Symbol,
    pub head_vars: Vec<Name>,
    pub disjuncts: Vec<Disjunct>,
}

/// `∃ exists (conjuncts)`. An empty conjunction is `true`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disjunct {
    pub rule: usize,
    pub exists: Vec<Name>,
    pub conjuncts: Vec<Literal>,
}

/// Clark's completion. Head arguments are replaced by fresh variables
/// `X1..Xn`; a head argument that is not a first occurrence of a variable
/// becomes an equation `Xi = t`, and the remaining rule variables are
/// existentially quantified.
///
/// ```
/// use defcheck::oracle::clark_completion;
/// let d = defcheck::parse::parse_program(
///     "'R'(X,Y) :- 'G'(X,Y).\n'R'(X,Z) :- 'R'(X,Y), 'G'(Y,Z).",
///     None,
/// ).unwrap().definition;
/// assert_eq!(
///     clark_completion(&d).to_string(),
///     "R(X1,X2) ↔ G(X1,X2) ∨ ∃Y (R(X1,Y) ∧ G(Y,X2))\n",
/// );
/// ```
pub fn clark_completion(d: &Definition) -> CompletionTheory {
    let taken: BTreeSet<Name> = d.rules().iter().flat_map(|r| r.vars()).collect();
    let mut completions: Vec<Completion> = d
        .defined()
        .iter()
        .map(|p| Completion {
            predicate: p.clone(),
            head_vars: (1..=p.arity).map(|i| head_var(i, &taken)).collect(),
            disjuncts: Vec::new(),
        })
        .collect();
    for (index, r) in d.rules().iter().enumerate() {
        let c = completions
            .iter_mut()
            .find(|c| c.predicate == r.head.symbol())
            .expect("every head is defined");
        let mut sub: BTreeMap<Name, Term> = BTreeMap::new();
        let mut equations = Vec::new();
        for (x, t) in c.head_vars.iter().zip(&r.head.args) {
            match t {
                Term::Var(v) if !sub.contains_key(v) => {
                    sub.insert(v.clone(), Term::Var(x.clone()));
                }
                _ => equations.push((x.clone(), t.clone())),
            }
        }
        let exists = r.vars().into_iter().filter(|v| !sub.contains_key(v)).collect();
        let mut conjuncts: Vec<Literal> = equations
            .into_iter()
            .map(|(x, t)| Literal::Eq(Term::Var(x), t.substitute(&sub)))
            .collect();
        conjuncts.extend(r.body.iter().map(|l| substitute(l, &sub)));
        c.disjuncts.push(Disjunct {
            rule: index,
            exists,
            conjuncts,
        });
    }
    CompletionTheory { completions }
}

/// `Xi`, primed until it clashes with no rule variable.
fn head_var(i: usize, taken: &BTreeSet<Name>) -> Name {
    let mut name = format!("X{i}");
    while taken.contains(name.as_str()) {
        name.push('\'');
    }
    name.into()
}

fn substitute(l: &Literal, sub: &BTreeMap<Name, Term>) -> Literal {
    let atom = |a: &Atom| Atom {
        predicate: a.predicate.clone(),
        args: a.args.iter().map(|t| t.substitute(sub)).collect(),
    };
    match l {
        Literal::Pos(a) => Literal::Pos(atom(a)),
        Literal::Neg(a) => Literal::Neg(atom(a)),
        Literal::Eq(s, t) => Literal::Eq(s.substitute(sub), t.substitute(sub)),
        Literal::Neq(s, t) => Literal::Neq(s.substitute(sub), t.substitute(sub)),
        other => other.clone(),
    }
}

struct Formula<'a>(&'a Literal);

impl fmt::Display for Formula<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let atom = |f: &mut fmt::Formatter<'_>, a: &Atom| {
            f.write_str(&a.predicate)?;
            if !a.args.is_empty() {
                let args: Vec<String> = a.args.iter().map(Term::to_string).collect();
                write!(f, "({})", args.join(","))?;
            }
            Ok(())
        };
        match self.0 {
            Literal::Pos(a) => atom(f, a),
            Literal::Neg(a) => {
                f.write_str("¬")?;
                atom(f, a)
            }
            Literal::True => f.write_str("true"),
            Literal::False => f.write_str("false"),
            Literal::Eq(s, t) => write!(f, "{s} = {t}"),
            Literal::Neq(s, t) => write!(f, "{s} ≠ {t}"),
        }
    }
}

impl Disjunct {
    fn render(&self, alone: bool) -> String {
        let body = match self.conjuncts.len() {
            0 => "true".to_string(),
            _ => {
                let parts: Vec<String> = self.conjuncts.iter().map(|l| Formula(l).to_string()).collect();
                parts.join(" ∧ ")
            }
        };
        let compound = self.conjuncts.len() > 1;
        if !self.exists.is_empty() {
            let vars: Vec<&str> = self.exists.iter().map(|v| &**v).collect();
            if compound {
                format!("∃{} ({body})", vars.join(","))
            } else {
                format!("∃{} {body}", vars.join(","))
            }
        } else if compound && !alone {
            format!("({body})")
        } else {
            body
        }
    }
}

impl fmt::Display for Completion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate.name)?;
        if !self.head_vars.is_empty() {
            let vars: Vec<&str> = self.head_vars.iter().map(|v| &**v).collect();
            write!(f, "({})", vars.join(","))?;
        }
        let alone = self.disjuncts.len() == 1;
        let parts: Vec<String> = self.disjuncts.iter().map(|d| d.render(alone)).collect();
        write!(f, " ↔ {}", parts.join(" ∨ "))
    }
}

impl fmt::Display for CompletionTheory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.completions {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Every interpretation of the defined predicates over `m`'s domain, with
/// `m`'s parameters, that satisfies the completion. Ordered by the bitmask of
/// true atoms, atoms numbered predicate by predicate in tuple order.
pub fn enumerate_completion_models(
    theory: &CompletionTheory,
    m: &Structure,
    budget: u128,
) -> Result<Vec<Interpretation>, OracleError> {
    if !m.is_extensional() {
        return Err(OracleError::NotExtensional);
    }
    let domain: Vec<GroundTerm> = m.domain().iter().cloned().collect();
    let table = AtomTable::new(theory.completions.iter().map(|c| &c.predicate), &domain);
    table.check_budget(budget)?;
    // For each atom, its completed body as a disjunction of conjunctions of
    // defined literals `(index, positive)`.
    let mut bodies: Vec<Vec<Vec<(usize, bool)>>> = vec![Vec::new(); table.atoms.len()];
    for c in &theory.completions {
        for args in tuples_over(&domain, c.predicate.arity) {
            let here = table
                .get(&GroundAtom {
                    predicate: c.predicate.clone(),
                    args: args.clone(),
                })
                .expect("atoms of defined predicates are numbered");
            for d in &c.disjuncts {
                for values in tuples_over(&domain, d.exists.len()) {
                    let valuation: BTreeMap<Name, GroundTerm> = c
                        .head_vars
                        .iter()
                        .cloned()
                        .zip(args.iter().cloned())
                        .chain(d.exists.iter().cloned().zip(values))
                        .collect();
                    if let Some(conj) = ground_conjunction(&d.conjuncts, &valuation, m, &table)? {
                        bodies[here].push(conj);
                    }
                }
            }
        }
    }
    let n = table.atoms.len();
    let mut models = Vec::new();
    for set in 0..1u128 << n {
        let ok = bodies.iter().enumerate().all(|(i, body)| {
            let value = body
                .iter()
                .any(|conj| conj.iter().all(|&(j, positive)| (set >> j & 1 == 1) == positive));
            value == (set >> i & 1 == 1)
        });
        if ok {
            let mut interp: Interpretation = theory
                .completions
                .iter()
                .map(|c| (c.predicate.clone(), Default::default()))
                .collect();
            for (i, a) in table.atoms.iter().enumerate() {
                if set >> i & 1 == 1 {
                    interp.get_mut(&a.predicate).unwrap().insert(a.args.clone());
                }
            }
            models.push(interp);
        }
    }
    Ok(models)
}

/// `None` when some non-defined conjunct is false.
fn ground_conjunction(
    conjuncts: &[Literal],
    valuation: &BTreeMap<Name, GroundTerm>,
    m: &Structure,
    table: &AtomTable,
) -> Result<Option<Vec<(usize, bool)>>, OracleError> {
    let mut out = Vec::new();
    for l in conjuncts {
        if let Literal::Pos(a) | Literal::Neg(a) = l {
            let g = GroundAtom {
                predicate: a.symbol(),
                args: a
                    .args
                    .iter()
                    .map(|t| m.evaluate_term(valuation, t))
                    .collect::<Result<_, _>>()?,
            };
            if let Some(i) = table.get(&g) {
                out.push((i, matches!(l, Literal::Pos(_))));
                continue;
            }
        }
        if !m.evaluate_literal(valuation, l)? {
            return Ok(None);
        }
    }
    Ok(Some(out))
}
