//! Atoms, literals and definitional rules.

use std::collections::BTreeSet;
use std::fmt;

use crate::term::{display_name, GroundTerm, Term};
use crate::vocab::{Name, Symbol};

/// A predicate atom `p(t1, ..., tn)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Atom {
    pub predicate: Name,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: impl Into<Name>, args: Vec<Term>) -> Self {
        Atom {
            predicate: predicate.into(),
            args,
        }
    }

    pub fn symbol(&self) -> Symbol {
        Symbol::new(self.predicate.clone(), self.args.len())
    }

    pub fn vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.args.iter().for_each(|a| a.collect_vars(&mut out));
        out
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn to_ground(&self) -> Option<GroundAtom> {
        Some(GroundAtom {
            predicate: self.symbol(),
            args: self
                .args
                .iter()
                .map(Term::to_ground)
                .collect::<Option<Vec<_>>>()?,
        })
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&display_name(&self.predicate))?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// A ground atom, used for derived facts and queries.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GroundAtom {
    pub predicate: Symbol,
    pub args: Vec<GroundTerm>,
}

impl GroundAtom {
    pub fn new(predicate: impl Into<Name>, args: Vec<GroundTerm>) -> Self {
        GroundAtom {
            predicate: Symbol::new(predicate, args.len()),
            args,
        }
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&display_name(&self.predicate.name))?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl serde::Serialize for GroundAtom {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A body literal.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Literal {
    Pos(Atom),
    /// Negated predicate atom (stratified negation).
    Neg(Atom),
    True,
    False,
    Eq(Term, Term),
    Neq(Term, Term),
}

impl Literal {
    pub fn vars(&self) -> BTreeSet<Name> {
        match self {
            Literal::Pos(a) | Literal::Neg(a) => a.vars(),
            Literal::True | Literal::False => BTreeSet::new(),
            Literal::Eq(s, t) | Literal::Neq(s, t) => {
                let mut out = s.vars();
                t.collect_vars(&mut out);
                out
            }
        }
    }

    pub fn atom(&self) -> Option<&Atom> {
        match self {
            Literal::Pos(a) | Literal::Neg(a) => Some(a),
            _ => None,
        }
    }

    /// Argument terms of the literal.
    pub fn terms(&self) -> Vec<&Term> {
        match self {
            Literal::Pos(a) | Literal::Neg(a) => a.args.iter().collect(),
            Literal::True | Literal::False => Vec::new(),
            Literal::Eq(s, t) | Literal::Neq(s, t) => vec![s, t],
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Pos(a) => write!(f, "{a}"),
            Literal::Neg(a) => write!(f, "not {a}"),
            Literal::True => f.write_str("true"),
            Literal::False => f.write_str("false"),
            Literal::Eq(s, t) => write!(f, "{s} = {t}"),
            Literal::Neq(s, t) => write!(f, "{s} \\= {t}"),
        }
    }
}

/// A definitional rule `head <- body`. All variables are implicitly
/// universally quantified at rule scope.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Rule {
    pub head: Atom,
    pub body: Vec<Literal>,
}

impl Rule {
    pub fn new(head: Atom, body: Vec<Literal>) -> Self {
        Rule { head, body }
    }

    pub fn fact(head: Atom) -> Self {
        Rule {
            head,
            body: Vec::new(),
        }
    }

    pub fn vars(&self) -> BTreeSet<Name> {
        let mut out = self.head.vars();
        for l in &self.body {
            out.extend(l.vars());
        }
        out
    }

    pub fn has_negation(&self) -> bool {
        self.body.iter().any(|l| matches!(l, Literal::Neg(_)))
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        if !self.body.is_empty() {
            f.write_str(" :- ")?;
            for (i, l) in self.body.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{l}")?;
            }
        }
        f.write_str(".")
    }
}
