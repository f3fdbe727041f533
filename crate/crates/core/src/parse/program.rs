use std::collections::BTreeMap;

use super::lexer::{SourceSpan, Tok};
use super::{ParseError, Parser};
use crate::definition::{classify, Part, Program};
use crate::rule::{Atom, GroundAtom, Literal, Rule};
use crate::term::Term;
use crate::vocab::{ConstructorSet, Name, Symbol};

/// Parses a program file. `file` is used only in error spans.
///
/// ```
/// let p = defcheck::parse::parse_program(
///     "member(X, [X|T]).\nmember(X, [Y|T]) :- member(X, T).",
///     None,
/// ).unwrap();
/// assert_eq!(p.definition.rules().len(), 2);
/// ```
pub fn parse_program(text: &str, file: Option<&str>) -> Result<Program, ParseError> {
    let mut p = Parser::new(text, file)?;
    let mut arities = Arities::default();
    let mut rules = Vec::new();
    let mut constructors: Option<ConstructorSet> = None;
    let mut modules: Vec<Part> = Vec::new();
    while !p.at_eof() {
        match p.peek().clone() {
            Tok::Directive(d) if d == "universe" => {
                p.next();
                let set = universe_directive(&mut p)?;
                constructors.get_or_insert_with(ConstructorSet::new).extend(set);
            }
            Tok::Directive(d) if d == "module" => {
                p.next();
                let name = p.symbol_name(true)?.to_string();
                p.expect(Tok::LBrace)?;
                let start = rules.len();
                while !p.eat(&Tok::RBrace) {
                    if p.at_eof() {
                        return p.unexpected("`}`");
                    }
                    rules.push(rule(&mut p, &mut arities)?);
                }
                let indices: Vec<usize> = (start..rules.len()).collect();
                match modules.iter_mut().find(|m| m.name == name) {
                    Some(m) => m.rules.extend(indices),
                    None => modules.push(Part { name, rules: indices }),
                }
            }
            Tok::Directive(d) => return p.error(format!("unknown directive `#{d}`")),
            _ => rules.push(rule(&mut p, &mut arities)?),
        }
    }
    if rules.is_empty() {
        return p.error("a program needs at least one rule");
    }
    let definition = classify(rules)?;
    let constructors = constructors.unwrap_or_else(|| definition.parameters().functions().cloned().collect());
    Ok(Program {
        definition,
        constructors,
        modules,
    })
}

/// Parses a single term; capitalized identifiers are variables.
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(text, None)?;
    let t = p.term(true)?;
    finish(&mut p)?;
    Ok(t)
}

/// Parses a body literal such as `not member(0, [1,2,3])`. A final `.` is optional.
pub fn parse_literal(text: &str) -> Result<Literal, ParseError> {
    let mut p = Parser::new(text, None)?;
    let l = literal(&mut p, &mut Arities::default())?;
    finish(&mut p)?;
    Ok(l)
}

/// Parses a variable-free atom.
pub fn parse_ground_atom(text: &str) -> Result<GroundAtom, ParseError> {
    let mut p = Parser::new(text, None)?;
    let span = p.span();
    let a = atom(&mut p, &mut Arities::default())?;
    finish(&mut p)?;
    a.to_ground().ok_or_else(|| ParseError::Syntax {
        span,
        message: format!("atom {a} contains variables"),
    })
}

fn finish(p: &mut Parser) -> Result<(), ParseError> {
    p.eat(&Tok::Dot);
    if p.at_eof() {
        Ok(())
    } else {
        p.unexpected("end of input")
    }
}

#[derive(Default)]
struct Arities {
    predicates: BTreeMap<Name, usize>,
    functions: BTreeMap<Name, usize>,
}

impl Arities {
    fn note_predicate(&mut self, span: &SourceSpan, name: &Name, arity: usize) -> Result<(), ParseError> {
        note(&mut self.predicates, span, name, arity)
    }

    fn note_term(&mut self, span: &SourceSpan, t: &Term) -> Result<(), ParseError> {
        if let Term::App(f, args) = t {
            note(&mut self.functions, span, f, args.len())?;
            for a in args {
                self.note_term(span, a)?;
            }
        }
        Ok(())
    }
}

fn note(map: &mut BTreeMap<Name, usize>, span: &SourceSpan, name: &Name, arity: usize) -> Result<(), ParseError> {
    match map.get(name) {
        Some(&first) if first != arity => Err(ParseError::Arity {
            span: span.clone(),
            name: name.to_string(),
            first,
            second: arity,
        }),
        _ => {
            map.insert(name.clone(), arity);
            Ok(())
        }
    }
}

fn universe_directive(p: &mut Parser) -> Result<ConstructorSet, ParseError> {
    p.expect_keyword("constructors")?;
    p.expect(Tok::Colon)?;
    if p.eat(&Tok::Dot) {
        return Ok(ConstructorSet::new());
    }
    let set = constructor_list(p)?;
    p.expect(Tok::Dot)?;
    Ok(set)
}

/// `nil/0, cons/2, 0..3`; a bare name stands for a constant.
pub(super) fn constructor_list(p: &mut Parser) -> Result<ConstructorSet, ParseError> {
    let mut set = ConstructorSet::new();
    loop {
        if let (Tok::Number(_), Tok::DotDot) = (p.peek(), p.peek_at(1)) {
            let lo = p.number()?;
            p.next();
            let hi = p.number()?;
            if hi < lo {
                return p.error(format!("empty numeral range {lo}..{hi}"));
            }
            for n in lo..=hi {
                set.insert(Symbol::new(n.to_string(), 0));
            }
        } else {
            let name = p.symbol_name(true)?;
            let arity = if p.eat(&Tok::Slash) { p.number()? as usize } else { 0 };
            set.insert(Symbol::new(name, arity));
        }
        if !p.eat(&Tok::Comma) {
            return Ok(set);
        }
    }
}

fn rule(p: &mut Parser, arities: &mut Arities) -> Result<Rule, ParseError> {
    p.fresh = 0;
    let head = atom(p, arities)?;
    let mut body = Vec::new();
    if p.eat(&Tok::Neck) {
        body.push(literal(p, arities)?);
        while p.eat(&Tok::Comma) {
            body.push(literal(p, arities)?);
        }
    }
    p.expect(Tok::Dot)?;
    Ok(Rule::new(head, body))
}

fn atom(p: &mut Parser, arities: &mut Arities) -> Result<Atom, ParseError> {
    let span = p.span();
    match p.term(true)? {
        Term::App(name, args) => {
            if &*name == "true" || &*name == "false" {
                return Err(ParseError::Syntax {
                    span,
                    message: format!("`{name}` cannot be used as a predicate here"),
                });
            }
            arities.note_predicate(&span, &name, args.len())?;
            for a in &args {
                arities.note_term(&span, a)?;
            }
            Ok(Atom::new(name, args))
        }
        Term::Var(v) => Err(ParseError::Syntax {
            span,
            message: format!("expected an atom, found variable `{v}`"),
        }),
    }
}

fn literal(p: &mut Parser, arities: &mut Arities) -> Result<Literal, ParseError> {
    let span = p.span();
    if matches!(p.peek(), Tok::Name(n) if n == "not")
        && matches!(p.peek_at(1), Tok::Name(_) | Tok::Var(_) | Tok::LParen | Tok::LBracket | Tok::Number(_))
    {
        p.next();
        let parenthesized = p.eat(&Tok::LParen);
        let save = p.pos;
        p.term(true)?;
        if matches!(p.peek(), Tok::Eq | Tok::Neq) {
            return Err(ParseError::Syntax {
                span,
                message: "negated equality is not supported; write `s \\= t` instead".into(),
            });
        }
        p.pos = save;
        let a = atom(p, arities)?;
        if parenthesized {
            p.expect(Tok::RParen)?;
        }
        return Ok(Literal::Neg(a));
    }
    let t = p.term(true)?;
    let eq = match p.peek() {
        Tok::Eq => Some(true),
        Tok::Neq => Some(false),
        _ => None,
    };
    if let Some(eq) = eq {
        p.next();
        let u = p.term(true)?;
        arities.note_term(&span, &t)?;
        arities.note_term(&span, &u)?;
        return Ok(if eq { Literal::Eq(t, u) } else { Literal::Neq(t, u) });
    }
    match t {
        Term::App(name, args) if args.is_empty() && &*name == "true" => Ok(Literal::True),
        Term::App(name, args) if args.is_empty() && &*name == "false" => Ok(Literal::False),
        Term::App(name, args) => {
            arities.note_predicate(&span, &name, args.len())?;
            for a in &args {
                arities.note_term(&span, a)?;
            }
            Ok(Literal::Pos(Atom::new(name, args)))
        }
        Term::Var(v) => Err(ParseError::Syntax {
            span,
            message: format!("expected a literal, found variable `{v}`"),
        }),
    }
}
