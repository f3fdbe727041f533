//! Text formats: program files (`.lpd`) and structure files (`.fos`).
//!
//! Both grammars are documented in `book/src/formats.md`.

mod lexer;
mod print;
mod program;
mod structure_file;

use thiserror::Error;

pub use lexer::SourceSpan;
pub use print::{print_program, print_structure};
pub use program::{parse_ground_atom, parse_literal, parse_program, parse_term};
pub use structure_file::parse_structure;

use crate::definition::DefinitionError;
use crate::structure::ModelError;
use crate::term::{GroundTerm, Term, CONS, NIL};
use crate::vocab::Name;
use lexer::{tokenize, Tok, Token};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{span}: syntax error: {message}")]
    Syntax { span: SourceSpan, message: String },
    #[error("{span}: {name} is used with arity {first} and with arity {second}")]
    Arity {
        span: SourceSpan,
        name: String,
        first: usize,
        second: usize,
    },
    #[error("{span}: {source}")]
    Model { span: SourceSpan, source: ModelError },
    #[error("{0}")]
    Definition(#[from] DefinitionError),
}

impl ParseError {
    pub fn span(&self) -> Option<&SourceSpan> {
        match self {
            ParseError::Syntax { span, .. }
            | ParseError::Arity { span, .. }
            | ParseError::Model { span, .. } => Some(span),
            ParseError::Definition(_) => None,
        }
    }
}

/// Token cursor shared by both grammars.
struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    file: Option<String>,
    fresh: usize,
}

impl Parser {
    fn new(text: &str, file: Option<&str>) -> Result<Self, ParseError> {
        let tokens = tokenize(text).map_err(|e| ParseError::Syntax {
            span: SourceSpan {
                file: file.map(str::to_string),
                line: e.line,
                column: e.column,
            },
            message: e.message,
        })?;
        Ok(Parser {
            tokens,
            pos: 0,
            file: file.map(str::to_string),
            fresh: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn span(&self) -> SourceSpan {
        let t = &self.tokens[self.pos];
        SourceSpan {
            file: self.file.clone(),
            line: t.line,
            column: t.column,
        }
    }

    fn next(&mut self) -> Tok {
        let t = self.tokens[self.pos].tok.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            span: self.span(),
            message: message.into(),
        })
    }

    fn unexpected<T>(&self, wanted: &str) -> Result<T, ParseError> {
        self.error(format!("expected {wanted}, found {}", self.peek()))
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.next();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            self.unexpected(&tok.to_string())
        }
    }

    fn at_eof(&self) -> bool {
        matches!(self.peek(), Tok::Eof)
    }

    /// A keyword spelled as a lowercase name.
    fn eat_keyword(&mut self, kw: &str) -> bool {
        if matches!(self.peek(), Tok::Name(n) if n == kw) {
            self.next();
            true
        } else {
            false
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        if self.eat_keyword(kw) {
            Ok(())
        } else {
            self.unexpected(&format!("`{kw}`"))
        }
    }

    fn number(&mut self) -> Result<u64, ParseError> {
        match self.peek().clone() {
            Tok::Number(n) => {
                let span = self.span();
                self.next();
                n.parse().map_err(|_| ParseError::Syntax {
                    span,
                    message: format!("number {n} is too large"),
                })
            }
            _ => self.unexpected("a number"),
        }
    }

    /// A symbol name; `[]` is read as `nil` and `'|'` as `cons`.
    /// With `allow_upper`, capitalized identifiers are names too.
    fn symbol_name(&mut self, allow_upper: bool) -> Result<Name, ParseError> {
        match self.peek().clone() {
            Tok::Name(n) => {
                self.next();
                Ok(canonical_name(&n).into())
            }
            Tok::Var(v) if allow_upper => {
                self.next();
                Ok(v.into())
            }
            Tok::Number(n) => {
                self.next();
                Ok(n.into())
            }
            Tok::LBracket if matches!(self.peek_at(1), Tok::RBracket) => {
                self.next();
                self.next();
                Ok(NIL.into())
            }
            Tok::Bar => {
                self.next();
                Ok(CONS.into())
            }
            _ => self.unexpected("a symbol name"),
        }
    }

    /// Term with list sugar. Variables are allowed only when `vars` is set;
    /// otherwise capitalized identifiers are constants.
    fn term(&mut self, vars: bool) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Var(v) if vars => {
                self.next();
                if v == "_" {
                    self.fresh += 1;
                    Ok(Term::var(format!("_{}", self.fresh)))
                } else {
                    Ok(Term::var(v))
                }
            }
            Tok::LBracket => {
                self.next();
                if self.eat(&Tok::RBracket) {
                    return Ok(Term::nil());
                }
                let mut items = vec![self.term(vars)?];
                while self.eat(&Tok::Comma) {
                    items.push(self.term(vars)?);
                }
                let tail = if self.eat(&Tok::Bar) {
                    self.term(vars)?
                } else {
                    Term::nil()
                };
                self.expect(Tok::RBracket)?;
                Ok(items
                    .into_iter()
                    .rev()
                    .fold(tail, |t, h| Term::cons(h, t)))
            }
            Tok::Name(_) | Tok::Number(_) | Tok::Var(_) => {
                let name = self.symbol_name(!vars)?;
                let mut args = Vec::new();
                if self.eat(&Tok::LParen) {
                    args.push(self.term(vars)?);
                    while self.eat(&Tok::Comma) {
                        args.push(self.term(vars)?);
                    }
                    self.expect(Tok::RParen)?;
                }
                Ok(Term::App(name, args))
            }
            _ => self.unexpected("a term"),
        }
    }

    fn ground_term(&mut self) -> Result<GroundTerm, ParseError> {
        let t = self.term(false)?;
        Ok(t.to_ground().expect("terms parsed without variables are ground"))
    }
}

fn canonical_name(n: &str) -> &str {
    match n {
        "[]" => NIL,
        "|" => CONS,
        other => other,
    }
}
