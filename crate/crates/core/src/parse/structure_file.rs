use std::collections::BTreeMap;

use super::lexer::{SourceSpan, Tok};
use super::program::constructor_list;
use super::{ParseError, Parser};
use crate::structure::{BuiltinOp, FunctionValue, ModelError, Structure, Tuple};
use crate::vocab::Symbol;

/// Parses a structure file. The first declaration must be `domain:` or
/// `universe:`.
///
/// ```
/// let m = defcheck::parse::parse_structure(
///     "domain: a, b, c.\npred G/2 = { (a,b), (b,a), (c,c) }.",
///     None,
/// ).unwrap();
/// assert_eq!(m.domain_size(), Some(3));
/// ```
pub fn parse_structure(text: &str, file: Option<&str>) -> Result<Structure, ParseError> {
    let mut p = Parser::new(text, file)?;
    let span = p.span();
    let mut m = if p.eat_keyword("domain") {
        p.expect(Tok::Colon)?;
        let mut elements = vec![p.ground_term()?];
        while p.eat(&Tok::Comma) {
            elements.push(p.ground_term()?);
        }
        p.expect(Tok::Dot)?;
        Structure::extensional(elements).map_err(|e| model(&span, e))?
    } else if p.eat_keyword("universe") {
        p.expect(Tok::Colon)?;
        p.expect_keyword("constructors")?;
        let cf = constructor_list(&mut p)?;
        p.expect_keyword("depth")?;
        let k = p.number()? as usize;
        p.expect(Tok::Dot)?;
        Structure::term_generated(cf, k).map_err(|e| model(&span, e))?
    } else {
        return p.unexpected("`domain:` or `universe:`");
    };
    while !p.at_eof() {
        let span = p.span();
        if p.eat_keyword("pred") {
            let symbol = signature(&mut p)?;
            p.expect(Tok::Eq)?;
            p.expect(Tok::LBrace)?;
            let mut tuples = Vec::new();
            if !p.eat(&Tok::RBrace) {
                loop {
                    tuples.push(tuple(&mut p)?);
                    if p.eat(&Tok::RBrace) {
                        break;
                    }
                    p.expect(Tok::Comma)?;
                }
            }
            p.expect(Tok::Dot)?;
            m.set_predicate(symbol, tuples).map_err(|e| model(&span, e))?;
        } else if p.eat_keyword("func") {
            let symbol = signature(&mut p)?;
            p.expect(Tok::Eq)?;
            let value = if p.eat_keyword("builtin") {
                let op = if p.eat_keyword("product") {
                    BuiltinOp::Product
                } else if p.eat_keyword("sum") {
                    BuiltinOp::Sum
                } else {
                    return p.unexpected("`product` or `sum`");
                };
                p.expect_keyword("default")?;
                FunctionValue::Builtin {
                    op,
                    default: p.ground_term()?,
                }
            } else {
                p.expect(Tok::LBrace)?;
                let mut entries = BTreeMap::new();
                if !p.eat(&Tok::RBrace) {
                    loop {
                        let args = tuple(&mut p)?;
                        p.expect(Tok::Arrow)?;
                        entries.insert(args, p.ground_term()?);
                        if p.eat(&Tok::RBrace) {
                            break;
                        }
                        p.expect(Tok::Comma)?;
                    }
                }
                let default = if p.eat_keyword("default") {
                    Some(p.ground_term()?)
                } else {
                    None
                };
                FunctionValue::Table { entries, default }
            };
            p.expect(Tok::Dot)?;
            m.set_function(symbol, value).map_err(|e| model(&span, e))?;
        } else if p.eat_keyword("const") {
            let name = p.symbol_name(true)?;
            p.expect(Tok::Eq)?;
            let value = p.ground_term()?;
            p.expect(Tok::Dot)?;
            m.set_function(Symbol::new(name, 0), FunctionValue::constant(value))
                .map_err(|e| model(&span, e))?;
        } else {
            return p.unexpected("`pred`, `func` or `const`");
        }
    }
    Ok(m)
}

fn model(span: &SourceSpan, source: ModelError) -> ParseError {
    ParseError::Model {
        span: span.clone(),
        source,
    }
}

fn signature(p: &mut Parser) -> Result<Symbol, ParseError> {
    let name = p.symbol_name(true)?;
    p.expect(Tok::Slash)?;
    let arity = p.number()? as usize;
    Ok(Symbol::new(name, arity))
}

/// `(t1, ..., tn)`, `()` or a bare element.
fn tuple(p: &mut Parser) -> Result<Tuple, ParseError> {
    if !p.eat(&Tok::LParen) {
        return Ok(vec![p.ground_term()?]);
    }
    let mut out = Vec::new();
    if p.eat(&Tok::RParen) {
        return Ok(out);
    }
    out.push(p.ground_term()?);
    while p.eat(&Tok::Comma) {
        out.push(p.ground_term()?);
    }
    p.expect(Tok::RParen)?;
    Ok(out)
}
