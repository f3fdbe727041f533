use std::fmt;

use serde::Serialize;

/// Position of a token for diagnostics. Lines and columns start at 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SourceSpan {
    pub file: Option<String>,
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.file {
            Some(file) => write!(f, "{file}:{}:{}", self.line, self.column),
            None => write!(f, "{}:{}", self.line, self.column),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    /// Lowercase identifier or quoted atom.
    Name(String),
    Var(String),
    Number(String),
    Directive(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Dot,
    DotDot,
    Bar,
    Slash,
    Colon,
    Neck,
    Arrow,
    Eq,
    Neq,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Name(n) => write!(f, "name `{n}`"),
            Tok::Var(v) => write!(f, "variable `{v}`"),
            Tok::Number(n) => write!(f, "number `{n}`"),
            Tok::Directive(d) => write!(f, "directive `#{d}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::DotDot => f.write_str("`..`"),
            Tok::Bar => f.write_str("`|`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Neck => f.write_str("`:-`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::Neq => f.write_str("disequality"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

#[derive(Debug)]
pub struct LexError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Splits source text into tokens. `%` starts a line comment.
pub fn tokenize(text: &str) -> Result<Vec<Token>, LexError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    macro_rules! bump {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                bump!();
            }
            continue;
        }
        let (start_line, start_col) = (line, col);
        let err = |message: String| LexError {
            line: start_line,
            column: start_col,
            message,
        };
        let peek = |k: usize| chars.get(i + k).copied();
        let tok = if c.is_ascii_lowercase() {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                s.push(chars[i]);
                bump!();
            }
            Tok::Name(s)
        } else if c.is_ascii_uppercase() || c == '_' {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                s.push(chars[i]);
                bump!();
            }
            Tok::Var(s)
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while i < chars.len() && chars[i].is_ascii_digit() {
                s.push(chars[i]);
                bump!();
            }
            Tok::Number(s)
        } else if c == '\'' {
            bump!();
            let mut s = String::new();
            loop {
                match chars.get(i) {
                    None => return Err(err("unterminated quoted atom".into())),
                    Some('\'') => {
                        bump!();
                        break;
                    }
                    Some('\\') => {
                        bump!();
                        match chars.get(i) {
                            Some(&e) => {
                                s.push(e);
                                bump!();
                            }
                            None => return Err(err("unterminated quoted atom".into())),
                        }
                    }
                    Some(&ch) => {
                        s.push(ch);
                        bump!();
                    }
                }
            }
            Tok::Name(s)
        } else if c == '#' {
            bump!();
            let mut s = String::new();
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                s.push(chars[i]);
                bump!();
            }
            if s.is_empty() {
                return Err(err("expected a directive name after `#`".into()));
            }
            Tok::Directive(s)
        } else {
            let (tok, len) = match (c, peek(1), peek(2)) {
                ('\\', Some('='), Some('=')) => (Tok::Neq, 3),
                ('\\', Some('='), _) => (Tok::Neq, 2),
                ('!', Some('='), _) => (Tok::Neq, 2),
                ('=', Some('='), _) => (Tok::Eq, 2),
                (':', Some('-'), _) => (Tok::Neck, 2),
                ('-', Some('>'), _) => (Tok::Arrow, 2),
                ('.', Some('.'), _) => (Tok::DotDot, 2),
                ('(', _, _) => (Tok::LParen, 1),
                (')', _, _) => (Tok::RParen, 1),
                ('[', _, _) => (Tok::LBracket, 1),
                (']', _, _) => (Tok::RBracket, 1),
                ('{', _, _) => (Tok::LBrace, 1),
                ('}', _, _) => (Tok::RBrace, 1),
                (',', _, _) => (Tok::Comma, 1),
                ('.', _, _) => (Tok::Dot, 1),
                ('|', _, _) => (Tok::Bar, 1),
                ('/', _, _) => (Tok::Slash, 1),
                (':', _, _) => (Tok::Colon, 1),
                ('=', _, _) => (Tok::Eq, 1),
                ('≠', _, _) => (Tok::Neq, 1),
                _ => return Err(err(format!("unexpected character `{c}`"))),
            };
            for _ in 0..len {
                bump!();
            }
            tok
        };
        out.push(Token {
            tok,
            line: start_line,
            column: start_col,
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}
