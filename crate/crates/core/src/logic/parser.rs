//! Recursive-descent parsers for the declaration and formula grammars.
//!
//! Formulas use `!`, `&`, `|`, `->`, `<->` with that binding order (tightest
//! first); `->` associates to the right, the others to the left. The
//! distinctness marker is written `x != y`; `true` and `false` are
//! constants.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::formula::{Atom, Formula, Var};
use super::language::{Arity, Language};
use crate::error::{Error, Result};

/// Parses `predicate NAME/ARITY` lines; `#` starts a comment.
pub fn parse_language(text: &str) -> Result<Language> {
    let mut decls = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if let Some(decl) = parse_predicate_decl(line, idx + 1)? {
            decls.push(decl);
        } else if !strip_comment(line).trim().is_empty() {
            let col = line.len() - line.trim_start().len() + 1;
            return Err(syntax(idx + 1, col, "expected `predicate NAME/ARITY`"));
        }
    }
    Language::new(decls)
}

/// Parses one declaration line. Returns `Ok(None)` for lines that are blank,
/// comments, or do not start with the `predicate` keyword.
pub fn parse_predicate_decl(line: &str, line_no: usize) -> Result<Option<(String, u32)>> {
    let body = strip_comment(line);
    let trimmed = body.trim_start();
    let offset = body.len() - trimmed.len();
    let Some(rest) = trimmed.strip_prefix("predicate") else {
        return Ok(None);
    };
    if !rest.starts_with(char::is_whitespace) {
        return Ok(None);
    }
    let rest_trim = rest.trim_start();
    let col = offset + "predicate".len() + (rest.len() - rest_trim.len()) + 1;
    let rest_trim = rest_trim.trim_end();
    let (name, arity) = rest_trim
        .split_once('/')
        .ok_or_else(|| syntax(line_no, col, "expected NAME/ARITY"))?;
    if !is_identifier(name) {
        return Err(syntax(line_no, col, "invalid predicate name"));
    }
    let arity_col = col + name.len() + 1;
    let arity: u32 = arity
        .trim()
        .parse()
        .map_err(|_| syntax(line_no, arity_col, "arity must be a non-negative integer"))?;
    Ok(Some((name.to_string(), arity)))
}

pub fn parse_formula(text: &str, lang: &Language) -> Result<Formula> {
    let tokens = lex(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        lang,
    };
    let f = p.iff()?;
    if let Some(t) = p.peek() {
        return Err(syntax(t.line, t.col, "unexpected trailing input"));
    }
    Ok(f)
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn syntax(line: usize, column: usize, message: &str) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Neq,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let mut push = |tok: Tok, width: usize, i: &mut usize, col: &mut usize| {
            out.push(Token {
                tok,
                line: tl,
                col: tc,
            });
            *i += width;
            *col += width;
        };
        let next = chars.get(i + 1).copied();
        match c {
            '\n' => {
                line += 1;
                col = 1;
                i += 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
            }
            '(' => push(Tok::LParen, 1, &mut i, &mut col),
            ')' => push(Tok::RParen, 1, &mut i, &mut col),
            ',' => push(Tok::Comma, 1, &mut i, &mut col),
            '&' => push(Tok::And, 1, &mut i, &mut col),
            '|' => push(Tok::Or, 1, &mut i, &mut col),
            '!' if next == Some('=') => push(Tok::Neq, 2, &mut i, &mut col),
            '!' => push(Tok::Not, 1, &mut i, &mut col),
            '-' if next == Some('>') => push(Tok::Implies, 2, &mut i, &mut col),
            '<' if next == Some('-') && chars.get(i + 2) == Some(&'>') => {
                push(Tok::Iff, 3, &mut i, &mut col)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let ident: String = chars[start..i].iter().collect();
                col += i - start;
                out.push(Token {
                    tok: Tok::Ident(ident),
                    line: tl,
                    col: tc,
                });
            }
            c if c.is_ascii_digit() => {
                // Constants are not part of the formula language; surface them
                // as bad variables so the message is specific.
                let start = i;
                while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                col += i - start;
                out.push(Token {
                    tok: Tok::Ident(chars[start..i].iter().collect()),
                    line: tl,
                    col: tc,
                });
            }
            _ => return Err(syntax(line, col, "unexpected character")),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    lang: &'a Language,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_is(&self, tok: &Tok) -> bool {
        self.peek().is_some_and(|t| &t.tok == tok)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn end_position(&self) -> (usize, usize) {
        match self.tokens.last() {
            Some(t) => (t.line, t.col + 1),
            None => (1, 1),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Token> {
        match self.bump() {
            Some(t) if t.tok == tok => Ok(t),
            Some(t) => Err(syntax(t.line, t.col, &alloc::format!("expected {what}"))),
            None => {
                let (l, c) = self.end_position();
                Err(syntax(
                    l,
                    c,
                    &alloc::format!("expected {what}, found end of input"),
                ))
            }
        }
    }

    fn iff(&mut self) -> Result<Formula> {
        let mut lhs = self.implication()?;
        while self.peek_is(&Tok::Iff) {
            self.bump();
            let rhs = self.implication()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.peek_is(&Tok::Implies) {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.conjunction()?;
        while self.peek_is(&Tok::Or) {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while self.peek_is(&Tok::And) {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        if self.peek_is(&Tok::Not) {
            self.bump();
            return Ok(Formula::not(self.unary()?));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Formula> {
        let Some(t) = self.bump() else {
            let (l, c) = self.end_position();
            return Err(syntax(l, c, "unexpected end of input"));
        };
        match t.tok {
            Tok::LParen => {
                let f = self.iff()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Ident(name) if self.peek_is(&Tok::Neq) => {
                self.bump();
                let lhs = variable(&name)?;
                let rt = self.bump();
                let rhs = match rt {
                    Some(Token {
                        tok: Tok::Ident(ref n),
                        ..
                    }) => variable(n)?,
                    Some(t) => return Err(syntax(t.line, t.col, "expected a variable")),
                    None => {
                        let (l, c) = self.end_position();
                        return Err(syntax(l, c, "expected a variable"));
                    }
                };
                if lhs == rhs {
                    return Err(syntax(t.line, t.col, "distinctness must relate x and y"));
                }
                Ok(Formula::Distinct)
            }
            Tok::Ident(name) if name == "true" && !self.peek_is(&Tok::LParen) => {
                Ok(Formula::Const(true))
            }
            Tok::Ident(name) if name == "false" && !self.peek_is(&Tok::LParen) => {
                Ok(Formula::Const(false))
            }
            Tok::Ident(name) => self.atom(name),
            _ => Err(syntax(t.line, t.col, "expected an atom, `!` or `(`")),
        }
    }

    fn atom(&mut self, name: String) -> Result<Formula> {
        self.expect(Tok::LParen, "`(` after predicate name")?;
        let mut args = Vec::new();
        loop {
            match self.bump() {
                Some(Token {
                    tok: Tok::Ident(v), ..
                }) => args.push(variable(&v)?),
                Some(t) => return Err(syntax(t.line, t.col, "expected a variable")),
                None => {
                    let (l, c) = self.end_position();
                    return Err(syntax(l, c, "expected a variable"));
                }
            }
            if self.peek_is(&Tok::Comma) {
                self.bump();
                continue;
            }
            self.expect(Tok::RParen, "`,` or `)`")?;
            break;
        }
        let predicate = self
            .lang
            .lookup(&name)
            .ok_or_else(|| Error::UnknownPredicate(name.clone()))?;
        let arity = self.lang.predicate(predicate).arity;
        let atom = match (arity, args.as_slice()) {
            (Arity::Unary, [v]) => Atom::unary(predicate, *v),
            (Arity::Binary, [a, b]) => Atom::binary(predicate, *a, *b),
            _ => {
                return Err(Error::ArityMismatch {
                    name,
                    expected: arity.count(),
                    found: args.len(),
                });
            }
        };
        Ok(Formula::Atom(atom))
    }
}

fn variable(name: &str) -> Result<Var> {
    match name {
        "x" => Ok(Var::X),
        "y" => Ok(Var::Y),
        _ => Err(Error::UnknownVariable(name.to_string())),
    }
}
