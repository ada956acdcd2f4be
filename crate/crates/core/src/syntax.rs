//! Concrete syntax for concepts and axioms.
//!
//! ```text
//! Concept := "Top" | "Bottom" | NAME | Concept "and" Concept
//!          | "some" NAME "." Concept | "(" Concept ")"
//! ```
//!
//! `and` is left-associative. The filler of an unparenthesized `some`
//! extends as far to the right as possible.

use crate::concept::{canonicalize, Axiom, Concept, ConceptInclusion, RawConcept};
use crate::error::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Name(String),
    LParen,
    RParen,
    Dot,
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | ':' | '/' | '#' | '\'')
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, Error> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '(' => {
                chars.next();
                out.push((pos, Tok::LParen));
            }
            ')' => {
                chars.next();
                out.push((pos, Tok::RParen));
            }
            '.' => {
                chars.next();
                out.push((pos, Tok::Dot));
            }
            c if is_name_char(c) => {
                let mut name = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if !is_name_char(c) {
                        break;
                    }
                    name.push(c);
                    chars.next();
                }
                out.push((pos, Tok::Name(name)));
            }
            other => {
                return Err(Error::Parse {
                    pos,
                    message: format!("unexpected character {other:?}"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    at: usize,
    len: usize,
}

impl<'a> Parser<'a> {
    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|t| t.0).unwrap_or(self.len)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, Error> {
        Err(Error::Parse {
            pos: self.pos(),
            message: message.into(),
        })
    }

    fn peek_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Name(n)) if n == kw)
    }

    fn conjunction(&mut self) -> Result<RawConcept, Error> {
        let mut parts = vec![self.unit()?];
        while self.peek_keyword("and") {
            self.at += 1;
            parts.push(self.unit()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            RawConcept::And(parts)
        })
    }

    fn unit(&mut self) -> Result<RawConcept, Error> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.at += 1;
                let inner = self.conjunction()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected ')'");
                }
                self.at += 1;
                Ok(inner)
            }
            Some(Tok::Name(n)) => {
                self.at += 1;
                match n.as_str() {
                    "Top" => Ok(RawConcept::Top),
                    "Bottom" => Ok(RawConcept::Bottom),
                    "and" => {
                        self.at -= 1;
                        self.err("unexpected 'and'")
                    }
                    "some" => {
                        let role = match self.peek() {
                            Some(Tok::Name(r)) if !is_keyword(r) => r.clone(),
                            _ => return self.err("expected role name after 'some'"),
                        };
                        self.at += 1;
                        if self.peek() != Some(&Tok::Dot) {
                            return self.err("expected '.' after role name");
                        }
                        self.at += 1;
                        let filler = self.conjunction()?;
                        Ok(RawConcept::Exists(role, Box::new(filler)))
                    }
                    _ => Ok(RawConcept::Atom(n)),
                }
            }
            Some(Tok::RParen) => self.err("unexpected ')'"),
            Some(Tok::Dot) => self.err("unexpected '.'"),
            None => self.err("unexpected end of input"),
        }
    }
}

fn is_keyword(s: &str) -> bool {
    matches!(s, "Top" | "Bottom" | "and" | "some" | "SubClassOf" | "EquivalentTo")
}

/// Parses a concept without normalizing it.
pub fn parse_raw_concept(text: &str) -> Result<RawConcept, Error> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks: &toks,
        at: 0,
        len: text.len(),
    };
    let c = p.conjunction()?;
    if p.at != toks.len() {
        return p.err("trailing input");
    }
    Ok(c)
}

/// Parses a concept into canonical form.
pub fn parse_concept(text: &str) -> Result<Concept, Error> {
    parse_raw_concept(text).map(|raw| canonicalize(&raw))
}

pub fn render_concept(c: &Concept) -> String {
    c.to_string()
}

fn split_keyword<'t>(text: &'t str, kw: &str) -> Option<(&'t str, &'t str, usize)> {
    let mut from = 0;
    while let Some(i) = text[from..].find(kw) {
        let start = from + i;
        let end = start + kw.len();
        let before = text[..start].chars().next_back();
        let after = text[end..].chars().next();
        if before.is_none_or(|c| !is_name_char(c)) && after.is_none_or(|c| !is_name_char(c)) {
            return Some((&text[..start], &text[end..], end));
        }
        from = end;
    }
    None
}

/// Parses `C SubClassOf D` or `C EquivalentTo D`.
pub fn parse_axiom(text: &str) -> Result<Axiom, Error> {
    let shift = |e: Error, by: usize| match e {
        Error::Parse { pos, message } => Error::Parse { pos: pos + by, message },
        other => other,
    };
    for (kw, equiv) in [("SubClassOf", false), ("EquivalentTo", true)] {
        if let Some((l, r, end)) = split_keyword(text, kw) {
            let lhs = parse_concept(l)?;
            let rhs = parse_concept(r).map_err(|e| shift(e, end))?;
            return Ok(if equiv {
                Axiom::EquivalentTo(lhs, rhs)
            } else {
                Axiom::SubClassOf(lhs, rhs)
            });
        }
    }
    Err(Error::Parse {
        pos: 0,
        message: "expected 'SubClassOf' or 'EquivalentTo'".into(),
    })
}

/// Parses a single concept inclusion `C SubClassOf D`.
pub fn parse_inclusion(text: &str) -> Result<ConceptInclusion, Error> {
    match parse_axiom(text)? {
        Axiom::SubClassOf(c, d) => Ok(ConceptInclusion::new(c, d)),
        Axiom::EquivalentTo(..) => Err(Error::Parse {
            pos: 0,
            message: "expected a SubClassOf inclusion".into(),
        }),
    }
}
