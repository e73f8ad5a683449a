//! String-diagram terms.
//!
//! ```text
//! term   := tensor (';' tensor)*
//! tensor := atom ('*' atom)*
//! atom   := 'id' '[' obj ']' | 'sym' '[' obj ',' obj ']'
//!         | 'tr' '[' obj ']' '(' term ')' | name | '(' term ')'
//! obj    := 'I' | name ('*' name)*
//! ```
//!
//! `;` binds looser than `*`; both associate to the left. Names are
//! `[A-Za-z_][A-Za-z0-9_'.-]*`; `id`, `sym` and `tr` are keywords only
//! when followed by `[`.

use std::fmt;

use crate::error::{Error, Result};

/// An object written as a list of named wires; empty means `I`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ObjRef(pub Vec<String>);

impl fmt::Display for ObjRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            f.write_str("I")
        } else {
            f.write_str(&self.0.join(" * "))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Id(ObjRef),
    Sym(ObjRef, ObjRef),
    Gen(String),
    Seq(Box<Term>, Box<Term>),
    Tensor(Box<Term>, Box<Term>),
    Trace(ObjRef, Box<Term>),
}

impl Term {
    pub fn seq(a: Term, b: Term) -> Term {
        Term::Seq(Box::new(a), Box::new(b))
    }

    pub fn tensor(a: Term, b: Term) -> Term {
        Term::Tensor(Box::new(a), Box::new(b))
    }

    pub fn trace(u: ObjRef, t: Term) -> Term {
        Term::Trace(u, Box::new(t))
    }
}

impl fmt::Display for Term {
    /// Prints with the fewest parentheses that parse back to the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Id(x) => write!(f, "id[{x}]"),
            Term::Sym(x, y) => write!(f, "sym[{x}, {y}]"),
            Term::Gen(name) => f.write_str(name),
            Term::Trace(u, t) => write!(f, "tr[{u}]({t})"),
            Term::Seq(a, b) => match **b {
                Term::Seq(..) => write!(f, "{a} ; ({b})"),
                _ => write!(f, "{a} ; {b}"),
            },
            Term::Tensor(a, b) => {
                match **a {
                    Term::Seq(..) => write!(f, "({a})")?,
                    _ => write!(f, "{a}")?,
                }
                f.write_str(" * ")?;
                match **b {
                    Term::Seq(..) | Term::Tensor(..) => write!(f, "({b})"),
                    _ => write!(f, "{b}"),
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Name(String),
    Semi,
    Star,
    Comma,
    LBracket,
    RBracket,
    LParen,
    RParen,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Name(n) => write!(f, "`{n}`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

/// A token with the 1-based line and column just past its last character,
/// where a hand-written scanner stands after reading it.
#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn is_name_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '\'' | '.' | '-')
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        column += 1;
        let tok = match c {
            '\n' => {
                line += 1;
                column = 1;
                continue;
            }
            c if c.is_whitespace() => continue,
            ';' => Tok::Semi,
            '*' => Tok::Star,
            ',' => Tok::Comma,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            c if is_name_start(c) => {
                let mut name = c.to_string();
                while let Some(&d) = chars.peek().filter(|d| is_name_char(**d)) {
                    name.push(d);
                    chars.next();
                    column += 1;
                }
                Tok::Name(name)
            }
            c => {
                return Err(Error::Parse {
                    line,
                    column,
                    message: format!("unexpected character {c:?}"),
                })
            }
        };
        out.push(Spanned { tok, line, column });
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> Error {
        let s = &self.toks[self.pos];
        Error::Parse {
            line: s.line,
            column: s.column,
            message: format!("expected {expected}, found {}", s.tok),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&tok.to_string()))
        }
    }

    fn name(&mut self) -> Result<String> {
        match self.peek() {
            Tok::Name(_) => match self.bump() {
                Tok::Name(n) => Ok(n),
                _ => unreachable!(),
            },
            _ => Err(self.error("a name")),
        }
    }

    fn term(&mut self) -> Result<Term> {
        let mut t = self.tensor()?;
        while *self.peek() == Tok::Semi {
            self.bump();
            t = Term::seq(t, self.tensor()?);
        }
        Ok(t)
    }

    fn tensor(&mut self) -> Result<Term> {
        let mut t = self.atom()?;
        while *self.peek() == Tok::Star {
            self.bump();
            t = Term::tensor(t, self.atom()?);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Term> {
        match (self.peek().clone(), self.peek2()) {
            (Tok::Name(kw), Tok::LBracket) if matches!(kw.as_str(), "id" | "sym" | "tr") => {
                self.bump();
                self.bump();
                let x = self.obj()?;
                match kw.as_str() {
                    "id" => {
                        self.expect(Tok::RBracket)?;
                        Ok(Term::Id(x))
                    }
                    "sym" => {
                        self.expect(Tok::Comma)?;
                        let y = self.obj()?;
                        self.expect(Tok::RBracket)?;
                        Ok(Term::Sym(x, y))
                    }
                    _ => {
                        self.expect(Tok::RBracket)?;
                        self.expect(Tok::LParen)?;
                        let t = self.term()?;
                        self.expect(Tok::RParen)?;
                        Ok(Term::trace(x, t))
                    }
                }
            }
            (Tok::Name(_), _) => Ok(Term::Gen(self.name()?)),
            (Tok::LParen, _) => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            _ => Err(self.error("a term")),
        }
    }

    fn obj(&mut self) -> Result<ObjRef> {
        let first = self.name()?;
        if first == "I" {
            return Ok(ObjRef(Vec::new()));
        }
        let mut names = vec![first];
        while *self.peek() == Tok::Star {
            self.bump();
            names.push(self.name()?);
        }
        Ok(ObjRef(names))
    }
}

/// Parses a term. Errors carry the line and the column just past the
/// offending token.
pub fn parse_term(text: &str) -> Result<Term> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let t = p.term()?;
    if *p.peek() != Tok::End {
        return Err(p.error("`;`, `*` or end of input"));
    }
    Ok(t)
}
