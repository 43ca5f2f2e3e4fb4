use crate::error::{Error, Result};
use crate::syntax::{SourceTerm, Var};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Fun,
    /// `pi` with an optional glued index, as in `pi2`.
    Pi(Option<usize>),
    Int(usize),
    LParen,
    RParen,
    Lt,
    Gt,
    Comma,
    Arrow,
    Eof,
}

struct Lexed {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Lexed>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, col, msg: String| Error::Parse { line, col, msg };
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let adv = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            adv(1, &mut i, &mut col);
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '<' => Tok::Lt,
            '>' => Tok::Gt,
            ',' => Tok::Comma,
            '-' if chars.get(i + 1) == Some(&'>') => {
                adv(1, &mut i, &mut col);
                Tok::Arrow
            }
            _ if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    adv(1, &mut i, &mut col);
                }
                let s: String = chars[start..i].iter().collect();
                let n = s.parse().map_err(|_| err(l0, c0, format!("integer out of range: {s}")))?;
                out.push(Lexed { tok: Tok::Int(n), line: l0, col: c0 });
                continue;
            }
            _ if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                    adv(1, &mut i, &mut col);
                }
                let s: String = chars[start..i].iter().collect();
                let tok = if s == "fun" {
                    Tok::Fun
                } else if s == "pi" {
                    Tok::Pi(None)
                } else if let Some(d) = s.strip_prefix("pi").filter(|d| d.chars().all(|c| c.is_ascii_digit())) {
                    Tok::Pi(Some(d.parse().map_err(|_| err(l0, c0, format!("bad projection {s}")))?))
                } else {
                    Tok::Ident(s)
                };
                out.push(Lexed { tok, line: l0, col: c0 });
                continue;
            }
            _ => return Err(err(l0, c0, format!("unexpected character {c:?}"))),
        };
        adv(1, &mut i, &mut col);
        out.push(Lexed { tok, line: l0, col: c0 });
    }
    out.push(Lexed { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Lexed>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T> {
        let l = &self.toks[self.pos];
        Err(Error::Parse { line: l.line, col: l.col, msg: msg.into() })
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.fail(format!("expected {what}, found {:?}", self.peek()))
        }
    }

    fn term(&mut self) -> Result<SourceTerm> {
        if *self.peek() == Tok::Fun {
            return self.fun();
        }
        self.app()
    }

    fn fun(&mut self) -> Result<SourceTerm> {
        self.expect(Tok::Fun, "fun")?;
        self.expect(Tok::LParen, "(")?;
        let mut params: Vec<Var> = Vec::new();
        if *self.peek() != Tok::RParen {
            loop {
                match self.bump() {
                    Tok::Ident(s) => {
                        let v = Var::new(&s);
                        if params.contains(&v) {
                            self.pos -= 1;
                            return self.fail(format!("duplicate parameter {s}"));
                        }
                        params.push(v);
                    }
                    other => {
                        self.pos -= 1;
                        return self.fail(format!("expected parameter name, found {other:?}"));
                    }
                }
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RParen, ")")?;
        self.expect(Tok::Arrow, "->")?;
        let body = self.term()?;
        Ok(SourceTerm::abs(params, body))
    }

    fn starts_unary(&self) -> bool {
        matches!(self.peek(), Tok::Ident(_) | Tok::Pi(_) | Tok::Lt | Tok::LParen)
    }

    fn app(&mut self) -> Result<SourceTerm> {
        let mut t = self.unary()?;
        loop {
            if self.starts_unary() {
                let a = self.unary()?;
                t = SourceTerm::app(t, a);
            } else if *self.peek() == Tok::Fun {
                let a = self.fun()?;
                return Ok(SourceTerm::app(t, a));
            } else {
                return Ok(t);
            }
        }
    }

    fn unary(&mut self) -> Result<SourceTerm> {
        if let Tok::Pi(idx) = self.peek().clone() {
            self.bump();
            let i = match idx {
                Some(i) => i,
                None => match self.bump() {
                    Tok::Int(i) => i,
                    _ => {
                        self.pos -= 1;
                        return self.fail("expected projection index");
                    }
                },
            };
            if i == 0 {
                return self.fail("projection indices start at 1");
            }
            let u = self.unary()?;
            return Ok(SourceTerm::proj(i, u));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<SourceTerm> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(SourceTerm::var(&s))
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen, ")")?;
                Ok(t)
            }
            Tok::Lt => {
                self.bump();
                let mut items = Vec::new();
                if *self.peek() != Tok::Gt {
                    loop {
                        items.push(self.term()?);
                        if *self.peek() == Tok::Comma {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                }
                self.expect(Tok::Gt, ">")?;
                Ok(SourceTerm::tuple(items))
            }
            other => self.fail(format!("expected a term, found {other:?}")),
        }
    }
}

/// Parses one source term. `--` starts a comment running to the end of the line.
pub fn parse(text: &str) -> Result<SourceTerm> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let t = p.term()?;
    if *p.peek() != Tok::Eof {
        return p.fail(format!("unexpected {:?} after term", p.peek()));
    }
    Ok(t)
}
