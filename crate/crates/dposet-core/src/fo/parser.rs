//! Recursive-descent parser for the formula language.
//!
//! Grammar:
//! ```text
//! formula := quant | iff
//! quant   := ("forall" | "exists") IDENT "." formula
//! iff     := imp {"<->" imp}
//! imp     := or ["->" imp]
//! or      := and {"|" and}
//! and     := unary {"&" unary}
//! unary   := "~" unary | "(" formula ")" | quant | atom
//! atom    := term ("<=" | "=" | "<") term
//! term    := IDENT | CONST
//! ```
//! `<` desugars to `<= & ~=`. Constants are the named-family vocabulary or a
//! raw `#<CanonCode>`; binding a name that is already bound is rejected.
//! A quantifier in unary position extends as far right as possible, so
//! `~exists y. y < x` negates the whole quantified formula.

use super::{Constant, FoError, Formula, Term};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Forall,
    Exists,
    Ident(String),
    Const(Constant),
    Dot,
    LParen,
    RParen,
    Tilde,
    Amp,
    Pipe,
    Arrow,
    IffOp,
    LeqOp,
    LtOp,
    EqOp,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn is_word_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_' || b == b':' || b == b'#'
}

/// True for spellings that can only be meant as constants, so a resolution
/// failure is reported as `UnknownConstant` rather than read as a variable.
fn looks_like_constant(word: &str) -> bool {
    if word.starts_with('#') || word.starts_with("male:") || word == "Larrow" {
        return true;
    }
    let mut chars = word.chars();
    matches!(chars.next(), Some('E' | 'F' | 'I' | 'O' | 'L'))
        && !word[1..].is_empty()
        && word[1..].bytes().all(|b| b.is_ascii_digit())
}

fn lex(text: &str) -> Result<Vec<Spanned>, FoError> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    let mut line = 1;
    let mut col = 1;
    while i < bytes.len() {
        let (l, c) = (line, col);
        let b = bytes[i];
        let step = |i: &mut usize, n: usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        match b {
            b'\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            b' ' | b'\t' | b'\r' => step(&mut i, 1, &mut col),
            b'.' => {
                out.push(Spanned { tok: Tok::Dot, line: l, col: c });
                step(&mut i, 1, &mut col);
            }
            b'(' => {
                out.push(Spanned { tok: Tok::LParen, line: l, col: c });
                step(&mut i, 1, &mut col);
            }
            b')' => {
                out.push(Spanned { tok: Tok::RParen, line: l, col: c });
                step(&mut i, 1, &mut col);
            }
            b'~' => {
                out.push(Spanned { tok: Tok::Tilde, line: l, col: c });
                step(&mut i, 1, &mut col);
            }
            b'&' => {
                out.push(Spanned { tok: Tok::Amp, line: l, col: c });
                step(&mut i, 1, &mut col);
            }
            b'|' => {
                out.push(Spanned { tok: Tok::Pipe, line: l, col: c });
                step(&mut i, 1, &mut col);
            }
            b'=' => {
                out.push(Spanned { tok: Tok::EqOp, line: l, col: c });
                step(&mut i, 1, &mut col);
            }
            b'-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    out.push(Spanned { tok: Tok::Arrow, line: l, col: c });
                    step(&mut i, 2, &mut col);
                } else {
                    return Err(FoError::Syntax {
                        line: l,
                        col: c,
                        msg: "expected `->`".into(),
                    });
                }
            }
            b'<' => {
                if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') {
                    out.push(Spanned { tok: Tok::IffOp, line: l, col: c });
                    step(&mut i, 3, &mut col);
                } else if bytes.get(i + 1) == Some(&b'=') {
                    out.push(Spanned { tok: Tok::LeqOp, line: l, col: c });
                    step(&mut i, 2, &mut col);
                } else {
                    out.push(Spanned { tok: Tok::LtOp, line: l, col: c });
                    step(&mut i, 1, &mut col);
                }
            }
            _ if is_word_byte(b) => {
                let start = i;
                while i < bytes.len() && is_word_byte(bytes[i]) {
                    i += 1;
                }
                let word = &text[start..i];
                col += i - start;
                let tok = match word {
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    _ => match Constant::resolve(word) {
                        Some(k) => Tok::Const(k),
                        None if looks_like_constant(word) => {
                            return Err(FoError::UnknownConstant {
                                line: l,
                                col: c,
                                name: word.to_string(),
                            })
                        }
                        None => Tok::Ident(word.to_string()),
                    },
                };
                out.push(Spanned { tok, line: l, col: c });
            }
            _ => {
                return Err(FoError::Syntax {
                    line: l,
                    col: c,
                    msg: format!("unexpected character `{}`", b as char),
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    scope: Vec<String>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        match self.toks.get(self.pos) {
            Some(s) => (s.line, s.col),
            None => self
                .toks
                .last()
                .map(|s| (s.line, s.col + 1))
                .unwrap_or((1, 1)),
        }
    }

    fn err(&self, msg: impl Into<String>) -> FoError {
        let (line, col) = self.here();
        FoError::Syntax {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn eat(&mut self, want: &Tok, what: &str) -> Result<(), FoError> {
        if self.peek() == Some(want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn formula(&mut self) -> Result<Formula, FoError> {
        match self.peek() {
            Some(Tok::Forall) | Some(Tok::Exists) => self.quant(),
            _ => self.iff(),
        }
    }

    fn quant(&mut self) -> Result<Formula, FoError> {
        let is_forall = matches!(self.peek(), Some(Tok::Forall));
        let (line, col) = self.here();
        self.pos += 1;
        let var = match self.peek().cloned() {
            Some(Tok::Ident(v)) => {
                self.pos += 1;
                v
            }
            Some(Tok::Const(c)) => {
                return Err(self.err(format!("cannot bind constant `{}`", c.text)))
            }
            _ => return Err(self.err("expected a variable name after the quantifier")),
        };
        if self.scope.contains(&var) {
            return Err(FoError::Shadowed { line, col, var });
        }
        self.eat(&Tok::Dot, "`.` after the quantified variable")?;
        self.scope.push(var.clone());
        let body = self.formula()?;
        self.scope.pop();
        Ok(if is_forall {
            Formula::forall(var, body)
        } else {
            Formula::exists(var, body)
        })
    }

    fn iff(&mut self) -> Result<Formula, FoError> {
        let mut lhs = self.imp()?;
        while self.peek() == Some(&Tok::IffOp) {
            self.pos += 1;
            let rhs = self.imp()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, FoError> {
        let lhs = self.or()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let rhs = self.imp()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, FoError> {
        let mut lhs = self.and()?;
        while self.peek() == Some(&Tok::Pipe) {
            self.pos += 1;
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, FoError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::Amp) {
            self.pos += 1;
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, FoError> {
        match self.peek() {
            Some(Tok::Tilde) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.formula()?;
                self.eat(&Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Some(Tok::Forall) | Some(Tok::Exists) => self.quant(),
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, FoError> {
        let lhs = self.term()?;
        let op = self.peek().cloned();
        match op {
            Some(Tok::LeqOp) => {
                self.pos += 1;
                Ok(Formula::leq(lhs, self.term()?))
            }
            Some(Tok::EqOp) => {
                self.pos += 1;
                Ok(Formula::eq(lhs, self.term()?))
            }
            Some(Tok::LtOp) => {
                self.pos += 1;
                Ok(Formula::lt(lhs, self.term()?))
            }
            _ => Err(self.err("expected `<=`, `=`, or `<`")),
        }
    }

    fn term(&mut self) -> Result<Term, FoError> {
        match self.peek().cloned() {
            Some(Tok::Ident(v)) => {
                self.pos += 1;
                Ok(Term::Var(v))
            }
            Some(Tok::Const(c)) => {
                self.pos += 1;
                Ok(Term::Const(c))
            }
            _ => Err(self.err("expected a term")),
        }
    }
}

/// Parse a formula from text.
pub fn parse(text: &str) -> Result<Formula, FoError> {
    let toks = lex(text)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        scope: Vec::new(),
    };
    let f = parser.formula()?;
    if parser.pos != parser.toks.len() {
        return Err(parser.err("trailing tokens after the formula"));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantifier_scopes_the_rest() {
        let f = parse("forall y. y <= x -> y = x").unwrap();
        match f {
            Formula::Forall(v, body) => {
                assert_eq!(v, "y");
                assert!(matches!(*body, Formula::Implies(..)));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_error_carries_position() {
        let err = parse("x << y").unwrap_err();
        match err {
            FoError::Syntax { line: 1, col, .. } => assert_eq!(col, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("x <= "), Err(FoError::Syntax { .. })));
        assert!(matches!(parse("forall E1. x = x"), Err(FoError::Syntax { .. })));
    }

    #[test]
    fn unknown_constants_are_flagged() {
        assert!(matches!(
            parse("x <= O2"),
            Err(FoError::UnknownConstant { .. })
        ));
        assert!(matches!(
            parse("x <= #2:0100"),
            Err(FoError::UnknownConstant { .. })
        ));
        // not constant-shaped: a variable
        assert!(parse("x <= yL1").is_ok());
    }

    #[test]
    fn shadowing_is_rejected() {
        assert!(matches!(
            parse("forall x. exists x. x = x"),
            Err(FoError::Shadowed { .. })
        ));
        assert!(parse("(forall x. x = x) & (forall x. x = x)").is_ok());
    }

    #[test]
    fn lt_desugars() {
        let f = parse("x < y").unwrap();
        let expect = Formula::and(
            Formula::leq(Term::Var("x".into()), Term::Var("y".into())),
            Formula::not(Formula::eq(Term::Var("x".into()), Term::Var("y".into()))),
        );
        assert_eq!(f, expect);
    }

    #[test]
    fn precedence_shape() {
        // `a -> b -> c` is right associative
        let f = parse("x = x -> x = x -> x = x").unwrap();
        match f {
            Formula::Implies(_, rhs) => assert!(matches!(*rhs, Formula::Implies(..))),
            other => panic!("unexpected {other:?}"),
        }
        // `&` binds tighter than `|`, `|` tighter than `->`
        let f = parse("x = x | x = x & x = x -> x = x").unwrap();
        match f {
            Formula::Implies(lhs, _) => assert!(matches!(*lhs, Formula::Or(..))),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn print_parse_round_trip() {
        let samples = [
            "forall y. y <= x -> y = x | y = E1 | y = L1",
            "exists z. (z < x & ~z = E2) <-> x = x",
            "~(x <= y) & (y <= x | x = O3)",
            "forall a. exists b. a <= b -> (b <= a <-> a = b)",
            "x = #1:1 -> x = L1",
            "male:4:L <= x & Larrow <= x",
        ];
        for s in samples {
            let f = parse(s).unwrap();
            let printed = f.to_string();
            assert_eq!(parse(&printed).unwrap(), f, "round-trip failed for `{s}`");
        }
    }
}
