//! Recursive-descent parser for the term grammar.
//!
//! ```text
//! term := var | app
//! var  := "x" int
//! app  := name "(" term {"," term} ")"
//! name := "m[" int "," int "]" | "med" int | "min" int | "max" int
//!       | "p" | "pD" | "pN" | "pDp"
//!       | "u[" ident "]" | "succ" | "id" | "const[" int "]" | "plus[" int "]"
//! ```
//!
//! Whitespace is insignificant. Printing a term and reparsing it yields an
//! equal AST.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::{Region, Term, UnaryAtomTable, UnaryOp};
use crate::setfam::MAX_ARITY;

/// A syntax or arity error, with the byte position it was detected at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.pos, self.msg)
    }
}

impl core::error::Error for ParseError {}

/// Parses a term that uses only built-in atoms.
pub fn parse(text: &str) -> Result<Term, ParseError> {
    parse_with(text, &UnaryAtomTable::new())
}

/// Parses a term whose named atoms must resolve in `atoms`.
pub fn parse_with(text: &str, atoms: &UnaryAtomTable) -> Result<Term, ParseError> {
    let mut p = Parser {
        input: text.as_bytes(),
        pos: 0,
        atoms,
    };
    p.skip_ws();
    let term = p.term()?;
    p.skip_ws();
    if p.pos < p.input.len() {
        return Err(p.err("trailing input after term"));
    }
    Ok(term)
}

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
    atoms: &'a UnaryAtomTable,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.input.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected `{}`", c as char)))
        }
    }

    fn letters(&mut self) -> &'a str {
        let start = self.pos;
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        core::str::from_utf8(&self.input[start..self.pos]).unwrap()
    }

    fn int(&mut self) -> Result<u64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a number"));
        }
        core::str::from_utf8(&self.input[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| ParseError {
                pos: start,
                msg: String::from("number too large"),
            })
    }

    fn ident(&mut self) -> Result<&'a str, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.input.len()
            && (self.input[self.pos].is_ascii_alphanumeric() || self.input[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected an identifier"));
        }
        Ok(core::str::from_utf8(&self.input[start..self.pos]).unwrap())
    }

    fn args(&mut self) -> Result<Vec<Term>, ParseError> {
        self.expect(b'(')?;
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            out.push(self.term()?);
            self.skip_ws();
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b')') => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return Err(self.err("expected `,` or `)`")),
            }
        }
    }

    fn exactly(
        &mut self,
        name: &str,
        want: usize,
        args: Vec<Term>,
    ) -> Result<Vec<Term>, ParseError> {
        if args.len() != want {
            Err(self.err(format!(
                "{name} takes {want} argument(s), got {}",
                args.len()
            )))
        } else {
            Ok(args)
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        self.skip_ws();
        let name_pos = self.pos;
        let name = self.letters();
        match name {
            "" => Err(self.err("expected a term")),
            "x" => {
                let i = self.int()? as usize;
                if !(1..=MAX_ARITY).contains(&i) {
                    return Err(ParseError {
                        pos: name_pos,
                        msg: format!("variable index must lie in 1..={MAX_ARITY}"),
                    });
                }
                Ok(Term::Var(i))
            }
            "m" => {
                self.expect(b'[')?;
                let n = self.int()? as usize;
                self.expect(b',')?;
                let k = self.int()? as usize;
                self.expect(b']')?;
                if n < 1 || k < 1 || k > n {
                    return Err(ParseError {
                        pos: name_pos,
                        msg: format!("m[{n},{k}] needs 1 <= k <= n"),
                    });
                }
                let args = self.args()?;
                let args = self.exactly("m[n,k]", n, args)?;
                Ok(Term::OrderStat { k, args })
            }
            "med" | "min" | "max" => {
                let n = self.int()? as usize;
                if n < 1 {
                    return Err(ParseError {
                        pos: name_pos,
                        msg: String::from("arity must be positive"),
                    });
                }
                if name == "med" && n.is_multiple_of(2) {
                    return Err(ParseError {
                        pos: name_pos,
                        msg: format!("med{n} needs an odd arity"),
                    });
                }
                let args = self.args()?;
                let args = self.exactly(name, n, args)?;
                let k = match name {
                    "med" => n.div_ceil(2),
                    "min" => 1,
                    _ => n,
                };
                Ok(Term::OrderStat { k, args })
            }
            "p" | "pD" | "pN" | "pDp" => {
                let args = self.args()?;
                let mut args = self.exactly(name, 2, args)?;
                let b = args.pop().unwrap();
                let a = args.pop().unwrap();
                Ok(match name {
                    "p" => Term::pairing(a, b),
                    "pD" => Term::region_pairing(Region::Delta, a, b),
                    "pN" => Term::region_pairing(Region::Nabla, a, b),
                    _ => Term::region_pairing(Region::DeltaPrime, a, b),
                })
            }
            "succ" | "id" => {
                let args = self.args()?;
                let mut args = self.exactly(name, 1, args)?;
                let op = if name == "succ" {
                    UnaryOp::Succ
                } else {
                    UnaryOp::Ident
                };
                Ok(Term::unary(op, args.pop().unwrap()))
            }
            "const" | "plus" => {
                self.expect(b'[')?;
                let c = self.int()?;
                self.expect(b']')?;
                let args = self.args()?;
                let mut args = self.exactly(name, 1, args)?;
                let op = if name == "const" {
                    UnaryOp::Const(c)
                } else {
                    UnaryOp::Plus(c)
                };
                Ok(Term::unary(op, args.pop().unwrap()))
            }
            "u" => {
                self.expect(b'[')?;
                let ident_pos = self.pos;
                let ident = self.ident()?;
                if !self.atoms.contains(ident) {
                    return Err(ParseError {
                        pos: ident_pos,
                        msg: format!("unknown atom name `{ident}`"),
                    });
                }
                let op = UnaryOp::Named(String::from(ident));
                self.expect(b']')?;
                let args = self.args()?;
                let mut args = self.exactly("u", 1, args)?;
                Ok(Term::unary(op, args.pop().unwrap()))
            }
            other => Err(ParseError {
                pos: name_pos,
                msg: format!("unknown name `{other}`"),
            }),
        }
    }
}
