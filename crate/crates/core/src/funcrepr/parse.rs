//! Recursive-descent parser for the expression DSL.
//!
//! ```text
//! input   := expr (';' annotation)*
//! annot   := 'sing' '(' expr (',' expr)* ')' | 'support' '(' expr ',' expr ')'
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' unary)?
//! primary := number | 'x' | 'pi' | 'e' | 'inf' | '(' expr ')'
//!          | func '(' expr ')'
//!          | 'indicator' '(' expr ',' expr (',' expr)? ')'
//!          | 'cantor' '(' expr (',' expr)? ')'
//!          | 'piecewise' '(' (cond '->' expr ',')* expr ')'
//! cond    := expr rel expr ('&&' expr rel expr)*
//! ```

use std::sync::Arc;

use crate::error::ParseError;
use crate::funcrepr::ast::{BinOp, Clause, Cond, Func, Node, NodeRef, Rel};
use crate::funcrepr::profile::const_value;
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(&'static str),
    End,
}

struct Lexer;

impl Lexer {
    fn tokens(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
        let chars: Vec<char> = text.chars().collect();
        let mut out = vec![];
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let start = i;
            if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    let mut j = i + 1;
                    if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                        j += 1;
                    }
                    if j < chars.len() && chars[j].is_ascii_digit() {
                        i = j;
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let s: String = chars[start..i].iter().collect();
                let v: f64 = s.parse().map_err(|_| ParseError::Syntax {
                    position: start,
                    message: format!("malformed number `{s}`"),
                })?;
                out.push((Tok::Num(v), start));
                continue;
            }
            if c.is_alphabetic() || c == '_' {
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let tok = if s == "π" { Tok::Ident("pi".into()) } else { Tok::Ident(s) };
                out.push((tok, start));
                continue;
            }
            let next = chars.get(i + 1).copied();
            let (sym, len): (&'static str, usize) = match (c, next) {
                ('<', Some('=')) => ("<=", 2),
                ('>', Some('=')) => (">=", 2),
                ('=', Some('=')) => ("==", 2),
                ('!', Some('=')) => ("!=", 2),
                ('&', Some('&')) => ("&&", 2),
                ('-', Some('>')) => ("->", 2),
                ('*', Some('*')) => ("^", 2),
                ('→', _) => ("->", 1),
                ('≤', _) => ("<=", 1),
                ('≥', _) => (">=", 1),
                ('<', _) => ("<", 1),
                ('>', _) => (">", 1),
                ('+', _) => ("+", 1),
                ('-', _) | ('−', _) => ("-", 1),
                ('*', _) | ('·', _) | ('×', _) => ("*", 1),
                ('/', _) => ("/", 1),
                ('^', _) => ("^", 1),
                ('(', _) => ("(", 1),
                (')', _) => (")", 1),
                (',', _) => (",", 1),
                (';', _) => (";", 1),
                _ => {
                    return Err(ParseError::Syntax {
                        position: start,
                        message: format!("unexpected character `{c}`"),
                    })
                }
            };
            out.push((Tok::Sym(sym), start));
            i += len;
        }
        out.push((Tok::End, chars.len()));
        Ok(out)
    }
}

/// Result of parsing DSL text, including trailing annotations.
#[derive(Clone, Debug)]
pub struct Parsed<T: Real> {
    pub root: NodeRef<T>,
    pub singularities: Vec<T>,
    pub support: Option<(T, T)>,
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn at(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(t) if *t == s)
    }

    fn err<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(ParseError::Syntax {
            position: self.at(),
            message: message.into(),
        })
    }

    fn expect(&mut self, s: &str) -> PResult<()> {
        if self.is_sym(s) {
            self.bump();
            Ok(())
        } else {
            let found = self.describe();
            self.err(format!("expected `{s}`, found {found}"))
        }
    }

    fn describe(&self) -> String {
        match self.peek() {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::End => "end of input".into(),
        }
    }

    fn expr<T: Real>(&mut self) -> PResult<NodeRef<T>> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.is_sym("+") {
                BinOp::Add
            } else if self.is_sym("-") {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Node::bin(op, lhs, rhs);
        }
    }

    fn term<T: Real>(&mut self) -> PResult<NodeRef<T>> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.is_sym("*") {
                BinOp::Mul
            } else if self.is_sym("/") {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Node::bin(op, lhs, rhs);
        }
    }

    fn unary<T: Real>(&mut self) -> PResult<NodeRef<T>> {
        if self.is_sym("-") {
            self.bump();
            let inner: NodeRef<T> = self.unary()?;
            return Ok(match inner.as_const() {
                Some(c) => Node::constant(-c),
                None => Arc::new(Node::Neg(inner)),
            });
        }
        if self.is_sym("+") {
            self.bump();
            return self.unary();
        }
        self.power()
    }

    fn power<T: Real>(&mut self) -> PResult<NodeRef<T>> {
        let base = self.primary()?;
        if self.is_sym("^") {
            self.bump();
            let exp = self.unary()?;
            return Ok(Node::bin(BinOp::Pow, base, exp));
        }
        Ok(base)
    }

    fn constant<T: Real>(&mut self, what: &str) -> PResult<T> {
        let pos = self.at();
        let e: NodeRef<T> = self.expr()?;
        const_value(&e).ok_or(ParseError::Syntax {
            position: pos,
            message: format!("{what} must be a constant"),
        })
    }

    fn primary<T: Real>(&mut self) -> PResult<NodeRef<T>> {
        let pos = self.at();
        match self.bump() {
            Tok::Num(v) => Ok(Node::constant(T::lit(v))),
            Tok::Sym("(") => {
                let e = self.expr()?;
                self.expect(")")?;
                Ok(e)
            }
            Tok::Ident(name) => self.ident(name, pos),
            Tok::End => Err(ParseError::Syntax {
                position: pos,
                message: "unexpected end of input".into(),
            }),
            Tok::Sym(s) => Err(ParseError::Syntax {
                position: pos,
                message: format!("unexpected `{s}`"),
            }),
        }
    }

    fn ident<T: Real>(&mut self, name: String, pos: usize) -> PResult<NodeRef<T>> {
        match name.as_str() {
            "x" => return Ok(Node::x()),
            "pi" => return Ok(Node::constant(T::PI())),
            "e" => return Ok(Node::constant(T::E())),
            "inf" => return Ok(Node::constant(T::infinity())),
            _ => {}
        }
        if !self.is_sym("(") {
            return Err(ParseError::UnknownIdentifier { name, position: pos });
        }
        self.bump();
        let node = match name.as_str() {
            "indicator" => {
                let lo = self.constant("indicator bound")?;
                self.expect(",")?;
                let hi = self.constant("indicator bound")?;
                let arg = if self.is_sym(",") {
                    self.bump();
                    self.expr()?
                } else {
                    Node::x()
                };
                Arc::new(Node::Indicator { lo, hi, arg })
            }
            "cantor" => {
                let lpos = self.at();
                let level: T = self.constant("cantor level")?;
                if level < T::zero() || level.fract() != T::zero() || level > T::lit(24.0) {
                    return Err(ParseError::Syntax {
                        position: lpos,
                        message: "cantor level must be an integer in [0, 24]".into(),
                    });
                }
                let arg = if self.is_sym(",") {
                    self.bump();
                    self.expr()?
                } else {
                    Node::x()
                };
                Arc::new(Node::Cantor {
                    level: level.to_u32().unwrap_or(0),
                    arg,
                })
            }
            "piecewise" => self.piecewise()?,
            _ => match Func::from_name(&name) {
                Some(f) => Node::call(f, self.expr()?),
                None => return Err(ParseError::UnknownIdentifier { name, position: pos }),
            },
        };
        self.expect(")")?;
        Ok(node)
    }

    fn relation(&mut self) -> Option<Rel> {
        let r = match self.peek() {
            Tok::Sym("<") => Rel::Lt,
            Tok::Sym("<=") => Rel::Le,
            Tok::Sym(">") => Rel::Gt,
            Tok::Sym(">=") => Rel::Ge,
            Tok::Sym("==") => Rel::Eq,
            Tok::Sym("!=") => Rel::Ne,
            _ => return None,
        };
        self.bump();
        Some(r)
    }

    fn piecewise<T: Real>(&mut self) -> PResult<NodeRef<T>> {
        let mut arms = vec![];
        loop {
            let first = self.expr()?;
            let Some(rel) = self.relation() else {
                // Default branch, must be last.
                if !self.is_sym(")") {
                    return self.err("the default branch of piecewise must come last");
                }
                if arms.is_empty() {
                    return self.err("piecewise needs at least one guarded branch");
                }
                return Ok(Arc::new(Node::Piecewise { arms, otherwise: first }));
            };
            let mut clauses = vec![Clause {
                lhs: first,
                rel,
                rhs: self.expr()?,
            }];
            while self.is_sym("&&") {
                self.bump();
                let lhs = self.expr()?;
                let Some(rel) = self.relation() else {
                    return self.err("expected a comparison");
                };
                clauses.push(Clause {
                    lhs,
                    rel,
                    rhs: self.expr()?,
                });
            }
            self.expect("->")?;
            let body = self.expr()?;
            arms.push((Cond { clauses }, body));
            if self.is_sym(")") {
                // No default given: zero elsewhere.
                return Ok(Arc::new(Node::Piecewise {
                    arms,
                    otherwise: Node::constant(T::zero()),
                }));
            }
            self.expect(",")?;
        }
    }

    fn annotations<T: Real>(&mut self, out: &mut Parsed<T>) -> PResult<()> {
        while self.is_sym(";") {
            self.bump();
            let pos = self.at();
            match self.bump() {
                Tok::Ident(name) if name == "sing" => {
                    self.expect("(")?;
                    loop {
                        out.singularities.push(self.constant("singular point")?);
                        if self.is_sym(",") {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    self.expect(")")?;
                }
                Tok::Ident(name) if name == "support" => {
                    self.expect("(")?;
                    let a = self.constant("support bound")?;
                    self.expect(",")?;
                    let b = self.constant("support bound")?;
                    self.expect(")")?;
                    if !(a < b) {
                        return Err(ParseError::Syntax {
                            position: pos,
                            message: "support needs a < b".into(),
                        });
                    }
                    out.support = Some((a, b));
                }
                Tok::Ident(name) => return Err(ParseError::UnknownIdentifier { name, position: pos }),
                _ => {
                    return Err(ParseError::Syntax {
                        position: pos,
                        message: "expected an annotation after `;`".into(),
                    })
                }
            }
        }
        Ok(())
    }
}

/// Parses DSL text into a tree plus annotations.
pub fn parse<T: Real>(text: &str) -> Result<Parsed<T>, ParseError> {
    let toks = Lexer::tokens(text)?;
    let mut p = Parser { toks, pos: 0 };
    let root = p.expr()?;
    let mut out = Parsed {
        root,
        singularities: vec![],
        support: None,
    };
    p.annotations(&mut out)?;
    if p.peek() != &Tok::End {
        let found = p.describe();
        return p.err(format!("unexpected {found} after expression"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcrepr::eval::eval_node;

    fn ev(s: &str, x: f64) -> f64 {
        eval_node(&parse::<f64>(s).unwrap().root, x)
    }

    #[test]
    fn precedence() {
        assert_eq!(ev("-x^2", 3.0), -9.0);
        assert_eq!(ev("2^-1", 0.0), 0.5);
        assert_eq!(ev("2^3^2", 0.0), 512.0);
        assert_eq!(ev("1 - 2 - 3", 0.0), -4.0);
        assert_eq!(ev("8 / 2 / 2", 0.0), 2.0);
        assert_eq!(ev("2*x+1", 2.0), 5.0);
        assert!((ev("1.5e-3 * e", 0.0) - 1.5e-3 * std::f64::consts::E).abs() < 1e-18);
    }

    #[test]
    fn piecewise_forms() {
        let s = "piecewise(x < 0 -> -1, x >= 0 && x < 1 -> x, 1)";
        assert_eq!(ev(s, -3.0), -1.0);
        assert_eq!(ev(s, 0.5), 0.5);
        assert_eq!(ev(s, 4.0), 1.0);
        assert_eq!(ev("piecewise(x == 0 → 7, x)", 0.0), 7.0);
        assert_eq!(ev("piecewise(x > 1 -> 2)", 0.0), 0.0);
    }

    #[test]
    fn annotations() {
        let p = parse::<f64>("abs(x)^(-0.5); sing(0, 1/2); support(-1, 1)").unwrap();
        assert_eq!(p.singularities, vec![0.0, 0.5]);
        assert_eq!(p.support, Some((-1.0, 1.0)));
    }

    #[test]
    fn errors_carry_positions() {
        match parse::<f64>("exp(x") {
            Err(ParseError::Syntax { position, .. }) => assert_eq!(position, 5),
            other => panic!("{other:?}"),
        }
        match parse::<f64>("1 + foo(x)") {
            Err(ParseError::UnknownIdentifier { name, position }) => {
                assert_eq!(name, "foo");
                assert_eq!(position, 4);
            }
            other => panic!("{other:?}"),
        }
        assert!(parse::<f64>("y").is_err());
        assert!(parse::<f64>("1 +").is_err());
        assert!(parse::<f64>("(1").is_err());
        assert!(parse::<f64>("1 2").is_err());
    }
}
