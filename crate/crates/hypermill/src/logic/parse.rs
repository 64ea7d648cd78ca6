//! Concrete syntax for formulas and sequents.
//!
//! ```text
//! F  ::= F1 ("-o" F)?                  right-associative implication
//! F1 ::= F2 ("*" F2)*                  left-associative tensor
//! F2 ::= "!" F2 | "ex" VAR "." F | "fa" VAR "." F | ATOM | "(" F ")"
//! ATOM ::= IDENT ("(" IDENT ("," IDENT)* ")")?
//! ```
//!
//! Binders take maximal scope. Identifiers are alphanumeric (digits alone
//! are fine: selectors like `1`, `2` double as variables). The variables
//! `s`, `t`, `x_` and `xi1, xi2, …` are reserved and cannot be bound.

use std::fmt;

use thiserror::Error;

use crate::symbol::Sym;

use super::{Formula, Sequent};

#[derive(Debug, Error)]
#[error("column {col}: {msg}")]
pub struct FormulaParseError {
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Star,
    Lolli,
    Bang,
    LParen,
    RParen,
    Comma,
    Dot,
    Turnstile,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Star => write!(f, "`*`"),
            Tok::Lolli => write!(f, "`-o`"),
            Tok::Bang => write!(f, "`!`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Dot => write!(f, "`.`"),
            Tok::Turnstile => write!(f, "`|-`"),
        }
    }
}

fn lex(input: &str) -> Result<Vec<(usize, Tok)>, FormulaParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = input.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '*' => {
                out.push((col, Tok::Star));
                i += 1;
            }
            '!' => {
                out.push((col, Tok::Bang));
                i += 1;
            }
            '(' => {
                out.push((col, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((col, Tok::RParen));
                i += 1;
            }
            ',' => {
                out.push((col, Tok::Comma));
                i += 1;
            }
            '.' => {
                out.push((col, Tok::Dot));
                i += 1;
            }
            '-' => {
                if chars.get(i + 1) == Some(&'o') {
                    out.push((col, Tok::Lolli));
                    i += 2;
                } else {
                    return Err(FormulaParseError {
                        col,
                        msg: "expected `-o`".into(),
                    });
                }
            }
            '|' => {
                if chars.get(i + 1) == Some(&'-') {
                    out.push((col, Tok::Turnstile));
                    i += 2;
                } else {
                    return Err(FormulaParseError {
                        col,
                        msg: "expected `|-`".into(),
                    });
                }
            }
            c if crate::hypergraph::is_ident_char(c) && c != '.' && c != '\'' => {
                let start = i;
                while i < chars.len()
                    && crate::hypergraph::is_ident_char(chars[i])
                    && chars[i] != '.'
                {
                    i += 1;
                }
                out.push((col, Tok::Ident(chars[start..i].iter().collect())));
            }
            other => {
                return Err(FormulaParseError {
                    col,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(out)
}

fn is_reserved_binder(name: &str) -> bool {
    name == "s"
        || name == "t"
        || name == crate::hypergraph::NODE_VARIABLE
        || (name.starts_with("xi") && name[2..].chars().all(|c| c.is_ascii_digit()) && name.len() > 2)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn col(&self) -> usize {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|(c, _)| *c)
            .unwrap_or(1)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, tok: Tok) -> Result<(), FormulaParseError> {
        let col = self.col();
        match self.bump() {
            Some(t) if t == tok => Ok(()),
            Some(t) => Err(FormulaParseError {
                col,
                msg: format!("expected {tok}, found {t}"),
            }),
            None => Err(FormulaParseError {
                col,
                msg: format!("expected {tok}, found end of input"),
            }),
        }
    }

    fn ident(&mut self) -> Result<Sym, FormulaParseError> {
        let col = self.col();
        match self.bump() {
            Some(Tok::Ident(s)) => Ok(Sym::new(&s)),
            other => Err(FormulaParseError {
                col,
                msg: format!(
                    "expected an identifier, found {}",
                    other.map(|t| t.to_string()).unwrap_or("end of input".into())
                ),
            }),
        }
    }

    fn formula(&mut self) -> Result<Formula, FormulaParseError> {
        let left = self.tensor_chain()?;
        if self.peek() == Some(&Tok::Lolli) {
            self.bump();
            let right = self.formula()?;
            Ok(Formula::lolli(left, right))
        } else {
            Ok(left)
        }
    }

    fn tensor_chain(&mut self) -> Result<Formula, FormulaParseError> {
        let mut acc = self.unit()?;
        while self.peek() == Some(&Tok::Star) {
            self.bump();
            let next = self.unit()?;
            acc = Formula::tensor(acc, next);
        }
        Ok(acc)
    }

    fn unit(&mut self) -> Result<Formula, FormulaParseError> {
        let col = self.col();
        match self.peek() {
            Some(Tok::Bang) => {
                self.bump();
                Ok(Formula::bang(self.unit()?))
            }
            Some(Tok::LParen) => {
                self.bump();
                let inner = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Some(Tok::Ident(name)) if name == "ex" || name == "fa" => {
                let is_exists = name == "ex";
                self.bump();
                let var_col = self.col();
                let var = self.ident()?;
                if is_reserved_binder(var.as_str()) {
                    return Err(FormulaParseError {
                        col: var_col,
                        msg: format!("variable `{var}` is reserved and cannot be bound"),
                    });
                }
                self.expect(Tok::Dot)?;
                let body = self.formula()?;
                Ok(if is_exists {
                    Formula::exists(var, body)
                } else {
                    Formula::forall(var, body)
                })
            }
            Some(Tok::Ident(_)) => {
                let pred = self.ident()?;
                let mut args = Vec::new();
                if self.peek() == Some(&Tok::LParen) {
                    self.bump();
                    loop {
                        args.push(self.ident()?);
                        match self.bump() {
                            Some(Tok::Comma) => continue,
                            Some(Tok::RParen) => break,
                            other => {
                                return Err(FormulaParseError {
                                    col: self.col(),
                                    msg: format!(
                                        "expected `,` or `)`, found {}",
                                        other
                                            .map(|t| t.to_string())
                                            .unwrap_or("end of input".into())
                                    ),
                                })
                            }
                        }
                    }
                }
                Ok(Formula::Atom(pred, args))
            }
            other => Err(FormulaParseError {
                col,
                msg: format!(
                    "expected a formula, found {}",
                    other.map(|t| t.to_string()).unwrap_or("end of input".into())
                ),
            }),
        }
    }
}

pub fn parse_formula(input: &str) -> Result<Formula, FormulaParseError> {
    let mut p = Parser {
        toks: lex(input)?,
        pos: 0,
    };
    let f = p.formula()?;
    if p.peek().is_some() {
        return Err(FormulaParseError {
            col: p.col(),
            msg: format!("trailing input: {}", p.peek().unwrap()),
        });
    }
    Ok(f)
}

/// `.sq` syntax: `F ("," F)* "|-" F` or `"|-" F`.
pub fn parse_sequent(input: &str) -> Result<Sequent, FormulaParseError> {
    let mut p = Parser {
        toks: lex(input)?,
        pos: 0,
    };
    let mut antecedent = Vec::new();
    if p.peek() == Some(&Tok::Turnstile) {
        p.bump();
    } else {
        loop {
            antecedent.push(p.formula()?);
            match p.bump() {
                Some(Tok::Comma) => continue,
                Some(Tok::Turnstile) => break,
                other => {
                    return Err(FormulaParseError {
                        col: p.col(),
                        msg: format!(
                            "expected `,` or `|-`, found {}",
                            other.map(|t| t.to_string()).unwrap_or("end of input".into())
                        ),
                    })
                }
            }
        }
    }
    let succedent = p.formula()?;
    if p.peek().is_some() {
        return Err(FormulaParseError {
            col: p.col(),
            msg: format!("trailing input: {}", p.peek().unwrap()),
        });
    }
    Ok(Sequent::new(antecedent, succedent))
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Level {
    Lolli,
    Tensor,
    Unit,
}

fn render_at(f: &Formula, level: Level, out: &mut String) {
    let mine = match f {
        Formula::Lolli(..) => Level::Lolli,
        Formula::Tensor(..) => Level::Tensor,
        _ => Level::Unit,
    };
    // binders and bang reach maximally right, so they need parens whenever
    // something follows at a tighter level
    let needs_paren = match f {
        Formula::Lolli(..) => level > Level::Lolli,
        Formula::Tensor(..) => level > Level::Tensor,
        Formula::Exists(..) | Formula::Forall(..) => level > Level::Lolli,
        _ => false,
    };
    let _ = mine;
    if needs_paren {
        out.push('(');
    }
    match f {
        Formula::Atom(p, args) => {
            out.push_str(p.as_str());
            if !args.is_empty() {
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push_str(a.as_str());
                }
                out.push(')');
            }
        }
        Formula::Tensor(a, b) => {
            render_at(a, Level::Tensor, out);
            out.push_str(" * ");
            render_at(b, Level::Unit, out);
        }
        Formula::Lolli(a, b) => {
            render_at(a, Level::Tensor, out);
            out.push_str(" -o ");
            render_at(b, Level::Lolli, out);
        }
        Formula::Exists(x, body) => {
            out.push_str("ex ");
            out.push_str(x.as_str());
            out.push_str(". ");
            render_at(body, Level::Lolli, out);
        }
        Formula::Forall(x, body) => {
            out.push_str("fa ");
            out.push_str(x.as_str());
            out.push_str(". ");
            render_at(body, Level::Lolli, out);
        }
        Formula::Bang(a) => {
            out.push('!');
            match **a {
                Formula::Atom(..) | Formula::Bang(..) => render_at(a, Level::Unit, out),
                _ => {
                    out.push('(');
                    render_at(a, Level::Lolli, out);
                    out.push(')');
                }
            }
        }
    }
    if needs_paren {
        out.push(')');
    }
}

pub fn render_formula(f: &Formula) -> String {
    let mut out = String::new();
    render_at(f, Level::Lolli, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rt(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn lexicon_entry_shape() {
        let f = rt("fa x. (p(x,s) -o q(x,t))");
        match &f {
            Formula::Forall(x, body) => {
                assert_eq!(x.as_str(), "x");
                assert!(matches!(**body, Formula::Lolli(..)));
            }
            _ => panic!("expected a universal"),
        }
        // maximal binder scope: the parens are redundant
        assert_eq!(f, rt("fa x. p(x,s) -o q(x,t)"));
    }

    #[test]
    fn precedence_tensor_binds_tighter() {
        let f = rt("p * q -o r");
        assert!(matches!(f, Formula::Lolli(ref a, _) if matches!(**a, Formula::Tensor(..))));
    }

    #[test]
    fn lolli_right_associative() {
        assert_eq!(rt("p -o q -o r"), rt("p -o (q -o r)"));
        assert_ne!(rt("p -o q -o r"), rt("(p -o q) -o r"));
    }

    #[test]
    fn tensor_left_associative() {
        assert_eq!(rt("p * q * r"), Formula::tensor(Formula::tensor(rt("p"), rt("q")), rt("r")));
    }

    #[test]
    fn bang_binds_tightest() {
        let f = rt("!p * q");
        assert!(matches!(f, Formula::Tensor(ref a, _) if matches!(**a, Formula::Bang(..))));
    }

    #[test]
    fn numeric_variables() {
        // selector names double as variables
        let f = rt("q(2,3) -o p(1,1) -o p(2,3)");
        assert!(matches!(f, Formula::Lolli(..)));
    }

    #[test]
    fn reserved_binders_rejected() {
        assert!(parse_formula("fa s. p(s)").is_err());
        assert!(parse_formula("ex t. p(t)").is_err());
        assert!(parse_formula("fa x_. p(x_)").is_err());
        assert!(parse_formula("ex xi1. p(xi1)").is_err());
        // but xi/x as plain prefixes are fine
        assert!(parse_formula("fa xige. p(xige)").is_ok());
    }

    #[test]
    fn error_has_position() {
        let e = parse_formula("p(x,) -o q").unwrap_err();
        assert!(e.col > 0);
    }

    #[test]
    fn round_trip_corpus() {
        let corpus = [
            "p(x0,x1)",
            "fa x. (p(x,s) -o q(x,t))",
            "q(2,3) -o p(1,1) -o p(2,3)",
            "p(s,t) * r * r * r",
            "!(p -o q) * !r -o ex u. s1(u)",
            "fa v3. fa v4. ((ex v1. ex v2. c(v1,v3,v4) * d(v3,v4)) -o (ex u2. a(u2,v3) * b(u2,v4)))",
            "!p",
            "!(p * q)",
            "ex x. (p(x) * q(x)) -o r",
        ];
        for s in corpus {
            let f = rt(s);
            let again = rt(&render_formula(&f));
            assert!(f.alpha_eq(&again), "round trip failed for {s}");
            assert_eq!(f, again, "round trip not syntactic for {s}");
        }
    }

    #[test]
    fn sequent_syntax() {
        let s = parse_sequent("p(x0,x1), fa x. (p(x,x1) -o q(x,x2)) |- q(x0,x2)").unwrap();
        assert_eq!(s.antecedent().len(), 2);
        let empty = parse_sequent("|- p -o p").unwrap();
        assert!(empty.antecedent().is_empty());
        assert!(parse_sequent("p |- ").is_err());
        assert!(parse_sequent("p, |- q").is_err());
    }

    #[test]
    fn sequent_render_reparses() {
        let s = parse_sequent("r, r, p(s,t) |- p(s,t) * r * r").unwrap();
        let again = parse_sequent(&s.render()).unwrap();
        assert_eq!(s, again);
    }
}
