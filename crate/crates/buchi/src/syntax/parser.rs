//! Hand-rolled lexer and recursive-descent parser for the ASCII formula
//! grammar.
//!
//! Precedence: `!` > `&` > `|` > `->` (right-assoc) > `<->`; quantifiers
//! scope to the right as far as possible. Sugar is expanded here: a
//! numeral k becomes S^k(0), `t <= s` becomes `E z. t + z = s` with a
//! fresh z, `t < s` becomes `S(t) <= s`, and `k*t` the left-nested sum of
//! k copies of t.

use std::collections::HashSet;
use std::fmt;

use super::{Formula, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ParseError {}

const MAX_NUMERAL: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(u64),
    Succ,
    Vp,
    Exists,
    Forall,
    LParen,
    RParen,
    Dot,
    Eq,
    Plus,
    Star,
    Bang,
    Amp,
    Pipe,
    Arrow,
    DArrow,
    Le,
    Lt,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(x) => return write!(f, "identifier `{x}`"),
            Tok::Num(n) => return write!(f, "numeral `{n}`"),
            Tok::Succ => "`S`",
            Tok::Vp => "`V`",
            Tok::Exists => "`E`",
            Tok::Forall => "`A`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::Dot => "`.`",
            Tok::Eq => "`=`",
            Tok::Plus => "`+`",
            Tok::Star => "`*`",
            Tok::Bang => "`!`",
            Tok::Amp => "`&`",
            Tok::Pipe => "`|`",
            Tok::Arrow => "`->`",
            Tok::DArrow => "`<->`",
            Tok::Le => "`<=`",
            Tok::Lt => "`<`",
        };
        write!(f, "{s}")
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'(' => { toks.push((Tok::LParen, i)); i += 1 }
            b')' => { toks.push((Tok::RParen, i)); i += 1 }
            b'.' => { toks.push((Tok::Dot, i)); i += 1 }
            b'=' => { toks.push((Tok::Eq, i)); i += 1 }
            b'+' => { toks.push((Tok::Plus, i)); i += 1 }
            b'*' => { toks.push((Tok::Star, i)); i += 1 }
            b'!' => { toks.push((Tok::Bang, i)); i += 1 }
            b'&' => { toks.push((Tok::Amp, i)); i += 1 }
            b'|' => { toks.push((Tok::Pipe, i)); i += 1 }
            b'-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    toks.push((Tok::Arrow, i));
                    i += 2;
                } else {
                    return Err(ParseError { position: i, message: "expected `->`".into() });
                }
            }
            b'<' => {
                if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') {
                    toks.push((Tok::DArrow, i));
                    i += 3;
                } else if bytes.get(i + 1) == Some(&b'=') {
                    toks.push((Tok::Le, i));
                    i += 2;
                } else {
                    toks.push((Tok::Lt, i));
                    i += 1;
                }
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: u64 = text[start..i].parse().map_err(|_| ParseError {
                    position: start,
                    message: "numeral too large".into(),
                })?;
                if n > MAX_NUMERAL {
                    return Err(ParseError {
                        position: start,
                        message: format!("numeral exceeds the supported maximum {MAX_NUMERAL}"),
                    });
                }
                toks.push((Tok::Num(n), start));
            }
            b'a'..=b'z' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                let word = &text[start..i];
                let tok = match word {
                    "exists" => Tok::Exists,
                    "forall" => Tok::Forall,
                    _ => Tok::Ident(word.to_string()),
                };
                toks.push((tok, start));
            }
            b'S' => { toks.push((Tok::Succ, i)); i += 1 }
            b'V' => { toks.push((Tok::Vp, i)); i += 1 }
            b'E' => { toks.push((Tok::Exists, i)); i += 1 }
            b'A' => { toks.push((Tok::Forall, i)); i += 1 }
            _ => {
                return Err(ParseError {
                    position: i,
                    message: format!("unexpected character `{}`", text[i..].chars().next().unwrap()),
                })
            }
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    fresh: FreshNames,
}

/// Generates sugar-expansion variables that cannot collide with any
/// identifier in the input.
struct FreshNames {
    used: HashSet<String>,
    counter: usize,
}

impl FreshNames {
    fn next(&mut self) -> String {
        loop {
            let name = format!("z{}", self.counter);
            self.counter += 1;
            if !self.used.contains(&name) {
                return name;
            }
        }
    }
}

/// Parses a formula. Free variables are legal; only malformed input is an
/// error.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let used = toks
        .iter()
        .filter_map(|(t, _)| match t {
            Tok::Ident(x) => Some(x.clone()),
            _ => None,
        })
        .collect();
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
        fresh: FreshNames { used, counter: 0 },
    };
    let f = p.formula()?;
    if p.pos < p.toks.len() {
        return Err(p.err_here("unexpected trailing input"));
    }
    Ok(f)
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, p)| *p)
    }

    fn err_here(&self, message: impl Into<String>) -> ParseError {
        ParseError { position: self.here(), message: message.into() }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            match self.peek() {
                Some(found) => Err(self.err_here(format!("expected {tok}, found {found}"))),
                None => Err(self.err_here(format!("expected {tok}, found end of input"))),
            }
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.implication()?;
        if self.eat(&Tok::DArrow) {
            let rhs = self.formula()?;
            Ok(Formula::iff(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.implication()?;
            Ok(Formula::imp(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.conjunction()?;
        while self.eat(&Tok::Pipe) {
            let rhs = self.conjunction()?;
            f = Formula::or(f, rhs);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.unary()?;
        while self.eat(&Tok::Amp) {
            let rhs = self.unary()?;
            f = Formula::and(f, rhs);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Bang) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::Exists) | Some(Tok::Forall) => self.quantified(),
            _ => self.atom_or_group(),
        }
    }

    fn quantified(&mut self) -> Result<Formula, ParseError> {
        let exists = matches!(self.peek(), Some(Tok::Exists));
        self.pos += 1;
        let name = match self.peek().cloned() {
            Some(Tok::Ident(x)) => {
                self.pos += 1;
                x
            }
            _ => return Err(self.err_here("expected a variable after the quantifier")),
        };
        self.expect(Tok::Dot)?;
        // The body extends as far right as possible.
        let body = self.formula()?;
        Ok(if exists {
            Formula::Exists(name, Box::new(body))
        } else {
            Formula::Forall(name, Box::new(body))
        })
    }

    fn atom_or_group(&mut self) -> Result<Formula, ParseError> {
        if self.peek() == Some(&Tok::LParen) {
            // `(` opens either a formula group or a parenthesized term;
            // try the formula reading first and fall back on failure.
            let save = self.pos;
            self.pos += 1;
            if let Ok(f) = self.formula() {
                if self.eat(&Tok::RParen)
                    && !matches!(
                        self.peek(),
                        Some(Tok::Eq | Tok::Le | Tok::Lt | Tok::Plus | Tok::Star)
                    )
                {
                    return Ok(f);
                }
            }
            self.pos = save;
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let t = self.term()?;
        match self.peek() {
            Some(Tok::Eq) => {
                self.pos += 1;
                let s = self.term()?;
                Ok(Formula::Eq(t, s))
            }
            Some(Tok::Le) => {
                self.pos += 1;
                let s = self.term()?;
                Ok(self.less_equal(t, s))
            }
            Some(Tok::Lt) => {
                self.pos += 1;
                let s = self.term()?;
                Ok(self.less_equal(Term::succ(t), s))
            }
            Some(found) => {
                let found = found.clone();
                Err(self.err_here(format!("expected `=`, `<=` or `<`, found {found}")))
            }
            None => Err(self.err_here("expected `=`, `<=` or `<`, found end of input")),
        }
    }

    /// t <= s as E z. t + z = s with z fresh.
    fn less_equal(&mut self, t: Term, s: Term) -> Formula {
        let z = self.fresh.next();
        Formula::Exists(
            z.clone(),
            Box::new(Formula::Eq(Term::add(t, Term::Var(z)), s)),
        )
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut t = self.factor()?;
        while self.eat(&Tok::Plus) {
            let s = self.factor()?;
            t = Term::add(t, s);
        }
        Ok(t)
    }

    fn factor(&mut self) -> Result<Term, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                let at = self.here();
                self.pos += 1;
                if self.eat(&Tok::Star) {
                    if n == 0 {
                        return Err(ParseError {
                            position: at,
                            message: "scalar multiplier must be positive".into(),
                        });
                    }
                    let t = self.factor()?;
                    let mut sum = t.clone();
                    for _ in 1..n {
                        sum = Term::add(sum, t.clone());
                    }
                    Ok(sum)
                } else {
                    Ok(Term::numeral(n))
                }
            }
            Some(Tok::Ident(x)) => {
                self.pos += 1;
                Ok(Term::Var(x))
            }
            Some(Tok::Succ) => {
                self.pos += 1;
                self.expect(Tok::LParen)?;
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(Term::succ(t))
            }
            Some(Tok::Vp) => {
                self.pos += 1;
                self.expect(Tok::LParen)?;
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(Term::vp(t))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Some(found) => Err(self.err_here(format!("expected a term, found {found}"))),
            None => Err(self.err_here("expected a term, found end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{complexity, Formula, Term};

    #[test]
    fn smallest_sentence() {
        assert_eq!(parse("0 = 0").unwrap(), Formula::Eq(Term::Zero, Term::Zero));
    }

    #[test]
    fn direct_grammar_reading() {
        let f = parse("V(x) = x & !(x = 0)").unwrap();
        let expected = Formula::and(
            Formula::Eq(Term::vp(Term::var("x")), Term::var("x")),
            Formula::not(Formula::Eq(Term::var("x"), Term::Zero)),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn power_gap_sentence() {
        // The sentence saying no power sits strictly between 2^k and 2^(k+1).
        let f = parse("A x. (V(x) = x -> !(E y. (x < y & y < x + x & V(y) = y)))").unwrap();
        assert!(f.is_sentence());
        let Formula::Forall(x, body) = &f else { panic!("expected a universal") };
        assert_eq!(x, "x");
        assert!(matches!(**body, Formula::Imp(..)));
    }

    #[test]
    fn numerals_become_succ_chains() {
        assert_eq!(parse("x = 2").unwrap(), Formula::Eq(Term::var("x"), Term::numeral(2)));
        assert_eq!(Term::numeral(2), Term::succ(Term::succ(Term::Zero)));
    }

    #[test]
    fn less_equal_desugars_with_a_fresh_variable() {
        let f = parse("x <= y").unwrap();
        let Formula::Exists(z, body) = &f else { panic!("expected exists") };
        assert_eq!(z, "z0");
        assert_eq!(
            **body,
            Formula::Eq(Term::add(Term::var("x"), Term::var(z)), Term::var("y"))
        );
        // The fresh name avoids identifiers already present.
        let g = parse("z0 <= y").unwrap();
        let Formula::Exists(z, _) = &g else { panic!("expected exists") };
        assert_eq!(z, "z1");
    }

    #[test]
    fn less_than_goes_through_successor() {
        let f = parse("x < y").unwrap();
        let Formula::Exists(z, body) = &f else { panic!("expected exists") };
        assert_eq!(
            **body,
            Formula::Eq(
                Term::add(Term::succ(Term::var("x")), Term::var(z)),
                Term::var("y")
            )
        );
    }

    #[test]
    fn scalar_multiples_expand_left_nested() {
        let f = parse("3*x = y").unwrap();
        let three_x = Term::add(Term::add(Term::var("x"), Term::var("x")), Term::var("x"));
        assert_eq!(f, Formula::Eq(three_x, Term::var("y")));
        assert!(parse("0*x = y").is_err());
        assert_eq!(parse("1*x = y").unwrap(), parse("x = y").unwrap());
    }

    #[test]
    fn precedence_and_associativity() {
        // ! > & > | > -> with -> right-associative.
        let f = parse("!x = 0 & y = 0 | z = 0 -> w = 0 -> 0 = 0").unwrap();
        let expected = Formula::imp(
            Formula::or(
                Formula::and(
                    Formula::not(parse("x = 0").unwrap()),
                    parse("y = 0").unwrap(),
                ),
                parse("z = 0").unwrap(),
            ),
            Formula::imp(parse("w = 0").unwrap(), parse("0 = 0").unwrap()),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn quantifiers_scope_right_as_far_as_possible() {
        let f = parse("x = 0 & E y. y = x | y = 0").unwrap();
        let expected = Formula::and(
            parse("x = 0").unwrap(),
            Formula::exists("y", Formula::or(parse("y = x").unwrap(), parse("y = 0").unwrap())),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn keyword_synonyms() {
        assert_eq!(parse("exists x. x = 0").unwrap(), parse("E x. x = 0").unwrap());
        assert_eq!(parse("forall x. x = x").unwrap(), parse("A x. x = x").unwrap());
    }

    #[test]
    fn parenthesized_terms() {
        let f = parse("(x + y) + z = w").unwrap();
        assert_eq!(
            f,
            Formula::Eq(
                Term::add(Term::add(Term::var("x"), Term::var("y")), Term::var("z")),
                Term::var("w")
            )
        );
        assert_eq!(parse("((x = y))").unwrap(), parse("x = y").unwrap());
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("x = ").unwrap_err();
        assert_eq!(e.position, 4);
        let e = parse("x == y").unwrap_err();
        assert!(e.position <= 3);
        assert!(parse("x = 10000000000").is_err());
    }

    #[test]
    fn iff_binds_loosest() {
        let f = parse("x = 0 -> y = 0 <-> z = 0").unwrap();
        assert!(matches!(f, Formula::Iff(..)));
        // Desugared: ((a -> b) -> c) & (c -> (a -> b)), five connectives.
        assert_eq!(complexity(&f).n_connectives, 5);
    }
}
