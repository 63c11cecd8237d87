//! Lexer and recursive-descent parser for `.reg` session files.
//!
//! ```text
//! session    := (statement? comment? NEWLINE)*
//! statement  := ring | ideal | forms | projection
//! ring       := "ring" "p" "=" nat ("k" "=" nat)? ("gen" "=" ident)? "vars" "=" ident ("," ident)* ("order" "=" ident)?
//! ideal      := "ideal" ident "=" poly ("," poly)*
//! forms      := "forms" ident "=" poly ("," poly)*
//! projection := "projection" ident "ideal" "=" ident "forms" "=" ident
//! poly       := sign? term (("+" | "-") term)*
//! term       := factor ("*" factor)*
//! factor     := nat | ident ("^" nat)? | "(" poly ")"
//! ```
//!
//! A line ending in a comma continues on the next line. Juxtaposition is
//! not multiplication: `2x` is rejected.

use std::fmt;
use std::sync::Arc;

use regpow_core::field::is_prime;
use regpow_core::monomial::{Exponent, Monomial, MonomialOrder, OrderKind};
use regpow_core::{Field, Ideal, Polynomial, Ring};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
    /// Token classes that would have been accepted here; empty for semantic errors.
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Nat(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Comma,
    Eq,
    Newline,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Nat(n) => format!("number {n}"),
            Tok::Ident(s) => format!("identifier {s}"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::Eq => "'='".into(),
            Tok::Newline => "end of line".into(),
            Tok::End => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str, first_line: usize) -> Result<Vec<Spanned>, ParseError> {
    let mut out: Vec<Spanned> = Vec::new();
    let mut line = first_line;
    let mut col = 1;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let start = col;
        let push = |out: &mut Vec<Spanned>, tok| out.push(Spanned { tok, line, col: start });
        match c {
            '\n' => {
                chars.next();
                // a trailing comma joins the next line
                if !matches!(out.last(), Some(Spanned { tok: Tok::Comma, .. })) {
                    push(&mut out, Tok::Newline);
                }
                line += 1;
                col = 1;
                continue;
            }
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    chars.next();
                }
                continue;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
                continue;
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                    s.push(d);
                    chars.next();
                    col += 1;
                }
                push(&mut out, Tok::Nat(s));
                continue;
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek().filter(|d| d.is_alphanumeric() || **d == '_') {
                    s.push(d);
                    chars.next();
                    col += 1;
                }
                push(&mut out, Tok::Ident(s));
                continue;
            }
            _ => {}
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '=' => Tok::Eq,
            other => {
                return Err(ParseError {
                    line,
                    col,
                    message: format!("unexpected character {other:?}"),
                    expected: Vec::new(),
                })
            }
        };
        chars.next();
        out.push(Spanned { tok, line, col });
        col += 1;
    }
    out.push(Spanned { tok: Tok::End, line, col });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    ring: Option<&'a Arc<Ring>>,
}

const POLY_START: [&str; 5] = ["number", "variable", "'('", "'-'", "'+'"];

impl<'a> Parser<'a> {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T, ParseError> {
        let t = self.peek();
        Err(ParseError {
            line: t.line,
            col: t.col,
            message: format!("unexpected {}", t.tok.describe()),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn semantic<T>(&self, at: &Spanned, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { line: at.line, col: at.col, message: message.into(), expected: Vec::new() })
    }

    fn expect(&mut self, tok: Tok) -> Result<Spanned, ParseError> {
        if self.peek().tok == tok {
            Ok(self.bump())
        } else {
            self.fail(&[&tok.describe()])
        }
    }

    fn ident(&mut self) -> Result<(String, Spanned), ParseError> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let s = s.clone();
                Ok((s, self.bump()))
            }
            _ => self.fail(&["identifier"]),
        }
    }

    fn keyword(&mut self, word: &str) -> Result<Spanned, ParseError> {
        match &self.peek().tok {
            Tok::Ident(s) if s == word => Ok(self.bump()),
            _ => self.fail(&[&format!("'{word}'")]),
        }
    }

    fn nat(&mut self) -> Result<(u64, Spanned), ParseError> {
        match &self.peek().tok {
            Tok::Nat(s) => {
                let at = self.peek().clone();
                let Ok(v) = s.parse::<u64>() else {
                    return self.semantic(&at, format!("{s} is too large"));
                };
                self.bump();
                Ok((v, at))
            }
            _ => self.fail(&["natural number"]),
        }
    }

    fn end_of_statement(&mut self) -> Result<(), ParseError> {
        match self.peek().tok {
            Tok::Newline => {
                self.bump();
                Ok(())
            }
            Tok::End => Ok(()),
            _ => self.fail(&["end of line"]),
        }
    }

    fn ring(&self) -> &'a Arc<Ring> {
        self.ring.expect("polynomials are parsed after the ring")
    }

    fn poly(&mut self) -> Result<Polynomial, ParseError> {
        let ring = self.ring();
        let negate = match self.peek().tok {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        debug_assert!(Ring::same(acc.ring(), ring));
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.factor()?;
        while self.peek().tok == Tok::Star {
            self.bump();
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, ParseError> {
        let ring = self.ring();
        let field = ring.field();
        let at = self.peek().clone();
        match &at.tok {
            Tok::Nat(digits) => {
                self.bump();
                let p = field.characteristic() as u128;
                let v = digits.bytes().fold(0u128, |a, b| (a * 10 + (b - b'0') as u128) % p);
                Ok(Polynomial::constant(ring, field.from_i64(v as i64)))
            }
            Tok::Ident(name) => {
                self.bump();
                let base = if let Some(i) = ring.var_index(name) {
                    Ok(i)
                } else if !field.is_prime_field() && name == ring.generator_name() {
                    Err(field.generator())
                } else {
                    return self.semantic(&at, format!("unknown variable {name}"));
                };
                let e = if self.peek().tok == Tok::Caret {
                    let caret = self.bump();
                    match self.peek().tok {
                        Tok::Nat(_) => {}
                        _ => {
                            let t = self.peek();
                            return Err(ParseError {
                                line: caret.line,
                                col: caret.col,
                                message: format!("exponent missing after '^' (found {})", t.tok.describe()),
                                expected: vec!["natural number".into()],
                            });
                        }
                    }
                    let (e, e_at) = self.nat()?;
                    if e > Exponent::MAX as u64 {
                        return self.semantic(&e_at, format!("exponent {e} exceeds {}", Exponent::MAX));
                    }
                    e as u32
                } else {
                    1
                };
                Ok(match base {
                    Ok(i) => {
                        let m = Monomial::var(ring.nvars(), i).checked_pow(e).expect("exponent range checked");
                        Polynomial::term(ring, m, field.one())
                    }
                    Err(g) => Polynomial::constant(ring, field.pow(g, e as u64)),
                })
            }
            Tok::LParen => {
                self.bump();
                let inner = self.poly()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            _ => self.fail(&POLY_START[..3]),
        }
    }

    fn poly_list(&mut self) -> Result<Vec<Polynomial>, ParseError> {
        let mut out = vec![self.poly()?];
        while self.peek().tok == Tok::Comma {
            self.bump();
            out.push(self.poly()?);
        }
        match self.peek().tok {
            Tok::Newline | Tok::End => Ok(out),
            _ => self.fail(&["'+'", "'-'", "'*'", "','", "end of line"]),
        }
    }
}

/// Parses one polynomial over `ring`; the whole input must be consumed.
pub fn parse_polynomial(ring: &Arc<Ring>, text: &str) -> Result<Polynomial, ParseError> {
    let mut p = Parser { toks: lex(text, 1)?, pos: 0, ring: Some(ring) };
    let f = p.poly()?;
    match p.peek().tok {
        Tok::End => Ok(f),
        _ => p.fail(&["'+'", "'-'", "'*'", "end of input"]),
    }
}

/// A projection: an ideal I_X and a list of linear forms, by name.
#[derive(Clone, Debug)]
pub struct ProjectionDecl {
    pub ideal: String,
    pub forms: String,
}

#[derive(Clone, Debug)]
pub struct Session {
    pub ring: Arc<Ring>,
    pub ideals: Vec<(String, Ideal)>,
    pub forms: Vec<(String, Vec<Polynomial>)>,
    pub projections: Vec<(String, ProjectionDecl)>,
}

impl Session {
    pub fn ideal(&self, name: &str) -> Option<&Ideal> {
        self.ideals.iter().find(|(n, _)| n == name).map(|(_, i)| i)
    }

    pub fn form_list(&self, name: &str) -> Option<&[Polynomial]> {
        self.forms.iter().find(|(n, _)| n == name).map(|(_, f)| f.as_slice())
    }

    pub fn projection(&self, name: &str) -> Option<&ProjectionDecl> {
        self.projections.iter().find(|(n, _)| n == name).map(|(_, p)| p)
    }

    fn has_name(&self, name: &str) -> bool {
        self.ideal(name).is_some() || self.form_list(name).is_some() || self.projection(name).is_some()
    }
}

struct RingDecl {
    p: u64,
    k: u32,
    gen: Option<String>,
    vars: Vec<String>,
    order: OrderKind,
}

fn parse_ring(p: &mut Parser<'_>) -> Result<RingDecl, ParseError> {
    p.keyword("p")?;
    p.expect(Tok::Eq)?;
    let (prime, p_at) = p.nat()?;
    if !is_prime(prime) {
        return p.semantic(&p_at, format!("characteristic {prime} is not prime"));
    }
    let mut decl = RingDecl { p: prime, k: 1, gen: None, vars: Vec::new(), order: OrderKind::Grevlex };
    loop {
        let at = p.peek().clone();
        let key = match &at.tok {
            Tok::Ident(s) => s.clone(),
            Tok::Newline | Tok::End if !decl.vars.is_empty() => break,
            _ => return p.fail(&["'k'", "'gen'", "'vars'", "'order'"]),
        };
        p.bump();
        p.expect(Tok::Eq)?;
        match key.as_str() {
            "k" => {
                let (k, k_at) = p.nat()?;
                if !(1..=8).contains(&k) {
                    return p.semantic(&k_at, format!("extension degree {k} outside 1..=8"));
                }
                decl.k = k as u32;
            }
            "gen" => decl.gen = Some(p.ident()?.0),
            "vars" => {
                decl.vars.push(p.ident()?.0);
                while p.peek().tok == Tok::Comma {
                    p.bump();
                    decl.vars.push(p.ident()?.0);
                }
            }
            "order" => {
                let (name, o_at) = p.ident()?;
                decl.order = match name.as_str() {
                    "grevlex" => OrderKind::Grevlex,
                    "lex" => OrderKind::Lex,
                    "grlex" => OrderKind::Grlex,
                    _ => return p.semantic(&o_at, format!("unknown monomial order {name} (grevlex, lex, grlex)")),
                };
            }
            _ => return p.semantic(&at, format!("unknown ring option {key}")),
        }
    }
    Ok(decl)
}

fn build_ring(decl: RingDecl, at: &Spanned) -> Result<Arc<Ring>, ParseError> {
    let err = |message: String| ParseError { line: at.line, col: at.col, message, expected: Vec::new() };
    let field = if decl.k == 1 { Field::prime(decl.p) } else { Field::extension(decl.p, decl.k) }
        .map_err(|e| err(e.to_string()))?;
    let gen = decl.gen.unwrap_or_else(|| "a".into());
    if decl.k > 1 && decl.vars.contains(&gen) {
        return Err(err(format!("generator name {gen} clashes with a variable")));
    }
    let ring = Ring::new(decl.vars, field, MonomialOrder::new(decl.order)).map_err(|e| err(e.to_string()))?;
    Ok(ring.with_generator_name(&gen))
}

/// Parses a complete session file.
pub fn parse_session(text: &str) -> Result<Session, ParseError> {
    let toks = lex(text, 1)?;
    let mut p = Parser { toks, pos: 0, ring: None };
    while p.peek().tok == Tok::Newline {
        p.bump();
    }
    let ring_at = p.keyword("ring")?;
    let decl = parse_ring(&mut p)?;
    let ring = build_ring(decl, &ring_at)?;
    p.end_of_statement()?;
    let mut session = Session { ring: ring.clone(), ideals: Vec::new(), forms: Vec::new(), projections: Vec::new() };
    let mut p = Parser { toks: p.toks, pos: p.pos, ring: Some(&ring) };
    loop {
        let at = p.peek().clone();
        let kw = match &at.tok {
            Tok::End => break,
            Tok::Newline => {
                p.bump();
                continue;
            }
            Tok::Ident(s) => s.clone(),
            _ => return p.fail(&["'ideal'", "'forms'", "'projection'"]),
        };
        p.bump();
        let (name, name_at) = p.ident()?;
        if session.has_name(&name) {
            return p.semantic(&name_at, format!("{name} is already defined"));
        }
        match kw.as_str() {
            "ideal" => {
                p.expect(Tok::Eq)?;
                let gens = p.poly_list()?;
                let ideal = Ideal::new(&ring, gens).or_else(|e| p.semantic(&name_at, format!("{name}: {e}")))?;
                session.ideals.push((name, ideal));
            }
            "forms" => {
                p.expect(Tok::Eq)?;
                let gens = p.poly_list()?;
                if let Some(g) = gens.iter().find(|g| !g.is_homogeneous()) {
                    return p.semantic(&name_at, format!("{name}: {g} is not homogeneous"));
                }
                session.forms.push((name, gens));
            }
            "projection" => {
                p.keyword("ideal")?;
                p.expect(Tok::Eq)?;
                let (ideal, i_at) = p.ident()?;
                if session.ideal(&ideal).is_none() {
                    return p.semantic(&i_at, format!("no ideal named {ideal}"));
                }
                p.keyword("forms")?;
                p.expect(Tok::Eq)?;
                let (forms, f_at) = p.ident()?;
                if session.form_list(&forms).is_none() {
                    return p.semantic(&f_at, format!("no forms named {forms}"));
                }
                session.projections.push((name, ProjectionDecl { ideal, forms }));
            }
            _ => {
                return p.semantic(&at, format!("unknown statement {kw} (expected ideal, forms or projection)"));
            }
        }
        p.end_of_statement()?;
    }
    Ok(session)
}
