//! Words, relators and the presentation grammar.
//!
//! A presentation is written `< x, y | x^2, y^3, (x*y)^5 >`. Each relator is a
//! base word together with a positive exponent: the outermost `^m` on a whole
//! relator expression is that exponent, so `x^3` declares the pair (x, 3) and
//! `(x^2)^3` declares (x*x, 3). To put a power inside the base word without
//! declaring an exponent, parenthesize and append `^1`, e.g. `(x^2)^1`.
//!
//! Base words are freely and cyclically reduced at parse time; an empty base
//! after reduction is rejected.

use std::fmt;

use thiserror::Error;

/// A word over the generators: signed 1-based indices, negative = inverse.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    letters: Vec<i32>,
}

impl Word {
    pub fn new(letters: Vec<i32>) -> Self {
        assert!(letters.iter().all(|&l| l != 0), "letter index must be nonzero");
        Word { letters }
    }

    pub fn empty() -> Self {
        Word::default()
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// True if every letter references a generator index in 1..=d.
    pub fn fits(&self, generator_count: usize) -> bool {
        self.letters
            .iter()
            .all(|&l| (l.unsigned_abs() as usize) <= generator_count && l != 0)
    }

    /// Unique freely reduced form: no adjacent pair (g, -g). Idempotent.
    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<i32> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word { letters: out }
    }

    /// Freely reduced word whose first and last letters are not mutually
    /// inverse. The result is a free-group conjugate of the input.
    pub fn cyclically_reduce(&self) -> Word {
        let reduced = self.free_reduce();
        let mut letters = reduced.letters;
        let mut lo = 0usize;
        let mut hi = letters.len();
        while hi - lo >= 2 && letters[lo] == -letters[hi - 1] {
            lo += 1;
            hi -= 1;
        }
        letters.truncate(hi);
        letters.drain(..lo);
        Word { letters }
    }

    /// Reversed word with all signs flipped; an involution.
    pub fn invert(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|&l| -l).collect(),
        }
    }

    /// Concatenation (no reduction).
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    /// The word repeated `k` times.
    pub fn pow(&self, k: u32) -> Word {
        let mut letters = Vec::with_capacity(self.letters.len() * k as usize);
        for _ in 0..k {
            letters.extend_from_slice(&self.letters);
        }
        Word { letters }
    }

    /// Signed letter counts: component j is the exponent sum of generator j+1.
    pub fn abelianize(&self, generator_count: usize) -> Vec<i64> {
        let mut v = vec![0i64; generator_count];
        for &l in &self.letters {
            let j = (l.unsigned_abs() as usize) - 1;
            v[j] += if l > 0 { 1 } else { -1 };
        }
        v
    }

    /// True if the word equals w^k for some k >= 2 in the free group.
    /// Assumes the word is cyclically reduced.
    pub fn is_proper_power(&self) -> bool {
        let n = self.letters.len();
        if n < 2 {
            return false;
        }
        // u = w^k with |w| = q iff rotating u by q gives u back.
        'period: for q in 1..n {
            if !n.is_multiple_of(q) {
                continue;
            }
            for i in 0..n {
                if self.letters[i] != self.letters[(i + q) % n] {
                    continue 'period;
                }
            }
            return true;
        }
        false
    }
}

/// A relator: base word u with orbifold exponent m, declaring u^m = 1 and
/// asserting that u has order exactly m in the presented group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relator {
    pub base: Word,
    pub exponent: u32,
}

impl Relator {
    /// The full word u^m that coset enumeration scans.
    pub fn full_word(&self) -> Word {
        self.base.pow(self.exponent)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    generator_names: Vec<String>,
    relators: Vec<Relator>,
}

impl Presentation {
    pub fn new(generator_names: Vec<String>, relators: Vec<Relator>) -> Result<Self, ParseError> {
        let d = generator_names.len();
        if d == 0 {
            return Err(ParseError::at(0, 0, ParseErrorKind::NoGenerators));
        }
        for (i, name) in generator_names.iter().enumerate() {
            if generator_names[..i].contains(name) {
                return Err(ParseError::at(0, 0, ParseErrorKind::DuplicateGenerator(name.clone())));
            }
        }
        for rel in &relators {
            if rel.exponent < 1 {
                return Err(ParseError::at(0, 0, ParseErrorKind::ExponentNotPositive));
            }
            if rel.base.is_empty() {
                return Err(ParseError::at(0, 0, ParseErrorKind::EmptyBaseWord));
            }
            if !rel.base.fits(d) {
                return Err(ParseError::at(0, 0, ParseErrorKind::UnknownGenerator("<index>".into())));
            }
        }
        Ok(Presentation { generator_names, relators })
    }

    pub fn generator_count(&self) -> usize {
        self.generator_names.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn relators(&self) -> &[Relator] {
        &self.relators
    }

    pub fn relator_count(&self) -> usize {
        self.relators.len()
    }

    /// Indices of relators whose base word is a proper power in the free
    /// group. The declared exponent is still taken at face value; callers
    /// may want to surface these as warnings.
    pub fn proper_power_relators(&self) -> Vec<usize> {
        self.relators
            .iter()
            .enumerate()
            .filter(|(_, r)| r.base.is_proper_power())
            .map(|(i, _)| i)
            .collect()
    }

    /// Render a word using this presentation's generator names, collapsing
    /// runs of equal letters into powers: x*x*y^-1 prints as `x^2*y^-1`.
    pub fn word_string(&self, w: &Word) -> String {
        if w.is_empty() {
            return String::new();
        }
        let mut parts: Vec<String> = Vec::new();
        let letters = w.letters();
        let mut i = 0;
        while i < letters.len() {
            let l = letters[i];
            let mut run = 1usize;
            while i + run < letters.len() && letters[i + run] == l {
                run += 1;
            }
            let name = &self.generator_names[(l.unsigned_abs() as usize) - 1];
            let exp = if l > 0 { run as i64 } else { -(run as i64) };
            if exp == 1 {
                parts.push(name.clone());
            } else {
                parts.push(format!("{}^{}", name, exp));
            }
            i += run;
        }
        parts.join("*")
    }
}

impl fmt::Display for Presentation {
    /// Canonical serialization; parsing it back yields an equal value.
    /// Every relator is printed `(base)^m` so the exponent never fuses
    /// into the base word on re-parse.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "< {} | ", self.generator_names.join(", "))?;
        let rels: Vec<String> = self
            .relators
            .iter()
            .map(|r| format!("({})^{}", self.word_string(&r.base), r.exponent))
            .collect();
        write!(f, "{} >", rels.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("relator exponent must be >= 1")]
    ExponentNotPositive,
    #[error("exponent magnitude out of range")]
    ExponentTooLarge,
    #[error("zero exponent is not allowed inside a word")]
    ZeroExponent,
    #[error("relator base word is empty after reduction")]
    EmptyBaseWord,
    #[error("presentation has no generators")]
    NoGenerators,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{kind} at line {line}, column {col}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub col: usize,
}

impl ParseError {
    fn at(line: usize, col: usize, kind: ParseErrorKind) -> Self {
        ParseError { kind, line, col }
    }
}

/// Parse presentation text of the shape `< gens | relators >`.
pub fn parse_presentation(text: &str) -> Result<Presentation, ParseError> {
    Parser::new(text).presentation()
}

/// Parse a bare word (the relator `factor` syntax, no orbifold exponent)
/// against an existing presentation, e.g. `x*y^-1` or `(x*y)^2`.
pub fn parse_word(text: &str, p: &Presentation) -> Result<Word, ParseError> {
    let mut parser = Parser::new(text);
    parser.names = p.generator_names().to_vec();
    let expr = parser.factor()?;
    parser.expect_end()?;
    validate_inner_exponents(&expr, true)?;
    Ok(expand(&expr).free_reduce())
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Lt,
    Gt,
    Pipe,
    Comma,
    Star,
    Caret,
    LParen,
    RParen,
    Ident(String),
    Int(i64),
    End,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Token,
    line: usize,
    col: usize,
}

/// Relator expression tree. `Pow` keeps the caret position for error spans.
#[derive(Clone, Debug)]
enum Expr {
    Gen(usize), // 1-based generator index
    Pow(Box<Expr>, i64, (usize, usize)),
    Seq(Vec<Expr>),
}

fn expand(expr: &Expr) -> Word {
    match expr {
        Expr::Gen(g) => Word::new(vec![*g as i32]),
        Expr::Pow(base, k, _) => {
            let w = expand(base);
            if *k >= 0 {
                w.pow(*k as u32)
            } else {
                w.invert().pow((-*k) as u32)
            }
        }
        Expr::Seq(parts) => {
            let mut out = Word::empty();
            for part in parts {
                out = out.concat(&expand(part));
            }
            out
        }
    }
}

/// Inner exponents may be negative but never zero (the grammar's `int` is a
/// nonzero signed integer). The root position is validated separately.
fn validate_inner_exponents(expr: &Expr, root: bool) -> Result<(), ParseError> {
    match expr {
        Expr::Gen(_) => Ok(()),
        Expr::Pow(base, k, pos) => {
            if *k == 0 && !root {
                return Err(ParseError::at(pos.0, pos.1, ParseErrorKind::ZeroExponent));
            }
            if k.unsigned_abs() > u32::MAX as u64 {
                return Err(ParseError::at(pos.0, pos.1, ParseErrorKind::ExponentTooLarge));
            }
            validate_inner_exponents(base, false)
        }
        Expr::Seq(parts) => {
            for part in parts {
                validate_inner_exponents(part, false)?;
            }
            Ok(())
        }
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    names: Vec<String>,
}

impl Parser {
    fn new(text: &str) -> Self {
        Parser { toks: lex(text), pos: 0, names: Vec::new() }
    }

    fn peek(&self) -> &Spanned {
        &self.toks[self.pos.min(self.toks.len() - 1)]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos.min(self.toks.len() - 1)].clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: &str) -> Result<T, ParseError> {
        let t = self.peek();
        Err(ParseError::at(t.line, t.col, ParseErrorKind::Syntax(msg.to_string())))
    }

    fn expect(&mut self, tok: Token, what: &str) -> Result<Spanned, ParseError> {
        if self.peek().tok == tok {
            Ok(self.bump())
        } else {
            self.err(&format!("expected {what}"))
        }
    }

    fn expect_end(&mut self) -> Result<(), ParseError> {
        if self.peek().tok == Token::End {
            Ok(())
        } else {
            self.err("unexpected trailing input")
        }
    }

    fn presentation(&mut self) -> Result<Presentation, ParseError> {
        self.expect(Token::Lt, "`<`")?;
        loop {
            let t = self.bump();
            match t.tok {
                Token::Ident(name) if is_ident(&name) => {
                    if self.names.contains(&name) {
                        return Err(ParseError::at(t.line, t.col, ParseErrorKind::DuplicateGenerator(name)));
                    }
                    self.names.push(name);
                }
                _ => return Err(ParseError::at(t.line, t.col, ParseErrorKind::Syntax("expected generator name".into()))),
            }
            match self.peek().tok {
                Token::Comma => {
                    self.bump();
                }
                Token::Pipe => break,
                _ => return self.err("expected `,` or `|` after generator"),
            }
        }
        self.expect(Token::Pipe, "`|`")?;
        let mut relators = Vec::new();
        if self.peek().tok != Token::Gt {
            loop {
                relators.push(self.relator()?);
                match self.peek().tok {
                    Token::Comma => {
                        self.bump();
                    }
                    Token::Gt => break,
                    _ => return self.err("expected `,` or `>` after relator"),
                }
            }
        }
        self.expect(Token::Gt, "`>`")?;
        self.expect_end()?;
        Presentation::new(self.names.clone(), relators)
    }

    fn relator(&mut self) -> Result<Relator, ParseError> {
        let expr = self.factor()?;
        let (base_expr, exponent, caret_pos) = if self.peek().tok == Token::Caret {
            // `factor ^ posint` with the caret left over after the factor,
            // e.g. `x^2^3`: the trailing exponent is the orbifold exponent.
            let caret = self.bump();
            let e = self.int()?;
            validate_inner_exponents(&expr, false)?;
            (expr, e, (caret.line, caret.col))
        } else {
            match expr {
                // Outermost power on the whole relator expression: its
                // positive exponent is the orbifold exponent.
                Expr::Pow(base, k, pos) if k >= 0 => {
                    validate_inner_exponents(&base, false)?;
                    (*base, k, pos)
                }
                other => {
                    validate_inner_exponents(&other, true)?;
                    (other, 1, (self.peek().line, self.peek().col))
                }
            }
        };
        if exponent < 1 {
            return Err(ParseError::at(caret_pos.0, caret_pos.1, ParseErrorKind::ExponentNotPositive));
        }
        if exponent > u32::MAX as i64 {
            return Err(ParseError::at(caret_pos.0, caret_pos.1, ParseErrorKind::ExponentTooLarge));
        }
        let base = expand(&base_expr).cyclically_reduce();
        if base.is_empty() {
            return Err(ParseError::at(caret_pos.0, caret_pos.1, ParseErrorKind::EmptyBaseWord));
        }
        Ok(Relator { base, exponent: exponent as u32 })
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let mut terms = vec![self.term()?];
        while self.peek().tok == Token::Star {
            self.bump();
            terms.push(self.term()?);
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { Expr::Seq(terms) })
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let t = self.bump();
        let inner = match t.tok {
            Token::Ident(name) if is_ident(&name) => match self.names.iter().position(|n| *n == name) {
                Some(i) => Expr::Gen(i + 1),
                None => return Err(ParseError::at(t.line, t.col, ParseErrorKind::UnknownGenerator(name))),
            },
            Token::LParen => {
                let e = self.factor()?;
                self.expect(Token::RParen, "`)`")?;
                e
            }
            _ => return Err(ParseError::at(t.line, t.col, ParseErrorKind::Syntax("expected generator or `(`".into()))),
        };
        if self.peek().tok == Token::Caret {
            let caret = self.bump();
            let e = self.int()?;
            Ok(Expr::Pow(Box::new(inner), e, (caret.line, caret.col)))
        } else {
            Ok(inner)
        }
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        let t = self.bump();
        match t.tok {
            Token::Int(v) => Ok(v),
            _ => Err(ParseError::at(t.line, t.col, ParseErrorKind::Syntax("expected integer exponent".into()))),
        }
    }
}

fn is_ident(name: &str) -> bool {
    name.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn lex(text: &str) -> Vec<Spanned> {
    fn advance(chars: &mut std::iter::Peekable<std::str::Chars>, line: &mut usize, col: &mut usize) -> char {
        let c = chars.next().unwrap();
        if c == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
        c
    }

    let mut toks = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, col);
        if c.is_whitespace() {
            advance(&mut chars, &mut line, &mut col);
            continue;
        }
        let tok = match c {
            '<' => { advance(&mut chars, &mut line, &mut col); Token::Lt }
            '>' => { advance(&mut chars, &mut line, &mut col); Token::Gt }
            '|' => { advance(&mut chars, &mut line, &mut col); Token::Pipe }
            ',' => { advance(&mut chars, &mut line, &mut col); Token::Comma }
            '*' => { advance(&mut chars, &mut line, &mut col); Token::Star }
            '^' => { advance(&mut chars, &mut line, &mut col); Token::Caret }
            '(' => { advance(&mut chars, &mut line, &mut col); Token::LParen }
            ')' => { advance(&mut chars, &mut line, &mut col); Token::RParen }
            c if c.is_ascii_alphabetic() => {
                let mut name = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        name.push(advance(&mut chars, &mut line, &mut col));
                    } else {
                        break;
                    }
                }
                Token::Ident(name)
            }
            c if c.is_ascii_digit() || c == '-' || c == '+' => {
                let mut s = String::new();
                s.push(advance(&mut chars, &mut line, &mut col));
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_digit() {
                        s.push(advance(&mut chars, &mut line, &mut col));
                    } else {
                        break;
                    }
                }
                match s.parse::<i64>() {
                    Ok(v) => Token::Int(v),
                    Err(_) => Token::Ident(s), // caught as a syntax error downstream
                }
            }
            _ => {
                advance(&mut chars, &mut line, &mut col);
                Token::Ident(c.to_string())
            }
        };
        toks.push(Spanned { tok, line: tline, col: tcol });
    }
    toks.push(Spanned { tok: Token::End, line, col });
    toks
}
