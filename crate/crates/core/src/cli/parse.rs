//! Recursive-descent parser for job files.
//!
//! ```text
//! file     := (statement ';')*
//! statement:= 'field' ('Q' | 'GF(' p ')') | command payload
//! sheaf    := sterm ('+' sterm)*
//! sterm    := [k '*'] ( 'O' ['(' d ')'] | 'sky(' (poly_t | 'inf') ',' e ')'
//!             | 'glued(' n0 ',' matrix_t ',' n1 ',' matrix_s ',' matrix_t ')'
//!             | 'random' | 'scramble(' sheaf ')' | 'zero' )
//! functor  := fterm ('+' fterm)*
//! fterm    := [k '*'] ( 'tensor(' sheaf ')' | 'h1twist(' i ')' | 'zero' )
//! matrix   := '[' row (',' row)* ']' | '[]'      row := '[' expr,* ']'
//! expr     := polynomial in one named variable with +, -, *, ^ and parentheses
//! ```
//!
//! `#` starts a comment running to the end of the line.

use std::fmt;

use num_bigint::BigInt;

use super::{AffineSpec, Command, FTerm, FunctorLit, JobSpec, SheafLit, STerm};
use crate::exactfield::{Field, Matrix, RingElem, Scalar};
use crate::polypid::{Laurent, LaurentMat, Poly, PolyMat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

type PResult<T> = std::result::Result<T, ParseError>;

const COMMANDS: [&str; 8] =
    ["cohomology", "classify-sheaf", "watts", "gamma", "classify-tg", "birkhoff", "affine-roundtrip", "probe-right-exact"];

pub(super) struct Parser<'a> {
    src: &'a str,
    pos: usize,
    field: Option<Field>,
}

impl<'a> Parser<'a> {
    pub(super) fn new(src: &'a str) -> Parser<'a> {
        Parser { src, pos: 0, field: None }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn location(&self, pos: usize) -> (usize, usize) {
        let before = &self.src[..pos];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        (line, column)
    }

    fn error_at<T>(&self, pos: usize, message: impl Into<String>) -> PResult<T> {
        let (line, column) = self.location(pos);
        Err(ParseError { line, column, message: message.into() })
    }

    fn error<T>(&self, message: impl Into<String>) -> PResult<T> {
        self.error_at(self.pos, message)
    }

    fn skip_ws(&mut self) {
        loop {
            let r = self.rest();
            let trimmed = r.trim_start();
            self.pos += r.len() - trimmed.len();
            if trimmed.starts_with('#') {
                let end = trimmed.find('\n').unwrap_or(trimmed.len());
                self.pos += end;
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(d) => self.error(format!("expected '{c}', found '{d}'")),
                None => self.error(format!("expected '{c}', found end of input")),
            }
        }
    }

    /// A word of letters, digits, `_` and (inside command names) `-`.
    fn word(&mut self, allow_dash: bool) -> Option<&'a str> {
        self.skip_ws();
        let r = self.rest();
        let mut end = 0;
        for (i, c) in r.char_indices() {
            let ok = if i == 0 { c.is_ascii_alphabetic() } else { c.is_ascii_alphanumeric() || c == '_' || (allow_dash && c == '-') };
            if !ok {
                break;
            }
            end = i + c.len_utf8();
        }
        if end == 0 {
            return None;
        }
        self.pos += end;
        Some(&r[..end])
    }

    fn peek_word(&mut self) -> Option<&'a str> {
        let save = self.pos;
        let w = self.word(false);
        self.pos = save;
        w
    }

    fn keyword(&mut self, kw: &str) -> bool {
        if self.peek_word() == Some(kw) {
            self.word(false);
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> PResult<&'a str> {
        self.skip_ws();
        let r = self.rest();
        let end = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
        if end == 0 {
            return self.error("expected a number");
        }
        self.pos += end;
        Ok(&r[..end])
    }

    fn int(&mut self) -> PResult<i64> {
        let start = self.pos;
        let neg = self.eat('-');
        if !neg {
            self.eat('+');
        }
        let d = self.digits()?;
        let v: i64 = match d.parse() {
            Ok(v) => v,
            Err(_) => return self.error_at(start, format!("integer out of range: {d}")),
        };
        Ok(if neg { -v } else { v })
    }

    fn unsigned(&mut self) -> PResult<u64> {
        let start = self.pos;
        let d = self.digits()?;
        match d.parse() {
            Ok(v) => Ok(v),
            Err(_) => self.error_at(start, format!("integer out of range: {d}")),
        }
    }

    fn count(&mut self) -> PResult<usize> {
        Ok(self.unsigned()? as usize)
    }

    fn field(&self) -> Field {
        self.field.unwrap_or(Field::Rational)
    }

    // ---------- statements

    /// All jobs of a file; `field` statements set the field of the jobs
    /// after them.
    pub(super) fn jobs(&mut self) -> PResult<Vec<JobSpec>> {
        let mut out = Vec::new();
        while self.peek().is_some() {
            if let Some(job) = self.statement()? {
                out.push(job);
            }
        }
        Ok(out)
    }

    fn statement(&mut self) -> PResult<Option<JobSpec>> {
        let start = self.pos;
        let Some(w) = self.word(true) else {
            return self.error("expected 'field' or a command");
        };
        if w == "field" {
            self.field = Some(self.field_spec()?);
            self.expect(';')?;
            return Ok(None);
        }
        if !COMMANDS.contains(&w) {
            return self.error_at(start, format!("unknown command '{w}'"));
        }
        let command = self.payload(w)?;
        self.expect(';')?;
        Ok(Some(JobSpec { field: self.field(), command }))
    }

    fn field_spec(&mut self) -> PResult<Field> {
        let start = self.pos;
        match self.word(false) {
            Some("Q") => Ok(Field::Rational),
            Some("GF") => {
                self.expect('(')?;
                let at = self.pos;
                let p = self.unsigned()?;
                self.expect(')')?;
                match Field::prime(p) {
                    Ok(f) => Ok(f),
                    Err(_) => self.error_at(at, format!("not prime: {p}")),
                }
            }
            _ => self.error_at(start, "expected field 'Q' or 'GF(p)'"),
        }
    }

    fn payload(&mut self, command: &str) -> PResult<Command> {
        Ok(match command {
            "cohomology" => Command::Cohomology(self.sheaf()?),
            "classify-sheaf" => Command::ClassifySheaf(self.sheaf()?),
            "watts" => Command::Watts(self.functor()?),
            "gamma" => {
                let f = self.functor()?;
                let at = if self.keyword("at") { Some(self.sheaf()?) } else { None };
                Command::Gamma(f, at)
            }
            "classify-tg" => Command::ClassifyTg(self.functor()?),
            "birkhoff" => Command::Birkhoff(self.laurent_matrix()?),
            "affine-roundtrip" => Command::AffineRoundtrip(self.affine()?),
            "probe-right-exact" => Command::ProbeRightExact(self.functor()?),
            _ => unreachable!("command list checked by the caller"),
        })
    }

    // ---------- sheaves and functors

    fn multiplicity(&mut self) -> PResult<usize> {
        if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            let save = self.pos;
            let k = self.count()?;
            if self.eat('*') {
                return Ok(k);
            }
            // a bare `0` is the zero sheaf or functor
            self.pos = save;
        }
        Ok(1)
    }

    pub(super) fn sheaf(&mut self) -> PResult<SheafLit> {
        let mut terms = vec![self.sheaf_term()?];
        while self.eat('+') {
            terms.push(self.sheaf_term()?);
        }
        Ok(SheafLit { terms })
    }

    fn sheaf_term(&mut self) -> PResult<STerm> {
        let mult = self.multiplicity()?;
        let start = self.pos;
        if self.eat('0') {
            return Ok(STerm::Zero);
        }
        let term = match self.word(false) {
            Some("O") => {
                if self.eat('(') {
                    let d = self.int()?;
                    self.expect(')')?;
                    STerm::Line(d)
                } else {
                    STerm::Line(0)
                }
            }
            Some("sky") => {
                self.expect('(')?;
                let support = if self.keyword("inf") {
                    None
                } else {
                    let at = self.pos;
                    let p = self.poly("t")?;
                    if p.deg() < 1 {
                        return self.error_at(at, "support polynomial must have positive degree");
                    }
                    Some(p.monic())
                };
                self.expect(',')?;
                let at = self.pos;
                let e = self.unsigned()?;
                if e == 0 || e > u32::MAX as u64 {
                    return self.error_at(at, "jet must be a positive integer");
                }
                self.expect(')')?;
                STerm::Sky(support, e as u32)
            }
            Some("glued") => {
                self.expect('(')?;
                let n0 = self.count()?;
                self.expect(',')?;
                let r0 = self.poly_matrix("t", n0)?;
                self.expect(',')?;
                let n1 = self.count()?;
                self.expect(',')?;
                let r1 = self.poly_matrix("s", n1)?;
                self.expect(',')?;
                let at = self.pos;
                let g = self.laurent_matrix()?;
                self.expect(')')?;
                if g.rows() != n0 || g.cols() != n1 {
                    return self.error_at(at, format!("glue must be {n0}x{n1}"));
                }
                STerm::Glued { n0, r0, n1, r1, glue: g }
            }
            Some("random") => STerm::Random,
            Some("scramble") => {
                self.expect('(')?;
                let inner = self.sheaf()?;
                self.expect(')')?;
                STerm::Scramble(Box::new(inner))
            }
            Some("zero") => STerm::Zero,
            Some(w) => return self.error_at(start, format!("malformed sheaf literal: unknown '{w}'")),
            None => return self.error_at(start, "malformed sheaf literal"),
        };
        Ok(if mult == 1 { term } else { STerm::Times(mult, Box::new(term)) })
    }

    pub(super) fn functor(&mut self) -> PResult<FunctorLit> {
        let mut terms = vec![self.functor_term()?];
        while self.eat('+') {
            terms.push(self.functor_term()?);
        }
        Ok(FunctorLit { terms })
    }

    fn functor_term(&mut self) -> PResult<FTerm> {
        let mult = self.multiplicity()?;
        let start = self.pos;
        if self.eat('0') {
            return Ok(FTerm::Zero);
        }
        let term = match self.word(false) {
            Some("tensor") => {
                self.expect('(')?;
                let s = self.sheaf()?;
                self.expect(')')?;
                FTerm::Tensor(s)
            }
            Some("h1twist") => {
                self.expect('(')?;
                let i = self.int()?;
                self.expect(')')?;
                FTerm::H1Twist(i)
            }
            Some("zero") => FTerm::Zero,
            Some(w) => return self.error_at(start, format!("malformed functor literal: unknown '{w}'")),
            None => return self.error_at(start, "malformed functor literal"),
        };
        Ok(if mult == 1 { term } else { FTerm::Times(mult, Box::new(term)) })
    }

    fn affine(&mut self) -> PResult<AffineSpec> {
        let start = self.pos;
        if self.word(false) != Some("k") || !self.eat('[') || self.word(false) != Some("t") || !self.eat(']') {
            return self.error_at(start, "expected ring 'k[t]' or 'k[t]/(f)'");
        }
        let relation = if self.eat('/') {
            self.expect('(')?;
            let at = self.pos;
            let f = self.poly("t")?;
            self.expect(')')?;
            if f.deg() < 1 {
                return self.error_at(at, "ring relation must have positive degree");
            }
            Some(f.monic())
        } else {
            None
        };
        self.expect(',')?;
        let start = self.pos;
        let (gens, relations, action) = match self.word(false) {
            Some("regular") => (None, None, None),
            Some("module") => {
                self.expect('(')?;
                let n = self.count()?;
                self.expect(',')?;
                let rel = self.poly_matrix("u", n)?;
                self.expect(')')?;
                self.expect(',')?;
                if self.word(false) != Some("action") {
                    return self.error("expected 'action(...)'");
                }
                self.expect('(')?;
                let at = self.pos;
                let a = self.poly_matrix("u", n)?;
                self.expect(')')?;
                if a.cols() != n {
                    return self.error_at(at, format!("action must be {n}x{n}"));
                }
                (Some(n), Some(rel), Some(a))
            }
            _ => return self.error_at(start, "expected 'regular' or 'module(n, [...]), action([...])'"),
        };
        Ok(AffineSpec { relation, gens, relations, action })
    }

    // ---------- matrices and polynomials

    fn rows(&mut self, var: &str) -> PResult<Vec<Vec<Laurent>>> {
        let start = self.pos;
        self.expect('[')?;
        let mut rows = Vec::new();
        if self.eat(']') {
            return Ok(rows);
        }
        loop {
            self.expect('[')?;
            let mut row = Vec::new();
            if !self.eat(']') {
                loop {
                    row.push(self.expr(var)?);
                    if self.eat(']') {
                        break;
                    }
                    self.expect(',')?;
                }
            }
            rows.push(row);
            if self.eat(']') {
                break;
            }
            self.expect(',')?;
        }
        if rows.iter().any(|r| r.len() != rows[0].len()) {
            return self.error_at(start, "ragged matrix rows");
        }
        Ok(rows)
    }

    fn laurent_matrix(&mut self) -> PResult<LaurentMat> {
        let rows = self.rows("t")?;
        Ok(Matrix::from_rows(self.field(), rows))
    }

    /// A polynomial matrix with `n` rows; `[]` and rows of `[]` give no
    /// columns.
    fn poly_matrix(&mut self, var: &str, n: usize) -> PResult<PolyMat> {
        let start = self.pos;
        let rows = self.rows(var)?;
        let field = self.field();
        if rows.is_empty() {
            return Ok(PolyMat::zeros(field, n, 0));
        }
        if rows.len() != n {
            return self.error_at(start, format!("expected {n} rows, found {}", rows.len()));
        }
        let mut out = Vec::with_capacity(n);
        for row in rows {
            let mut r = Vec::with_capacity(row.len());
            for x in row {
                match x.to_poly() {
                    Some(p) => r.push(p),
                    None => return self.error_at(start, format!("negative power of {var} in a polynomial matrix")),
                }
            }
            out.push(r);
        }
        let cols = out[0].len();
        let mut m = PolyMat::zeros(field, n, cols);
        for (i, row) in out.into_iter().enumerate() {
            for (j, p) in row.into_iter().enumerate() {
                m.set(i, j, p);
            }
        }
        Ok(m)
    }

    fn poly(&mut self, var: &str) -> PResult<Poly> {
        let start = self.pos;
        let x = self.expr(var)?;
        match x.to_poly() {
            Some(p) => Ok(p),
            None => self.error_at(start, format!("negative power of {var} in a polynomial")),
        }
    }

    fn expr(&mut self, var: &str) -> PResult<Laurent> {
        let mut acc = if self.eat('-') { self.term(var)?.neg() } else { self.term(var)? };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term(var)?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term(var)?);
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn term(&mut self, var: &str) -> PResult<Laurent> {
        let mut acc = self.factor(var)?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.factor(var)?);
                continue;
            }
            // implicit product: `3t`, `2(t - 1)`
            match self.peek() {
                Some(c) if c == '(' || c.is_ascii_alphabetic() => acc = acc.mul(&self.factor(var)?),
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self, var: &str) -> PResult<Laurent> {
        let field = self.field();
        let start = self.pos;
        let base = match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr(var)?;
                self.expect(')')?;
                e
            }
            Some(c) if c.is_ascii_digit() => Laurent::monomial(self.scalar()?, 0),
            Some(c) if c.is_ascii_alphabetic() => {
                let w = self.word(false).unwrap_or_default();
                if w != var {
                    return self.error_at(start, format!("unknown variable '{w}' (expected '{var}')"));
                }
                Laurent::t_pow(field, 1)
            }
            _ => return self.error("expected a polynomial"),
        };
        if !self.eat('^') {
            return Ok(base);
        }
        let at = self.pos;
        let e = self.int()?;
        if e >= 0 {
            return Ok(base.pow(e as u64));
        }
        if !base.is_monomial() {
            return self.error_at(at, "negative powers apply to monomials only");
        }
        let Some(c) = base.lead().inv() else {
            return self.error_at(at, "negative power of zero");
        };
        Ok(Laurent::monomial(c.pow(-e as u64), base.min_exp() * e))
    }

    fn scalar(&mut self) -> PResult<Scalar> {
        let start = self.pos;
        let num: BigInt = self.digits()?.parse().expect("digits parse as an integer");
        let den: BigInt = if self.rest().starts_with('/') && self.rest()[1..].starts_with(|c: char| c.is_ascii_digit()) {
            self.pos += 1;
            self.digits()?.parse().expect("digits parse as an integer")
        } else {
            BigInt::from(1)
        };
        match self.field().ratio(&num, &den) {
            Some(s) => Ok(s),
            None => self.error_at(start, "division by zero in a coefficient"),
        }
    }
}

/// Parses a file of jobs.
pub fn parse_jobs(text: &str) -> PResult<Vec<JobSpec>> {
    Parser::new(text).jobs()
}

/// Parses exactly one job, optionally preceded by a `field` statement.
pub fn parse_job(text: &str) -> PResult<JobSpec> {
    let mut p = Parser::new(text);
    let jobs = p.jobs()?;
    match jobs.len() {
        1 => Ok(jobs.into_iter().next().expect("one job")),
        0 => p.error_at(text.len(), "no command in job"),
        n => p.error_at(0, format!("expected one job, found {n}")),
    }
}

/// Parses a bare sheaf literal over `field`, as written after `cohomology`.
pub fn parse_sheaf(field: Field, text: &str) -> PResult<SheafLit> {
    let mut p = Parser { src: text, pos: 0, field: Some(field) };
    let s = p.sheaf()?;
    match p.peek() {
        None => Ok(s),
        Some(c) => p.error(format!("unexpected '{c}' after sheaf")),
    }
}
