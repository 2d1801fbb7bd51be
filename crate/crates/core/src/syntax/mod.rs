//! Named surface syntax.
//!
//! ```text
//! P := P "<=>" P | P "=>" P | P "or" P | P "&" P | "not" P
//!    | "forall" x "." P | "exists" x "." P | E "=" E | E ":" E | "#" k | "(" P ")"
//! E := x | E "|->" E | E "*" E | "choice" E | "pow" E | "BIG"
//!    | "{" x ":" E "|" P "}" | "@" j | "(" E ")"
//! ```
//!
//! Precedence from loosest to tightest: `<=>`, `=>` (right associative),
//! `or`, `&`, `not`; on expressions `|->`, `*`, then the prefix operators.
//! Binders extend as far right as possible. Free names are given dangling
//! indexes through a [`ScopeTable`], in order of first occurrence.

use std::fmt;

use thiserror::Error;

use crate::binder::{bind_cmp, bind_exists, bind_forall};
use crate::kernel::Sequent;
use crate::term::{dangling, BigName, Expr, Index, Pred, PredName, Sort, Term};

pub mod proof;
pub mod script;

pub use proof::{decode_proof, encode_proof, DecodeError, ProofFile};
pub use script::{parse_script, parse_tactical, Script};

/// Ordered, injective map from free names to dangling indexes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScopeTable {
    entries: Vec<(String, Index)>,
    floor: u32,
}

impl ScopeTable {
    pub fn new() -> Self {
        ScopeTable::default()
    }

    pub fn get(&self, name: &str) -> Option<Index> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, i)| *i)
    }

    pub fn name_of(&self, i: Index) -> Option<&str> {
        self.entries.iter().find(|(_, j)| *j == i).map(|(n, _)| n.as_str())
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, Index)> {
        self.entries.iter().map(|(n, i)| (n.as_str(), *i))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Index the next new name receives.
    pub fn next_index(&self) -> Index {
        let max = self.entries.iter().map(|(_, i)| i.get()).max().unwrap_or(0);
        Index::of(max.max(self.floor) + 1)
    }

    /// Makes later new names start at or above `i`.
    pub fn reserve(&mut self, i: Index) {
        self.floor = self.floor.max(i.get() - 1);
    }

    /// The index of `name`, allocating the next one if it is new.
    pub fn intern(&mut self, name: &str) -> Index {
        if let Some(i) = self.get(name) {
            return i;
        }
        let i = self.next_index();
        self.entries.push((name.to_string(), i));
        i
    }

    /// Binds `name` to `i`, dropping any previous binding of either.
    pub fn bind(&mut self, name: &str, i: Index) {
        self.entries.retain(|(n, j)| n != name && *j != i);
        self.entries.push((name.to_string(), i));
    }

    /// Display name for a dangling index, generated when uncovered.
    pub fn display_name(&self, i: Index) -> String {
        if let Some(n) = self.name_of(i) {
            return n.to_string();
        }
        let mut name = format!("x{i}");
        while self.get(&name).is_some() {
            name.push('\'');
        }
        name
    }

    /// Names every uncovered dangling index of `terms`.
    pub fn cover<'a>(&mut self, terms: impl IntoIterator<Item = &'a Term>) {
        for t in terms {
            for i in dangling(t) {
                if self.name_of(i).is_none() {
                    let name = self.display_name(i);
                    self.entries.push((name, i));
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("sort error at offset {offset}: expected a {expected}, found a {found}")]
    Sort { offset: usize, expected: Sort, found: Sort },
}

impl SyntaxError {
    pub fn offset(&self) -> usize {
        match self {
            SyntaxError::Parse { offset, .. } | SyntaxError::Sort { offset, .. } => *offset,
        }
    }
}

fn parse_error(offset: usize, message: impl Into<String>) -> SyntaxError {
    SyntaxError::Parse { offset, message: message.into() }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Elem(String),
    PVar(String),
    Sym(&'static str),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Elem(s) => write!(f, "`@{s}`"),
            Tok::PVar(s) => write!(f, "`#{s}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

const SYMBOLS: [&str; 15] =
    ["<=>", "|->", "=>", "|-", "|", "&", "=", ":", "*", "(", ")", "{", "}", ".", ","];

const KEYWORDS: [&str; 7] = ["forall", "exists", "not", "or", "choice", "pow", "BIG"];

fn is_name_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

/// Whether `s` can be written as a bare name.
pub fn is_plain_name(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if is_name_start(c)) && cs.all(is_name_char)
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, SyntaxError> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut pos = 0;
    'outer: while pos < text.len() {
        let rest = &text[pos..];
        let c = rest.chars().next().unwrap();
        if c.is_whitespace() {
            pos += c.len_utf8();
            continue;
        }
        if is_name_start(c) {
            let len = rest.find(|c: char| !is_name_char(c)).unwrap_or(rest.len());
            out.push((Tok::Ident(rest[..len].to_string()), pos));
            pos += len;
            continue;
        }
        if c == '@' || c == '#' {
            let start = pos;
            pos += 1;
            let name = if bytes.get(pos) == Some(&b'"') {
                let (s, len) = read_quoted(&text[pos..]).ok_or_else(|| parse_error(pos, "unterminated name"))?;
                pos += len;
                s
            } else {
                let r = &text[pos..];
                let len = r.find(|c: char| !is_name_char(c)).unwrap_or(r.len());
                if len == 0 {
                    return Err(parse_error(pos, format!("expected a name after `{c}`")));
                }
                pos += len;
                r[..len].to_string()
            };
            out.push((if c == '@' { Tok::Elem(name) } else { Tok::PVar(name) }, start));
            continue;
        }
        for sym in SYMBOLS {
            if rest.starts_with(sym) {
                out.push((Tok::Sym(sym), pos));
                pos += sym.len();
                continue 'outer;
            }
        }
        return Err(parse_error(pos, format!("unexpected character `{c}`")));
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

/// Reads `"..."` with `\"`, `\\` and `\n` escapes; returns the text and the
/// consumed length.
pub(crate) fn read_quoted(s: &str) -> Option<(String, usize)> {
    let mut chars = s.char_indices();
    if chars.next()?.1 != '"' {
        return None;
    }
    let mut out = String::new();
    while let Some((i, c)) = chars.next() {
        match c {
            '"' => return Some((out, i + 1)),
            '\\' => match chars.next()?.1 {
                'n' => out.push('\n'),
                other => out.push(other),
            },
            c => out.push(c),
        }
    }
    None
}

#[derive(Clone, Debug)]
enum NP {
    Iff(Box<NP>, Box<NP>),
    Imp(Box<NP>, Box<NP>),
    Or(Box<NP>, Box<NP>),
    And(Box<NP>, Box<NP>),
    Not(Box<NP>),
    Forall(String, Box<NP>),
    Exists(String, Box<NP>),
    Eq(NE, NE),
    In(NE, NE),
    PVar(String),
}

#[derive(Clone, Debug)]
enum NE {
    Name(String),
    MapsTo(Box<NE>, Box<NE>),
    Prod(Box<NE>, Box<NE>),
    Choice(Box<NE>),
    Pow(Box<NE>),
    Big,
    Cmp(String, Box<NE>, Box<NP>),
    Elem(String),
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Parser, SyntaxError> {
        Ok(Parser { toks: lex(text)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
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
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    fn is_kw(&self, k: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == k)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> Result<(), SyntaxError> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(parse_error(self.offset(), format!("expected `{s}`, found {}", self.peek())))
        }
    }

    fn expect_end(&self) -> Result<(), SyntaxError> {
        match self.peek() {
            Tok::End => Ok(()),
            t => Err(parse_error(self.offset(), format!("unexpected {t}"))),
        }
    }

    fn binder_name(&mut self) -> Result<String, SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(n) if !KEYWORDS.contains(&n.as_str()) => {
                self.bump();
                Ok(n)
            }
            t => Err(parse_error(self.offset(), format!("expected a variable name, found {t}"))),
        }
    }

    fn pred(&mut self) -> Result<NP, SyntaxError> {
        let mut left = self.imp()?;
        while self.eat_sym("<=>") {
            let right = self.imp()?;
            left = NP::Iff(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn imp(&mut self) -> Result<NP, SyntaxError> {
        let left = self.or()?;
        if self.eat_sym("=>") {
            let right = self.imp()?;
            return Ok(NP::Imp(Box::new(left), Box::new(right)));
        }
        Ok(left)
    }

    fn or(&mut self) -> Result<NP, SyntaxError> {
        let mut left = self.and()?;
        while self.is_kw("or") {
            self.bump();
            let right = self.and()?;
            left = NP::Or(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn and(&mut self) -> Result<NP, SyntaxError> {
        let mut left = self.unary()?;
        while self.eat_sym("&") {
            let right = self.unary()?;
            left = NP::And(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<NP, SyntaxError> {
        if self.is_kw("not") {
            self.bump();
            return Ok(NP::Not(Box::new(self.unary()?)));
        }
        for (kw, forall) in [("forall", true), ("exists", false)] {
            if self.is_kw(kw) {
                self.bump();
                let x = self.binder_name()?;
                self.expect_sym(".")?;
                let body = Box::new(self.pred()?);
                return Ok(if forall { NP::Forall(x, body) } else { NP::Exists(x, body) });
            }
        }
        self.atom_pred()
    }

    fn atom_pred(&mut self) -> Result<NP, SyntaxError> {
        if let Tok::PVar(k) = self.peek().clone() {
            self.bump();
            return Ok(NP::PVar(k));
        }
        if self.is_sym("(") {
            let save = self.pos;
            self.bump();
            let attempt = self.pred().and_then(|p| self.expect_sym(")").map(|_| p));
            match attempt {
                Ok(p) if !["=", ":", "|->", "*"].iter().any(|s| self.is_sym(s)) => return Ok(p),
                Ok(_) => self.pos = save,
                Err(e1) => {
                    self.pos = save;
                    return self.comparison().map_err(|e2| if e1.offset() > e2.offset() { e1 } else { e2 });
                }
            }
        }
        self.comparison()
    }

    fn comparison(&mut self) -> Result<NP, SyntaxError> {
        let start = self.offset();
        let left = self.expr()?;
        if self.eat_sym("=") {
            return Ok(NP::Eq(left, self.expr()?));
        }
        if self.eat_sym(":") {
            return Ok(NP::In(left, self.expr()?));
        }
        Err(SyntaxError::Sort { offset: start, expected: Sort::Predicate, found: Sort::Expression })
    }

    fn expr(&mut self) -> Result<NE, SyntaxError> {
        let mut left = self.prod()?;
        while self.eat_sym("|->") {
            let right = self.prod()?;
            left = NE::MapsTo(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn prod(&mut self) -> Result<NE, SyntaxError> {
        let mut left = self.prefix()?;
        while self.eat_sym("*") {
            let right = self.prefix()?;
            left = NE::Prod(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn prefix(&mut self) -> Result<NE, SyntaxError> {
        if self.is_kw("choice") {
            self.bump();
            return Ok(NE::Choice(Box::new(self.prefix()?)));
        }
        if self.is_kw("pow") {
            self.bump();
            return Ok(NE::Pow(Box::new(self.prefix()?)));
        }
        self.atom_expr()
    }

    fn atom_expr(&mut self) -> Result<NE, SyntaxError> {
        let start = self.offset();
        match self.peek().clone() {
            Tok::Ident(n) if n == "BIG" => {
                self.bump();
                Ok(NE::Big)
            }
            Tok::Ident(n) if ["not", "forall", "exists"].contains(&n.as_str()) => {
                Err(SyntaxError::Sort { offset: start, expected: Sort::Expression, found: Sort::Predicate })
            }
            Tok::Ident(n) if !KEYWORDS.contains(&n.as_str()) => {
                self.bump();
                Ok(NE::Name(n))
            }
            Tok::Elem(j) => {
                self.bump();
                Ok(NE::Elem(j))
            }
            Tok::PVar(_) => {
                Err(SyntaxError::Sort { offset: start, expected: Sort::Expression, found: Sort::Predicate })
            }
            Tok::Sym("{") => {
                self.bump();
                let x = self.binder_name()?;
                self.expect_sym(":")?;
                let set = self.expr()?;
                self.expect_sym("|")?;
                let body = self.pred()?;
                self.expect_sym("}")?;
                Ok(NE::Cmp(x, Box::new(set), Box::new(body)))
            }
            Tok::Sym("(") => {
                let save = self.pos;
                self.bump();
                let attempt = self.expr().and_then(|e| self.expect_sym(")").map(|_| e));
                match attempt {
                    Ok(e) => Ok(e),
                    Err(err) => {
                        self.pos = save + 1;
                        let as_pred = self.pred().and_then(|_| self.expect_sym(")"));
                        self.pos = save;
                        match as_pred {
                            Ok(()) => Err(SyntaxError::Sort {
                                offset: start,
                                expected: Sort::Expression,
                                found: Sort::Predicate,
                            }),
                            Err(_) => Err(err),
                        }
                    }
                }
            }
            t => Err(parse_error(start, format!("expected an expression, found {t}"))),
        }
    }
}

fn free_names_p(p: &NP, bound: &mut Vec<String>, out: &mut Vec<String>) {
    match p {
        NP::Iff(a, b) | NP::Imp(a, b) | NP::Or(a, b) | NP::And(a, b) => {
            free_names_p(a, bound, out);
            free_names_p(b, bound, out);
        }
        NP::Not(a) => free_names_p(a, bound, out),
        NP::Forall(x, a) | NP::Exists(x, a) => {
            bound.push(x.clone());
            free_names_p(a, bound, out);
            bound.pop();
        }
        NP::Eq(a, b) | NP::In(a, b) => {
            free_names_e(a, bound, out);
            free_names_e(b, bound, out);
        }
        NP::PVar(_) => {}
    }
}

fn free_names_e(e: &NE, bound: &mut Vec<String>, out: &mut Vec<String>) {
    match e {
        NE::Name(n) => {
            if !bound.contains(n) && !out.contains(n) {
                out.push(n.clone());
            }
        }
        NE::MapsTo(a, b) | NE::Prod(a, b) => {
            free_names_e(a, bound, out);
            free_names_e(b, bound, out);
        }
        NE::Choice(a) | NE::Pow(a) => free_names_e(a, bound, out),
        NE::Cmp(x, set, body) => {
            free_names_e(set, bound, out);
            bound.push(x.clone());
            free_names_p(body, bound, out);
            bound.pop();
        }
        NE::Big | NE::Elem(_) => {}
    }
}

/// Converts named syntax to internal form through the binding functions.
struct Lower<'a> {
    scope: &'a ScopeTable,
    base: u32,
    env: Vec<(String, Index)>,
}

impl Lower<'_> {
    fn temp(&self) -> Index {
        Index::of(self.base + self.env.len() as u32)
    }

    fn under<T>(&mut self, x: &str, f: impl FnOnce(&mut Self) -> T) -> (Index, T) {
        let i = self.temp();
        self.env.push((x.to_string(), i));
        let out = f(self);
        self.env.pop();
        (i, out)
    }

    fn pred(&mut self, p: &NP) -> Pred {
        match p {
            NP::Iff(a, b) => Pred::iff(self.pred(a), self.pred(b)),
            NP::Imp(a, b) => Pred::implies(self.pred(a), self.pred(b)),
            NP::Or(a, b) => Pred::or(self.pred(a), self.pred(b)),
            NP::And(a, b) => Pred::and(self.pred(a), self.pred(b)),
            NP::Not(a) => Pred::not(self.pred(a)),
            NP::Forall(x, a) => {
                let (i, body) = self.under(x, |l| l.pred(a));
                bind_forall(i, &body)
            }
            NP::Exists(x, a) => {
                let (i, body) = self.under(x, |l| l.pred(a));
                bind_exists(i, &body)
            }
            NP::Eq(a, b) => Pred::eq(self.expr(a), self.expr(b)),
            NP::In(a, b) => Pred::member(self.expr(a), self.expr(b)),
            NP::PVar(k) => Pred::Var(PredName::new(k.clone())),
        }
    }

    fn expr(&mut self, e: &NE) -> Expr {
        match e {
            NE::Name(n) => {
                let i = self
                    .env
                    .iter()
                    .rev()
                    .find(|(x, _)| x == n)
                    .map(|(_, i)| *i)
                    .or_else(|| self.scope.get(n))
                    .expect("free names are registered before lowering");
                Expr::Var(i)
            }
            NE::MapsTo(a, b) => Expr::maps_to(self.expr(a), self.expr(b)),
            NE::Prod(a, b) => Expr::prod(self.expr(a), self.expr(b)),
            NE::Choice(a) => Expr::choice(self.expr(a)),
            NE::Pow(a) => Expr::pow(self.expr(a)),
            NE::Big => Expr::Big,
            NE::Cmp(x, set, body) => {
                let set = self.expr(set);
                let (i, body) = self.under(x, |l| l.pred(body));
                bind_cmp(i, &set, &body)
            }
            NE::Elem(j) => Expr::Elem(BigName::new(j.clone())),
        }
    }
}

fn register(scope: &mut ScopeTable, preds: &[&NP], exprs: &[&NE]) {
    let mut names = Vec::new();
    let mut bound = Vec::new();
    for p in preds {
        free_names_p(p, &mut bound, &mut names);
    }
    for e in exprs {
        free_names_e(e, &mut bound, &mut names);
    }
    for n in names {
        scope.intern(&n);
    }
}

fn lower_preds(scope: &mut ScopeTable, ps: &[NP]) -> Vec<Pred> {
    register(scope, &ps.iter().collect::<Vec<_>>(), &[]);
    let mut l = Lower { scope, base: scope.next_index().get(), env: Vec::new() };
    ps.iter().map(|p| l.pred(p)).collect()
}

/// Parses a predicate; new free names are added to `scope`.
pub fn parse_pred(text: &str, scope: &mut ScopeTable) -> Result<Pred, SyntaxError> {
    let mut p = Parser::new(text)?;
    let np = p.pred()?;
    p.expect_end()?;
    Ok(lower_preds(scope, &[np]).remove(0))
}

/// Parses an expression; new free names are added to `scope`.
pub fn parse_expr(text: &str, scope: &mut ScopeTable) -> Result<Expr, SyntaxError> {
    let mut p = Parser::new(text)?;
    let ne = p.expr()?;
    p.expect_end()?;
    register(scope, &[], &[&ne]);
    let mut l = Lower { scope, base: scope.next_index().get(), env: Vec::new() };
    Ok(l.expr(&ne))
}

/// Parses a term of either sort, trying a predicate first.
pub fn parse_term(text: &str, scope: &mut ScopeTable) -> Result<Term, SyntaxError> {
    let mut trial = scope.clone();
    match parse_pred(text, &mut trial) {
        Ok(p) => {
            *scope = trial;
            Ok(Term::Pred(p))
        }
        Err(pe) => match parse_expr(text, scope) {
            Ok(e) => Ok(Term::Expr(e)),
            Err(ee) => Err(if pe.offset() >= ee.offset() { pe } else { ee }),
        },
    }
}

/// Parses `H1, ..., Hn |- G`, or a bare goal.
pub fn parse_sequent(text: &str, scope: &mut ScopeTable) -> Result<Sequent, SyntaxError> {
    let mut p = Parser::new(text)?;
    let mut parts = Vec::new();
    let mut turnstile = p.eat_sym("|-");
    if !turnstile {
        loop {
            parts.push(p.pred()?);
            if p.eat_sym(",") {
                continue;
            }
            if p.eat_sym("|-") {
                turnstile = true;
            }
            break;
        }
    }
    if turnstile {
        parts.push(p.pred()?);
    } else if parts.len() > 1 {
        return Err(parse_error(p.offset(), "expected `|-` after the hypotheses"));
    }
    p.expect_end()?;
    let mut preds = lower_preds(scope, &parts);
    let goal = preds.pop().expect("a goal");
    Ok(Sequent::new(preds, goal))
}

/// Pretty-printer: bound variables are named by binder depth.
struct Printer<'a> {
    scope: &'a ScopeTable,
    env: Vec<String>,
}

impl Printer<'_> {
    fn binder(&mut self) -> String {
        let mut name = format!("v{}", self.env.len() + 1);
        while self.scope.get(&name).is_some() || self.env.contains(&name) {
            name.push('\'');
        }
        name
    }

    fn var(&self, i: Index) -> String {
        let d = self.env.len() as u32;
        if i.get() <= d {
            self.env[(d - i.get()) as usize].clone()
        } else {
            self.scope.display_name(Index::of(i.get() - d))
        }
    }

    fn paren(s: String, level: u8, ctx: u8) -> String {
        if level < ctx {
            format!("({s})")
        } else {
            s
        }
    }

    fn bound(&mut self, kw: &str, body: &Pred) -> String {
        let x = self.binder();
        self.env.push(x.clone());
        let b = self.pred(body, 0);
        self.env.pop();
        format!("{kw} {x} . {b}")
    }

    fn pred(&mut self, p: &Pred, ctx: u8) -> String {
        if let Some((a, b)) = p.as_iff() {
            let s = format!("{} <=> {}", self.pred(a, 1), self.pred(b, 2));
            return Self::paren(s, 1, ctx);
        }
        if let Some(body) = p.as_exists() {
            let s = self.bound("exists", body);
            return Self::paren(s, 0, ctx);
        }
        match p {
            Pred::Forall(body) => {
                let s = self.bound("forall", body);
                Self::paren(s, 0, ctx)
            }
            Pred::Implies(a, b) => {
                let s = format!("{} => {}", self.pred(a, 3), self.pred(b, 2));
                Self::paren(s, 2, ctx)
            }
            Pred::And(a, b) => {
                let s = format!("{} & {}", self.pred(a, 4), self.pred(b, 5));
                Self::paren(s, 4, ctx)
            }
            Pred::Not(a) => {
                let s = format!("not {}", self.pred(a, 5));
                Self::paren(s, 5, ctx)
            }
            Pred::Eq(a, b) => format!("{} = {}", self.expr(a, 0), self.expr(b, 0)),
            Pred::In(a, b) => format!("{} : {}", self.expr(a, 0), self.expr(b, 0)),
            Pred::Var(k) => format!("#{}", print_name(k.as_str())),
        }
    }

    fn expr(&mut self, e: &Expr, ctx: u8) -> String {
        match e {
            Expr::Var(i) => self.var(*i),
            Expr::MapsTo(a, b) => {
                let s = format!("{} |-> {}", self.expr(a, 1), self.expr(b, 2));
                Self::paren(s, 1, ctx)
            }
            Expr::Prod(a, b) => {
                let s = format!("{} * {}", self.expr(a, 2), self.expr(b, 3));
                Self::paren(s, 2, ctx)
            }
            Expr::Choice(a) => Self::paren(format!("choice {}", self.expr(a, 3)), 3, ctx),
            Expr::Pow(a) => Self::paren(format!("pow {}", self.expr(a, 3)), 3, ctx),
            Expr::Big => "BIG".to_string(),
            Expr::Cmp(set, body) => {
                let set = self.expr(set, 0);
                let x = self.binder();
                self.env.push(x.clone());
                let b = self.pred(body, 0);
                self.env.pop();
                format!("{{ {x} : {set} | {b} }}")
            }
            Expr::Elem(j) => format!("@{}", print_name(j.as_str())),
        }
    }
}

fn print_name(s: &str) -> String {
    if is_plain_name(s) {
        s.to_string()
    } else {
        crate::term::quote(s)
    }
}

pub fn print_pred(p: &Pred, scope: &ScopeTable) -> String {
    Printer { scope, env: Vec::new() }.pred(p, 0)
}

pub fn print_expr(e: &Expr, scope: &ScopeTable) -> String {
    Printer { scope, env: Vec::new() }.expr(e, 0)
}

pub fn print_term(t: &Term, scope: &ScopeTable) -> String {
    match t {
        Term::Pred(p) => print_pred(p, scope),
        Term::Expr(e) => print_expr(e, scope),
    }
}

pub fn print_sequent(s: &Sequent, scope: &ScopeTable) -> String {
    let hyps: Vec<String> = s.hyps.iter().map(|h| print_pred(h, scope)).collect();
    let goal = print_pred(&s.goal, scope);
    if hyps.is_empty() {
        format!("|- {goal}")
    } else {
        format!("{} |- {goal}", hyps.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> Expr {
        Expr::var(i)
    }

    fn scope(names: &[&str]) -> ScopeTable {
        let mut s = ScopeTable::new();
        for n in names {
            s.intern(n);
        }
        s
    }

    #[test]
    fn functional_diagram() {
        let mut sc = ScopeTable::new();
        let p = parse_pred("forall x . x : { y : E | x = y }", &mut sc).unwrap();
        assert_eq!(p, Pred::forall(Pred::member(v(1), Expr::cmp(v(2), Pred::eq(v(2), v(1))))));
        assert_eq!(sc.get("E"), Some(Index::ONE));
    }

    #[test]
    fn constants_and_leaves() {
        let mut sc = ScopeTable::new();
        assert_eq!(parse_expr("BIG", &mut sc).unwrap(), Expr::Big);
        let p = parse_pred("x : y", &mut sc).unwrap();
        assert_eq!(p, Pred::member(v(1), v(2)));
        assert_eq!(print_pred(&p, &sc), "x : y");
    }

    #[test]
    fn printing_examples() {
        let sc = scope(&["x"]);
        assert_eq!(print_pred(&Pred::forall(Pred::member(v(1), v(2))), &sc), "forall v1 . v1 : x");
        assert_eq!(print_expr(&Expr::Big, &sc), "BIG");
        let c = Expr::cmp(Expr::Big, Pred::eq(v(1), v(1)));
        assert_eq!(print_expr(&c, &sc), "{ v1 : BIG | v1 = v1 }");
    }

    #[test]
    fn precedence() {
        let mut sc = scope(&["a", "b", "c"]);
        let p = parse_pred("a = a & b = b => c = c", &mut sc).unwrap();
        let (a, b, c) = (Pred::eq(v(1), v(1)), Pred::eq(v(2), v(2)), Pred::eq(v(3), v(3)));
        assert_eq!(p, Pred::implies(Pred::and(a.clone(), b.clone()), c.clone()));
        let p = parse_pred("not a = a & b = b", &mut sc).unwrap();
        assert_eq!(p, Pred::and(Pred::not(a.clone()), b.clone()));
        let p = parse_pred("a = a => b = b => c = c", &mut sc).unwrap();
        assert_eq!(p, Pred::implies(a.clone(), Pred::implies(b.clone(), c.clone())));
        let e = parse_expr("a |-> b * c", &mut sc).unwrap();
        assert_eq!(e, Expr::maps_to(v(1), Expr::prod(v(2), v(3))));
        let e = parse_expr("pow a * b", &mut sc).unwrap();
        assert_eq!(e, Expr::prod(Expr::pow(v(1)), v(2)));
    }

    #[test]
    fn parenthesised_expressions_and_predicates() {
        let mut sc = scope(&["a", "b", "c"]);
        let p = parse_pred("(a |-> b) : c", &mut sc).unwrap();
        assert_eq!(p, Pred::member(Expr::maps_to(v(1), v(2)), v(3)));
        let p = parse_pred("(a = b)", &mut sc).unwrap();
        assert_eq!(p, Pred::eq(v(1), v(2)));
        let p = parse_pred("(a) = b", &mut sc).unwrap();
        assert_eq!(p, Pred::eq(v(1), v(2)));
    }

    #[test]
    fn sort_errors() {
        let mut sc = ScopeTable::new();
        assert!(matches!(parse_pred("x & y = y", &mut sc), Err(SyntaxError::Sort { .. })));
        assert!(matches!(parse_expr("#k", &mut sc), Err(SyntaxError::Sort { .. })));
        assert!(matches!(parse_pred("x = (#k)", &mut sc), Err(SyntaxError::Sort { .. })));
        assert!(matches!(parse_pred("x = ", &mut sc), Err(SyntaxError::Parse { .. })));
    }

    #[test]
    fn sequents() {
        let mut sc = ScopeTable::new();
        let s = parse_sequent("#p, #q |- #p & #q", &mut sc).unwrap();
        assert_eq!(s.hyps, vec![Pred::var("p"), Pred::var("q")]);
        assert_eq!(print_sequent(&s, &sc), "#p, #q |- #p & #q");
        let s = parse_sequent("|- #p => #p", &mut sc).unwrap();
        assert!(s.hyps.is_empty());
        let s = parse_sequent("#p => #p", &mut sc).unwrap();
        assert_eq!(print_sequent(&s, &sc), "|- #p => #p");
    }

    #[test]
    fn sugar_round_trips() {
        let mut sc = ScopeTable::new();
        for text in [
            "exists v1 . v1 : S",
            "#a <=> #b",
            "not (#a & #b)",
            "(forall v1 . v1 = v1) & #a",
            "x : { v1 : S | exists v2 . v2 |-> v1 : R }",
        ] {
            let p = parse_pred(text, &mut sc).unwrap();
            assert_eq!(print_pred(&p, &sc), text);
        }
    }

    #[test]
    fn binder_names_avoid_scope_names() {
        let mut sc = ScopeTable::new();
        let p = parse_pred("forall y . y = v1", &mut sc).unwrap();
        let printed = print_pred(&p, &sc);
        assert_eq!(printed, "forall v1' . v1' = v1");
        assert_eq!(parse_pred(&printed, &mut sc).unwrap(), p);
    }

    #[test]
    fn uncovered_indexes_get_names() {
        let mut sc = scope(&["x1"]);
        let p = Pred::eq(v(1), v(2));
        assert_eq!(print_pred(&p, &sc), "x1 = x2");
        sc.cover([&Term::Pred(p.clone())]);
        assert_eq!(sc.get("x2"), Some(Index::of(2)));
    }

    #[test]
    fn quoted_names() {
        let mut sc = ScopeTable::new();
        let p = parse_pred("@\"a b\" : BIG", &mut sc).unwrap();
        assert_eq!(p, Pred::member(Expr::elem("a b"), Expr::Big));
        assert_eq!(print_pred(&p, &sc), "@\"a b\" : BIG");
    }
}
