//! Abstract syntax of B predicates and expressions in pure De Bruijn form.
//!
//! The two sorts are separate Rust types, [`Pred`] and [`Expr`], so a
//! sort-incorrect term cannot be built at all. [`Term`] is the union of both
//! and is what sort-agnostic operations (depth, dangling indexes,
//! substitution) accept.

use std::collections::BTreeSet;
use std::fmt;
use std::num::NonZeroU32;
use std::sync::Arc;

/// A De Bruijn index, always at least 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Index(NonZeroU32);

impl Index {
    pub const ONE: Index = Index(NonZeroU32::MIN);

    pub fn new(value: u32) -> Option<Index> {
        NonZeroU32::new(value).map(Index)
    }

    /// Panics on 0.
    pub fn of(value: u32) -> Index {
        Index::new(value).expect("De Bruijn indexes start at 1")
    }

    pub fn get(self) -> u32 {
        self.0.get()
    }

    pub fn succ(self) -> Index {
        Index::of(self.get() + 1)
    }

    pub fn shifted(self, amount: u32) -> Index {
        Index::of(self.get() + amount)
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Name of an element of BIG.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct BigName(pub String);

/// Name of a predicate variable.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PredName(pub String);

impl BigName {
    pub fn new(name: impl Into<String>) -> Self {
        BigName(name.into())
    }
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl PredName {
    pub fn new(name: impl Into<String>) -> Self {
        PredName(name.into())
    }
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for BigName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for PredName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Predicates.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Pred {
    And(Arc<Pred>, Arc<Pred>),
    Implies(Arc<Pred>, Arc<Pred>),
    Not(Arc<Pred>),
    /// Binds index 1 in its body.
    Forall(Arc<Pred>),
    Eq(Arc<Expr>, Arc<Expr>),
    In(Arc<Expr>, Arc<Expr>),
    /// Predicate variable, a placeholder for congruence rewriting.
    Var(PredName),
}

/// Expressions (which include sets and variables).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Expr {
    Var(Index),
    MapsTo(Arc<Expr>, Arc<Expr>),
    Choice(Arc<Expr>),
    Big,
    Pow(Arc<Expr>),
    Prod(Arc<Expr>, Arc<Expr>),
    /// `{ x : e | p }`. Binds index 1 in the predicate only, never in `e`.
    Cmp(Arc<Expr>, Arc<Pred>),
    Elem(BigName),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Term {
    Pred(Pred),
    Expr(Expr),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sort {
    Predicate,
    Expression,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Predicate => f.write_str("predicate"),
            Sort::Expression => f.write_str("expression"),
        }
    }
}

impl Pred {
    pub fn and(p: Pred, q: Pred) -> Pred {
        Pred::And(Arc::new(p), Arc::new(q))
    }

    pub fn implies(p: Pred, q: Pred) -> Pred {
        Pred::Implies(Arc::new(p), Arc::new(q))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(p: Pred) -> Pred {
        Pred::Not(Arc::new(p))
    }

    pub fn forall(body: Pred) -> Pred {
        Pred::Forall(Arc::new(body))
    }

    pub fn eq(e: Expr, f: Expr) -> Pred {
        Pred::Eq(Arc::new(e), Arc::new(f))
    }

    pub fn member(e: Expr, f: Expr) -> Pred {
        Pred::In(Arc::new(e), Arc::new(f))
    }

    pub fn var(name: impl Into<String>) -> Pred {
        Pred::Var(PredName::new(name))
    }

    /// `p <=> q`, an abbreviation for `(p => q) & (q => p)`.
    pub fn iff(p: Pred, q: Pred) -> Pred {
        Pred::and(Pred::implies(p.clone(), q.clone()), Pred::implies(q, p))
    }

    /// `p or q`, an abbreviation for `not p => q`.
    pub fn or(p: Pred, q: Pred) -> Pred {
        Pred::implies(Pred::not(p), q)
    }

    /// Existential over a body already in De Bruijn form: `not forall not body`.
    pub fn exists(body: Pred) -> Pred {
        Pred::not(Pred::forall(Pred::not(body)))
    }

    /// Splits `(p => q) & (q => p)` back into `(p, q)`.
    pub fn as_iff(&self) -> Option<(&Pred, &Pred)> {
        let Pred::And(l, r) = self else { return None };
        let (Pred::Implies(a, b), Pred::Implies(c, d)) = (&**l, &**r) else {
            return None;
        };
        (a == d && b == c).then_some((&**a, &**b))
    }

    /// Body of `not forall not body`.
    pub fn as_exists(&self) -> Option<&Pred> {
        let Pred::Not(inner) = self else { return None };
        let Pred::Forall(inner) = &**inner else { return None };
        let Pred::Not(body) = &**inner else { return None };
        Some(body)
    }
}

impl Expr {
    /// Panics on index 0.
    pub fn var(index: u32) -> Expr {
        Expr::Var(Index::of(index))
    }

    pub fn maps_to(e: Expr, f: Expr) -> Expr {
        Expr::MapsTo(Arc::new(e), Arc::new(f))
    }

    pub fn choice(e: Expr) -> Expr {
        Expr::Choice(Arc::new(e))
    }

    pub fn pow(e: Expr) -> Expr {
        Expr::Pow(Arc::new(e))
    }

    pub fn prod(e: Expr, f: Expr) -> Expr {
        Expr::Prod(Arc::new(e), Arc::new(f))
    }

    pub fn cmp(set: Expr, body: Pred) -> Expr {
        Expr::Cmp(Arc::new(set), Arc::new(body))
    }

    pub fn elem(name: impl Into<String>) -> Expr {
        Expr::Elem(BigName::new(name))
    }
}

impl From<Pred> for Term {
    fn from(p: Pred) -> Self {
        Term::Pred(p)
    }
}

impl From<Expr> for Term {
    fn from(e: Expr) -> Self {
        Term::Expr(e)
    }
}

impl Term {
    pub fn sort(&self) -> Sort {
        sort_of(self)
    }

    pub fn as_pred(&self) -> Option<&Pred> {
        match self {
            Term::Pred(p) => Some(p),
            Term::Expr(_) => None,
        }
    }

    pub fn as_expr(&self) -> Option<&Expr> {
        match self {
            Term::Expr(e) => Some(e),
            Term::Pred(_) => None,
        }
    }

    /// Immediate subterms, left to right.
    pub fn children(&self) -> Vec<Term> {
        match self {
            Term::Pred(p) => match p {
                Pred::And(a, b) | Pred::Implies(a, b) => {
                    vec![Term::Pred((**a).clone()), Term::Pred((**b).clone())]
                }
                Pred::Not(a) | Pred::Forall(a) => vec![Term::Pred((**a).clone())],
                Pred::Eq(a, b) | Pred::In(a, b) => {
                    vec![Term::Expr((**a).clone()), Term::Expr((**b).clone())]
                }
                Pred::Var(_) => vec![],
            },
            Term::Expr(e) => match e {
                Expr::MapsTo(a, b) | Expr::Prod(a, b) => {
                    vec![Term::Expr((**a).clone()), Term::Expr((**b).clone())]
                }
                Expr::Choice(a) | Expr::Pow(a) => vec![Term::Expr((**a).clone())],
                Expr::Cmp(a, p) => vec![Term::Expr((**a).clone()), Term::Pred((**p).clone())],
                Expr::Var(_) | Expr::Big | Expr::Elem(_) => vec![],
            },
        }
    }
}

pub fn sort_of(t: &Term) -> Sort {
    match t {
        Term::Pred(_) => Sort::Predicate,
        Term::Expr(_) => Sort::Expression,
    }
}

/// Syntactic depth: leaves have depth 1, every constructor adds one.
pub fn depth(t: &Term) -> usize {
    match t {
        Term::Pred(p) => pred_depth(p),
        Term::Expr(e) => expr_depth(e),
    }
}

pub fn pred_depth(p: &Pred) -> usize {
    match p {
        Pred::And(a, b) | Pred::Implies(a, b) => 1 + pred_depth(a).max(pred_depth(b)),
        Pred::Not(a) | Pred::Forall(a) => 1 + pred_depth(a),
        Pred::Eq(a, b) | Pred::In(a, b) => 1 + expr_depth(a).max(expr_depth(b)),
        Pred::Var(_) => 1,
    }
}

pub fn expr_depth(e: &Expr) -> usize {
    match e {
        Expr::MapsTo(a, b) | Expr::Prod(a, b) => 1 + expr_depth(a).max(expr_depth(b)),
        Expr::Choice(a) | Expr::Pow(a) => 1 + expr_depth(a),
        Expr::Cmp(a, p) => 1 + expr_depth(a).max(pred_depth(p)),
        Expr::Var(_) | Expr::Big | Expr::Elem(_) => 1,
    }
}

/// Structural equality decider.
pub fn equal(t1: &Term, t2: &Term) -> bool {
    t1 == t2
}

/// Indexes occurring free in `t`, expressed relative to the top of `t`.
pub fn dangling(t: &Term) -> BTreeSet<Index> {
    let mut out = BTreeSet::new();
    match t {
        Term::Pred(p) => collect_pred(p, 0, &mut out),
        Term::Expr(e) => collect_expr(e, 0, &mut out),
    }
    out
}

pub fn pred_dangling(p: &Pred) -> BTreeSet<Index> {
    let mut out = BTreeSet::new();
    collect_pred(p, 0, &mut out);
    out
}

pub fn expr_dangling(e: &Expr) -> BTreeSet<Index> {
    let mut out = BTreeSet::new();
    collect_expr(e, 0, &mut out);
    out
}

fn collect_pred(p: &Pred, crossed: u32, out: &mut BTreeSet<Index>) {
    match p {
        Pred::And(a, b) | Pred::Implies(a, b) => {
            collect_pred(a, crossed, out);
            collect_pred(b, crossed, out);
        }
        Pred::Not(a) => collect_pred(a, crossed, out),
        Pred::Forall(a) => collect_pred(a, crossed + 1, out),
        Pred::Eq(a, b) | Pred::In(a, b) => {
            collect_expr(a, crossed, out);
            collect_expr(b, crossed, out);
        }
        Pred::Var(_) => {}
    }
}

fn collect_expr(e: &Expr, crossed: u32, out: &mut BTreeSet<Index>) {
    match e {
        Expr::Var(i) => {
            if i.get() > crossed {
                out.insert(Index::of(i.get() - crossed));
            }
        }
        Expr::MapsTo(a, b) | Expr::Prod(a, b) => {
            collect_expr(a, crossed, out);
            collect_expr(b, crossed, out);
        }
        Expr::Choice(a) | Expr::Pow(a) => collect_expr(a, crossed, out),
        Expr::Cmp(a, p) => {
            collect_expr(a, crossed, out);
            collect_pred(p, crossed + 1, out);
        }
        Expr::Big | Expr::Elem(_) => {}
    }
}

/// Every `Elem` name occurring in the term.
pub fn big_names(t: &Term, out: &mut BTreeSet<BigName>) {
    match t {
        Term::Expr(Expr::Elem(j)) => {
            out.insert(j.clone());
        }
        _ => {
            for c in t.children() {
                big_names(&c, out);
            }
        }
    }
}

/// Every predicate variable name occurring in the term.
pub fn pred_names(t: &Term, out: &mut BTreeSet<PredName>) {
    match t {
        Term::Pred(Pred::Var(k)) => {
            out.insert(k.clone());
        }
        _ => {
            for c in t.children() {
                pred_names(&c, out);
            }
        }
    }
}

// Compact De Bruijn rendering, the same shape the proof file format uses.

impl fmt::Display for Pred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pred::And(a, b) => write!(f, "(and {a} {b})"),
            Pred::Implies(a, b) => write!(f, "(imp {a} {b})"),
            Pred::Not(a) => write!(f, "(not {a})"),
            Pred::Forall(a) => write!(f, "(all {a})"),
            Pred::Eq(a, b) => write!(f, "(eq {a} {b})"),
            Pred::In(a, b) => write!(f, "(in {a} {b})"),
            Pred::Var(k) => write!(f, "(pvar {})", quote(k.as_str())),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var(i) => write!(f, "(var {i})"),
            Expr::MapsTo(a, b) => write!(f, "(map {a} {b})"),
            Expr::Choice(a) => write!(f, "(choice {a})"),
            Expr::Big => f.write_str("(big)"),
            Expr::Pow(a) => write!(f, "(pow {a})"),
            Expr::Prod(a, b) => write!(f, "(prod {a} {b})"),
            Expr::Cmp(a, p) => write!(f, "(cmp {a} {p})"),
            Expr::Elem(j) => write!(f, "(elem {})", quote(j.as_str())),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Pred(p) => p.fmt(f),
            Term::Expr(e) => e.fmt(f),
        }
    }
}

pub(crate) fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> Expr {
        Expr::var(i)
    }

    #[test]
    fn sort_follows_root_constructor() {
        let k = Pred::var("k");
        assert_eq!(sort_of(&Pred::and(k.clone(), k).into()), Sort::Predicate);
        assert_eq!(sort_of(&v(1).into()), Sort::Expression);
        let c = Expr::cmp(Expr::Big, Pred::eq(v(1), v(1)));
        assert_eq!(sort_of(&c.into()), Sort::Expression);
    }

    #[test]
    fn depth_examples() {
        assert_eq!(depth(&v(1).into()), 1);
        assert_eq!(depth(&Pred::member(v(1), v(2)).into()), 2);
        assert_eq!(depth(&Pred::forall(Pred::member(v(1), v(3))).into()), 3);
    }

    #[test]
    fn equality_examples() {
        let a: Term = Pred::forall(Pred::member(v(1), v(2))).into();
        assert!(equal(&a, &a.clone()));
        assert!(!equal(&v(1).into(), &v(2).into()));
        let (p, q) = (Pred::var("p"), Pred::member(v(1), Expr::Big));
        assert!(equal(
            &Pred::or(p.clone(), q.clone()).into(),
            &Pred::implies(Pred::not(p), q).into()
        ));
    }

    #[test]
    fn dangling_examples() {
        let set = |xs: &[u32]| xs.iter().map(|&i| Index::of(i)).collect::<BTreeSet<_>>();
        assert_eq!(dangling(&Pred::member(v(1), v(2)).into()), set(&[1, 2]));
        assert_eq!(dangling(&Pred::forall(Pred::member(v(1), v(2))).into()), set(&[1]));
        assert_eq!(dangling(&Expr::Big.into()), set(&[]));
        // the comprehension set is outside the binder
        let c = Expr::cmp(v(1), Pred::eq(v(1), v(2)));
        assert_eq!(dangling(&c.into()), set(&[1]));
    }

    #[test]
    fn iff_and_exists_views() {
        let (p, q) = (Pred::var("p"), Pred::var("q"));
        let iff = Pred::iff(p.clone(), q.clone());
        assert_eq!(iff.as_iff(), Some((&p, &q)));
        assert_eq!(Pred::and(p.clone(), q.clone()).as_iff(), None);
        assert_eq!(Pred::exists(p.clone()).as_exists(), Some(&p));
    }

    #[test]
    #[should_panic]
    fn index_zero_rejected() {
        Index::of(0);
    }
}
