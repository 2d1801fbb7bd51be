//! De Bruijn machinery: lifting, binding, instantiation, substitution,
//! predicate substitution and grafting, non-freeness and fresh names.
//!
//! Every index-manipulating function is an instance of one traversal that
//! counts the binders it has crossed (`Forall`, and the predicate slot of a
//! comprehension). Each instance only decides what a variable (or predicate
//! variable) becomes at a given binder depth.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::term::{
    big_names, dangling, pred_names, BigName, Expr, Index, Pred, PredName, Term,
};

/// Ordered list of hypotheses. Duplicates are allowed.
pub type HypList = Vec<Pred>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BinderError {
    #[error("instantiation expects a universal quantification, found {0}")]
    NotAForall(Pred),
    #[error("instantiation expects a comprehension set, found {0}")]
    NotAComprehension(Expr),
}

/// What a variable becomes after `depth` binders have been crossed.
#[doc(hidden)]
pub trait VarMap {
    fn var(&self, index: Index, depth: u32) -> Expr;

    fn pred_var(&self, name: &PredName, _depth: u32) -> Pred {
        Pred::Var(name.clone())
    }
}

pub(crate) fn map_pred(p: &Pred, depth: u32, m: &impl VarMap) -> Pred {
    match p {
        Pred::And(a, b) => Pred::and(map_pred(a, depth, m), map_pred(b, depth, m)),
        Pred::Implies(a, b) => Pred::implies(map_pred(a, depth, m), map_pred(b, depth, m)),
        Pred::Not(a) => Pred::not(map_pred(a, depth, m)),
        Pred::Forall(a) => Pred::forall(map_pred(a, depth + 1, m)),
        Pred::Eq(a, b) => Pred::eq(map_expr(a, depth, m), map_expr(b, depth, m)),
        Pred::In(a, b) => Pred::member(map_expr(a, depth, m), map_expr(b, depth, m)),
        Pred::Var(k) => m.pred_var(k, depth),
    }
}

pub(crate) fn map_expr(e: &Expr, depth: u32, m: &impl VarMap) -> Expr {
    match e {
        Expr::Var(i) => m.var(*i, depth),
        Expr::MapsTo(a, b) => Expr::maps_to(map_expr(a, depth, m), map_expr(b, depth, m)),
        Expr::Choice(a) => Expr::choice(map_expr(a, depth, m)),
        Expr::Big => Expr::Big,
        Expr::Pow(a) => Expr::pow(map_expr(a, depth, m)),
        Expr::Prod(a, b) => Expr::prod(map_expr(a, depth, m), map_expr(b, depth, m)),
        Expr::Cmp(a, p) => Expr::cmp(map_expr(a, depth, m), map_pred(p, depth + 1, m)),
        Expr::Elem(j) => Expr::Elem(j.clone()),
    }
}

pub(crate) fn map_term(t: &Term, m: &impl VarMap) -> Term {
    match t {
        Term::Pred(p) => Term::Pred(map_pred(p, 0, m)),
        Term::Expr(e) => Term::Expr(map_expr(e, 0, m)),
    }
}

/// Sort-generic entry points for the traversal based operations.
pub trait Syntax: Sized + Clone {
    #[doc(hidden)]
    fn map_with(&self, m: &impl VarMap) -> Self;
    fn not_free(&self, i: Index) -> bool;
}

impl Syntax for Pred {
    fn map_with(&self, m: &impl VarMap) -> Self {
        map_pred(self, 0, m)
    }
    fn not_free(&self, i: Index) -> bool {
        pred_not_free(i.get(), self)
    }
}

impl Syntax for Expr {
    fn map_with(&self, m: &impl VarMap) -> Self {
        map_expr(self, 0, m)
    }
    fn not_free(&self, i: Index) -> bool {
        expr_not_free(i.get(), self)
    }
}

impl Syntax for Term {
    fn map_with(&self, m: &impl VarMap) -> Self {
        map_term(self, m)
    }
    fn not_free(&self, i: Index) -> bool {
        match self {
            Term::Pred(p) => p.not_free(i),
            Term::Expr(e) => e.not_free(i),
        }
    }
}

struct Shift {
    amount: u32,
    cutoff: u32,
}

impl VarMap for Shift {
    fn var(&self, index: Index, depth: u32) -> Expr {
        if index.get() > self.cutoff + depth {
            Expr::Var(index.shifted(self.amount))
        } else {
            Expr::Var(index)
        }
    }
}

/// Increments every index that dangles relative to `cutoff` binders.
pub fn lift<T: Syntax>(t: &T, cutoff: u32) -> T {
    shift(t, 1, cutoff)
}

/// `amount`-fold [`lift`].
pub fn shift<T: Syntax>(t: &T, amount: u32, cutoff: u32) -> T {
    if amount == 0 {
        return t.clone();
    }
    t.map_with(&Shift { amount, cutoff })
}

struct Bind {
    from: u32,
    to: u32,
}

impl VarMap for Bind {
    fn var(&self, index: Index, depth: u32) -> Expr {
        let (i1, i2) = (self.from + depth, self.to + depth);
        let i = index.get();
        if i < i2 {
            Expr::Var(index)
        } else if i == i1 {
            Expr::Var(Index::of(i2))
        } else {
            Expr::Var(index.succ())
        }
    }
}

/// Turns free index `i1` into the variable bound `i2 - 1` binders up,
/// making room by incrementing the other dangling indexes.
pub fn bind<T: Syntax>(i1: Index, i2: Index, t: &T) -> T {
    t.map_with(&Bind { from: i1.get(), to: i2.get() })
}

/// `forall i . p` in functional form.
pub fn bind_forall(i: Index, p: &Pred) -> Pred {
    Pred::forall(bind(i, Index::ONE, p))
}

/// `exists i . p` in functional form.
pub fn bind_exists(i: Index, p: &Pred) -> Pred {
    Pred::exists(bind(i, Index::ONE, p))
}

/// `{ i : e | p }` in functional form. `e` stays outside the binder.
pub fn bind_cmp(i: Index, e: &Expr, p: &Pred) -> Expr {
    Expr::cmp(e.clone(), bind(i, Index::ONE, p))
}

struct Inst<'a> {
    witness: &'a Expr,
}

impl VarMap for Inst<'_> {
    fn var(&self, index: Index, depth: u32) -> Expr {
        let i = index.get();
        if i == depth + 1 {
            shift(self.witness, depth, 0)
        } else if i > depth + 1 {
            Expr::var(i - 1)
        } else {
            Expr::Var(index)
        }
    }
}

/// Replaces the variable bound by the outermost binder of a body by `e`
/// and closes the gap left by the removed binder.
pub fn open<T: Syntax>(e: &Expr, body: &T) -> T {
    body.map_with(&Inst { witness: e })
}

/// Eliminates `forall` by instantiating its variable with `e`.
pub fn inst_forall(e: &Expr, q: &Pred) -> Result<Pred, BinderError> {
    match q {
        Pred::Forall(body) => Ok(open(e, &**body)),
        other => Err(BinderError::NotAForall(other.clone())),
    }
}

/// `e1 : { x : e | p }` unfolded to `e1 : e & p[x := e1]`.
pub fn inst_cmp(e1: &Expr, e2: &Expr) -> Result<Pred, BinderError> {
    match e2 {
        Expr::Cmp(set, body) => Ok(Pred::and(
            Pred::member(e1.clone(), (**set).clone()),
            open(e1, &**body),
        )),
        other => Err(BinderError::NotAComprehension(other.clone())),
    }
}

struct Subst<'a> {
    target: u32,
    payload: &'a Expr,
}

impl VarMap for Subst<'_> {
    fn var(&self, index: Index, depth: u32) -> Expr {
        if index.get() == self.target + depth {
            shift(self.payload, depth, 0)
        } else {
            Expr::Var(index)
        }
    }
}

/// `<i := e> t`. The payload is lifted each time a binder is crossed.
pub fn subst<T: Syntax>(i: Index, e: &Expr, t: &T) -> T {
    t.map_with(&Subst { target: i.get(), payload: e })
}

struct PredSubst<'a> {
    name: &'a PredName,
    payload: &'a Pred,
    capture: bool,
}

impl VarMap for PredSubst<'_> {
    fn var(&self, index: Index, _depth: u32) -> Expr {
        Expr::Var(index)
    }

    fn pred_var(&self, name: &PredName, depth: u32) -> Pred {
        if name != self.name {
            Pred::Var(name.clone())
        } else if self.capture {
            self.payload.clone()
        } else {
            shift(self.payload, depth, 0)
        }
    }
}

/// `<k :≡ p> t`: capture-avoiding replacement of a predicate variable.
pub fn subst_pred<T: Syntax>(k: &PredName, p: &Pred, t: &T) -> T {
    t.map_with(&PredSubst { name: k, payload: p, capture: false })
}

/// `<k ◁ p> t`: replacement without lifting, so binders of `t` may capture
/// the dangling indexes of `p`.
pub fn graft_pred<T: Syntax>(k: &PredName, p: &Pred, t: &T) -> T {
    t.map_with(&PredSubst { name: k, payload: p, capture: true })
}

/// Structural non-freeness decider.
pub fn not_free<T: Syntax>(i: Index, t: &T) -> bool {
    t.not_free(i)
}

fn pred_not_free(i: u32, p: &Pred) -> bool {
    match p {
        Pred::And(a, b) | Pred::Implies(a, b) => pred_not_free(i, a) && pred_not_free(i, b),
        Pred::Not(a) => pred_not_free(i, a),
        Pred::Forall(a) => pred_not_free(i + 1, a),
        Pred::Eq(a, b) | Pred::In(a, b) => expr_not_free(i, a) && expr_not_free(i, b),
        Pred::Var(_) => true,
    }
}

fn expr_not_free(i: u32, e: &Expr) -> bool {
    match e {
        Expr::Var(j) => j.get() != i,
        Expr::MapsTo(a, b) | Expr::Prod(a, b) => expr_not_free(i, a) && expr_not_free(i, b),
        Expr::Choice(a) | Expr::Pow(a) => expr_not_free(i, a),
        Expr::Cmp(a, p) => expr_not_free(i, a) && pred_not_free(i + 1, p),
        Expr::Big | Expr::Elem(_) => true,
    }
}

/// Non-freeness folded over a hypothesis list.
pub fn not_free_hyps(i: Index, hyps: &[Pred]) -> bool {
    fold_decider(hyps, |p| not_free(i, p))
}

/// Lifts a decider on elements to a decider on lists: true on the empty
/// list, otherwise the head and the folded tail must both hold.
pub fn fold_decider<S>(items: &[S], f: impl Fn(&S) -> bool) -> bool {
    match items.split_first() {
        None => true,
        Some((head, tail)) => f(head) && fold_decider(tail, f),
    }
}

/// Hypothesis membership decider.
pub fn member(p: &Pred, hyps: &[Pred]) -> bool {
    match hyps.split_first() {
        None => false,
        Some((head, tail)) => head == p || member(p, tail),
    }
}

/// Hypothesis inclusion decider: every element of `small` is in `large`.
pub fn included(small: &[Pred], large: &[Pred]) -> bool {
    fold_decider(small, |p| member(p, large))
}

/// Canonical fresh index: one past the largest dangling index of `ts`.
pub fn fresh_index<'a>(ts: impl IntoIterator<Item = &'a Term>) -> Index {
    let max = ts
        .into_iter()
        .filter_map(|t| dangling(t).into_iter().next_back())
        .max();
    match max {
        Some(i) => i.succ(),
        None => Index::ONE,
    }
}

/// [`fresh_index`] over predicates without building a `Term` list.
pub fn fresh_index_preds<'a>(ps: impl IntoIterator<Item = &'a Pred>) -> Index {
    let ts: Vec<Term> = ps.into_iter().map(|p| Term::Pred(p.clone())).collect();
    fresh_index(&ts)
}

/// First name of the form `j0`, `j1`, ... not used by any `Elem` in `ts`.
pub fn fresh_bigname<'a>(ts: impl IntoIterator<Item = &'a Term>) -> BigName {
    let mut used = BTreeSet::new();
    for t in ts {
        big_names(t, &mut used);
    }
    (0..)
        .map(|n| BigName(format!("j{n}")))
        .find(|j| !used.contains(j))
        .expect("unbounded namespace")
}

/// First name of the form `k0`, `k1`, ... not used as a predicate variable in `ts`.
pub fn fresh_predname<'a>(ts: impl IntoIterator<Item = &'a Term>) -> PredName {
    let mut used = BTreeSet::new();
    for t in ts {
        pred_names(t, &mut used);
    }
    (0..)
        .map(|n| PredName(format!("k{n}")))
        .find(|k| !used.contains(k))
        .expect("unbounded namespace")
}

/// True when some occurrence of `k` in `t` sits under at least one binder.
pub fn pred_var_under_binder(k: &PredName, t: &Term) -> bool {
    fn walk_p(k: &PredName, p: &Pred, depth: u32) -> bool {
        match p {
            Pred::And(a, b) | Pred::Implies(a, b) => walk_p(k, a, depth) || walk_p(k, b, depth),
            Pred::Not(a) => walk_p(k, a, depth),
            Pred::Forall(a) => walk_p(k, a, depth + 1),
            Pred::Eq(a, b) | Pred::In(a, b) => walk_e(k, a, depth) || walk_e(k, b, depth),
            Pred::Var(n) => n == k && depth > 0,
        }
    }
    fn walk_e(k: &PredName, e: &Expr, depth: u32) -> bool {
        match e {
            Expr::MapsTo(a, b) | Expr::Prod(a, b) => walk_e(k, a, depth) || walk_e(k, b, depth),
            Expr::Choice(a) | Expr::Pow(a) => walk_e(k, a, depth),
            Expr::Cmp(a, p) => walk_e(k, a, depth) || walk_p(k, p, depth + 1),
            Expr::Var(_) | Expr::Big | Expr::Elem(_) => false,
        }
    }
    match t {
        Term::Pred(p) => walk_p(k, p, 0),
        Term::Expr(e) => walk_e(k, e, 0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> Expr {
        Expr::var(i)
    }
    fn ix(i: u32) -> Index {
        Index::of(i)
    }

    #[test]
    fn lift_examples() {
        assert_eq!(lift(&v(1), 0), v(2));
        let q = Pred::forall(Pred::member(v(1), v(2)));
        assert_eq!(lift(&q, 0), Pred::forall(Pred::member(v(1), v(3))));
        assert_eq!(lift(&Expr::Big, 0), Expr::Big);
        // cutoff protects indexes bound outside the lifted term
        assert_eq!(lift(&v(1), 1), v(1));
        assert_eq!(lift(&v(2), 1), v(3));
    }

    #[test]
    fn bind_examples() {
        assert_eq!(bind(ix(5), ix(1), &v(5)), v(1));
        assert_eq!(bind(ix(5), ix(1), &v(7)), v(8));
        let q = Pred::forall(Pred::eq(v(6), v(6)));
        assert_eq!(bind(ix(5), ix(1), &q), Pred::forall(Pred::eq(v(2), v(2))));
        assert_eq!(bind(ix(5), ix(1), &Expr::Big), Expr::Big);
        assert_eq!(bind(ix(5), ix(1), &Expr::elem("a")), Expr::elem("a"));
        // below i2 untouched
        assert_eq!(bind(ix(5), ix(3), &v(2)), v(2));
    }

    #[test]
    fn functional_diagram_example() {
        // forall x . x : { y : BIG | x = y }  with x = 4, y = 5
        let inner = bind_cmp(ix(5), &Expr::Big, &Pred::eq(v(4), v(5)));
        let t = bind_forall(ix(4), &Pred::member(v(4), inner));
        let expected = Pred::forall(Pred::member(
            v(1),
            Expr::cmp(Expr::Big, Pred::eq(v(2), v(1))),
        ));
        assert_eq!(t, expected);
    }

    #[test]
    fn bind_cmp_leaves_set_unbound() {
        let c = bind_cmp(ix(3), &v(3), &Pred::eq(v(3), v(3)));
        assert_eq!(c, Expr::cmp(v(3), Pred::eq(v(1), v(1))));
    }

    #[test]
    fn vacuous_binder() {
        let p = Pred::member(v(2), Expr::Big);
        assert!(not_free(ix(1), &p));
        assert_eq!(bind_forall(ix(1), &p), Pred::forall(Pred::member(v(3), Expr::Big)));
    }

    #[test]
    fn inst_laws_on_examples() {
        let p = Pred::and(Pred::member(v(2), v(4)), Pred::forall(Pred::eq(v(1), v(3))));
        for i in 1..=4 {
            let q = bind_forall(ix(i), &p);
            assert_eq!(inst_forall(&v(i), &q).unwrap(), p);
            let e = Expr::pow(v(1));
            assert_eq!(inst_forall(&e, &q).unwrap(), subst(ix(i), &e, &p));
        }
        let err = inst_forall(&Expr::Big, &Pred::member(v(1), v(2))).unwrap_err();
        assert!(matches!(err, BinderError::NotAForall(_)));
    }

    #[test]
    fn inst_cmp_examples() {
        let c = Expr::cmp(Expr::Big, Pred::eq(v(1), v(1)));
        assert_eq!(
            inst_cmp(&v(1), &c).unwrap(),
            Pred::and(Pred::member(v(1), Expr::Big), Pred::eq(v(1), v(1)))
        );
        let p = Pred::eq(v(1), v(1));
        assert_eq!(
            inst_cmp(&v(1), &bind_cmp(ix(1), &Expr::Big, &p)).unwrap(),
            Pred::and(Pred::member(v(1), Expr::Big), p)
        );
        assert!(matches!(
            inst_cmp(&v(1), &Expr::Big),
            Err(BinderError::NotAComprehension(_))
        ));
    }

    #[test]
    fn subst_examples() {
        let e = Expr::pow(v(3));
        assert_eq!(subst(ix(2), &e, &v(2)), e);
        assert_eq!(subst(ix(2), &e, &Expr::Big), Expr::Big);
        let q = Pred::forall(Pred::member(v(2), v(1)));
        assert_eq!(
            subst(ix(1), &v(9), &q),
            Pred::forall(Pred::member(v(10), v(1)))
        );
        // other indexes are not renumbered
        assert_eq!(subst(ix(1), &Expr::Big, &v(2)), v(2));
    }

    #[test]
    fn not_free_examples() {
        assert!(not_free(ix(7), &Expr::Big));
        assert!(not_free(ix(1), &Expr::elem("a")));
        assert!(!not_free(ix(1), &Pred::member(v(1), v(2))));
        assert!(!not_free(ix(1), &Pred::forall(Pred::member(v(1), v(2)))));
        assert!(not_free(ix(2), &Pred::forall(Pred::member(v(1), v(2)))));
        assert!(not_free(ix(3), &Pred::var("k")));
        let hyps = vec![Pred::member(v(1), v(2)), Pred::eq(v(3), v(3))];
        assert!(not_free_hyps(ix(4), &hyps));
        assert!(!not_free_hyps(ix(3), &hyps));
        assert!(not_free_hyps(ix(1), &[]));
    }

    #[test]
    fn pred_subst_and_graft_examples() {
        let k = PredName::new("k");
        let p = Pred::member(v(1), Expr::Big);
        assert_eq!(subst_pred(&k, &p, &Pred::var("k")), p);
        assert_eq!(subst_pred(&k, &p, &Pred::var("other")), Pred::var("other"));
        let under = Pred::forall(Pred::var("k"));
        assert_eq!(
            subst_pred(&k, &p, &under),
            Pred::forall(Pred::member(v(2), Expr::Big))
        );
        assert_eq!(graft_pred(&k, &p, &Pred::var("k")), p);
        assert_eq!(
            graft_pred(&k, &p, &under),
            Pred::forall(Pred::member(v(1), Expr::Big))
        );
        assert_eq!(graft_pred(&k, &p, &Expr::Big), Expr::Big);
    }

    #[test]
    fn fresh_examples() {
        let t: Term = Pred::member(v(1), v(2)).into();
        let i = fresh_index([&t]);
        assert_eq!(i, ix(3));
        assert!(not_free(i, &t));
        assert_eq!(fresh_index([&Term::Expr(Expr::Big)]), ix(1));
        assert_eq!(fresh_index(std::iter::empty::<&Term>()), ix(1));
        let with_j0: Term = Expr::elem("j0").into();
        assert_eq!(fresh_bigname([&with_j0]), BigName::new("j1"));
        let with_k0: Term = Pred::var("k0").into();
        assert_eq!(fresh_predname([&with_k0]), PredName::new("k1"));
    }

    #[test]
    fn membership_and_inclusion() {
        let a = Pred::var("a");
        let b = Pred::var("b");
        assert!(member(&a, &[b.clone(), a.clone()]));
        assert!(!member(&a, &[]));
        assert!(included(&[a.clone(), a.clone()], &[b.clone(), a.clone()]));
        assert!(!included(&[a.clone(), b.clone()], &[a]));
        assert!(included(&[], &[]));
    }
}
