use std::collections::HashSet;

use crate::binder::{
    bind_cmp, bind_forall, graft_pred, included, inst_cmp, inst_forall, member, not_free,
    not_free_hyps, pred_var_under_binder, subst, subst_pred,
};
use crate::term::{dangling, equal, pred_dangling, Expr, Index, Pred, PredName, Term};

use super::reference::{
    encoding, included_spec, member_spec, not_free_spec, replace_pred_var,
};
use super::{check_all, index_set, indexes, Execution, LawReport, LiftFn, Universe, PRED_VAR};

fn expect<T: PartialEq + std::fmt::Display>(what: impl Fn() -> String, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{} gives {got}, expected {want}", what()))
    }
}

fn show(set: &std::collections::BTreeSet<Index>) -> String {
    let items: Vec<String> = set.iter().map(|i| i.to_string()).collect();
    format!("{{{}}}", items.join(", "))
}

fn leaves() -> Vec<Expr> {
    Universe::new(1).exprs
}

fn payload_exprs() -> Vec<Expr> {
    Universe::new(2).exprs
}

/// Predicates substituted for `#k`: closed, dangling, and dangling under a
/// binder of their own.
fn payload_preds() -> Vec<Pred> {
    let v = Expr::var;
    vec![
        Pred::member(Expr::Big, Expr::Big),
        Pred::member(v(1), Expr::Big),
        Pred::eq(v(2), v(1)),
        Pred::forall(Pred::eq(v(1), v(2))),
        Pred::var("q"),
    ]
}

/// The binder laws, in a fixed order.
pub fn binder_laws(u: &Universe, exec: Execution, lift: LiftFn) -> Vec<LawReport> {
    let terms = u.terms();
    let leaves = leaves();
    let payloads = payload_exprs();
    let pred_payloads = payload_preds();
    let k = PredName::new(PRED_VAR);
    let mut out = Vec::new();

    out.push(check_all("alpha_forall", exec, &u.preds, |p| {
        let mut n = 0;
        for i1 in indexes() {
            for i2 in indexes().filter(|i2| not_free(*i2, p)) {
                let renamed = subst(i1, &Expr::Var(i2), p);
                expect(|| format!("renaming {i1} to {i2} in {p}"), bind_forall(i2, &renamed), bind_forall(i1, p))?;
                n += 1;
            }
        }
        Ok(n)
    }));

    out.push(check_all("alpha_cmp", exec, &u.preds, |p| {
        let mut n = 0;
        for i1 in indexes() {
            for i2 in indexes().filter(|i2| not_free(*i2, p)) {
                let renamed = subst(i1, &Expr::Var(i2), p);
                for e in &leaves {
                    let what = || format!("renaming {i1} to {i2} in {{ {e} | {p} }}");
                    expect(what, bind_cmp(i2, e, &renamed), bind_cmp(i1, e, p))?;
                    n += 1;
                }
            }
        }
        Ok(n)
    }));

    out.push(check_all("open_bind_var", exec, &u.preds, |p| {
        for i in indexes() {
            let back = inst_forall(&Expr::Var(i), &bind_forall(i, p)).map_err(|e| e.to_string())?;
            expect(|| format!("instantiating the binding of {i} in {p}"), back, p.clone())?;
        }
        Ok(4)
    }));

    out.push(check_all("open_bind_subst", exec, &u.preds, |p| {
        let mut n = 0;
        for i in indexes() {
            let bound = bind_forall(i, p);
            for e in &payloads {
                let got = inst_forall(e, &bound).map_err(|e| e.to_string())?;
                expect(|| format!("instantiating {bound} with {e}"), got, subst(i, e, p))?;
                n += 1;
            }
        }
        Ok(n)
    }));

    out.push(check_all("cmp_roundtrip", exec, &u.preds, |p| {
        let mut n = 0;
        for i in indexes() {
            for e in &payloads {
                let got = inst_cmp(&Expr::Var(i), &bind_cmp(i, e, p)).map_err(|e| e.to_string())?;
                let want = Pred::and(Pred::member(Expr::Var(i), e.clone()), p.clone());
                expect(|| format!("unfolding {i} : {{ {i} : {e} | {p} }}"), got, want)?;
                n += 1;
            }
        }
        Ok(n)
    }));

    out.push(check_all("vacuous_subst", exec, &terms, |t| {
        let mut n = 0;
        for i in indexes().filter(|i| not_free(*i, t)) {
            for e in &leaves {
                expect(|| format!("<{i} := {e}> {t}"), subst(i, e, t), t.clone())?;
                n += 1;
            }
        }
        Ok(n)
    }));

    out.push(check_all("lift_dangling", exec, &terms, |t| {
        let before = dangling(t);
        for cutoff in 0..3u32 {
            let lifted = lift(t, cutoff);
            let want = index_set(before.iter().map(|i| if i.get() > cutoff { i.get() + 1 } else { i.get() }));
            let got = dangling(&lifted);
            if got != want {
                return Err(format!("dangling(lift({t}, {cutoff})) = {}, expected {}", show(&got), show(&want)));
            }
            if !not_free(Index::of(cutoff + 1), &lifted) {
                return Err(format!("index {} is free in lift({t}, {cutoff})", cutoff + 1));
            }
        }
        Ok(3)
    }));

    out.push(check_all("pred_subst_graft", exec, &terms, |t| {
        let captured = pred_var_under_binder(&k, t);
        for p in &pred_payloads {
            let (s, g) = (subst_pred(&k, p, t), graft_pred(&k, p, t));
            let what = || format!("#k := {p} in {t}");
            expect(what, s.clone(), replace_pred_var(&k, p, t, lift, false))?;
            expect(what, g.clone(), replace_pred_var(&k, p, t, lift, true))?;
            let diverge = captured && !pred_dangling(p).is_empty();
            if (s != g) != diverge {
                return Err(format!("{}: substitution and grafting {} ", what(), if diverge { "agree" } else { "differ" }));
            }
        }
        Ok(pred_payloads.len() as u64)
    }));

    out
}

/// Small hypothesis lists: every list of length at most two over the
/// predicates of depth at most two.
fn hyp_lists() -> (Vec<Pred>, Vec<Vec<Pred>>) {
    let preds = Universe::new(2).preds;
    let mut lists = vec![vec![]];
    for a in &preds {
        lists.push(vec![a.clone()]);
        for b in &preds {
            lists.push(vec![a.clone(), b.clone()]);
        }
    }
    (preds, lists)
}

/// Decider agreement with the reference checkers.
pub fn decider_checks(u: &Universe, exec: Execution) -> Vec<LawReport> {
    let terms = u.terms();
    let mut out = Vec::new();

    out.push(check_all("not_free_decider", exec, &terms, |t| {
        let free = dangling(t);
        for i in indexes() {
            let d = not_free(i, t);
            if d != not_free_spec(i.get(), t) {
                return Err(format!("not_free({i}, {t}) = {d} disagrees with the rules"));
            }
            if d == free.contains(&i) {
                return Err(format!("not_free({i}, {t}) = {d} disagrees with dangling = {free:?}"));
            }
        }
        Ok(4)
    }));

    let (small, lists) = hyp_lists();

    out.push(check_all("not_free_hyps", exec, &lists, |g| {
        for i in indexes() {
            let want = g.iter().all(|p| not_free_spec(i.get(), &p.clone().into()));
            if not_free_hyps(i, g) != want {
                return Err(format!("not_free_hyps({i}, {g:?}) should be {want}"));
            }
        }
        Ok(4)
    }));

    let mut sorted: Vec<(String, &Term)> = terms.iter().map(|t| (encoding(t), t)).collect();
    sorted.sort_by(|a, b| a.0.cmp(&b.0));
    let windows: Vec<_> = sorted.windows(2).collect();
    out.push(check_all("equality_adjacent", exec, &windows, |w| {
        let ((ea, a), (eb, b)) = (&w[0], &w[1]);
        if !equal(a, a) || !equal(a, &(*a).clone()) {
            return Err(format!("{a} is not equal to itself"));
        }
        if equal(a, b) != (ea == eb) {
            return Err(format!("equal({a}, {b}) disagrees with the encodings"));
        }
        Ok(2)
    }));

    let distinct: HashSet<&Term> = terms.iter().collect();
    let encodings: HashSet<&String> = sorted.iter().map(|(e, _)| e).collect();
    out.push(LawReport {
        name: "equality_classes",
        cases: terms.len() as u64,
        failure: (distinct.len() != encodings.len())
            .then(|| format!("{} equality classes but {} encodings", distinct.len(), encodings.len())),
    });

    let shallow = Universe::new(2).terms();
    out.push(check_all("equality_pairs", exec, &shallow, |a| {
        for b in &shallow {
            if equal(a, b) != (encoding(a) == encoding(b)) {
                return Err(format!("equal({a}, {b}) disagrees with the encodings"));
            }
        }
        Ok(shallow.len() as u64)
    }));

    out.push(check_all("membership", exec, &lists, |g| {
        for p in &small {
            if member(p, g) != member_spec(p, g) {
                return Err(format!("member({p}, {g:?}) disagrees with the reference"));
            }
        }
        Ok(small.len() as u64)
    }));

    let singletons: Vec<&Vec<Pred>> = lists.iter().filter(|l| l.len() <= 1).collect();
    out.push(check_all("inclusion", exec, &lists, |g| {
        for s in &singletons {
            if included(s, g) != included_spec(s, g) {
                return Err(format!("included({s:?}, {g:?}) disagrees with the reference"));
            }
            if included(g, s) != included_spec(g, s) {
                return Err(format!("included({g:?}, {s:?}) disagrees with the reference"));
            }
        }
        Ok(2 * singletons.len() as u64)
    }));

    out
}
