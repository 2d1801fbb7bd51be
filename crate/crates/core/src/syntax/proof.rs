//! Canonical text form of proof trees.
//!
//! ```text
//! (scope ("x" 1) ("y" 2))
//! (ImpIntro
//!   (Hyp (hyps (pvar "p")) (term (pvar "p"))))
//! ```
//!
//! Each node is its rule name, its arguments and then its premises, one
//! per line and indented. Arguments are `(hyps P...)`, `(term T)`,
//! `(idx n)` and `(name "s")`; terms use the De Bruijn rendering of
//! [`Pred`] and [`Expr`]. The optional scope line only carries display names.

use std::fmt::Write as _;

use thiserror::Error;

use crate::binder::HypList;
use crate::kernel::{Congruence, CongruenceKind, Derived, Node, ProofTree, Rule, RuleTag};
use crate::term::{quote, BigName, Expr, Index, Pred, PredName, Term};

use super::{read_quoted, ScopeTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed proof at offset {offset}: {reason}")]
pub struct DecodeError {
    pub offset: usize,
    pub reason: String,
}

fn fail<T>(offset: usize, reason: impl Into<String>) -> Result<T, DecodeError> {
    Err(DecodeError { offset, reason: reason.into() })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofFile {
    pub scope: ScopeTable,
    pub tree: ProofTree,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Slot {
    Hyps,
    Pred,
    Expr,
    Term,
    Idx,
    Name,
}

enum Val {
    Hyps(HypList),
    Term(Term),
    Idx(Index),
    Name(String),
}

fn schema(tag: &str) -> Option<&'static [Slot]> {
    use Slot::*;
    if let Some(t) = RuleTag::from_name(tag) {
        return Some(match t {
            RuleTag::Hyp => &[Hyps, Pred],
            RuleTag::Weaken => &[Hyps],
            RuleTag::EqRefl => &[Hyps, Expr],
            RuleTag::ForallIntro => &[Idx],
            RuleTag::ForallElim => &[Expr],
            RuleTag::CmpAxiom => &[Expr, Expr],
            RuleTag::Leibniz => &[Idx, Pred],
            RuleTag::ChoiceAxiom => &[Hyps, Idx, Expr],
            RuleTag::PowAxiom => &[Hyps, Idx, Expr, Expr],
            RuleTag::BigElem => &[Hyps, Name],
            RuleTag::BigDistinct => &[Hyps, Name, Name],
            RuleTag::ProdChar => &[Hyps, Idx, Idx, Expr, Expr, Expr],
            _ => &[],
        });
    }
    if CongruenceKind::from_name(tag).is_some() {
        return Some(&[Name, Term, Hyps]);
    }
    Some(match tag {
        "Identity" | "OrIntroL" | "OrIntroR" => &[Pred],
        "Cut" | "ModusPonens" | "IffMp" | "IffMpRev" | "IffSym" | "IffTrans" => &[],
        "AlphaForallIntro" => &[Idx, Idx, Pred],
        "InternalForallIntro" => &[Idx, Pred],
        "IffRefl" => &[Hyps, Pred],
        _ => return None,
    })
}

fn args(node: &Node) -> Vec<Val> {
    let p = |p: &Pred| Val::Term(Term::Pred(p.clone()));
    let e = |e: &Expr| Val::Term(Term::Expr(e.clone()));
    let h = |h: &HypList| Val::Hyps(h.clone());
    match node {
        Node::Rule(r) => match r {
            Rule::Hyp { hyps, goal } => vec![h(hyps), p(goal)],
            Rule::Weaken { hyps } => vec![h(hyps)],
            Rule::EqRefl { hyps, expr } => vec![h(hyps), e(expr)],
            Rule::ForallIntro { index } => vec![Val::Idx(*index)],
            Rule::ForallElim { witness } => vec![e(witness)],
            Rule::CmpAxiom { member, set } => vec![e(member), e(set)],
            Rule::Leibniz { index, body } => vec![Val::Idx(*index), p(body)],
            Rule::ChoiceAxiom { hyps, index, set } => vec![h(hyps), Val::Idx(*index), e(set)],
            Rule::PowAxiom { hyps, index, left, right } => {
                vec![h(hyps), Val::Idx(*index), e(left), e(right)]
            }
            Rule::BigElem { hyps, name } => vec![h(hyps), Val::Name(name.0.clone())],
            Rule::BigDistinct { hyps, left, right } => {
                vec![h(hyps), Val::Name(left.0.clone()), Val::Name(right.0.clone())]
            }
            Rule::ProdChar { hyps, first, second, elem, left, right } => vec![
                h(hyps),
                Val::Idx(*first),
                Val::Idx(*second),
                e(elem),
                e(left),
                e(right),
            ],
            Rule::ImpElim
            | Rule::ImpIntro
            | Rule::AndIntro
            | Rule::AndElimL
            | Rule::AndElimR
            | Rule::NotPos
            | Rule::NotNeg
            | Rule::ExtIntro
            | Rule::PairInjL
            | Rule::PairInjR => vec![],
        },
        Node::Derived(d) => match d {
            Derived::Identity { goal } => vec![p(goal)],
            Derived::AlphaForallIntro { fresh, index, body } => {
                vec![Val::Idx(*fresh), Val::Idx(*index), p(body)]
            }
            Derived::InternalForallIntro { index, body } => vec![Val::Idx(*index), p(body)],
            Derived::OrIntroL { right } => vec![p(right)],
            Derived::OrIntroR { left } => vec![p(left)],
            Derived::IffRefl { hyps, pred } => vec![h(hyps), p(pred)],
            Derived::Cut
            | Derived::ModusPonens
            | Derived::IffMp
            | Derived::IffMpRev
            | Derived::IffSym
            | Derived::IffTrans => vec![],
        },
        Node::Congruence(c) => vec![
            Val::Name(c.name.as_str().to_string()),
            Val::Term(c.target.clone()),
            h(&c.hyps),
        ],
    }
}

struct Vals(std::vec::IntoIter<Val>);

impl Vals {
    fn hyps(&mut self) -> HypList {
        match self.0.next() {
            Some(Val::Hyps(h)) => h,
            _ => unreachable!("checked against the schema"),
        }
    }

    fn term(&mut self) -> Term {
        match self.0.next() {
            Some(Val::Term(t)) => t,
            _ => unreachable!("checked against the schema"),
        }
    }

    fn pred(&mut self) -> Pred {
        match self.term() {
            Term::Pred(p) => p,
            Term::Expr(_) => unreachable!("checked against the schema"),
        }
    }

    fn expr(&mut self) -> Expr {
        match self.term() {
            Term::Expr(e) => e,
            Term::Pred(_) => unreachable!("checked against the schema"),
        }
    }

    fn idx(&mut self) -> Index {
        match self.0.next() {
            Some(Val::Idx(i)) => i,
            _ => unreachable!("checked against the schema"),
        }
    }

    fn name(&mut self) -> String {
        match self.0.next() {
            Some(Val::Name(n)) => n,
            _ => unreachable!("checked against the schema"),
        }
    }
}

fn build(tag: &str, vals: Vec<Val>) -> Node {
    let mut v = Vals(vals.into_iter());
    if let Some(t) = RuleTag::from_name(tag) {
        return Node::Rule(match t {
            RuleTag::Hyp => Rule::Hyp { hyps: v.hyps(), goal: v.pred() },
            RuleTag::Weaken => Rule::Weaken { hyps: v.hyps() },
            RuleTag::ImpElim => Rule::ImpElim,
            RuleTag::ImpIntro => Rule::ImpIntro,
            RuleTag::AndIntro => Rule::AndIntro,
            RuleTag::AndElimL => Rule::AndElimL,
            RuleTag::AndElimR => Rule::AndElimR,
            RuleTag::NotPos => Rule::NotPos,
            RuleTag::NotNeg => Rule::NotNeg,
            RuleTag::EqRefl => Rule::EqRefl { hyps: v.hyps(), expr: v.expr() },
            RuleTag::ForallIntro => Rule::ForallIntro { index: v.idx() },
            RuleTag::ForallElim => Rule::ForallElim { witness: v.expr() },
            RuleTag::CmpAxiom => Rule::CmpAxiom { member: v.expr(), set: v.expr() },
            RuleTag::Leibniz => Rule::Leibniz { index: v.idx(), body: v.pred() },
            RuleTag::ChoiceAxiom => Rule::ChoiceAxiom { hyps: v.hyps(), index: v.idx(), set: v.expr() },
            RuleTag::PowAxiom => Rule::PowAxiom {
                hyps: v.hyps(),
                index: v.idx(),
                left: v.expr(),
                right: v.expr(),
            },
            RuleTag::ExtIntro => Rule::ExtIntro,
            RuleTag::BigElem => Rule::BigElem { hyps: v.hyps(), name: BigName::new(v.name()) },
            RuleTag::BigDistinct => Rule::BigDistinct {
                hyps: v.hyps(),
                left: BigName::new(v.name()),
                right: BigName::new(v.name()),
            },
            RuleTag::PairInjL => Rule::PairInjL,
            RuleTag::PairInjR => Rule::PairInjR,
            RuleTag::ProdChar => Rule::ProdChar {
                hyps: v.hyps(),
                first: v.idx(),
                second: v.idx(),
                elem: v.expr(),
                left: v.expr(),
                right: v.expr(),
            },
        });
    }
    if let Some(kind) = CongruenceKind::from_name(tag) {
        return Node::Congruence(Congruence {
            kind,
            name: PredName::new(v.name()),
            target: v.term(),
            hyps: v.hyps(),
        });
    }
    Node::Derived(match tag {
        "Identity" => Derived::Identity { goal: v.pred() },
        "Cut" => Derived::Cut,
        "ModusPonens" => Derived::ModusPonens,
        "AlphaForallIntro" => Derived::AlphaForallIntro { fresh: v.idx(), index: v.idx(), body: v.pred() },
        "InternalForallIntro" => Derived::InternalForallIntro { index: v.idx(), body: v.pred() },
        "OrIntroL" => Derived::OrIntroL { right: v.pred() },
        "OrIntroR" => Derived::OrIntroR { left: v.pred() },
        "IffMp" => Derived::IffMp,
        "IffMpRev" => Derived::IffMpRev,
        "IffRefl" => Derived::IffRefl { hyps: v.hyps(), pred: v.pred() },
        "IffSym" => Derived::IffSym,
        "IffTrans" => Derived::IffTrans,
        _ => unreachable!("tag has a schema"),
    })
}

fn write_val(out: &mut String, v: &Val) {
    match v {
        Val::Hyps(h) => {
            out.push_str("(hyps");
            for p in h {
                let _ = write!(out, " {p}");
            }
            out.push(')');
        }
        Val::Term(t) => {
            let _ = write!(out, "(term {t})");
        }
        Val::Idx(i) => {
            let _ = write!(out, "(idx {i})");
        }
        Val::Name(n) => {
            let _ = write!(out, "(name {})", quote(n));
        }
    }
}

fn write_tree(out: &mut String, tree: &ProofTree, depth: usize) {
    out.push('(');
    out.push_str(tree.node.name());
    for v in args(&tree.node) {
        out.push(' ');
        write_val(out, &v);
    }
    for p in &tree.premises {
        out.push('\n');
        for _ in 0..=depth {
            out.push_str("  ");
        }
        write_tree(out, p, depth + 1);
    }
    out.push(')');
}

/// Renders a proof; the scope line is omitted when `scope` is empty.
pub fn encode_proof(tree: &ProofTree, scope: &ScopeTable) -> String {
    let mut out = String::new();
    if !scope.is_empty() {
        out.push_str("(scope");
        for (n, i) in scope.entries() {
            let _ = write!(out, " ({} {i})", quote(n));
        }
        out.push_str(")\n");
    }
    write_tree(&mut out, tree, 0);
    out.push('\n');
    out
}

#[derive(Clone, Debug)]
enum Sx {
    Atom(String, usize),
    Str(String, usize),
    Int(u32, usize),
    List(Vec<Sx>, usize),
}

impl Sx {
    fn offset(&self) -> usize {
        match self {
            Sx::Atom(_, o) | Sx::Str(_, o) | Sx::Int(_, o) | Sx::List(_, o) => *o,
        }
    }
}

struct Reader<'a> {
    text: &'a str,
    pos: usize,
}

impl Reader<'_> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.text.len()
    }

    fn read(&mut self) -> Result<Sx, DecodeError> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.text[start..];
        let Some(c) = rest.chars().next() else {
            return fail(start, "unexpected end of input");
        };
        match c {
            '(' => {
                self.pos += 1;
                let mut items = Vec::new();
                loop {
                    self.skip_ws();
                    match self.text[self.pos..].chars().next() {
                        Some(')') => {
                            self.pos += 1;
                            return Ok(Sx::List(items, start));
                        }
                        None => return fail(self.pos, "unclosed `(`"),
                        _ => items.push(self.read()?),
                    }
                }
            }
            ')' => fail(start, "unexpected `)`"),
            '"' => {
                let (s, len) = read_quoted(rest).map_or_else(|| fail(start, "unterminated string"), Ok)?;
                self.pos += len;
                Ok(Sx::Str(s, start))
            }
            c if c.is_ascii_digit() => {
                let len = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
                self.pos += len;
                match rest[..len].parse() {
                    Ok(n) => Ok(Sx::Int(n, start)),
                    Err(_) => fail(start, "number out of range"),
                }
            }
            c if c.is_ascii_alphabetic() => {
                let len = rest.find(|c: char| !c.is_ascii_alphanumeric() && c != '_').unwrap_or(rest.len());
                self.pos += len;
                Ok(Sx::Atom(rest[..len].to_string(), start))
            }
            c => fail(start, format!("unexpected character `{c}`")),
        }
    }
}

fn head(sx: &Sx) -> Result<(&str, &[Sx], usize), DecodeError> {
    match sx {
        Sx::List(items, o) => match items.split_first() {
            Some((Sx::Atom(a, _), rest)) => Ok((a, rest, *o)),
            _ => fail(*o, "expected a tagged list"),
        },
        other => fail(other.offset(), "expected a list"),
    }
}

fn arity(tag: &str, rest: &[Sx], n: usize, o: usize) -> Result<(), DecodeError> {
    if rest.len() != n {
        return fail(o, format!("`{tag}` takes {n} argument(s), found {}", rest.len()));
    }
    Ok(())
}

fn string(sx: &Sx) -> Result<String, DecodeError> {
    match sx {
        Sx::Str(s, _) => Ok(s.clone()),
        other => fail(other.offset(), "expected a string"),
    }
}

fn index(sx: &Sx) -> Result<Index, DecodeError> {
    match sx {
        Sx::Int(n, o) => Index::new(*n).map_or_else(|| fail(*o, "indexes start at 1"), Ok),
        other => fail(other.offset(), "expected an index"),
    }
}

fn term(sx: &Sx) -> Result<Term, DecodeError> {
    let (tag, rest, o) = head(sx)?;
    let p = |k: usize| pred(&rest[k]);
    let e = |k: usize| expr(&rest[k]);
    let n = |k| arity(tag, rest, k, o);
    Ok(match tag {
        "and" => n(2).and_then(|_| Ok(Pred::and(p(0)?, p(1)?)))?.into(),
        "imp" => n(2).and_then(|_| Ok(Pred::implies(p(0)?, p(1)?)))?.into(),
        "not" => n(1).and_then(|_| Ok(Pred::not(p(0)?)))?.into(),
        "all" => n(1).and_then(|_| Ok(Pred::forall(p(0)?)))?.into(),
        "eq" => n(2).and_then(|_| Ok(Pred::eq(e(0)?, e(1)?)))?.into(),
        "in" => n(2).and_then(|_| Ok(Pred::member(e(0)?, e(1)?)))?.into(),
        "pvar" => n(1).and_then(|_| Ok(Pred::Var(PredName::new(string(&rest[0])?))))?.into(),
        "var" => n(1).and_then(|_| Ok(Expr::Var(index(&rest[0])?)))?.into(),
        "map" => n(2).and_then(|_| Ok(Expr::maps_to(e(0)?, e(1)?)))?.into(),
        "choice" => n(1).and_then(|_| Ok(Expr::choice(e(0)?)))?.into(),
        "big" => n(0).map(|_| Expr::Big)?.into(),
        "pow" => n(1).and_then(|_| Ok(Expr::pow(e(0)?)))?.into(),
        "prod" => n(2).and_then(|_| Ok(Expr::prod(e(0)?, e(1)?)))?.into(),
        "cmp" => n(2).and_then(|_| Ok(Expr::cmp(e(0)?, p(1)?)))?.into(),
        "elem" => n(1).and_then(|_| Ok(Expr::Elem(BigName::new(string(&rest[0])?))))?.into(),
        _ => return fail(o, format!("unknown term constructor `{tag}`")),
    })
}

fn pred(sx: &Sx) -> Result<Pred, DecodeError> {
    match term(sx)? {
        Term::Pred(p) => Ok(p),
        Term::Expr(_) => fail(sx.offset(), "expected a predicate, found an expression"),
    }
}

fn expr(sx: &Sx) -> Result<Expr, DecodeError> {
    match term(sx)? {
        Term::Expr(e) => Ok(e),
        Term::Pred(_) => fail(sx.offset(), "expected an expression, found a predicate"),
    }
}

fn value(slot: Slot, sx: &Sx) -> Result<Val, DecodeError> {
    let (tag, rest, o) = head(sx)?;
    let want = match slot {
        Slot::Hyps => "hyps",
        Slot::Pred | Slot::Expr | Slot::Term => "term",
        Slot::Idx => "idx",
        Slot::Name => "name",
    };
    if tag != want {
        return fail(o, format!("expected a `{want}` argument, found `{tag}`"));
    }
    if slot == Slot::Hyps {
        return Ok(Val::Hyps(rest.iter().map(pred).collect::<Result<_, _>>()?));
    }
    arity(tag, rest, 1, o)?;
    Ok(match slot {
        Slot::Pred => Val::Term(Term::Pred(pred(&rest[0])?)),
        Slot::Expr => Val::Term(Term::Expr(expr(&rest[0])?)),
        Slot::Term => Val::Term(term(&rest[0])?),
        Slot::Idx => Val::Idx(index(&rest[0])?),
        Slot::Name => Val::Name(string(&rest[0])?),
        Slot::Hyps => unreachable!(),
    })
}

fn tree(sx: &Sx) -> Result<ProofTree, DecodeError> {
    let (tag, rest, o) = head(sx)?;
    let Some(slots) = schema(tag) else {
        return fail(o, format!("unknown rule `{tag}`"));
    };
    if rest.len() < slots.len() {
        return fail(o, format!("`{tag}` needs {} argument(s)", slots.len()));
    }
    let vals = slots.iter().zip(rest).map(|(s, x)| value(*s, x)).collect::<Result<Vec<_>, _>>()?;
    let premises = rest[slots.len()..].iter().map(tree).collect::<Result<Vec<_>, _>>()?;
    Ok(ProofTree::new(build(tag, vals), premises))
}

fn scope(items: &[Sx]) -> Result<ScopeTable, DecodeError> {
    let mut table = ScopeTable::new();
    for item in items {
        match item {
            Sx::List(pair, o) if pair.len() == 2 => {
                let name = string(&pair[0])?;
                let i = index(&pair[1])?;
                if table.get(&name).is_some() || table.name_of(i).is_some() {
                    return fail(*o, format!("duplicate scope entry `{name}`"));
                }
                table.bind(&name, i);
            }
            other => return fail(other.offset(), "expected a (\"name\" index) pair"),
        }
    }
    Ok(table)
}

/// Parses a proof file.
pub fn decode_proof(text: &str) -> Result<ProofFile, DecodeError> {
    let mut r = Reader { text, pos: 0 };
    let mut first = r.read()?;
    let mut table = ScopeTable::new();
    if let Sx::List(items, _) = &first {
        if let Some(Sx::Atom(a, _)) = items.first() {
            if a == "scope" {
                table = scope(&items[1..])?;
                first = r.read()?;
            }
        }
    }
    let proof = tree(&first)?;
    if !r.at_end() {
        return fail(r.pos, "trailing input after the proof");
    }
    Ok(ProofFile { scope: table, tree: proof })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{apply_rule, check, derive};

    fn p() -> Pred {
        Pred::var("p")
    }

    fn sample() -> ProofTree {
        let h = apply_rule(&Rule::Hyp { hyps: vec![p()], goal: p() }, &[]).unwrap();
        let t = apply_rule(&Rule::ImpIntro, &[h]).unwrap();
        let r = derive(&Derived::IffRefl { hyps: vec![], pred: p() }, &[]).unwrap();
        let both = apply_rule(&Rule::AndIntro, &[t, r]).unwrap();
        both.proof().clone()
    }

    #[test]
    fn round_trip() {
        let tree = sample();
        let mut scope = ScopeTable::new();
        scope.intern("x");
        let text = encode_proof(&tree, &scope);
        assert!(text.starts_with("(scope (\"x\" 1))\n(AndIntro\n  (ImpIntro\n    (Hyp (hyps (pvar \"p\"))"));
        let file = decode_proof(&text).unwrap();
        assert_eq!(file.tree, tree);
        assert_eq!(file.scope, scope);
        assert!(check(&file.tree).is_ok());
    }

    #[test]
    fn every_node_kind_round_trips() {
        let e = Expr::var(1);
        let nodes = vec![
            Node::Rule(Rule::ProdChar {
                hyps: vec![p()],
                first: Index::of(2),
                second: Index::of(3),
                elem: e.clone(),
                left: Expr::Big,
                right: Expr::elem("a"),
            }),
            Node::Rule(Rule::BigDistinct { hyps: vec![], left: BigName::new("a"), right: BigName::new("b") }),
            Node::Derived(Derived::AlphaForallIntro { fresh: Index::of(2), index: Index::ONE, body: p() }),
            Node::Congruence(Congruence {
                kind: CongruenceKind::GraftEq,
                name: PredName::new("k"),
                target: Expr::cmp(Expr::Big, Pred::var("k")).into(),
                hyps: vec![],
            }),
        ];
        for node in nodes {
            let tree = ProofTree::leaf(node);
            let text = encode_proof(&tree, &ScopeTable::new());
            assert_eq!(decode_proof(&text).unwrap().tree, tree, "{text}");
        }
    }

    #[test]
    fn rejects_malformed_input() {
        let text = encode_proof(&sample(), &ScopeTable::new());
        for cut in [1, text.len() / 2, text.len() - 2] {
            assert!(decode_proof(&text[..cut]).is_err());
        }
        assert!(decode_proof("(Frobnicate)").is_err());
        assert!(decode_proof("(Hyp (hyps))").is_err());
        assert!(decode_proof("(Hyp (hyps) (term (var 1)))").is_err());
        assert!(decode_proof("(ForallIntro (idx 0))").is_err());
        assert!(decode_proof("(ExtIntro) (ExtIntro)").is_err());
    }
}
