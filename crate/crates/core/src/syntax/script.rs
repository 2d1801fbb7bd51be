//! Tactic scripts: one tactical per line, `//` starts a comment.
//!
//! ```text
//! seq    := alt ("then" alt)*
//! alt    := unary ("orelse" unary)*
//! unary  := "repeat" unary | "try" unary | "focus" N unary | "(" seq ")" | call
//! call   := name arg*        arg := "quoted term" | N | name
//! ```

use crate::tactics::script::Arg;
use crate::tactics::Tactical;

use super::{is_plain_name, read_quoted, SyntaxError};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Script {
    /// Line numbers are 1-based.
    pub steps: Vec<(usize, Tactical)>,
}

impl Script {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

const RESERVED: [&str; 5] = ["then", "orelse", "repeat", "try", "focus"];

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Int(usize),
    Text(String),
    Open,
    Close,
    End,
}

fn err(offset: usize, message: impl Into<String>) -> SyntaxError {
    SyntaxError::Parse { offset, message: message.into() }
}

/// Drops a trailing `//` comment outside quotes.
fn strip_comment(line: &str) -> &str {
    let mut in_quote = false;
    let mut escaped = false;
    for (i, c) in line.char_indices() {
        match c {
            _ if escaped => escaped = false,
            '\\' if in_quote => escaped = true,
            '"' => in_quote = !in_quote,
            '/' if !in_quote && line[i + 1..].starts_with('/') => return &line[..i],
            _ => {}
        }
    }
    line
}

fn lex(line: &str, base: usize) -> Result<Vec<(Tok, usize)>, SyntaxError> {
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < line.len() {
        let rest = &line[pos..];
        let c = rest.chars().next().unwrap();
        let at = base + pos;
        if c.is_whitespace() {
            pos += c.len_utf8();
        } else if c == '(' || c == ')' {
            out.push((if c == '(' { Tok::Open } else { Tok::Close }, at));
            pos += 1;
        } else if c == '"' {
            let (s, len) = read_quoted(rest).ok_or_else(|| err(at, "unterminated string"))?;
            out.push((Tok::Text(s), at));
            pos += len;
        } else if c.is_ascii_digit() {
            let len = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
            let n = rest[..len].parse().map_err(|_| err(at, "number out of range"))?;
            out.push((Tok::Int(n), at));
            pos += len;
        } else {
            let len = rest
                .find(|c: char| c.is_whitespace() || c == '(' || c == ')' || c == '"')
                .unwrap_or(rest.len());
            let word = &rest[..len];
            if !is_plain_name(word) {
                return Err(err(at, format!("bad tactic name `{word}`")));
            }
            out.push((Tok::Word(word.to_string()), at));
            pos += len;
        }
    }
    out.push((Tok::End, base + line.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
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

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Word(x) if x == w)
    }

    fn seq(&mut self) -> Result<Tactical, SyntaxError> {
        let mut left = self.alt()?;
        while self.is_word("then") {
            self.bump();
            left = Tactical::Then(Box::new(left), Box::new(self.alt()?));
        }
        Ok(left)
    }

    fn alt(&mut self) -> Result<Tactical, SyntaxError> {
        let mut left = self.unary()?;
        while self.is_word("orelse") {
            self.bump();
            left = Tactical::OrElse(Box::new(left), Box::new(self.unary()?));
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Tactical, SyntaxError> {
        let at = self.offset();
        match self.bump() {
            Tok::Word(w) if w == "repeat" => Ok(Tactical::Repeat(Box::new(self.unary()?))),
            Tok::Word(w) if w == "try" => Ok(Tactical::Try(Box::new(self.unary()?))),
            Tok::Word(w) if w == "focus" => match self.bump() {
                Tok::Int(n) if n > 0 => Ok(Tactical::Focus(n, Box::new(self.unary()?))),
                _ => Err(err(at, "`focus` needs a positive goal number")),
            },
            Tok::Word(w) if RESERVED.contains(&w.as_str()) => Err(err(at, format!("unexpected `{w}`"))),
            Tok::Open => {
                let t = self.seq()?;
                match self.bump() {
                    Tok::Close => Ok(t),
                    _ => Err(err(self.offset(), "expected `)`")),
                }
            }
            Tok::Word(name) => {
                let mut args = Vec::new();
                loop {
                    match self.peek().clone() {
                        Tok::Text(s) => args.push(Arg::Text(s)),
                        Tok::Int(n) => args.push(Arg::Int(n)),
                        Tok::Word(w) if !RESERVED.contains(&w.as_str()) => args.push(Arg::Ident(w)),
                        _ => break,
                    }
                    self.bump();
                }
                Ok(Tactical::Call { name, args })
            }
            Tok::End => Err(err(at, "expected a tactic")),
            t => Err(err(at, format!("unexpected {t:?}"))),
        }
    }
}

fn parse_line(line: &str, base: usize) -> Result<Tactical, SyntaxError> {
    let mut p = Parser { toks: lex(line, base)?, pos: 0 };
    let t = p.seq()?;
    match p.peek() {
        Tok::End => Ok(t),
        _ => Err(err(p.offset(), "unexpected input after the tactic")),
    }
}

/// Parses a single tactical, as typed at a prompt.
pub fn parse_tactical(text: &str) -> Result<Tactical, SyntaxError> {
    parse_line(strip_comment(text), 0)
}

/// Parses a script file. Offsets in errors are into `text`.
pub fn parse_script(text: &str) -> Result<Script, SyntaxError> {
    let mut steps = Vec::new();
    let mut base = 0;
    for (k, raw) in text.split('\n').enumerate() {
        let line = strip_comment(raw);
        if !line.trim().is_empty() {
            steps.push((k + 1, parse_line(line, base)?));
        }
        base += raw.len() + 1;
    }
    Ok(Script { steps })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(name: &str) -> Tactical {
        Tactical::call(name, vec![])
    }

    #[test]
    fn lines_and_comments() {
        let s = parse_script("// header\nimp_intro\n\nhyp // done\n").unwrap();
        assert_eq!(s.steps, vec![(2, call("imp_intro")), (4, call("hyp"))]);
    }

    #[test]
    fn precedence_and_grouping() {
        let t = parse_tactical("a then b orelse c then d").unwrap();
        let expected = call("a").then(call("b").or_else(call("c"))).then(call("d"));
        assert_eq!(t, expected);
        let t = parse_tactical("repeat (and_intro orelse hyp)").unwrap();
        assert_eq!(t, Tactical::Repeat(Box::new(call("and_intro").or_else(call("hyp")))));
        let t = parse_tactical("and_intro then focus 2 hyp").unwrap();
        assert_eq!(t, call("and_intro").then(Tactical::Focus(2, Box::new(call("hyp")))));
    }

    #[test]
    fn arguments() {
        let t = parse_tactical(r#"specialize 2 "x |-> y" // comment with "quote"#).unwrap();
        let args = vec![Arg::Int(2), Arg::Text("x |-> y".into())];
        assert_eq!(t, Tactical::call("specialize", args));
        let t = parse_tactical(r#"cut "a // b""#).unwrap();
        assert_eq!(t, Tactical::call("cut", vec![Arg::Text("a // b".into())]));
        let t = parse_tactical("rewrite 1 all").unwrap();
        assert_eq!(t, Tactical::call("rewrite", vec![Arg::Int(1), Arg::Ident("all".into())]));
    }

    #[test]
    fn display_round_trips() {
        for text in ["a then (b orelse c)", "repeat (a then b)", "focus 2 hyp", "cut \"#p\" then try prop"] {
            let t = parse_tactical(text).unwrap();
            assert_eq!(parse_tactical(&t.to_string()).unwrap(), t);
        }
    }

    #[test]
    fn errors_carry_offsets() {
        let e = parse_script("hyp\nthen hyp").unwrap_err();
        assert_eq!(e.offset(), 4);
        assert!(parse_tactical("(hyp").is_err());
        assert!(parse_tactical("cut \"open").is_err());
        assert!(parse_tactical("focus 0 hyp").is_err());
    }
}
