//! Concrete syntax: `.mlg` theory files and S-expression terms.
//!
//! Term grammar (keywords may be shadowed by binders):
//!
//! ```text
//! t ::= x | 'a | 'f | '1_a | G | Nat | z | (s t)
//!     | (Pi (x t) t) | (Sigma (x t) t) | (Id t t t)
//!     | (lam (x t) t) | (app t t ...) | (pair t t t) | (p0 t) | (p1 t)
//!     | (refl t) | (J ((x y z) t) ((x) t) t t t)
//!     | (Rsig ((p) t) ((x y) t) t) | (rec ((n) t) t ((x y) t) t)
//! ```

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::graph::{GraphError, Theory};
use crate::syntax::{Term, BASE_TYPE};

const MAX_NESTING: usize = 400;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceSpan {
    pub file: String,
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line, self.column)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("{span}: syntax error: {message}")]
    Syntax { span: SourceSpan, message: String },
    #[error("{span}: unbound name `{name}`")]
    UnboundName { span: SourceSpan, name: String },
    #[error("{span}: duplicate name `{name}`")]
    DuplicateName { span: SourceSpan, name: String },
    #[error("{span}: edge `{edge}` refers to undeclared vertex `{vertex}`")]
    UnknownEndpoint {
        span: SourceSpan,
        edge: String,
        vertex: String,
    },
}

impl ParseError {
    pub fn span(&self) -> &SourceSpan {
        match self {
            ParseError::Syntax { span, .. }
            | ParseError::UnboundName { span, .. }
            | ParseError::DuplicateName { span, .. }
            | ParseError::UnknownEndpoint { span, .. } => span,
        }
    }
}

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    match cs.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    cs.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

fn strip_comment(line: &str) -> &str {
    match line.find("--") {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Prints a theory in `.mlg` form, vertices and edges in name order.
pub fn print_theory(th: &Theory) -> String {
    let mut out = format!("theory {}\n", th.name);
    for v in &th.vertices {
        out.push_str(&format!("vertex {v}\n"));
    }
    for (e, (s, t)) in &th.edges {
        out.push_str(&format!("edge {e} : {s} -> {t}\n"));
    }
    out
}

pub fn parse_theory(text: &str) -> Result<Theory, ParseError> {
    parse_theory_file(text, "<theory>")
}

/// Parses a theory, attributing diagnostics to `file`.
pub fn parse_theory_file(text: &str, file: &str) -> Result<Theory, ParseError> {
    let span = |line: usize, column: usize| SourceSpan {
        file: file.to_string(),
        line,
        column,
    };
    let mut theory: Option<Theory> = None;
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let body = strip_comment(raw);
        let col = body.len() - body.trim_start().len() + 1;
        let words: Vec<&str> = body.split_whitespace().collect();
        if words.is_empty() {
            continue;
        }
        let syntax = |message: String| ParseError::Syntax {
            span: span(line, col),
            message,
        };
        match (words[0], theory.as_mut()) {
            ("theory", None) => match words.as_slice() {
                [_, name] if is_ident(name) => theory = Some(Theory::new(name)),
                _ => return Err(syntax("expected `theory NAME`".into())),
            },
            ("theory", Some(_)) => return Err(syntax("second `theory` header".into())),
            (_, None) => return Err(syntax("file must start with `theory NAME`".into())),
            ("vertex", Some(th)) => match words.as_slice() {
                [_, v] if is_ident(v) && *v != BASE_TYPE => {
                    th.add_vertex(v).map_err(|_| ParseError::DuplicateName {
                        span: span(line, col),
                        name: v.to_string(),
                    })?
                }
                _ => return Err(syntax("expected `vertex IDENT`".into())),
            },
            ("edge", Some(th)) => {
                let rest = body.trim_start()["edge".len()..].replace("->", " -> ").replace(':', " : ");
                let parts: Vec<&str> = rest.split_whitespace().collect();
                match parts.as_slice() {
                    [e, ":", s, "->", t] if is_ident(e) && is_ident(s) && is_ident(t) && *e != BASE_TYPE => {
                        th.add_edge(e, s, t).map_err(|err| match err {
                            GraphError::UnknownEndpoint { edge, vertex } => ParseError::UnknownEndpoint {
                                span: span(line, col),
                                edge: edge.to_string(),
                                vertex: vertex.to_string(),
                            },
                            _ => ParseError::DuplicateName {
                                span: span(line, col),
                                name: e.to_string(),
                            },
                        })?
                    }
                    _ => return Err(syntax("expected `edge IDENT : IDENT -> IDENT`".into())),
                }
            }
            (w, Some(_)) => return Err(syntax(format!("unknown declaration `{w}`"))),
        }
    }
    theory.ok_or_else(|| ParseError::Syntax {
        span: span(1, 1),
        message: "missing `theory NAME` header".into(),
    })
}

#[derive(Debug, Clone)]
enum Sexp {
    Atom(String, usize, usize),
    List(Vec<Sexp>, usize, usize),
}

impl Sexp {
    fn pos(&self) -> (usize, usize) {
        match self {
            Sexp::Atom(_, l, c) | Sexp::List(_, l, c) => (*l, *c),
        }
    }
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
    file: &'a str,
}

impl<'a> Reader<'a> {
    fn span(&self, line: usize, column: usize) -> SourceSpan {
        SourceSpan {
            file: self.file.to_string(),
            line,
            column,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        loop {
            match self.chars.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('-') => {
                    let mut look = self.chars.clone();
                    look.next();
                    if look.peek() == Some(&'-') {
                        while let Some(c) = self.bump() {
                            if c == '\n' {
                                break;
                            }
                        }
                    } else {
                        return;
                    }
                }
                _ => return,
            }
        }
    }

    fn read(&mut self, depth: usize) -> Result<Sexp, ParseError> {
        self.skip_ws();
        let (line, col) = (self.line, self.col);
        if depth > MAX_NESTING {
            return Err(ParseError::Syntax {
                span: self.span(line, col),
                message: "nesting too deep".into(),
            });
        }
        match self.chars.peek().copied() {
            None => Err(ParseError::Syntax {
                span: self.span(line, col),
                message: "unexpected end of input".into(),
            }),
            Some(')') => Err(ParseError::Syntax {
                span: self.span(line, col),
                message: "unexpected `)`".into(),
            }),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_ws();
                    match self.chars.peek() {
                        Some(')') => {
                            self.bump();
                            return Ok(Sexp::List(items, line, col));
                        }
                        None => {
                            return Err(ParseError::Syntax {
                                span: self.span(line, col),
                                message: "unclosed `(`".into(),
                            })
                        }
                        _ => items.push(self.read(depth + 1)?),
                    }
                }
            }
            Some(_) => {
                let mut s = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' {
                        break;
                    }
                    s.push(c);
                    self.bump();
                }
                Ok(Sexp::Atom(s, line, col))
            }
        }
    }
}

fn read_sexp(text: &str, file: &str) -> Result<Sexp, ParseError> {
    let mut r = Reader {
        chars: text.chars().peekable(),
        line: 1,
        col: 1,
        file,
    };
    let e = r.read(0)?;
    r.skip_ws();
    if r.chars.peek().is_some() {
        return Err(ParseError::Syntax {
            span: r.span(r.line, r.col),
            message: "trailing input after term".into(),
        });
    }
    Ok(e)
}

struct Resolver<'a> {
    theory: &'a Theory,
    scope: Vec<String>,
    file: &'a str,
}

impl<'a> Resolver<'a> {
    fn span(&self, e: &Sexp) -> SourceSpan {
        let (line, column) = e.pos();
        SourceSpan {
            file: self.file.to_string(),
            line,
            column,
        }
    }

    fn err(&self, e: &Sexp, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            span: self.span(e),
            message: message.into(),
        }
    }

    fn lookup(&self, name: &str) -> Option<usize> {
        self.scope.iter().rev().position(|n| n == name)
    }

    fn atom(&self, e: &Sexp, s: &str) -> Result<Term, ParseError> {
        if let Some(i) = self.lookup(s) {
            return Ok(Term::Var(i));
        }
        if let Some(sym) = s.strip_prefix('\'') {
            if let Some(v) = sym.strip_prefix("1_") {
                if self.theory.has_vertex(v) {
                    return Ok(Term::refl(Term::vertex(v)));
                }
            }
            return self.symbol(e, sym);
        }
        match s {
            "Nat" => Ok(Term::NatTy),
            "z" => Ok(Term::Zero),
            BASE_TYPE => Ok(Term::base_ty()),
            _ => self.symbol(e, s),
        }
    }

    fn symbol(&self, e: &Sexp, sym: &str) -> Result<Term, ParseError> {
        if self.theory.has_vertex(sym) {
            Ok(Term::vertex(sym))
        } else if self.theory.endpoints(sym).is_some() {
            Ok(Term::edge(sym))
        } else {
            Err(ParseError::UnboundName {
                span: self.span(e),
                name: sym.to_string(),
            })
        }
    }

    fn binder_name(&self, e: &Sexp) -> Result<String, ParseError> {
        match e {
            Sexp::Atom(s, ..) if is_ident(s) => Ok(s.clone()),
            _ => Err(self.err(e, "expected a binder name")),
        }
    }

    /// `(x A)` style binder.
    fn typed_binder(&mut self, e: &Sexp) -> Result<(String, Term), ParseError> {
        match e {
            Sexp::List(items, ..) if items.len() == 2 => {
                let name = self.binder_name(&items[0])?;
                let ty = self.term(&items[1])?;
                Ok((name, ty))
            }
            _ => Err(self.err(e, "expected `(name type)`")),
        }
    }

    /// `((x y ...) body)` with exactly `n` names.
    fn scoped(&mut self, e: &Sexp, n: usize) -> Result<Term, ParseError> {
        match e {
            Sexp::List(items, ..) if items.len() == 2 => {
                let names = match &items[0] {
                    Sexp::List(ns, ..) if ns.len() == n => ns
                        .iter()
                        .map(|x| self.binder_name(x))
                        .collect::<Result<Vec<_>, _>>()?,
                    other => return Err(self.err(other, format!("expected {n} binder name(s)"))),
                };
                let saved = self.scope.len();
                self.scope.extend(names);
                let body = self.term(&items[1]);
                self.scope.truncate(saved);
                body
            }
            _ => Err(self.err(e, "expected `((names...) body)`")),
        }
    }

    fn under(&mut self, name: String, body: &Sexp) -> Result<Term, ParseError> {
        self.scope.push(name);
        let out = self.term(body);
        self.scope.pop();
        out
    }

    fn term(&mut self, e: &Sexp) -> Result<Term, ParseError> {
        let items = match e {
            Sexp::Atom(s, ..) => return self.atom(e, s),
            Sexp::List(items, ..) => items,
        };
        let head = match items.first() {
            Some(Sexp::Atom(h, ..)) if self.lookup(h).is_none() => h.as_str(),
            Some(_) => return Err(self.err(e, "expected a keyword in head position; use `app`")),
            None => return Err(self.err(e, "empty list")),
        };
        let args = &items[1..];
        let arity = |k: usize| -> Result<(), ParseError> {
            if args.len() == k {
                Ok(())
            } else {
                Err(self.err(e, format!("`{head}` expects {k} argument(s), got {}", args.len())))
            }
        };
        match head {
            "Pi" | "Sigma" | "lam" => {
                arity(2)?;
                let (name, dom) = self.typed_binder(&args[0])?;
                let body = self.under(name, &args[1])?;
                Ok(match head {
                    "Pi" => Term::pi(dom, body),
                    "Sigma" => Term::sigma(dom, body),
                    _ => Term::lam(dom, body),
                })
            }
            "app" => {
                if args.len() < 2 {
                    return Err(self.err(e, "`app` expects at least 2 arguments"));
                }
                let mut acc = self.term(&args[0])?;
                for a in &args[1..] {
                    acc = Term::app(acc, self.term(a)?);
                }
                Ok(acc)
            }
            "pair" | "Id" => {
                arity(3)?;
                let a = self.term(&args[0])?;
                let b = self.term(&args[1])?;
                let c = self.term(&args[2])?;
                Ok(if head == "pair" {
                    Term::pair(a, b, c)
                } else {
                    Term::id(a, b, c)
                })
            }
            "p0" | "p1" | "refl" | "s" => {
                arity(1)?;
                let a = self.term(&args[0])?;
                Ok(match head {
                    "p0" => Term::proj0(a),
                    "p1" => Term::proj1(a),
                    "refl" => Term::refl(a),
                    _ => Term::succ(a),
                })
            }
            "J" => {
                arity(5)?;
                let motive = self.scoped(&args[0], 3)?;
                let base = self.scoped(&args[1], 1)?;
                let lhs = self.term(&args[2])?;
                let rhs = self.term(&args[3])?;
                let path = self.term(&args[4])?;
                Ok(Term::j(motive, base, lhs, rhs, path))
            }
            "Rsig" => {
                arity(3)?;
                let motive = self.scoped(&args[0], 1)?;
                let branch = self.scoped(&args[1], 2)?;
                let scrut = self.term(&args[2])?;
                Ok(Term::rsig(motive, branch, scrut))
            }
            "rec" => {
                arity(4)?;
                let motive = self.scoped(&args[0], 1)?;
                let zcase = self.term(&args[1])?;
                let scase = self.scoped(&args[2], 2)?;
                let scrut = self.term(&args[3])?;
                Ok(Term::rec(motive, zcase, scase, scrut))
            }
            other => Err(self.err(e, format!("unknown form `{other}`"))),
        }
    }
}

/// Parses a closed term.
pub fn parse_term(text: &str, theory: &Theory) -> Result<Term, ParseError> {
    parse_term_in(text, theory, &[], "<term>")
}

/// Parses a term whose free names are `context` (outermost first).
pub fn parse_term_in(
    text: &str,
    theory: &Theory,
    context: &[&str],
    file: &str,
) -> Result<Term, ParseError> {
    let sexp = read_sexp(text, file)?;
    let mut r = Resolver {
        theory,
        scope: context.iter().map(|s| s.to_string()).collect(),
        file,
    };
    r.term(&sexp)
}

/// Prints a closed term; binders are named `x0, x1, ...` by depth.
pub fn print_term(t: &Term) -> String {
    print_term_in(t, 0)
}

/// Prints a term whose `ctx_len` free variables are named `x0..`.
pub fn print_term_in(t: &Term, ctx_len: usize) -> String {
    let mut out = String::new();
    print_into(&mut out, t, ctx_len);
    out
}

fn name_of(depth: usize, i: usize) -> String {
    if i < depth {
        format!("x{}", depth - 1 - i)
    } else {
        format!("?{}", i - depth)
    }
}

fn print_into(out: &mut String, t: &Term, d: usize) {
    let bind = |out: &mut String, d: usize, n: usize| {
        out.push('(');
        for k in 0..n {
            if k > 0 {
                out.push(' ');
            }
            let _ = write!(out, "x{}", d + k);
        }
        out.push(')');
    };
    match t {
        Term::Var(i) => out.push_str(&name_of(d, *i)),
        Term::NatTy => out.push_str("Nat"),
        Term::Zero => out.push('z'),
        Term::BaseTy(_) => out.push_str(BASE_TYPE),
        Term::BaseVertex(n) | Term::BaseEdge(n) => {
            out.push('\'');
            out.push_str(n.as_str());
        }
        Term::Pi(a, b) | Term::Sigma(a, b) | Term::Lam(a, b) => {
            let kw = match t {
                Term::Pi(..) => "Pi",
                Term::Sigma(..) => "Sigma",
                _ => "lam",
            };
            let _ = write!(out, "({kw} (x{d} ");
            print_into(out, a, d);
            out.push_str(") ");
            print_into(out, b, d + 1);
            out.push(')');
        }
        Term::App(f, a) => {
            out.push_str("(app ");
            print_into(out, f, d);
            out.push(' ');
            print_into(out, a, d);
            out.push(')');
        }
        Term::Pair(a, b, c) | Term::Id(a, b, c) => {
            out.push_str(if matches!(t, Term::Pair(..)) { "(pair " } else { "(Id " });
            print_into(out, a, d);
            out.push(' ');
            print_into(out, b, d);
            out.push(' ');
            print_into(out, c, d);
            out.push(')');
        }
        Term::Proj0(a) | Term::Proj1(a) | Term::Refl(a) | Term::Succ(a) => {
            out.push_str(match t {
                Term::Proj0(_) => "(p0 ",
                Term::Proj1(_) => "(p1 ",
                Term::Refl(_) => "(refl ",
                _ => "(s ",
            });
            print_into(out, a, d);
            out.push(')');
        }
        Term::J {
            motive,
            base,
            lhs,
            rhs,
            path,
        } => {
            out.push_str("(J (");
            bind(out, d, 3);
            out.push(' ');
            print_into(out, motive, d + 3);
            out.push_str(") (");
            bind(out, d, 1);
            out.push(' ');
            print_into(out, base, d + 1);
            out.push_str(") ");
            for (k, x) in [lhs, rhs, path].into_iter().enumerate() {
                if k > 0 {
                    out.push(' ');
                }
                print_into(out, x, d);
            }
            out.push(')');
        }
        Term::Rec {
            motive,
            zcase,
            scase,
            scrut,
        } => {
            out.push_str("(rec (");
            bind(out, d, 1);
            out.push(' ');
            print_into(out, motive, d + 1);
            out.push_str(") ");
            print_into(out, zcase, d);
            out.push_str(" (");
            bind(out, d, 2);
            out.push(' ');
            print_into(out, scase, d + 2);
            out.push_str(") ");
            print_into(out, scrut, d);
            out.push(')');
        }
        Term::RSig {
            motive,
            branch,
            scrut,
        } => {
            out.push_str("(Rsig (");
            bind(out, d, 1);
            out.push(' ');
            print_into(out, motive, d + 1);
            out.push_str(") (");
            bind(out, d, 2);
            out.push(' ');
            print_into(out, branch, d + 2);
            out.push_str(") ");
            print_into(out, scrut, d);
            out.push(')');
        }
    }
}

/// Display adapter for closed terms.
pub struct Pretty<'a>(pub &'a Term);

impl fmt::Display for Pretty<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(self.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const THEORY_1: &str = "theory T\nvertex a\nvertex b\nvertex c\nedge f : a -> b\nedge e : a -> a\nedge g : b -> c\n";

    #[test]
    fn theory_examples() {
        let th = parse_theory("theory T\nvertex a\nvertex b\nedge f : a -> b\nedge e : a -> a").unwrap();
        assert_eq!(th.vertices.len(), 2);
        assert_eq!(th.edges.len(), 2);
        assert!(matches!(
            parse_theory("theory T\nedge f : a -> b"),
            Err(ParseError::UnknownEndpoint { .. })
        ));
        assert!(matches!(
            parse_theory("theory T\nvertex a\nvertex a"),
            Err(ParseError::DuplicateName { .. })
        ));
        let e = parse_theory("theory T\n  vertex 9").unwrap_err();
        assert_eq!(e.span().line, 2);
        assert_eq!(e.span().column, 3);
    }

    #[test]
    fn term_examples() {
        let th = parse_theory(THEORY_1).unwrap();
        assert_eq!(parse_term("(refl 'a)", &th).unwrap(), Term::refl(Term::vertex("a")));
        assert_eq!(parse_term("'1_a", &th).unwrap(), Term::refl(Term::vertex("a")));
        let j = parse_term("(J ((x y z) G) ((x) 'b) 'a 'a 'e)", &th).unwrap();
        assert_eq!(
            j,
            Term::j(
                Term::base_ty(),
                Term::vertex("b"),
                Term::vertex("a"),
                Term::vertex("a"),
                Term::edge("e")
            )
        );
        let r = parse_term("(rec ((n) Nat) z ((x y) (s y)) (s (s z)))", &th).unwrap();
        assert_eq!(
            r,
            Term::rec(Term::NatTy, Term::Zero, Term::succ(Term::Var(0)), Term::numeral(2))
        );
        assert!(matches!(parse_term("'q", &th), Err(ParseError::UnboundName { .. })));
        assert!(matches!(parse_term("(app z", &th), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn binders_shadow_keywords() {
        let th = parse_theory(THEORY_1).unwrap();
        let t = parse_term("(lam (z Nat) z)", &th).unwrap();
        assert_eq!(t, Term::lam(Term::NatTy, Term::Var(0)));
    }

    #[test]
    fn printer_examples() {
        assert_eq!(print_term(&Term::refl(Term::vertex("a"))), "(refl 'a)");
        assert_eq!(print_term(&Term::Zero), "z");
        assert_eq!(print_term(&Term::pi(Term::NatTy, Term::NatTy)), "(Pi (x0 Nat) Nat)");
    }

    #[test]
    fn comments_are_skipped() {
        let th = parse_theory("-- header\ntheory T -- name\nvertex a\n").unwrap();
        assert_eq!(parse_term("-- c\n(refl 'a) -- done", &th).unwrap(), Term::refl(Term::vertex("a")));
    }
}
