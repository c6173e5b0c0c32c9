//! Reflexive directed graphs and the free groupoid on them.
//!
//! Identity loops are implicit: every vertex `a` has `1_a`, which is the empty
//! word at `a` and never appears as a letter.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::syntax::Name;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("endpoint mismatch: expected a letter leaving `{expected}`, found one leaving `{found}`")]
    EndpointMismatch { expected: Name, found: Name },
    #[error("unknown edge `{0}`")]
    UnknownEdge(Name),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(Name),
    #[error("name `{0}` declared twice")]
    DuplicateName(Name),
    #[error("edge `{edge}` refers to undeclared vertex `{vertex}`")]
    UnknownEndpoint { edge: Name, vertex: Name },
    #[error("malformed word expression: {0}")]
    BadWordExpr(String),
}

/// A finite reflexive directed graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theory {
    pub name: Name,
    pub vertices: BTreeSet<Name>,
    pub edges: BTreeMap<Name, (Name, Name)>,
}

impl Theory {
    pub fn new(name: &str) -> Self {
        Theory {
            name: Name::new(name),
            vertices: BTreeSet::new(),
            edges: BTreeMap::new(),
        }
    }

    pub fn add_vertex(&mut self, v: &str) -> Result<(), GraphError> {
        let n = Name::new(v);
        if self.vertices.contains(&n) || self.edges.contains_key(&n) {
            return Err(GraphError::DuplicateName(n));
        }
        self.vertices.insert(n);
        Ok(())
    }

    pub fn add_edge(&mut self, e: &str, src: &str, tgt: &str) -> Result<(), GraphError> {
        let n = Name::new(e);
        if self.vertices.contains(&n) || self.edges.contains_key(&n) {
            return Err(GraphError::DuplicateName(n));
        }
        for v in [src, tgt] {
            if !self.vertices.contains(v) {
                return Err(GraphError::UnknownEndpoint {
                    edge: n,
                    vertex: Name::new(v),
                });
            }
        }
        self.edges.insert(n, (Name::new(src), Name::new(tgt)));
        Ok(())
    }

    /// Builder used by tests and examples.
    pub fn with(name: &str, vertices: &[&str], edges: &[(&str, &str, &str)]) -> Result<Self, GraphError> {
        let mut th = Theory::new(name);
        for v in vertices {
            th.add_vertex(v)?;
        }
        for (e, s, t) in edges {
            th.add_edge(e, s, t)?;
        }
        Ok(th)
    }

    pub fn has_vertex(&self, v: &str) -> bool {
        self.vertices.contains(v)
    }

    pub fn endpoints(&self, e: &str) -> Option<&(Name, Name)> {
        self.edges.get(e)
    }

    /// The graph's source and target of an oriented letter.
    pub fn letter_endpoints(&self, l: &Letter) -> Result<(Name, Name), GraphError> {
        let (s, t) = self
            .edges
            .get(&l.edge)
            .ok_or_else(|| GraphError::UnknownEdge(l.edge.clone()))?;
        Ok(match l.orientation {
            Orientation::Forward => (s.clone(), t.clone()),
            Orientation::Backward => (t.clone(), s.clone()),
        })
    }

    pub fn generator(&self, e: &str) -> Result<ReducedWord, GraphError> {
        let (s, t) = self
            .edges
            .get(e)
            .ok_or_else(|| GraphError::UnknownEdge(Name::new(e)))?;
        Ok(ReducedWord {
            source: s.clone(),
            target: t.clone(),
            letters: vec![Letter::forward(e)],
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    Forward,
    Backward,
}

impl Orientation {
    pub fn flip(self) -> Self {
        match self {
            Orientation::Forward => Orientation::Backward,
            Orientation::Backward => Orientation::Forward,
        }
    }

    pub fn sign(self) -> i8 {
        match self {
            Orientation::Forward => 1,
            Orientation::Backward => -1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub edge: Name,
    pub orientation: Orientation,
}

impl Letter {
    pub fn forward(e: &str) -> Self {
        Letter {
            edge: Name::new(e),
            orientation: Orientation::Forward,
        }
    }

    pub fn backward(e: &str) -> Self {
        Letter {
            edge: Name::new(e),
            orientation: Orientation::Backward,
        }
    }

    pub fn inverse(&self) -> Self {
        Letter {
            edge: self.edge.clone(),
            orientation: self.orientation.flip(),
        }
    }

    fn cancels(&self, other: &Letter) -> bool {
        self.edge == other.edge && self.orientation != other.orientation
    }
}

/// A morphism of the free groupoid: a cancellation-free path of oriented edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReducedWord {
    pub source: Name,
    pub target: Name,
    pub letters: Vec<Letter>,
}

impl ReducedWord {
    pub fn identity(v: &str) -> Self {
        ReducedWord {
            source: Name::new(v),
            target: Name::new(v),
            letters: Vec::new(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Checks the structural invariants against a theory.
    pub fn is_valid_in(&self, th: &Theory) -> bool {
        let mut cur = self.source.clone();
        for l in &self.letters {
            match th.letter_endpoints(l) {
                Ok((s, t)) if s == cur => cur = t,
                _ => return false,
            }
        }
        cur == self.target
            && self.letters.windows(2).all(|w| !w[0].cancels(&w[1]))
            && th.has_vertex(&self.source)
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1@{}", self.source);
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" . ")?;
            }
            write!(f, "{}", l.edge)?;
            if l.orientation == Orientation::Backward {
                f.write_str("^")?;
            }
        }
        Ok(())
    }
}

/// Reduces a raw endpoint-compatible letter sequence starting at `source`.
pub fn reduce(th: &Theory, source: &str, raw: &[Letter]) -> Result<ReducedWord, GraphError> {
    if !th.has_vertex(source) {
        return Err(GraphError::UnknownVertex(Name::new(source)));
    }
    let mut cur = Name::new(source);
    let mut stack: Vec<Letter> = Vec::with_capacity(raw.len());
    for l in raw {
        let (s, t) = th.letter_endpoints(l)?;
        if s != cur {
            return Err(GraphError::EndpointMismatch {
                expected: cur,
                found: s,
            });
        }
        cur = t;
        match stack.last() {
            Some(top) if top.cancels(l) => {
                stack.pop();
            }
            _ => stack.push(l.clone()),
        }
    }
    Ok(ReducedWord {
        source: Name::new(source),
        target: cur,
        letters: stack,
    })
}

/// Diagrammatic composite: first `w1`, then `w2`.
pub fn compose(w1: &ReducedWord, w2: &ReducedWord) -> Result<ReducedWord, GraphError> {
    if w1.target != w2.source {
        return Err(GraphError::EndpointMismatch {
            expected: w1.target.clone(),
            found: w2.source.clone(),
        });
    }
    let mut letters = w1.letters.clone();
    let mut rest = w2.letters.iter().peekable();
    while let (Some(last), Some(next)) = (letters.last(), rest.peek()) {
        if last.cancels(next) {
            letters.pop();
            rest.next();
        } else {
            break;
        }
    }
    letters.extend(rest.cloned());
    Ok(ReducedWord {
        source: w1.source.clone(),
        target: w2.target.clone(),
        letters,
    })
}

pub fn inverse(w: &ReducedWord) -> ReducedWord {
    ReducedWord {
        source: w.target.clone(),
        target: w.source.clone(),
        letters: w.letters.iter().rev().map(Letter::inverse).collect(),
    }
}

/// Connected components under undirected edge reachability, each sorted,
/// listed in order of their least vertex.
pub fn components(th: &Theory) -> Vec<Vec<Name>> {
    let names: Vec<&Name> = th.vertices.iter().collect();
    let index: BTreeMap<&Name, usize> = names.iter().enumerate().map(|(i, n)| (*n, i)).collect();
    let mut parent: Vec<usize> = (0..names.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (s, t) in th.edges.values() {
        let (a, b) = (find(&mut parent, index[s]), find(&mut parent, index[t]));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut groups: BTreeMap<usize, Vec<Name>> = BTreeMap::new();
    for (i, n) in names.iter().enumerate() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push((*n).clone());
    }
    groups.into_values().collect()
}

/// Index of the component containing `v` in the output of [`components`].
pub fn component_of(comps: &[Vec<Name>], v: &Name) -> Option<usize> {
    comps.iter().position(|c| c.contains(v))
}

/// Parses a word expression such as `f . g^ . (h . k)^` or `1@a`.
pub fn parse_word_expr(th: &Theory, text: &str) -> Result<ReducedWord, GraphError> {
    let toks = tokenize_word(text)?;
    let mut pos = 0;
    let w = word_seq(th, &toks, &mut pos)?;
    if pos != toks.len() {
        return Err(GraphError::BadWordExpr(format!("unexpected `{}`", toks[pos])));
    }
    Ok(w)
}

fn tokenize_word(text: &str) -> Result<Vec<String>, GraphError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if "().^@".contains(c) {
            out.push(c.to_string());
            chars.next();
        } else if c.is_alphanumeric() || c == '_' || c == '\'' {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_alphanumeric() || c == '_' || c == '\'' {
                    s.push(c);
                    chars.next();
                } else {
                    break;
                }
            }
            out.push(s);
        } else {
            return Err(GraphError::BadWordExpr(format!("unexpected character `{c}`")));
        }
    }
    if out.is_empty() {
        return Err(GraphError::BadWordExpr("empty expression".into()));
    }
    Ok(out)
}

fn word_seq(th: &Theory, toks: &[String], pos: &mut usize) -> Result<ReducedWord, GraphError> {
    let mut acc = word_postfix(th, toks, pos)?;
    while toks.get(*pos).map(String::as_str) == Some(".") {
        *pos += 1;
        let next = word_postfix(th, toks, pos)?;
        acc = compose(&acc, &next)?;
    }
    Ok(acc)
}

fn word_postfix(th: &Theory, toks: &[String], pos: &mut usize) -> Result<ReducedWord, GraphError> {
    let mut w = word_atom(th, toks, pos)?;
    while toks.get(*pos).map(String::as_str) == Some("^") {
        *pos += 1;
        w = inverse(&w);
    }
    Ok(w)
}

fn word_atom(th: &Theory, toks: &[String], pos: &mut usize) -> Result<ReducedWord, GraphError> {
    let tok = toks
        .get(*pos)
        .ok_or_else(|| GraphError::BadWordExpr("unexpected end".into()))?;
    *pos += 1;
    match tok.as_str() {
        "(" => {
            let w = word_seq(th, toks, pos)?;
            if toks.get(*pos).map(String::as_str) != Some(")") {
                return Err(GraphError::BadWordExpr("missing `)`".into()));
            }
            *pos += 1;
            Ok(w)
        }
        "1" if toks.get(*pos).map(String::as_str) == Some("@") => {
            *pos += 1;
            let v = toks
                .get(*pos)
                .ok_or_else(|| GraphError::BadWordExpr("missing vertex after `1@`".into()))?;
            *pos += 1;
            if !th.has_vertex(v) {
                return Err(GraphError::UnknownVertex(Name::new(v)));
            }
            Ok(ReducedWord::identity(v))
        }
        ")" | "." | "^" | "@" => Err(GraphError::BadWordExpr(format!("unexpected `{tok}`"))),
        e => th.generator(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theory1() -> Theory {
        Theory::with(
            "T",
            &["a", "b", "c"],
            &[("f", "a", "b"), ("e", "a", "a"), ("g", "b", "c")],
        )
        .unwrap()
    }

    #[test]
    fn reduce_cancels() {
        let th = theory1();
        let w = reduce(&th, "a", &[Letter::forward("f"), Letter::backward("f")]).unwrap();
        assert_eq!(w, ReducedWord::identity("a"));
        let w = reduce(
            &th,
            "a",
            &[Letter::forward("e"), Letter::forward("e"), Letter::backward("e")],
        )
        .unwrap();
        assert_eq!(w.letters, vec![Letter::forward("e")]);
        let w = reduce(&th, "a", &[Letter::forward("f"), Letter::forward("g")]).unwrap();
        assert_eq!((w.len(), w.target.as_str()), (2, "c"));
    }

    #[test]
    fn reduce_rejects_mismatch() {
        let th = theory1();
        assert!(matches!(
            reduce(&th, "a", &[Letter::forward("g")]),
            Err(GraphError::EndpointMismatch { .. })
        ));
    }

    #[test]
    fn compose_and_inverse() {
        let th = theory1();
        let f = th.generator("f").unwrap();
        let g = th.generator("g").unwrap();
        assert_eq!(compose(&f, &inverse(&f)).unwrap(), ReducedWord::identity("a"));
        assert_eq!(compose(&ReducedWord::identity("a"), &f).unwrap(), f);
        let fg = compose(&f, &g).unwrap();
        assert_eq!(inverse(&fg).letters, vec![Letter::backward("g"), Letter::backward("f")]);
        assert!(compose(&g, &f).is_err());
    }

    #[test]
    fn components_examples() {
        assert_eq!(components(&theory1()).len(), 1);
        let two = Theory::with("T", &["a", "b"], &[]).unwrap();
        assert_eq!(components(&two).len(), 2);
        let four = Theory::with("T", &["a", "b", "c", "d"], &[("f", "a", "b"), ("g", "c", "d")]).unwrap();
        let cs = components(&four);
        assert_eq!(cs.len(), 2);
        assert_eq!(cs[0], vec![Name::new("a"), Name::new("b")]);
    }

    #[test]
    fn word_expressions() {
        let th = theory1();
        assert_eq!(parse_word_expr(&th, "e . e^").unwrap(), ReducedWord::identity("a"));
        assert_eq!(parse_word_expr(&th, "1@b").unwrap(), ReducedWord::identity("b"));
        let w = parse_word_expr(&th, "(f . g)^").unwrap();
        assert_eq!(w.to_string(), "g^ . f^");
        assert!(parse_word_expr(&th, "f . f").is_err());
        assert!(parse_word_expr(&th, "").is_err());
    }
}
