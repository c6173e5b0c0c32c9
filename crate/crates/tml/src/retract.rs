//! Executable forms of the retract results: density of identity proofs, the
//! dense natural transformation from the identity to evaluation-then-closure,
//! canonicity at `Nat`, preservation of connected components and the
//! equivalence between the syntactic groupoid and the free groupoid.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{self, GraphError, ReducedWord, Theory};
use crate::harness::{self, Gen, HarnessError};
use crate::jterms::{path_compose_raw, path_inverse_raw};
use crate::kernel::{self, KernelError, TypeError};
use crate::model::{self, ModelError, Value};
use crate::parser::print_term;
use crate::realizability::{self, REnv, RealizeError, Rz};
use crate::syntax::{Context, Name, Term};

#[derive(Debug, Error)]
pub enum RetractError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Realize(#[from] RealizeError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Harness(#[from] HarnessError),
    #[error("{0}")]
    Invariant(String),
}

impl From<TypeError> for RetractError {
    fn from(e: TypeError) -> Self {
        RetractError::Kernel(e.into())
    }
}

pub type Result<T> = std::result::Result<T, RetractError>;

/// Derivation depth of the terms sampled by the reports.
pub const SAMPLE_DEPTH: u32 = 3;
/// Longest random walk sampled as a word.
pub const WORD_LENGTH: usize = 8;

fn g() -> Term {
    Term::base_ty()
}

fn path_ty(a: &Term, b: &Term) -> Term {
    Term::id(g(), a.clone(), b.clone())
}

/// Whether `f : Id(G, a, b)` evaluates to an identity word.
pub fn is_dense(th: &Theory, f: &Term, a: &Term, b: &Term) -> Result<bool> {
    kernel::check_type(th, &Context::new(), f, &path_ty(a, b))?;
    Ok(model::eval_closed(th, f)?.as_word()?.is_identity())
}

/// The closure `closure(eval t)` of a closed `t : G`.
pub fn closure_of(th: &Theory, t: &Term) -> Result<Term> {
    Ok(model::closure_term(th, &model::eval_closed(th, t)?)?)
}

/// The component at `t` of the transformation into the closure: a dense
/// `Id(G, t, closure(eval t))`.
pub fn alpha_component(th: &Theory, t: &Term) -> Result<Term> {
    alpha_in(&Rz::new(th), t)
}

fn alpha_in(rz: &Rz, t: &Term) -> Result<Term> {
    kernel::check_type(rz.theory(), &Context::new(), t, &g())?;
    let r = rz.realize(&REnv::new(), &Context::new(), t)?;
    Ok(r.base_path()?.clone())
}

/// Naturality of the transformation along `f : Id(G, t, s)`: the two ways
/// around the square agree at `Id(G, t, closure(eval s))`.
pub fn naturality_check(th: &Theory, f: &Term, t: &Term, s: &Term) -> Result<bool> {
    let empty = Context::new();
    kernel::check_type(th, &empty, f, &path_ty(t, s))?;
    let (at, as_) = (alpha_component(th, t)?, alpha_component(th, s)?);
    let (tb, sb) = (closure_of(th, t)?, closure_of(th, s)?);
    let cf = model::closure_term(th, &model::eval_closed(th, f)?)?;
    let lhs = path_compose_raw(&g(), t, &tb, &sb, &at, &cf);
    let rhs = path_compose_raw(&g(), t, s, &sb, f, &as_);
    Ok(kernel::convertible(th, &empty, &path_ty(t, &sb), &lhs, &rhs)?)
}

/// The numeral a closed `t : Nat` denotes, with a proof of `Id(Nat, t, n)`.
pub fn canon_nat(th: &Theory, t: &Term) -> Result<(Term, Term)> {
    let empty = Context::new();
    kernel::check_type(th, &empty, t, &Term::NatTy)?;
    let n = model::numeral_of(&model::eval_closed(th, t)?)?;
    let r = realizability::realize_closed(th, t)?;
    let (k, proof) = r.as_nat()?;
    if Term::numeral(k) != n {
        return Err(RetractError::Invariant(format!(
            "realizer numeral {k} differs from the evaluated numeral {}",
            print_term(&n)
        )));
    }
    kernel::check_type(th, &empty, proof, &Term::id(Term::NatTy, t.clone(), n.clone()))?;
    Ok((n, proof.clone()))
}

// ---- reports ----

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportKind {
    Retract,
    Canon,
    Pi0,
    Equivalence,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub samples: usize,
    pub failures: usize,
    pub millis: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub terms: Vec<String>,
    pub diagnostic: String,
}

/// One named part of a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubCheck {
    pub name: String,
    /// Set when the check confirms internal consistency rather than comparing
    /// against an independent definition.
    pub consistency: bool,
    pub samples: usize,
    pub failures: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub kind: ReportKind,
    pub inputs: String,
    pub verdict: Verdict,
    pub stats: Stats,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<SubCheck>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub output: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Zeroes the timing so that output is reproducible.
    pub fn without_timing(mut self) -> Self {
        self.stats.millis = 0;
        self
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} {}: {} samples, {} failures, {} ms\n",
            serde_json::to_value(self.kind).expect("kind").as_str().unwrap_or(""),
            if self.passed() { "PASS" } else { "FAIL" },
            self.stats.samples,
            self.stats.failures,
            self.stats.millis
        );
        out.push_str(&format!("  inputs: {}\n", self.inputs));
        for c in &self.checks {
            let label = if c.consistency { " (consistency check)" } else { "" };
            out.push_str(&format!("  {}{label}: {} samples, {} failures\n", c.name, c.samples, c.failures));
        }
        for (k, v) in &self.output {
            out.push_str(&format!("  {k}: {v}\n"));
        }
        if let Some(c) = &self.counterexample {
            out.push_str(&format!("  counterexample: {}\n", c.diagnostic));
            for t in &c.terms {
                out.push_str(&format!("    {t}\n"));
            }
        }
        out
    }
}

/// Accumulates sample outcomes, keeping the first counterexample.
struct Tally {
    kind: ReportKind,
    inputs: String,
    start: Instant,
    checks: Vec<SubCheck>,
    samples: usize,
    failures: usize,
    counterexample: Option<Counterexample>,
}

impl Tally {
    fn new(kind: ReportKind, inputs: String) -> Self {
        Tally {
            kind,
            inputs,
            start: Instant::now(),
            checks: Vec::new(),
            samples: 0,
            failures: 0,
            counterexample: None,
        }
    }

    fn section(&mut self, name: &str, consistency: bool) {
        self.checks.push(SubCheck {
            name: name.to_string(),
            consistency,
            samples: 0,
            failures: 0,
        });
    }

    fn record(&mut self, outcome: Result<bool>, terms: &[&Term], what: &str) {
        self.samples += 1;
        if let Some(c) = self.checks.last_mut() {
            c.samples += 1;
        }
        let diagnostic = match outcome {
            Ok(true) => return,
            Ok(false) => what.to_string(),
            Err(e) => format!("{what}: {e}"),
        };
        self.failures += 1;
        if let Some(c) = self.checks.last_mut() {
            c.failures += 1;
        }
        if self.counterexample.is_none() {
            self.counterexample = Some(Counterexample {
                terms: terms.iter().map(|t| print_term(t)).collect(),
                diagnostic,
            });
        }
    }

    fn finish(self) -> Report {
        Report {
            kind: self.kind,
            inputs: self.inputs,
            verdict: if self.failures == 0 { Verdict::Pass } else { Verdict::Fail },
            stats: Stats {
                samples: self.samples,
                failures: self.failures,
                millis: self.start.elapsed().as_millis() as u64,
            },
            checks: self.checks,
            output: BTreeMap::new(),
            counterexample: self.counterexample,
        }
    }
}

fn describe(th: &Theory) -> String {
    format!("theory {} ({} vertices, {} edges)", th.name, th.vertices.len(), th.edges.len())
}

/// The canonical form of one term as a report.
pub fn canon_report(th: &Theory, t: &Term) -> Report {
    let mut tally = Tally::new(ReportKind::Canon, format!("{}, term {}", describe(th), print_term(t)));
    let result = canon_nat(th, t);
    let mut output = BTreeMap::new();
    let outcome = match result {
        Ok((n, proof)) => {
            output.insert("numeral".to_string(), print_term(&n));
            output.insert("proof".to_string(), print_term(&proof));
            Ok(true)
        }
        Err(e) => Err(e),
    };
    tally.record(outcome, &[t], "canonical form");
    let mut report = tally.finish();
    report.output = output;
    report
}

/// The vertex a closed `t : G` evaluates to.
fn vertex_of(th: &Theory, t: &Term) -> Result<Name> {
    Ok(model::eval_closed(th, t)?.as_vertex()?.clone())
}

/// The target vertex of the dense component at `t`, read off its type.
fn alpha_target(th: &Theory, t: &Term) -> Result<Name> {
    let alpha = alpha_component(th, t)?;
    let ty = kernel::normalize(th, &kernel::infer_type(th, &Context::new(), &alpha)?)?;
    match ty {
        Term::Id(_, _, r) => match &*r {
            Term::BaseVertex(v) => Ok(v.clone()),
            other => Err(RetractError::Invariant(format!("component targets {}", print_term(other)))),
        },
        other => Err(RetractError::Invariant(format!("component has type {}", print_term(&other)))),
    }
}

/// Components of the samples against the graph's components. Passes when
/// every sample evaluates into the component of its closure, and, when the
/// samples include every vertex literal, every component is hit.
pub fn pi0_report(th: &Theory, samples: &[Term]) -> Report {
    let comps = graph::components(th);
    let mut tally = Tally::new(
        ReportKind::Pi0,
        format!("{}, {} components, {} samples", describe(th), comps.len(), samples.len()),
    );
    tally.section("component of evaluation matches component of closure", false);
    let mut hit = BTreeSet::new();
    for t in samples {
        let outcome = (|| {
            kernel::check_type(th, &Context::new(), t, &g())?;
            let v = vertex_of(th, t)?;
            let target = alpha_target(th, t)?;
            let (cv, ct) = (graph::component_of(&comps, &v), graph::component_of(&comps, &target));
            if let Some(c) = cv {
                hit.insert(c);
            }
            Ok(cv.is_some() && cv == ct)
        })();
        tally.record(outcome, &[t], "component mismatch");
    }
    let literals: BTreeSet<&Name> = samples
        .iter()
        .filter_map(|t| match t {
            Term::BaseVertex(v) => Some(v),
            _ => None,
        })
        .collect();
    if th.vertices.iter().all(|v| literals.contains(v)) {
        tally.section("vertex samples hit every component", false);
        let all = hit.len() == comps.len();
        tally.record(Ok(all), &[], "some component has no sample");
    }
    let mut report = tally.finish();
    report.output.insert("components".to_string(), comps.len().to_string());
    report
}

/// The endpoints of a closed path.
fn path_ends(th: &Theory, p: &Term) -> Result<(Term, Term)> {
    match kernel::normalize(th, &kernel::infer_type(th, &Context::new(), p)?)? {
        Term::Id(_, a, b) => Ok(((*a).clone(), (*b).clone())),
        ty => Err(TypeError::NotAPath { term: p.clone(), ty }.into()),
    }
}

/// Density of sampled components and naturality along sampled paths,
/// `fuel` of each.
pub fn retract_report(th: &Theory, fuel: usize, seed: u64) -> Report {
    let mut tally = Tally::new(ReportKind::Retract, format!("{}, fuel {fuel}, seed {seed}", describe(th)));
    tally.section("component is dense and targets the closure", false);
    for i in 0..fuel {
        let mut gen = Gen::new(th, harness::stream(seed, 2 * i as u64));
        let t = gen.base(&Context::new(), SAMPLE_DEPTH);
        tally.record(dense_component(th, &t), &[&t], "component is not dense or misses the closure");
    }
    tally.section("naturality along paths", false);
    for i in 0..fuel {
        let mut gen = Gen::new(th, harness::stream(seed, 2 * i as u64 + 1));
        let (_, _, f) = gen.path(&Context::new(), SAMPLE_DEPTH);
        let outcome = path_ends(th, &f).and_then(|(t, s)| naturality_check(th, &f, &t, &s));
        tally.record(outcome, &[&f], "naturality square does not commute");
    }
    tally.finish()
}

/// Whether the component at `t` is dense and ends at `closure(eval t)`.
pub fn dense_component(th: &Theory, t: &Term) -> Result<bool> {
    let alpha = alpha_component(th, t)?;
    let tb = closure_of(th, t)?;
    is_dense(th, &alpha, t, &tb)
}

fn word_of(th: &Theory, rng: &mut impl Rng, start: &Name, end: Option<&Name>) -> Result<ReducedWord> {
    let (mut letters, last) = harness::walk_from(th, rng, start, WORD_LENGTH);
    if let Some(end) = end {
        let back = harness::shortest_walk(th, &last, end)
            .ok_or_else(|| RetractError::Invariant(format!("{end} is unreachable from {last}")))?;
        letters.extend(back.into_iter().map(|(l, _)| l));
    }
    Ok(graph::reduce(th, start, &letters)?)
}

/// `alpha_t . closure(w) . alpha_s^-1 : Id(G, t, s)` for `w` between the
/// values of `t` and `s`.
fn conjugate(rz: &Rz, t: &Term, s: &Term, w: &ReducedWord) -> Result<Term> {
    let th = rz.theory();
    let (at, as_) = (alpha_in(rz, t)?, alpha_in(rz, s)?);
    let (tb, sb) = (rz.closure_of(t)?, rz.closure_of(s)?);
    let cw = model::closure_term(th, &Value::Word(w.clone()))?;
    let first = path_compose_raw(&g(), t, &tb, &sb, &at, &cw);
    let back = path_inverse_raw(&g(), s, &sb, &as_);
    Ok(path_compose_raw(&g(), t, &sb, s, &first, &back))
}

fn eval_word(rz: &Rz, t: &Term) -> Result<ReducedWord> {
    Ok(rz.eval(t)?.as_word()?.clone())
}

/// The three parts of the equivalence between closed terms of `G` and the
/// free groupoid, on `fuel` samples each.
pub fn equivalence_report(th: &Theory, fuel: usize, seed: u64) -> Report {
    let mut tally = Tally::new(ReportKind::Equivalence, format!("{}, fuel {fuel}, seed {seed}", describe(th)));
    let empty = Context::new();
    let vertices: Vec<Name> = th.vertices.iter().cloned().collect();

    tally.section("essential surjectivity: evaluation of the closure is the identity", false);
    for i in 0..fuel {
        let mut rng = harness::stream(seed, 3 * i as u64);
        let v = vertices[rng.random_range(0..vertices.len())].clone();
        let outcome = (|| {
            let w = word_of(th, &mut rng, &v, None)?;
            let back_w = model::eval_closed(th, &model::closure_term(th, &Value::Word(w.clone()))?)?;
            let vv = Value::Vertex(v.clone());
            let back_v = model::eval_closed(th, &model::closure_term(th, &vv)?)?;
            Ok(back_w.same_arrow(&Value::Word(w)) && back_v.same_arrow(&vv))
        })();
        tally.record(outcome, &[&Term::BaseVertex(v)], "closure does not evaluate back");
    }

    tally.section("fullness: words are evaluations of paths between arbitrary terms", false);
    for i in 0..fuel {
        let mut gen = Gen::new(th, harness::stream(seed, 3 * i as u64 + 1));
        let t = gen.base(&empty, SAMPLE_DEPTH);
        let s = gen.base(&empty, SAMPLE_DEPTH);
        let outcome = (|| {
            let a = vertex_of(th, &t)?;
            let b = vertex_of(th, &s)?;
            let comps = harness::bfs_components(th);
            let (s, b) = if comps[&a] == comps[&b] { (s.clone(), b) } else { (t.clone(), a.clone()) };
            let w = word_of(th, gen.rng(), &a, Some(&b))?;
            let rz = Rz::new(th);
            let direct = eval_word(&rz, &model::closure_term(th, &Value::Word(w.clone()))?)?;
            let c = conjugate(&rz, &t, &s, &w)?;
            kernel::check_type(th, &empty, &c, &path_ty(&t, &s))?;
            Ok(direct == w && eval_word(&rz, &c)? == w)
        })();
        tally.record(outcome, &[&t, &s], "path does not evaluate to its word");
    }

    tally.section("faithfulness: equal evaluations are convertible, convertible terms evaluate equally", true);
    for i in 0..fuel {
        let mut gen = Gen::new(th, harness::stream(seed, 3 * i as u64 + 2));
        let (_, _, p) = gen.path(&empty, SAMPLE_DEPTH);
        let outcome = (|| {
            let (t, s) = path_ends(th, &p)?;
            let rz = Rz::new(th);
            let q = conjugate(&rz, &t, &s, &eval_word(&rz, &p)?)?;
            let ty = path_ty(&t, &s);
            Ok(eval_word(&rz, &p)? == eval_word(&rz, &q)? && kernel::convertible(th, &empty, &ty, &p, &q)?)
        })();
        tally.record(outcome, &[&p], "paths with equal evaluations are not convertible");
        let u = match gen.rng().random_range(0..3) {
            0 => gen.base(&empty, SAMPLE_DEPTH),
            1 => gen.nat(&empty, SAMPLE_DEPTH),
            _ => gen.path(&empty, SAMPLE_DEPTH).2,
        };
        let outcome = conversion_sound(th, &u);
        tally.record(outcome, &[&u], "convertible terms evaluate differently");
    }
    tally.finish()
}

/// A term and its normal form are convertible and evaluate equally.
pub fn conversion_sound(th: &Theory, u: &Term) -> Result<bool> {
    let empty = Context::new();
    let ty = kernel::infer_type(th, &empty, u)?;
    let n = kernel::normalize(th, u)?;
    if !kernel::convertible(th, &empty, &ty, u, &n)? {
        return Ok(false);
    }
    Ok(model::eval_closed(th, u)?.same_arrow(&model::eval_closed(th, &n)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jterms::transport;

    fn th1() -> Theory {
        Theory::with(
            "T",
            &["a", "b", "c"],
            &[("f", "a", "b"), ("e", "a", "a"), ("g", "b", "c")],
        )
        .unwrap()
    }

    fn v(s: &str) -> Term {
        Term::vertex(s)
    }

    #[test]
    fn density() {
        let th = th1();
        assert!(is_dense(&th, &Term::refl(v("a")), &v("a"), &v("a")).unwrap());
        assert!(!is_dense(&th, &Term::edge("f"), &v("a"), &v("b")).unwrap());
        let e = Term::edge("e");
        let back = path_inverse_raw(&g(), &v("a"), &v("a"), &e);
        let p = path_compose_raw(&g(), &v("a"), &v("a"), &v("a"), &e, &back);
        assert!(is_dense(&th, &p, &v("a"), &v("a")).unwrap());
    }

    #[test]
    fn components() {
        let th = th1();
        assert_eq!(alpha_component(&th, &v("a")).unwrap(), Term::refl(v("a")));
        let dop = Term::j(g(), v("b"), v("a"), v("a"), Term::edge("e"));
        assert!(dense_component(&th, &dop).unwrap());
        assert_eq!(alpha_target(&th, &dop).unwrap(), Name::new("b"));
        let moved = transport(&g(), &v("a"), &v("b"), &Term::edge("f"), &v("a"));
        assert!(dense_component(&th, &moved).unwrap());
        assert_eq!(alpha_target(&th, &moved).unwrap(), Name::new("a"));
    }

    #[test]
    fn naturality_on_basic_paths() {
        let th = th1();
        assert!(naturality_check(&th, &Term::refl(v("a")), &v("a"), &v("a")).unwrap());
        assert!(naturality_check(&th, &Term::edge("f"), &v("a"), &v("b")).unwrap());
        let dop = Term::j(g(), v("b"), v("a"), v("a"), Term::edge("e"));
        assert!(naturality_check(&th, &Term::edge("g"), &dop, &v("c")).is_err());
        let p = path_compose_raw(&g(), &dop, &v("b"), &v("c"), &alpha_component(&th, &dop).unwrap(), &Term::edge("g"));
        assert!(naturality_check(&th, &p, &dop, &v("c")).unwrap());
    }

    #[test]
    fn canonical_numerals() {
        let th = th1();
        let (n, p) = canon_nat(&th, &Term::Zero).unwrap();
        assert_eq!((n, p), (Term::Zero, Term::refl(Term::Zero)));
        let add = Term::rec(Term::NatTy, Term::Zero, Term::succ(Term::Var(0)), Term::numeral(2));
        assert_eq!(canon_nat(&th, &add).unwrap().0, Term::numeral(2));
        let moved = transport(&Term::NatTy, &v("a"), &v("a"), &Term::edge("e"), &Term::numeral(1));
        assert_eq!(canon_nat(&th, &moved).unwrap().0, Term::numeral(1));
    }

    #[test]
    fn pi0_on_vertices() {
        let th = th1();
        let samples: Vec<Term> = th.vertices.iter().map(|x| Term::BaseVertex(x.clone())).collect();
        let r = pi0_report(&th, &samples);
        assert!(r.passed(), "{}", r.to_text());
        assert_eq!(r.output["components"], "1");
        let two = Theory::with("U", &["a", "b", "c"], &[("f", "a", "b")]).unwrap();
        let samples: Vec<Term> = two.vertices.iter().map(|x| Term::BaseVertex(x.clone())).collect();
        let r = pi0_report(&two, &samples);
        assert!(r.passed());
        assert_eq!(r.output["components"], "2");
    }

    #[test]
    fn equivalence_reports() {
        let th = th1();
        let r = equivalence_report(&th, 0, 0);
        assert!(r.passed());
        assert_eq!(r.stats.samples, 0);
        let r = equivalence_report(&th, 10, 0);
        assert!(r.passed(), "{}", r.to_text());
        let isolated = Theory::with("U", &["a", "b", "z"], &[("f", "a", "b")]).unwrap();
        let r = equivalence_report(&isolated, 10, 3);
        assert!(r.passed(), "{}", r.to_text());
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["kind"], "equivalence");
        assert_eq!(json["verdict"], "pass");
        assert!(json["stats"]["millis"].is_u64());
        assert!(json.get("counterexample").is_none());
    }

    #[test]
    fn retract_reports() {
        let th = th1();
        let r = retract_report(&th, 10, 0);
        assert!(r.passed(), "{}", r.to_text());
    }
}
