//! Seeded generators of theories, words and well-typed closed terms, and the
//! independent oracles the property suites compare against.
//!
//! Term generation is derivation-directed: every rule builds a term of the
//! requested type from subterms of known types, so the output type-checks
//! without any rejection step. Eliminator motives are constant families or
//! identity families over `G`.

use std::collections::{BTreeMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Letter, Orientation, Theory};
use crate::jterms::{path_compose_raw, path_inverse_raw};
use crate::syntax::{instantiate, shift, subst_block, Context, Name, Rt, Term};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HarnessError {
    #[error("no term of the requested type can be generated: {0}")]
    TargetUnrealizable(String),
    #[error("invalid generator configuration: {0}")]
    BadConfig(&'static str),
    #[error("oracle cannot evaluate: {0}")]
    Oracle(String),
}

/// What [`gen_term`] should produce.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeTarget {
    Base,
    /// A path of `G`, between the given vertices or arbitrary ones.
    Path(Option<(Name, Name)>),
    Nat,
    /// A given closed type, one of [`combo_types`] or built from them.
    Exact(Term),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenConfig {
    pub seed: u64,
    /// Maximum derivation depth.
    pub fuel: u32,
    pub max_vertices: usize,
    pub max_edges: usize,
    pub target: TypeTarget,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 0,
            fuel: 3,
            max_vertices: 4,
            max_edges: 6,
            target: TypeTarget::Base,
        }
    }
}

/// The random stream `index` of a seed. Streams are independent, so sample
/// `i` of a run never depends on how many draws sample `i - 1` made.
pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn gen_theory(cfg: &GenConfig) -> Result<Theory, HarnessError> {
    if cfg.max_vertices == 0 {
        return Err(HarnessError::BadConfig("max_vertices must be at least 1"));
    }
    let mut rng = stream(cfg.seed, 0);
    let nv = rng.random_range(1..=cfg.max_vertices);
    let ne = rng.random_range(0..=cfg.max_edges);
    let mut th = Theory::new(&format!("gen{}", cfg.seed));
    let names: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
    for v in &names {
        th.add_vertex(v).expect("fresh vertex");
    }
    for i in 0..ne {
        let s = &names[rng.random_range(0..nv)];
        let t = &names[rng.random_range(0..nv)];
        th.add_edge(&format!("e{i}"), s, t).expect("fresh edge");
    }
    Ok(th)
}

pub fn gen_term(th: &Theory, cfg: &GenConfig) -> Result<Term, HarnessError> {
    let mut g = Gen::new(th, stream(cfg.seed, 1));
    let ctx = Context::new();
    match &cfg.target {
        TypeTarget::Base => Ok(g.base(&ctx, cfg.fuel)),
        TypeTarget::Nat => Ok(g.nat(&ctx, cfg.fuel)),
        TypeTarget::Path(None) => Ok(g.path(&ctx, cfg.fuel).2),
        TypeTarget::Path(Some((a, b))) => {
            let ty = Term::id(Term::base_ty(), Term::BaseVertex(a.clone()), Term::BaseVertex(b.clone()));
            g.of_type(&ctx, &ty, cfg.fuel)
                .ok_or_else(|| HarnessError::TargetUnrealizable(format!("no path from {a} to {b}")))
        }
        TypeTarget::Exact(ty) => g
            .of_type(&ctx, ty, cfg.fuel)
            .ok_or_else(|| HarnessError::TargetUnrealizable(crate::parser::print_term(ty))),
    }
}

/// The Pi and Sigma combinations exercised by the suites.
pub fn combo_types() -> Vec<Term> {
    let g = Term::base_ty;
    let loop_ty = || Term::id(g(), Term::Var(0), Term::Var(0));
    vec![
        Term::pi(g(), g()),
        Term::pi(Term::NatTy, Term::NatTy),
        Term::pi(g(), Term::NatTy),
        Term::sigma(g(), Term::NatTy),
        Term::sigma(Term::NatTy, g()),
        Term::sigma(g(), loop_ty()),
        Term::pi(g(), loop_ty()),
    ]
}

/// A generator over one random stream.
pub struct Gen<'t, R: Rng> {
    th: &'t Theory,
    rng: R,
    vertices: Vec<Name>,
    edges: Vec<(Name, Name, Name)>,
}

fn g() -> Term {
    Term::base_ty()
}

/// `B(x)` for `x` among `x, y, z`, from `B` binding one variable.
fn at3(b: &Term, which: usize) -> Term {
    subst_block(b, 1, 3, &|_| Term::Var(which))
}

impl<'t, R: Rng> Gen<'t, R> {
    pub fn new(th: &'t Theory, rng: R) -> Self {
        let vertices = th.vertices.iter().cloned().collect();
        let edges = th
            .edges
            .iter()
            .map(|(e, (s, t))| (e.clone(), s.clone(), t.clone()))
            .collect();
        Gen {
            th,
            rng,
            vertices,
            edges,
        }
    }

    pub fn rng(&mut self) -> &mut R {
        &mut self.rng
    }

    fn vertex(&mut self) -> Term {
        let i = self.rng.random_range(0..self.vertices.len());
        Term::BaseVertex(self.vertices[i].clone())
    }

    fn vars_of(ctx: &Context, ty: &Term) -> Vec<usize> {
        (0..ctx.len()).filter(|&i| ctx.lookup(i).as_ref() == Some(ty)).collect()
    }

    fn var_or(&mut self, ctx: &Context, ty: &Term, fallback: Term) -> Term {
        let vars = Self::vars_of(ctx, ty);
        if !vars.is_empty() && self.rng.random_bool(0.5) {
            Term::Var(vars[self.rng.random_range(0..vars.len())])
        } else {
            fallback
        }
    }

    /// A term of type `G`.
    pub fn base(&mut self, ctx: &Context, fuel: u32) -> Term {
        if fuel == 0 {
            let v = self.vertex();
            return self.var_or(ctx, &g(), v);
        }
        let f = fuel - 1;
        match self.rng.random_range(0..9) {
            0 => {
                let v = self.vertex();
                self.var_or(ctx, &g(), v)
            }
            1 | 2 => {
                let (a, b, p) = self.path(ctx, f);
                let base = self.base(&ctx.extended(g()), f);
                Term::j(g(), base, a, b, p)
            }
            3 => {
                let body = self.base(&ctx.extended(g()), f);
                Term::app(Term::lam(g(), body), self.base(ctx, f))
            }
            4 => {
                let body = self.base(&ctx.extended(Term::NatTy), f);
                Term::app(Term::lam(Term::NatTy, body), self.nat(ctx, f))
            }
            5 => {
                let z = self.base(ctx, f);
                let s = self.base(&ctx.extended(Term::NatTy).extended(g()), f);
                let k = self.nat(ctx, f.min(1));
                Term::rec(g(), z, s, k)
            }
            6 => {
                let ty = if self.rng.random_bool(0.5) {
                    Term::sigma(g(), Term::NatTy)
                } else {
                    Term::sigma(g(), Term::id(g(), Term::Var(0), Term::Var(0)))
                };
                let p = self.of_type(ctx, &ty, f).expect("sigma over G is inhabited");
                Term::proj0(p)
            }
            7 => {
                let sig = Term::sigma(Term::NatTy, g());
                let scrut = self.of_type(ctx, &sig, f).expect("sigma over Nat is inhabited");
                let branch = self.base(&ctx.extended(Term::NatTy).extended(g()), f);
                Term::rsig(g(), branch, scrut)
            }
            _ => {
                let fun_ty = Term::pi(g(), g());
                let (a, b, p) = self.path(ctx, f);
                let body = self.base(&ctx.extended(g()).extended(g()), f);
                let moved = Term::j(shift(&fun_ty, 3, 0), Term::lam(g(), body), a, b, p);
                Term::app(moved, self.base(ctx, f))
            }
        }
    }

    /// A term of type `Nat`.
    pub fn nat(&mut self, ctx: &Context, fuel: u32) -> Term {
        if fuel == 0 {
            return self.var_or(ctx, &Term::NatTy, Term::Zero);
        }
        let f = fuel - 1;
        match self.rng.random_range(0..7) {
            0 => self.var_or(ctx, &Term::NatTy, Term::Zero),
            1 => Term::succ(self.nat(ctx, f)),
            2 => {
                let (a, b, p) = self.path(ctx, f);
                let base = self.nat(&ctx.extended(g()), f);
                Term::j(Term::NatTy, base, a, b, p)
            }
            3 => {
                let z = self.nat(ctx, f);
                let s = self.nat(&ctx.extended(Term::NatTy).extended(Term::NatTy), f);
                let k = self.nat(ctx, f.min(1));
                Term::rec(Term::NatTy, z, s, k)
            }
            4 => {
                let body = self.nat(&ctx.extended(g()), f);
                Term::app(Term::lam(g(), body), self.base(ctx, f))
            }
            5 => {
                let p = self
                    .of_type(ctx, &Term::sigma(g(), Term::NatTy), f)
                    .expect("sigma over G is inhabited");
                Term::proj1(p)
            }
            _ => {
                let sig = Term::sigma(g(), Term::NatTy);
                let scrut = self.of_type(ctx, &sig, f).expect("sigma over G is inhabited");
                let branch = self.nat(&ctx.extended(g()).extended(Term::NatTy), f);
                Term::rsig(Term::NatTy, branch, scrut)
            }
        }
    }

    /// A path `p : Id(G, a, b)` together with its endpoints.
    pub fn path(&mut self, ctx: &Context, fuel: u32) -> (Term, Term, Term) {
        if fuel == 0 {
            return self.basic_path();
        }
        let f = fuel - 1;
        match self.rng.random_range(0..8) {
            0 => self.basic_path(),
            1 => {
                let t = self.base(ctx, f);
                (t.clone(), t.clone(), Term::refl(t))
            }
            2 => {
                let (a, b, p) = self.path(ctx, f);
                let q = path_inverse_raw(&g(), &a, &b, &p);
                (b, a, q)
            }
            3 => {
                let (a, b, p) = self.path(ctx, f);
                let (c, q) = self.path_from(ctx, &b, f);
                let r = path_compose_raw(&g(), &a, &b, &c, &p, &q);
                (a, c, r)
            }
            4 => {
                let body = self.base(&ctx.extended(g()), f);
                let (a, b, p) = self.path(ctx, f);
                let motive = Term::id(g(), at3(&body, 2), at3(&body, 1));
                let fa = instantiate(&body, std::slice::from_ref(&a));
                let fb = instantiate(&body, std::slice::from_ref(&b));
                (fa, fb, Term::j(motive, Term::refl(body), a, b, p))
            }
            5 => {
                let v = self.base(ctx, f);
                let l = self.loop_at(ctx, &v, f);
                let k = self.nat(ctx, f.min(1));
                (v.clone(), v.clone(), self.iterate_loop(&v, &l, k))
            }
            6 => {
                let (a, b, p) = self.path(ctx, f);
                let (c, d, q) = self.path(ctx, f);
                let motive = Term::id(g(), shift(&c, 3, 0), shift(&d, 3, 0));
                (c, d, Term::j(motive, shift(&q, 1, 0), a, b, p))
            }
            _ => {
                let found: Vec<(usize, Term)> = (0..ctx.len())
                    .filter_map(|i| match ctx.lookup(i) {
                        Some(Term::Id(a, l, r)) if *a == g() => Some((i, Term::id(g(), (*l).clone(), (*r).clone()))),
                        _ => None,
                    })
                    .collect();
                if found.is_empty() {
                    return self.basic_path();
                }
                let (i, ty) = found[self.rng.random_range(0..found.len())].clone();
                match ty {
                    Term::Id(_, l, r) => ((*l).clone(), (*r).clone(), Term::Var(i)),
                    _ => unreachable!("filtered to identity types"),
                }
            }
        }
    }

    fn basic_path(&mut self) -> (Term, Term, Term) {
        if self.edges.is_empty() || self.rng.random_bool(0.2) {
            let v = self.vertex();
            return (v.clone(), v.clone(), Term::refl(v));
        }
        let (e, s, t) = self.edges[self.rng.random_range(0..self.edges.len())].clone();
        (Term::BaseVertex(s), Term::BaseVertex(t), Term::BaseEdge(e))
    }

    /// A path out of `start`, with its target.
    #[allow(clippy::only_used_in_recursion)]
    pub fn path_from(&mut self, ctx: &Context, start: &Term, fuel: u32) -> (Term, Term) {
        let choice = if fuel == 0 { self.rng.random_range(0..2) } else { self.rng.random_range(0..3) };
        match (choice, start) {
            (1, Term::BaseVertex(v)) => {
                let steps: Vec<(Name, Name, bool)> = self
                    .edges
                    .iter()
                    .flat_map(|(e, s, t)| {
                        let mut out = Vec::new();
                        if s == v {
                            out.push((e.clone(), t.clone(), true));
                        }
                        if t == v {
                            out.push((e.clone(), s.clone(), false));
                        }
                        out
                    })
                    .collect();
                if steps.is_empty() {
                    return (start.clone(), Term::refl(start.clone()));
                }
                let (e, other, fwd) = steps[self.rng.random_range(0..steps.len())].clone();
                let o = Term::BaseVertex(other);
                if fwd {
                    (o, Term::BaseEdge(e))
                } else {
                    let p = path_inverse_raw(&g(), &o, start, &Term::BaseEdge(e));
                    (o, p)
                }
            }
            (2, _) => {
                let (b, p) = self.path_from(ctx, start, fuel - 1);
                let (c, q) = self.path_from(ctx, &b, fuel - 1);
                (c.clone(), path_compose_raw(&g(), start, &b, &c, &p, &q))
            }
            _ => (start.clone(), Term::refl(start.clone())),
        }
    }

    /// A loop `Id(G, x, x)`.
    pub fn loop_at(&mut self, ctx: &Context, x: &Term, fuel: u32) -> Term {
        if fuel == 0 {
            return self.loop_edge(x).unwrap_or_else(|| Term::refl(x.clone()));
        }
        let f = fuel - 1;
        match self.rng.random_range(0..6) {
            0 => Term::refl(x.clone()),
            1 => {
                let (b, p) = self.path_from(ctx, x, f);
                let back = path_inverse_raw(&g(), x, &b, &p);
                path_compose_raw(&g(), x, &b, x, &p, &back)
            }
            2 => self.loop_edge(x).unwrap_or_else(|| Term::refl(x.clone())),
            3 => {
                let l1 = self.loop_at(ctx, x, f);
                let l2 = self.loop_at(ctx, x, f);
                path_compose_raw(&g(), x, x, x, &l1, &l2)
            }
            4 => {
                let (a, b, p) = self.path(ctx, f);
                let l = self.loop_at(ctx, x, f);
                let motive = Term::id(g(), shift(x, 3, 0), shift(x, 3, 0));
                Term::j(motive, shift(&l, 1, 0), a, b, p)
            }
            _ => {
                let l = self.loop_at(ctx, x, f);
                let k = self.nat(ctx, f.min(1));
                self.iterate_loop(x, &l, k)
            }
        }
    }

    fn loop_edge(&mut self, x: &Term) -> Option<Term> {
        let Term::BaseVertex(v) = x else { return None };
        let loops: Vec<Name> = self
            .edges
            .iter()
            .filter(|(_, s, t)| s == v && t == v)
            .map(|(e, _, _)| e.clone())
            .collect();
        if loops.is_empty() {
            None
        } else {
            Some(Term::BaseEdge(loops[self.rng.random_range(0..loops.len())].clone()))
        }
    }

    /// `l` composed with itself `k` times, by recursion on `k`.
    fn iterate_loop(&self, x: &Term, l: &Term, k: Term) -> Term {
        let x1 = shift(x, 1, 0);
        let x2 = shift(x, 2, 0);
        let motive = Term::id(g(), x1.clone(), x1);
        let step = path_compose_raw(&g(), &x2, &x2, &x2, &Term::Var(0), &shift(l, 2, 0));
        Term::rec(motive, Term::refl(x.clone()), step, k)
    }

    /// A term of an arbitrary supported type, or `None` when the generator
    /// has no rule for it.
    pub fn of_type(&mut self, ctx: &Context, ty: &Term, fuel: u32) -> Option<Term> {
        match ty {
            Term::BaseTy(_) => Some(self.base(ctx, fuel)),
            Term::NatTy => Some(self.nat(ctx, fuel)),
            Term::Id(a, l, r) if **a == g() => {
                if l == r {
                    return Some(self.loop_at(ctx, l, fuel));
                }
                let (Term::BaseVertex(s), Term::BaseVertex(t)) = (&**l, &**r) else {
                    return None;
                };
                let walk = shortest_walk(self.th, s, t)?;
                let f = fuel.saturating_sub(1);
                let lp = self.loop_at(ctx, l, f);
                let mut acc = lp;
                let mut cur = (**l).clone();
                for (letter, next) in walk {
                    let nv = Term::BaseVertex(next);
                    let step = match letter.orientation {
                        Orientation::Forward => Term::BaseEdge(letter.edge),
                        Orientation::Backward => path_inverse_raw(&g(), &nv, &cur, &Term::BaseEdge(letter.edge)),
                    };
                    acc = path_compose_raw(&g(), l, &cur, &nv, &acc, &step);
                    cur = nv;
                }
                Some(acc)
            }
            Term::Pi(a, b) => {
                let body = self.of_type(&ctx.extended((**a).clone()), b, fuel.saturating_sub(1))?;
                let lam = Term::lam((**a).clone(), body);
                if fuel > 0 && self.rng.random_bool(0.25) {
                    let (x, y, p) = self.path(ctx, fuel - 1);
                    Some(Term::j(shift(ty, 3, 0), shift(&lam, 1, 0), x, y, p))
                } else {
                    Some(lam)
                }
            }
            Term::Sigma(a, b) => {
                let f = fuel.saturating_sub(1);
                let x = self.of_type(ctx, a, f)?;
                let y = self.of_type(ctx, &instantiate(b, std::slice::from_ref(&x)), f)?;
                Some(Term::pair(x, y, ty.clone()))
            }
            _ => None,
        }
    }
}

/// Shortest undirected walk from `s` to `t`, as letters with the vertex each
/// one reaches.
pub fn shortest_walk(th: &Theory, s: &Name, t: &Name) -> Option<Vec<(Letter, Name)>> {
    let mut prev: BTreeMap<Name, (Name, Letter)> = BTreeMap::new();
    let mut queue = VecDeque::from([s.clone()]);
    let mut seen = std::collections::BTreeSet::from([s.clone()]);
    while let Some(v) = queue.pop_front() {
        if &v == t {
            break;
        }
        for (e, (a, b)) in &th.edges {
            let mut visit = |w: &Name, l: Letter| {
                if seen.insert(w.clone()) {
                    prev.insert(w.clone(), (v.clone(), l));
                    queue.push_back(w.clone());
                }
            };
            if *a == v {
                visit(b, Letter::forward(e));
            }
            if *b == v {
                visit(a, Letter::backward(e));
            }
        }
    }
    if !seen.contains(t) {
        return None;
    }
    let mut out = Vec::new();
    let mut cur = t.clone();
    while &cur != s {
        let (p, l) = prev[&cur].clone();
        out.push((l, cur));
        cur = p;
    }
    out.reverse();
    Some(out)
}

// ---- words ----

/// A random walk in the graph, as unreduced letters from a random vertex.
pub fn gen_walk(th: &Theory, rng: &mut impl Rng, max_len: usize) -> (Name, Vec<Letter>) {
    let vs: Vec<&Name> = th.vertices.iter().collect();
    let start = vs[rng.random_range(0..vs.len())].clone();
    let letters = walk_from(th, rng, &start, max_len).0;
    (start, letters)
}

/// A random walk of at most `max_len` letters from `start`, with its end.
pub fn walk_from(th: &Theory, rng: &mut impl Rng, start: &Name, max_len: usize) -> (Vec<Letter>, Name) {
    let len = rng.random_range(0..=max_len);
    let mut cur = start.clone();
    let mut letters = Vec::with_capacity(len);
    for _ in 0..len {
        let steps: Vec<(Letter, Name)> = th
            .edges
            .iter()
            .flat_map(|(e, (s, t))| {
                let mut out = Vec::new();
                if *s == cur {
                    out.push((Letter::forward(e), t.clone()));
                }
                if *t == cur {
                    out.push((Letter::backward(e), s.clone()));
                }
                out
            })
            .collect();
        if steps.is_empty() {
            break;
        }
        let (l, next) = steps[rng.random_range(0..steps.len())].clone();
        letters.push(l);
        cur = next;
    }
    (letters, cur)
}

/// Word reduction by repeated left-to-right scans until nothing cancels.
pub fn naive_reduce(letters: &[Letter]) -> Vec<Letter> {
    let mut cur = letters.to_vec();
    loop {
        let mut next = Vec::with_capacity(cur.len());
        let mut i = 0;
        let mut changed = false;
        while i < cur.len() {
            if i + 1 < cur.len() && cur[i].edge == cur[i + 1].edge && cur[i].orientation != cur[i + 1].orientation {
                i += 2;
                changed = true;
            } else {
                next.push(cur[i].clone());
                i += 1;
            }
        }
        if !changed {
            return next;
        }
        cur = next;
    }
}

/// Component labels by breadth-first search, one label per vertex.
pub fn bfs_components(th: &Theory) -> BTreeMap<Name, usize> {
    let mut label = BTreeMap::new();
    let mut next = 0;
    for v in &th.vertices {
        if label.contains_key(v) {
            continue;
        }
        let mut queue = VecDeque::from([v.clone()]);
        label.insert(v.clone(), next);
        while let Some(u) = queue.pop_front() {
            for (s, t) in th.edges.values() {
                for (a, b) in [(s, t), (t, s)] {
                    if *a == u && !label.contains_key(b) {
                        label.insert(b.clone(), next);
                        queue.push_back(b.clone());
                    }
                }
            }
        }
        next += 1;
    }
    label
}

// ---- big-step oracle ----

/// Values of the big-step evaluator. Paths carry no content: the generator
/// only eliminates them into constant or identity families.
#[derive(Clone, Debug)]
pub enum BigValue {
    Vertex(Name),
    Num(u64),
    Pair(Box<BigValue>, Box<BigValue>),
    Closure(Vec<BigValue>, Rt),
    Path,
    /// A function all of whose results are paths.
    PathFn,
}

fn ends_in_id(ty: &Term) -> bool {
    match ty {
        Term::Id(..) => true,
        Term::Pi(_, b) => ends_in_id(b),
        _ => false,
    }
}

/// Direct environment-passing evaluation of a closed term.
pub fn big_step(t: &Term) -> Result<BigValue, HarnessError> {
    big(&mut Vec::new(), t)
}

fn big(env: &mut Vec<BigValue>, t: &Term) -> Result<BigValue, HarnessError> {
    let bad = |what: &str| HarnessError::Oracle(what.to_string());
    Ok(match t {
        Term::Var(k) => env
            .len()
            .checked_sub(k + 1)
            .map(|i| env[i].clone())
            .ok_or_else(|| bad("unbound variable"))?,
        Term::BaseVertex(v) => BigValue::Vertex(v.clone()),
        Term::BaseEdge(_) | Term::Refl(_) => BigValue::Path,
        Term::Lam(_, body) => BigValue::Closure(env.clone(), body.clone()),
        Term::App(f, a) => {
            let fv = big(env, f)?;
            let av = big(env, a)?;
            apply(fv, av)?
        }
        Term::Pair(a, b, _) => BigValue::Pair(Box::new(big(env, a)?), Box::new(big(env, b)?)),
        Term::Proj0(p) | Term::Proj1(p) => match big(env, p)? {
            BigValue::Pair(a, b) => *if matches!(t, Term::Proj0(_)) { a } else { b },
            _ => return Err(bad("projection of a non-pair")),
        },
        Term::Zero => BigValue::Num(0),
        Term::Succ(n) => match big(env, n)? {
            BigValue::Num(k) => BigValue::Num(k + 1),
            _ => return Err(bad("successor of a non-number")),
        },
        Term::Rec {
            zcase, scase, scrut, ..
        } => {
            let BigValue::Num(k) = big(env, scrut)? else {
                return Err(bad("recursion on a non-number"));
            };
            let mut acc = big(env, zcase)?;
            for j in 0..k {
                env.push(BigValue::Num(j));
                env.push(acc);
                let r = big(env, scase);
                env.truncate(env.len() - 2);
                acc = r?;
            }
            acc
        }
        Term::RSig { branch, scrut, .. } => {
            let BigValue::Pair(a, b) = big(env, scrut)? else {
                return Err(bad("pair elimination of a non-pair"));
            };
            env.push(*a);
            env.push(*b);
            let r = big(env, branch);
            env.truncate(env.len() - 2);
            r?
        }
        Term::J {
            motive, base, lhs, ..
        } => {
            if ends_in_id(motive) {
                return Ok(if matches!(**motive, Term::Id(..)) {
                    BigValue::Path
                } else {
                    BigValue::PathFn
                });
            }
            if motive.mentions_below(3) {
                return Err(bad("J into a non-constant family"));
            }
            let a = big(env, lhs)?;
            env.push(a);
            let r = big(env, base);
            env.pop();
            r?
        }
        Term::Pi(..) | Term::Sigma(..) | Term::Id(..) | Term::NatTy | Term::BaseTy(_) => {
            return Err(bad("a type is not a value"))
        }
    })
}

fn apply(f: BigValue, a: BigValue) -> Result<BigValue, HarnessError> {
    match f {
        BigValue::Closure(mut env, body) => {
            env.push(a);
            big(&mut env, &body)
        }
        BigValue::PathFn => Ok(BigValue::Path),
        _ => Err(HarnessError::Oracle("application of a non-function".into())),
    }
}
