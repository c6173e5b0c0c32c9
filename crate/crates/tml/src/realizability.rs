//! Realizers for closed terms and their checker.
//!
//! A realizer of a closed `t : T` is, by the head of `T`:
//!
//! * `G`: a path term `tau : Id(G, t, closure(eval t))` evaluating to the
//!   empty word (a dense path);
//! * `Nat`: a number `k` and a proof `Id(Nat, t, k)`;
//! * `Id`: the unit marker;
//! * `Sigma`: a pair of realizers;
//! * `Pi`: an operation taking an argument term with its realizer to a
//!   realizer of the application.
//!
//! [`realize`] computes a realizer for every well-typed term relative to an
//! environment of witnesses and realizers for its context. Transport of
//! realizers along paths ([`reindex`], [`ftrans`]) is expressed with the
//! derived terms of [`crate::jterms`].

use std::fmt;
use std::rc::Rc;

use thiserror::Error;

use crate::graph::Theory;
use crate::jterms::{self, TelescopePath};
use crate::kernel::{self, synth, KernelError, TypeError};
use crate::model::{self, MResult, ModelError, Sem, Tys, Vals, Value};
use crate::syntax::{instantiate, instantiate_under, shift, Context, Term};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RealizeError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("realizer has the wrong shape: expected {0}")]
    Shape(&'static str),
    #[error("transport of realizers unsupported in family {0}")]
    Unsupported(String),
}

impl From<TypeError> for RealizeError {
    fn from(e: TypeError) -> Self {
        RealizeError::Kernel(e.into())
    }
}

pub type RResult<T> = Result<T, RealizeError>;

type RFunFn = dyn Fn(&Term, &Realizer) -> RResult<Realizer>;

#[derive(Clone)]
pub struct RFun(Rc<RFunFn>);

impl RFun {
    pub fn new(f: impl Fn(&Term, &Realizer) -> RResult<Realizer> + 'static) -> Self {
        RFun(Rc::new(f))
    }

    pub fn apply(&self, arg: &Term, r: &Realizer) -> RResult<Realizer> {
        (self.0)(arg, r)
    }
}

#[derive(Clone)]
pub enum Realizer {
    Base(Term),
    Fun(RFun),
    Pair(Box<Realizer>, Box<Realizer>),
    Star,
    Nat(u64, Term),
}

impl fmt::Debug for Realizer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Realizer::Base(t) => write!(f, "RBase({t:?})"),
            Realizer::Fun(_) => f.write_str("RFun(..)"),
            Realizer::Pair(a, b) => write!(f, "RPair({a:?}, {b:?})"),
            Realizer::Star => f.write_str("RStar"),
            Realizer::Nat(k, p) => write!(f, "RNat({k}, {p:?})"),
        }
    }
}

impl Realizer {
    pub fn base_path(&self) -> RResult<&Term> {
        match self {
            Realizer::Base(t) => Ok(t),
            _ => Err(RealizeError::Shape("a base realizer")),
        }
    }

    pub fn as_fun(&self) -> RResult<&RFun> {
        match self {
            Realizer::Fun(f) => Ok(f),
            _ => Err(RealizeError::Shape("a function realizer")),
        }
    }

    pub fn as_pair(&self) -> RResult<(&Realizer, &Realizer)> {
        match self {
            Realizer::Pair(a, b) => Ok((a, b)),
            _ => Err(RealizeError::Shape("a pair realizer")),
        }
    }

    pub fn as_nat(&self) -> RResult<(u64, &Term)> {
        match self {
            Realizer::Nat(k, p) => Ok((*k, p)),
            _ => Err(RealizeError::Shape("a number realizer")),
        }
    }

    fn pair(a: Realizer, b: Realizer) -> Realizer {
        Realizer::Pair(Box::new(a), Box::new(b))
    }
}

/// Witness terms and their realizers, one per context entry, outermost first.
#[derive(Clone, Debug, Default)]
pub struct REnv {
    entries: Vec<(Term, Realizer)>,
}

impl REnv {
    pub fn new() -> Self {
        REnv::default()
    }

    pub fn push(&mut self, witness: Term, r: Realizer) {
        self.entries.push((witness, r));
    }

    pub fn extended(&self, witness: Term, r: Realizer) -> REnv {
        let mut e = self.clone();
        e.push(witness, r);
        e
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn witnesses(&self) -> Vec<Term> {
        self.entries.iter().map(|(w, _)| w.clone()).collect()
    }

    fn lookup(&self, k: usize) -> Option<&Realizer> {
        let n = self.entries.len();
        n.checked_sub(k + 1).map(|i| &self.entries[i].1)
    }
}

/// The realizability evaluator over a fixed theory.
#[derive(Clone)]
pub struct Rz {
    th: Rc<Theory>,
    sem: Sem,
}

fn g() -> Term {
    Term::base_ty()
}

impl Rz {
    pub fn new(th: &Theory) -> Self {
        Rz {
            th: Rc::new(th.clone()),
            sem: Sem::new(th),
        }
    }

    /// Evaluates a closed term, sharing this evaluator's memo.
    pub fn eval(&self, t: &Term) -> MResult<Value> {
        self.sem.eval(&Tys::default(), &Vals::default(), t)
    }

    pub fn theory(&self) -> &Theory {
        &self.th
    }

    /// The closure `closure(eval t)` of a closed term of type `G`.
    pub fn closure_of(&self, t: &Term) -> RResult<Term> {
        let v = self.eval(t)?;
        Ok(model::closure_term(&self.th, &v)?)
    }

    // ---- realize ----

    pub fn realize(&self, renv: &REnv, ctx: &Context, t: &Term) -> RResult<Realizer> {
        let witnesses = renv.witnesses();
        let inst = |u: &Term| instantiate(u, &witnesses);
        let inst_at = |u: &Term, k: usize| instantiate_under(u, &witnesses, k);
        let ty = synth(&self.th, ctx, t)?;
        if matches!(ty, Term::Id(..)) {
            return Ok(Realizer::Star);
        }
        match t {
            Term::Var(k) => renv
                .lookup(*k)
                .cloned()
                .ok_or_else(|| TypeError::Unbound { index: *k, len: renv.len() }.into()),
            Term::BaseVertex(_) => Ok(Realizer::Base(Term::refl(t.clone()))),
            Term::Zero => Ok(Realizer::Nat(0, Term::refl(Term::Zero))),
            Term::Succ(n) => {
                let (k, p) = self.realize(renv, ctx, n)?.as_nat().map(|(k, p)| (k, p.clone()))?;
                Ok(Realizer::Nat(k + 1, succ_path(&inst(n), &Term::numeral(k), &p)))
            }
            Term::Lam(a, body) => {
                let me = self.clone();
                let renv = renv.clone();
                let inner = ctx.extended((**a).clone());
                let body = body.clone();
                Ok(Realizer::Fun(RFun::new(move |w, r| {
                    me.realize(&renv.extended(w.clone(), r.clone()), &inner, &body)
                })))
            }
            Term::App(f, a) => {
                let rf = self.realize(renv, ctx, f)?;
                let ra = self.realize(renv, ctx, a)?;
                rf.as_fun()?.apply(&inst(a), &ra)
            }
            Term::Pair(a, b, _) => Ok(Realizer::pair(self.realize(renv, ctx, a)?, self.realize(renv, ctx, b)?)),
            Term::Proj0(p) => Ok(self.realize(renv, ctx, p)?.as_pair()?.0.clone()),
            Term::Proj1(p) => Ok(self.realize(renv, ctx, p)?.as_pair()?.1.clone()),
            Term::Rec {
                motive,
                zcase,
                scase,
                scrut,
            } => {
                let (k, pn) = self.realize(renv, ctx, scrut)?.as_nat().map(|(k, p)| (k, p.clone()))?;
                let (m, z, s, n) = (inst_at(motive, 1), inst(zcase), inst_at(scase, 2), inst(scrut));
                let sctx = ctx.extended(Term::NatTy).extended((**motive).clone());
                let mut r = self.realize(renv, ctx, zcase)?;
                for j in 0..k {
                    let prev = Term::rec(m.clone(), z.clone(), s.clone(), Term::numeral(j));
                    let e = renv
                        .extended(Term::numeral(j), Realizer::Nat(j, Term::refl(Term::numeral(j))))
                        .extended(prev, r);
                    r = self.realize(&e, &sctx, scase)?;
                }
                let nk = Term::numeral(k);
                let q = jterms::path_inverse_raw(&Term::NatTy, &n, &nk, &pn);
                let path = TelescopePath::single(Term::NatTy, nk.clone(), n.clone(), q);
                let rk = Term::rec(m.clone(), z.clone(), s.clone(), nk);
                let moved = self.ftrans(&m, &path, &rk, &r)?;
                let open = Term::rec(shift(&m, 1, 1), shift(&z, 1, 0), shift(&s, 1, 2), Term::Var(0));
                let act = jterms::action_on_path(&m, &open, &path);
                let target = Term::rec(m.clone(), z, s, n.clone());
                self.reindex(
                    &moved,
                    &instantiate(&m, &[n]),
                    &jterms::seq_transport(&m, &path, &rk),
                    &target,
                    &act,
                )
            }
            Term::RSig {
                motive,
                branch,
                scrut,
            } => {
                let rp = self.realize(renv, ctx, scrut)?;
                let (r0, r1) = rp.as_pair()?;
                let (dom, fam) = match synth(&self.th, ctx, scrut)? {
                    Term::Sigma(a, b) => ((*a).clone(), (*b).clone()),
                    ty => return Err(TypeError::NotAPair { term: (**scrut).clone(), ty }.into()),
                };
                let sig = Term::sigma(inst(&dom), inst_at(&fam, 1));
                let (m, br, p) = (inst_at(motive, 1), inst_at(branch, 2), inst(scrut));
                let (p0, p1) = (Term::proj0(p.clone()), Term::proj1(p.clone()));
                let e = renv.extended(p0.clone(), r0.clone()).extended(p1.clone(), r1.clone());
                let rb = self.realize(&e, &ctx.extended(dom).extended(fam), branch)?;
                let eta = eta_path(&sig, &p);
                let pp = Term::pair(p0.clone(), p1.clone(), sig.clone());
                let path = TelescopePath::single(sig.clone(), pp.clone(), p.clone(), eta);
                let ub = instantiate(&br, &[p0, p1]);
                let moved = self.ftrans(&m, &path, &ub, &rb)?;
                let vpath = rsig_v_path(&sig, &m, &br, &p);
                let target = Term::rsig(m.clone(), br, p.clone());
                self.reindex(
                    &moved,
                    &instantiate(&m, &[p]),
                    &jterms::seq_transport(&m, &path, &ub),
                    &target,
                    &vpath,
                )
            }
            Term::J {
                motive,
                base,
                lhs,
                rhs,
                path,
            } => {
                let aty = inst(&synth(&self.th, ctx, lhs)?);
                let (m, phi, a, b, f) = (inst_at(motive, 3), inst_at(base, 1), inst(lhs), inst(rhs), inst(path));
                let ra = self.realize(renv, ctx, lhs)?;
                let actx = ctx.extended(synth(&self.th, ctx, lhs)?);
                let rphi = self.realize(&renv.extended(a.clone(), ra), &actx, base)?;
                let phia = instantiate(&phi, std::slice::from_ref(&a));
                let tp = j_expand_path(&aty, &a, &b, &f);
                let moved = self.ftrans(&m, &tp, &phia, &rphi)?;
                let mpath = j_expand_witness(&aty, &m, &phi, &a, &b, &f);
                let target = Term::j(m.clone(), phi, a.clone(), b.clone(), f.clone());
                self.reindex(
                    &moved,
                    &instantiate(&m, &[a, b, f]),
                    &jterms::seq_transport(&m, &tp, &phia),
                    &target,
                    &mpath,
                )
            }
            Term::BaseEdge(_) | Term::Refl(_) => Ok(Realizer::Star),
            Term::Pi(..) | Term::Sigma(..) | Term::Id(..) | Term::NatTy | Term::BaseTy(_) => {
                Err(TypeError::NotATerm(t.clone()).into())
            }
        }
    }

    // ---- transport of realizers ----

    /// Moves a realizer of `u : T` to one of `u2 : T` along `m : Id(T, u, u2)`.
    pub fn reindex(&self, r: &Realizer, ty: &Term, u: &Term, u2: &Term, m: &Term) -> RResult<Realizer> {
        match ty {
            Term::BaseTy(_) => {
                let tau = r.base_path()?;
                let (ub, ub2) = (self.closure_of(u)?, self.closure_of(u2)?);
                let wm = self.eval(m)?;
                let cm = model::closure_term(&self.th, &wm)?;
                let inv = jterms::path_inverse_raw(&g(), u, u2, m);
                let first = jterms::path_compose_raw(&g(), u2, u, &ub, &inv, tau);
                Ok(Realizer::Base(jterms::path_compose_raw(&g(), u2, &ub, &ub2, &first, &cm)))
            }
            Term::NatTy => {
                let (k, p) = r.as_nat()?;
                let nk = Term::numeral(k);
                let inv = jterms::path_inverse_raw(&Term::NatTy, u, u2, m);
                Ok(Realizer::Nat(k, jterms::path_compose_raw(&Term::NatTy, u2, u, &nk, &inv, p)))
            }
            Term::Id(..) => Ok(Realizer::Star),
            Term::Pi(_, b) => {
                let phi = r.as_fun()?.clone();
                let me = self.clone();
                let b = (**b).clone();
                let (u, u2, m) = (u.clone(), u2.clone(), m.clone());
                Ok(Realizer::Fun(RFun::new(move |w, rw| {
                    let bw = instantiate(&b, std::slice::from_ref(w));
                    let h = happly(&b, w, &u, &u2, &m);
                    let s = phi.apply(w, rw)?;
                    me.reindex(&s, &bw, &Term::app(u.clone(), w.clone()), &Term::app(u2.clone(), w.clone()), &h)
                })))
            }
            Term::Sigma(a, b) => {
                let (r0, r1) = r.as_pair()?;
                let (a, b) = (&**a, &**b);
                let (p0, p0b) = (Term::proj0(u.clone()), Term::proj0(u2.clone()));
                let (q1, q1b) = (Term::proj1(u.clone()), Term::proj1(u2.clone()));
                let m0 = proj0_ap(a, u, u2, m);
                let n0 = self.reindex(r0, a, &p0, &p0b, &m0)?;
                let path = TelescopePath::single(a.clone(), p0.clone(), p0b.clone(), m0);
                let moved = self.ftrans(b, &path, &q1, r1)?;
                let m1 = proj1_ap(a, b, u, u2, m);
                let n1 = self.reindex(
                    &moved,
                    &instantiate(b, &[p0b]),
                    &jterms::seq_transport(b, &path, &q1),
                    &q1b,
                    &m1,
                )?;
                Ok(Realizer::pair(n0, n1))
            }
            other => Err(TypeError::NotAType(other.clone()).into()),
        }
    }

    /// Moves a realizer of `u : C(c)` to one of `tr(u) : C(d)`, the sequential
    /// transport along `path`, for a family `C` over its telescope.
    pub fn ftrans(&self, family: &Term, path: &TelescopePath, u: &Term, r: &Realizer) -> RResult<Realizer> {
        let n = path.len();
        if !family.mentions_below(n) {
            let ty = instantiate(family, &path.source);
            let d = jterms::dagger(&ty, u, path);
            let moved = jterms::seq_transport(family, path, u);
            return self.reindex(r, &ty, u, &moved, &d);
        }
        match family {
            Term::Id(..) => Ok(Realizer::Star),
            Term::Pi(_, b) if matches!(**b, Term::Id(..)) => Ok(Realizer::Fun(RFun::new(|_, _| Ok(Realizer::Star)))),
            other => Err(RealizeError::Unsupported(crate::parser::print_term_in(other, n))),
        }
    }

    // ---- checking ----

    /// Decides the realizability clause for closed `t : ty`, with a reason on
    /// failure.
    pub fn check(&self, r: &Realizer, t: &Term, ty: &Term) -> Result<(), String> {
        let err = |e: RealizeError| e.to_string();
        let th = &*self.th;
        let empty = Context::new();
        match ty {
            Term::BaseTy(_) => {
                let tau = r.base_path().map_err(err)?;
                let tb = self.closure_of(t).map_err(err)?;
                kernel::check_type(th, &empty, tau, &Term::id(g(), t.clone(), tb)).map_err(|e| e.to_string())?;
                let w = self.eval(tau).map_err(|e| e.to_string())?;
                match w.as_word() {
                    Ok(w) if w.is_identity() => Ok(()),
                    _ => Err(format!("base realizer is not dense: evaluates to {w}")),
                }
            }
            Term::NatTy => {
                let (k, p) = r.as_nat().map_err(err)?;
                kernel::check_type(th, &empty, p, &Term::id(Term::NatTy, t.clone(), Term::numeral(k)))
                    .map_err(|e| e.to_string())?;
                match self.eval(t).map_err(|e| e.to_string())?.as_num() {
                    Ok(v) if v == k => Ok(()),
                    _ => Err(format!("number realizer {k} disagrees with evaluation")),
                }
            }
            Term::Id(a, l, rr) => {
                if !matches!(r, Realizer::Star) {
                    return Err("identity realizer is not the unit marker".into());
                }
                let rl = self.realize(&REnv::new(), &empty, l).map_err(err)?;
                let rr2 = self.realize(&REnv::new(), &empty, rr).map_err(err)?;
                let moved = self.reindex(&rl, a, l, rr, t).map_err(err)?;
                if self.realizer_eq(a, rr, &moved, &rr2).map_err(err)? {
                    Ok(())
                } else {
                    Err("identity clause fails: reindexed left realizer differs from right".into())
                }
            }
            Term::Sigma(a, b) => {
                let (r0, r1) = r.as_pair().map_err(err)?;
                let p0 = Term::proj0(t.clone());
                self.check(r0, &p0, a)?;
                self.check(r1, &Term::proj1(t.clone()), &instantiate(b, &[p0]))
            }
            Term::Pi(a, b) => {
                let phi = r.as_fun().map_err(err)?;
                for (w, rw) in self.samples(a).map_err(err)? {
                    let s = phi.apply(&w, &rw).map_err(err)?;
                    self.check(&s, &Term::app(t.clone(), w.clone()), &instantiate(b, &[w]))?;
                }
                for (w, w2, m) in self.arrow_samples(a) {
                    if !self.pi_coherent(phi, t, a, b, &w, &w2, &m).map_err(err)? {
                        return Err(format!(
                            "function realizer is not coherent along {}",
                            crate::parser::print_term(&m)
                        ));
                    }
                }
                Ok(())
            }
            other => Err(format!("not a type: {}", crate::parser::print_term(other))),
        }
    }

    /// Coherence of a function realizer along `m : Id(A, w, w2)`.
    #[allow(clippy::too_many_arguments)]
    fn pi_coherent(&self, phi: &RFun, t: &Term, a: &Term, b: &Term, w: &Term, w2: &Term, m: &Term) -> RResult<bool> {
        let rw = self.realize(&REnv::new(), &Context::new(), w)?;
        let rw2 = self.reindex(&rw, a, w, w2, m)?;
        let lhs = phi.apply(w2, &rw2)?;
        let path = TelescopePath::single(a.clone(), w.clone(), w2.clone(), m.clone());
        let tw = Term::app(t.clone(), w.clone());
        let moved = self.ftrans(b, &path, &tw, &phi.apply(w, &rw)?)?;
        let open = Term::app(shift(t, 1, 0), Term::Var(0));
        let act = jterms::action_on_path(b, &open, &path);
        let bw2 = instantiate(b, std::slice::from_ref(w2));
        let tw2 = Term::app(t.clone(), w2.clone());
        let rhs = self.reindex(&moved, &bw2, &jterms::seq_transport(b, &path, &tw), &tw2, &act)?;
        self.realizer_eq(&bw2, &tw2, &lhs, &rhs)
    }

    /// Equality of two realizers of the same closed `t : ty`.
    pub fn realizer_eq(&self, ty: &Term, t: &Term, r1: &Realizer, r2: &Realizer) -> RResult<bool> {
        match ty {
            Term::BaseTy(_) => {
                let tb = self.closure_of(t)?;
                let ity = Term::id(g(), t.clone(), tb);
                Ok(kernel::convertible(&self.th, &Context::new(), &ity, r1.base_path()?, r2.base_path()?)?)
            }
            Term::NatTy => Ok(r1.as_nat()?.0 == r2.as_nat()?.0),
            Term::Id(..) => Ok(true),
            Term::Sigma(a, b) => {
                let (x1, y1) = r1.as_pair()?;
                let (x2, y2) = r2.as_pair()?;
                let p0 = Term::proj0(t.clone());
                Ok(self.realizer_eq(a, &p0, x1, x2)?
                    && self.realizer_eq(&instantiate(b, &[p0]), &Term::proj1(t.clone()), y1, y2)?)
            }
            Term::Pi(a, b) => {
                let (f1, f2) = (r1.as_fun()?, r2.as_fun()?);
                for (w, rw) in self.samples(a)? {
                    let bw = instantiate(b, std::slice::from_ref(&w));
                    let (s1, s2) = (f1.apply(&w, &rw)?, f2.apply(&w, &rw)?);
                    if !self.realizer_eq(&bw, &Term::app(t.clone(), w), &s1, &s2)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            other => Err(TypeError::NotAType(other.clone()).into()),
        }
    }

    /// Sample arguments with their realizers for a closed domain type.
    pub fn samples(&self, a: &Term) -> RResult<Vec<(Term, Realizer)>> {
        let empty = Context::new();
        let terms: Vec<Term> = match a {
            Term::BaseTy(_) => self.th.vertices.iter().take(4).map(|v| Term::BaseVertex(v.clone())).collect(),
            Term::NatTy => (0..3).map(Term::numeral).collect(),
            Term::Id(_, l, _) => vec![Term::refl((**l).clone())],
            _ => return Err(RealizeError::Unsupported(crate::parser::print_term(a))),
        };
        let mut out = Vec::new();
        for w in terms {
            if let Term::Id(..) = a {
                if kernel::check_type(&self.th, &empty, &w, a).is_err() {
                    continue;
                }
            }
            let r = self.realize(&REnv::new(), &empty, &w)?;
            out.push((w, r));
        }
        Ok(out)
    }

    /// Sample arrows `(w, w2, m : Id(A, w, w2))` of a closed domain type.
    pub fn arrow_samples(&self, a: &Term) -> Vec<(Term, Term, Term)> {
        match a {
            Term::BaseTy(_) => self
                .th
                .edges
                .iter()
                .take(4)
                .map(|(e, (s, t))| (Term::BaseVertex(s.clone()), Term::BaseVertex(t.clone()), Term::BaseEdge(e.clone())))
                .collect(),
            Term::NatTy => vec![(Term::numeral(1), Term::numeral(1), Term::refl(Term::numeral(1)))],
            _ => Vec::new(),
        }
    }
}

/// `S n ~ S k` from `p : Id(Nat, n, k)`.
fn succ_path(n: &Term, k: &Term, p: &Term) -> Term {
    let motive = Term::id(Term::NatTy, Term::succ(Term::Var(2)), Term::succ(Term::Var(1)));
    let base = Term::refl(Term::succ(Term::Var(0)));
    Term::j(motive, base, n.clone(), k.clone(), p.clone())
}

/// `pair(p0 p, p1 p) ~ p` for closed `p : sig`.
fn eta_path(sig: &Term, p: &Term) -> Term {
    let s1 = shift(sig, 1, 0);
    let w = Term::Var(0);
    let motive = Term::id(s1.clone(), Term::pair(Term::proj0(w.clone()), Term::proj1(w.clone()), s1), w);
    let s2 = shift(sig, 2, 0);
    let branch = Term::refl(Term::pair(Term::Var(1), Term::Var(0), s2));
    Term::rsig(motive, branch, p.clone())
}

/// `tr(br[p0 p, p1 p]) ~ rsig(m, br, p)` by Sigma-elimination.
fn rsig_v_path(sig: &Term, m: &Term, br: &Term, p: &Term) -> Term {
    // Motive over w.
    let s1 = shift(sig, 1, 0);
    let w = Term::Var(0);
    let (w0, w1) = (Term::proj0(w.clone()), Term::proj1(w.clone()));
    let pw = Term::pair(w0.clone(), w1.clone(), s1.clone());
    let m1 = shift(m, 1, 1);
    let moved = jterms::transport(&m1, &pw, &w, &eta_path(&s1, &w), &instantiate(&shift(br, 1, 2), &[w0, w1]));
    let motive = Term::id(m.clone(), moved, Term::rsig(m1, shift(br, 1, 2), w));
    // Branch over x, y.
    let branch = Term::refl(br.clone());
    Term::rsig(motive, branch, p.clone())
}

/// The three-leg path `(a, a, refl a) ~ (a, b, f)` in the telescope of a
/// J-motive over a closed `A`.
fn j_expand_path(aty: &Term, a: &Term, b: &Term, f: &Term) -> TelescopePath {
    let tel = j_telescope(aty);
    let leg3 = instantiate(&j_leg3_open(aty), &[a.clone(), b.clone(), f.clone()]);
    TelescopePath::new(
        tel,
        vec![a.clone(), a.clone(), Term::refl(a.clone())],
        vec![a.clone(), b.clone(), f.clone()],
        vec![Term::refl(a.clone()), f.clone(), leg3],
    )
}

fn j_telescope(aty: &Term) -> Vec<Term> {
    vec![aty.clone(), aty.clone(), Term::id(aty.clone(), Term::Var(1), Term::Var(0))]
}

/// The generic path of [`j_expand_path`], open in `x, y, z`.
fn j_generic_path(aty: &Term, leg3: Term) -> TelescopePath {
    let (x, y, z) = (Term::Var(2), Term::Var(1), Term::Var(0));
    TelescopePath::new(
        j_telescope(aty),
        vec![x.clone(), x.clone(), Term::refl(x.clone())],
        vec![x.clone(), y, z.clone()],
        vec![Term::refl(x), z, leg3],
    )
}

/// `J(r(r x), x, y, z)`, open in `x, y, z`.
fn j_leg3_open(aty: &Term) -> Term {
    let motive = j_generic_path(aty, Term::Zero).leg_types[2].clone();
    Term::j(motive, Term::refl(Term::refl(Term::Var(0))), Term::Var(2), Term::Var(1), Term::Var(0))
}

/// `tr(phi a) ~ J(m, phi, a, b, f)` along the expand path.
fn j_expand_witness(aty: &Term, m: &Term, phi: &Term, a: &Term, b: &Term, f: &Term) -> Term {
    let gp = j_generic_path(aty, j_leg3_open(aty));
    let phix = instantiate(phi, &[Term::Var(2)]);
    let lhs = jterms::seq_transport(m, &gp, &phix);
    let rhs = Term::j(m.clone(), phi.clone(), Term::Var(2), Term::Var(1), Term::Var(0));
    let motive = Term::id(m.clone(), lhs, rhs);
    Term::j(motive, Term::refl(phi.clone()), a.clone(), b.clone(), f.clone())
}

/// `app(u, w) ~ app(u2, w)` from `m : Id(Pi(A, B), u, u2)`.
fn happly(b: &Term, w: &Term, u: &Term, u2: &Term, m: &Term) -> Term {
    let bw = instantiate(b, std::slice::from_ref(w));
    let motive = Term::id(
        bw,
        Term::app(Term::Var(2), w.clone()),
        Term::app(Term::Var(1), w.clone()),
    );
    let base = Term::refl(Term::app(Term::Var(0), w.clone()));
    Term::j(motive, base, u.clone(), u2.clone(), m.clone())
}

/// `p0 u ~ p0 u2` from `m : Id(sig, u, u2)`.
fn proj0_ap(a: &Term, u: &Term, u2: &Term, m: &Term) -> Term {
    let motive = Term::id(a.clone(), Term::proj0(Term::Var(2)), Term::proj0(Term::Var(1)));
    let base = Term::refl(Term::proj0(Term::Var(0)));
    Term::j(motive, base, u.clone(), u2.clone(), m.clone())
}

/// `tr(p1 u) ~ p1 u2` over the first-component path, from `m : Id(sig, u, u2)`.
fn proj1_ap(a: &Term, b: &Term, u: &Term, u2: &Term, m: &Term) -> Term {
    // Motive over x, y, z.
    let (x, y, z) = (Term::Var(2), Term::Var(1), Term::Var(0));
    let m0 = proj0_ap(a, &x, &y, &z);
    let (x0, y0) = (Term::proj0(x.clone()), Term::proj0(y.clone()));
    let b3 = shift(b, 3, 1);
    let moved = jterms::transport(&b3, &x0, &y0, &m0, &Term::proj1(x));
    let motive = Term::id(instantiate(b, &[y0]), moved, Term::proj1(y));
    let base = Term::refl(Term::proj1(Term::Var(0)));
    Term::j(motive, base, u.clone(), u2.clone(), m.clone())
}

// ---- free-function entry points ----

pub fn realize(th: &Theory, renv: &REnv, ctx: &Context, t: &Term, ty: &Term) -> RResult<Realizer> {
    let _ = ty;
    Rz::new(th).realize(renv, ctx, t)
}

pub fn realize_closed(th: &Theory, t: &Term) -> RResult<Realizer> {
    Rz::new(th).realize(&REnv::new(), &Context::new(), t)
}

pub fn reindex(th: &Theory, r: &Realizer, ty: &Term, u: &Term, u2: &Term, m: &Term) -> RResult<Realizer> {
    Rz::new(th).reindex(r, ty, u, u2, m)
}

/// The realizability clause for a closed `t : ty`.
pub fn check_realizes(th: &Theory, renv: &REnv, r: &Realizer, t: &Term, ty: &Term) -> bool {
    let w = renv.witnesses();
    Rz::new(th).check(r, &instantiate(t, &w), &instantiate(ty, &w)).is_ok()
}
