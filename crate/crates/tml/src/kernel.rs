//! Bidirectional type checking, full normalization and layered conversion.
//!
//! Types are always built from the formers `Pi`, `Sigma`, `Id`, `Nat` and
//! `G`; there is no universe, so no computation ever happens at the head of a
//! type and the head of an inferred type is syntactic.
//!
//! Conversion is decided in layers. After normalizing both sides:
//!
//! 1. alpha-equal normal forms are convertible;
//! 2. closed paths in `Id(G, a, b)` are compared by their words in the free
//!    groupoid;
//! 3. all paths in `Id(Nat, m, n)` are identified;
//! 4. all paths between paths are identified;
//! 5. anything else is compared structurally, recursing through the layers
//!    at the types of the immediate subterms.

use std::cell::{Cell, RefCell};
use std::sync::Arc;

use thiserror::Error;

use crate::graph::Theory;
use crate::model;
use crate::parser::print_term_in;
use crate::syntax::{instantiate, shift, subst_block, Context, Name, NodeMemo, Rt, Scope, Term, BASE_TYPE};

pub const DEFAULT_FUEL: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TypeError {
    #[error("unbound variable #{index} in a context of length {len}")]
    Unbound { index: usize, len: usize },
    #[error("type mismatch: expected {}, found {}", show(expected), show(actual))]
    Mismatch { expected: Term, actual: Term },
    #[error("{} has type {}, which is not a function type", show(term), show(ty))]
    NotAFunction { term: Term, ty: Term },
    #[error("{} has type {}, which is not a Sigma type", show(term), show(ty))]
    NotAPair { term: Term, ty: Term },
    #[error("{} has type {}, which is not an identity type", show(term), show(ty))]
    NotAPath { term: Term, ty: Term },
    #[error("ill-formed motive of {eliminator}: {reason}")]
    MotiveIllFormed {
        eliminator: &'static str,
        reason: Box<TypeError>,
    },
    #[error("symbol `{0}` is not declared by the theory")]
    TheoryUnknownSymbol(Name),
    #[error("{} is a type, not a term", show(.0))]
    NotATerm(Term),
    #[error("{} is not a type", show(.0))]
    NotAType(Term),
}

fn show(t: &Term) -> String {
    print_term_in(t, 0)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KernelError {
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error("normalization fuel exhausted after {limit} steps")]
    FuelExhausted { limit: u64 },
}

pub type KResult<T> = Result<T, KernelError>;

fn ty_err<T>(e: TypeError) -> KResult<T> {
    Err(KernelError::Type(e))
}

/// A checker bound to one theory and one normalization budget.
pub struct Kernel<'t> {
    theory: &'t Theory,
    fuel: u64,
    used: Cell<u64>,
    depth: Cell<u32>,
    memo: RefCell<NodeMemo<Known>>,
}

/// What is already known about a node: types and well-formedness are
/// recorded for closed nodes only, normal forms for all.
#[derive(Default)]
struct Known {
    closed: Option<bool>,
    ty: Option<Term>,
    wf: bool,
    nf: Option<Option<Term>>,
}

fn is_leaf(t: &Term) -> bool {
    matches!(
        t,
        Term::Var(_) | Term::NatTy | Term::Zero | Term::BaseTy(_) | Term::BaseVertex(_) | Term::BaseEdge(_)
    )
}

impl<'t> Kernel<'t> {
    pub fn new(theory: &'t Theory) -> Self {
        Kernel::with_fuel(theory, DEFAULT_FUEL)
    }

    /// `fuel` bounds the contractions performed by each top-level call.
    pub fn with_fuel(theory: &'t Theory, fuel: u64) -> Self {
        Kernel {
            theory,
            fuel,
            used: Cell::new(0),
            depth: Cell::new(0),
            memo: RefCell::default(),
        }
    }

    pub fn theory(&self) -> &'t Theory {
        self.theory
    }

    pub fn fuel(&self) -> u64 {
        self.fuel
    }

    fn tick(&self) -> KResult<()> {
        let n = self.used.get() + 1;
        if n > self.fuel {
            return Err(KernelError::FuelExhausted { limit: self.fuel });
        }
        self.used.set(n);
        Ok(())
    }

    /// Runs `f` with a full budget unless already inside a budgeted call.
    fn fresh_budget<T>(&self, f: impl FnOnce() -> KResult<T>) -> KResult<T> {
        let outer = self.depth.get();
        if outer == 0 {
            self.used.set(0);
        }
        self.depth.set(outer + 1);
        let out = f();
        self.depth.set(outer);
        out
    }

    /// Checks that `ty` is a well-formed type in `ctx`.
    pub fn check_type_wf(&self, ctx: &Context, ty: &Term) -> KResult<()> {
        self.fresh_budget(|| self.wf(ctx, ty))
    }

    /// Infers the type of a term; the result's head is always a type former.
    pub fn infer(&self, ctx: &Context, t: &Term) -> KResult<Term> {
        self.fresh_budget(|| self.inf(ctx, t))
    }

    pub fn check(&self, ctx: &Context, t: &Term, ty: &Term) -> KResult<()> {
        self.fresh_budget(|| self.chk(ctx, t, ty))
    }


    fn closed(&self, t: &Term) -> bool {
        if is_leaf(t) {
            return false;
        }
        let mut m = self.memo.borrow_mut();
        let e = m.entry(t);
        *e.closed.get_or_insert_with(|| t.is_closed())
    }

    fn wf(&self, ctx: &Context, ty: &Term) -> KResult<()> {
        let closed = self.closed(ty);
        if closed && self.memo.borrow_mut().entry(ty).wf {
            return Ok(());
        }
        self.wf_uncached(ctx, ty)?;
        if closed {
            self.memo.borrow_mut().entry(ty).wf = true;
        }
        Ok(())
    }

    fn wf_uncached(&self, ctx: &Context, ty: &Term) -> KResult<()> {
        match ty {
            Term::BaseTy(n) if n.as_str() == BASE_TYPE => Ok(()),
            Term::BaseTy(n) => ty_err(TypeError::TheoryUnknownSymbol(n.clone())),
            Term::NatTy => Ok(()),
            Term::Pi(a, b) | Term::Sigma(a, b) => {
                self.wf(ctx, a)?;
                self.wf(&ctx.extended((**a).clone()), b)
            }
            Term::Id(a, l, r) => {
                self.wf(ctx, a)?;
                self.chk(ctx, l, a)?;
                self.chk(ctx, r, a)
            }
            other => ty_err(TypeError::NotAType(other.clone())),
        }
    }

    // ---- inference and checking ----

    fn inf(&self, ctx: &Context, t: &Term) -> KResult<Term> {
        let closed = self.closed(t);
        if closed {
            if let Some(ty) = self.memo.borrow_mut().entry(t).ty.clone() {
                return Ok(ty);
            }
        }
        let ty = self.inf_uncached(ctx, t)?;
        if closed {
            self.memo.borrow_mut().entry(t).ty = Some(ty.clone());
        }
        Ok(ty)
    }

    fn inf_uncached(&self, ctx: &Context, t: &Term) -> KResult<Term> {
        match t {
            Term::Var(i) => ctx
                .lookup(*i)
                .ok_or(KernelError::Type(TypeError::Unbound {
                    index: *i,
                    len: ctx.len(),
                })),
            Term::BaseVertex(v) => {
                if self.theory.has_vertex(v) {
                    Ok(Term::base_ty())
                } else {
                    ty_err(TypeError::TheoryUnknownSymbol(v.clone()))
                }
            }
            Term::BaseEdge(e) => match self.theory.endpoints(e) {
                Some((s, d)) => Ok(Term::id(
                    Term::base_ty(),
                    Term::BaseVertex(s.clone()),
                    Term::BaseVertex(d.clone()),
                )),
                None => ty_err(TypeError::TheoryUnknownSymbol(e.clone())),
            },
            Term::Lam(a, body) => {
                self.wf(ctx, a)?;
                let b = self.inf(&ctx.extended((**a).clone()), body)?;
                Ok(Term::Pi(a.clone(), b.into()))
            }
            Term::App(f, a) => {
                let fty = self.inf(ctx, f)?;
                match &fty {
                    Term::Pi(dom, cod) => {
                        self.chk(ctx, a, dom)?;
                        Ok(instantiate(cod, &[(**a).clone()]))
                    }
                    _ => ty_err(TypeError::NotAFunction {
                        term: (**f).clone(),
                        ty: fty,
                    }),
                }
            }
            Term::Pair(a, b, ann) => match &**ann {
                Term::Sigma(dom, fam) => {
                    self.wf(ctx, ann)?;
                    self.chk(ctx, a, dom)?;
                    self.chk(ctx, b, &instantiate(fam, &[(**a).clone()]))?;
                    Ok((**ann).clone())
                }
                _ => ty_err(TypeError::NotAPair {
                    term: t.clone(),
                    ty: (**ann).clone(),
                }),
            },
            Term::Proj0(p) | Term::Proj1(p) => {
                let pty = self.inf(ctx, p)?;
                match &pty {
                    Term::Sigma(dom, fam) => Ok(if matches!(t, Term::Proj0(_)) {
                        (**dom).clone()
                    } else {
                        instantiate(fam, &[Term::Proj0(p.clone())])
                    }),
                    _ => ty_err(TypeError::NotAPair {
                        term: (**p).clone(),
                        ty: pty,
                    }),
                }
            }
            Term::Refl(a) => {
                let aty = self.inf(ctx, a)?;
                Ok(Term::Id(aty.into(), a.clone(), a.clone()))
            }
            Term::J {
                motive,
                base,
                lhs,
                rhs,
                path,
            } => {
                let aty = self.inf(ctx, lhs)?;
                self.chk(ctx, rhs, &aty)?;
                let pty = self.inf(ctx, path)?;
                if !matches!(pty, Term::Id(..)) {
                    return ty_err(TypeError::NotAPath {
                        term: (**path).clone(),
                        ty: pty,
                    });
                }
                let want = Term::id(aty.clone(), (**lhs).clone(), (**rhs).clone());
                if !self.conv_types(ctx, &want, &pty)? {
                    return ty_err(TypeError::Mismatch {
                        expected: want,
                        actual: pty,
                    });
                }
                let mctx = j_motive_context(ctx, &aty);
                self.wf(&mctx, motive)
                    .map_err(|e| motive_err("J", e))?;
                let refl_inst = j_refl_instance(motive);
                self.chk(&ctx.extended(aty), base, &refl_inst)?;
                Ok(instantiate(
                    motive,
                    &[(**lhs).clone(), (**rhs).clone(), (**path).clone()],
                ))
            }
            Term::Zero => Ok(Term::NatTy),
            Term::Succ(n) => {
                self.chk(ctx, n, &Term::NatTy)?;
                Ok(Term::NatTy)
            }
            Term::Rec {
                motive,
                zcase,
                scase,
                scrut,
            } => {
                self.chk(ctx, scrut, &Term::NatTy)?;
                let nctx = ctx.extended(Term::NatTy);
                self.wf(&nctx, motive)
                    .map_err(|e| motive_err("rec", e))?;
                self.chk(ctx, zcase, &instantiate(motive, &[Term::Zero]))?;
                let sctx = nctx.extended((**motive).clone());
                let step = subst_block(motive, 1, 2, &|_| Term::succ(Term::Var(1)));
                self.chk(&sctx, scase, &step)?;
                Ok(instantiate(motive, &[(**scrut).clone()]))
            }
            Term::RSig {
                motive,
                branch,
                scrut,
            } => {
                let sty = self.inf(ctx, scrut)?;
                let (dom, fam) = match &sty {
                    Term::Sigma(d, f) => (d.clone(), f.clone()),
                    _ => {
                        return ty_err(TypeError::NotAPair {
                            term: (**scrut).clone(),
                            ty: sty,
                        })
                    }
                };
                self.wf(&ctx.extended(sty.clone()), motive)
                    .map_err(|e| motive_err("Rsig", e))?;
                let bctx = ctx.extended((*dom).clone()).extended((*fam).clone());
                let want = rsig_branch_type(motive, &sty);
                self.chk(&bctx, branch, &want)?;
                Ok(instantiate(motive, &[(**scrut).clone()]))
            }
            Term::Pi(..) | Term::Sigma(..) | Term::Id(..) | Term::NatTy | Term::BaseTy(_) => {
                ty_err(TypeError::NotATerm(t.clone()))
            }
        }
    }

    fn chk(&self, ctx: &Context, t: &Term, ty: &Term) -> KResult<()> {
        let actual = self.inf(ctx, t)?;
        if self.conv_types(ctx, ty, &actual)? {
            Ok(())
        } else {
            ty_err(TypeError::Mismatch {
                expected: ty.clone(),
                actual,
            })
        }
    }

    // ---- normalization ----

    pub fn normalize(&self, t: &Term) -> KResult<Term> {
        self.fresh_budget(|| self.nf(t))
    }

    fn nf(&self, t: &Term) -> KResult<Term> {
        Ok(self.nf_opt(t)?.unwrap_or_else(|| t.clone()))
    }

    /// The normal form of `t`, or `None` when `t` is already normal.
    fn nf_opt(&self, t: &Term) -> KResult<Option<Term>> {
        if is_leaf(t) {
            return Ok(None);
        }
        if let Some(known) = self.memo.borrow_mut().entry(t).nf.clone() {
            return Ok(known);
        }
        let out = self.nf_step(t)?;
        self.memo.borrow_mut().entry(t).nf = Some(out.clone());
        Ok(out)
    }

    /// Normalized children, or `None` when all are already normal.
    fn nf_children<const N: usize>(&self, cs: [&Rt; N]) -> KResult<Option<[Rt; N]>> {
        let mut changed = false;
        let mut out = cs.map(|c| c.clone());
        for (slot, c) in out.iter_mut().zip(cs) {
            if let Some(n) = self.nf_opt(c)? {
                *slot = Arc::new(n);
                changed = true;
            }
        }
        Ok(changed.then_some(out))
    }

    fn nf_step(&self, t: &Term) -> KResult<Option<Term>> {
        let rebuilt = match t {
            Term::Var(_)
            | Term::NatTy
            | Term::Zero
            | Term::BaseTy(_)
            | Term::BaseVertex(_)
            | Term::BaseEdge(_) => return Ok(None),
            Term::Pi(a, b) => return Ok(self.nf_children([a, b])?.map(|[a, b]| Term::Pi(a, b))),
            Term::Sigma(a, b) => return Ok(self.nf_children([a, b])?.map(|[a, b]| Term::Sigma(a, b))),
            Term::Lam(a, b) => return Ok(self.nf_children([a, b])?.map(|[a, b]| Term::Lam(a, b))),
            Term::Id(a, l, r) => return Ok(self.nf_children([a, l, r])?.map(|[a, l, r]| Term::Id(a, l, r))),
            Term::Pair(a, b, s) => return Ok(self.nf_children([a, b, s])?.map(|[a, b, s]| Term::Pair(a, b, s))),
            Term::Refl(a) => return Ok(self.nf_children([a])?.map(|[a]| Term::Refl(a))),
            Term::Succ(a) => return Ok(self.nf_children([a])?.map(|[a]| Term::Succ(a))),
            Term::App(f, a) => self.nf_children([f, a])?.map(|[f, a]| Term::App(f, a)),
            Term::Proj0(p) => self.nf_children([p])?.map(|[p]| Term::Proj0(p)),
            Term::Proj1(p) => self.nf_children([p])?.map(|[p]| Term::Proj1(p)),
            Term::J {
                motive,
                base,
                lhs,
                rhs,
                path,
            } => self
                .nf_children([motive, base, lhs, rhs, path])?
                .map(|[motive, base, lhs, rhs, path]| Term::J {
                    motive,
                    base,
                    lhs,
                    rhs,
                    path,
                }),
            Term::Rec {
                motive,
                zcase,
                scase,
                scrut,
            } => self
                .nf_children([motive, zcase, scase, scrut])?
                .map(|[motive, zcase, scase, scrut]| Term::Rec {
                    motive,
                    zcase,
                    scase,
                    scrut,
                }),
            Term::RSig {
                motive,
                branch,
                scrut,
            } => self
                .nf_children([motive, branch, scrut])?
                .map(|[motive, branch, scrut]| Term::RSig {
                    motive,
                    branch,
                    scrut,
                }),
        };
        match contract(rebuilt.as_ref().unwrap_or(t)) {
            Some(next) => {
                self.tick()?;
                Ok(Some(self.nf(&next)?))
            }
            None => Ok(rebuilt),
        }
    }

    // ---- conversion ----

    /// Definitional equality of `t` and `u` at type `ty`.
    pub fn convertible(&self, ctx: &Context, ty: &Term, t: &Term, u: &Term) -> KResult<bool> {
        self.fresh_budget(|| self.conv_term(ctx, ty, t, u))
    }

    pub fn conv_types(&self, ctx: &Context, a: &Term, b: &Term) -> KResult<bool> {
        if a == b {
            return Ok(true);
        }
        match (a, b) {
            (Term::BaseTy(x), Term::BaseTy(y)) => Ok(x == y),
            (Term::NatTy, Term::NatTy) => Ok(true),
            (Term::Pi(a1, b1), Term::Pi(a2, b2)) | (Term::Sigma(a1, b1), Term::Sigma(a2, b2))
                if std::mem::discriminant(a) == std::mem::discriminant(b) =>
            {
                Ok(self.conv_types(ctx, a1, a2)?
                    && self.conv_types(&ctx.extended((**a1).clone()), b1, b2)?)
            }
            (Term::Id(t1, l1, r1), Term::Id(t2, l2, r2)) => Ok(self.conv_types(ctx, t1, t2)?
                && self.conv_term(ctx, t1, l1, l2)?
                && self.conv_term(ctx, t1, r1, r2)?),
            _ => Ok(false),
        }
    }

    fn conv_term(&self, ctx: &Context, ty: &Term, t: &Term, u: &Term) -> KResult<bool> {
        if t == u {
            return Ok(true);
        }
        let nt = self.nf(t)?;
        let nu = self.nf(u)?;
        self.conv_nf(ctx, ty, &nt, &nu)
    }

    fn conv_nf(&self, ctx: &Context, ty: &Term, t: &Term, u: &Term) -> KResult<bool> {
        if t == u {
            return Ok(true);
        }
        match ty {
            Term::Id(carrier, _, _) => match &**carrier {
                Term::BaseTy(_) if t.is_closed() && u.is_closed() => {
                    Ok(self.same_word(t, u))
                }
                Term::NatTy | Term::Id(..) => Ok(true),
                _ => self.neutral_eq(ctx, t, u),
            },
            Term::Pi(dom, cod) => match (t, u) {
                (Term::Lam(a1, b1), Term::Lam(a2, b2)) => Ok(self.conv_types(ctx, a1, a2)?
                    && self.conv_nf(&ctx.extended((**dom).clone()), cod, b1, b2)?),
                _ => self.neutral_eq(ctx, t, u),
            },
            Term::Sigma(dom, fam) => match (t, u) {
                (Term::Pair(a1, b1, _), Term::Pair(a2, b2, _)) => Ok(self.conv_nf(ctx, dom, a1, a2)?
                    && self.conv_nf(ctx, &instantiate(fam, &[(**a1).clone()]), b1, b2)?),
                _ => self.neutral_eq(ctx, t, u),
            },
            _ => self.neutral_eq(ctx, t, u),
        }
    }

    fn same_word(&self, t: &Term, u: &Term) -> bool {
        match (model::eval_closed(self.theory, t), model::eval_closed(self.theory, u)) {
            (Ok(a), Ok(b)) => a.same_arrow(&b),
            _ => false,
        }
    }

    /// Structural comparison of normal forms with the same head, comparing
    /// immediate subterms at their own types.
    fn neutral_eq(&self, ctx: &Context, t: &Term, u: &Term) -> KResult<bool> {
        let th = self.theory;
        let syn = |x: &Term| synth(th, ctx, x).map_err(KernelError::Type);
        match (t, u) {
            (Term::Succ(a), Term::Succ(b)) => self.conv_nf(ctx, &Term::NatTy, a, b),
            (Term::Refl(a), Term::Refl(b)) => {
                let aty = syn(a)?;
                self.conv_nf(ctx, &aty, a, b)
            }
            (Term::App(f1, a1), Term::App(f2, a2)) => {
                let fty = syn(f1)?;
                let Term::Pi(dom, _) = &fty else {
                    return Ok(false);
                };
                Ok(self.neutral_eq(ctx, f1, f2)? && self.conv_nf(ctx, dom, a1, a2)?)
            }
            (Term::Proj0(p1), Term::Proj0(p2)) | (Term::Proj1(p1), Term::Proj1(p2)) => {
                self.neutral_eq(ctx, p1, p2)
            }
            (Term::Pair(_, _, s1), Term::Pair(_, _, s2)) => {
                Ok(self.conv_types(ctx, s1, s2)? && self.conv_nf(ctx, s1, t, u)?)
            }
            (
                Term::J {
                    motive: m1,
                    base: b1,
                    lhs: l1,
                    rhs: r1,
                    path: p1,
                },
                Term::J {
                    motive: m2,
                    base: b2,
                    lhs: l2,
                    rhs: r2,
                    path: p2,
                },
            ) => {
                let aty = syn(l1)?;
                let mctx = j_motive_context(ctx, &aty);
                Ok(self.conv_types(&mctx, m1, m2)?
                    && self.conv_nf(ctx, &aty, l1, l2)?
                    && self.conv_nf(ctx, &aty, r1, r2)?
                    && self.conv_nf(
                        ctx,
                        &Term::id(aty.clone(), (**l1).clone(), (**r1).clone()),
                        p1,
                        p2,
                    )?
                    && self.conv_nf(&ctx.extended(aty), &j_refl_instance(m1), b1, b2)?)
            }
            (
                Term::Rec {
                    motive: m1,
                    zcase: z1,
                    scase: s1,
                    scrut: n1,
                },
                Term::Rec {
                    motive: m2,
                    zcase: z2,
                    scase: s2,
                    scrut: n2,
                },
            ) => {
                let nctx = ctx.extended(Term::NatTy);
                Ok(self.conv_types(&nctx, m1, m2)?
                    && self.conv_nf(ctx, &Term::NatTy, n1, n2)?
                    && self.conv_nf(ctx, &instantiate(m1, &[Term::Zero]), z1, z2)?
                    && self.conv_nf(
                        &nctx.extended((**m1).clone()),
                        &subst_block(m1, 1, 2, &|_| Term::succ(Term::Var(1))),
                        s1,
                        s2,
                    )?)
            }
            (
                Term::RSig {
                    motive: m1,
                    branch: b1,
                    scrut: p1,
                },
                Term::RSig {
                    motive: m2,
                    branch: b2,
                    scrut: p2,
                },
            ) => {
                let sty = syn(p1)?;
                let Term::Sigma(dom, fam) = &sty else {
                    return Ok(false);
                };
                let bctx = ctx.extended((**dom).clone()).extended((**fam).clone());
                Ok(self.conv_types(&ctx.extended(sty.clone()), m1, m2)?
                    && self.neutral_eq(ctx, p1, p2)?
                    && self.conv_nf(&bctx, &rsig_branch_type(m1, &sty), b1, b2)?)
            }
            _ => Ok(t == u),
        }
    }
}

fn motive_err(eliminator: &'static str, e: KernelError) -> KernelError {
    match e {
        KernelError::Type(t) => KernelError::Type(TypeError::MotiveIllFormed {
            eliminator,
            reason: Box::new(t),
        }),
        other => other,
    }
}

/// `ctx, x:A, y:A, z:Id(A,x,y)`.
pub fn j_motive_context<S: Scope>(ctx: &S, a: &Term) -> S {
    ctx.extended(a.clone())
        .extended(shift(a, 1, 0))
        .extended(Term::id(shift(a, 2, 0), Term::Var(1), Term::Var(0)))
}

/// The motive of a J at `x, x, refl x`, living under the single binder `x`.
pub fn j_refl_instance(motive: &Term) -> Term {
    subst_block(motive, 3, 1, &|p| match p {
        0 | 1 => Term::Var(0),
        _ => Term::refl(Term::Var(0)),
    })
}

/// The motive of an `Rsig` at `pair(x, y)`, living under binders `x, y`.
pub fn rsig_branch_type(motive: &Term, sigma: &Term) -> Term {
    subst_block(motive, 1, 2, &|_| {
        Term::pair(Term::Var(1), Term::Var(0), shift(sigma, 2, 0))
    })
}

/// One head contraction, if the term is a redex.
pub fn contract(t: &Term) -> Option<Term> {
    match t {
        Term::App(f, a) => match &**f {
            Term::Lam(_, body) => Some(instantiate(body, &[(**a).clone()])),
            _ => None,
        },
        Term::Proj0(p) => match &**p {
            Term::Pair(a, _, _) => Some((**a).clone()),
            _ => None,
        },
        Term::Proj1(p) => match &**p {
            Term::Pair(_, b, _) => Some((**b).clone()),
            _ => None,
        },
        Term::J {
            base, lhs, path, ..
        } => match &**path {
            Term::Refl(_) => Some(instantiate(base, &[(**lhs).clone()])),
            _ => None,
        },
        Term::Rec {
            zcase,
            scase,
            scrut,
            motive,
        } => match &**scrut {
            Term::Zero => Some((**zcase).clone()),
            Term::Succ(n) => {
                let prev = Term::Rec {
                    motive: motive.clone(),
                    zcase: zcase.clone(),
                    scase: scase.clone(),
                    scrut: n.clone(),
                };
                Some(instantiate(scase, &[(**n).clone(), prev]))
            }
            _ => None,
        },
        Term::RSig { branch, scrut, .. } => match &**scrut {
            Term::Pair(a, b, _) => Some(instantiate(branch, &[(**a).clone(), (**b).clone()])),
            _ => None,
        },
        _ => None,
    }
}

/// Type synthesis without checking premises; assumes `t` is well typed.
pub fn synth<S: Scope>(th: &Theory, ctx: &S, t: &Term) -> Result<Term, TypeError> {
    match t {
        Term::Var(i) => ctx.lookup(*i).ok_or(TypeError::Unbound {
            index: *i,
            len: ctx.len(),
        }),
        Term::BaseVertex(_) => Ok(Term::base_ty()),
        Term::BaseEdge(e) => match th.endpoints(e) {
            Some((s, d)) => Ok(Term::id(
                Term::base_ty(),
                Term::BaseVertex(s.clone()),
                Term::BaseVertex(d.clone()),
            )),
            None => Err(TypeError::TheoryUnknownSymbol(e.clone())),
        },
        Term::Lam(a, body) => {
            let b = synth(th, &ctx.extended((**a).clone()), body)?;
            Ok(Term::Pi(a.clone(), b.into()))
        }
        Term::App(f, a) => match synth(th, ctx, f)? {
            Term::Pi(_, cod) => Ok(instantiate(&cod, &[(**a).clone()])),
            ty => Err(TypeError::NotAFunction {
                term: (**f).clone(),
                ty,
            }),
        },
        Term::Pair(_, _, ann) => Ok((**ann).clone()),
        Term::Proj0(p) | Term::Proj1(p) => match synth(th, ctx, p)? {
            Term::Sigma(dom, fam) => Ok(if matches!(t, Term::Proj0(_)) {
                (*dom).clone()
            } else {
                instantiate(&fam, &[Term::Proj0(p.clone())])
            }),
            ty => Err(TypeError::NotAPair {
                term: (**p).clone(),
                ty,
            }),
        },
        Term::Refl(a) => {
            let aty = synth(th, ctx, a)?;
            Ok(Term::Id(aty.into(), a.clone(), a.clone()))
        }
        Term::J {
            motive,
            lhs,
            rhs,
            path,
            ..
        } => Ok(instantiate(
            motive,
            &[(**lhs).clone(), (**rhs).clone(), (**path).clone()],
        )),
        Term::Zero | Term::Succ(_) => Ok(Term::NatTy),
        Term::Rec { motive, scrut, .. } | Term::RSig { motive, scrut, .. } => {
            Ok(instantiate(motive, &[(**scrut).clone()]))
        }
        Term::Pi(..) | Term::Sigma(..) | Term::Id(..) | Term::NatTy | Term::BaseTy(_) => {
            Err(TypeError::NotATerm(t.clone()))
        }
    }
}

// ---- free-function entry points ----

pub fn infer_type(th: &Theory, ctx: &Context, t: &Term) -> KResult<Term> {
    Kernel::new(th).infer(ctx, t)
}

pub fn check_type(th: &Theory, ctx: &Context, t: &Term, ty: &Term) -> KResult<()> {
    let k = Kernel::new(th);
    k.check_type_wf(ctx, ty)?;
    k.check(ctx, t, ty)
}

pub fn normalize(th: &Theory, t: &Term) -> KResult<Term> {
    Kernel::new(th).normalize(t)
}

pub fn convertible(th: &Theory, ctx: &Context, ty: &Term, t: &Term, u: &Term) -> KResult<bool> {
    Kernel::new(th).convertible(ctx, ty, t, u)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn th1() -> Theory {
        Theory::with(
            "T",
            &["a", "b", "c"],
            &[("f", "a", "b"), ("e", "a", "a"), ("g", "b", "c")],
        )
        .unwrap()
    }

    fn a() -> Term {
        Term::vertex("a")
    }

    #[test]
    fn edges_have_identity_types() {
        let th = th1();
        let ty = infer_type(&th, &Context::new(), &Term::edge("f")).unwrap();
        assert_eq!(ty, Term::id(Term::base_ty(), a(), Term::vertex("b")));
    }

    #[test]
    fn doppelganger_has_type_g() {
        let th = th1();
        let t = Term::j(Term::base_ty(), Term::vertex("b"), a(), a(), Term::edge("e"));
        assert_eq!(infer_type(&th, &Context::new(), &t).unwrap(), Term::base_ty());
        assert_eq!(normalize(&th, &t).unwrap(), t);
    }

    #[test]
    fn not_a_function() {
        let th = th1();
        let e = infer_type(&th, &Context::new(), &Term::app(Term::Zero, Term::Zero)).unwrap_err();
        assert!(matches!(e, KernelError::Type(TypeError::NotAFunction { .. })));
    }

    #[test]
    fn refl_checks() {
        let th = th1();
        let c = Context::new();
        let g = Term::base_ty();
        assert!(check_type(&th, &c, &Term::refl(a()), &Term::id(g.clone(), a(), a())).is_ok());
        let e = check_type(&th, &c, &Term::refl(a()), &Term::id(g, a(), Term::vertex("b"))).unwrap_err();
        assert!(matches!(e, KernelError::Type(TypeError::Mismatch { .. })));
    }

    #[test]
    fn contractions() {
        let th = th1();
        let r = Term::rec(Term::NatTy, Term::Zero, Term::succ(Term::Var(0)), Term::numeral(2));
        assert_eq!(normalize(&th, &r).unwrap(), Term::numeral(2));
        let b = Term::app(Term::lam(Term::NatTy, Term::Var(0)), Term::Zero);
        assert_eq!(normalize(&th, &b).unwrap(), Term::Zero);
        let j = Term::j(Term::base_ty(), Term::Var(0), a(), a(), Term::refl(a()));
        assert_eq!(normalize(&th, &j).unwrap(), a());
    }

    #[test]
    fn fuel_is_reported() {
        let th = th1();
        let r = Term::rec(Term::NatTy, Term::Zero, Term::succ(Term::Var(0)), Term::numeral(50));
        let k = Kernel::with_fuel(&th, 10);
        assert_eq!(k.normalize(&r), Err(KernelError::FuelExhausted { limit: 10 }));
    }

    #[test]
    fn nat_paths_are_identified() {
        let th = th1();
        let ty = Term::id(Term::NatTy, Term::Zero, Term::Zero);
        let p = Term::j(
            Term::id(Term::NatTy, Term::Zero, Term::Zero),
            Term::refl(Term::Zero),
            a(),
            a(),
            Term::edge("e"),
        );
        assert!(convertible(&th, &Context::new(), &ty, &p, &Term::refl(Term::Zero)).unwrap());
    }

    #[test]
    fn motive_errors_are_wrapped() {
        let th = th1();
        let j = Term::j(Term::Zero, a(), a(), a(), Term::refl(a()));
        let e = infer_type(&th, &Context::new(), &j).unwrap_err();
        assert!(matches!(e, KernelError::Type(TypeError::MotiveIllFormed { .. })));
    }
}
