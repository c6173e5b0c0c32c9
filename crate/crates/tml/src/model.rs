//! The groupoid model over the free groupoid.
//!
//! A closed type denotes a groupoid: `G` the free groupoid on the theory's
//! graph, `Nat` the discrete groupoid of numbers, `Id(A, a, b)` the discrete
//! groupoid of arrows `a -> b` of `A`, `Sigma` the Grothendieck construction
//! and `Pi` the groupoid of sections and natural transformations.
//!
//! A type in context denotes a functor out of the context groupoid. An arrow
//! of a context (a [`CellV`]) has one component per entry; the component for
//! `x : A` is an arrow `A(c)(src_x) -> tgt_x` in the fiber over the target.
//! The action of a term on a cell is computed by [`Sem::ap`], and the
//! transport functors of a type by [`Sem::fwd`] and its relatives.

use std::cell::RefCell;
use std::fmt;
use std::rc::{Rc, Weak};

use thiserror::Error;

use crate::graph::{self, GraphError, ReducedWord, Theory};
use crate::jterms;
use crate::kernel::{j_motive_context, synth, TypeError};
use crate::syntax::{shift, Context, Name, NodeMemo, Scope, Term};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("evaluation unsupported: {0}")]
    Unsupported(String),
    #[error("value is not a number")]
    NotANumber,
    #[error("value is neither a vertex nor a word")]
    NotAGroupoidValue,
    #[error("value has the wrong shape: expected {0}")]
    Shape(&'static str),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Type(#[from] TypeError),
}

pub type MResult<T> = Result<T, ModelError>;

type ObjFn = dyn Fn(&Value) -> MResult<Value>;
type ArrFn = dyn Fn(&Value, &Value, &Value) -> MResult<Value>;

/// A function value: a functor when `arr` is present, a natural
/// transformation (an arrow of a Pi groupoid) when it is absent.
pub struct FunVal {
    obj: Box<ObjFn>,
    arr: Option<Box<ArrFn>>,
}

impl FunVal {
    pub fn call(&self, v: &Value) -> MResult<Value> {
        (self.obj)(v)
    }

    pub fn call_arr(&self, x: &Value, y: &Value, a: &Value) -> MResult<Value> {
        match &self.arr {
            Some(f) => f(x, y, a),
            None => Err(ModelError::Shape("a functor")),
        }
    }

    pub fn is_functor(&self) -> bool {
        self.arr.is_some()
    }
}

#[derive(Clone)]
pub enum Value {
    Vertex(Name),
    Word(ReducedWord),
    Num(u64),
    Fun(Rc<FunVal>),
    Pair(Rc<Value>, Rc<Value>),
    /// The unique arrow of a discrete groupoid.
    Triv,
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Vertex(v) => write!(f, "VVertex({v})"),
            Value::Word(w) => write!(f, "VWord({w})"),
            Value::Num(n) => write!(f, "VNum({n})"),
            Value::Fun(_) => f.write_str("VFun(..)"),
            Value::Pair(a, b) => write!(f, "VPair({a:?}, {b:?})"),
            Value::Triv => f.write_str("VTriv"),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Vertex(v) => write!(f, "{v}"),
            Value::Word(w) => write!(f, "{w}"),
            Value::Num(n) => write!(f, "{n}"),
            Value::Fun(_) => f.write_str("<function>"),
            Value::Pair(a, b) => write!(f, "({a}, {b})"),
            Value::Triv => f.write_str("*"),
        }
    }
}

impl Value {
    pub fn fun(
        obj: impl Fn(&Value) -> MResult<Value> + 'static,
        arr: Option<Box<ArrFn>>,
    ) -> Value {
        Value::Fun(Rc::new(FunVal {
            obj: Box::new(obj),
            arr,
        }))
    }

    fn nat(obj: impl Fn(&Value) -> MResult<Value> + 'static) -> Value {
        Value::fun(obj, None)
    }

    fn pair(a: Value, b: Value) -> Value {
        Value::Pair(Rc::new(a), Rc::new(b))
    }

    pub fn as_word(&self) -> MResult<&ReducedWord> {
        match self {
            Value::Word(w) => Ok(w),
            _ => Err(ModelError::Shape("a word")),
        }
    }

    pub fn as_vertex(&self) -> MResult<&Name> {
        match self {
            Value::Vertex(v) => Ok(v),
            _ => Err(ModelError::Shape("a vertex")),
        }
    }

    pub fn as_num(&self) -> MResult<u64> {
        match self {
            Value::Num(n) => Ok(*n),
            _ => Err(ModelError::NotANumber),
        }
    }

    pub fn as_fun(&self) -> MResult<&FunVal> {
        match self {
            Value::Fun(f) => Ok(f),
            _ => Err(ModelError::Shape("a function")),
        }
    }

    pub fn as_pair(&self) -> MResult<(&Value, &Value)> {
        match self {
            Value::Pair(a, b) => Ok((a, b)),
            _ => Err(ModelError::Shape("a pair")),
        }
    }

    /// Structural equality of first-order values; functions are never equal.
    pub fn same_arrow(&self, other: &Value) -> bool {
        match (self, other) {
            (Value::Vertex(a), Value::Vertex(b)) => a == b,
            (Value::Word(a), Value::Word(b)) => a == b,
            (Value::Num(a), Value::Num(b)) => a == b,
            (Value::Triv, Value::Triv) => true,
            (Value::Pair(a1, b1), Value::Pair(a2, b2)) => a1.same_arrow(a2) && b1.same_arrow(b2),
            _ => false,
        }
    }
}

/// Types of a context as a persistent list, innermost first.
#[derive(Clone, Debug, Default)]
pub struct Tys(Option<Rc<(Term, Tys, usize)>>);

impl Tys {
    fn from_context(ctx: &Context) -> Tys {
        ctx.entries().iter().fold(Tys::default(), |acc, ty| acc.extended(ty.clone()))
    }

    /// The innermost entry and the scope it lives in.
    fn split(&self) -> Option<(&Term, &Tys)> {
        self.0.as_ref().map(|n| (&n.0, &n.1))
    }

    fn drop_n(&self, k: usize) -> Option<&Tys> {
        let mut cur = self;
        for _ in 0..k {
            cur = cur.split()?.1;
        }
        Some(cur)
    }
}

impl Scope for Tys {
    fn lookup(&self, index: usize) -> Option<Term> {
        let (ty, _) = self.drop_n(index)?.split()?;
        Some(shift(ty, index + 1, 0))
    }

    fn len(&self) -> usize {
        self.0.as_ref().map_or(0, |n| n.2)
    }

    fn extended(&self, ty: Term) -> Tys {
        let len = self.len() + 1;
        Tys(Some(Rc::new((ty, self.clone(), len))))
    }
}

/// Values of a context as a persistent list, innermost first.
#[derive(Clone, Debug, Default)]
pub struct Vals(Option<Rc<(Value, Vals)>>);

impl Vals {
    fn from_slice(vs: &[Value]) -> Vals {
        vs.iter().fold(Vals::default(), |acc, v| acc.push(v.clone()))
    }

    fn push(&self, v: Value) -> Vals {
        Vals(Some(Rc::new((v, self.clone()))))
    }

    fn split(&self) -> Option<(&Value, &Vals)> {
        self.0.as_ref().map(|n| (&n.0, &n.1))
    }

    fn drop_n(&self, k: usize) -> Option<&Vals> {
        let mut cur = self;
        for _ in 0..k {
            cur = cur.split()?.1;
        }
        Some(cur)
    }

    fn get(&self, k: usize) -> MResult<Value> {
        self.drop_n(k)
            .and_then(|r| r.split())
            .map(|(v, _)| v.clone())
            .ok_or_else(|| ModelError::Unsupported(format!("unbound variable #{k}")))
    }
}

/// Components of a context arrow. Below the explicit entries the arrow is
/// the identity of the recorded object, computed on demand.
#[derive(Clone, Debug)]
pub enum Paths {
    Id(Tys, Vals),
    Cons(Rc<(Value, Paths)>),
}

/// An arrow of a context groupoid.
#[derive(Clone, Debug)]
pub struct CellV {
    pub src: Vals,
    pub tgt: Vals,
    pub path: Paths,
}

impl CellV {
    fn ext(&self, s: Value, t: Value, p: Value) -> CellV {
        CellV {
            src: self.src.push(s),
            tgt: self.tgt.push(t),
            path: Paths::Cons(Rc::new((p, self.path.clone()))),
        }
    }
}

fn needs_ends(ty: &Term) -> bool {
    matches!(ty, Term::Pi(..) | Term::Sigma(..))
}

/// Closedness, values and types of subterms.
#[derive(Default)]
struct MemoData {
    closed: Option<bool>,
    value: Option<Value>,
    ty: Option<Term>,
}

type Memo = NodeMemo<MemoData>;

enum MemoRef {
    Owner(Rc<RefCell<Memo>>),
    Shared(Weak<RefCell<Memo>>),
}

/// The semantic operations, parameterized by the theory.
///
/// The memo is owned by the value returned from [`Sem::new`]; clones captured
/// in function values only borrow it, so values never keep it alive.
pub struct Sem {
    th: Rc<Theory>,
    memo: MemoRef,
}

impl Clone for Sem {
    fn clone(&self) -> Self {
        let memo = match &self.memo {
            MemoRef::Owner(m) => Rc::downgrade(m),
            MemoRef::Shared(w) => w.clone(),
        };
        Sem {
            th: self.th.clone(),
            memo: MemoRef::Shared(memo),
        }
    }
}

impl Sem {
    pub fn new(th: &Theory) -> Self {
        Sem {
            th: Rc::new(th.clone()),
            memo: MemoRef::Owner(Rc::default()),
        }
    }

    fn memo(&self) -> Option<Rc<RefCell<Memo>>> {
        match &self.memo {
            MemoRef::Owner(m) => Some(m.clone()),
            MemoRef::Shared(w) => w.upgrade(),
        }
    }

    /// The memo, when `t` is a closed compound term.
    fn memo_for(&self, t: &Term) -> Option<Rc<RefCell<Memo>>> {
        if matches!(
            t,
            Term::Var(_) | Term::BaseVertex(_) | Term::BaseEdge(_) | Term::Zero | Term::NatTy | Term::BaseTy(_)
        ) {
            return None;
        }
        let memo = self.memo()?;
        let closed = {
            let mut m = memo.borrow_mut();
            let e = m.entry(t);
            *e.closed.get_or_insert_with(|| t.is_closed())
        };
        closed.then_some(memo)
    }

    fn is_closed(&self, t: &Term) -> bool {
        match t {
            Term::Var(_) => false,
            Term::BaseVertex(_) | Term::BaseEdge(_) | Term::Zero | Term::NatTy | Term::BaseTy(_) => true,
            _ if self.memo().is_some() => self.memo_for(t).is_some(),
            _ => t.is_closed(),
        }
    }

    fn synth(&self, ctx: &Tys, t: &Term) -> MResult<Term> {
        let memo = self.memo_for(t);
        if let Some(ty) = memo.as_ref().and_then(|m| m.borrow_mut().entry(t).ty.clone()) {
            return Ok(ty);
        }
        let ty = synth(&self.th, ctx, t)?;
        if let Some(m) = memo {
            m.borrow_mut().entry(t).ty = Some(ty.clone());
        }
        Ok(ty)
    }

    // ---- objects ----

    pub fn eval(&self, ctx: &Tys, env: &Vals, t: &Term) -> MResult<Value> {
        let memo = self.memo_for(t);
        if let Some(v) = memo.as_ref().and_then(|m| m.borrow_mut().entry(t).value.clone()) {
            return Ok(v);
        }
        let v = self.eval_uncached(ctx, env, t)?;
        if let Some(m) = memo {
            m.borrow_mut().entry(t).value = Some(v.clone());
        }
        Ok(v)
    }

    fn eval_uncached(&self, ctx: &Tys, env: &Vals, t: &Term) -> MResult<Value> {
        match t {
            Term::Var(k) => env.get(*k),
            Term::BaseVertex(v) => Ok(Value::Vertex(v.clone())),
            Term::BaseEdge(e) => Ok(Value::Word(self.th.generator(e)?)),
            Term::Lam(a, body) => {
                let inner = ctx.extended((**a).clone());
                let (s1, s2) = (self.clone(), self.clone());
                let (c1, c2) = (inner.clone(), inner);
                let (e1, e2) = (env.clone(), env.clone());
                let (b1, b2) = (body.clone(), body.clone());
                let outer = ctx.clone();
                let obj = move |x: &Value| s1.eval(&c1, &e1.push(x.clone()), &b1);
                let arr = move |x: &Value, y: &Value, al: &Value| {
                    let cell = s2.idcell(&outer, &e2)?.ext(x.clone(), y.clone(), al.clone());
                    s2.ap(&c2, &cell, &b2)
                };
                Ok(Value::fun(obj, Some(Box::new(arr))))
            }
            Term::App(f, a) => {
                let fv = self.eval(ctx, env, f)?;
                let av = self.eval(ctx, env, a)?;
                fv.as_fun()?.call(&av)
            }
            Term::Pair(a, b, _) => Ok(Value::pair(self.eval(ctx, env, a)?, self.eval(ctx, env, b)?)),
            Term::Proj0(p) => Ok(self.eval(ctx, env, p)?.as_pair()?.0.clone()),
            Term::Proj1(p) => Ok(self.eval(ctx, env, p)?.as_pair()?.1.clone()),
            Term::Refl(a) => {
                let aty = self.synth(ctx, a)?;
                let v = self.eval(ctx, env, a)?;
                self.idv(ctx, env, &aty, &v)
            }
            Term::J {
                motive,
                base,
                lhs,
                rhs,
                path,
            } => {
                let aty = self.synth(ctx, lhs)?;
                let l = self.eval(ctx, env, lhs)?;
                let r = self.eval(ctx, env, rhs)?;
                let p = self.eval(ctx, env, path)?;
                let b = self.eval(&ctx.extended(aty.clone()), &env.push(l.clone()), base)?;
                let q = self.j_cell(ctx, env, &aty, &l, &r, &p)?;
                self.fwd(&j_motive_context(ctx, &aty), &q, motive, &b)
            }
            Term::Zero => Ok(Value::Num(0)),
            Term::Succ(n) => Ok(Value::Num(self.eval(ctx, env, n)?.as_num()? + 1)),
            Term::Rec {
                motive,
                zcase,
                scase,
                scrut,
            } => {
                let k = self.eval(ctx, env, scrut)?.as_num()?;
                let sctx = ctx.extended(Term::NatTy).extended((**motive).clone());
                let mut acc = self.eval(ctx, env, zcase)?;
                for j in 0..k {
                    let e = env.push(Value::Num(j)).push(acc);
                    acc = self.eval(&sctx, &e, scase)?;
                }
                Ok(acc)
            }
            Term::RSig {
                branch, scrut, ..
            } => {
                let (dom, fam) = self.sigma_parts(ctx, scrut)?;
                let pv = self.eval(ctx, env, scrut)?;
                let (x, y) = pv.as_pair()?;
                let bctx = ctx.extended(dom).extended(fam);
                let e = env.push(x.clone()).push(y.clone());
                self.eval(&bctx, &e, branch)
            }
            Term::Pi(..) | Term::Sigma(..) | Term::Id(..) | Term::NatTy | Term::BaseTy(_) => {
                Err(TypeError::NotATerm(t.clone()).into())
            }
        }
    }

    fn sigma_parts(&self, ctx: &Tys, p: &Term) -> MResult<(Term, Term)> {
        match self.synth(ctx, p)? {
            Term::Sigma(a, b) => Ok(((*a).clone(), (*b).clone())),
            ty => Err(TypeError::NotAPair {
                term: p.clone(),
                ty,
            }
            .into()),
        }
    }

    /// The arrow `(1, 1_a, p, *) : (env, a, a, 1_a) -> (env, a, b, p)` of the
    /// J-motive context.
    fn j_cell(&self, ctx: &Tys, env: &Vals, aty: &Term, a: &Value, b: &Value, p: &Value) -> MResult<CellV> {
        let ida = self.idv(ctx, env, aty, a)?;
        Ok(self
            .idcell(ctx, env)?
            .ext(a.clone(), a.clone(), ida.clone())
            .ext(a.clone(), b.clone(), p.clone())
            .ext(ida, p.clone(), Value::Triv))
    }

    /// The identity arrow of a context object.
    pub fn idcell(&self, ctx: &Tys, env: &Vals) -> MResult<CellV> {
        Ok(CellV {
            src: env.clone(),
            tgt: env.clone(),
            path: Paths::Id(ctx.clone(), env.clone()),
        })
    }

    fn path_at(&self, p: &Paths, k: usize) -> MResult<Value> {
        let mut cur = p;
        let mut k = k;
        loop {
            match cur {
                Paths::Cons(n) if k == 0 => return Ok(n.0.clone()),
                Paths::Cons(n) => {
                    cur = &n.1;
                    k -= 1;
                }
                Paths::Id(tys, vals) => {
                    let unbound = || ModelError::Unsupported(format!("unbound variable #{k}"));
                    let (ty, ctx) = tys.drop_n(k).and_then(|t| t.split()).ok_or_else(unbound)?;
                    let (v, env) = vals.drop_n(k).and_then(|t| t.split()).ok_or_else(unbound)?;
                    return self.idv(ctx, env, ty, v);
                }
            }
        }
    }

    // ---- groupoid structure of a fiber ----

    pub fn idv(&self, ctx: &Tys, env: &Vals, ty: &Term, v: &Value) -> MResult<Value> {
        match ty {
            Term::BaseTy(_) => Ok(Value::Word(ReducedWord::identity(v.as_vertex()?.as_str()))),
            Term::NatTy | Term::Id(..) => Ok(Value::Triv),
            Term::Sigma(a, b) => {
                let (x, y) = v.as_pair()?;
                let ix = self.idv(ctx, env, a, x)?;
                let iy = self.idv(&ctx.extended((**a).clone()), &env.push(x.clone()), b, y)?;
                Ok(Value::pair(ix, iy))
            }
            Term::Pi(a, b) => {
                let me = self.clone();
                let inner = ctx.extended((**a).clone());
                let env = env.clone();
                let b = b.clone();
                let f = v.clone();
                Ok(Value::nat(move |x| {
                    let fx = f.as_fun()?.call(x)?;
                    me.idv(&inner, &env.push(x.clone()), &b, &fx)
                }))
            }
            other => Err(TypeError::NotAType(other.clone()).into()),
        }
    }

    /// Diagrammatic composite `al` then `be` of arrows `x -> y -> z`.
    #[allow(clippy::too_many_arguments)]
    pub fn comp(
        &self,
        ctx: &Tys,
        env: &Vals,
        ty: &Term,
        x: &Value,
        y: &Value,
        z: &Value,
        al: &Value,
        be: &Value,
    ) -> MResult<Value> {
        match ty {
            Term::BaseTy(_) => Ok(Value::Word(graph::compose(al.as_word()?, be.as_word()?)?)),
            Term::NatTy | Term::Id(..) => Ok(Value::Triv),
            Term::Sigma(a, b) => {
                let (a1, b1) = x.as_pair()?;
                let (a2, b2) = y.as_pair()?;
                let (a3, b3) = z.as_pair()?;
                let (al0, al1) = al.as_pair()?;
                let (be0, be1) = be.as_pair()?;
                let c0 = self.comp(ctx, env, a, a1, a2, a3, al0, be0)?;
                let inner = ctx.extended((**a).clone());
                let base = self.idcell(ctx, env)?;
                let cell2 = base.ext(a2.clone(), a3.clone(), be0.clone());
                let ends = needs_ends(b);
                let (s_al, s_c0, s_be) = if ends {
                    (
                        self.fwd(&inner, &base.ext(a1.clone(), a2.clone(), al0.clone()), b, b1)?,
                        self.fwd(&inner, &base.ext(a1.clone(), a3.clone(), c0.clone()), b, b1)?,
                        self.fwd(&inner, &cell2, b, b2)?,
                    )
                } else {
                    (Value::Triv, Value::Triv, Value::Triv)
                };
                let t = self.fwd_arr(&inner, &cell2, b, &s_al, b2, al1)?;
                let c1 = self.comp(&inner, &env.push(a3.clone()), b, &s_c0, &s_be, b3, &t, be1)?;
                Ok(Value::pair(c0, c1))
            }
            Term::Pi(a, b) => {
                let me = self.clone();
                let inner = ctx.extended((**a).clone());
                let env = env.clone();
                let b = b.clone();
                let (f, g, h) = (x.clone(), y.clone(), z.clone());
                let (al, be) = (al.clone(), be.clone());
                Ok(Value::nat(move |p| {
                    let e = env.push(p.clone());
                    me.comp(
                        &inner,
                        &e,
                        &b,
                        &f.as_fun()?.call(p)?,
                        &g.as_fun()?.call(p)?,
                        &h.as_fun()?.call(p)?,
                        &al.as_fun()?.call(p)?,
                        &be.as_fun()?.call(p)?,
                    )
                }))
            }
            other => Err(TypeError::NotAType(other.clone()).into()),
        }
    }

    /// Inverse of an arrow `x -> y`.
    pub fn inv(&self, ctx: &Tys, env: &Vals, ty: &Term, x: &Value, y: &Value, al: &Value) -> MResult<Value> {
        match ty {
            Term::BaseTy(_) => Ok(Value::Word(graph::inverse(al.as_word()?))),
            Term::NatTy | Term::Id(..) => Ok(Value::Triv),
            Term::Sigma(a, b) => {
                let (a1, b1) = x.as_pair()?;
                let (a2, b2) = y.as_pair()?;
                let (al0, al1) = al.as_pair()?;
                let i0 = self.inv(ctx, env, a, a1, a2, al0)?;
                let inner = ctx.extended((**a).clone());
                let base = self.idcell(ctx, env)?;
                let cellm = base.ext(a2.clone(), a1.clone(), i0.clone());
                let (s_al, s_i0) = if needs_ends(b) {
                    (
                        self.fwd(&inner, &base.ext(a1.clone(), a2.clone(), al0.clone()), b, b1)?,
                        self.fwd(&inner, &cellm, b, b2)?,
                    )
                } else {
                    (Value::Triv, Value::Triv)
                };
                let t = self.fwd_arr(&inner, &cellm, b, &s_al, b2, al1)?;
                let i1 = self.inv(&inner, &env.push(a1.clone()), b, b1, &s_i0, &t)?;
                Ok(Value::pair(i0, i1))
            }
            Term::Pi(a, b) => {
                let me = self.clone();
                let inner = ctx.extended((**a).clone());
                let env = env.clone();
                let b = b.clone();
                let (f, g, al) = (x.clone(), y.clone(), al.clone());
                Ok(Value::nat(move |p| {
                    me.inv(
                        &inner,
                        &env.push(p.clone()),
                        &b,
                        &f.as_fun()?.call(p)?,
                        &g.as_fun()?.call(p)?,
                        &al.as_fun()?.call(p)?,
                    )
                }))
            }
            other => Err(TypeError::NotAType(other.clone()).into()),
        }
    }

    // ---- transport along context arrows ----

    /// The object part of the transport functor `ty(c)`.
    pub fn fwd(&self, ctx: &Tys, c: &CellV, ty: &Term, v: &Value) -> MResult<Value> {
        // Transport along a constant family is the identity.
        if self.is_closed(ty) {
            return Ok(v.clone());
        }
        match ty {
            Term::BaseTy(_) | Term::NatTy => Ok(v.clone()),
            Term::Id(a, l, r) => {
                if matches!(**a, Term::NatTy | Term::Id(..)) {
                    return Ok(Value::Triv);
                }
                let lg = self.ap(ctx, c, l)?;
                let rg = self.ap(ctx, c, r)?;
                let (ls, rs) = (self.eval(ctx, &c.src, l)?, self.eval(ctx, &c.src, r)?);
                let (lt, rt) = (self.eval(ctx, &c.tgt, l)?, self.eval(ctx, &c.tgt, r)?);
                let (la, ra) = if needs_ends(a) {
                    (self.fwd(ctx, c, a, &ls)?, self.fwd(ctx, c, a, &rs)?)
                } else {
                    (Value::Triv, Value::Triv)
                };
                let w = self.fwd_arr(ctx, c, a, &ls, &rs, v)?;
                let il = self.inv(ctx, &c.tgt, a, &la, &lt, &lg)?;
                let first = self.comp(ctx, &c.tgt, a, &lt, &la, &ra, &il, &w)?;
                self.comp(ctx, &c.tgt, a, &lt, &ra, &rt, &first, &rg)
            }
            Term::Sigma(a, b) => {
                let (x, y) = v.as_pair()?;
                let x2 = self.fwd(ctx, c, a, x)?;
                let idx = self.idv(ctx, &c.tgt, a, &x2)?;
                let y2 = self.fwd(&ctx.extended((**a).clone()), &c.ext(x.clone(), x2.clone(), idx), b, y)?;
                Ok(Value::pair(x2, y2))
            }
            Term::Pi(a, b) => {
                let inner = ctx.extended((**a).clone());
                let (s1, s2) = (self.clone(), self.clone());
                let (ctx1, ctx2) = (ctx.clone(), ctx.clone());
                let (i1, i2) = (inner.clone(), inner);
                let (c1, c2) = (c.clone(), c.clone());
                let (a1, a2) = (a.clone(), a.clone());
                let (b1, b2) = (b.clone(), b.clone());
                let (f1, f2) = (v.clone(), v.clone());
                let obj = move |x2: &Value| {
                    let x = s1.bwd(&ctx1, &c1, &a1, x2)?;
                    let id2 = s1.idv(&ctx1, &c1.tgt, &a1, x2)?;
                    let fx = f1.as_fun()?.call(&x)?;
                    s1.fwd(&i1, &c1.ext(x, x2.clone(), id2), &b1, &fx)
                };
                let arr = move |x2: &Value, y2: &Value, al2: &Value| {
                    let x = s2.bwd(&ctx2, &c2, &a2, x2)?;
                    let y = s2.bwd(&ctx2, &c2, &a2, y2)?;
                    let al = s2.bwd_arr(&ctx2, &c2, &a2, x2, y2, al2)?;
                    let f = f2.as_fun()?;
                    let fal = f.call_arr(&x, &y, &al)?;
                    let fx = f.call(&x)?;
                    let fy = f.call(&y)?;
                    let src = if needs_ends(&b2) {
                        let lift = s2.idcell(&ctx2, &c2.src)?.ext(x.clone(), y.clone(), al.clone());
                        s2.fwd(&i2, &lift, &b2, &fx)?
                    } else {
                        Value::Triv
                    };
                    let idy = s2.idv(&ctx2, &c2.tgt, &a2, y2)?;
                    s2.fwd_arr(&i2, &c2.ext(y, y2.clone(), idy), &b2, &src, &fy, &fal)
                };
                Ok(Value::fun(obj, Some(Box::new(arr))))
            }
            other => Err(TypeError::NotAType(other.clone()).into()),
        }
    }

    /// The object part of the inverse transport functor.
    pub fn bwd(&self, ctx: &Tys, c: &CellV, ty: &Term, v: &Value) -> MResult<Value> {
        if self.is_closed(ty) {
            return Ok(v.clone());
        }
        match ty {
            Term::BaseTy(_) | Term::NatTy => Ok(v.clone()),
            Term::Id(a, l, r) => {
                if matches!(**a, Term::NatTy | Term::Id(..)) {
                    return Ok(Value::Triv);
                }
                let lg = self.ap(ctx, c, l)?;
                let rg = self.ap(ctx, c, r)?;
                let (ls, rs) = (self.eval(ctx, &c.src, l)?, self.eval(ctx, &c.src, r)?);
                let (lt, rt) = (self.eval(ctx, &c.tgt, l)?, self.eval(ctx, &c.tgt, r)?);
                let (la, ra) = if needs_ends(a) {
                    (self.fwd(ctx, c, a, &ls)?, self.fwd(ctx, c, a, &rs)?)
                } else {
                    (Value::Triv, Value::Triv)
                };
                let ir = self.inv(ctx, &c.tgt, a, &ra, &rt, &rg)?;
                let first = self.comp(ctx, &c.tgt, a, &la, &lt, &rt, &lg, v)?;
                let w = self.comp(ctx, &c.tgt, a, &la, &rt, &ra, &first, &ir)?;
                self.bwd_arr(ctx, c, a, &la, &ra, &w)
            }
            Term::Sigma(a, b) => {
                let (x2, y2) = v.as_pair()?;
                let x = self.bwd(ctx, c, a, x2)?;
                let idx = self.idv(ctx, &c.tgt, a, x2)?;
                let y = self.bwd(&ctx.extended((**a).clone()), &c.ext(x.clone(), x2.clone(), idx), b, y2)?;
                Ok(Value::pair(x, y))
            }
            Term::Pi(a, b) => {
                let inner = ctx.extended((**a).clone());
                let (s1, s2) = (self.clone(), self.clone());
                let (ctx1, ctx2) = (ctx.clone(), ctx.clone());
                let (i1, i2) = (inner.clone(), inner);
                let (c1, c2) = (c.clone(), c.clone());
                let (a1, a2) = (a.clone(), a.clone());
                let (b1, b2) = (b.clone(), b.clone());
                let (g1, g2) = (v.clone(), v.clone());
                let obj = move |x: &Value| {
                    let x2 = s1.fwd(&ctx1, &c1, &a1, x)?;
                    let id2 = s1.idv(&ctx1, &c1.tgt, &a1, &x2)?;
                    let gx = g1.as_fun()?.call(&x2)?;
                    s1.bwd(&i1, &c1.ext(x.clone(), x2, id2), &b1, &gx)
                };
                let arr = move |x: &Value, y: &Value, al: &Value| {
                    let x2 = s2.fwd(&ctx2, &c2, &a2, x)?;
                    let y2 = s2.fwd(&ctx2, &c2, &a2, y)?;
                    let al2 = s2.fwd_arr(&ctx2, &c2, &a2, x, y, al)?;
                    let g = g2.as_fun()?;
                    let gal = g.call_arr(&x2, &y2, &al2)?;
                    let gx = g.call(&x2)?;
                    let gy = g.call(&y2)?;
                    let src = if needs_ends(&b2) {
                        let lift = s2.idcell(&ctx2, &c2.tgt)?.ext(x2.clone(), y2.clone(), al2.clone());
                        s2.fwd(&i2, &lift, &b2, &gx)?
                    } else {
                        Value::Triv
                    };
                    let idy = s2.idv(&ctx2, &c2.tgt, &a2, &y2)?;
                    s2.bwd_arr(&i2, &c2.ext(y.clone(), y2, idy), &b2, &src, &gy, &gal)
                };
                Ok(Value::fun(obj, Some(Box::new(arr))))
            }
            other => Err(TypeError::NotAType(other.clone()).into()),
        }
    }

    /// The arrow part of `ty(c)` on `al : x -> y` in the source fiber.
    #[allow(clippy::too_many_arguments)]
    pub fn fwd_arr(&self, ctx: &Tys, c: &CellV, ty: &Term, x: &Value, y: &Value, al: &Value) -> MResult<Value> {
        if self.is_closed(ty) {
            return Ok(al.clone());
        }
        match ty {
            Term::BaseTy(_) => Ok(al.clone()),
            Term::NatTy | Term::Id(..) => Ok(Value::Triv),
            Term::Sigma(a, b) => {
                let (a1, b1) = x.as_pair()?;
                let (a2, b2) = y.as_pair()?;
                let (al0, al1) = al.as_pair()?;
                let r0 = self.fwd_arr(ctx, c, a, a1, a2, al0)?;
                let a2t = self.fwd(ctx, c, a, a2)?;
                let inner = ctx.extended((**a).clone());
                let src = if needs_ends(b) {
                    let lift = self.idcell(ctx, &c.src)?.ext(a1.clone(), a2.clone(), al0.clone());
                    self.fwd(&inner, &lift, b, b1)?
                } else {
                    Value::Triv
                };
                let id2 = self.idv(ctx, &c.tgt, a, &a2t)?;
                let r1 = self.fwd_arr(&inner, &c.ext(a2.clone(), a2t, id2), b, &src, b2, al1)?;
                Ok(Value::pair(r0, r1))
            }
            Term::Pi(a, b) => {
                let me = self.clone();
                let ctx = ctx.clone();
                let inner = ctx.extended((**a).clone());
                let c = c.clone();
                let (a, b) = (a.clone(), b.clone());
                let (f, g, th) = (x.clone(), y.clone(), al.clone());
                Ok(Value::nat(move |x2| {
                    let x = me.bwd(&ctx, &c, &a, x2)?;
                    let id2 = me.idv(&ctx, &c.tgt, &a, x2)?;
                    let cell = c.ext(x.clone(), x2.clone(), id2);
                    me.fwd_arr(
                        &inner,
                        &cell,
                        &b,
                        &f.as_fun()?.call(&x)?,
                        &g.as_fun()?.call(&x)?,
                        &th.as_fun()?.call(&x)?,
                    )
                }))
            }
            other => Err(TypeError::NotAType(other.clone()).into()),
        }
    }

    /// The arrow part of the inverse transport on `al : x -> y` in the target fiber.
    #[allow(clippy::too_many_arguments)]
    pub fn bwd_arr(&self, ctx: &Tys, c: &CellV, ty: &Term, x: &Value, y: &Value, al: &Value) -> MResult<Value> {
        if self.is_closed(ty) {
            return Ok(al.clone());
        }
        match ty {
            Term::BaseTy(_) => Ok(al.clone()),
            Term::NatTy | Term::Id(..) => Ok(Value::Triv),
            Term::Sigma(a, b) => {
                let (a1, b1) = x.as_pair()?;
                let (a2, b2) = y.as_pair()?;
                let (al0, al1) = al.as_pair()?;
                let r0 = self.bwd_arr(ctx, c, a, a1, a2, al0)?;
                let a2s = self.bwd(ctx, c, a, a2)?;
                let inner = ctx.extended((**a).clone());
                let src = if needs_ends(b) {
                    let lift = self.idcell(ctx, &c.tgt)?.ext(a1.clone(), a2.clone(), al0.clone());
                    self.fwd(&inner, &lift, b, b1)?
                } else {
                    Value::Triv
                };
                let id2 = self.idv(ctx, &c.tgt, a, a2)?;
                let r1 = self.bwd_arr(&inner, &c.ext(a2s, a2.clone(), id2), b, &src, b2, al1)?;
                Ok(Value::pair(r0, r1))
            }
            Term::Pi(a, b) => {
                let me = self.clone();
                let ctx = ctx.clone();
                let inner = ctx.extended((**a).clone());
                let c = c.clone();
                let (a, b) = (a.clone(), b.clone());
                let (f, g, th) = (x.clone(), y.clone(), al.clone());
                Ok(Value::nat(move |x1| {
                    let x2 = me.fwd(&ctx, &c, &a, x1)?;
                    let id2 = me.idv(&ctx, &c.tgt, &a, &x2)?;
                    let cell = c.ext(x1.clone(), x2.clone(), id2);
                    me.bwd_arr(
                        &inner,
                        &cell,
                        &b,
                        &f.as_fun()?.call(&x2)?,
                        &g.as_fun()?.call(&x2)?,
                        &th.as_fun()?.call(&x2)?,
                    )
                }))
            }
            other => Err(TypeError::NotAType(other.clone()).into()),
        }
    }

    // ---- action of terms on context arrows ----

    /// For `t : T` in `ctx` and `c : src -> tgt`, the arrow
    /// `T(c)(t(src)) -> t(tgt)` in the fiber over `tgt`.
    pub fn ap(&self, ctx: &Tys, c: &CellV, t: &Term) -> MResult<Value> {
        if self.is_closed(t) {
            // A closed term is constant in its context.
            let ty = self.synth(ctx, t)?;
            let v = self.eval(ctx, &c.tgt, t)?;
            return self.idv(ctx, &c.tgt, &ty, &v);
        }
        match t {
            Term::Var(k) => self.path_at(&c.path, *k),
            Term::BaseVertex(v) => Ok(Value::Word(ReducedWord::identity(v.as_str()))),
            Term::BaseEdge(_) | Term::Refl(_) | Term::Zero | Term::Succ(_) => Ok(Value::Triv),
            Term::Lam(a, body) => {
                let me = self.clone();
                let ctx = ctx.clone();
                let inner = ctx.extended((**a).clone());
                let c = c.clone();
                let (a, body) = (a.clone(), body.clone());
                Ok(Value::nat(move |x2| {
                    let x = me.bwd(&ctx, &c, &a, x2)?;
                    let id2 = me.idv(&ctx, &c.tgt, &a, x2)?;
                    me.ap(&inner, &c.ext(x, x2.clone(), id2), &body)
                }))
            }
            Term::App(f, arg) => {
                let (a, b) = match self.synth(ctx, f)? {
                    Term::Pi(a, b) => ((*a).clone(), (*b).clone()),
                    ty => {
                        return Err(TypeError::NotAFunction {
                            term: (**f).clone(),
                            ty,
                        }
                        .into())
                    }
                };
                if matches!(b, Term::NatTy | Term::Id(..)) {
                    return Ok(Value::Triv);
                }
                let inner = ctx.extended(a.clone());
                let fs = self.eval(ctx, &c.src, f)?;
                let ft = self.eval(ctx, &c.tgt, f)?;
                let x = self.eval(ctx, &c.src, arg)?;
                let x2 = self.eval(ctx, &c.tgt, arg)?;
                let mu = self.ap(ctx, c, arg)?;
                let theta = self.ap(ctx, c, f)?;
                let xt = self.bwd(ctx, c, &a, &x2)?;
                let ax = if needs_ends(&a) {
                    self.fwd(ctx, c, &a, &x)?
                } else {
                    Value::Triv
                };
                let nu = self.bwd_arr(ctx, c, &a, &ax, &x2, &mu)?;
                let fsf = fs.as_fun()?;
                let fx = fsf.call(&x)?;
                let fxt = fsf.call(&xt)?;
                let fnu = fsf.call_arr(&x, &xt, &nu)?;
                let id2 = self.idv(ctx, &c.tgt, &a, &x2)?;
                let c2 = c.ext(xt.clone(), x2.clone(), id2);
                let ends = needs_ends(&b);
                let (s_nu, s_mu, mid) = if ends {
                    let lift = self.idcell(ctx, &c.src)?.ext(x.clone(), xt.clone(), nu.clone());
                    (
                        self.fwd(&inner, &lift, &b, &fx)?,
                        self.fwd(&inner, &c.ext(x.clone(), x2.clone(), mu.clone()), &b, &fx)?,
                        self.fwd(&inner, &c2, &b, &fxt)?,
                    )
                } else {
                    (Value::Triv, Value::Triv, Value::Triv)
                };
                let left = self.fwd_arr(&inner, &c2, &b, &s_nu, &fxt, &fnu)?;
                let right = theta.as_fun()?.call(&x2)?;
                let end = ft.as_fun()?.call(&x2)?;
                self.comp(&inner, &c.tgt.push(x2), &b, &s_mu, &mid, &end, &left, &right)
            }
            Term::Pair(a, b, _) => Ok(Value::pair(self.ap(ctx, c, a)?, self.ap(ctx, c, b)?)),
            Term::Proj0(p) => Ok(self.ap(ctx, c, p)?.as_pair()?.0.clone()),
            Term::Proj1(p) => Ok(self.ap(ctx, c, p)?.as_pair()?.1.clone()),
            Term::J {
                motive,
                base,
                lhs,
                rhs,
                path,
            } => {
                if matches!(**motive, Term::NatTy | Term::Id(..)) {
                    return Ok(Value::Triv);
                }
                let aty = self.synth(ctx, lhs)?;
                let inner = ctx.extended(aty.clone());
                let mctx = j_motive_context(ctx, &aty);
                let ls = self.eval(ctx, &c.src, lhs)?;
                let lt = self.eval(ctx, &c.tgt, lhs)?;
                let rt = self.eval(ctx, &c.tgt, rhs)?;
                let pt = self.eval(ctx, &c.tgt, path)?;
                let mu = self.ap(ctx, c, lhs)?;
                let phic = c.ext(ls.clone(), lt.clone(), mu.clone());
                let ap_phi = self.ap(&inner, &phic, base)?;
                let phi_t = self.eval(&inner, &c.tgt.push(lt.clone()), base)?;
                let src = if needs_ends(motive) {
                    let phi_s = self.eval(&inner, &c.src.push(ls.clone()), base)?;
                    let ids = self.idv(ctx, &c.src, &aty, &ls)?;
                    let idt = self.idv(ctx, &c.tgt, &aty, &lt)?;
                    let diag = phic.ext(ls.clone(), lt.clone(), mu).ext(ids, idt, Value::Triv);
                    self.fwd(&mctx, &diag, motive, &phi_s)?
                } else {
                    Value::Triv
                };
                let q = self.j_cell(ctx, &c.tgt, &aty, &lt, &rt, &pt)?;
                self.fwd_arr(&mctx, &q, motive, &src, &phi_t, &ap_phi)
            }
            Term::Rec {
                motive,
                zcase,
                scase,
                scrut,
            } => {
                if matches!(**motive, Term::NatTy | Term::Id(..)) {
                    return Ok(Value::Triv);
                }
                let k = self.eval(ctx, &c.src, scrut)?.as_num()?;
                let sctx = ctx.extended(Term::NatTy).extended((**motive).clone());
                let mut r = self.ap(ctx, c, zcase)?;
                let mut acc_s = self.eval(ctx, &c.src, zcase)?;
                let mut acc_t = self.eval(ctx, &c.tgt, zcase)?;
                for j in 0..k {
                    let cell = c
                        .ext(Value::Num(j), Value::Num(j), Value::Triv)
                        .ext(acc_s.clone(), acc_t.clone(), r);
                    r = self.ap(&sctx, &cell, scase)?;
                    acc_s = self.eval(&sctx, &cell.src, scase)?;
                    acc_t = self.eval(&sctx, &cell.tgt, scase)?;
                }
                Ok(r)
            }
            Term::RSig {
                motive,
                branch,
                scrut,
            } => {
                if matches!(**motive, Term::NatTy | Term::Id(..)) {
                    return Ok(Value::Triv);
                }
                let (dom, fam) = self.sigma_parts(ctx, scrut)?;
                let ps = self.eval(ctx, &c.src, scrut)?;
                let pt = self.eval(ctx, &c.tgt, scrut)?;
                let pa = self.ap(ctx, c, scrut)?;
                let (xs, ys) = ps.as_pair()?;
                let (xt, yt) = pt.as_pair()?;
                let (al, be) = pa.as_pair()?;
                let cell = c
                    .ext(xs.clone(), xt.clone(), al.clone())
                    .ext(ys.clone(), yt.clone(), be.clone());
                self.ap(&ctx.extended(dom).extended(fam), &cell, branch)
            }
            Term::Pi(..) | Term::Sigma(..) | Term::Id(..) | Term::NatTy | Term::BaseTy(_) => {
                Err(TypeError::NotATerm(t.clone()).into())
            }
        }
    }
}

/// Values for a context, innermost last, together with the context's types.
#[derive(Clone, Debug, Default)]
pub struct Env {
    ctx: Context,
    values: Vec<Value>,
}

impl Env {
    pub fn new() -> Self {
        Env::default()
    }

    pub fn push(&mut self, ty: Term, v: Value) {
        self.ctx.push(ty);
        self.values.push(v);
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }
}

pub fn eval(th: &Theory, env: &Env, t: &Term) -> MResult<Value> {
    Sem::new(th).eval(&Tys::from_context(&env.ctx), &Vals::from_slice(&env.values), t)
}

pub fn eval_closed(th: &Theory, t: &Term) -> MResult<Value> {
    Sem::new(th).eval(&Tys::default(), &Vals::default(), t)
}

/// The numeral denoted by a number value.
pub fn numeral_of(v: &Value) -> MResult<Term> {
    Ok(Term::numeral(v.as_num()?))
}

/// The section of evaluation: a vertex literal, or a composite of edge
/// literals and their inverses.
pub fn closure_term(th: &Theory, v: &Value) -> MResult<Term> {
    match v {
        Value::Vertex(a) => Ok(Term::BaseVertex(a.clone())),
        Value::Word(w) => word_term(th, w),
        _ => Err(ModelError::NotAGroupoidValue),
    }
}

fn word_term(th: &Theory, w: &ReducedWord) -> MResult<Term> {
    let g = Term::base_ty();
    let mut acc: Option<(Term, Name)> = None;
    let start = Term::BaseVertex(w.source.clone());
    for l in &w.letters {
        let (s, t) = th.letter_endpoints(l)?;
        let (vs, vt) = (Term::BaseVertex(s.clone()), Term::BaseVertex(t.clone()));
        let step = match l.orientation {
            graph::Orientation::Forward => Term::BaseEdge(l.edge.clone()),
            graph::Orientation::Backward => {
                jterms::path_inverse_raw(&g, &vt, &vs, &Term::BaseEdge(l.edge.clone()))
            }
        };
        acc = Some(match acc {
            None => (step, t),
            Some((p, _)) => (jterms::path_compose_raw(&g, &start, &vs, &vt, &p, &step), t),
        });
    }
    Ok(match acc {
        None => Term::refl(start),
        Some((p, _)) => p,
    })
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

    #[test]
    fn edges_and_vertices() {
        let th = th1();
        let v = eval_closed(&th, &Term::edge("f")).unwrap();
        assert_eq!(v.as_word().unwrap(), &th.generator("f").unwrap());
        let v = eval_closed(&th, &Term::refl(Term::vertex("a"))).unwrap();
        assert!(v.as_word().unwrap().is_identity());
    }

    #[test]
    fn doppelganger_evaluates_to_base() {
        let th = th1();
        let t = Term::j(Term::base_ty(), Term::vertex("b"), Term::vertex("a"), Term::vertex("a"), Term::edge("e"));
        assert_eq!(eval_closed(&th, &t).unwrap().as_vertex().unwrap().as_str(), "b");
    }

    #[test]
    fn rec_counts() {
        let th = th1();
        let t = Term::rec(Term::NatTy, Term::Zero, Term::succ(Term::Var(0)), Term::numeral(2));
        assert_eq!(eval_closed(&th, &t).unwrap().as_num().unwrap(), 2);
        assert_eq!(numeral_of(&Value::Num(3)).unwrap(), Term::numeral(3));
        assert!(numeral_of(&Value::Triv).is_err());
    }

    #[test]
    fn closure_is_a_section() {
        let th = th1();
        let w = graph::parse_word_expr(&th, "f . g . g^ . f^ . e^").unwrap();
        let t = closure_term(&th, &Value::Word(w.clone())).unwrap();
        assert_eq!(eval_closed(&th, &t).unwrap().as_word().unwrap(), &w);
        let fg = graph::parse_word_expr(&th, "f . g").unwrap();
        let t = closure_term(&th, &Value::Word(fg.clone())).unwrap();
        assert_eq!(eval_closed(&th, &t).unwrap().as_word().unwrap(), &fg);
        let id = closure_term(&th, &Value::Word(ReducedWord::identity("a"))).unwrap();
        assert_eq!(id, Term::refl(Term::vertex("a")));
    }
}
