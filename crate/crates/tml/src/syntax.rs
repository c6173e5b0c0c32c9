//! Nameless abstract syntax shared by types and terms, with weakening and
//! capture-avoiding substitution.
//!
//! Binding convention: `Var(0)` is the innermost binder. A constructor field
//! that "binds n" sees `n` fresh variables, the last-introduced one at index 0.
//! For the J motive the three binders are `x, y, z` so `z = Var 0`,
//! `y = Var 1`, `x = Var 2` inside the motive.

use std::fmt;
use std::sync::Arc;

use rustc_hash::FxHashMap;

/// An interned-by-value symbol naming a vertex, an edge or the base type.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Name(Arc<str>);

impl Name {
    pub fn new(s: &str) -> Self {
        Name(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::ops::Deref for Name {
    type Target = str;

    fn deref(&self) -> &str {
        &self.0
    }
}

impl std::borrow::Borrow<str> for Name {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name::new(s)
    }
}

/// Name of the basic type generated by the graph.
pub const BASE_TYPE: &str = "G";

pub type Rt = Arc<Term>;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Term {
    Var(usize),
    /// Domain, codomain (binds 1).
    Pi(Rt, Rt),
    /// Domain annotation, body (binds 1).
    Lam(Rt, Rt),
    App(Rt, Rt),
    /// Domain, family (binds 1).
    Sigma(Rt, Rt),
    /// First, second, Sigma annotation.
    Pair(Rt, Rt, Rt),
    Proj0(Rt),
    Proj1(Rt),
    /// Carrier type, left endpoint, right endpoint.
    Id(Rt, Rt, Rt),
    Refl(Rt),
    J {
        motive: Rt,
        base: Rt,
        lhs: Rt,
        rhs: Rt,
        path: Rt,
    },
    NatTy,
    Zero,
    Succ(Rt),
    Rec {
        motive: Rt,
        zcase: Rt,
        scase: Rt,
        scrut: Rt,
    },
    RSig {
        motive: Rt,
        branch: Rt,
        scrut: Rt,
    },
    BaseTy(Name),
    BaseVertex(Name),
    BaseEdge(Name),
}

fn rc(t: Term) -> Rt {
    Arc::new(t)
}

/// Smart constructors taking owned terms.
impl Term {
    pub fn var(i: usize) -> Term {
        Term::Var(i)
    }
    pub fn pi(a: Term, b: Term) -> Term {
        Term::Pi(rc(a), rc(b))
    }
    /// Non-dependent function type `a -> b`, with `b` given in the outer scope.
    pub fn arrow(a: Term, b: Term) -> Term {
        Term::pi(a, shift(&b, 1, 0))
    }
    pub fn lam(a: Term, body: Term) -> Term {
        Term::Lam(rc(a), rc(body))
    }
    pub fn app(f: Term, a: Term) -> Term {
        Term::App(rc(f), rc(a))
    }
    pub fn sigma(a: Term, b: Term) -> Term {
        Term::Sigma(rc(a), rc(b))
    }
    pub fn pair(a: Term, b: Term, ann: Term) -> Term {
        Term::Pair(rc(a), rc(b), rc(ann))
    }
    pub fn proj0(p: Term) -> Term {
        Term::Proj0(rc(p))
    }
    pub fn proj1(p: Term) -> Term {
        Term::Proj1(rc(p))
    }
    pub fn id(ty: Term, l: Term, r: Term) -> Term {
        Term::Id(rc(ty), rc(l), rc(r))
    }
    pub fn refl(a: Term) -> Term {
        Term::Refl(rc(a))
    }
    pub fn j(motive: Term, base: Term, lhs: Term, rhs: Term, path: Term) -> Term {
        Term::J {
            motive: rc(motive),
            base: rc(base),
            lhs: rc(lhs),
            rhs: rc(rhs),
            path: rc(path),
        }
    }
    pub fn succ(n: Term) -> Term {
        Term::Succ(rc(n))
    }
    pub fn rec(motive: Term, zcase: Term, scase: Term, scrut: Term) -> Term {
        Term::Rec {
            motive: rc(motive),
            zcase: rc(zcase),
            scase: rc(scase),
            scrut: rc(scrut),
        }
    }
    pub fn rsig(motive: Term, branch: Term, scrut: Term) -> Term {
        Term::RSig {
            motive: rc(motive),
            branch: rc(branch),
            scrut: rc(scrut),
        }
    }
    pub fn base_ty() -> Term {
        Term::BaseTy(Name::new(BASE_TYPE))
    }
    pub fn vertex(name: &str) -> Term {
        Term::BaseVertex(Name::new(name))
    }
    pub fn edge(name: &str) -> Term {
        Term::BaseEdge(Name::new(name))
    }

    /// The numeral `S^k(0)`.
    pub fn numeral(k: u64) -> Term {
        (0..k).fold(Term::Zero, |acc, _| Term::succ(acc))
    }

    /// `Some(k)` when the term is literally `S^k(0)`.
    pub fn as_numeral(&self) -> Option<u64> {
        let mut t = self;
        let mut k = 0;
        loop {
            match t {
                Term::Zero => return Some(k),
                Term::Succ(n) => {
                    k += 1;
                    t = n;
                }
                _ => return None,
            }
        }
    }

    /// True for the type formers (the only heads a type can have).
    pub fn is_type_former(&self) -> bool {
        matches!(
            self,
            Term::Pi(..) | Term::Sigma(..) | Term::Id(..) | Term::NatTy | Term::BaseTy(_)
        )
    }

    /// Number of constructor nodes.
    pub fn size(&self) -> usize {
        let mut n = 1;
        self.for_each_child(&mut |c, _| n += c.size());
        n
    }

    /// Visits each immediate child together with the number of variables it binds.
    pub fn for_each_child(&self, f: &mut impl FnMut(&Term, usize)) {
        match self {
            Term::Var(_)
            | Term::NatTy
            | Term::Zero
            | Term::BaseTy(_)
            | Term::BaseVertex(_)
            | Term::BaseEdge(_) => {}
            Term::Pi(a, b) | Term::Lam(a, b) | Term::Sigma(a, b) => {
                f(a, 0);
                f(b, 1);
            }
            Term::App(a, b) => {
                f(a, 0);
                f(b, 0);
            }
            Term::Pair(a, b, c) | Term::Id(a, b, c) => {
                f(a, 0);
                f(b, 0);
                f(c, 0);
            }
            Term::Proj0(a) | Term::Proj1(a) | Term::Refl(a) | Term::Succ(a) => f(a, 0),
            Term::J {
                motive,
                base,
                lhs,
                rhs,
                path,
            } => {
                f(motive, 3);
                f(base, 1);
                f(lhs, 0);
                f(rhs, 0);
                f(path, 0);
            }
            Term::Rec {
                motive,
                zcase,
                scase,
                scrut,
            } => {
                f(motive, 1);
                f(zcase, 0);
                f(scase, 2);
                f(scrut, 0);
            }
            Term::RSig {
                motive,
                branch,
                scrut,
            } => {
                f(motive, 1);
                f(branch, 2);
                f(scrut, 0);
            }
        }
    }

    /// Rebuilds the term, replacing each variable occurrence `Var(i)` found
    /// under `depth` extra binders by `f(i, depth)` where that is `Some`.
    /// Returns `None` when nothing changed; unchanged subterms are shared.
    pub fn map_vars(&self, depth: usize, f: &impl Fn(usize, usize) -> Option<Term>) -> Option<Term> {
        let go = |t: &Rt, k: usize| t.map_vars(depth + k, f).map(rc);
        let kp = |t: &Rt, n: Option<Rt>| n.unwrap_or_else(|| t.clone());
        match self {
            Term::Var(i) => f(*i, depth),
            Term::NatTy | Term::Zero | Term::BaseTy(_) | Term::BaseVertex(_) | Term::BaseEdge(_) => None,
            Term::Pi(a, b) | Term::Lam(a, b) | Term::Sigma(a, b) | Term::App(a, b) => {
                let k = usize::from(!matches!(self, Term::App(..)));
                let (na, nb) = (go(a, 0), go(b, k));
                if na.is_none() && nb.is_none() {
                    return None;
                }
                let (a, b) = (kp(a, na), kp(b, nb));
                Some(match self {
                    Term::Pi(..) => Term::Pi(a, b),
                    Term::Lam(..) => Term::Lam(a, b),
                    Term::Sigma(..) => Term::Sigma(a, b),
                    _ => Term::App(a, b),
                })
            }
            Term::Pair(a, b, c) | Term::Id(a, b, c) => {
                let (na, nb, nc) = (go(a, 0), go(b, 0), go(c, 0));
                if na.is_none() && nb.is_none() && nc.is_none() {
                    return None;
                }
                let (a, b, c) = (kp(a, na), kp(b, nb), kp(c, nc));
                Some(match self {
                    Term::Pair(..) => Term::Pair(a, b, c),
                    _ => Term::Id(a, b, c),
                })
            }
            Term::Proj0(a) | Term::Proj1(a) | Term::Refl(a) | Term::Succ(a) => {
                let a = go(a, 0)?;
                Some(match self {
                    Term::Proj0(_) => Term::Proj0(a),
                    Term::Proj1(_) => Term::Proj1(a),
                    Term::Refl(_) => Term::Refl(a),
                    _ => Term::Succ(a),
                })
            }
            Term::J {
                motive,
                base,
                lhs,
                rhs,
                path,
            } => {
                let ns = [go(motive, 3), go(base, 1), go(lhs, 0), go(rhs, 0), go(path, 0)];
                if ns.iter().all(Option::is_none) {
                    return None;
                }
                let [m, b, l, r, p] = ns;
                Some(Term::J {
                    motive: kp(motive, m),
                    base: kp(base, b),
                    lhs: kp(lhs, l),
                    rhs: kp(rhs, r),
                    path: kp(path, p),
                })
            }
            Term::Rec {
                motive,
                zcase,
                scase,
                scrut,
            } => {
                let ns = [go(motive, 1), go(zcase, 0), go(scase, 2), go(scrut, 0)];
                if ns.iter().all(Option::is_none) {
                    return None;
                }
                let [m, z, sc, n] = ns;
                Some(Term::Rec {
                    motive: kp(motive, m),
                    zcase: kp(zcase, z),
                    scase: kp(scase, sc),
                    scrut: kp(scrut, n),
                })
            }
            Term::RSig {
                motive,
                branch,
                scrut,
            } => {
                let ns = [go(motive, 1), go(branch, 2), go(scrut, 0)];
                if ns.iter().all(Option::is_none) {
                    return None;
                }
                let [m, b, sc] = ns;
                Some(Term::RSig {
                    motive: kp(motive, m),
                    branch: kp(branch, b),
                    scrut: kp(scrut, sc),
                })
            }
        }
    }

    fn mapped(&self, f: &impl Fn(usize, usize) -> Option<Term>) -> Term {
        self.map_vars(0, f).unwrap_or_else(|| self.clone())
    }

    /// True when some free variable has index `>= from` (at the top level).
    pub fn has_free_from(&self, from: usize) -> bool {
        fn go(t: &Term, depth: usize, from: usize) -> bool {
            match t {
                Term::Var(i) => *i >= depth + from,
                _ => {
                    let mut hit = false;
                    t.for_each_child(&mut |c, k| hit = hit || go(c, depth + k, from));
                    hit
                }
            }
        }
        go(self, 0, from)
    }

    /// True when the term has no free variables.
    pub fn is_closed(&self) -> bool {
        !self.has_free_from(0)
    }

    /// True when some free variable with index `< below` occurs.
    pub fn mentions_below(&self, below: usize) -> bool {
        fn go(t: &Term, depth: usize, below: usize) -> bool {
            match t {
                Term::Var(i) => *i >= depth && *i < depth + below,
                _ => {
                    let mut hit = false;
                    t.for_each_child(&mut |c, k| hit = hit || go(c, depth + k, below));
                    hit
                }
            }
        }
        go(self, 0, below)
    }
}

/// Adds `amount` to every free index `>= cutoff`.
pub fn shift(t: &Term, amount: usize, cutoff: usize) -> Term {
    if amount == 0 {
        return t.clone();
    }
    t.mapped(&|i, d| (i >= d + cutoff).then(|| Term::Var(i + amount)))
}

/// Replaces `Var(target)` by `s` and closes the gap left by the removed binder.
/// `s` lives in the context of `t` with that binder removed.
pub fn substitute(t: &Term, target: usize, s: &Term) -> Term {
    t.mapped(&|i, d| {
        if i == target + d {
            Some(shift(s, d, 0))
        } else if i > target + d {
            Some(Term::Var(i - 1))
        } else {
            None
        }
    })
}

/// Simultaneous substitution for the innermost block of `old_len` variables.
///
/// `image(p, new_len)` gives the replacement for block position `p`
/// (0 = outermost) as a term in the outer context extended by a fresh block of
/// `new_len` variables. Variables outside the block are renumbered accordingly.
pub fn subst_block(
    t: &Term,
    old_len: usize,
    new_len: usize,
    image: &impl Fn(usize) -> Term,
) -> Term {
    t.mapped(&|i, d| {
        if i < d {
            None
        } else if i - d < old_len {
            let p = old_len - 1 - (i - d);
            Some(shift(&image(p), d, 0))
        } else if old_len == new_len {
            None
        } else {
            Some(Term::Var(i - old_len + new_len))
        }
    })
}

/// Instantiates the `args.len()` innermost binders of `body` with `args`
/// (outermost first). The arguments live in the outer context.
pub fn instantiate(body: &Term, args: &[Term]) -> Term {
    subst_block(body, args.len(), 0, &|p| args[p].clone())
}

/// Like [`instantiate`] for a body living under `under` further binders.
pub fn instantiate_under(body: &Term, args: &[Term], under: usize) -> Term {
    let n = args.len();
    body.mapped(&|i, d| {
        let depth = d + under;
        if i < depth {
            None
        } else if i - depth < n {
            Some(shift(&args[n - 1 - (i - depth)], depth, 0))
        } else {
            Some(Term::Var(i - n))
        }
    })
}

/// Anything that can type de Bruijn variables: a context in some representation.
pub trait Scope: Sized {
    /// Type of `Var(index)`, weakened to the full scope.
    fn lookup(&self, index: usize) -> Option<Term>;
    fn len(&self) -> usize;
    fn extended(&self, ty: Term) -> Self;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl Scope for Context {
    fn lookup(&self, index: usize) -> Option<Term> {
        Context::lookup(self, index)
    }

    fn len(&self) -> usize {
        Context::len(self)
    }

    fn extended(&self, ty: Term) -> Self {
        Context::extended(self, ty)
    }
}

/// A telescope of types, outermost first; entry `k` may mention only the `k`
/// preceding entries.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Context {
    entries: Vec<Term>,
}

impl Context {
    pub fn new() -> Self {
        Context::default()
    }

    pub fn from_entries(entries: Vec<Term>) -> Self {
        Context { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Term] {
        &self.entries
    }

    pub fn push(&mut self, ty: Term) {
        self.entries.push(ty);
    }

    pub fn extended(&self, ty: Term) -> Context {
        let mut c = self.clone();
        c.push(ty);
        c
    }

    /// Type of `Var(index)`, weakened to the full context.
    pub fn lookup(&self, index: usize) -> Option<Term> {
        let n = self.entries.len();
        if index >= n {
            return None;
        }
        Some(shift(&self.entries[n - 1 - index], index + 1, 0))
    }

    /// Checks that entry `k` mentions only indices `< k`.
    pub fn is_well_scoped(&self) -> bool {
        self.entries
            .iter()
            .enumerate()
            .all(|(k, t)| !t.has_free_from(k))
    }
}


/// Per-node data keyed by node address. Each entry keeps a shallow copy of its
/// node, so an address reused by a different term starts a fresh entry.
#[derive(Debug)]
pub struct NodeMemo<V> {
    entries: FxHashMap<usize, (Term, V)>,
}

impl<V> Default for NodeMemo<V> {
    fn default() -> Self {
        NodeMemo {
            entries: FxHashMap::default(),
        }
    }
}

impl<V: Default> NodeMemo<V> {
    pub fn entry(&mut self, t: &Term) -> &mut V {
        let key = t as *const Term as usize;
        let e = self.entries.entry(key).or_insert_with(|| (t.clone(), V::default()));
        if e.0 != *t {
            *e = (t.clone(), V::default());
        }
        &mut e.1
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
