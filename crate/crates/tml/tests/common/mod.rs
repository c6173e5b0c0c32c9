#![allow(dead_code)]

use proptest::prelude::*;
use tml::graph::{Letter, Orientation};
use tml::harness::{gen_theory, GenConfig};
use tml::jterms::{path_compose_raw, path_inverse_raw};
use tml::syntax::Term;
use tml::{Name, Theory};

pub fn th1() -> Theory {
    Theory::with("T1", &["a", "b", "c"], &[("f", "a", "b"), ("e", "a", "a"), ("g", "b", "c")]).unwrap()
}

/// A generated theory with at most 8 vertices and 12 edges.
pub fn theory(seed: u64) -> Theory {
    gen_theory(&GenConfig {
        seed,
        max_vertices: 8,
        max_edges: 12,
        ..GenConfig::default()
    })
    .unwrap()
}

pub fn g() -> Term {
    Term::base_ty()
}

/// Untyped terms over the names of [`th1`] whose variables may be free.
pub fn raw_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        (0usize..6).prop_map(Term::Var),
        Just(Term::NatTy),
        Just(Term::Zero),
        Just(g()),
        prop::sample::select(vec!["a", "b", "c"]).prop_map(Term::vertex),
        prop::sample::select(vec!["f", "e", "g"]).prop_map(Term::edge),
    ];
    leaf.prop_recursive(5, 64, 5, |inner| {
        let t = || inner.clone();
        prop_oneof![
            (t(), t()).prop_map(|(a, b)| Term::pi(a, b)),
            (t(), t()).prop_map(|(a, b)| Term::lam(a, b)),
            (t(), t()).prop_map(|(a, b)| Term::app(a, b)),
            (t(), t()).prop_map(|(a, b)| Term::sigma(a, b)),
            (t(), t(), t()).prop_map(|(a, b, c)| Term::pair(a, b, c)),
            t().prop_map(Term::proj0),
            t().prop_map(Term::proj1),
            (t(), t(), t()).prop_map(|(a, b, c)| Term::id(a, b, c)),
            t().prop_map(Term::refl),
            t().prop_map(Term::succ),
            (t(), t(), t(), t(), t()).prop_map(|(m, b, l, r, p)| Term::j(m, b, l, r, p)),
            (t(), t(), t(), t()).prop_map(|(m, z, s, n)| Term::rec(m, z, s, n)),
            (t(), t(), t()).prop_map(|(m, b, p)| Term::rsig(m, b, p)),
        ]
    })
}

/// Rewrites every variable so that at most `free` variables occur free.
pub fn scoped(t: &Term, free: usize) -> Term {
    t.map_vars(0, &|i, d| {
        let scope = d + free;
        if i < scope {
            None
        } else if scope == 0 {
            Some(Term::vertex("a"))
        } else {
            Some(Term::Var(i % scope))
        }
    })
    .unwrap_or_else(|| t.clone())
}

/// The path term spelling out `letters` from `start`: each letter is its
/// edge or the inverse of its edge, composed from the left onto `refl start`.
pub fn path_of_letters(th: &Theory, start: &Name, letters: &[Letter]) -> (Term, Name) {
    let mut here = start.clone();
    let mut acc = Term::refl(Term::BaseVertex(here.clone()));
    for l in letters {
        let (s, t) = th.endpoints(l.edge.as_str()).unwrap().clone();
        let e = Term::BaseEdge(l.edge.clone());
        let (step, next) = match l.orientation {
            Orientation::Forward => (e, t),
            Orientation::Backward => {
                let inv = path_inverse_raw(&g(), &Term::BaseVertex(s.clone()), &Term::BaseVertex(t.clone()), &e);
                (inv, s)
            }
        };
        acc = path_compose_raw(
            &g(),
            &Term::BaseVertex(start.clone()),
            &Term::BaseVertex(here),
            &Term::BaseVertex(next.clone()),
            &acc,
            &step,
        );
        here = next;
    }
    (acc, here)
}

pub fn contains_j(t: &Term) -> bool {
    if matches!(t, Term::J { .. }) {
        return true;
    }
    let mut found = false;
    t.for_each_child(&mut |c, _| found |= contains_j(c));
    found
}
