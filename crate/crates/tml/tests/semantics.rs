mod common;

use common::{contains_j, g, theory};
use tml::graph::{compose, inverse, reduce};
use tml::harness::{combo_types, gen_term, gen_walk, stream, Gen, GenConfig, TypeTarget};
use tml::jterms::{path_compose_raw, path_inverse_raw};
use tml::kernel::{check_type, convertible, infer_type, normalize};
use tml::model::{closure_term, eval_closed, numeral_of, Value};
use tml::realizability::{check_realizes, realize_closed, REnv, Realizer, Rz};
use tml::retract::{alpha_component, canon_nat, closure_of, dense_component, is_dense, naturality_check};
use tml::syntax::instantiate;
use tml::{Context, Term, Theory};

fn term(th: &Theory, seed: u64, target: TypeTarget) -> Term {
    gen_term(th, &GenConfig { seed, target, ..GenConfig::default() }).unwrap()
}

/// Equality of first-order values.
fn same(a: &Value, b: &Value) -> bool {
    match (a, b) {
        (Value::Vertex(x), Value::Vertex(y)) => x == y,
        (Value::Word(x), Value::Word(y)) => x == y,
        (Value::Num(x), Value::Num(y)) => x == y,
        (Value::Pair(a1, b1), Value::Pair(a2, b2)) => same(a1, a2) && same(b1, b2),
        (Value::Triv, Value::Triv) => true,
        _ => false,
    }
}

#[test]
fn closure_is_a_section_of_evaluation() {
    for i in 0..1000u64 {
        let th = theory(i % 20);
        let mut rng = stream(31, i);
        let (s, raw) = gen_walk(&th, &mut rng, 12);
        let w = reduce(&th, &s, &raw).unwrap();
        for v in [Value::Word(w.clone()), Value::Vertex(w.source.clone())] {
            let t = closure_term(&th, &v).unwrap();
            assert!(same(&eval_closed(&th, &t).unwrap(), &v), "{v:?}");
        }
    }
}

#[test]
fn evaluation_is_functorial_on_paths() {
    let ctx = Context::new();
    for i in 0..300u64 {
        let th = theory(i % 10);
        let mut gn = Gen::new(&th, stream(32, i));
        let (a, b, f) = gn.path(&ctx, 3);
        let (c, h) = gn.path_from(&ctx, &b, 3);
        let word = |t: &Term| eval_closed(&th, t).unwrap().as_word().unwrap().clone();
        let fh = path_compose_raw(&g(), &a, &b, &c, &f, &h);
        assert_eq!(word(&fh), compose(&word(&f), &word(&h)).unwrap());
        assert_eq!(word(&path_inverse_raw(&g(), &a, &b, &f)), inverse(&word(&f)));
    }
}

#[test]
fn numerals_commute_with_successor() {
    let ctx = Context::new();
    for i in 0..300u64 {
        let th = theory(i % 10);
        let t = Gen::new(&th, stream(33, i)).nat(&ctx, 3);
        let num = |t: &Term| numeral_of(&eval_closed(&th, t).unwrap()).unwrap();
        assert_eq!(num(&Term::succ(t.clone())), Term::succ(num(&t)));
    }
}

#[test]
fn conversion_is_sound_for_evaluation() {
    let combos = combo_types();
    for i in 0..400u64 {
        let th = theory(i % 20);
        let target = match i % 4 {
            0 => TypeTarget::Base,
            1 => TypeTarget::Path(None),
            2 => TypeTarget::Nat,
            _ => TypeTarget::Exact(combos[(i / 4) as usize % combos.len()].clone()),
        };
        let t = term(&th, 4000 + i, target);
        let u = normalize(&th, &t).unwrap();
        let ty = infer_type(&th, &Context::new(), &t).unwrap();
        assert!(convertible(&th, &Context::new(), &ty, &t, &u).unwrap());
        let (vt, vu) = (eval_closed(&th, &t).unwrap(), eval_closed(&th, &u).unwrap());
        if !matches!(vt, Value::Fun(_)) {
            assert!(same(&vt, &vu), "{t:?}");
        }
    }
}

#[test]
fn generated_terms_realize_soundly() {
    let combos = combo_types();
    for i in 0..300u64 {
        let th = theory(i % 20);
        let target = match i % 4 {
            0 => TypeTarget::Base,
            1 => TypeTarget::Path(None),
            2 => TypeTarget::Nat,
            _ => TypeTarget::Exact(combos[(i / 4) as usize % combos.len()].clone()),
        };
        let t = term(&th, 5000 + i, target);
        let ty = normalize(&th, &infer_type(&th, &Context::new(), &t).unwrap()).unwrap();
        let r = realize_closed(&th, &t).unwrap();
        assert!(check_realizes(&th, &REnv::new(), &r, &t, &ty), "{t:?}");
    }
}

/// `RStar` realizes a path exactly when reindexing the source component
/// along it gives the target component.
#[test]
fn identity_clause_matches_reindexing() {
    let ctx = Context::new();
    for i in 0..200u64 {
        let th = theory(i % 10);
        let mut gn = Gen::new(&th, stream(34, i));
        let (a, b, f) = gn.path(&ctx, 3);
        let ty = Term::id(g(), a.clone(), b.clone());
        let rz = Rz::new(&th);
        let (ra, rb) = (realize_closed(&th, &a).unwrap(), realize_closed(&th, &b).unwrap());
        let moved = rz.reindex(&ra, &g(), &a, &b, &f).unwrap();
        let squares = rz.realizer_eq(&g(), &b, &moved, &rb).unwrap();
        assert_eq!(check_realizes(&th, &REnv::new(), &Realizer::Star, &f, &ty), squares);
        assert!(squares);
    }
}

#[test]
fn recursion_realizers_follow_the_rec_rules() {
    let ctx = Context::new();
    let combos = [Term::NatTy, g()];
    for i in 0..200u64 {
        let th = theory(i % 10);
        let mut gn = Gen::new(&th, stream(35, i));
        let motive = combos[(i % 2) as usize].clone();
        let z = gn.of_type(&ctx, &motive, 2).unwrap();
        let step_ctx = ctx.extended(Term::NatTy).extended(motive.clone());
        let step = match i % 4 {
            0 | 1 => Term::Var(0),
            _ if motive == Term::NatTy => Term::succ(Term::Var(0)),
            _ => gn.base(&step_ctx, 1),
        };
        let n = gn.nat(&ctx, 2);
        let rz = Rz::new(&th);
        let real = |t: &Term| realize_closed(&th, t).unwrap();
        let zero = Term::rec(motive.clone(), z.clone(), step.clone(), Term::Zero);
        check_type(&th, &ctx, &zero, &motive).unwrap();
        assert!(rz.realizer_eq(&motive, &zero, &real(&zero), &real(&z)).unwrap());
        let at_succ = Term::rec(motive.clone(), z.clone(), step.clone(), Term::succ(n.clone()));
        let unfolded = instantiate(&step, &[n.clone(), Term::rec(motive.clone(), z, step.clone(), n)]);
        assert!(rz.realizer_eq(&motive, &at_succ, &real(&at_succ), &real(&unfolded)).unwrap());
    }
}

#[test]
fn components_are_dense_and_natural() {
    let ctx = Context::new();
    for i in 0..300u64 {
        let th = theory(i % 20);
        let t = term(&th, 6000 + i, TypeTarget::Base);
        let alpha = alpha_component(&th, &t).unwrap();
        let tb = closure_term(&th, &eval_closed(&th, &t).unwrap()).unwrap();
        assert!(is_dense(&th, &alpha, &t, &tb).unwrap());
        assert!(dense_component(&th, &t).unwrap());
        let (a, b, f) = Gen::new(&th, stream(36, i)).path(&ctx, 3);
        assert!(naturality_check(&th, &f, &a, &b).unwrap());
    }
}

#[test]
fn closure_is_idempotent() {
    for i in 0..300u64 {
        let th = theory(i % 20);
        let t = term(&th, 7000 + i, TypeTarget::Base);
        let once = closure_of(&th, &t).unwrap();
        assert_eq!(closure_of(&th, &once).unwrap(), once);
        let p = term(&th, 7500 + i, TypeTarget::Path(None));
        let once = closure_term(&th, &eval_closed(&th, &p).unwrap()).unwrap();
        let twice = closure_term(&th, &eval_closed(&th, &once).unwrap()).unwrap();
        assert_eq!(once, twice);
    }
}

#[test]
fn canonicity_proofs_check() {
    for i in 0..200u64 {
        let th = theory(i % 20);
        let t = term(&th, 8000 + i, TypeTarget::Nat);
        let (n, proof) = canon_nat(&th, &t).unwrap();
        assert!(n.as_numeral().is_some());
        check_type(&th, &Context::new(), &proof, &Term::id(Term::NatTy, t, n)).unwrap();
    }
}

#[test]
fn every_generated_term_type_checks() {
    let combos = combo_types();
    for i in 0..2000u64 {
        let th = theory(i % 20);
        let target = match i % 4 {
            0 => TypeTarget::Base,
            1 => TypeTarget::Path(None),
            2 => TypeTarget::Nat,
            _ => TypeTarget::Exact(combos[(i / 4) as usize % combos.len()].clone()),
        };
        let fuel = (i % 5) as u32;
        let t = gen_term(&th, &GenConfig { seed: i, fuel, target: target.clone(), ..GenConfig::default() }).unwrap();
        match target {
            TypeTarget::Exact(want) => check_type(&th, &Context::new(), &t, &want).unwrap(),
            _ => drop(infer_type(&th, &Context::new(), &t).unwrap()),
        }
    }
}

#[test]
fn base_terms_exercise_elimination() {
    for fuel in 3..6u32 {
        let total = 500;
        let with_j = (0..total as u64)
            .filter(|&i| {
                let th = theory(i % 20);
                let t = gen_term(&th, &GenConfig { seed: 10_000 + i, fuel, ..GenConfig::default() }).unwrap();
                contains_j(&t)
            })
            .count();
        assert!(with_j * 10 >= total, "fuel {fuel}: {with_j} of {total} contain J");
    }
}
