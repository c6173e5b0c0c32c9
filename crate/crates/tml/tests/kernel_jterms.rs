mod common;

use common::{g, theory};
use tml::harness::{big_step, gen_term, stream, BigValue, Gen, GenConfig, TypeTarget};
use tml::jterms::{
    action_on_path, dagger, gamma, param_j, path_compose, path_compose_raw, path_inverse, path_inverse_raw, seq_j,
    seq_transport, transport, Param, TelescopePath,
};
use tml::kernel::{check_type, convertible, infer_type, normalize};
use tml::syntax::{instantiate, shift};
use tml::{Context, Term, Theory};

const FUEL: u32 = 3;

fn gen(th: &Theory, seed: u64, i: u64) -> Gen<'_, rand_chacha::ChaCha8Rng> {
    Gen::new(th, stream(seed, i))
}

fn conv(th: &Theory, ty: &Term, t: &Term, u: &Term) -> bool {
    convertible(th, &Context::new(), ty, t, u).unwrap()
}

#[test]
fn conversion_is_an_equivalence() {
    let ctx = Context::new();
    for i in 0..200u64 {
        let th = theory(i % 10);
        let mut gn = gen(&th, 21, i);
        let ts: Vec<Term> = (0..3).map(|_| gn.base(&ctx, FUEL)).collect();
        let ns: Vec<Term> = (0..3).map(|_| gn.nat(&ctx, FUEL)).collect();
        for (ty, xs) in [(g(), &ts), (Term::NatTy, &ns)] {
            for x in xs.iter() {
                assert!(conv(&th, &ty, x, x));
                assert!(conv(&th, &ty, x, &normalize(&th, x).unwrap()));
            }
            for x in xs.iter() {
                for y in xs.iter() {
                    assert_eq!(conv(&th, &ty, x, y), conv(&th, &ty, y, x));
                    for z in xs.iter() {
                        if conv(&th, &ty, x, y) && conv(&th, &ty, y, z) {
                            assert!(conv(&th, &ty, x, z));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn conversion_is_a_congruence() {
    let ctx = Context::new();
    for i in 0..200u64 {
        let th = theory(i % 10);
        let mut gn = gen(&th, 22, i);
        let n = gn.nat(&ctx, FUEL);
        let n2 = normalize(&th, &n).unwrap();
        assert!(conv(&th, &Term::NatTy, &Term::succ(n.clone()), &Term::succ(n2.clone())));
        let t = gn.base(&ctx, FUEL);
        let t2 = normalize(&th, &t).unwrap();
        let f = Term::lam(g(), Term::pair(Term::Var(0), n.clone(), Term::sigma(g(), Term::NatTy)));
        let sig = Term::sigma(g(), Term::NatTy);
        assert!(conv(&th, &sig, &Term::app(f.clone(), t.clone()), &Term::app(f, t2.clone())));
        let idt = Term::id(g(), t.clone(), t.clone());
        assert!(conv(&th, &idt, &Term::refl(t.clone()), &Term::refl(t2.clone())));
        let p = Term::pair(t.clone(), n.clone(), sig.clone());
        let p2 = Term::pair(t2, n2, sig.clone());
        assert!(conv(&th, &sig, &p, &p2));
        assert!(conv(&th, &g(), &Term::proj0(p), &Term::proj0(p2)));
    }
}

/// At `Nat` conversion is normalization, and `J` computes only on `refl`, so
/// a closed natural may stay stuck; the oracle then bounds it from one side.
#[test]
fn nat_conversion_is_sound_for_the_big_step_oracle() {
    let mut numerals = 0;
    for i in 0..300u64 {
        let th = theory(i % 10);
        let cfg = |seed| GenConfig {
            seed,
            target: TypeTarget::Nat,
            ..GenConfig::default()
        };
        let m = gen_term(&th, &cfg(3000 + i)).unwrap();
        let n = gen_term(&th, &cfg(6000 + i)).unwrap();
        let (Ok(BigValue::Num(x)), Ok(BigValue::Num(y))) = (big_step(&m), big_step(&n)) else {
            panic!("oracle fails on {m:?} or {n:?}");
        };
        if conv(&th, &Term::NatTy, &m, &n) {
            assert_eq!(x, y);
        }
        let nm = normalize(&th, &m).unwrap();
        if let Some(k) = nm.as_numeral() {
            numerals += 1;
            assert_eq!(k, x);
            assert!(conv(&th, &Term::NatTy, &m, &Term::numeral(x)));
        }
        assert!(!conv(&th, &Term::NatTy, &m, &Term::numeral(x + 1)));
    }
    assert!(numerals > 150, "only {numerals} of 300 normalize to numerals");
}

#[test]
fn subject_reduction() {
    for i in 0..400u64 {
        let th = theory(i % 20);
        let target = match i % 3 {
            0 => TypeTarget::Base,
            1 => TypeTarget::Path(None),
            _ => TypeTarget::Nat,
        };
        let t = gen_term(&th, &GenConfig { seed: 9000 + i, target, ..GenConfig::default() }).unwrap();
        let ty = infer_type(&th, &Context::new(), &t).unwrap();
        check_type(&th, &Context::new(), &normalize(&th, &t).unwrap(), &ty).unwrap();
    }
}

/// `J((x y q) Id(Id(A,x,y), q, op(q)), refl(refl x), a, b, p)` proves
/// `p = op(p)`; the kernel must then identify the two paths.
fn two_path(a_ty: &Term, op: impl Fn(&Term, &Term, &Term, &Term) -> Term, a: &Term, b: &Term, p: &Term) -> (Term, Term) {
    let a3 = shift(a_ty, 3, 0);
    let (x, y, q) = (Term::Var(2), Term::Var(1), Term::Var(0));
    let motive = Term::id(Term::id(a3.clone(), x.clone(), y.clone()), q.clone(), op(&a3, &x, &y, &q));
    let base = Term::refl(Term::refl(Term::Var(0)));
    (Term::j(motive, base, a.clone(), b.clone(), p.clone()), op(a_ty, a, b, p))
}

#[test]
fn truncation_is_admissible() {
    let ctx = Context::new();
    let right_unit = |t: &Term, x: &Term, y: &Term, q: &Term| path_compose_raw(t, x, y, y, q, &Term::refl(y.clone()));
    let double_inverse = |t: &Term, x: &Term, y: &Term, q: &Term| {
        let qi = path_inverse_raw(t, x, y, q);
        path_inverse_raw(t, y, x, &qi)
    };
    for i in 0..150u64 {
        let th = theory(i % 10);
        let mut gn = gen(&th, 23, i);
        let (a, b, p) = gn.path(&ctx, FUEL);
        let n = gn.nat(&ctx, FUEL);
        let cases = [
            (g(), a.clone(), b.clone(), p.clone()),
            (Term::NatTy, n.clone(), normalize(&th, &n).unwrap(), Term::refl(n.clone())),
        ];
        for (a_ty, l, r, path) in cases {
            for op in [&right_unit as &dyn Fn(&Term, &Term, &Term, &Term) -> Term, &double_inverse] {
                let (proof, other) = two_path(&a_ty, op, &l, &r, &path);
                let idt = Term::id(a_ty.clone(), l.clone(), r.clone());
                check_type(&th, &ctx, &proof, &Term::id(idt.clone(), path.clone(), other.clone())).unwrap();
                assert!(conv(&th, &idt, &path, &other));
            }
        }
    }
}

#[test]
fn groupoid_laws_hold_under_conversion() {
    let ctx = Context::new();
    for i in 0..1000u64 {
        let th = theory(i % 20);
        let mut gn = gen(&th, 24, i);
        let (a, b, f) = gn.path(&ctx, 2);
        let (c, h) = gn.path_from(&ctx, &b, 2);
        let (d, k) = gn.path_from(&ctx, &c, 2);
        let comp = |x: &Term, y: &Term| path_compose(&th, &ctx, &g(), x, y).unwrap();
        let inv = |x: &Term| path_inverse(&th, &ctx, &g(), x).unwrap();
        let id = |x: &Term, y: &Term| Term::id(g(), x.clone(), y.clone());
        assert!(conv(&th, &id(&a, &d), &comp(&comp(&f, &h), &k), &comp(&f, &comp(&h, &k))));
        assert!(conv(&th, &id(&a, &b), &comp(&Term::refl(a.clone()), &f), &f));
        assert!(conv(&th, &id(&a, &b), &comp(&f, &Term::refl(b.clone())), &f));
        assert!(conv(&th, &id(&a, &a), &comp(&f, &inv(&f)), &Term::refl(a.clone())));
        assert!(conv(&th, &id(&b, &b), &comp(&inv(&f), &f), &Term::refl(b.clone())));
    }
}

#[test]
fn builders_type_check_at_their_declared_types() {
    let ctx = Context::new();
    for i in 0..200u64 {
        let th = theory(i % 10);
        let mut gn = gen(&th, 25, i);
        let (a, b, f) = gn.path(&ctx, 2);
        let (c, h) = gn.path_from(&ctx, &b, 2);
        let n = gn.nat(&ctx, 2);
        let id = |x: &Term, y: &Term| Term::id(g(), x.clone(), y.clone());
        let fam = Term::id(g(), shift(&a, 1, 0), Term::Var(0));
        let tr = transport(&fam, &a, &b, &f, &Term::refl(a.clone()));
        check_type(&th, &ctx, &tr, &id(&a, &b)).unwrap();
        check_type(&th, &ctx, &path_compose_raw(&g(), &a, &b, &c, &f, &h), &id(&a, &c)).unwrap();
        check_type(&th, &ctx, &path_inverse_raw(&g(), &a, &b, &f), &id(&b, &a)).unwrap();
        let nat_param = [Param { ty: Term::NatTy, value: n.clone() }];
        check_type(&th, &ctx, &param_j(&Term::NatTy, &Term::succ(Term::Var(0)), &a, &b, &f, &nat_param), &Term::NatTy)
            .unwrap();
        // The second leg starts at `c` transported along the first leg.
        let c2 = transport(&g(), &a, &b, &f, &c);
        let path = TelescopePath::new(
            vec![g(), g()],
            vec![a.clone(), c.clone()],
            vec![b.clone(), c2.clone()],
            vec![f.clone(), Term::refl(c2.clone())],
        );
        path.check(&th, &ctx).unwrap();
        // Over (x0, x1): Id(G, x0, x0) is transported to Id(G, b, b).
        let fam2 = Term::id(g(), Term::Var(1), Term::Var(1));
        let st = seq_transport(&fam2, &path, &Term::refl(a.clone()));
        check_type(&th, &ctx, &st, &id(&b, &b)).unwrap();
        let motive = Term::id(g(), Term::Var(1), Term::Var(1));
        let sj = seq_j(&motive, &Term::refl(Term::Var(0)), &path, &[]);
        check_type(&th, &ctx, &sj, &id(&c2, &c2)).unwrap();
        let act = action_on_path(&g(), &Term::Var(0), &path);
        infer_type(&th, &ctx, &act).unwrap();
        let dg = dagger(&Term::NatTy, &n, &path);
        let tn = seq_transport(&Term::NatTy, &path, &n);
        check_type(&th, &ctx, &dg, &Term::id(Term::NatTy, n.clone(), tn)).unwrap();
        let gm = gamma(&g(), &Term::NatTy, &a, &b, &c, &f, &h, &n);
        infer_type(&th, &ctx, &gm).unwrap();
    }
}

#[test]
fn builders_collapse_on_refl() {
    let ctx = Context::new();
    for i in 0..200u64 {
        let th = theory(i % 10);
        let mut gn = gen(&th, 26, i);
        let a = gn.base(&ctx, 2);
        let b = gn.base(&ctx, 2);
        let n = gn.nat(&ctx, 2);
        let ra = Term::refl(a.clone());
        let nf = |t: &Term| normalize(&th, t).unwrap();
        let fam = Term::id(g(), Term::Var(0), Term::Var(0));
        assert_eq!(nf(&transport(&Term::NatTy, &a, &a, &ra, &n)), nf(&n));
        assert_eq!(nf(&transport(&fam, &a, &a, &ra, &ra)), nf(&ra));
        assert_eq!(nf(&path_inverse_raw(&g(), &a, &a, &ra)), nf(&ra));
        assert_eq!(nf(&path_compose_raw(&g(), &a, &a, &a, &ra, &ra)), nf(&ra));
        let params = [Param { ty: Term::NatTy, value: n.clone() }];
        let phi = Term::succ(Term::Var(0));
        assert_eq!(nf(&param_j(&Term::NatTy, &phi, &a, &a, &ra, &params)), nf(&Term::succ(n.clone())));
        let tel = vec![g(), g(), Term::NatTy];
        let rp = TelescopePath::refl(tel, vec![a.clone(), b.clone(), n.clone()]);
        let motive = Term::NatTy;
        let phi = Term::succ(Term::Var(0));
        let want = instantiate(&phi, &[a.clone(), b.clone(), n.clone()]);
        assert_eq!(nf(&seq_j(&motive, &phi, &rp, &[])), nf(&want));
        assert_eq!(nf(&seq_transport(&Term::NatTy, &rp, &n)), nf(&n));
        assert_eq!(nf(&dagger(&Term::NatTy, &n, &rp)), nf(&Term::refl(n.clone())));
        let gm = gamma(&g(), &Term::NatTy, &a, &a, &a, &ra, &ra, &n);
        assert_eq!(nf(&gm), nf(&Term::refl(n.clone())));
    }
}
