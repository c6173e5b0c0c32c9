//! Derived J-terms: transport, composition, parameterized and sequential J.

use tml::jterms::{param_j, path_compose, seq_j, seq_transport, Param, TelescopePath};
use tml::kernel::{infer_type, normalize};
use tml::parser::print_term;
use tml::{Context, Term, Theory};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let th = Theory::with("T1", &["a", "b", "c"], &[("f", "a", "b"), ("e", "a", "a"), ("g", "b", "c")])?;
    let ctx = Context::new();
    let (g, v) = (Term::base_ty(), Term::vertex);

    let fg = path_compose(&th, &ctx, &g, &Term::edge("f"), &Term::edge("g"))?;
    println!("f . g : {}", print_term(&infer_type(&th, &ctx, &fg)?));

    // J over a natural-number parameter: the base is the parameter's successor.
    let params = [Param { ty: Term::NatTy, value: Term::numeral(4) }];
    let pj = param_j(&Term::NatTy, &Term::succ(Term::Var(0)), &v("a"), &v("a"), &Term::refl(v("a")), &params);
    println!("param J on refl: {}", print_term(&normalize(&th, &pj)?));

    // Transport of refl a along f through the family Id(G, a, x).
    let path = TelescopePath::single(g.clone(), v("a"), v("b"), Term::edge("f"));
    let tr = seq_transport(&Term::id(g.clone(), v("a"), Term::Var(0)), &path, &Term::refl(v("a")));
    println!("transport : {}", print_term(&infer_type(&th, &ctx, &tr)?));

    let rp = TelescopePath::refl(vec![g.clone(), g.clone()], vec![v("a"), v("c")]);
    let sj = seq_j(&Term::id(g.clone(), Term::Var(1), Term::Var(1)), &Term::refl(Term::Var(0)), &rp, &[]);
    println!("sequential J on refl: {}", print_term(&normalize(&th, &sj)?));
    Ok(())
}
