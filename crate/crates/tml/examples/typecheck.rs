//! Parsing, type checking, normalization and conversion.

use tml::jterms::path_compose;
use tml::kernel::{convertible, infer_type, normalize};
use tml::parser::{parse_term, parse_theory, print_term};
use tml::{Context, Term};

const THEORY: &str = "theory T1\nvertex a\nvertex b\nvertex c\nedge f : a -> b\nedge e : a -> a\nedge g : b -> c\n";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let th = parse_theory(THEORY)?;
    let ctx = Context::new();

    let t = parse_term("(app (lam (x G) (refl x)) 'a)", &th)?;
    println!("{} : {}", print_term(&t), print_term(&infer_type(&th, &ctx, &t)?));
    println!("normal form: {}", print_term(&normalize(&th, &t)?));

    // Paths in G are compared by their reduced words: the inverse of the loop
    // 'e is neither refl nor 'e, but composing it with 'e gives refl.
    let inv = "(app (J ((x y z) (Pi (w (Id G x 'a)) (Id G y 'a))) ((x) (lam (w (Id G x 'a)) w)) 'a 'a 'e) (refl 'a))";
    let p = parse_term(inv, &th)?;
    let ty = parse_term("(Id G 'a 'a)", &th)?;
    println!("e^ is refl: {}", convertible(&th, &ctx, &ty, &p, &parse_term("(refl 'a)", &th)?)?);
    println!("e^ is e:    {}", convertible(&th, &ctx, &ty, &p, &parse_term("'e", &th)?)?);
    let back = path_compose(&th, &ctx, &Term::base_ty(), &p, &Term::edge("e"))?;
    println!("e^ . e is refl: {}", convertible(&th, &ctx, &ty, &back, &parse_term("(refl 'a)", &th)?)?);

    match infer_type(&th, &ctx, &parse_term("(app 'a 'b)", &th)?) {
        Ok(_) => unreachable!(),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
