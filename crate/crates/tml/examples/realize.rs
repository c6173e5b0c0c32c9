//! Realizers of closed terms and their check.

use tml::kernel::{infer_type, normalize};
use tml::parser::{parse_term, print_term};
use tml::realizability::{realize_closed, Realizer, Rz};
use tml::{Context, Theory};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let th = Theory::with("T1", &["a", "b", "c"], &[("f", "a", "b"), ("e", "a", "a"), ("g", "b", "c")])?;
    let rz = Rz::new(&th);
    for src in ["(J ((x y z) G) ((x) 'b) 'a 'a 'e)", "'g", "(lam (x G) x)", "(rec ((n) Nat) z ((x y) (s y)) (s z))"] {
        let t = parse_term(src, &th)?;
        let ty = normalize(&th, &infer_type(&th, &Context::new(), &t)?)?;
        let r = realize_closed(&th, &t)?;
        let shown = match &r {
            Realizer::Base(p) => format!("dense path {}", print_term(p)),
            Realizer::Nat(k, _) => format!("number {k}"),
            other => format!("{other:?}"),
        };
        println!("{src} : {}\n  {shown}\n  check: {:?}", print_term(&ty), rz.check(&r, &t, &ty));
    }
    Ok(())
}
