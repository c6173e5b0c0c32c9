//! Evaluation into the groupoid model and the closure back into terms.

use tml::model::{closure_term, eval_closed};
use tml::parser::{parse_term, print_term};
use tml::Theory;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let th = Theory::with("T1", &["a", "b", "c"], &[("f", "a", "b"), ("e", "a", "a"), ("g", "b", "c")])?;
    for src in [
        "'f",
        "(J ((x y z) G) ((x) 'b) 'a 'a 'e)",
        "(rec ((n) Nat) (s z) ((x y) (s (s y))) (s (s z)))",
        "(pair 'c (s z) (Sigma (x G) Nat))",
    ] {
        let t = parse_term(src, &th)?;
        let v = eval_closed(&th, &t)?;
        println!("{src}\n  value {v}");
        if let Ok(back) = closure_term(&th, &v) {
            println!("  closure {}", print_term(&back));
        }
    }
    Ok(())
}
