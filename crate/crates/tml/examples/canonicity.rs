//! Canonical numerals with proofs, for naturals that do not normalize.

use tml::kernel::normalize;
use tml::parser::{parse_term, print_term};
use tml::retract::canon_nat;
use tml::Theory;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let th = Theory::with("T1", &["a", "b", "c"], &[("f", "a", "b"), ("e", "a", "a"), ("g", "b", "c")])?;
    // Transport of 2 along the loop 'e is stuck for the kernel.
    let t = parse_term("(J ((x y z) Nat) ((x) (s (s z))) 'a 'a 'e)", &th)?;
    println!("normal form: {}", print_term(&normalize(&th, &t)?));
    let (n, proof) = canon_nat(&th, &t)?;
    println!("numeral: {}", print_term(&n));
    println!("proof size: {} nodes", proof.size());
    Ok(())
}
