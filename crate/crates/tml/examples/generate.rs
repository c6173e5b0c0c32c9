//! Seeded random theories and well-typed closed terms.

use tml::harness::{combo_types, gen_term, gen_theory, GenConfig, TypeTarget};
use tml::kernel::infer_type;
use tml::parser::{print_term, print_theory};
use tml::Context;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let th = gen_theory(&GenConfig { seed: 7, ..GenConfig::default() })?;
    print!("{}", print_theory(&th));
    let targets = [TypeTarget::Base, TypeTarget::Path(None), TypeTarget::Nat, TypeTarget::Exact(combo_types()[0].clone())];
    for (k, target) in targets.into_iter().enumerate() {
        let t = gen_term(&th, &GenConfig { seed: k as u64, fuel: 2, target, ..GenConfig::default() })?;
        println!("{}\n  : {}", print_term(&t), print_term(&infer_type(&th, &Context::new(), &t)?));
    }
    Ok(())
}
