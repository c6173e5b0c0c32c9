//! Connected components are preserved by evaluation.

use tml::harness::{stream, Gen};
use tml::retract::pi0_report;
use tml::{Context, Term, Theory};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let th = Theory::with("Split", &["a", "b", "c", "d"], &[("f", "a", "b"), ("g", "c", "d"), ("l", "c", "c")])?;
    let mut samples: Vec<Term> = th.vertices.iter().map(|v| Term::BaseVertex(v.clone())).collect();
    for i in 0..20 {
        samples.push(Gen::new(&th, stream(0, i)).base(&Context::new(), 3));
    }
    println!("{}", pi0_report(&th, &samples).to_text());
    Ok(())
}
