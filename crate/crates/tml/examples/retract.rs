//! Reports on the deformation retract and the equivalence with the free
//! groupoid, as text and JSON.

use tml::retract::{equivalence_report, retract_report};
use tml::Theory;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let th = Theory::with("T1", &["a", "b", "c"], &[("f", "a", "b"), ("e", "a", "a"), ("g", "b", "c")])?;
    println!("{}", retract_report(&th, 50, 0).to_text());
    let eq = equivalence_report(&th, 50, 0);
    println!("{}", eq.to_text());
    println!("{}", eq.without_timing().to_json());
    Ok(())
}
