//! Reduced words of the free groupoid: reduction, composition, inverses and
//! connected components.

use tml::graph::{components, compose, inverse, parse_word_expr, reduce, Letter};
use tml::Theory;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let th = Theory::with("T1", &["a", "b", "c"], &[("f", "a", "b"), ("e", "a", "a"), ("g", "b", "c")])?;

    let raw = [Letter::forward("f"), Letter::forward("g"), Letter::backward("g"), Letter::forward("g")];
    let w = reduce(&th, "a", &raw)?;
    println!("reduce f g g^ g = {w}");

    let loop_e = th.generator("e")?;
    let back = compose(&inverse(&w), &inverse(&loop_e))?;
    println!("(f g)^ . e^ = {back}");
    println!("parsed: {}", parse_word_expr(&th, "e . e^ . f")?);

    for (i, comp) in components(&th).iter().enumerate() {
        let names: Vec<&str> = comp.iter().map(|v| v.as_str()).collect();
        println!("component {i}: {}", names.join(" "));
    }
    Ok(())
}
