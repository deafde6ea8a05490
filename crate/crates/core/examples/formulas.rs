// Enumerating formulas up to a depth and evaluating them.

use rhobisim::logics::{enumerate_formulas, Logic};

pub fn run_example() -> rhobisim::Result<()> {
    let labels = vec!["a".to_string()];
    for (name, depth) in [("trace", 3), ("hm", 2), ("pml", 1)] {
        let fs = enumerate_formulas(&Logic::by_name(name)?, &labels, &[], depth)?;
        println!("{name} up to depth {depth}: {} formulas", fs.len());
        for f in fs.iter().take(6) {
            println!("  {f}");
        }
    }
    let labels = vec!["a".to_string(), "b".to_string()];
    let words = enumerate_formulas(&Logic::by_name("linear-hm")?, &labels, &[], 2)?;
    println!("linear observables: {}", words.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(", "));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("formulas");
}
