// Joins, bottom and composition of ρ-bisimulations.

use rhobisim::engine::check_rho_bisim;
use rhobisim::logics::Logic;
use rhobisim::models::Lts;
use rhobisim::relations::{bottom, compose, is_full, join, Relation};

pub fn run_example() -> rhobisim::Result<()> {
    let hm = Logic::by_name("hm")?;
    let one = Lts::from_edges(1, &["a"], &[(0, 0, 0)])?;
    let two = Lts::from_edges(2, &["a"], &[(0, 0, 1), (1, 0, 0)])?;
    let three = Lts::from_edges(3, &["a"], &[(0, 0, 1), (1, 0, 2), (2, 0, 0)])?;

    let b = bottom(1, 2);
    println!("bottom passes: {}", check_rho_bisim(&hm, &one, &two, &b)?.verdict);
    let parts = [
        Relation::from_pairs(1, 2, &[(0, 0)])?,
        Relation::from_pairs(1, 2, &[(0, 1)])?,
    ];
    for p in &parts {
        println!("part {:?} passes: {}", p.pairs().collect::<Vec<_>>(), check_rho_bisim(&hm, &one, &two, p)?.verdict);
    }
    let j = join(1, 2, &parts)?;
    println!("join {:?} passes: {}", j.pairs().collect::<Vec<_>>(), check_rho_bisim(&hm, &one, &two, &j)?.verdict);

    let b23 = Relation::total(2, 3);
    let c = compose(&j, &b23)?;
    println!(
        "composite full: {}, passes: {}",
        is_full(&c),
        check_rho_bisim(&hm, &one, &three, &c)?.verdict
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("lattice");
}
