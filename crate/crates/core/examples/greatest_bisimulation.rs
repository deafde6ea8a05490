// Greatest ρ-bisimulations by fixpoint iteration, cross-checked against
// the brute-force oracle.

use rhobisim::engine::greatest_rho_bisim;
use rhobisim::logics::{Logic, LOGIC_NAMES};
use rhobisim::oracle::{oracle_greatest_bisim, random_lts_pair, seeded};

pub fn run_example() -> rhobisim::Result<()> {
    let mut rng = seeded(8);
    let (m1, m2) = random_lts_pair(&mut rng, 3, 4, 2);
    for name in LOGIC_NAMES {
        let logic = Logic::by_name(name)?;
        if logic.domain() != rhobisim::logics::Domain::Sets {
            continue;
        }
        let (g, report) = greatest_rho_bisim(&logic, &m1, &m2)?;
        let oracle = oracle_greatest_bisim(&logic, &m1, &m2)?;
        let pairs: Vec<_> = g.pairs().collect();
        println!("{name:7} {} iterations, {pairs:?}, oracle agrees: {}", report.iterations, g == oracle);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("greatest_bisimulation");
}
