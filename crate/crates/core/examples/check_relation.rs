// Checks a hand-written relation between two small LTSs under several
// logics and prints the witness when it fails.

use rhobisim::engine::{check_rho_bisim, Witness};
use rhobisim::logics::Logic;
use rhobisim::models::{Lts, SetCoalgebra};
use rhobisim::relations::Relation;

pub fn run_example() -> rhobisim::Result<()> {
    // x0 -a-> x1, and y0 -a-> y1, y0 -a-> y2
    let m1 = Lts::from_edges(2, &["a"], &[(0, 0, 1)])?;
    let m2 = Lts::from_edges(3, &["a"], &[(0, 0, 1), (0, 0, 2)])?;
    let good = Relation::from_pairs(2, 3, &[(0, 0), (1, 1), (1, 2)])?;
    let bad = Relation::from_pairs(2, 3, &[(0, 0), (1, 1)])?;

    for name in ["trace", "hm", "pml"] {
        let logic = Logic::by_name(name)?;
        for (tag, b) in [("good", &good), ("bad", &bad)] {
            let r = check_rho_bisim(&logic, &m1, &m2, b)?;
            print!("{name:5} {tag:4} -> {}", r.verdict);
            if let Some(Witness::Set { pair, lifting, coherent }) = &r.witness {
                print!("  (x{}, y{}) separated by {lifting}", pair.0, pair.1);
                if let Some(c) = coherent {
                    let l: Vec<_> = c.left.ones().collect();
                    let rr: Vec<_> = c.right.ones().collect();
                    print!(" on {l:?} / {rr:?}");
                }
            }
            println!();
        }
    }
    println!("states: {:?} / {:?}", m1.state_names(), m2.state_names());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("check_relation");
}
