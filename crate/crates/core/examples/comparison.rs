// T-bisimilarity, precocongruence, behavioural equivalence, logical
// equivalence and ρ-bisimilarity side by side.

use rhobisim::logics::Logic;
use rhobisim::models::Lts;
use rhobisim::zoo::compare;

pub fn run_example() -> rhobisim::Result<()> {
    let p = Lts::from_edges(4, &["a", "b", "c"], &[(0, 0, 1), (1, 1, 2), (1, 2, 3)])?;
    let q = Lts::from_edges(5, &["a", "b", "c"], &[(0, 0, 1), (0, 0, 2), (1, 1, 3), (2, 2, 4)])?;
    for name in ["hm", "trace"] {
        let c = compare(&Logic::by_name(name)?, &p, &q)?;
        println!("[{name}]");
        for (i, (n, r)) in c.relations.iter().enumerate() {
            let row: Vec<&str> = c.table[i].iter().map(|x| x.symbol()).collect();
            println!("  {n:24} {:2} pairs  {}", r.len(), row.join(" "));
        }
        for (n, ok) in &c.checks {
            println!("  {n} holds: {ok}");
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("comparison");
}
