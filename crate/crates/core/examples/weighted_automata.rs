// Linear weighted automata over the rationals: subspace relations, dual
// pairs and the greatest linear bisimulation.

use rhobisim::linalg::{format_rational, ratio, Matrix, Rational};
use rhobisim::linear::{check_linear_bisim, dual_pairs, greatest_linear_bisim, observability_kernel, SubspaceRelation};
use rhobisim::logics::Logic;
use rhobisim::models::WeightedAutomaton;

fn show(v: &[Rational]) -> String {
    v.iter().map(format_rational).collect::<Vec<_>>().join(" ")
}

pub fn run_example() -> rhobisim::Result<()> {
    let w1 = WeightedAutomaton::new(vec![ratio(1, 2)], vec![("a".into(), Matrix::from_i64(&[&[0]]))])?;
    let w2 = WeightedAutomaton::new(
        vec![ratio(1, 2), ratio(0, 1)],
        vec![("a".into(), Matrix::from_i64(&[&[0, 1], &[0, 0]]))],
    )?;
    let logic = Logic::by_name("linear-hm")?;
    let (g, report) = greatest_linear_bisim(&logic, &w1, &w2)?;
    println!("gfp after {} iterations, dimension {}", report.iterations, g.rank());
    for row in g.basis().rows() {
        println!("  basis  {}", show(row));
    }
    for (g1, g2) in dual_pairs(&g).iter() {
        println!("  dual   {} | {}", show(g1), show(g2));
    }
    println!("observability kernel agrees: {}", observability_kernel(&w1, &w2)? == g);

    let full = SubspaceRelation::full(1, 2);
    let r = check_linear_bisim(&logic, &w1, &w2, &full)?;
    println!("full space passes: {}  witness: {:?}", r.verdict, r.witness.is_some());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("weighted_automata");
}
