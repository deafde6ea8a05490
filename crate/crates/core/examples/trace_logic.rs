// a(b+c) against ab+ac: trace formulas cannot tell the roots apart, yet the
// roots are not trace-ρ-bisimilar.

use rhobisim::engine::greatest_rho_bisim;
use rhobisim::logics::{enumerate_formulas_over, eval_formula, set_theory_kernel, Logic, Predicate};
use rhobisim::models::{Lts, Model};

pub fn run_example() -> rhobisim::Result<()> {
    let p = Lts::from_edges(4, &["a", "b", "c"], &[(0, 0, 1), (1, 1, 2), (1, 2, 3)])?;
    let q = Lts::from_edges(5, &["a", "b", "c"], &[(0, 0, 1), (0, 0, 2), (1, 1, 3), (2, 2, 4)])?;
    let trace = Logic::by_name("trace")?;
    let kernel = set_theory_kernel(&trace, &p, &q)?;
    let (gfp, _) = greatest_rho_bisim(&trace, &p, &q)?;
    println!("roots logically equivalent: {}", kernel.contains(0, 0));
    println!("roots rho-bisimilar:        {}", gfp.contains(0, 0));

    let (mp, mq) = (Model::Lts(p), Model::Lts(q));
    for phi in enumerate_formulas_over(&trace, 3, &mp, &mq)? {
        let (Predicate::Set(a), Predicate::Set(b)) = (eval_formula(&trace, &mp, &phi)?, eval_formula(&trace, &mq, &phi)?) else {
            unreachable!()
        };
        println!("  {:12} p0:{} q0:{}", phi.to_string(), a.contains(0), b.contains(0));
    }
    let hm = Logic::by_name("hm")?;
    println!("hm separates the roots: {}", !set_theory_kernel(&hm, mp.as_set().unwrap(), mq.as_set().unwrap())?.contains(0, 0));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("trace_logic");
}
