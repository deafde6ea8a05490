// Kripke models: propositions as nullary liftings, formula evaluation and
// logical equivalence.

use rhobisim::engine::greatest_rho_bisim;
use rhobisim::logics::{eval_formula, parse_formula, theory_kernel, Logic, Predicate};
use rhobisim::models::{KripkeModel, Model};

pub fn run_example() -> rhobisim::Result<()> {
    let k1 = KripkeModel::new(&["w0", "w1"], &[("w0", "w1")], &["p"], &[("w1", vec!["p"])])?;
    let k2 = KripkeModel::new(
        &["v0", "v1", "v2"],
        &[("v0", "v1"), ("v0", "v2"), ("v2", "v2")],
        &["p"],
        &[("v1", vec!["p"]), ("v2", vec!["p"])],
    )?;
    let logic = Logic::by_name("kripke")?;
    let (g, _) = greatest_rho_bisim(&logic, &k1, &k2)?;
    println!("bisimilar pairs: {:?}", g.pairs().collect::<Vec<_>>());

    let (m1, m2) = (Model::Kripke(k1), Model::Kripke(k2));
    for src in ["p", "<R>p", "!<R>!p", "<R><R>T"] {
        let phi = parse_formula(src)?;
        if let (Predicate::Set(a), Predicate::Set(b)) = (eval_formula(&logic, &m1, &phi)?, eval_formula(&logic, &m2, &phi)?) {
            println!("{src:10} {:?} {:?}", a.ones().collect::<Vec<_>>(), b.ones().collect::<Vec<_>>());
        }
    }
    let k = theory_kernel(&logic, &m1, &m2)?;
    println!("kernel: {:?}", k.as_set().unwrap().pairs().collect::<Vec<_>>());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("kripke_models");
}
