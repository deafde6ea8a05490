// Trace formulas translated into Hennessy-Milner logic, and the resulting
// agreement of the two bisimulation notions.

use rhobisim::logics::{eval_formula, parse_formula, Logic};
use rhobisim::models::{Lts, Model};
use rhobisim::zoo::{check_translation_invariance, translate_formula};

pub fn run_example() -> rhobisim::Result<()> {
    let m1 = Lts::from_edges(3, &["a", "b"], &[(0, 0, 1), (1, 1, 2), (2, 0, 0)])?;
    let m2 = Lts::from_edges(3, &["a", "b"], &[(0, 0, 1), (0, 0, 2), (1, 1, 0)])?;
    let model = Model::Lts(m1.clone());
    let (trace, hm) = (Logic::by_name("trace")?, Logic::by_name("hm")?);
    for src in ["T", "<a>T", "<a><b><a>T"] {
        let phi = parse_formula(src)?;
        let tau = translate_formula(&phi)?;
        let same = eval_formula(&trace, &model, &phi)? == eval_formula(&hm, &model, &tau)?;
        println!("{:12} => {:12} same extension: {same}", phi.to_string(), tau.to_string());
    }
    let r = check_translation_invariance(&m1, &m2)?;
    println!(
        "{} relations ({}), trace/hm agree: {}, pml/diamond agree: {}, {} pass",
        r.relations_checked,
        if r.exhaustive { "exhaustive" } else { "sampled" },
        r.trace_hm_equal,
        r.pml_diamond_equal,
        r.passing
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("translation");
}
