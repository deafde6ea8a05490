//! Every runnable example must run to completion.

mod check_relation {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/check_relation.rs"));
}

mod greatest_bisimulation {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/greatest_bisimulation.rs"));
}

mod trace_logic {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/trace_logic.rs"));
}

mod kripke_models {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/kripke_models.rs"));
}

mod weighted_automata {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/weighted_automata.rs"));
}

mod comparison {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/comparison.rs"));
}

mod lattice {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/lattice.rs"));
}

mod translation {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/translation.rs"));
}

mod formulas {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/formulas.rs"));
}

mod oracle_suite {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/oracle_suite.rs"));
}

mod command_line {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/command_line.rs"));
}

#[test]
fn check_relation_runs() {
    check_relation::run_example().expect("check_relation");
}

#[test]
fn greatest_bisimulation_runs() {
    greatest_bisimulation::run_example().expect("greatest_bisimulation");
}

#[test]
fn trace_logic_runs() {
    trace_logic::run_example().expect("trace_logic");
}

#[test]
fn kripke_models_runs() {
    kripke_models::run_example().expect("kripke_models");
}

#[test]
fn weighted_automata_runs() {
    weighted_automata::run_example().expect("weighted_automata");
}

#[test]
fn comparison_runs() {
    comparison::run_example().expect("comparison");
}

#[test]
fn lattice_runs() {
    lattice::run_example().expect("lattice");
}

#[test]
fn translation_runs() {
    translation::run_example().expect("translation");
}

#[test]
fn formulas_runs() {
    formulas::run_example().expect("formulas");
}

#[test]
fn oracle_suite_runs() {
    oracle_suite::run_example().expect("oracle_suite");
}

#[test]
fn command_line_runs() {
    command_line::run_example().expect("command_line");
}
