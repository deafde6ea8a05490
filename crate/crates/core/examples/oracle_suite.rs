// Runs the engines against the brute-force oracles on seeded families.

use rhobisim::oracle::{run_oracle_suite, InstanceFamily};

pub fn run_example() -> rhobisim::Result<()> {
    for spec in ["lts:2x3@20/2", "kripke:3x3@20/1", "wa:3x2@20/2"] {
        let family: InstanceFamily = spec.parse()?;
        let r = run_oracle_suite(&family)?;
        println!("{:16} {} instances, {} checks, {} mismatches", r.family, r.instances, r.checks, r.mismatches.len());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("oracle_suite");
}
