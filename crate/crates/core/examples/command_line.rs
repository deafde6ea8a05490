// Drives the command line in-process on the JSON files in `examples/data`.

use rhobisim::cli::execute;

pub fn run_example() -> rhobisim::Result<()> {
    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data");
    let runs: [&[&str]; 3] = [
        &["gfp", "branch_late.json", "branch_early.json", "--logic", "trace"],
        &["check", "wa_small.json", "wa_shift.json", "wa_rel.json"],
        &["compose", "loop1.json", "loop2.json", "loop3.json", "loop12.json", "loop23.json"],
    ];
    for args in runs {
        let args: Vec<String> = args
            .iter()
            .map(|a| if a.ends_with(".json") { format!("{data}/{a}") } else { a.to_string() })
            .collect();
        let out = execute(&args);
        println!("$ rhobisim {}  (exit {})", args[0], out.code);
        print!("{}{}", out.stdout, out.stderr);
        if out.code == 2 {
            return Err(rhobisim::Error::Usage(out.stderr));
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("command_line");
}
