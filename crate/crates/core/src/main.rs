use rhobisim::cli;

fn main() {
    if let Err(e) = cli::configure_threads() {
        eprintln!("error: {e}");
        std::process::exit(cli::exit::USAGE);
    }
    let args: Vec<String> = std::env::args().skip(1).collect();
    let out = cli::execute(&args);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    std::process::exit(out.code);
}
