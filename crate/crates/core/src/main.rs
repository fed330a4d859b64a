use std::io::Write;

fn main() {
    let outcome = polybohr::cli::run(std::env::args_os());
    // A closed pipe is not worth a panic; the exit status still reports.
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    std::process::exit(outcome.code);
}
