use std::io::Write;

fn main() {
    let out = steerage::cli::run(std::env::args_os());
    // Write errors (closed pipe) are ignored; the exit code still reports the result.
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    std::process::exit(out.code);
}
