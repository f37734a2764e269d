use std::io::Write;

fn main() {
    let outcome = tiltlab::cli::main_with_args(std::env::args_os());
    let mut stream: Box<dyn Write> = if outcome.status == 0 { Box::new(std::io::stdout()) } else { Box::new(std::io::stderr()) };
    let _ = stream.write_all(outcome.output.as_bytes());
    std::process::exit(outcome.status);
}
