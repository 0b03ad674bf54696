use std::io::Write;

fn main() {
    let (code, out) = coeffective::cli::run_command(std::env::args_os());
    let mut stream: Box<dyn Write> = if code == coeffective::cli::EXIT_INPUT {
        Box::new(std::io::stderr())
    } else {
        Box::new(std::io::stdout())
    };
    let _ = stream.write_all(out.as_bytes());
    std::process::exit(code);
}
