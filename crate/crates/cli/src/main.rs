use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    if let Err(msg) = qcost_cli::configure_threads() {
        eprintln!("error[thread-count]: {msg}");
        return ExitCode::from(2);
    }
    let code = qcost_cli::run(
        std::env::args_os().skip(1),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    );
    ExitCode::from(code as u8)
}
