use std::process::ExitCode;

fn main() -> ExitCode {
    let out = std::io::stdout();
    let err = std::io::stderr();
    let code = lprim_cli::run(std::env::args_os(), &mut out.lock(), &mut err.lock());
    ExitCode::from(code as u8)
}
