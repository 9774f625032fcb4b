use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let env_tol = std::env::var(vfrac_cli::QUAD_TOL_ENV).ok();
    let code = vfrac_cli::execute(
        std::env::args_os().skip(1),
        env_tol.as_deref(),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    );
    ExitCode::from(code as u8)
}
