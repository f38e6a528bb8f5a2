use std::process::ExitCode;

fn main() -> ExitCode {
    let _ = env_logger::Builder::from_env(env_logger::Env::new().filter_or("LOG_LEVEL", "warn")).try_init();
    ExitCode::from(fivedist::cli::run(std::env::args_os()))
}
