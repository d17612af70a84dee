use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = photolink::Cli::parse();
    match photolink::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("photolink: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
