use clap::Parser;
use std::process::exit;

fn main() {
    let cli = match failsim::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help/--version arrive here too; they are not errors.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            exit(code);
        }
    };
    if let Err(err) = failsim::run(cli) {
        eprintln!("error: {err}");
        exit(failsim::exit_code(&err));
    }
}
