use clap::{CommandFactory, Parser};
use pubbias_cli::cli::{run, Cli};
use pubbias_cli::CliError;

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        eprintln!("error: {e}");
        if let CliError::Usage(_) = e {
            eprintln!("\n{}", Cli::command().render_usage());
        }
        std::process::exit(e.exit_code());
    }
}
