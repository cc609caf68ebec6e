use clap::Parser;

use skewrank_cli::Cli;

fn main() {
    let cli = Cli::parse();
    let outcome = skewrank_cli::run(&cli);
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    std::process::exit(outcome.code);
}
