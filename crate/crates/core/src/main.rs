use clap::Parser;
use guided_spsa::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
