use clap::Parser;
use gapfield::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
