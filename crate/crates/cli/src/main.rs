use clap::Parser;
use horizon_entropy_cli::{run_cli, Args};

fn main() {
    let args = Args::parse();
    std::process::exit(run_cli(&args));
}
