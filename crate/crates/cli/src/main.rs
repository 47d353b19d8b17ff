use clap::Parser;

fn main() {
    std::process::exit(dhl_cli::run(dhl_cli::Cli::parse()));
}
