use clap::Parser;

fn main() {
    let cli = sgpareto::cli::Cli::parse();
    std::process::exit(sgpareto::cli::run(cli));
}
