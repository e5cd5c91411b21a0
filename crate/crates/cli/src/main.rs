use clap::Parser;

fn main() {
    let cli = soficshift_cli::Cli::parse();
    std::process::exit(soficshift_cli::run(cli));
}
