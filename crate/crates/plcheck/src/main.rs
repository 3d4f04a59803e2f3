use clap::Parser;

fn main() -> std::process::ExitCode {
    let cli = plcheck::Cli::parse();
    std::process::ExitCode::from(plcheck::run(cli))
}
