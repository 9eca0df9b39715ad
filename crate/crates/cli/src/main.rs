use clap::Parser;

fn main() {
    let cli = tvcat_cli::Cli::parse();
    let mut stdout = std::io::stdout().lock();
    let code = tvcat_cli::run(&cli, &mut stdout);
    std::process::exit(code);
}
