use clap::Parser;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = mbnls_cli::config::Cli::parse();
    std::process::exit(mbnls_cli::run_cli(&cli));
}
