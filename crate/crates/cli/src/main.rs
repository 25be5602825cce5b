use clap::Parser;

fn main() {
    let args = qpurify_cli::Args::parse();
    std::process::exit(qpurify_cli::main_with(&args));
}
