use clap::Parser;

fn main() {
    let args = exvdw_cli::Args::parse();
    if let Err(e) = exvdw_cli::run(&args) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
