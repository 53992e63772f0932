use clap::Parser;
use keygraph_cli::{run, Cli};

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    if let Err(e) = run(cli, &argv, &mut stdout.lock()) {
        eprintln!("keygraph: {e}");
        std::process::exit(e.exit_code());
    }
}
