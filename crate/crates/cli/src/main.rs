use clap::Parser;
use qdwalk_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            println!("{}", report.summary);
            for p in &report.files {
                println!("wrote {}", p.display());
            }
        }
        Err(e) => {
            eprintln!("qdwalk: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
