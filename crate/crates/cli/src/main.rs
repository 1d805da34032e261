use std::process::ExitCode;

use adc_cli::{run, Args};
use clap::Parser;

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(out) => {
            for f in &out.files {
                println!("wrote {}", f.display());
            }
            println!("{}", out.summary);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("adc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
